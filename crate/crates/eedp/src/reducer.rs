//! Router-based irrelevant-cycle reduction and the end-to-end pipeline.
//!
//! The centre vertex construction turns any demand set into a two-star
//! instance over a router's branch vertices; pushed router-cuts isolate
//! the router behind a minimum cut; iterating the two-star solver over
//! disjoint sub-routers collects the cycles a solution can be forced onto,
//! and a leftover cycle becomes an irrelevant-cycle candidate. The stated
//! size thresholds are astronomically large, so every candidate is
//! checked for oracle equivalence before any deletion is committed.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::flow::max_flow_unit;
use crate::format::serialize_instance;
use crate::graph::{euler_restriction, induced_cut, IncidenceDigraph, VertexId};
use crate::normalize::{
    find_small_cut, is_normalized, normalize_degrees, reduce_four_cut, reduce_two_cut,
    SmallCutKind,
};
use crate::oracle::{equivalent, solve_exact, Budget, Verdict};
use crate::path::{euler_decompose, Instance, Trail};
use crate::structure::router::Router;
use crate::twostar::{solve_two_star, TwoStarDemand};
use crate::EedpError;

/// A pushed router-cut: the terminals' side of a minimum cut separating
/// them from some router cycle, inclusion-maximal at minimum order.
#[derive(Debug, Clone)]
pub struct PushedCut {
    pub x: BTreeSet<VertexId>,
    /// `|delta(X)|`, twice the flow value.
    pub order: usize,
    /// Index of a router cycle fully inside the complement.
    pub outside_cycle: usize,
}

/// Computes a pushed router-cut: for each router cycle the minimum cut
/// separating the terminals from it, the best cycle by order, and the
/// canonical maximal source side for inclusion-maximality.
pub fn pushed_router_cut(
    g: &IncidenceDigraph,
    terminals: &BTreeSet<VertexId>,
    router: &Router,
) -> Result<PushedCut, EedpError> {
    let sources: Vec<_> = terminals.iter().map(|&v| (v, u32::MAX)).collect();
    let mut best: Option<PushedCut> = None;
    for (idx, cycle) in router.cycles.iter().enumerate() {
        let verts = cycle.vertex_set(g);
        if !verts.is_disjoint(terminals) {
            continue;
        }
        let sinks: Vec<_> = verts.iter().map(|&v| (v, u32::MAX)).collect();
        let out = max_flow_unit(g, &sources, &sinks);
        let order = 2 * out.value;
        if best.as_ref().map(|b| order < b.order).unwrap_or(true) {
            let cut = induced_cut(g, &out.max_source_side);
            debug_assert_eq!(cut.order(), order, "Eulerian balance around the cut");
            best = Some(PushedCut {
                x: out.max_source_side,
                order,
                outside_cycle: idx,
            });
        }
    }
    best.ok_or_else(|| {
        EedpError::Reduction("every router cycle touches the terminals".into())
    })
}

/// Adds the centre vertex `v` joined both ways to each branch vertex and
/// swaps the demand graph for the two stars around `v`.
pub fn build_gv(
    inst: &Instance,
    router: &Router,
    branching: &[VertexId],
) -> Result<(Instance, TwoStarDemand), EedpError> {
    if branching.len() != router.cycles.len() {
        return Err(EedpError::Reduction(
            "need exactly one branch vertex per router cycle".into(),
        ));
    }
    let distinct: BTreeSet<_> = branching.iter().collect();
    if distinct.len() != branching.len() {
        return Err(EedpError::Reduction("branch vertices repeat".into()));
    }
    let terminals = inst.terminals();
    for (b, cycle) in branching.iter().zip(&router.cycles) {
        if terminals.contains(b) {
            return Err(EedpError::Reduction(format!(
                "branch vertex {b} is a terminal"
            )));
        }
        if !cycle.vertex_set(&inst.supply).contains(b) {
            return Err(EedpError::Reduction(format!(
                "branch vertex {b} is not on its cycle"
            )));
        }
    }
    let mut supply = inst.supply.clone();
    let v = supply.add_vertex();
    for &b in branching {
        supply.add_edge(b, v);
        supply.add_edge(v, b);
    }
    let demand = TwoStarDemand {
        center: v,
        sources: inst.demands.iter().map(|&(_, s)| s).collect(),
        sinks: inst.demands.iter().map(|&(t, _)| t).collect(),
    };
    let gv = demand.to_instance(supply);
    debug_assert!(gv.is_union_eulerian());
    Ok((gv, demand))
}

/// Outcome of the irrelevant-cycle search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrrelevantOutcome {
    /// Index of a router cycle whose deletion is oracle-certified
    /// equivalent.
    Cycle(usize),
    /// Candidates existed but the oracle timed out on all of them.
    Unverified,
    /// The router left no leftover cycle to test.
    NoCandidate,
}

/// Deletes a cycle's edges from the supply, dropping isolated vertices.
pub fn delete_cycle(inst: &Instance, cycle: &Trail) -> Instance {
    let mut supply = inst.supply.clone();
    for &e in &cycle.edges {
        supply.remove_edge(e);
    }
    let isolated: Vec<VertexId> = supply
        .vertices()
        .filter(|&v| supply.degree(v) == 0)
        .collect();
    let terminals = inst.terminals();
    for v in isolated {
        if !terminals.contains(&v) {
            supply.remove_vertex(v).unwrap();
        }
    }
    Instance::new(supply, inst.demands.clone())
}

/// Finds a router cycle whose deletion is provably irrelevant.
///
/// The candidate generator follows the pushed-cut iteration: restrict to
/// the far side of the cut with fresh pendant terminals, repeatedly solve
/// the two-star instance over the surviving cycles, and peel off the first
/// cut-many distinct cycles each solution visits. Whatever remains is a
/// candidate, and a candidate is only ever returned after the exhaustive
/// oracle confirms deletion keeps the answer.
pub fn find_irrelevant_router_cycle(
    inst: &Instance,
    router: &Router,
    min_order: usize,
    budget: Budget,
) -> Result<IrrelevantOutcome, EedpError> {
    if router.order() < min_order {
        return Ok(IrrelevantOutcome::NoCandidate);
    }
    let terminals = inst.terminals();
    let cut = pushed_router_cut(&inst.supply, &terminals, router)?;
    let far_side: BTreeSet<VertexId> = inst
        .supply
        .vertices()
        .filter(|v| !cut.x.contains(v))
        .collect();
    let restriction = euler_restriction(&inst.supply, &far_side, &BTreeSet::new())?;
    let h = &restriction.graph;
    let fresh_sinks: Vec<VertexId> = restriction.out_pendants.iter().map(|&(_, v)| v).collect();
    let fresh_sources: Vec<VertexId> = restriction.in_pendants.iter().map(|&(_, v)| v).collect();
    let rho = fresh_sources.len();

    // Cycles that survived into the restriction.
    let mut pool: Vec<usize> = router
        .cycles
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.vertex_set(&inst.supply).is_subset(&far_side)
                && c.edges.iter().all(|e| h.has_edge(*e))
        })
        .map(|(i, _)| i)
        .collect();

    if rho > 0 {
        loop {
            if pool.len() <= rho {
                break;
            }
            let sub_cycles: Vec<usize> = pool.clone();
            let Some(branching) = pick_branching(h, router, &sub_cycles, &fresh_sources, &fresh_sinks)
            else {
                break;
            };
            let mut supply = h.clone();
            let v = supply.add_vertex();
            for &b in &branching {
                supply.add_edge(b, v);
                supply.add_edge(v, b);
            }
            let demand = TwoStarDemand {
                center: v,
                sources: fresh_sources.clone(),
                sinks: fresh_sinks.clone(),
            };
            let Some(solution) = solve_two_star(&supply, &demand)? else {
                break;
            };
            // First rho distinct pool cycles visited by the solution.
            let visited = first_visited_cycles(&supply, router, &pool, &solution.paths, rho);
            if visited.is_empty() {
                break;
            }
            pool.retain(|i| !visited.contains(i));
        }
    }

    let mut timed_out = false;
    for idx in pool {
        let candidate = delete_cycle(inst, &router.cycles[idx]);
        debug_assert!(candidate.is_union_eulerian());
        match equivalent(inst, &candidate, budget) {
            Ok(true) => return Ok(IrrelevantOutcome::Cycle(idx)),
            Ok(false) => continue,
            Err(_) => timed_out = true,
        }
    }
    Ok(if timed_out {
        IrrelevantOutcome::Unverified
    } else {
        IrrelevantOutcome::NoCandidate
    })
}

fn pick_branching(
    h: &IncidenceDigraph,
    router: &Router,
    cycles: &[usize],
    fresh_sources: &[VertexId],
    fresh_sinks: &[VertexId],
) -> Option<Vec<VertexId>> {
    let forbidden: BTreeSet<VertexId> = fresh_sources
        .iter()
        .chain(fresh_sinks.iter())
        .copied()
        .collect();
    let mut chosen = BTreeSet::new();
    let mut out = Vec::new();
    for &i in cycles {
        let b = router.cycles[i]
            .vertex_set(h)
            .into_iter()
            .find(|v| !forbidden.contains(v) && !chosen.contains(v))?;
        chosen.insert(b);
        out.push(b);
    }
    Some(out)
}

fn first_visited_cycles(
    g: &IncidenceDigraph,
    router: &Router,
    pool: &[usize],
    paths: &[Trail],
    take: usize,
) -> BTreeSet<usize> {
    let members: BTreeMap<usize, BTreeSet<VertexId>> = pool
        .iter()
        .map(|&i| (i, router.cycles[i].vertex_set(g)))
        .collect();
    let mut visited = BTreeSet::new();
    for path in paths {
        for v in path.vertex_walk(g) {
            for (&i, verts) in &members {
                if verts.contains(&v) {
                    visited.insert(i);
                    if visited.len() == take {
                        return visited;
                    }
                }
            }
        }
    }
    visited
}

/// Greedy router mining: peel edge-disjoint cycles off the supply (the
/// residual of a witness when one exists) and grow a family of pairwise
/// vertex-intersecting cycles avoiding the terminals.
pub fn mine_router(inst: &Instance, budget: Budget) -> Option<Router> {
    let residual = match solve_exact(inst, budget) {
        Verdict::Feasible(witness) => {
            let used = witness.edge_set();
            inst.supply.edge_subgraph(|e| !used.contains(&e))
        }
        _ => return None,
    };
    if !residual.is_eulerian() {
        return None;
    }
    let cycles = euler_decompose(&residual).ok()?;
    let terminals = inst.terminals();
    let free: Vec<&Trail> = cycles
        .iter()
        .filter(|c| c.vertex_set(&residual).is_disjoint(&terminals))
        .collect();
    let vsets: Vec<BTreeSet<VertexId>> = free.iter().map(|c| c.vertex_set(&residual)).collect();
    let mut best: Vec<usize> = Vec::new();
    for seed in 0..free.len() {
        let mut clique = vec![seed];
        for j in 0..free.len() {
            if j == seed {
                continue;
            }
            if clique.iter().all(|&i| !vsets[i].is_disjoint(&vsets[j])) {
                clique.push(j);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    if best.len() < 2 {
        return None;
    }
    best.sort();
    Some(Router {
        cycles: best.into_iter().map(|i| free[i].clone()).collect(),
        branching: None,
    })
}

/// One logged pipeline step: `<op> <params> <certificate-hash>`, with the
/// resulting instance size always part of the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogStep {
    pub op: String,
    pub params: String,
    pub size_after: usize,
    pub certificate: String,
}

impl std::fmt::Display for LogStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}size={} {}",
            self.op, self.params, self.size_after, self.certificate
        )
    }
}

fn certificate(inst: &Instance) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_instance(inst).as_bytes());
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Pipeline options.
#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub budget: Budget,
    /// Oracle-check the normalization and cut reductions too (cycle
    /// deletions are always oracle-verified).
    pub verify: bool,
    /// Minimum router order to attempt the irrelevant-cycle argument on.
    pub min_router_order: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            budget: Budget::default(),
            verify: false,
            min_router_order: 3,
        }
    }
}

/// Repeatedly normalizes, applies small-cut reductions, and deletes
/// oracle-certified irrelevant cycles found through routers or the
/// residual-cycle heuristic, until nothing applies.
pub fn reduce_pipeline(
    inst: &Instance,
    config: &PipelineConfig,
) -> Result<(Instance, Vec<LogStep>), EedpError> {
    let mut current = inst.clone();
    let mut log = Vec::new();
    let push = |log: &mut Vec<LogStep>, op: &str, params: String, inst: &Instance| {
        log.push(LogStep {
            op: op.into(),
            params,
            size_after: inst.size(),
            certificate: certificate(inst),
        });
    };
    loop {
        if !is_normalized(&current) {
            let next = normalize_degrees(&current);
            if config.verify {
                check_equivalent(&current, &next, config.budget, "normalize")?;
            }
            push(&mut log, "normalize", String::new(), &next);
            current = next;
            continue;
        }
        if let Some((kind, x)) = find_small_cut(&current) {
            let (op, next) = match kind {
                SmallCutKind::Two => ("reduce-two-cut", reduce_two_cut(&current, &x)?),
                SmallCutKind::Four => ("reduce-four-cut", reduce_four_cut(&current, &x)?),
            };
            if config.verify {
                check_equivalent(&current, &next, config.budget, op)?;
            }
            debug_assert!(next.size() < current.size());
            push(&mut log, op, format!("interior={} ", x.len()), &next);
            current = next;
            continue;
        }
        if let Some(router) = mine_router(&current, config.budget) {
            if router.order() >= config.min_router_order {
                if let IrrelevantOutcome::Cycle(idx) = find_irrelevant_router_cycle(
                    &current,
                    &router,
                    config.min_router_order,
                    config.budget,
                )? {
                    let next = delete_cycle(&current, &router.cycles[idx]);
                    debug_assert!(next.size() < current.size());
                    push(
                        &mut log,
                        "delete-router-cycle",
                        format!("order={} cycle={} ", router.order(), idx),
                        &next,
                    );
                    current = next;
                    continue;
                }
            }
        }
        if let Some(cycle) = irrelevant_cycle_heuristic(&current, config.budget) {
            let next = delete_cycle(&current, &cycle);
            debug_assert!(next.size() < current.size());
            push(
                &mut log,
                "delete-cycle",
                format!("len={} ", cycle.len()),
                &next,
            );
            current = next;
            continue;
        }
        break;
    }
    Ok((current, log))
}

fn check_equivalent(
    a: &Instance,
    b: &Instance,
    budget: Budget,
    op: &str,
) -> Result<(), EedpError> {
    match equivalent(a, b, budget) {
        Ok(true) => Ok(()),
        Ok(false) => Err(EedpError::Reduction(format!(
            "{op} changed the oracle answer; this is a bug"
        ))),
        Err(_) => Err(EedpError::Reduction(format!(
            "oracle timed out verifying {op}"
        ))),
    }
}

/// Oracle-verified deletion of a residual cycle: candidates are the
/// cycles left over by a witness, smallest first; only an equivalence-
/// certified cycle is returned.
fn irrelevant_cycle_heuristic(inst: &Instance, budget: Budget) -> Option<Trail> {
    let residual = match solve_exact(inst, budget) {
        Verdict::Feasible(witness) => {
            let used = witness.edge_set();
            inst.supply.edge_subgraph(|e| !used.contains(&e))
        }
        Verdict::Infeasible => inst.supply.clone(),
        Verdict::Timeout => return None,
    };
    let mut candidates: Vec<Trail> = if residual.is_eulerian() {
        euler_decompose(&residual).ok()?
    } else {
        return None;
    };
    candidates.sort_by_key(|c| (c.len(), c.edges.first().copied()));
    for cycle in candidates {
        let next = delete_cycle(inst, &cycle);
        if let Ok(true) = equivalent(inst, &next, budget) {
            return Some(cycle);
        }
    }
    None
}
