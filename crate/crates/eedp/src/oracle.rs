//! Exhaustive ground-truth solver for edge-disjoint path queries.
//!
//! Depth-first extension of demand paths one edge at a time over unused
//! edges, lowest edge id first, with residual-reachability pruning. The
//! budget counts node expansions, not wall-clock time, so identical inputs
//! always yield identical answers and witnesses.

use std::collections::BTreeSet;

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Instance, Linkage, Trail, TrailKind};

/// Node-expansion budget for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const UNLIMITED: Budget = Budget(u64::MAX);

    fn spend(&mut self) -> bool {
        if self.0 == 0 {
            return false;
        }
        self.0 -= 1;
        true
    }
}

impl Default for Budget {
    fn default() -> Self {
        // Generous for desk-scale instances; callers override for sweeps.
        Budget(5_000_000)
    }
}

/// Search verdict; `Timeout` never mislabels feasibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Linkage),
    Infeasible,
    Timeout,
}

impl Verdict {
    pub fn is_feasible(&self) -> Option<bool> {
        match self {
            Verdict::Feasible(_) => Some(true),
            Verdict::Infeasible => Some(false),
            Verdict::Timeout => None,
        }
    }
}

struct Searcher<'a> {
    g: &'a IncidenceDigraph,
    /// (source, target) per routing request.
    pairs: Vec<(VertexId, VertexId)>,
    used: BTreeSet<EdgeId>,
    paths: Vec<Vec<EdgeId>>,
    budget: Budget,
    cap: usize,
    found: Vec<Linkage>,
    exhausted: bool,
}

impl<'a> Searcher<'a> {
    fn new(
        g: &'a IncidenceDigraph,
        pairs: Vec<(VertexId, VertexId)>,
        budget: Budget,
        cap: usize,
    ) -> Self {
        Searcher {
            g,
            pairs,
            used: BTreeSet::new(),
            paths: Vec::new(),
            budget,
            cap,
            found: Vec::new(),
            exhausted: true,
        }
    }

    fn reachable(&self, from: VertexId, to: VertexId, skip_empty: bool) -> bool {
        if from == to && !skip_empty {
            return true;
        }
        // One-step lookahead for cycle demands: leave `from`, then reach `to`.
        let reach = self
            .g
            .reachable_from(from, |e| !self.used.contains(&e));
        if skip_empty && from == to {
            return self.g.out_edges(from).any(|e| {
                !self.used.contains(&e) && {
                    let h = self.g.head(e).unwrap();
                    h == to
                        || self
                            .g
                            .reachable_from(h, |e2| !self.used.contains(&e2) && e2 != e)
                            .contains(&to)
                }
            });
        }
        reach.contains(&to)
    }

    fn prune(&self, demand_index: usize, at: VertexId) -> bool {
        let (_, t) = self.pairs[demand_index];
        let fresh = at == self.pairs[demand_index].0 && self.paths[demand_index].is_empty();
        if !self.reachable(at, t, fresh && at == t) {
            return true;
        }
        for &(s, t) in self.pairs.iter().skip(demand_index + 1) {
            if !self.reachable(s, t, s == t) {
                return true;
            }
        }
        false
    }

    /// Returns false when the search should stop (cap reached).
    fn route(&mut self, demand_index: usize, at: VertexId) -> bool {
        if demand_index == self.pairs.len() {
            self.found.push(self.snapshot());
            return self.found.len() < self.cap;
        }
        let (s, t) = self.pairs[demand_index];
        // Stopping at the first arrival is complete: any solution whose path
        // passes through its target can be truncated there, freeing edges.
        if at == t && !self.paths[demand_index].is_empty() {
            return self.route(demand_index + 1, self.pairs.get(demand_index + 1).map_or(t, |p| p.0));
        }
        let _ = s;
        if self.prune(demand_index, at) {
            return true;
        }
        let candidates: Vec<EdgeId> = self
            .g
            .out_edges(at)
            .filter(|e| !self.used.contains(e))
            .collect();
        for e in candidates {
            if !self.budget.spend() {
                self.exhausted = false;
                return false;
            }
            let h = self.g.head(e).unwrap();
            self.used.insert(e);
            self.paths[demand_index].push(e);
            let keep_going = self.route(demand_index, h);
            self.paths[demand_index].pop();
            self.used.remove(&e);
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn snapshot(&self) -> Linkage {
        let paths = self
            .paths
            .iter()
            .zip(&self.pairs)
            .map(|(edges, &(s, t))| Trail {
                edges: edges.clone(),
                kind: if s == t { TrailKind::Cycle } else { TrailKind::Path },
            })
            .collect();
        Linkage { paths }
    }

    fn run(mut self) -> (Vec<Linkage>, bool) {
        self.paths = vec![Vec::new(); self.pairs.len()];
        let start = self.pairs.first().map_or(VertexId(0), |p| p.0);
        if self.pairs.is_empty() {
            return (vec![Linkage::default()], true);
        }
        for &(s, t) in &self.pairs {
            if !self.g.has_vertex(s) || !self.g.has_vertex(t) {
                return (Vec::new(), true);
            }
        }
        self.route(0, start);
        (self.found, self.exhausted)
    }
}

/// Searches for pairwise edge-disjoint trails realising each `(source,
/// target)` pair, collecting up to `cap` distinct solutions.
///
/// No Eulerian assumption is made on `g`; this is the raw engine behind the
/// instance-level oracle and the cross tester.
pub fn search_pairs(
    g: &IncidenceDigraph,
    pairs: &[(VertexId, VertexId)],
    budget: Budget,
    cap: usize,
) -> (Vec<Linkage>, bool) {
    Searcher::new(g, pairs.to_vec(), budget, cap).run()
}

/// Exhaustive decision for an instance: a witnessing linkage, a proof of
/// infeasibility by exhaustion, or a timeout.
pub fn solve_exact(inst: &Instance, budget: Budget) -> Verdict {
    let pairs: Vec<_> = inst.demands.iter().map(|&(t, s)| (s, t)).collect();
    let (mut found, exhausted) = search_pairs(&inst.supply, &pairs, budget, 1);
    match (found.pop(), exhausted) {
        (Some(linkage), _) => {
            debug_assert!(inst.validate_solution(&linkage).is_ok());
            Verdict::Feasible(linkage)
        }
        (None, true) => Verdict::Infeasible,
        (None, false) => Verdict::Timeout,
    }
}

/// Up to `cap` distinct solutions. The boolean reports whether the search
/// space was exhausted, which together with a count of one certifies
/// uniqueness.
pub fn enumerate_linkages(inst: &Instance, cap: usize, budget: Budget) -> (Vec<Linkage>, bool) {
    let pairs: Vec<_> = inst.demands.iter().map(|&(t, s)| (s, t)).collect();
    search_pairs(&inst.supply, &pairs, budget, cap)
}

/// True iff the two instances have the same feasibility answer.
pub fn equivalent(a: &Instance, b: &Instance, budget: Budget) -> Result<bool, Verdict> {
    let va = solve_exact(a, budget);
    let vb = solve_exact(b, budget);
    match (va.is_feasible(), vb.is_feasible()) {
        (Some(x), Some(y)) => Ok(x == y),
        _ => Err(Verdict::Timeout),
    }
}

/// Do edge-disjoint paths exist connecting `{s1,t1}` and `{s2,t2}`, each in
/// either direction? Tries all four orientation combinations with the
/// two-request exact search.
pub fn has_unordered_cross(
    g: &IncidenceDigraph,
    s1: VertexId,
    t1: VertexId,
    s2: VertexId,
    t2: VertexId,
    budget: Budget,
) -> Result<bool, Verdict> {
    let mut timed_out = false;
    for first in [(s1, t1), (t1, s1)] {
        for second in [(s2, t2), (t2, s2)] {
            let (found, exhausted) = search_pairs(g, &[first, second], budget, 1);
            if !found.is_empty() {
                return Ok(true);
            }
            if !exhausted {
                timed_out = true;
            }
        }
    }
    if timed_out {
        Err(Verdict::Timeout)
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_demand_direct_edge() {
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        let inst = Instance::new(g, vec![(VertexId(1), VertexId(0))]);
        match solve_exact(&inst, Budget::UNLIMITED) {
            Verdict::Feasible(l) => {
                assert_eq!(l.paths.len(), 1);
                assert_eq!(l.paths[0].edges.len(), 1);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn bowtie_is_infeasible() {
        // Both demands are forced through the single edge a -> v.
        let mut g = IncidenceDigraph::with_vertices(7);
        let [s1, s2, t1, t2, a, b, v] = [0, 1, 2, 3, 4, 5, 6].map(VertexId);
        g.add_edge(s1, a);
        g.add_edge(s2, b);
        g.add_edge(b, a);
        g.add_edge(a, v);
        g.add_edge(a, t2);
        g.add_edge(v, t1);
        let inst = Instance::new(
            g,
            vec![(v, s1), (v, s2), (t1, v), (t2, v)],
        );
        assert_eq!(solve_exact(&inst, Budget::UNLIMITED), Verdict::Infeasible);
    }

    #[test]
    fn digon_has_exactly_one_solution() {
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        let inst = Instance::new(g, vec![(VertexId(1), VertexId(0))]);
        let (sols, exhausted) = enumerate_linkages(&inst, 16, Budget::UNLIMITED);
        assert!(exhausted);
        assert_eq!(sols.len(), 1);
    }

    #[test]
    fn unused_cycle_doubles_the_solutions() {
        // demand 0 -> 1 via direct edge, or detouring through the 3-cycle.
        let mut g = IncidenceDigraph::with_vertices(4);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(0), VertexId(2));
        g.add_edge(VertexId(2), VertexId(3));
        g.add_edge(VertexId(3), VertexId(0));
        let inst = Instance::new(g, vec![(VertexId(1), VertexId(0))]);
        let (sols, exhausted) = enumerate_linkages(&inst, 16, Budget::UNLIMITED);
        assert!(exhausted);
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn cycle_demand_routes_around() {
        let mut g = IncidenceDigraph::with_vertices(3);
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            g.add_edge(VertexId(a), VertexId(b));
        }
        let inst = Instance::new(g, vec![(VertexId(0), VertexId(0))]);
        match solve_exact(&inst, Budget::UNLIMITED) {
            Verdict::Feasible(l) => assert_eq!(l.paths[0].edges.len(), 3),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn timeout_reports_timeout_not_infeasible() {
        let mut g = IncidenceDigraph::with_vertices(8);
        for i in 0..7 {
            g.add_edge(VertexId(i), VertexId(i + 1));
            g.add_edge(VertexId(i), VertexId(i + 1));
        }
        let inst = Instance::new(g, vec![(VertexId(7), VertexId(0))]);
        assert_eq!(solve_exact(&inst, Budget(1)), Verdict::Timeout);
    }

    #[test]
    fn unordered_cross_on_disjoint_chains() {
        let mut g = IncidenceDigraph::with_vertices(6);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        g.add_edge(VertexId(3), VertexId(4));
        g.add_edge(VertexId(4), VertexId(5));
        assert_eq!(
            has_unordered_cross(
                &g,
                VertexId(0),
                VertexId(2),
                VertexId(3),
                VertexId(5),
                Budget::UNLIMITED
            ),
            Ok(true)
        );
    }

    #[test]
    fn unordered_cross_absent() {
        let mut g = IncidenceDigraph::with_vertices(4);
        g.add_edge(VertexId(0), VertexId(1));
        assert_eq!(
            has_unordered_cross(
                &g,
                VertexId(0),
                VertexId(1),
                VertexId(2),
                VertexId(3),
                Budget::UNLIMITED
            ),
            Ok(false)
        );
    }

    #[test]
    fn determinism_same_witness() {
        let mut g = IncidenceDigraph::with_vertices(4);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)] {
            g.add_edge(VertexId(a), VertexId(b));
        }
        let inst = Instance::new(g, vec![(VertexId(3), VertexId(0))]);
        let a = solve_exact(&inst, Budget::UNLIMITED);
        let b = solve_exact(&inst, Budget::UNLIMITED);
        assert_eq!(a, b);
    }
}
