//! Polynomial feasibility and path extraction for two-star demand graphs
//! centred at a common vertex, via the directed cut criterion.
//!
//! The demand shape is `D^v = {(t_i, v), (v, s_i)}`: p edge-disjoint
//! s_i-to-v paths and p edge-disjoint v-to-t_i paths, all mutually
//! edge-disjoint.

use std::collections::{BTreeMap, BTreeSet};

use crate::flow::max_flow_unit;
use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::oracle::{search_pairs, Budget};
use crate::path::{Instance, Linkage, Trail};
use crate::EedpError;

/// Two stars centred at `center`: sources must reach the centre, the centre
/// must reach the sinks. Lists may repeat vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStarDemand {
    pub center: VertexId,
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
}

impl TwoStarDemand {
    pub fn p(&self) -> usize {
        self.sources.len()
    }

    /// Demand edges (t, s) in the instance convention: first the source
    /// requests (center, s_i), then the sink requests (t_i, center).
    pub fn to_demands(&self) -> Vec<(VertexId, VertexId)> {
        let mut demands: Vec<(VertexId, VertexId)> = self
            .sources
            .iter()
            .map(|&s| (self.center, s))
            .collect();
        demands.extend(self.sinks.iter().map(|&t| (t, self.center)));
        demands
    }

    pub fn to_instance(&self, supply: IncidenceDigraph) -> Instance {
        Instance::new(supply, self.to_demands())
    }

    fn check(&self, g: &IncidenceDigraph) -> Result<(), EedpError> {
        if self.sources.len() != self.sinks.len() {
            return Err(EedpError::TwoStar(
                "source and sink lists differ in length".into(),
            ));
        }
        if !g.is_eulerian_with(&self.to_demands()) {
            return Err(EedpError::TwoStar(
                "supply plus two-star demands is not Eulerian".into(),
            ));
        }
        Ok(())
    }
}

/// Polynomial form of the directed cut criterion, as two max-flows.
///
/// For sets containing the centre the criterion amounts to a minimum cut
/// with auxiliary unit arcs from a super-source onto the s_i; symmetrically
/// for sets avoiding the centre. Certified against
/// [`cut_criterion_exhaustive`] on small instances.
pub fn cut_criterion_holds(g: &IncidenceDigraph, dem: &TwoStarDemand) -> Result<bool, EedpError> {
    dem.check(g)?;
    let p = dem.p();
    if p == 0 {
        return Ok(true);
    }
    let sources: Vec<_> = dem.sources.iter().map(|&s| (s, 1)).collect();
    let into_center = max_flow_unit(g, &sources, &[(dem.center, u32::MAX)]);
    if into_center.value < p {
        return Ok(false);
    }
    let sinks: Vec<_> = dem.sinks.iter().map(|&t| (t, 1)).collect();
    let out_of_center = max_flow_unit(g, &[(dem.center, u32::MAX)], &sinks);
    Ok(out_of_center.value >= p)
}

/// Literal Def-style check: for every vertex set X, the supply in-edges of
/// X are at least the demand out-edges of X. Exponential in |V|; the
/// independent oracle for the two-max-flow reformulation.
pub fn cut_criterion_exhaustive(
    g: &IncidenceDigraph,
    dem: &TwoStarDemand,
) -> Result<bool, EedpError> {
    dem.check(g)?;
    let verts: Vec<VertexId> = g.vertices().collect();
    assert!(
        verts.len() <= 26,
        "exhaustive criterion is limited to small vertex sets"
    );
    let demands = dem.to_demands();
    for mask in 0u64..(1u64 << verts.len()) {
        let x: BTreeSet<VertexId> = verts
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        let mut supply_in = 0usize;
        for e in g.edges() {
            let (t, h) = g.ends(e).unwrap();
            if !x.contains(&t) && x.contains(&h) {
                supply_in += 1;
            }
        }
        let mut demand_out = 0usize;
        for &(t, s) in &demands {
            if x.contains(&t) && !x.contains(&s) {
                demand_out += 1;
            }
        }
        if supply_in < demand_out {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Frank-style extraction by splitting off: repeatedly eliminate a
/// non-terminal vertex pair-by-pair, keeping each split only if the
/// criterion still holds, then read the paths off the reduced graph and
/// reverse the splits.
///
/// Returns `None` iff the criterion fails. An internal error signals an
/// implementation bug, never an input condition.
pub fn solve_two_star(
    g: &IncidenceDigraph,
    dem: &TwoStarDemand,
) -> Result<Option<Linkage>, EedpError> {
    if !cut_criterion_holds(g, dem)? {
        return Ok(None);
    }
    let mut h = g.clone();
    let mut provenance: BTreeMap<EdgeId, (EdgeId, EdgeId)> = BTreeMap::new();
    let terminals: BTreeSet<VertexId> = dem
        .sources
        .iter()
        .chain(dem.sinks.iter())
        .copied()
        .chain([dem.center])
        .collect();

    loop {
        let Some(u) = h
            .vertices()
            .find(|v| !terminals.contains(v) && h.degree(*v) > 0)
        else {
            break;
        };
        // An isolated loop can never carry a path; drop it outright.
        if h.degree(u) == 2 {
            let own_loop = h.in_edges(u).find(|&e| h.tail(e) == Some(u));
            if let Some(l) = own_loop {
                h.remove_edge(l);
                h.remove_vertex(u).unwrap();
                continue;
            }
        }
        let ins: Vec<EdgeId> = h.in_edges(u).collect();
        let outs: Vec<EdgeId> = h.out_edges(u).collect();
        let mut accepted = false;
        'pairs: for &e_in in &ins {
            for &e_out in &outs {
                if e_in == e_out {
                    continue;
                }
                let mut trial = h.clone();
                let new_edge = trial.split_off(e_in, e_out)?;
                if cut_criterion_holds(&trial, dem)? {
                    provenance.insert(new_edge, (e_in, e_out));
                    h = trial;
                    accepted = true;
                    break 'pairs;
                }
            }
        }
        if !accepted {
            return Err(EedpError::TwoStar(format!(
                "no admissible splitting-off pair at vertex {u}; this is a bug"
            )));
        }
    }

    // Only terminals remain; the residual problem is tiny, solve it exactly.
    let pairs: Vec<(VertexId, VertexId)> = dem
        .sources
        .iter()
        .map(|&s| (s, dem.center))
        .chain(dem.sinks.iter().map(|&t| (dem.center, t)))
        .collect();
    let (mut found, exhausted) = search_pairs(&h, &pairs, Budget::UNLIMITED, 1);
    let Some(reduced) = found.pop() else {
        debug_assert!(exhausted);
        return Err(EedpError::TwoStar(
            "criterion holds but the reduced graph is unroutable; this is a bug".into(),
        ));
    };

    // Reverse every split to lift the paths back into the original graph.
    let paths = reduced
        .paths
        .into_iter()
        .map(|trail| Trail {
            edges: trail
                .edges
                .iter()
                .flat_map(|&e| expand_edge(&provenance, e))
                .collect(),
            kind: trail.kind,
        })
        .collect();
    let linkage = Linkage { paths };
    let inst = dem.to_instance(g.clone());
    inst.validate_solution(&linkage)
        .map_err(|err| EedpError::TwoStar(format!("lifted linkage is invalid: {err}")))?;
    Ok(Some(linkage))
}

fn expand_edge(provenance: &BTreeMap<EdgeId, (EdgeId, EdgeId)>, e: EdgeId) -> Vec<EdgeId> {
    match provenance.get(&e) {
        None => vec![e],
        Some(&(a, b)) => {
            let mut edges = expand_edge(provenance, a);
            edges.extend(expand_edge(provenance, b));
            edges
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{solve_exact, Verdict};

    fn demand(center: u32, sources: &[u32], sinks: &[u32]) -> TwoStarDemand {
        TwoStarDemand {
            center: VertexId(center),
            sources: sources.iter().map(|&v| VertexId(v)).collect(),
            sinks: sinks.iter().map(|&v| VertexId(v)).collect(),
        }
    }

    #[test]
    fn single_pair_direct_edges() {
        let mut g = IncidenceDigraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1)); // s -> v
        g.add_edge(VertexId(1), VertexId(2)); // v -> t
        let dem = demand(1, &[0], &[2]);
        assert_eq!(cut_criterion_holds(&g, &dem), Ok(true));
        let linkage = solve_two_star(&g, &dem).unwrap().unwrap();
        assert_eq!(linkage.paths.len(), 2);
    }

    #[test]
    fn bowtie_violates_criterion() {
        let mut g = IncidenceDigraph::with_vertices(7);
        let [s1, s2, t1, t2, a, b, v] = [0, 1, 2, 3, 4, 5, 6].map(VertexId);
        g.add_edge(s1, a);
        g.add_edge(s2, b);
        g.add_edge(b, a);
        g.add_edge(a, v);
        g.add_edge(a, t2);
        g.add_edge(v, t1);
        let dem = demand(6, &[0, 1], &[2, 3]);
        assert_eq!(cut_criterion_holds(&g, &dem), Ok(false));
        assert_eq!(cut_criterion_exhaustive(&g, &dem), Ok(false));
        assert_eq!(solve_two_star(&g, &dem), Ok(None));
        // Oracle agrees.
        let inst = dem.to_instance(g);
        assert_eq!(solve_exact(&inst, Budget::UNLIMITED), Verdict::Infeasible);
    }

    #[test]
    fn parallel_instance_is_feasible() {
        let mut g = IncidenceDigraph::with_vertices(6);
        let [s1, s2, t1, t2, a, v] = [0, 1, 2, 3, 4, 5].map(VertexId);
        g.add_edge(s1, a);
        g.add_edge(s2, a);
        g.add_edge(a, v);
        g.add_edge(a, v);
        g.add_edge(v, t1);
        g.add_edge(v, t2);
        let dem = demand(5, &[0, 1], &[2, 3]);
        assert_eq!(cut_criterion_holds(&g, &dem), Ok(true));
        assert_eq!(cut_criterion_exhaustive(&g, &dem), Ok(true));
        let linkage = solve_two_star(&g, &dem).unwrap().unwrap();
        let inst = demand(5, &[0, 1], &[2, 3]).to_instance(g);
        inst.validate_solution(&linkage).unwrap();
    }

    #[test]
    fn extraction_through_interior_vertices() {
        // s -> a -> b -> v -> c -> t with some noise cycle on a, b, c.
        let mut g = IncidenceDigraph::with_vertices(7);
        let [s, a, b, v, c, t, n] = [0, 1, 2, 3, 4, 5, 6].map(VertexId);
        g.add_edge(s, a);
        g.add_edge(a, b);
        g.add_edge(b, v);
        g.add_edge(v, c);
        g.add_edge(c, t);
        g.add_edge(a, n);
        g.add_edge(n, b);
        g.add_edge(b, a);
        g.add_edge(c, n);
        g.add_edge(n, c);
        let dem = demand(3, &[0], &[5]);
        let linkage = solve_two_star(&g, &dem).unwrap().unwrap();
        let inst = dem.to_instance(g);
        inst.validate_solution(&linkage).unwrap();
    }

    #[test]
    fn rejects_non_eulerian_union() {
        let mut g = IncidenceDigraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1));
        let dem = demand(1, &[0], &[2]);
        assert!(cut_criterion_holds(&g, &dem).is_err());
    }

    #[test]
    fn zero_demands_trivially_hold() {
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        let dem = demand(0, &[], &[]);
        assert_eq!(cut_criterion_holds(&g, &dem), Ok(true));
        let linkage = solve_two_star(&g, &dem).unwrap().unwrap();
        assert!(linkage.paths.is_empty());
    }
}
