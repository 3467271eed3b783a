//! Paths, cycles, linkages, and the problem instance.
//!
//! A path here is what the standard literature calls a trail: an edge
//! sequence that may revisit vertices but never reuses an edge.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::EedpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrailKind {
    Path,
    Cycle,
}

/// An edge sequence with head(e_i) = tail(e_{i+1}); a cycle closes back on
/// its first tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    pub edges: Vec<EdgeId>,
    pub kind: TrailKind,
}

impl Trail {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Start vertex in `g`.
    pub fn start(&self, g: &IncidenceDigraph) -> Option<VertexId> {
        g.tail(*self.edges.first()?)
    }

    /// End vertex in `g` (equals the start for cycles).
    pub fn end(&self, g: &IncidenceDigraph) -> Option<VertexId> {
        match self.kind {
            TrailKind::Path => g.head(*self.edges.last()?),
            TrailKind::Cycle => self.start(g),
        }
    }

    /// All vertices visited, in traversal order (with repetitions).
    pub fn vertex_walk(&self, g: &IncidenceDigraph) -> Vec<VertexId> {
        let mut walk = Vec::with_capacity(self.edges.len() + 1);
        if let Some(&first) = self.edges.first() {
            walk.push(g.tail(first).expect("trail edge must be proper"));
            for &e in &self.edges {
                walk.push(g.head(e).expect("trail edge must be proper"));
            }
        }
        walk
    }

    pub fn vertex_set(&self, g: &IncidenceDigraph) -> BTreeSet<VertexId> {
        self.vertex_walk(g).into_iter().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Checks consecutive incidences, edge distinctness, and closure.
    pub fn validate(&self, g: &IncidenceDigraph) -> Result<(), EedpError> {
        if self.edges.is_empty() {
            return Err(EedpError::Path("empty trail".into()));
        }
        let mut seen = BTreeSet::new();
        for window in self.edges.windows(2) {
            let (a, b) = (window[0], window[1]);
            let ha = g
                .head(a)
                .ok_or_else(|| EedpError::Path(format!("edge {a} missing head")))?;
            let tb = g
                .tail(b)
                .ok_or_else(|| EedpError::Path(format!("edge {b} missing tail")))?;
            if ha != tb {
                return Err(EedpError::Path(format!(
                    "edges {a},{b} are not consecutive: head={ha}, tail={tb}"
                )));
            }
        }
        for &e in &self.edges {
            if !seen.insert(e) {
                return Err(EedpError::Path(format!("edge {e} repeats in trail")));
            }
            if g.ends(e).is_none() {
                return Err(EedpError::Path(format!("edge {e} not proper in host")));
            }
        }
        let start = self.start(g).unwrap();
        let last_head = g.head(*self.edges.last().unwrap()).unwrap();
        match self.kind {
            TrailKind::Cycle if last_head != start => Err(EedpError::Path(format!(
                "cycle does not close: starts at {start}, ends at {last_head}"
            ))),
            TrailKind::Path if last_head == start => Err(EedpError::Path(
                "path closes on itself; should be a cycle".into(),
            )),
            _ => Ok(()),
        }
    }

    /// True if no vertex is visited twice (for cycles: except the closing one).
    pub fn is_vertex_disjoint(&self, g: &IncidenceDigraph) -> bool {
        let mut walk = self.vertex_walk(g);
        if self.kind == TrailKind::Cycle {
            walk.pop();
        }
        let set: BTreeSet<_> = walk.iter().copied().collect();
        set.len() == walk.len()
    }
}

/// A set of pairwise edge-disjoint trails.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Linkage {
    pub paths: Vec<Trail>,
}

impl Linkage {
    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.paths.iter().flat_map(|p| p.edges.iter().copied()).collect()
    }

    /// (start vertex, end vertex) per member path.
    pub fn vertex_pattern(&self, g: &IncidenceDigraph) -> Vec<(VertexId, VertexId)> {
        self.paths
            .iter()
            .map(|p| (p.start(g).unwrap(), p.end(g).unwrap()))
            .collect()
    }

    /// (first edge, last edge) per member path.
    pub fn directed_pattern(&self) -> Vec<(EdgeId, EdgeId)> {
        self.paths
            .iter()
            .map(|p| (*p.edges.first().unwrap(), *p.edges.last().unwrap()))
            .collect()
    }

    /// Every member validates and no edge id appears twice.
    pub fn validate(&self, g: &IncidenceDigraph) -> Result<(), EedpError> {
        let mut used = BTreeSet::new();
        for p in &self.paths {
            p.validate(g)?;
            for &e in &p.edges {
                if !used.insert(e) {
                    return Err(EedpError::Path(format!(
                        "edge {e} appears in two linkage paths"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A supply digraph together with an ordered demand list.
///
/// Demand `(t, s)` requests an s-to-t path; the demand edges run t->s so
/// that supply + demands is Eulerian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub supply: IncidenceDigraph,
    pub demands: Vec<(VertexId, VertexId)>,
}

impl Instance {
    pub fn new(supply: IncidenceDigraph, demands: Vec<(VertexId, VertexId)>) -> Self {
        Self { supply, demands }
    }

    pub fn demand_count(&self) -> usize {
        self.demands.len()
    }

    /// The union invariant: supply + demand edges balanced everywhere.
    pub fn is_union_eulerian(&self) -> bool {
        self.supply.is_eulerian_with(&self.demands)
    }

    /// First vertex violating the union balance, for error messages.
    pub fn eulerian_violation(&self) -> Option<VertexId> {
        let mut balance: BTreeMap<VertexId, i64> = BTreeMap::new();
        for v in self.supply.vertices() {
            balance.insert(
                v,
                self.supply.out_degree(v) as i64 - self.supply.in_degree(v) as i64,
            );
        }
        for &(t, s) in &self.demands {
            *balance.entry(t).or_insert(0) += 1;
            *balance.entry(s).or_insert(0) -= 1;
        }
        balance.into_iter().find(|&(_, b)| b != 0).map(|(v, _)| v)
    }

    /// Vertices carrying at least one demand incidence.
    pub fn terminals(&self) -> BTreeSet<VertexId> {
        self.demands
            .iter()
            .flat_map(|&(t, s)| [t, s])
            .collect()
    }

    /// Demand incidences at `v` (a loop demand counts twice).
    pub fn demand_degree(&self, v: VertexId) -> usize {
        self.demands
            .iter()
            .map(|&(t, s)| usize::from(t == v) + usize::from(s == v))
            .sum()
    }

    /// Degree of `v` in supply + demands.
    pub fn union_degree(&self, v: VertexId) -> usize {
        self.supply.degree(v) + self.demand_degree(v)
    }

    pub fn size(&self) -> usize {
        self.supply.size()
    }

    /// A linkage solves the instance iff path `i` runs s_i -> t_i using only
    /// supply edges, all pairwise edge-disjoint.
    pub fn validate_solution(&self, linkage: &Linkage) -> Result<(), EedpError> {
        if linkage.paths.len() != self.demands.len() {
            return Err(EedpError::Path(format!(
                "expected {} paths, got {}",
                self.demands.len(),
                linkage.paths.len()
            )));
        }
        linkage.validate(&self.supply)?;
        for (trail, &(t, s)) in linkage.paths.iter().zip(&self.demands) {
            let start = trail.start(&self.supply).unwrap();
            let end = trail.end(&self.supply).unwrap();
            let expected_kind = if s == t { TrailKind::Cycle } else { TrailKind::Path };
            if trail.kind != expected_kind || start != s || end != t {
                return Err(EedpError::Path(format!(
                    "path for demand ({t},{s}) runs {start}->{end}"
                )));
            }
        }
        Ok(())
    }
}

/// Decomposes an Eulerian graph into edge-disjoint cycles covering every
/// edge exactly once. Cycles are peeled greedily, lowest edge id first.
pub fn euler_decompose(g: &IncidenceDigraph) -> Result<Vec<Trail>, EedpError> {
    if !g.is_proper() {
        return Err(EedpError::Graph("euler_decompose: graph not proper".into()));
    }
    if !g.is_eulerian() {
        return Err(EedpError::Graph("euler_decompose: graph not Eulerian".into()));
    }
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut cycles = Vec::new();
    for start_edge in g.edges() {
        if used.contains(&start_edge) {
            continue;
        }
        let start = g.tail(start_edge).unwrap();
        let mut edges = vec![start_edge];
        used.insert(start_edge);
        let mut at = g.head(start_edge).unwrap();
        while at != start {
            let next = g
                .out_edges(at)
                .find(|e| !used.contains(e))
                .expect("Eulerian balance guarantees an unused out-edge");
            used.insert(next);
            at = g.head(next).unwrap();
            edges.push(next);
        }
        cycles.push(Trail {
            edges,
            kind: TrailKind::Cycle,
        });
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digon_decomposes_into_one_cycle() {
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        let cycles = euler_decompose(&g).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 2);
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let mut g = IncidenceDigraph::with_vertices(5);
        for (a, b) in [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)] {
            g.add_edge(VertexId(a), VertexId(b));
        }
        let cycles = euler_decompose(&g).unwrap();
        assert_eq!(cycles.len(), 2);
        let covered: usize = cycles.iter().map(|c| c.len()).sum();
        assert_eq!(covered, 6);
    }

    #[test]
    fn decompose_rejects_non_eulerian() {
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        assert!(euler_decompose(&g).is_err());
    }

    #[test]
    fn trail_validation_catches_gaps() {
        let mut g = IncidenceDigraph::with_vertices(3);
        let e0 = g.add_edge(VertexId(0), VertexId(1));
        let e1 = g.add_edge(VertexId(2), VertexId(0));
        let t = Trail {
            edges: vec![e0, e1],
            kind: TrailKind::Path,
        };
        assert!(t.validate(&g).is_err());
    }

    #[test]
    fn trail_may_revisit_vertices_but_not_edges() {
        // Figure-eight through vertex 0.
        let mut g = IncidenceDigraph::with_vertices(3);
        let e0 = g.add_edge(VertexId(0), VertexId(1));
        let e1 = g.add_edge(VertexId(1), VertexId(0));
        let e2 = g.add_edge(VertexId(0), VertexId(2));
        let t = Trail {
            edges: vec![e0, e1, e2],
            kind: TrailKind::Path,
        };
        assert!(t.validate(&g).is_ok());
        assert!(!t.is_vertex_disjoint(&g));
        let bad = Trail {
            edges: vec![e0, e1, e0],
            kind: TrailKind::Path,
        };
        assert!(bad.validate(&g).is_err());
    }
}
