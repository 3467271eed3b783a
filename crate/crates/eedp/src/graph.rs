//! Incidence-style directed multigraph.
//!
//! Edges are first-class elements with optional tail/head incidences, so
//! partial graphs (half-edges) are representable. Edge ids are opaque and
//! never reused after deletion, which lets splitting-off provenance be
//! recorded and reversed later.

use std::collections::{BTreeMap, BTreeSet};

use crate::EedpError;

/// Vertex identifier. Plain integer, unique within a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Edge identifier. Never reused after deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Incidence {
    tail: Option<VertexId>,
    head: Option<VertexId>,
}

/// Directed multigraph with edges as first-class elements.
///
/// Parallel edges and loops are permitted. A loop contributes 1 to the
/// in-degree and 1 to the out-degree of its vertex. All iteration orders are
/// sorted by id, so every derived computation is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IncidenceDigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Incidence>,
    out_adj: BTreeMap<VertexId, BTreeSet<EdgeId>>,
    in_adj: BTreeMap<VertexId, BTreeSet<EdgeId>>,
    next_vertex: u32,
    next_edge: u32,
}

impl IncidenceDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with vertices `0..n` and no edges.
    pub fn with_vertices(n: u32) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.ensure_vertex(VertexId(i));
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.ensure_vertex(v);
        v
    }

    /// Inserts `v` if absent; ids handed out later stay above it.
    pub fn ensure_vertex(&mut self, v: VertexId) {
        if self.vertices.insert(v) {
            self.out_adj.entry(v).or_default();
            self.in_adj.entry(v).or_default();
        }
        self.next_vertex = self.next_vertex.max(v.0 + 1);
    }

    pub fn add_edge(&mut self, tail: VertexId, head: VertexId) -> EdgeId {
        self.ensure_vertex(tail);
        self.ensure_vertex(head);
        let e = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(
            e,
            Incidence {
                tail: Some(tail),
                head: Some(head),
            },
        );
        self.out_adj.get_mut(&tail).unwrap().insert(e);
        self.in_adj.get_mut(&head).unwrap().insert(e);
        e
    }

    /// Adds an edge that may lack one or both endpoints.
    pub fn add_partial_edge(&mut self, tail: Option<VertexId>, head: Option<VertexId>) -> EdgeId {
        if let Some(t) = tail {
            self.ensure_vertex(t);
        }
        if let Some(h) = head {
            self.ensure_vertex(h);
        }
        let e = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(e, Incidence { tail, head });
        if let Some(t) = tail {
            self.out_adj.get_mut(&t).unwrap().insert(e);
        }
        if let Some(h) = head {
            self.in_adj.get_mut(&h).unwrap().insert(e);
        }
        e
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<(Option<VertexId>, Option<VertexId>)> {
        let inc = self.edges.remove(&e)?;
        if let Some(t) = inc.tail {
            self.out_adj.get_mut(&t).unwrap().remove(&e);
        }
        if let Some(h) = inc.head {
            self.in_adj.get_mut(&h).unwrap().remove(&e);
        }
        Some((inc.tail, inc.head))
    }

    /// Removes an isolated vertex. Fails if any edge is still incident.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), EedpError> {
        if self.degree(v) != 0 {
            return Err(EedpError::Graph(format!(
                "cannot remove vertex {v}: degree is nonzero"
            )));
        }
        self.vertices.remove(&v);
        self.out_adj.remove(&v);
        self.in_adj.remove(&v);
        Ok(())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn tail(&self, e: EdgeId) -> Option<VertexId> {
        self.edges.get(&e).and_then(|i| i.tail)
    }

    pub fn head(&self, e: EdgeId) -> Option<VertexId> {
        self.edges.get(&e).and_then(|i| i.head)
    }

    /// Tail and head of a proper edge.
    pub fn ends(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        let inc = self.edges.get(&e)?;
        Some((inc.tail?, inc.head?))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    /// Outgoing edges of `v` in increasing id order.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.out_adj.get(&v).into_iter().flatten().copied()
    }

    /// Incoming edges of `v` in increasing id order.
    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_adj.get(&v).into_iter().flatten().copied()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// True iff every edge has both a tail and a head.
    pub fn is_proper(&self) -> bool {
        self.edges
            .values()
            .all(|i| i.tail.is_some() && i.head.is_some())
    }

    /// `|V| + |E|`, the size measure reductions must shrink.
    pub fn size(&self) -> usize {
        self.vertex_count() + self.edge_count()
    }

    /// In-degree = out-degree at every vertex, counting `extra` as edges.
    pub fn is_eulerian_with(&self, extra: &[(VertexId, VertexId)]) -> bool {
        let mut balance: BTreeMap<VertexId, i64> = BTreeMap::new();
        for v in self.vertices() {
            balance.insert(v, self.out_degree(v) as i64 - self.in_degree(v) as i64);
        }
        for &(t, h) in extra {
            *balance.entry(t).or_insert(0) += 1;
            *balance.entry(h).or_insert(0) -= 1;
        }
        balance.values().all(|&b| b == 0)
    }

    pub fn is_eulerian(&self) -> bool {
        self.is_eulerian_with(&[])
    }

    /// Splits off at the shared middle vertex of `e_in`, `e_out`: both edges
    /// are removed and a shortcut edge (tail(e_in), head(e_out)) is inserted.
    /// Isolated vertices left behind are deleted silently. Returns the new
    /// edge id.
    pub fn split_off(&mut self, e_in: EdgeId, e_out: EdgeId) -> Result<EdgeId, EedpError> {
        if e_in == e_out {
            return Err(EedpError::Graph(
                "split_off requires two distinct edges".into(),
            ));
        }
        let (t_in, h_in) = self
            .ends(e_in)
            .ok_or_else(|| EedpError::Graph(format!("split_off: edge {e_in} not proper")))?;
        let (t_out, h_out) = self
            .ends(e_out)
            .ok_or_else(|| EedpError::Graph(format!("split_off: edge {e_out} not proper")))?;
        if h_in != t_out {
            return Err(EedpError::Graph(format!(
                "split_off: head({e_in})={h_in} differs from tail({e_out})={t_out}"
            )));
        }
        let mid = h_in;
        self.remove_edge(e_in);
        self.remove_edge(e_out);
        let new_edge = self.add_edge(t_in, h_out);
        for v in [mid, t_in, h_out] {
            if self.has_vertex(v) && self.degree(v) == 0 {
                self.remove_vertex(v).unwrap();
            }
        }
        Ok(new_edge)
    }

    /// The subgraph of edges satisfying `pred`, keeping vertex and edge
    /// ids. Every endpoint of a kept edge is kept; isolated vertices are
    /// dropped.
    pub fn edge_subgraph<F: Fn(EdgeId) -> bool>(&self, pred: F) -> IncidenceDigraph {
        let mut sub = IncidenceDigraph::new();
        sub.next_vertex = self.next_vertex;
        sub.next_edge = self.next_edge;
        for e in self.edges() {
            if !pred(e) {
                continue;
            }
            let inc = self.edges[&e];
            if let Some(t) = inc.tail {
                sub.ensure_vertex(t);
            }
            if let Some(h) = inc.head {
                sub.ensure_vertex(h);
            }
            sub.edges.insert(e, inc);
            if let Some(t) = inc.tail {
                sub.out_adj.get_mut(&t).unwrap().insert(e);
            }
            if let Some(h) = inc.head {
                sub.in_adj.get_mut(&h).unwrap().insert(e);
            }
        }
        sub
    }

    /// Reachability over unused out-edges from `from`, restricted to edges
    /// for which `usable` holds.
    pub fn reachable_from<F: Fn(EdgeId) -> bool>(
        &self,
        from: VertexId,
        usable: F,
    ) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        seen.insert(from);
        while let Some(v) = stack.pop() {
            for e in self.out_edges(v) {
                if !usable(e) {
                    continue;
                }
                let h = self.head(e).unwrap();
                if seen.insert(h) {
                    stack.push(h);
                }
            }
        }
        seen
    }

    /// Connected components of the underlying undirected graph restricted to
    /// the vertex set `within` (edges with an endpoint outside are ignored).
    pub fn undirected_components(&self, within: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let mut unseen: BTreeSet<VertexId> = within.clone();
        let mut components = Vec::new();
        while let Some(&start) = unseen.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            unseen.remove(&start);
            comp.insert(start);
            while let Some(v) = stack.pop() {
                let neighbours = self
                    .out_edges(v)
                    .filter_map(|e| self.head(e))
                    .chain(self.in_edges(v).filter_map(|e| self.tail(e)));
                for u in neighbours {
                    if unseen.remove(&u) {
                        comp.insert(u);
                        stack.push(u);
                    }
                }
            }
            components.push(comp);
        }
        components
    }
}

/// A directed cut `δ(X)` split into its two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub x: BTreeSet<VertexId>,
    /// Edges with tail in `X` and head outside.
    pub delta_plus: BTreeSet<EdgeId>,
    /// Edges with head in `X` and tail outside.
    pub delta_minus: BTreeSet<EdgeId>,
}

impl Cut {
    /// `|δ(X)|`, the order of the cut.
    pub fn order(&self) -> usize {
        self.delta_plus.len() + self.delta_minus.len()
    }
}

/// Computes the cut induced by `X`.
pub fn induced_cut(g: &IncidenceDigraph, x: &BTreeSet<VertexId>) -> Cut {
    let mut delta_plus = BTreeSet::new();
    let mut delta_minus = BTreeSet::new();
    for e in g.edges() {
        if let Some((t, h)) = g.ends(e) {
            match (x.contains(&t), x.contains(&h)) {
                (true, false) => {
                    delta_plus.insert(e);
                }
                (false, true) => {
                    delta_minus.insert(e);
                }
                _ => {}
            }
        }
    }
    Cut {
        x: x.clone(),
        delta_plus,
        delta_minus,
    }
}

/// Pendant vertices introduced by the Euler-restriction, keyed by the cut
/// edge they replace.
#[derive(Debug, Clone)]
pub struct EulerRestriction {
    pub graph: IncidenceDigraph,
    /// For each cut edge leaving `X`: (new pendant edge, pendant vertex `t_e`).
    pub out_pendants: Vec<(EdgeId, VertexId)>,
    /// For each cut edge entering `X`: (new pendant edge, pendant vertex `s_e`).
    pub in_pendants: Vec<(EdgeId, VertexId)>,
}

impl EulerRestriction {
    /// Demand pairs that make the restriction Eulerian again: the pendant
    /// sinks are matched to the pendant sources in id order.
    pub fn pendant_demands(&self) -> Vec<(VertexId, VertexId)> {
        self.out_pendants
            .iter()
            .zip(self.in_pendants.iter())
            .map(|(&(_, t_e), &(_, s_e))| (t_e, s_e))
            .collect()
    }
}

/// Euler-restriction of `g` to `X`: `G[X]` plus one pendant vertex per cut
/// edge, so that no two former cut edges share an endpoint outside `X`.
pub fn euler_restriction(
    g: &IncidenceDigraph,
    x: &BTreeSet<VertexId>,
    forbidden: &BTreeSet<VertexId>,
) -> Result<EulerRestriction, EedpError> {
    if let Some(v) = x.intersection(forbidden).next() {
        return Err(EedpError::Graph(format!(
            "euler_restriction: vertex {v} of X is forbidden (terminal)"
        )));
    }
    let cut = induced_cut(g, x);
    // Interior edges keep their ids; pendants get fresh ids above them.
    let mut sub = g.edge_subgraph(|e| {
        let (t, h) = g.ends(e).unwrap();
        x.contains(&t) && x.contains(&h)
    });
    for &v in x {
        sub.ensure_vertex(v);
    }
    let mut out_pendants = Vec::new();
    for &e in &cut.delta_plus {
        let u = g.tail(e).unwrap();
        let t_e = sub.add_vertex();
        let pe = sub.add_edge(u, t_e);
        out_pendants.push((pe, t_e));
    }
    let mut in_pendants = Vec::new();
    for &e in &cut.delta_minus {
        let v = g.head(e).unwrap();
        let s_e = sub.add_vertex();
        let pe = sub.add_edge(s_e, v);
        in_pendants.push((pe, s_e));
    }
    Ok(EulerRestriction {
        graph: sub,
        out_pendants,
        in_pendants,
    })
}

/// Line graph: one vertex per edge of `g`, one arc per 2-path.
///
/// Returns the line graph and the mapping edge-of-`g` -> vertex id.
pub fn line_graph(g: &IncidenceDigraph) -> (IncidenceDigraph, BTreeMap<EdgeId, VertexId>) {
    let mut lg = IncidenceDigraph::new();
    let mut vmap = BTreeMap::new();
    for (i, e) in g.edges().enumerate() {
        let v = VertexId(i as u32);
        lg.ensure_vertex(v);
        vmap.insert(e, v);
    }
    for e1 in g.edges() {
        if let Some(mid) = g.head(e1) {
            for e2 in g.out_edges(mid) {
                if e1 != e2 {
                    lg.add_edge(vmap[&e1], vmap[&e2]);
                } else {
                    // A loop is a 2-path with itself.
                    lg.add_edge(vmap[&e1], vmap[&e1]);
                }
            }
        }
    }
    (lg, vmap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> IncidenceDigraph {
        let mut g = IncidenceDigraph::with_vertices(n);
        for i in 0..n {
            g.add_edge(VertexId(i), VertexId((i + 1) % n));
        }
        g
    }

    #[test]
    fn three_cycle_is_eulerian() {
        assert!(cycle(3).is_eulerian());
    }

    #[test]
    fn single_edge_is_not_eulerian() {
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        assert!(!g.is_eulerian());
    }

    #[test]
    fn loop_balances_degrees() {
        let mut g = IncidenceDigraph::with_vertices(1);
        g.add_edge(VertexId(0), VertexId(0));
        assert!(g.is_eulerian());
        assert_eq!(g.degree(VertexId(0)), 2);
    }

    #[test]
    fn split_off_triangle_gives_digon() {
        let mut g = cycle(3);
        // edges: 0: 0->1, 1: 1->2, 2: 2->0; split at vertex 1
        let new_e = g.split_off(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(g.ends(new_e), Some((VertexId(0), VertexId(2))));
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_eulerian());
    }

    #[test]
    fn split_off_four_cycle_stays_eulerian() {
        let mut g = cycle(4);
        g.split_off(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.is_eulerian());
    }

    #[test]
    fn split_off_rejects_mismatched_edges() {
        let mut g = cycle(3);
        assert!(g.split_off(EdgeId(0), EdgeId(2)).is_err());
    }

    #[test]
    fn edge_ids_are_not_reused() {
        let mut g = cycle(3);
        let e = g.split_off(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(e, EdgeId(3));
        let f = g.add_edge(VertexId(0), VertexId(2));
        assert_eq!(f, EdgeId(4));
    }

    #[test]
    fn empty_cut() {
        let g = cycle(3);
        let cut = induced_cut(&g, &BTreeSet::new());
        assert_eq!(cut.order(), 0);
    }

    #[test]
    fn interior_vertex_cut_in_four_regular_graph() {
        // Two triangles sharing all three vertices: every vertex has degree 4.
        let mut g = cycle(3);
        for i in 0..3 {
            g.add_edge(VertexId(i), VertexId((i + 1) % 3));
        }
        let x: BTreeSet<_> = [VertexId(0)].into();
        let cut = induced_cut(&g, &x);
        assert_eq!(cut.delta_plus.len(), 2);
        assert_eq!(cut.delta_minus.len(), 2);
    }

    #[test]
    fn euler_restriction_whole_component_unchanged() {
        let g = cycle(4);
        let x: BTreeSet<_> = g.vertices().collect();
        let r = euler_restriction(&g, &x, &BTreeSet::new()).unwrap();
        assert_eq!(r.graph.edge_count(), 4);
        assert_eq!(r.graph.vertex_count(), 4);
        assert!(r.pendant_demands().is_empty());
    }

    #[test]
    fn euler_restriction_two_cut_adds_two_pendants() {
        // 0 -> 1 -> 2 -> 3 -> 0; X = {1, 2} has one edge in, one out.
        let g = cycle(4);
        let x: BTreeSet<_> = [VertexId(1), VertexId(2)].into();
        let r = euler_restriction(&g, &x, &BTreeSet::new()).unwrap();
        assert_eq!(r.out_pendants.len(), 1);
        assert_eq!(r.in_pendants.len(), 1);
        assert!(r.graph.is_eulerian_with(&r.pendant_demands()));
    }

    #[test]
    fn euler_restriction_rejects_terminals() {
        let g = cycle(4);
        let x: BTreeSet<_> = [VertexId(1)].into();
        let forbidden: BTreeSet<_> = [VertexId(1)].into();
        assert!(euler_restriction(&g, &x, &forbidden).is_err());
    }

    #[test]
    fn line_graph_of_cycle_is_cycle() {
        let g = cycle(5);
        let (lg, _) = line_graph(&g);
        assert_eq!(lg.vertex_count(), 5);
        assert_eq!(lg.edge_count(), 5);
        for v in lg.vertices() {
            assert_eq!(lg.in_degree(v), 1);
            assert_eq!(lg.out_degree(v), 1);
        }
    }

    #[test]
    fn line_graph_of_two_path_is_single_arc() {
        let mut g = IncidenceDigraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        let (lg, _) = line_graph(&g);
        assert_eq!(lg.vertex_count(), 2);
        assert_eq!(lg.edge_count(), 1);
    }
}
