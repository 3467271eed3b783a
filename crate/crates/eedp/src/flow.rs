//! Unit-capacity flow and Menger-style edge-disjoint path computations.
//!
//! Augmenting paths are chosen lowest-edge-id-first, so flow values,
//! witnesses, and cut sides are reproducible across runs.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Linkage, Trail, TrailKind};

const SOURCE: usize = 0;
const SINK: usize = 1;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    residual: u32,
    /// Graph edge realised by this arc pair (auxiliary arcs carry None).
    edge: Option<EdgeId>,
}

/// Residual network over a host graph plus auxiliary super-terminals.
struct Network {
    verts: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    // adj[v] holds indices into `arcs`; arcs come in (forward, backward)
    // pairs, forward at even indices. Insertion follows edge id order.
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

impl Network {
    fn new(g: &IncidenceDigraph) -> Self {
        let verts: Vec<VertexId> = g.vertices().collect();
        let mut index = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            index.insert(v, i + 2);
        }
        let mut net = Network {
            verts,
            index,
            adj: vec![Vec::new(); g.vertex_count() + 2],
            arcs: Vec::new(),
        };
        for e in g.edges() {
            if let Some((t, h)) = g.ends(e) {
                let (ti, hi) = (net.index[&t], net.index[&h]);
                net.push_arc(ti, hi, 1, Some(e));
            }
        }
        net
    }

    fn push_arc(&mut self, from: usize, to: usize, cap: u32, edge: Option<EdgeId>) {
        let fwd = self.arcs.len();
        self.arcs.push(Arc {
            to,
            residual: cap,
            edge,
        });
        self.arcs.push(Arc {
            to: from,
            residual: 0,
            edge,
        });
        self.adj[from].push(fwd);
        self.adj[to].push(fwd + 1);
    }

    /// One DFS augmentation; at every vertex arcs are tried in insertion
    /// (= lowest edge id) order.
    fn augment(&mut self) -> bool {
        let n = self.adj.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut cursor = vec![0usize; n];
        let mut stack = vec![SOURCE];
        visited[SOURCE] = true;
        while let Some(&v) = stack.last() {
            if v == SINK {
                break;
            }
            let mut advanced = None;
            while cursor[v] < self.adj[v].len() {
                let a = self.adj[v][cursor[v]];
                cursor[v] += 1;
                if self.arcs[a].residual > 0 && !visited[self.arcs[a].to] {
                    advanced = Some(a);
                    break;
                }
            }
            match advanced {
                Some(a) => {
                    let to = self.arcs[a].to;
                    visited[to] = true;
                    parent[to] = Some(a);
                    stack.push(to);
                }
                None => {
                    stack.pop();
                }
            }
        }
        if !visited[SINK] {
            return false;
        }
        let mut at = SINK;
        while at != SOURCE {
            let a = parent[at].unwrap();
            self.arcs[a].residual -= 1;
            self.arcs[a ^ 1].residual += 1;
            at = self.arcs[a ^ 1].to;
        }
        true
    }

    fn max_flow(&mut self) -> usize {
        let mut value = 0;
        while self.augment() {
            value += 1;
        }
        value
    }

    /// Vertices unable to reach the sink in the residual network: the
    /// canonical inclusion-maximal source side of a minimum cut.
    fn max_source_side(&self) -> BTreeSet<VertexId> {
        let n = self.adj.len();
        let mut reaches = vec![false; n];
        reaches[SINK] = true;
        let mut stack = vec![SINK];
        while let Some(v) = stack.pop() {
            // An arc into v with residual capacity is the pair of an arc
            // listed at v; scan arcs at v and test the reverse direction.
            for &a in &self.adj[v] {
                let u = self.arcs[a].to;
                if !reaches[u] && self.arcs[a ^ 1].residual > 0 {
                    reaches[u] = true;
                    stack.push(u);
                }
            }
        }
        self.verts
            .iter()
            .enumerate()
            .filter(|&(i, _)| !reaches[i + 2])
            .map(|(_, &v)| v)
            .collect()
    }

    /// Graph edges carrying one unit of flow.
    fn saturated_edges(&self) -> BTreeSet<EdgeId> {
        self.arcs
            .iter()
            .step_by(2)
            .filter(|a| a.edge.is_some() && a.residual == 0)
            .map(|a| a.edge.unwrap())
            .collect()
    }
}

/// Outcome of a unit-capacity flow computation.
#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub value: usize,
    /// One trail per unit of flow, pairwise edge-disjoint, source to sink.
    pub witness: Linkage,
    /// Canonical inclusion-maximal source side of a minimum cut.
    pub max_source_side: BTreeSet<VertexId>,
}

/// Maximum flow from weighted sources to weighted sinks with unit edge
/// capacities. A capacity of `u32::MAX` means effectively unbounded.
pub fn max_flow_unit(
    g: &IncidenceDigraph,
    sources: &[(VertexId, u32)],
    sinks: &[(VertexId, u32)],
) -> FlowOutcome {
    let unbounded = g.edge_count() as u32 + 1;
    let mut net = Network::new(g);
    for &(s, cap) in sources {
        let si = net.index[&s];
        net.push_arc(SOURCE, si, cap.min(unbounded), None);
    }
    for &(t, cap) in sinks {
        let ti = net.index[&t];
        net.push_arc(ti, SINK, cap.min(unbounded), None);
    }
    let value = net.max_flow();
    let max_source_side = net.max_source_side();
    let witness = decompose(g, &net.saturated_edges(), sources, sinks, value);
    FlowOutcome {
        value,
        witness,
        max_source_side,
    }
}

/// Splits the flow-carrying edges into source-to-sink trails, walking from
/// each source over unconsumed flow edges, lowest edge id first.
fn decompose(
    g: &IncidenceDigraph,
    flow_edges: &BTreeSet<EdgeId>,
    sources: &[(VertexId, u32)],
    sinks: &[(VertexId, u32)],
    value: usize,
) -> Linkage {
    let mut available: BTreeSet<EdgeId> = flow_edges.clone();
    let sink_set: BTreeSet<VertexId> = sinks.iter().map(|&(t, _)| t).collect();
    let mut sink_cap: BTreeMap<VertexId, u32> = BTreeMap::new();
    for &(t, cap) in sinks {
        *sink_cap.entry(t).or_insert(0) += cap;
    }
    let mut paths = Vec::new();
    'outer: for &(s, cap) in sources {
        for _ in 0..cap {
            if paths.len() == value {
                break 'outer;
            }
            let Some(trail) = walk_to_sink(g, s, &sink_set, &mut sink_cap, &mut available) else {
                break;
            };
            paths.push(trail);
        }
    }
    Linkage { paths }
}

fn walk_to_sink(
    g: &IncidenceDigraph,
    from: VertexId,
    sinks: &BTreeSet<VertexId>,
    sink_cap: &mut BTreeMap<VertexId, u32>,
    available: &mut BTreeSet<EdgeId>,
) -> Option<Trail> {
    let mut edges = Vec::new();
    let mut at = from;
    loop {
        if !edges.is_empty() && sinks.contains(&at) && sink_cap.get(&at).copied().unwrap_or(0) > 0 {
            *sink_cap.get_mut(&at).unwrap() -= 1;
            let kind = if at == from { TrailKind::Cycle } else { TrailKind::Path };
            return Some(Trail { edges, kind });
        }
        let next = g.out_edges(at).find(|e| available.contains(e))?;
        available.remove(&next);
        edges.push(next);
        at = g.head(next).unwrap();
    }
}

/// Maximum number of pairwise edge-disjoint paths from the vertex set `s`
/// to the vertex set `t`, with a witnessing linkage.
///
/// The two sets should be disjoint; several paths may share a start or end
/// vertex since only edges are constrained.
pub fn max_edge_disjoint_paths(
    g: &IncidenceDigraph,
    s: &BTreeSet<VertexId>,
    t: &BTreeSet<VertexId>,
) -> (usize, Linkage) {
    debug_assert!(s.is_disjoint(t), "source and sink sets must be disjoint");
    let sources: Vec<_> = s.iter().map(|&v| (v, u32::MAX)).collect();
    let sinks: Vec<_> = t.iter().map(|&v| (v, u32::MAX)).collect();
    let out = max_flow_unit(g, &sources, &sinks);
    (out.value, out.witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vset(ids: &[u32]) -> BTreeSet<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    #[test]
    fn two_vertex_disjoint_paths() {
        let mut g = IncidenceDigraph::with_vertices(6);
        for (a, b) in [(0, 1), (1, 2), (3, 4), (4, 5)] {
            g.add_edge(VertexId(a), VertexId(b));
        }
        let (count, linkage) = max_edge_disjoint_paths(&g, &vset(&[0, 3]), &vset(&[2, 5]));
        assert_eq!(count, 2);
        linkage.validate(&g).unwrap();
    }

    #[test]
    fn bottleneck_limits_flow() {
        let mut g = IncidenceDigraph::with_vertices(4);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        g.add_edge(VertexId(2), VertexId(3));
        g.add_edge(VertexId(2), VertexId(3));
        let (count, _) = max_edge_disjoint_paths(&g, &vset(&[0]), &vset(&[3]));
        assert_eq!(count, 1);
    }

    #[test]
    fn max_source_side_is_maximal() {
        let mut g = IncidenceDigraph::with_vertices(4);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        g.add_edge(VertexId(2), VertexId(3));
        let out = max_flow_unit(&g, &[(VertexId(0), u32::MAX)], &[(VertexId(3), u32::MAX)]);
        assert_eq!(out.value, 1);
        assert_eq!(out.max_source_side, vset(&[0, 1, 2]));
    }

    #[test]
    fn witness_reaches_designated_sinks() {
        let mut g = IncidenceDigraph::with_vertices(5);
        for (a, b) in [(0, 1), (1, 2), (0, 3), (3, 4)] {
            g.add_edge(VertexId(a), VertexId(b));
        }
        let (count, linkage) = max_edge_disjoint_paths(&g, &vset(&[0]), &vset(&[2, 4]));
        assert_eq!(count, 2);
        let ends: BTreeSet<_> = linkage.paths.iter().map(|p| p.end(&g).unwrap()).collect();
        assert_eq!(ends, vset(&[2, 4]));
    }

    #[test]
    fn unit_source_caps_are_respected() {
        let mut g = IncidenceDigraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(2));
        g.add_edge(VertexId(0), VertexId(2));
        g.add_edge(VertexId(1), VertexId(2));
        let out = max_flow_unit(
            &g,
            &[(VertexId(0), 1), (VertexId(1), 1)],
            &[(VertexId(2), u32::MAX)],
        );
        assert_eq!(out.value, 2);
    }
}
