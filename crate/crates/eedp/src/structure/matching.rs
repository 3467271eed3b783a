//! Coordinate matchings, jump taxonomy, jump sequences and cycles,
//! coordinate paths, and the Eulerian closure.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Trail, TrailKind};
use crate::structure::wall::{Sign, Wall};
use crate::EedpError;

/// A matching from in-coordinates to out-coordinates, stored by tail.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoordinateMatching {
    by_tail: BTreeMap<VertexId, VertexId>,
}

impl CoordinateMatching {
    pub fn new(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, EedpError> {
        let mut by_tail = BTreeMap::new();
        let mut heads = BTreeSet::new();
        for (t, h) in pairs {
            if by_tail.insert(t, h).is_some() {
                return Err(EedpError::Structure(format!(
                    "matching uses in-coordinate {t} twice"
                )));
            }
            if !heads.insert(h) {
                return Err(EedpError::Structure(format!(
                    "matching uses out-coordinate {h} twice"
                )));
            }
        }
        Ok(CoordinateMatching { by_tail })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.by_tail.iter().map(|(&t, &h)| (t, h))
    }

    pub fn head_of(&self, tail: VertexId) -> Option<VertexId> {
        self.by_tail.get(&tail).copied()
    }

    pub fn len(&self) -> usize {
        self.by_tail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_tail.is_empty()
    }

    /// Complete for the wall: every in-coordinate is a tail and every
    /// out-coordinate a head of exactly one matching edge.
    pub fn is_complete(&self, wall: &Wall) -> bool {
        let tails: BTreeSet<_> = self.by_tail.keys().copied().collect();
        let heads: BTreeSet<_> = self.by_tail.values().copied().collect();
        wall.in_coordinates().collect::<BTreeSet<_>>() == tails
            && wall.out_coordinates().collect::<BTreeSet<_>>() == heads
    }

    /// Wall graph plus one fresh edge per matching pair; returns the host
    /// and the matching-pair -> edge id map.
    pub fn realize(&self, wall: &Wall) -> (IncidenceDigraph, BTreeMap<(VertexId, VertexId), EdgeId>) {
        let mut g = wall.graph.clone();
        let mut ids = BTreeMap::new();
        for (t, h) in self.pairs() {
            let e = g.add_edge(t, h);
            ids.insert((t, h), e);
        }
        (g, ids)
    }
}

/// Jump classification per the wall taxonomy. Up-paths climb one row on
/// their own ring; Type I and II jumps are the short degenerate climbs;
/// everything else is Type 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpKind {
    UpPath,
    TypeI,
    TypeII,
    Type0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpRecord {
    pub tail: VertexId,
    pub head: VertexId,
    /// (ring, row) of the tail in-coordinate.
    pub from: (usize, usize),
    /// (ring, row) of the head out-coordinate.
    pub to: (usize, usize),
    pub kind: JumpKind,
}

/// Classifies one matching edge. Row arithmetic is cyclic, ring arithmetic
/// is not.
pub fn classify_jump(
    wall: &Wall,
    edge: (VertexId, VertexId),
) -> Result<JumpRecord, EedpError> {
    let (tail, head) = edge;
    let from = wall
        .coord_of(tail)
        .filter(|c| c.sign == Sign::In)
        .ok_or_else(|| EedpError::Structure(format!("{tail} is not an in-coordinate")))?;
    let to = wall
        .coord_of(head)
        .filter(|c| c.sign == Sign::Out)
        .ok_or_else(|| EedpError::Structure(format!("{head} is not an out-coordinate")))?;
    let (i, p) = (from.ring, from.row);
    let (j, q) = (to.ring, to.row);
    let kind = if j == i && q == wall.row_add(p, -1) {
        JumpKind::UpPath
    } else if q == wall.row_add(p, -2)
        && ((p % 2 == 1 && i >= 2 && j == i - 1) || (p % 2 == 0 && j == i + 1))
    {
        JumpKind::TypeI
    } else if j == i && q == wall.row_add(p, -3) {
        JumpKind::TypeII
    } else {
        JumpKind::Type0
    };
    Ok(JumpRecord {
        tail,
        head,
        from: (i, p),
        to: (j, q),
        kind,
    })
}

/// The unique jump sequence of length `l` starting at `edge`: each
/// successor starts at the in-coordinate one row below the previous head.
/// `None` when the matching is not saturated enough.
pub fn jump_sequence(
    wall: &Wall,
    matching: &CoordinateMatching,
    edge: (VertexId, VertexId),
    l: usize,
) -> Option<Vec<(VertexId, VertexId)>> {
    let mut seq = Vec::with_capacity(l);
    let mut current = edge;
    for _ in 0..l {
        seq.push(current);
        let head = wall.coord_of(current.1)?;
        let next_tail = wall.coord_vertex(head.ring, wall.row_add(head.row, 1), Sign::In)?;
        let next_head = matching.head_of(next_tail)?;
        current = (next_tail, next_head);
    }
    Some(seq)
}

/// True iff the jump sequence of length `r` starting at `edge` exists.
pub fn is_saturated(
    wall: &Wall,
    matching: &CoordinateMatching,
    edge: (VertexId, VertexId),
    r: usize,
) -> bool {
    jump_sequence(wall, matching, edge, r).is_some()
}

/// The unique jump cycle through `edge` in the realized graph `wall + M`:
/// matching edges alternate with the one-row wall arcs between heads and
/// the next tails, closed at the first repetition of `edge`. For an
/// up-path this is the fixed length-2 convention (the up-path plus its
/// ring arc).
pub fn jump_cycle(
    wall: &Wall,
    matching: &CoordinateMatching,
    edge_ids: &BTreeMap<(VertexId, VertexId), EdgeId>,
    edge: (VertexId, VertexId),
) -> Result<Trail, EedpError> {
    if matching.head_of(edge.0) != Some(edge.1) {
        return Err(EedpError::Structure("edge not in matching".into()));
    }
    let mut edges = Vec::new();
    let mut current = edge;
    loop {
        let id = *edge_ids.get(&current).ok_or_else(|| {
            EedpError::Structure("matching edge has no realized id".into())
        })?;
        edges.push(id);
        let head = wall.coord_of(current.1).unwrap();
        let next_tail = wall
            .coord_vertex(head.ring, wall.row_add(head.row, 1), Sign::In)
            .ok_or_else(|| EedpError::Structure("missing in-coordinate below head".into()))?;
        edges.extend(wall.walk_ring(head.ring, current.1, next_tail));
        let next_head = matching.head_of(next_tail).ok_or_else(|| {
            EedpError::Structure("matching is not complete enough for a jump cycle".into())
        })?;
        current = (next_tail, next_head);
        if current == edge {
            break;
        }
        if edges.len() > 4 * (wall.graph.edge_count() + matching.len()) {
            return Err(EedpError::Structure("jump cycle did not close".into()));
        }
    }
    Ok(Trail {
        edges,
        kind: TrailKind::Cycle,
    })
}

/// A complete set of coordinate paths for a wall inside a host graph:
/// pairwise edge-disjoint walks from each in-coordinate to some
/// out-coordinate, edge-disjoint from the wall.
pub fn complete_coordinate_paths(
    host: &IncidenceDigraph,
    wall: &Wall,
    wall_edges: &BTreeSet<EdgeId>,
) -> Result<Vec<Trail>, EedpError> {
    let mut used: BTreeSet<EdgeId> = wall_edges.clone();
    let out_coords: BTreeSet<VertexId> = wall.out_coordinates().collect();
    let mut finished_outs: BTreeSet<VertexId> = BTreeSet::new();
    let mut paths = Vec::new();
    for start in wall.in_coordinates() {
        let mut edges = Vec::new();
        let mut at = start;
        loop {
            let Some(e) = host.out_edges(at).find(|e| !used.contains(e)) else {
                return Err(EedpError::Structure(format!(
                    "coordinate walk stuck at {at}; host is not Eulerian away from the wall"
                )));
            };
            used.insert(e);
            edges.push(e);
            at = host.head(e).unwrap();
            if out_coords.contains(&at)
                && !finished_outs.contains(&at)
                && host.out_edges(at).all(|e| used.contains(&e))
            {
                break;
            }
        }
        finished_outs.insert(at);
        paths.push(Trail {
            edges,
            kind: TrailKind::Path,
        });
    }
    Ok(paths)
}

/// The coordinate matching induced by a set of coordinate paths.
pub fn induced_matching(
    host: &IncidenceDigraph,
    paths: &[Trail],
) -> Result<CoordinateMatching, EedpError> {
    CoordinateMatching::new(
        paths
            .iter()
            .map(|p| (p.start(host).unwrap(), p.end(host).unwrap())),
    )
}

/// Dissolves every internal degree-2 vertex of a wall-shaped subgraph,
/// recording which original edges each skeleton edge compresses.
pub fn skeleton(
    wall_graph: &IncidenceDigraph,
) -> (IncidenceDigraph, BTreeMap<EdgeId, Vec<EdgeId>>) {
    let mut g = wall_graph.clone();
    let mut provenance: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    loop {
        let Some(v) = g
            .vertices()
            .find(|&v| g.in_degree(v) == 1 && g.out_degree(v) == 1 && {
                let e_in = g.in_edges(v).next().unwrap();
                g.tail(e_in) != Some(v)
            })
        else {
            break;
        };
        let e_in = g.in_edges(v).next().unwrap();
        let e_out = g.out_edges(v).next().unwrap();
        let expand = |provenance: &BTreeMap<EdgeId, Vec<EdgeId>>, e: EdgeId| -> Vec<EdgeId> {
            provenance.get(&e).cloned().unwrap_or_else(|| vec![e])
        };
        let mut combined = expand(&provenance, e_in);
        combined.extend(expand(&provenance, e_out));
        provenance.remove(&e_in);
        provenance.remove(&e_out);
        let new_edge = g.split_off(e_in, e_out).expect("degree-2 dissolution");
        provenance.insert(new_edge, combined);
    }
    (g, provenance)
}

/// Eulerian closure of a wall with respect to a complete set of coordinate
/// paths: the skeleton plus one matching edge per path, each tagged with
/// the path it compresses so the splits can be reversed.
#[derive(Debug, Clone)]
pub struct Closure {
    /// Skeleton wall plus matching edges.
    pub graph: IncidenceDigraph,
    pub matching: CoordinateMatching,
    /// Matching edge id -> the host edges of the original coordinate path.
    pub path_provenance: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Skeleton edge id -> the wall edges it compresses.
    pub wall_provenance: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Matching pair -> edge id in `graph`.
    pub matching_edges: BTreeMap<(VertexId, VertexId), EdgeId>,
}

impl Closure {
    /// Every original edge reachable by reversing the closure: wall edges
    /// plus all coordinate path edges.
    pub fn reversed_edge_set(&self) -> BTreeSet<EdgeId> {
        let mut set = BTreeSet::new();
        for e in self.graph.edges() {
            if let Some(path) = self.path_provenance.get(&e) {
                set.extend(path.iter().copied());
            } else if let Some(wall_edges) = self.wall_provenance.get(&e) {
                set.extend(wall_edges.iter().copied());
            } else {
                set.insert(e);
            }
        }
        set
    }
}

pub fn eulerian_closure(
    host: &IncidenceDigraph,
    wall_graph: &IncidenceDigraph,
    paths: &[Trail],
) -> Result<Closure, EedpError> {
    let matching = induced_matching(host, paths)?;
    let (mut graph, wall_provenance) = skeleton(wall_graph);
    let mut path_provenance = BTreeMap::new();
    let mut matching_edges = BTreeMap::new();
    for p in paths {
        let t = p.start(host).unwrap();
        let h = p.end(host).unwrap();
        let e = graph.add_edge(t, h);
        path_provenance.insert(e, p.edges.clone());
        matching_edges.insert((t, h), e);
    }
    Ok(Closure {
        graph,
        matching,
        path_provenance,
        wall_provenance,
        matching_edges,
    })
}
