//! Elementary cylindrical grids and walls with coordinate bookkeeping.
//!
//! A wall of size `rings x half_rows` carries `rings` concentric directed
//! cycles and `2*half_rows` horizontal paths, alternating outward then
//! inward. Interior crossings are split into an in/out coordinate pair
//! joined by a split edge; boundary crossings stay single, degree-3
//! vertices. Row indices are cyclic with 1-based wraparound; ring indices
//! are not.

use std::collections::BTreeMap;

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Trail, TrailKind};
use crate::EedpError;

/// In-coordinates (`x^-`, in-degree 2 in the wall) versus out-coordinates
/// (`x^+`, out-degree 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    In,
    Out,
}

/// Wall coordinate of a vertex: 1-based ring and row plus the sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coord {
    pub ring: usize,
    pub row: usize,
    pub sign: Sign,
}

/// Elementary cylindrical grid of order k: k vertex-disjoint cycles of
/// length 2k joined by 2k horizontal paths of length k-1.
pub struct Grid {
    pub graph: IncidenceDigraph,
    pub rings: Vec<Trail>,
    pub horizontals: Vec<Trail>,
}

pub fn build_elementary_grid(k: usize) -> Grid {
    assert!(k >= 2, "grid order must be at least 2");
    let rows = 2 * k;
    let mut g = IncidenceDigraph::new();
    let mut at = vec![vec![VertexId(0); rows]; k];
    for (c, ring) in at.iter_mut().enumerate() {
        for (r, slot) in ring.iter_mut().enumerate() {
            let _ = (c, r);
            *slot = g.add_vertex();
        }
    }
    let mut rings = Vec::new();
    for ring in &at {
        let mut edges = Vec::new();
        for r in 0..rows {
            edges.push(g.add_edge(ring[r], ring[(r + 1) % rows]));
        }
        rings.push(Trail {
            edges,
            kind: TrailKind::Cycle,
        });
    }
    let mut horizontals = Vec::new();
    for r in 0..rows {
        let mut edges = Vec::new();
        if r % 2 == 0 {
            // 1-based row r+1 is odd: outer-to-inner, ring index increasing.
            for c in 0..k - 1 {
                edges.push(g.add_edge(at[c][r], at[c + 1][r]));
            }
        } else {
            for c in (1..k).rev() {
                edges.push(g.add_edge(at[c][r], at[c - 1][r]));
            }
        }
        horizontals.push(Trail {
            edges,
            kind: TrailKind::Path,
        });
    }
    Grid {
        graph: g,
        rings,
        horizontals,
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Split { coming: VertexId, going: VertexId },
    Single(VertexId),
}

impl Slot {
    fn in_role(self) -> VertexId {
        match self {
            Slot::Split { coming, .. } => coming,
            Slot::Single(v) => v,
        }
    }

    fn out_role(self) -> VertexId {
        match self {
            Slot::Split { going, .. } => going,
            Slot::Single(v) => v,
        }
    }
}

/// Elementary cylindrical wall with coordinates, walkers, and the canonical
/// planar layout used for orientation computations.
pub struct Wall {
    pub graph: IncidenceDigraph,
    rings: usize,
    rows: usize,
    slots: Vec<Vec<Slot>>,
    coord_of: BTreeMap<VertexId, Coord>,
    coords: BTreeMap<(usize, usize, Sign), VertexId>,
    pub ring_cycles: Vec<Trail>,
    pub horizontal_paths: Vec<Trail>,
}

/// Square elementary wall of order k (k rings, 2k rows).
pub fn build_elementary_wall(k: usize) -> Wall {
    Wall::elementary(k, k)
}

impl Wall {
    /// Wall with `rings` cycles and `2 * half_rows` horizontal paths.
    pub fn elementary(rings: usize, half_rows: usize) -> Wall {
        assert!(rings >= 2 && half_rows >= 1, "wall must have size >= 2");
        let rows = 2 * half_rows;
        let mut g = IncidenceDigraph::new();
        let mut slots: Vec<Vec<Slot>> = Vec::with_capacity(rings);
        let mut coord_of = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for c in 1..=rings {
            let mut ring = Vec::with_capacity(rows);
            for r in 1..=rows {
                let odd = r % 2 == 1;
                let slot = if c == 1 || c == rings {
                    let v = g.add_vertex();
                    // Ring 1 starts outward paths (odd rows), ring `rings`
                    // ends them; the single boundary vertex takes the sign
                    // its spare horizontal incidence dictates.
                    let sign = if (c == 1) == odd { Sign::Out } else { Sign::In };
                    coord_of.insert(v, Coord { ring: c, row: r, sign });
                    coords.insert((c, r, sign), v);
                    Slot::Single(v)
                } else {
                    let coming = g.add_vertex();
                    let going = g.add_vertex();
                    coord_of.insert(coming, Coord { ring: c, row: r, sign: Sign::In });
                    coord_of.insert(going, Coord { ring: c, row: r, sign: Sign::Out });
                    coords.insert((c, r, Sign::In), coming);
                    coords.insert((c, r, Sign::Out), going);
                    Slot::Split { coming, going }
                };
                ring.push(slot);
            }
            slots.push(ring);
        }
        // Split edges, then ring edges, then horizontal edges.
        for ring in &slots {
            for slot in ring {
                if let Slot::Split { coming, going } = *slot {
                    g.add_edge(coming, going);
                }
            }
        }
        let mut ring_cycles = Vec::new();
        for ring in &slots {
            for r in 0..rows {
                g.add_edge(ring[r].out_role(), ring[(r + 1) % rows].in_role());
            }
        }
        for r in 0..rows {
            if r % 2 == 0 {
                for c in 0..rings - 1 {
                    g.add_edge(slots[c][r].out_role(), slots[c + 1][r].in_role());
                }
            } else {
                for c in (1..rings).rev() {
                    g.add_edge(slots[c][r].out_role(), slots[c - 1][r].in_role());
                }
            }
        }
        let mut wall = Wall {
            graph: g,
            rings,
            rows,
            slots,
            coord_of,
            coords,
            ring_cycles,
            horizontal_paths: Vec::new(),
        };
        ring_cycles = (1..=rings)
            .map(|c| {
                let start = wall.in_role(c, 1);
                let edges = wall.walk_ring(c, start, start);
                Trail {
                    edges,
                    kind: TrailKind::Cycle,
                }
            })
            .collect();
        let horizontal_paths = (1..=rows)
            .map(|r| {
                let (from, to) = if r % 2 == 1 {
                    (wall.out_role(1, r), wall.in_role(rings, r))
                } else {
                    (wall.out_role(rings, r), wall.in_role(1, r))
                };
                let edges = wall.walk_row(r, from, to);
                Trail {
                    edges,
                    kind: TrailKind::Path,
                }
            })
            .collect();
        wall.ring_cycles = ring_cycles;
        wall.horizontal_paths = horizontal_paths;
        wall
    }

    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Cyclic row arithmetic with 1-based wraparound.
    pub fn row_add(&self, r: usize, k: i64) -> usize {
        let rows = self.rows as i64;
        let zero = (r as i64 - 1 + k).rem_euclid(rows);
        (zero + 1) as usize
    }

    pub fn coord_vertex(&self, ring: usize, row: usize, sign: Sign) -> Option<VertexId> {
        self.coords.get(&(ring, row, sign)).copied()
    }

    /// `x^-_{ring,row}`; panics if that coordinate does not exist.
    pub fn x_in(&self, ring: usize, row: usize) -> VertexId {
        self.coord_vertex(ring, row, Sign::In)
            .unwrap_or_else(|| panic!("no in-coordinate at ring {ring}, row {row}"))
    }

    /// `x^+_{ring,row}`; panics if that coordinate does not exist.
    pub fn x_out(&self, ring: usize, row: usize) -> VertexId {
        self.coord_vertex(ring, row, Sign::Out)
            .unwrap_or_else(|| panic!("no out-coordinate at ring {ring}, row {row}"))
    }

    pub fn coord_of(&self, v: VertexId) -> Option<Coord> {
        self.coord_of.get(&v).copied()
    }

    /// Vertex playing the arriving role at slot (ring, row).
    pub fn in_role(&self, ring: usize, row: usize) -> VertexId {
        self.slots[ring - 1][row - 1].in_role()
    }

    /// Vertex playing the departing role at slot (ring, row).
    pub fn out_role(&self, ring: usize, row: usize) -> VertexId {
        self.slots[ring - 1][row - 1].out_role()
    }

    pub fn in_coordinates(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.coords
            .iter()
            .filter(|((_, _, s), _)| *s == Sign::In)
            .map(|(_, &v)| v)
    }

    pub fn out_coordinates(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.coords
            .iter()
            .filter(|((_, _, s), _)| *s == Sign::Out)
            .map(|(_, &v)| v)
    }

    fn wall_edge(&self, from: VertexId, to: VertexId) -> EdgeId {
        self.graph
            .out_edges(from)
            .find(|&e| self.graph.head(e) == Some(to))
            .unwrap_or_else(|| panic!("no wall edge {from} -> {to}"))
    }

    /// Edges along ring `c` in cycle direction from `from` to `to` (both
    /// coordinate vertices of ring `c`). With `from == to` the whole ring
    /// cycle is returned.
    pub fn walk_ring(&self, c: usize, from: VertexId, to: VertexId) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        let mut at = from;
        loop {
            if at == to && !edges.is_empty() {
                break;
            }
            let coord = self.coord_of(at).expect("walk_ring start must be a coordinate");
            assert_eq!(coord.ring, c, "walk_ring left ring {c}");
            let next = match self.slots[c - 1][coord.row - 1] {
                Slot::Split { coming, going } if at == coming => going,
                _ => self.in_role(c, self.row_add(coord.row, 1)),
            };
            edges.push(self.wall_edge(at, next));
            at = next;
            if edges.len() > self.graph.edge_count() {
                panic!("walk_ring did not terminate");
            }
        }
        edges
    }

    /// Edges along row `r` in its flow direction from `from` to `to`.
    pub fn walk_row(&self, r: usize, from: VertexId, to: VertexId) -> Vec<EdgeId> {
        let step: i64 = if r % 2 == 1 { 1 } else { -1 };
        let mut edges = Vec::new();
        let mut at = from;
        while at != to {
            let coord = self.coord_of(at).expect("walk_row start must be a coordinate");
            assert_eq!(coord.row, r, "walk_row left row {r}");
            let next = match coord.sign {
                Sign::In => {
                    let o = self.out_role(coord.ring, r);
                    if o == at {
                        // Boundary vertex: straight on across the crossing.
                        self.in_role((coord.ring as i64 + step) as usize, r)
                    } else {
                        o
                    }
                }
                Sign::Out => self.in_role((coord.ring as i64 + step) as usize, r),
            };
            edges.push(self.wall_edge(at, next));
            at = next;
            if edges.len() > self.graph.edge_count() {
                panic!("walk_row did not terminate");
            }
        }
        edges
    }

    /// The complete all-up-paths coordinate matching: every in-coordinate
    /// pairs with the out-coordinate one row up on its own ring.
    pub fn up_path_matching(&self) -> Vec<(VertexId, VertexId)> {
        self.in_coordinates()
            .map(|v| {
                let c = self.coord_of(v).unwrap();
                let up = self.row_add(c.row, -1);
                (v, self.x_out(c.ring, up))
            })
            .collect()
    }

    /// Canonical integer layout realising the unique planar embedding with
    /// the outer face outside ring 1: x grows with the ring index, y with
    /// the row index, and the out-coordinate of a split pair sits one step
    /// further along its ring.
    pub fn layout(&self, v: VertexId) -> Option<(i64, i64)> {
        let c = self.coord_of(v)?;
        let x = 4 * c.ring as i64;
        let y = 4 * c.row as i64 + if c.sign == Sign::Out { 1 } else { 0 };
        Some((x, y))
    }

    /// Twice the signed area of a closed trail in the canonical layout;
    /// `host` supplies incidences for edges beyond the wall, such as
    /// realized matching edges. Positive means the traversal keeps the
    /// enclosed region to its left when x points right and y points down
    /// the page.
    pub fn signed_area2(&self, host: &IncidenceDigraph, cycle: &Trail) -> Result<i64, EedpError> {
        if cycle.kind != TrailKind::Cycle {
            return Err(EedpError::Structure("signed area needs a cycle".into()));
        }
        let walk = cycle.vertex_walk(host);
        let mut sum = 0i64;
        for pair in walk.windows(2) {
            let (ax, ay) = self.layout(pair[0]).ok_or_else(|| {
                EedpError::Structure(format!("vertex {} has no wall layout", pair[0]))
            })?;
            let (bx, by) = self.layout(pair[1]).ok_or_else(|| {
                EedpError::Structure(format!("vertex {} has no wall layout", pair[1]))
            })?;
            sum += ax * by - bx * ay;
        }
        Ok(sum)
    }

    /// Rotation system of the canonical embedding: the cyclic order of
    /// incident edges around each vertex, counterclockwise in the layout.
    pub fn rotation_system(&self) -> BTreeMap<VertexId, Vec<EdgeId>> {
        let mut rot = BTreeMap::new();
        for v in self.graph.vertices() {
            let (vx, vy) = self.layout(v).unwrap();
            let mut ends: Vec<(EdgeId, VertexId)> = self
                .graph
                .out_edges(v)
                .map(|e| (e, self.graph.head(e).unwrap()))
                .chain(self.graph.in_edges(v).map(|e| (e, self.graph.tail(e).unwrap())))
                .collect();
            ends.sort_by(|&(e1, u1), &(e2, u2)| {
                let p1 = self.layout(u1).unwrap();
                let p2 = self.layout(u2).unwrap();
                angle_order((p1.0 - vx, p1.1 - vy), (p2.0 - vx, p2.1 - vy))
                    .then(e1.cmp(&e2))
            });
            rot.insert(v, ends.into_iter().map(|(e, _)| e).collect());
        }
        rot
    }
}

/// Compares direction vectors by angle starting from the positive x axis.
fn angle_order(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    fn half(p: (i64, i64)) -> u8 {
        // 0 for the upper half plane including +x, 1 for the lower.
        if p.1 > 0 || (p.1 == 0 && p.0 < 0) {
            1
        } else {
            0
        }
    }
    half(a)
        .cmp(&half(b))
        .then_with(|| (b.0 * a.1 - a.0 * b.1).cmp(&0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_match_definition() {
        for k in [2, 3, 4] {
            let grid = build_elementary_grid(k);
            assert_eq!(grid.graph.vertex_count(), 2 * k * k);
            assert_eq!(grid.rings.len(), k);
            for ring in &grid.rings {
                assert_eq!(ring.len(), 2 * k);
                ring.validate(&grid.graph).unwrap();
            }
            assert_eq!(grid.horizontals.len(), 2 * k);
            for h in &grid.horizontals {
                assert_eq!(h.len(), k - 1);
                h.validate(&grid.graph).unwrap();
            }
        }
    }

    #[test]
    fn minimal_grid_degrees() {
        let grid = build_elementary_grid(2);
        for v in grid.graph.vertices() {
            let d = grid.graph.degree(v);
            assert!(d == 3 || d == 4, "grid vertex degree {d}");
        }
    }

    #[test]
    fn wall_is_three_regular() {
        let wall = build_elementary_wall(4);
        for v in wall.graph.vertices() {
            assert_eq!(wall.graph.degree(v), 3);
        }
    }

    #[test]
    fn wall_coordinate_signs() {
        let wall = build_elementary_wall(4);
        for v in wall.graph.vertices() {
            let c = wall.coord_of(v).unwrap();
            match c.sign {
                Sign::In => assert_eq!(wall.graph.in_degree(v), 2),
                Sign::Out => assert_eq!(wall.graph.out_degree(v), 2),
            }
        }
    }

    #[test]
    fn wall_plus_complete_matching_is_eulerian() {
        for k in 2..=6 {
            let wall = build_elementary_wall(k);
            let matching = wall.up_path_matching();
            assert!(wall.graph.is_eulerian_with(&matching), "order {k}");
        }
    }

    #[test]
    fn ring_cycles_and_rows_validate() {
        let wall = Wall::elementary(4, 6);
        assert_eq!(wall.ring_cycles.len(), 4);
        assert_eq!(wall.horizontal_paths.len(), 12);
        for c in &wall.ring_cycles {
            c.validate(&wall.graph).unwrap();
        }
        for h in &wall.horizontal_paths {
            h.validate(&wall.graph).unwrap();
        }
    }

    #[test]
    fn walkers_agree_with_adjacency() {
        let wall = build_elementary_wall(5);
        let from = wall.x_in(2, 3);
        let to = wall.x_out(2, 7);
        let edges = wall.walk_ring(2, from, to);
        let trail = Trail {
            edges,
            kind: TrailKind::Path,
        };
        trail.validate(&wall.graph).unwrap();
        assert_eq!(trail.start(&wall.graph), Some(from));
        assert_eq!(trail.end(&wall.graph), Some(to));

        let from = wall.x_out(1, 3);
        let to = wall.x_in(5, 3);
        let trail = Trail {
            edges: wall.walk_row(3, from, to),
            kind: TrailKind::Path,
        };
        trail.validate(&wall.graph).unwrap();
        assert_eq!(trail.end(&wall.graph), Some(to));
    }

    #[test]
    fn rotation_system_covers_every_incidence() {
        let wall = build_elementary_wall(3);
        let rot = wall.rotation_system();
        for v in wall.graph.vertices() {
            assert_eq!(rot[&v].len(), wall.graph.degree(v));
        }
    }

    #[test]
    fn cyclic_row_arithmetic() {
        let wall = build_elementary_wall(3);
        assert_eq!(wall.row_add(1, -1), 6);
        assert_eq!(wall.row_add(6, 1), 1);
        assert_eq!(wall.row_add(4, 9), 1);
    }
}
