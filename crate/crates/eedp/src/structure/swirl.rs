//! Canonical swirls from all-up-path tiles, swirl verification, distances,
//! and attachment extensions.
//!
//! On a `(t+1) x t` tile whose coordinate matching consists solely of
//! up-paths, the tile plus its up-paths contains t concentric cycles of
//! alternating orientation: odd-indexed cycles ride a ladder on their left
//! flank and a wall ring on their right, even-indexed ones the other way
//! around, and the leftover ring edges are absorbed as two-edge detours so
//! the inner t-tile ends up inside the swirl.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::oracle::{has_unordered_cross, Budget, Verdict};
use crate::path::{Trail, TrailKind};
use crate::structure::cross::{tile_edges, TileBounds};
use crate::structure::matching::{classify_jump, CoordinateMatching, JumpKind};
use crate::structure::wall::{Sign, Wall};
use crate::EedpError;

/// Concentric edge-disjoint cycles, inner to outer, with alternating
/// orientation.
#[derive(Debug, Clone)]
pub struct Swirl {
    /// Cycles ordered inner to outer.
    pub cycles: Vec<Trail>,
    /// The inner t-tile contained in the swirl.
    pub tile: TileBounds,
    /// The (t+1) x t host tile the construction consumed.
    pub host_tile: TileBounds,
}

impl Swirl {
    pub fn order(&self) -> usize {
        self.cycles.len()
    }

    pub fn outer(&self) -> &Trail {
        self.cycles.last().expect("swirl has at least two cycles")
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.cycles.iter().flat_map(|c| c.edges.iter().copied()).collect()
    }

    pub fn vertex_set(&self, host: &IncidenceDigraph) -> BTreeSet<VertexId> {
        self.cycles
            .iter()
            .flat_map(|c| c.vertex_set(host))
            .collect()
    }
}

struct SwirlBuilder<'w> {
    wall: &'w Wall,
    host: &'w IncidenceDigraph,
    up: BTreeMap<(usize, usize), EdgeId>,
    used: BTreeSet<EdgeId>,
    /// ring offset: local ring lc in 0..=t maps to global a + lc.
    a: usize,
    /// row offset: local row lr in 1..=2t maps to global y + lr - 1.
    y: usize,
    t: usize,
}

impl<'w> SwirlBuilder<'w> {
    fn ring(&self, lc: usize) -> usize {
        self.a + lc
    }

    fn row(&self, lr: usize) -> usize {
        self.y + lr - 1
    }

    fn x_in(&self, lc: usize, lr: usize) -> VertexId {
        self.wall.x_in(self.ring(lc), self.row(lr))
    }

    fn x_out(&self, lc: usize, lr: usize) -> VertexId {
        self.wall.x_out(self.ring(lc), self.row(lr))
    }

    fn up_edge(&self, lc: usize, lr: usize) -> Result<EdgeId, EedpError> {
        self.up.get(&(lc, lr)).copied().ok_or_else(|| {
            EedpError::Structure(format!(
                "tile matching is missing the up-path at local ring {lc}, row {lr}"
            ))
        })
    }

    fn claim(&mut self, edges: &[EdgeId]) -> Result<(), EedpError> {
        for &e in edges {
            if !self.used.insert(e) {
                return Err(EedpError::Structure(format!(
                    "swirl construction would reuse edge {e}"
                )));
            }
        }
        Ok(())
    }

    /// Ladder ascent on the rails (lad-1, lad) from the in-coordinate at
    /// local row `from_lr` on rail `enter` up to local row `to_lr`,
    /// alternating up-paths and one-step crossings.
    fn ladder_ascent(
        &self,
        lad: usize,
        mut at_ring: usize,
        mut lr: usize,
        to_lr: usize,
    ) -> Result<(Vec<EdgeId>, usize), EedpError> {
        let mut edges = Vec::new();
        loop {
            // take the up-path on the current rail
            edges.push(self.up_edge(at_ring, lr)?);
            lr -= 1;
            if lr == to_lr {
                return Ok((edges, at_ring));
            }
            // cross to the other rail along the current row
            let other = if at_ring == lad { lad - 1 } else { lad };
            let from = self.x_out(at_ring, lr);
            let to = self.x_in(other, lr);
            edges.extend(self.wall.walk_row(self.row(lr), from, to));
            at_ring = other;
        }
    }

    /// Odd-index cycle: top row i rightward, right ring down, bottom row
    /// leftward, ladder back up. Runs clockwise in the layout.
    fn odd_cycle(&mut self, i: usize) -> Result<Trail, EedpError> {
        let t = self.t;
        let lad = (i + 1) / 2;
        let rgt = t + 1 - lad;
        let (top, bot) = (i, 2 * t + 1 - i);
        let mut edges = Vec::new();
        let start = self.x_in(lad, top);
        edges.extend(
            self.wall
                .walk_row(self.row(top), start, self.x_in(rgt, top)),
        );
        edges.extend(self.wall.walk_ring(
            self.ring(rgt),
            self.x_in(rgt, top),
            self.x_out(rgt, bot),
        ));
        edges.extend(self.wall.walk_row(
            self.row(bot),
            self.x_out(rgt, bot),
            self.x_in(lad - 1, bot),
        ));
        // ascend: up-paths on rail lad-1 at even rows, rail lad at odd rows
        let (ladder, end_ring) = self.ladder_ascent(lad, lad - 1, bot, top)?;
        edges.extend(ladder);
        debug_assert_eq!(end_ring, lad - 1);
        // the final crossing back to the start on the top row
        edges.extend(self.wall.walk_row(
            self.row(top),
            self.x_out(lad - 1, top),
            start,
        ));
        self.claim(&edges)?;
        Ok(Trail {
            edges,
            kind: TrailKind::Cycle,
        })
    }

    /// Even-index cycle: left ring down, bottom row rightward, ladder up,
    /// top row leftward. Runs counterclockwise in the layout.
    fn even_cycle(&mut self, i: usize) -> Result<Trail, EedpError> {
        let t = self.t;
        let lft = i / 2;
        let lad = t + 1 - i / 2;
        let (top, bot) = (i, 2 * t + 1 - i);
        let mut edges = Vec::new();
        let start = self.x_in(lft, top);
        edges.extend(self.wall.walk_ring(
            self.ring(lft),
            start,
            self.x_out(lft, bot),
        ));
        edges.extend(self.wall.walk_row(
            self.row(bot),
            self.x_out(lft, bot),
            self.x_in(lad, bot),
        ));
        let (ladder, end_ring) = self.ladder_ascent(lad, lad, bot, top)?;
        edges.extend(ladder);
        debug_assert_eq!(end_ring, lad);
        edges.extend(self.wall.walk_row(
            self.row(top),
            self.x_out(lad, top),
            start,
        ));
        self.claim(&edges)?;
        Ok(Trail {
            edges,
            kind: TrailKind::Cycle,
        })
    }

    /// Absorbs every unused ring edge of local rings 1..=t as a two-edge
    /// detour (the ring edge plus the up-path straight back) grafted onto
    /// the cycle passing its tail.
    fn graft_missing(&mut self, cycles: &mut [Trail]) -> Result<(), EedpError> {
        let t = self.t;
        for lc in 1..=t {
            for lr in 1..2 * t {
                let from = self.x_out(lc, lr);
                let to = self.x_in(lc, lr + 1);
                let ring_edge = self
                    .host
                    .out_edges(from)
                    .find(|&e| self.host.head(e) == Some(to))
                    .expect("consecutive ring slots are adjacent");
                if self.used.contains(&ring_edge) {
                    continue;
                }
                let up = self.up_edge(lc, lr + 1)?;
                let detour = [ring_edge, up];
                self.claim(&detour)?;
                let target = cycles
                    .iter_mut()
                    .find(|c| c.vertex_walk(self.host).contains(&from))
                    .ok_or_else(|| {
                        EedpError::Structure(format!(
                            "no swirl cycle passes {from} for the ring detour"
                        ))
                    })?;
                let walk = target.vertex_walk(self.host);
                let pos = walk.iter().position(|&v| v == from).unwrap();
                target.edges.splice(pos..pos, detour);
            }
        }
        Ok(())
    }
}

/// Builds the canonical t-swirl induced by the inner t-tile of the
/// `(t+1) x t` tile starting at `ring_lo` and odd row `row_lo`.
///
/// `host` and `edge_ids` come from [`CoordinateMatching::realize`]. Every
/// matching edge with its tail in the tile must be an up-path; a jump
/// anywhere in the tile is rejected.
pub fn canonical_swirl(
    wall: &Wall,
    matching: &CoordinateMatching,
    host: &IncidenceDigraph,
    edge_ids: &BTreeMap<(VertexId, VertexId), EdgeId>,
    t: usize,
    ring_lo: usize,
    row_lo: usize,
) -> Result<Swirl, EedpError> {
    if t < 2 {
        return Err(EedpError::Structure("swirl order must be at least 2".into()));
    }
    if row_lo % 2 != 1 {
        return Err(EedpError::Structure(
            "canonical tile must start on an odd row".into(),
        ));
    }
    let (a, y) = (ring_lo, row_lo);
    if a + t > wall.rings() || y + 2 * t - 1 > wall.rows() {
        return Err(EedpError::Structure("tile exceeds the wall".into()));
    }
    let host_tile = TileBounds {
        ring_lo: a,
        ring_hi: a + t,
        row_lo: y,
        row_hi: y + 2 * t - 1,
    };
    // Reject jumps and gather the up-path edge ids keyed by local coords.
    let mut up = BTreeMap::new();
    for (tail, head) in matching.pairs() {
        let c = wall.coord_of(tail).unwrap();
        if !host_tile.contains(c.ring, c.row) {
            continue;
        }
        let h = wall.coord_of(head).unwrap();
        if host_tile.contains(h.ring, h.row) {
            let rec = classify_jump(wall, (tail, head))?;
            if rec.kind != JumpKind::UpPath {
                return Err(EedpError::Structure(format!(
                    "tile carries a {:?} jump at ring {}, row {}",
                    rec.kind, c.ring, c.row
                )));
            }
        }
        let lr = c.row + 1 - y;
        if (2..=2 * t).contains(&lr) {
            let id = *edge_ids
                .get(&(tail, head))
                .ok_or_else(|| EedpError::Structure("matching edge has no realized id".into()))?;
            up.insert((c.ring - a, lr), id);
        }
    }
    let mut builder = SwirlBuilder {
        wall,
        host,
        up,
        used: BTreeSet::new(),
        a,
        y,
        t,
    };
    // Construction order is outermost first.
    let mut cycles = Vec::with_capacity(t);
    for i in 1..=t {
        let cycle = if i % 2 == 1 {
            builder.odd_cycle(i)?
        } else {
            builder.even_cycle(i)?
        };
        cycles.push(cycle);
    }
    builder.graft_missing(&mut cycles)?;
    cycles.reverse(); // inner to outer
    let swirl = Swirl {
        cycles,
        tile: TileBounds {
            ring_lo: a + 1,
            ring_hi: a + t,
            row_lo: y,
            row_hi: y + 2 * t - 1,
        },
        host_tile,
    };
    check_swirl(wall, host, &swirl)?;
    Ok(swirl)
}

/// Structural swirl checks: valid pairwise edge-disjoint cycles,
/// vertex-disjointness beyond neighbours, and alternating orientation in
/// the wall's canonical embedding.
pub fn check_swirl(wall: &Wall, host: &IncidenceDigraph, swirl: &Swirl) -> Result<(), EedpError> {
    let s = swirl.cycles.len();
    if s < 2 {
        return Err(EedpError::Structure("swirl needs at least two cycles".into()));
    }
    let mut seen_edges: BTreeSet<EdgeId> = BTreeSet::new();
    for c in &swirl.cycles {
        c.validate(host)
            .map_err(|e| EedpError::Structure(format!("swirl cycle invalid: {e}")))?;
        for &e in &c.edges {
            if !seen_edges.insert(e) {
                return Err(EedpError::Structure(format!(
                    "swirl cycles share edge {e}"
                )));
            }
        }
    }
    let vsets: Vec<BTreeSet<VertexId>> =
        swirl.cycles.iter().map(|c| c.vertex_set(host)).collect();
    for i in 0..s {
        for j in 0..s {
            if j > i + 1 && !vsets[i].is_disjoint(&vsets[j]) {
                return Err(EedpError::Structure(format!(
                    "swirl cycles {i} and {j} intersect"
                )));
            }
        }
    }
    let mut signs = Vec::with_capacity(s);
    for c in &swirl.cycles {
        let area = wall.signed_area2(host, c)?;
        if area == 0 {
            return Err(EedpError::Structure(
                "swirl cycle has no orientation in the layout".into(),
            ));
        }
        signs.push(area.signum());
    }
    for w in signs.windows(2) {
        if w[0] == w[1] {
            return Err(EedpError::Structure(
                "consecutive swirl cycles share an orientation".into(),
            ));
        }
    }
    Ok(())
}

/// Boolean form of [`check_swirl`].
pub fn verify_swirl(wall: &Wall, host: &IncidenceDigraph, swirl: &Swirl) -> bool {
    check_swirl(wall, host, swirl).is_ok()
}

/// Chebyshev distance between two swirl-covered coordinate vertices.
pub fn swirl_distance(wall: &Wall, x: VertexId, y: VertexId) -> Result<usize, EedpError> {
    let a = wall
        .coord_of(x)
        .ok_or_else(|| EedpError::Structure(format!("{x} is not a wall coordinate")))?;
    let b = wall
        .coord_of(y)
        .ok_or_else(|| EedpError::Structure(format!("{y} is not a wall coordinate")))?;
    let dr = a.ring.abs_diff(b.ring);
    let dq = a.row.abs_diff(b.row);
    Ok(dr.max(dq))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpLength {
    Short,
    Long,
}

/// A jump on a swirl is long when its endpoints are at Chebyshev distance
/// at least 3.
pub fn classify_swirl_jump(
    wall: &Wall,
    path: &Trail,
    host: &IncidenceDigraph,
) -> Result<JumpLength, EedpError> {
    let x = path
        .start(host)
        .ok_or_else(|| EedpError::Structure("empty jump".into()))?;
    let y = path.end(host).unwrap();
    Ok(if swirl_distance(wall, x, y)? >= 3 {
        JumpLength::Long
    } else {
        JumpLength::Short
    })
}

/// The attachment-extension: the component of `g` minus the outer cycle's
/// edges that contains the rest of the swirl, plus the outer cycle.
pub fn attachment_extension(
    g: &IncidenceDigraph,
    swirl: &Swirl,
) -> Result<IncidenceDigraph, EedpError> {
    let outer_edges = swirl.outer().edge_set();
    let without_outer = g.edge_subgraph(|e| !outer_edges.contains(&e));
    let inner_vertices: BTreeSet<VertexId> = swirl.cycles[..swirl.cycles.len() - 1]
        .iter()
        .flat_map(|c| c.vertex_set(g))
        .collect();
    let all: BTreeSet<VertexId> = without_outer.vertices().collect();
    let comps = without_outer.undirected_components(&all);
    let comp = comps
        .into_iter()
        .find(|c| !c.is_disjoint(&inner_vertices))
        .ok_or_else(|| EedpError::Structure("swirl interior not found in host".into()))?;
    Ok(g.edge_subgraph(|e| {
        if outer_edges.contains(&e) {
            return true;
        }
        let (t, h) = g.ends(e).unwrap();
        comp.contains(&t) && comp.contains(&h)
    }))
}

/// Cross-less in the directed wall-local sense: no pair of edge-disjoint
/// paths inside the swirl itself connects the tile corners with the wall's
/// flow (top-left to bottom-right and top-right to bottom-left). The
/// canonical swirl of an all-up-path tile has this property; the unordered
/// both-ways freedom of [`swirl_is_flat`] is strictly stronger.
pub fn swirl_is_crossless(
    wall: &Wall,
    host: &IncidenceDigraph,
    swirl: &Swirl,
    budget: Budget,
) -> Result<bool, Verdict> {
    let own = swirl.edge_set();
    let sub = host.edge_subgraph(|e| own.contains(&e));
    let t = swirl.tile;
    let s1 = wall
        .coord_vertex(t.ring_lo, t.row_lo, Sign::Out)
        .expect("tile corner");
    let s2 = wall
        .coord_vertex(t.ring_hi, t.row_lo, Sign::In)
        .expect("tile corner");
    let t1 = wall
        .coord_vertex(t.ring_hi, t.row_hi, Sign::In)
        .expect("tile corner");
    let t2 = wall
        .coord_vertex(t.ring_lo, t.row_hi, Sign::In)
        .expect("tile corner");
    let (found, exhausted) =
        crate::oracle::search_pairs(&sub, &[(s1, t1), (s2, t2)], budget, 1);
    if !found.is_empty() {
        return Ok(false);
    }
    if exhausted {
        Ok(true)
    } else {
        Err(Verdict::Timeout)
    }
}

/// No unordered edge-disjoint cross on the given corners within the part
/// of `g` insulated by `outer`: the cross paths live in the component
/// behind the outer cycle, with the outer cycle's own edges removed.
pub fn interior_cross_free(
    g: &IncidenceDigraph,
    outer: &Trail,
    corners: (VertexId, VertexId, VertexId, VertexId),
    budget: Budget,
) -> Result<bool, Verdict> {
    let outer_edges = outer.edge_set();
    let interior = g.edge_subgraph(|e| !outer_edges.contains(&e));
    let (s1, s2, t1, t2) = corners;
    has_unordered_cross(&interior, s1, t1, s2, t2, budget).map(|crossed| !crossed)
}

/// A swirl is flat when the component behind its outer cycle admits no
/// unordered edge-disjoint cross on the inducing tile's corners.
pub fn swirl_is_flat(
    g: &IncidenceDigraph,
    wall: &Wall,
    swirl: &Swirl,
    budget: Budget,
) -> Result<bool, Verdict> {
    let ext = attachment_extension(g, swirl).map_err(|_| Verdict::Timeout)?;
    let t = swirl.tile;
    let corner = |ring: usize, row: usize| {
        wall.coord_vertex(ring, row, Sign::In)
            .or_else(|| wall.coord_vertex(ring, row, Sign::Out))
            .expect("tile corner exists")
    };
    let corners = (
        corner(t.ring_lo, t.row_lo),
        corner(t.ring_hi, t.row_lo),
        corner(t.ring_hi, t.row_hi),
        corner(t.ring_lo, t.row_hi),
    );
    interior_cross_free(&ext, swirl.outer(), corners, budget)
}

/// All wall edges of the inner tile of a swirl; used to assert tile
/// containment.
pub fn inner_tile_edges(wall: &Wall, swirl: &Swirl) -> BTreeSet<EdgeId> {
    tile_edges(wall, swirl.tile)
}

/// Passes the swirl through the line graph: every cycle must map to a
/// vertex-disjoint cycle of the same length, with the images pairwise
/// vertex-disjoint. Returns the order of the resulting swirl.
pub fn line_graph_swirl_order(
    host: &IncidenceDigraph,
    swirl: &Swirl,
) -> Result<usize, EedpError> {
    let union_edges = swirl.edge_set();
    let sub = host.edge_subgraph(|e| union_edges.contains(&e));
    let (lg, vmap) = crate::graph::line_graph(&sub);
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for (idx, cycle) in swirl.cycles.iter().enumerate() {
        let image: Vec<VertexId> = cycle.edges.iter().map(|e| vmap[e]).collect();
        let distinct: BTreeSet<_> = image.iter().copied().collect();
        if distinct.len() != image.len() {
            return Err(EedpError::Structure(format!(
                "line graph image of cycle {idx} repeats a vertex"
            )));
        }
        for w in 0..image.len() {
            let (a, b) = (image[w], image[(w + 1) % image.len()]);
            if !lg.out_edges(a).any(|e| lg.head(e) == Some(b)) {
                return Err(EedpError::Structure(format!(
                    "line graph image of cycle {idx} is not a cycle"
                )));
            }
        }
        for v in distinct {
            if !seen.insert(v) {
                return Err(EedpError::Structure(
                    "line graph swirl cycles intersect".into(),
                ));
            }
        }
    }
    Ok(swirl.cycles.len())
}
