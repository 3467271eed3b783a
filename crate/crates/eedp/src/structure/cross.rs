//! Crosses from jumps: a Type 0 jump in the interior margins yields a
//! wall-local usable cross on an explicitly bounded tile; Type I and II
//! jumps need a short saturated jump sequence first.
//!
//! The case bodies cover the stated configurations literally (downward
//! jump, sideways jump, upward jump over distant, adjacent, or equal
//! rings, with their parity sub-cases). The remaining mirror-image
//! configurations go through the wall's ring-mirror automorphism: flipping
//! the ring order while shifting every row by one maps the directed wall
//! onto itself, swaps row parities, and reverses the left/right order of
//! jumps, so each uncovered case lands exactly on a covered one.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Linkage, Trail, TrailKind};
use crate::structure::matching::{CoordinateMatching, JumpKind, JumpRecord};
use crate::structure::wall::{Sign, Wall};
use crate::EedpError;

/// A tile of the wall: inclusive ring and row bounds, rows not wrapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileBounds {
    pub ring_lo: usize,
    pub ring_hi: usize,
    pub row_lo: usize,
    pub row_hi: usize,
}

impl TileBounds {
    pub fn contains(&self, ring: usize, row: usize) -> bool {
        (self.ring_lo..=self.ring_hi).contains(&ring) && (self.row_lo..=self.row_hi).contains(&row)
    }
}

/// All wall edges inside a tile: the ring arcs between the bounding rows
/// and the horizontal segments between the bounding rings.
pub fn tile_edges(wall: &Wall, t: TileBounds) -> BTreeSet<EdgeId> {
    let mut edges = BTreeSet::new();
    for c in t.ring_lo..=t.ring_hi {
        let from = wall.in_role(c, t.row_lo);
        let to = wall.out_role(c, t.row_hi);
        if from != to {
            edges.extend(wall.walk_ring(c, from, to));
        }
    }
    for r in t.row_lo..=t.row_hi {
        let (from, to) = if r % 2 == 1 {
            (wall.out_role(t.ring_lo, r), wall.in_role(t.ring_hi, r))
        } else {
            (wall.out_role(t.ring_hi, r), wall.in_role(t.ring_lo, r))
        };
        edges.extend(wall.walk_row(r, from, to));
    }
    edges
}

/// A validated wall-local usable cross: two edge-disjoint paths joining
/// opposite corners of `tile`, using only tile edges plus the jump edges.
#[derive(Debug, Clone)]
pub struct CrossWitness {
    pub tile: TileBounds,
    /// Corners (s1, s2, t1, t2): s1, s2 on the top row, t1, t2 on the
    /// bottom row; p1 runs s1 -> t1, p2 runs s2 -> t2.
    pub corners: (VertexId, VertexId, VertexId, VertexId),
    pub p1: Trail,
    pub p2: Trail,
    /// The matching edges consumed by the construction.
    pub jump_edges: Vec<EdgeId>,
}

impl CrossWitness {
    /// Edge-disjointness, endpoints, and locality.
    pub fn validate(&self, wall: &Wall, host: &IncidenceDigraph) -> Result<(), EedpError> {
        let linkage = Linkage {
            paths: vec![self.p1.clone(), self.p2.clone()],
        };
        linkage
            .validate(host)
            .map_err(|e| EedpError::Structure(format!("cross paths invalid: {e}")))?;
        let (s1, s2, t1, t2) = self.corners;
        if self.p1.start(host) != Some(s1) || self.p1.end(host) != Some(t1) {
            return Err(EedpError::Structure("p1 endpoints are wrong".into()));
        }
        if self.p2.start(host) != Some(s2) || self.p2.end(host) != Some(t2) {
            return Err(EedpError::Structure("p2 endpoints are wrong".into()));
        }
        let allowed = {
            let mut a = tile_edges(wall, self.tile);
            a.extend(self.jump_edges.iter().copied());
            a
        };
        for e in self.p1.edges.iter().chain(self.p2.edges.iter()) {
            if !allowed.contains(e) {
                return Err(EedpError::Structure(format!(
                    "cross leaves the tile through edge {e}"
                )));
            }
        }
        Ok(())
    }
}

/// Wall accessor that optionally applies the ring-mirror automorphism:
/// view ring c is real ring `rings + 1 - c`, view row r is real row
/// `r + 1` (cyclically). Signs are preserved and all walkers resolve to
/// real edges, so constructions written for one parity work for both.
#[derive(Clone, Copy)]
struct View<'w> {
    wall: &'w Wall,
    mirrored: bool,
    /// Row shift of the automorphism; odd whenever mirrored so the row
    /// parities flip alongside the ring order.
    shift: i64,
}

impl<'w> View<'w> {
    fn identity(wall: &'w Wall) -> Self {
        View {
            wall,
            mirrored: false,
            shift: 0,
        }
    }

    /// Mirror view whose row shift places the view row of `anchor` at
    /// `target` (an odd shift, so parities flip).
    fn mirror(wall: &'w Wall, anchor: usize, target: usize) -> Self {
        let shift = anchor as i64 - target as i64;
        debug_assert!(shift.rem_euclid(2) == 1, "mirror shift must be odd");
        View {
            wall,
            mirrored: true,
            shift,
        }
    }

    fn real_ring(&self, c: usize) -> usize {
        if self.mirrored {
            self.wall.rings() + 1 - c
        } else {
            c
        }
    }

    fn real_row(&self, r: usize) -> usize {
        self.wall.row_add(r, self.shift)
    }

    fn view_coord(&self, v: VertexId) -> Option<(usize, usize, Sign)> {
        let c = self.wall.coord_of(v)?;
        if self.mirrored {
            Some((
                self.wall.rings() + 1 - c.ring,
                self.wall.row_add(c.row, -self.shift),
                c.sign,
            ))
        } else {
            Some((c.ring, c.row, c.sign))
        }
    }

    fn x_in(&self, c: usize, r: usize) -> VertexId {
        self.wall.x_in(self.real_ring(c), self.real_row(r))
    }

    fn x_out(&self, c: usize, r: usize) -> VertexId {
        self.wall.x_out(self.real_ring(c), self.real_row(r))
    }

    fn in_role(&self, c: usize, r: usize) -> VertexId {
        self.wall.in_role(self.real_ring(c), self.real_row(r))
    }

    fn out_role(&self, c: usize, r: usize) -> VertexId {
        self.wall.out_role(self.real_ring(c), self.real_row(r))
    }

    fn walk_ring(&self, c: usize, from: VertexId, to: VertexId) -> Vec<EdgeId> {
        self.wall.walk_ring(self.real_ring(c), from, to)
    }

    fn walk_row(&self, r: usize, from: VertexId, to: VertexId) -> Vec<EdgeId> {
        self.wall.walk_row(self.real_row(r), from, to)
    }

    /// Real tile bounds of a view tile; the mirrored row range keeps its
    /// width because the shift is uniform.
    fn real_tile(&self, t: TileBounds) -> TileBounds {
        if !self.mirrored {
            return t;
        }
        TileBounds {
            ring_lo: self.real_ring(t.ring_hi),
            ring_hi: self.real_ring(t.ring_lo),
            row_lo: self.real_row(t.row_lo),
            row_hi: self.real_row(t.row_hi),
        }
    }
}

/// Walks edges through the viewed wall while tracking the current vertex.
struct Route<'w> {
    view: View<'w>,
    host: &'w IncidenceDigraph,
    at: VertexId,
    edges: Vec<EdgeId>,
}

impl<'w> Route<'w> {
    fn new(view: View<'w>, host: &'w IncidenceDigraph, start: VertexId) -> Self {
        Route {
            view,
            host,
            at: start,
            edges: Vec::new(),
        }
    }

    /// Follow view ring `c` to the given coordinate vertex.
    fn ring_to(mut self, c: usize, target: VertexId) -> Self {
        self.edges.extend(self.view.walk_ring(c, self.at, target));
        self.at = target;
        self
    }

    /// Follow view row `r` in its flow direction to the given vertex.
    fn row_to(mut self, r: usize, target: VertexId) -> Self {
        self.edges.extend(self.view.walk_row(r, self.at, target));
        self.at = target;
        self
    }

    /// Traverse one explicit host edge (a matching edge).
    fn take(mut self, e: EdgeId) -> Self {
        assert_eq!(self.host.tail(e), Some(self.at), "route discontinuity");
        self.edges.push(e);
        self.at = self.host.head(e).unwrap();
        self
    }

    fn finish(self) -> Trail {
        Trail {
            edges: self.edges,
            kind: TrailKind::Path,
        }
    }
}

fn type0_margins(wall: &Wall, rec: &JumpRecord) -> bool {
    let t = wall.rings();
    let rows = wall.rows();
    let (i, p) = rec.from;
    let (j, q) = rec.to;
    (3..=t - 3).contains(&i)
        && (3..=t - 3).contains(&j)
        && (5..=rows - 5).contains(&p)
        && (5..=rows - 5).contains(&q)
}

fn saturated_margins(wall: &Wall, rec: &JumpRecord) -> bool {
    let t = wall.rings();
    let rows = wall.rows();
    let (i, p) = rec.from;
    (4..=t - 3).contains(&i) && (9..=rows - 4).contains(&p)
}

/// Whether a classified jump qualifies for [`cross_from_jump`]: a Type 0
/// jump inside the interior margins, or a 3-saturated Type I/II jump with
/// margin room whose sequence either stays degenerate or reaches an
/// in-margin Type 0 jump.
pub fn jump_in_margin(wall: &Wall, matching: &CoordinateMatching, rec: &JumpRecord) -> bool {
    match rec.kind {
        JumpKind::Type0 => type0_margins(wall, rec),
        JumpKind::TypeI | JumpKind::TypeII => {
            if !saturated_margins(wall, rec) {
                return false;
            }
            let Some(seq) =
                crate::structure::matching::jump_sequence(wall, matching, (rec.tail, rec.head), 3)
            else {
                return false;
            };
            for e in seq {
                let Ok(r) = crate::structure::matching::classify_jump(wall, e) else {
                    return false;
                };
                if r.kind == JumpKind::Type0 {
                    return type0_margins(wall, &r);
                }
            }
            true
        }
        JumpKind::UpPath => false,
    }
}

/// Builds a wall-local usable cross from an in-margin jump.
///
/// `host` and `edge_ids` come from [`CoordinateMatching::realize`]. Type 0
/// jumps need only themselves; Type I/II jumps walk their jump sequence
/// until the accumulated displacement closes, so the matching must be
/// saturated enough.
pub fn cross_from_jump(
    wall: &Wall,
    matching: &CoordinateMatching,
    host: &IncidenceDigraph,
    edge_ids: &BTreeMap<(VertexId, VertexId), EdgeId>,
    rec: &JumpRecord,
) -> Result<CrossWitness, EedpError> {
    let witness = match rec.kind {
        JumpKind::UpPath => {
            return Err(EedpError::Structure("an up-path induces no cross".into()))
        }
        JumpKind::Type0 => {
            if !type0_margins(wall, rec) {
                return Err(EedpError::Structure(format!(
                    "Type 0 jump at ({},{}) -> ({},{}) is outside the margins",
                    rec.from.0, rec.from.1, rec.to.0, rec.to.1
                )));
            }
            let (i, p) = rec.from;
            let (j, q) = rec.to;
            // Mirror whenever the literal bodies expect the other parity
            // or ring order; the shift anchors the lower row at 5 or 6 so
            // the view frame keeps its margins.
            let mirrored = if p == q {
                p % 2 == 0
            } else if p > q {
                (i > j && i - j == 1) || (i == j && p % 2 == 0)
            } else {
                false
            };
            let view = if mirrored {
                let u = p.min(q);
                let target = if u % 2 == 1 { 6 } else { 5 };
                View::mirror(wall, u, target)
            } else {
                View::identity(wall)
            };
            type0_cross(view, host, edge_ids, rec)?
        }
        JumpKind::TypeI | JumpKind::TypeII => {
            if !saturated_margins(wall, rec) {
                return Err(EedpError::Structure(format!(
                    "Type I/II jump at ({},{}) is outside the margins",
                    rec.from.0, rec.from.1
                )));
            }
            let view = if rec.from.1 % 2 == 0 {
                View::mirror(wall, rec.from.1, 9)
            } else {
                View::identity(wall)
            };
            saturated_cross(view, matching, host, edge_ids, rec)?
        }
    };
    witness.validate(wall, host)?;
    Ok(witness)
}

/// Corner layout shared by the Type 0 cases, in view coordinates: the tile
/// spans two rings beyond the jump on each side, an odd top row four or
/// five above, and an even bottom row four or five below.
struct Frame {
    bl: usize,
    br: usize,
    rtop: usize,
    r2: usize,
    rb2: usize,
    rbot: usize,
    tile: TileBounds,
    s1: VertexId,
    s2: VertexId,
    t1: VertexId,
    t2: VertexId,
}

fn frame(view: View<'_>, upper: usize, lower: usize, bl: usize, br: usize) -> Frame {
    let mut rtop = if (upper - 4) % 2 == 1 { upper - 4 } else { upper - 5 };
    let rbot = if (lower + 4) % 2 == 0 { lower + 4 } else { lower + 5 };
    // A mirrored view at the row margin could wrap the real tile around
    // the cylinder; pull the top row in by one step instead.
    if view.real_row(rbot) < view.real_row(rtop)
        || view.real_row(rbot) - view.real_row(rtop) != rbot - rtop
    {
        rtop += 2;
    }
    let tile = TileBounds {
        ring_lo: bl - 2,
        ring_hi: br + 2,
        row_lo: rtop,
        row_hi: rbot,
    };
    // At a boundary ring the slot carries a single degree-3 vertex which
    // plays whichever corner role is asked of it.
    let corner = |c: usize, r: usize, pref: Sign| {
        let (rc, rr) = (view.real_ring(c), view.real_row(r));
        view.wall
            .coord_vertex(rc, rr, pref)
            .or_else(|| {
                view.wall.coord_vertex(
                    rc,
                    rr,
                    if pref == Sign::In { Sign::Out } else { Sign::In },
                )
            })
            .expect("tile corner must exist")
    };
    Frame {
        bl,
        br,
        rtop,
        r2: rtop + 1,
        rb2: rbot - 1,
        rbot,
        tile,
        s1: corner(bl - 2, rtop, Sign::Out),
        s2: corner(br + 2, rtop, Sign::In),
        t1: corner(br + 2, rbot, Sign::In),
        t2: corner(bl - 2, rbot, Sign::In),
    }
}

fn type0_cross(
    view: View<'_>,
    host: &IncidenceDigraph,
    edge_ids: &BTreeMap<(VertexId, VertexId), EdgeId>,
    rec: &JumpRecord,
) -> Result<CrossWitness, EedpError> {
    let (i, p, _) = view.view_coord(rec.tail).unwrap();
    let (j, q, _) = view.view_coord(rec.head).unwrap();
    let jump = *edge_ids
        .get(&(rec.tail, rec.head))
        .ok_or_else(|| EedpError::Structure("jump has no realized edge".into()))?;
    let f = frame(view, p.min(q), p.max(q), i.min(j), i.max(j));
    let (p1, p2) = if p < q {
        case_downward(view, host, &f, i, p, j, jump)
    } else if p == q {
        case_sideways(view, host, &f, i, p, j, jump)?
    } else {
        case_upward(view, host, &f, i, p, j, q, jump)?
    };
    Ok(CrossWitness {
        tile: view.real_tile(f.tile),
        corners: (f.s1, f.s2, f.t1, f.t2),
        p1,
        p2,
        jump_edges: vec![jump],
    })
}

/// Case 1: the jump points downward (p < q). The first path crosses the
/// tile on a free horizontal row; the second rides the jump.
fn case_downward(
    view: View<'_>,
    host: &IncidenceDigraph,
    f: &Frame,
    i: usize,
    p: usize,
    j: usize,
    jump: EdgeId,
) -> (Trail, Trail) {
    // P1 crosses on H_p when p is odd, otherwise one row lower.
    let cross_row = if p % 2 == 1 { p } else { p + 1 };
    let p1 = Route::new(view, host, f.s1)
        .ring_to(f.bl - 2, view.out_role(f.bl - 2, cross_row))
        .row_to(cross_row, view.in_role(f.br + 2, cross_row))
        .ring_to(f.br + 2, f.t1)
        .finish();
    let p2 = Route::new(view, host, f.s2)
        .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
        .row_to(f.r2, view.x_in(i, f.r2))
        .ring_to(i, view.x_in(i, p))
        .take(jump)
        .ring_to(j, view.x_out(j, f.rbot))
        .row_to(f.rbot, f.t2)
        .finish();
    (p1, p2)
}

/// Case 2: a sideways jump (p == q), with the top row odd in the view.
fn case_sideways(
    view: View<'_>,
    host: &IncidenceDigraph,
    f: &Frame,
    i: usize,
    p: usize,
    j: usize,
    jump: EdgeId,
) -> Result<(Trail, Trail), EedpError> {
    if p % 2 != 1 {
        return Err(EedpError::Structure(
            "sideways case expects an odd row after mirroring".into(),
        ));
    }
    if i <= j {
        // P1 rides the jump with the row flow and keeps going right.
        let p1 = Route::new(view, host, f.s1)
            .ring_to(f.bl - 2, view.out_role(f.bl - 2, p))
            .row_to(p, view.x_in(i, p))
            .take(jump)
            .row_to(p, view.in_role(f.br + 2, p))
            .ring_to(f.br + 2, f.t1)
            .finish();
        let p2 = Route::new(view, host, f.s2)
            .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
            .row_to(f.r2, view.x_in(i, f.r2))
            .ring_to(i, view.x_out(i, f.rbot))
            .row_to(f.rbot, f.t2)
            .finish();
        Ok((p1, p2))
    } else {
        // The jump runs against the row; thread P1 through the jump-row
        // slots and give the bottom-left exit to P2, which rides the jump.
        let p1 = Route::new(view, host, f.s1)
            .row_to(f.rtop, view.x_in(j, f.rtop))
            .ring_to(j, view.x_out(j, p))
            .row_to(p, view.in_role(f.br + 2, p))
            .ring_to(f.br + 2, f.t1)
            .finish();
        let p2 = Route::new(view, host, f.s2)
            .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
            .row_to(f.r2, view.x_in(i, f.r2))
            .ring_to(i, view.x_in(i, p))
            .take(jump)
            .ring_to(j, view.x_out(j, f.rbot))
            .row_to(f.rbot, f.t2)
            .finish();
        Ok((p1, p2))
    }
}

/// Case 3: an upward jump (p > q), Type 0 by assumption, with `i <= j`
/// and for `i == j` an odd `p` after mirroring.
fn case_upward(
    view: View<'_>,
    host: &IncidenceDigraph,
    f: &Frame,
    i: usize,
    p: usize,
    j: usize,
    q: usize,
    jump: EdgeId,
) -> Result<(Trail, Trail), EedpError> {
    if i > j {
        if i - j < 2 {
            return Err(EedpError::Structure(
                "adjacent upward case expects i <= j after mirroring".into(),
            ));
        }
        // Distant rings leftward, any parity: P2 rides the jump down the
        // left flank while P1 crosses over on the free lane W_{i-1}.
        let p1 = Route::new(view, host, f.s1)
            .row_to(f.rtop, view.x_in(i - 1, f.rtop))
            .ring_to(i - 1, view.x_out(i - 1, f.rb2))
            .row_to(f.rb2, view.in_role(f.br + 2, f.rb2))
            .ring_to(f.br + 2, f.t1)
            .finish();
        let p2 = Route::new(view, host, f.s2)
            .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
            .row_to(f.r2, view.x_in(i, f.r2))
            .ring_to(i, view.x_in(i, p))
            .take(jump)
            .ring_to(j, view.x_out(j, f.rbot))
            .row_to(f.rbot, f.t2)
            .finish();
        return Ok((p1, p2));
    }
    if i != j {
        if j - i >= 2 {
            // Distant rings, any parity: drop onto the jump along W_i and
            // come back on the right boundary; the partner rides W_{i+1}.
            let p1 = Route::new(view, host, f.s1)
                .row_to(f.rtop, view.x_in(i, f.rtop))
                .ring_to(i, view.x_in(i, p))
                .take(jump)
                .ring_to(j, view.x_out(j, f.rb2))
                .row_to(f.rb2, view.in_role(f.br + 2, f.rb2))
                .ring_to(f.br + 2, f.t1)
                .finish();
            let p2 = Route::new(view, host, f.s2)
                .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
                .row_to(f.r2, view.x_in(i + 1, f.r2))
                .ring_to(i + 1, view.x_out(i + 1, f.rbot))
                .row_to(f.rbot, f.t2)
                .finish();
            return Ok((p1, p2));
        }
        // Adjacent rings.
        if p % 2 == 1 {
            // Odd p: enter the jump along H_p.
            let p1 = Route::new(view, host, f.s1)
                .ring_to(f.bl - 2, view.out_role(f.bl - 2, p))
                .row_to(p, view.x_in(i, p))
                .take(jump)
                .ring_to(j, view.x_out(j, f.rb2))
                .row_to(f.rb2, view.in_role(f.br + 2, f.rb2))
                .ring_to(f.br + 2, f.t1)
                .finish();
            let p2 = Route::new(view, host, f.s2)
                .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
                .row_to(f.r2, view.x_in(i, f.r2))
                .ring_to(i, view.x_out(i, f.rbot))
                .row_to(f.rbot, f.t2)
                .finish();
            return Ok((p1, p2));
        }
        if q % 2 == 1 {
            // Even p, odd q: leave the jump along H_q.
            let p1 = Route::new(view, host, f.s1)
                .row_to(f.rtop, view.x_in(i, f.rtop))
                .ring_to(i, view.x_in(i, p))
                .take(jump)
                .row_to(q, view.in_role(f.br + 2, q))
                .ring_to(f.br + 2, f.t1)
                .finish();
            let p2 = Route::new(view, host, f.s2)
                .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
                .row_to(f.r2, view.x_in(i + 1, f.r2))
                .ring_to(i + 1, view.x_out(i + 1, f.rbot))
                .row_to(f.rbot, f.t2)
                .finish();
            return Ok((p1, p2));
        }
        // Both rows even: q <= p - 4 since the jump is not Type I. P1
        // detours around the jump on rings j+1 and i-1; P2 rides it and
        // exits straight down the left boundary ring.
        let p1 = Route::new(view, host, f.s1)
            .row_to(f.rtop, view.x_in(j + 1, f.rtop))
            .ring_to(j + 1, view.x_out(j + 1, p - 2))
            .row_to(p - 2, view.x_in(i - 1, p - 2))
            .ring_to(i - 1, view.x_out(i - 1, f.rb2))
            .row_to(f.rb2, view.in_role(f.br + 2, f.rb2))
            .ring_to(f.br + 2, f.t1)
            .finish();
        let p2 = Route::new(view, host, f.s2)
            .ring_to(f.br + 2, view.out_role(f.br + 2, p))
            .row_to(p, view.x_in(i, p))
            .take(jump)
            .row_to(q, view.in_role(i - 2, q))
            .ring_to(i - 2, f.t2)
            .finish();
        return Ok((p1, p2));
    }
    // i == j: the jump climbs its own ring; odd p after mirroring.
    if p % 2 != 1 {
        return Err(EedpError::Structure(
            "same-ring upward case expects an odd row after mirroring".into(),
        ));
    }
    if q % 2 == 1 {
        // Same parity: ride the jump on H_p/H_q around ring i.
        let p1 = Route::new(view, host, f.s1)
            .row_to(f.rtop, view.in_role(i - 1, f.rtop))
            .ring_to(i - 1, view.out_role(i - 1, p))
            .row_to(p, view.x_in(i, p))
            .take(jump)
            .row_to(q, view.x_in(i + 1, q))
            .ring_to(i + 1, view.x_out(i + 1, f.rb2))
            .row_to(f.rb2, view.in_role(f.br + 2, f.rb2))
            .ring_to(f.br + 2, f.t1)
            .finish();
        let p2 = Route::new(view, host, f.s2)
            .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
            .row_to(f.r2, view.x_in(i, f.r2))
            .ring_to(i, view.x_out(i, f.rbot))
            .row_to(f.rbot, f.t2)
            .finish();
        return Ok((p1, p2));
    }
    // Different parity: q <= p - 5; exit downward on W_i. The first
    // corner already sits on W_{i-2}.
    let p1 = Route::new(view, host, f.s1)
        .ring_to(i - 2, view.out_role(i - 2, p))
        .row_to(p, view.x_in(i, p))
        .take(jump)
        .ring_to(i, view.x_out(i, q + 1))
        .row_to(q + 1, view.in_role(f.br + 2, q + 1))
        .ring_to(f.br + 2, f.t1)
        .finish();
    let p2 = Route::new(view, host, f.s2)
        .ring_to(f.br + 2, view.out_role(f.br + 2, f.r2))
        .row_to(f.r2, view.x_in(i - 1, f.r2))
        .ring_to(i - 1, view.x_out(i - 1, p - 2))
        .row_to(p - 2, view.x_in(i, p - 2))
        .ring_to(i, view.x_out(i, f.rbot))
        .row_to(f.rbot, f.t2)
        .finish();
    Ok((p1, p2))
}

enum ShapeEnd {
    /// Ended at `x^+_{i-1, p-4}` in view coordinates.
    A,
    /// Ended at `x^+_{i, p-5}` in view coordinates.
    B,
}

/// The closing shapes for saturated Type I/II sequences: walking the jump
/// sequence accumulates a path from the start tail to either
/// `x^+_{i-1, p-4}` (shape A) or `x^+_{i, p-5}` (shape B) in view
/// coordinates, after which two explicit paths close the cross on the
/// `7 x 13`-row tile around the start.
fn saturated_cross(
    view: View<'_>,
    matching: &CoordinateMatching,
    host: &IncidenceDigraph,
    edge_ids: &BTreeMap<(VertexId, VertexId), EdgeId>,
    rec: &JumpRecord,
) -> Result<CrossWitness, EedpError> {
    let wall = view.wall;
    let (i, p, _) = view.view_coord(rec.tail).unwrap();
    debug_assert_eq!(p % 2, 1, "mirroring fixes the start parity");
    let seq = crate::structure::matching::jump_sequence(wall, matching, (rec.tail, rec.head), 3)
        .ok_or_else(|| {
            EedpError::Structure("jump is not 3-saturated; no cross construction".into())
        })?;
    // A Type 0 continuation induces its own cross.
    for e in &seq {
        let r = crate::structure::matching::classify_jump(wall, *e)?;
        if r.kind == JumpKind::Type0 {
            if type0_margins(wall, &r) {
                return cross_from_jump(wall, matching, host, edge_ids, &r);
            }
            return Err(EedpError::Structure(
                "saturated sequence reaches an out-of-margin Type 0 jump".into(),
            ));
        }
    }

    // Accumulate the jump path until it reaches a closing shape.
    let mut jump_edges = Vec::new();
    let mut path = Route::new(view, host, rec.tail);
    let mut shape = None;
    for (idx, &(tail, head)) in seq.iter().enumerate() {
        if idx > 0 {
            let (c, _, sign) = view.view_coord(path.at).unwrap();
            debug_assert_eq!(sign, Sign::Out);
            path = path.ring_to(c, tail);
        }
        let id = *edge_ids
            .get(&(tail, head))
            .ok_or_else(|| EedpError::Structure("sequence edge has no realized id".into()))?;
        jump_edges.push(id);
        path = path.take(id);
        let (c, r, _) = view.view_coord(path.at).unwrap();
        if r == p - 4 && c + 1 == i {
            shape = Some(ShapeEnd::A);
            break;
        }
        if r == p - 5 && c == i {
            shape = Some(ShapeEnd::B);
            break;
        }
    }
    let Some(shape) = shape else {
        return Err(EedpError::Structure(
            "saturated sequence reached no closing shape within 3 jumps".into(),
        ));
    };

    let tile = TileBounds {
        ring_lo: i - 3,
        ring_hi: i + 3,
        row_lo: p - 8,
        row_hi: p + 4,
    };
    let corner = |c: usize, r: usize| {
        let real_c = view.real_ring(c);
        let real_r = view.real_row(r);
        wall.coord_vertex(real_c, real_r, Sign::In)
            .or_else(|| wall.coord_vertex(real_c, real_r, Sign::Out))
            .expect("tile corner must exist")
    };
    let (s1, s2, t1, t2) = (
        corner(i - 3, p - 8),
        corner(i + 3, p - 8),
        corner(i + 3, p + 4),
        corner(i - 3, p + 4),
    );
    // P1 carries the jump path; P2 weaves around it on rings i-2 and i+1.
    let mut p1 = Route::new(view, host, s1)
        .ring_to(i - 3, view.out_role(i - 3, p))
        .row_to(p, view.x_in(i, p));
    p1.edges.extend(path.edges.iter().copied());
    p1.at = path.at;
    let p1 = match shape {
        ShapeEnd::A => p1
            .row_to(p - 4, view.in_role(i + 3, p - 4))
            .ring_to(i + 3, t1)
            .finish(),
        ShapeEnd::B => p1
            .ring_to(i, view.x_out(i, p - 4))
            .row_to(p - 4, view.in_role(i + 3, p - 4))
            .ring_to(i + 3, t1)
            .finish(),
    };
    let p2 = Route::new(view, host, s2)
        .ring_to(i + 3, view.out_role(i + 3, p - 7))
        .row_to(p - 7, view.x_in(i - 2, p - 7))
        .ring_to(i - 2, view.x_out(i - 2, p - 2))
        .row_to(p - 2, view.x_in(i + 1, p - 2))
        .ring_to(i + 1, view.x_out(i + 1, p + 3))
        .row_to(p + 3, view.in_role(i - 3, p + 3))
        .ring_to(i - 3, t2)
        .finish();
    Ok(CrossWitness {
        tile: view.real_tile(tile),
        corners: (s1, s2, t1, t2),
        p1,
        p2,
        jump_edges,
    })
}
