//! Routers and the cross-column threading that certifies them.
//!
//! A cross column in a `2t x 2t^3` wall carries `t^2` crossing paths, one
//! per tile of height `2t`. Threading `t` strands down the wall and
//! swapping the two designated strands at each tile, with a rotation at
//! the end of every round, yields `t` edge-disjoint closed trails that
//! pairwise share a vertex. The swap bookkeeping is the pattern sequence:
//! `shift` swaps around the cross marker, `reset` rotates it back.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Trail, TrailKind};
use crate::structure::wall::Wall;
use crate::EedpError;

/// Pairwise-intersecting edge-disjoint cycles, the edge-disjoint analogue
/// of a clique.
#[derive(Debug, Clone)]
pub struct Router {
    pub cycles: Vec<Trail>,
    /// Optional distinct branch vertices, one per cycle.
    pub branching: Option<Vec<VertexId>>,
}

impl Router {
    pub fn order(&self) -> usize {
        self.cycles.len()
    }
}

/// Router checks: every cycle is a valid closed trail, cycles are pairwise
/// edge-disjoint, and every pair shares a vertex.
pub fn check_router(host: &IncidenceDigraph, router: &Router) -> Result<(), EedpError> {
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    for c in &router.cycles {
        c.validate(host)
            .map_err(|e| EedpError::Structure(format!("router cycle invalid: {e}")))?;
        for &e in &c.edges {
            if !used.insert(e) {
                return Err(EedpError::Structure(format!(
                    "router cycles share edge {e}"
                )));
            }
        }
    }
    let vsets: Vec<BTreeSet<VertexId>> =
        router.cycles.iter().map(|c| c.vertex_set(host)).collect();
    for i in 0..vsets.len() {
        for j in i + 1..vsets.len() {
            if vsets[i].is_disjoint(&vsets[j]) {
                return Err(EedpError::Structure(format!(
                    "router cycles {i} and {j} do not intersect"
                )));
            }
        }
    }
    if let Some(branching) = &router.branching {
        if branching.len() != router.cycles.len() {
            return Err(EedpError::Structure("branching set size mismatch".into()));
        }
        let distinct: BTreeSet<_> = branching.iter().collect();
        if distinct.len() != branching.len() {
            return Err(EedpError::Structure("branch vertices repeat".into()));
        }
        for (b, c) in branching.iter().zip(&router.cycles) {
            if !c.vertex_set(host).contains(b) {
                return Err(EedpError::Structure(format!(
                    "branch vertex {b} is not on its cycle"
                )));
            }
        }
    }
    Ok(())
}

/// Boolean form of [`check_router`].
pub fn verify_router(host: &IncidenceDigraph, router: &Router) -> bool {
    check_router(host, router).is_ok()
}

/// Pattern symbol: a strand number or the cross marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Cross,
    Strand(usize),
}

/// The pattern sequence of the threading: `pi_1 = (1, .., t-1, x, t)`;
/// `shift` moves the marker one slot left swapping its neighbours, `reset`
/// rotates a leading marker back before the last slot.
pub fn pattern_sequence(t: usize) -> Vec<Vec<Sym>> {
    let mut pi: Vec<Sym> = (1..t).map(Sym::Strand).collect();
    pi.push(Sym::Cross);
    pi.push(Sym::Strand(t));
    let mut seq = vec![pi.clone()];
    for _ in 1..=t * t {
        let q = pi.iter().position(|s| *s == Sym::Cross).unwrap();
        if q == 0 {
            // reset
            let first = pi.remove(0);
            debug_assert_eq!(first, Sym::Cross);
            pi.insert(pi.len() - 1, Sym::Cross);
        } else {
            // shift: swap the symbols around the marker
            pi.swap(q - 1, q);
            pi.swap(q, q + 1);
        }
        seq.push(pi.clone());
    }
    seq
}

/// Ring occupied by each strand for a pattern, per the threading layout:
/// symbols before the marker park on rings 1.., the strand right after the
/// marker rides the crossing lane at ring t, and the rest hug the far side.
fn layout(pi: &[Sym], t: usize) -> BTreeMap<usize, usize> {
    let q = pi.iter().position(|s| *s == Sym::Cross).unwrap();
    let mut rings = BTreeMap::new();
    for (pos, sym) in pi.iter().enumerate() {
        let Sym::Strand(s) = *sym else { continue };
        let ring = if pos < q {
            pos + 1
        } else if pos == q + 1 {
            t
        } else {
            // k-th symbol after the marker, k >= 2
            let k = pos - q;
            t + q + k // q is 0-based: t + (q+1) + k - 1
        };
        rings.insert(s, ring);
    }
    rings
}

/// Builds a t-router from the cross-column configuration: a `2t x 2t^3`
/// wall together with `t^2` crossing paths, path `i` linking
/// `x^-_{t+1, 2t(i-1)+1}` to `x^+_{t, 2t i}`, pairwise edge-disjoint and
/// edge-disjoint from the wall.
///
/// `host` must contain the wall and the paths' edges.
pub fn router_from_cross_column(
    wall: &Wall,
    host: &IncidenceDigraph,
    paths: &[Trail],
) -> Result<Router, EedpError> {
    let rings = wall.rings();
    if rings < 4 || rings % 2 != 0 {
        return Err(EedpError::Structure(
            "cross-column threading needs a wall with an even ring count >= 4".into(),
        ));
    }
    let t = rings / 2;
    if paths.len() != t * t {
        return Err(EedpError::Structure(format!(
            "expected {} crossing paths, got {}",
            t * t,
            paths.len()
        )));
    }
    if wall.rows() < 2 * t * t * t {
        return Err(EedpError::Structure(
            "wall is too short for the cross column".into(),
        ));
    }
    for (idx, p) in paths.iter().enumerate() {
        let j = idx + 1;
        p.validate(host)
            .map_err(|e| EedpError::Structure(format!("crossing path {j} invalid: {e}")))?;
        let want_tail = wall.x_in(t + 1, 2 * t * (j - 1) + 1);
        let want_head = wall.x_out(t, 2 * t * j);
        if p.start(host) != Some(want_tail) || p.end(host) != Some(want_head) {
            return Err(EedpError::Structure(format!(
                "crossing path {j} does not link the designated coordinates"
            )));
        }
    }
    if t == 2 {
        return two_strand_router(wall, host, paths);
    }

    let patterns = pattern_sequence(t);
    // The bookkeeping invariant before the final reset.
    let before_final: Vec<Sym> = std::iter::once(Sym::Cross)
        .chain((1..=t).map(Sym::Strand))
        .collect();
    assert_eq!(patterns[t * t - 1], before_final);
    assert_eq!(patterns[t * t], patterns[0]);

    let r = |j: usize| 2 * t * (j - 1) + 1; // top row of tile j
    let mut segments: BTreeMap<usize, Vec<EdgeId>> = (1..=t).map(|s| (s, Vec::new())).collect();
    let mut push = |s: usize, edges: Vec<EdgeId>| {
        segments.get_mut(&s).unwrap().extend(edges);
    };

    for j in 1..=t * t {
        let pi = &patterns[j - 1];
        let q = pi.iter().position(|s| *s == Sym::Cross).unwrap(); // 0-based
        let rings_now = layout(pi, t);
        let rings_next = layout(&patterns[j], t);
        let (top, bot) = (r(j), r(j + 1));
        if q > 0 {
            // Shift tile: the strand after the marker crosses via the path,
            // the one before it walks over to the far block.
            let crosser = match pi[q + 1] {
                Sym::Strand(s) => s,
                Sym::Cross => unreachable!(),
            };
            let walker = match pi[q - 1] {
                Sym::Strand(s) => s,
                Sym::Cross => unreachable!(),
            };
            for (&s, &c) in &rings_now {
                if s == crosser {
                    let mut e = wall.walk_row(top, wall.in_role(t, top), wall.in_role(t + 1, top));
                    e.extend(paths[j - 1].edges.iter().copied());
                    e.extend(wall.walk_ring(t, wall.out_role(t, 2 * t * j), wall.in_role(t, bot)));
                    push(s, e);
                } else if s == walker {
                    let wring = c; // q - 1 + 1 == q in 1-based terms
                    debug_assert_eq!(wring, q);
                    let mut e =
                        wall.walk_ring(wring, wall.in_role(wring, top), wall.in_role(wring, top + 2));
                    e.extend(wall.walk_row(
                        top + 2,
                        wall.in_role(wring, top + 2),
                        wall.in_role(t + 1, top + 2),
                    ));
                    e.extend(wall.walk_ring(t + 1, wall.in_role(t + 1, top + 2), wall.in_role(t + 1, bot)));
                    e.extend(wall.walk_row(bot, wall.in_role(t + 1, bot), wall.in_role(rings_next[&s], bot)));
                    push(s, e);
                } else {
                    debug_assert_eq!(rings_next[&s], c);
                    push(s, wall.walk_ring(c, wall.in_role(c, top), wall.in_role(c, bot)));
                }
            }
        } else {
            // Reset tile: everything swings left; the last strand becomes
            // the new crosser and docks at the lane head.
            for (&s, &c) in &rings_now {
                let target = rings_next[&s];
                if target == c {
                    push(s, wall.walk_ring(c, wall.in_role(c, top), wall.in_role(c, bot)));
                    continue;
                }
                // pick the designated even crossing row for this move
                let row = if c == t {
                    // old crosser, heading to ring 1
                    top + 1
                } else if c == 2 * t {
                    // new crosser, heading to the lane at ring t
                    bot - 1
                } else {
                    // strand at ring t+k moving to ring k
                    top + 2 * (c - t) - 1
                };
                let mut e = wall.walk_ring(c, wall.in_role(c, top), wall.out_role(c, row));
                e.extend(wall.walk_row(row, wall.out_role(c, row), wall.in_role(target, row)));
                e.extend(wall.walk_ring(target, wall.in_role(target, row), wall.in_role(target, bot)));
                push(s, e);
            }
        }
    }

    // Close every strand around the cylinder back to its tile-1 entry.
    let final_layout = layout(&patterns[t * t], t);
    let last_row = r(t * t + 1);
    let mut cycles = Vec::new();
    for s in 1..=t {
        let c = final_layout[&s];
        let mut edges = segments.remove(&s).unwrap();
        edges.extend(wall.walk_ring(c, wall.in_role(c, last_row), wall.in_role(c, 1)));
        cycles.push(Trail {
            edges,
            kind: TrailKind::Cycle,
        });
    }
    let router = Router {
        cycles,
        branching: None,
    };
    check_router(host, &router)?;
    Ok(router)
}

/// Order two is too cramped for the general threading; two explicit
/// cycles sharing the first path's tail do the job: one rides the first
/// crossing path and closes along ring 2, the other is the ring-3 wall
/// cycle through the shared tail.
fn two_strand_router(
    wall: &Wall,
    host: &IncidenceDigraph,
    paths: &[Trail],
) -> Result<Router, EedpError> {
    // The bookkeeping invariant holds for t = 2 as well.
    let patterns = pattern_sequence(2);
    assert_eq!(patterns[3], vec![Sym::Cross, Sym::Strand(1), Sym::Strand(2)]);
    let shared = wall.in_role(3, 1);
    let mut a = wall.walk_row(1, wall.in_role(2, 1), shared);
    a.extend(paths[0].edges.iter().copied());
    a.extend(wall.walk_ring(2, wall.out_role(2, 4), wall.in_role(2, 1)));
    let b = wall.walk_ring(3, shared, shared);
    let router = Router {
        cycles: vec![
            Trail {
                edges: a,
                kind: TrailKind::Cycle,
            },
            Trail {
                edges: b,
                kind: TrailKind::Cycle,
            },
        ],
        branching: None,
    };
    check_router(host, &router)?;
    Ok(router)
}
