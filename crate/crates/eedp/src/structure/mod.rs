//! Wall, jump, cross, router, and swirl machinery.

pub mod cross;
pub mod es;
pub mod matching;
pub mod router;
pub mod swirl;
pub mod wall;

pub use cross::{cross_from_jump, jump_in_margin, tile_edges, CrossWitness, TileBounds};
pub use es::{es_monotone, es_nonrepetitive, Monotone};
pub use matching::{
    classify_jump, complete_coordinate_paths, eulerian_closure, induced_matching, is_saturated,
    jump_cycle, jump_sequence, skeleton, Closure, CoordinateMatching, JumpKind, JumpRecord,
};
pub use router::{
    check_router, pattern_sequence, router_from_cross_column, verify_router, Router, Sym,
};
pub use swirl::{
    attachment_extension, canonical_swirl, check_swirl, classify_swirl_jump, inner_tile_edges,
    interior_cross_free,
    line_graph_swirl_order, swirl_distance, swirl_is_crossless, swirl_is_flat, verify_swirl,
    JumpLength, Swirl,
};
pub use wall::{build_elementary_grid, build_elementary_wall, Coord, Grid, Sign, Wall};

use crate::graph::IncidenceDigraph;
use crate::path::{Trail, TrailKind};
use crate::EedpError;
use std::collections::BTreeMap;

/// Outcome of the desk-scale structure search on a wall with a complete
/// coordinate matching.
pub enum StructureOutcome {
    /// An all-up-path tile induced this canonical swirl.
    Swirl(Swirl),
    /// The matching realized the full cross-column configuration.
    Router(Router),
    /// Neither structure exists at this scale.
    Inconclusive,
}

/// Best-effort search: emit a router when the matching contains the whole
/// cross-column path configuration, a canonical swirl when some
/// `(t+1) x t` tile carries only up-paths, and report inconclusive
/// otherwise. The quantitative thresholds of the underlying theory are
/// astronomically large and deliberately not reproduced.
pub fn flat_swirl_or_router(
    wall: &Wall,
    matching: &CoordinateMatching,
    host: &IncidenceDigraph,
    edge_ids: &BTreeMap<(crate::VertexId, crate::VertexId), crate::EdgeId>,
    t: usize,
) -> Result<StructureOutcome, EedpError> {
    // Router branch: the cross-column shape wants a 2t-ring wall and the
    // t*t designated matching edges.
    if wall.rings() == 2 * t && wall.rows() >= 4 * t * t * t {
        let mut paths = Vec::new();
        for i in 1..=t * t {
            let tail = wall.x_in(t + 1, 2 * t * (i - 1) + 1);
            let head = wall.x_out(t, 2 * t * i);
            match matching.head_of(tail) {
                Some(h) if h == head => paths.push(Trail {
                    edges: vec![edge_ids[&(tail, head)]],
                    kind: TrailKind::Path,
                }),
                _ => {
                    paths.clear();
                    break;
                }
            }
        }
        if !paths.is_empty() {
            return Ok(StructureOutcome::Router(router_from_cross_column(
                wall, host, &paths,
            )?));
        }
    }
    // Swirl branch: scan for an all-up-path (t+1) x t tile.
    if wall.rings() >= t + 1 && wall.rows() >= 2 * t {
        for ring_lo in 1..=wall.rings() - t {
            for half in 0..wall.rows() / 2 {
                let row_lo = 2 * half + 1;
                if row_lo + 2 * t - 1 > wall.rows() {
                    break;
                }
                if let Ok(swirl) =
                    canonical_swirl(wall, matching, host, edge_ids, t, ring_lo, row_lo)
                {
                    return Ok(StructureOutcome::Swirl(swirl));
                }
            }
        }
    }
    Ok(StructureOutcome::Inconclusive)
}
