//! Seeded instance and structure generators.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::{Instance, Trail, TrailKind};
use crate::structure::matching::CoordinateMatching;
use crate::structure::router::Router;
use crate::structure::wall::Wall;
use crate::twostar::TwoStarDemand;
use crate::EedpError;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Union of `r` random simple cycles over at most `n` vertices; Eulerian
/// by construction, no demands.
pub fn random_euler(n: u32, r: usize, seed: u64) -> Instance {
    let mut rng = rng(seed);
    let mut g = IncidenceDigraph::with_vertices(n.max(2));
    for _ in 0..r {
        add_random_cycle(&mut g, &mut rng, n.max(2));
    }
    Instance::new(g, vec![])
}

fn add_random_cycle(g: &mut IncidenceDigraph, rng: &mut ChaCha8Rng, n: u32) {
    let len = rng.gen_range(2..=(n.min(8)).max(2));
    let mut verts: Vec<u32> = (0..n).collect();
    verts.shuffle(rng);
    let cycle: Vec<VertexId> = verts.into_iter().take(len as usize).map(VertexId).collect();
    for i in 0..cycle.len() {
        g.add_edge(cycle[i], cycle[(i + 1) % cycle.len()]);
    }
}

/// Random instance with `p` demands: each source gets a random supply path
/// to a permuted sink, plus `extra_cycles` of noise. The union is Eulerian
/// regardless of the permutation, so feasibility varies.
pub fn random_instance(n: u32, extra_cycles: usize, p: usize, seed: u64) -> Instance {
    let mut rng = rng(seed);
    let n = n.max(2 * p as u32 + 2);
    let mut g = IncidenceDigraph::with_vertices(n);
    let mut ids: Vec<u32> = (0..n).collect();
    ids.shuffle(&mut rng);
    let sources: Vec<VertexId> = ids[..p].iter().copied().map(VertexId).collect();
    let sinks: Vec<VertexId> = ids[p..2 * p].iter().copied().map(VertexId).collect();
    let mut perm: Vec<usize> = (0..p).collect();
    perm.shuffle(&mut rng);
    for i in 0..p {
        let target = sinks[perm[i]];
        add_random_path(&mut g, &mut rng, sources[i], target, n);
    }
    for _ in 0..extra_cycles {
        add_random_cycle(&mut g, &mut rng, n);
    }
    let demands = (0..p).map(|i| (sinks[i], sources[i])).collect();
    let inst = Instance::new(g, demands);
    debug_assert!(inst.is_union_eulerian());
    inst
}

fn add_random_path(
    g: &mut IncidenceDigraph,
    rng: &mut ChaCha8Rng,
    from: VertexId,
    to: VertexId,
    n: u32,
) {
    let hops = rng.gen_range(0..4usize);
    let mut at = from;
    for _ in 0..hops {
        let mid = VertexId(rng.gen_range(0..n));
        if mid == at || mid == to {
            continue;
        }
        g.add_edge(at, mid);
        at = mid;
    }
    g.add_edge(at, to);
}

/// Random two-star instance: supply paths from each source to a permuted
/// sink, some forced through the centre, plus noise cycles. Feasibility
/// varies with the permutation and the wiring.
pub fn random_two_star(n: u32, p: usize, extra_cycles: usize, seed: u64) -> (IncidenceDigraph, TwoStarDemand) {
    let mut rng = rng(seed);
    let n = n.max(2 * p as u32 + 3);
    let mut g = IncidenceDigraph::with_vertices(n);
    let mut ids: Vec<u32> = (0..n).collect();
    ids.shuffle(&mut rng);
    let center = VertexId(ids[0]);
    let sources: Vec<VertexId> = ids[1..1 + p].iter().copied().map(VertexId).collect();
    let sinks: Vec<VertexId> = ids[1 + p..1 + 2 * p].iter().copied().map(VertexId).collect();
    let mut perm: Vec<usize> = (0..p).collect();
    perm.shuffle(&mut rng);
    for i in 0..p {
        if rng.gen_bool(0.6) {
            // route through the centre
            add_random_path(&mut g, &mut rng, sources[i], center, n);
            add_random_path(&mut g, &mut rng, center, sinks[perm[i]], n);
        } else {
            add_random_path(&mut g, &mut rng, sources[i], sinks[perm[i]], n);
        }
    }
    for _ in 0..extra_cycles {
        add_random_cycle(&mut g, &mut rng, n);
    }
    (
        g,
        TwoStarDemand {
            center,
            sources,
            sinks,
        },
    )
}

/// A uniformly random complete coordinate matching on a wall.
pub fn random_matching(wall: &Wall, seed: u64) -> CoordinateMatching {
    let mut rng = rng(seed);
    let tails: Vec<VertexId> = wall.in_coordinates().collect();
    let mut heads: Vec<VertexId> = wall.out_coordinates().collect();
    heads.shuffle(&mut rng);
    CoordinateMatching::new(tails.into_iter().zip(heads)).expect("shuffled matching is a matching")
}

/// Wall host instance: the wall plus a complete coordinate matching
/// realized as supply edges; Eulerian with no demands.
pub fn wall_host(wall: &Wall, matching: &CoordinateMatching) -> Instance {
    let (host, _) = matching.realize(wall);
    let inst = Instance::new(host, vec![]);
    debug_assert!(inst.is_union_eulerian());
    inst
}

/// The flower-graph shape: vertex-disjoint alternating cycles where
/// consecutive cycles share two vertices, all chords and terminal edges on
/// the outer cycle only, every chord skipping at least one outer vertex.
pub struct Flower {
    pub instance: Instance,
    /// The concentric cycles, innermost first.
    pub cycles: Vec<Trail>,
    pub chords: Vec<EdgeId>,
}

pub fn flower(h: usize, p: usize, chords: usize, seed: u64) -> Result<Flower, EedpError> {
    let mut rng = rng(seed);
    let m = chords + p; // outer vertices carrying one extra in and out each
    if m < 2 && chords > 0 {
        return Err(EedpError::Structure(
            "too few outer slots for chords".into(),
        ));
    }
    let mut g = IncidenceDigraph::new();
    // Share pair between C_i and C_{i+1}.
    let shares: Vec<[VertexId; 2]> = (0..2 * h)
        .map(|_| [g.add_vertex(), g.add_vertex()])
        .collect();
    let mut cycles = Vec::new();
    let close_cycle = |g: &mut IncidenceDigraph, verts: &[VertexId], flip: bool| {
        let mut order: Vec<VertexId> = verts.to_vec();
        if flip {
            order.reverse();
        }
        let mut edges = Vec::new();
        for i in 0..order.len() {
            edges.push(g.add_edge(order[i], order[(i + 1) % order.len()]));
        }
        Trail {
            edges,
            kind: TrailKind::Cycle,
        }
    };
    // C_0: the innermost digon on the first share pair.
    cycles.push(close_cycle(&mut g, &shares[0], false));
    // C_i for 0 < i < 2h alternates between its two share pairs.
    for i in 1..2 * h {
        let verts = [
            shares[i - 1][0],
            shares[i][0],
            shares[i - 1][1],
            shares[i][1],
        ];
        cycles.push(close_cycle(&mut g, &verts, i % 2 == 0));
    }
    // Outer cycle: the last share pair plus the chord/terminal slots.
    let outer_extras: Vec<VertexId> = (0..m).map(|_| g.add_vertex()).collect();
    let mut outer: Vec<VertexId> = Vec::new();
    outer.push(shares[2 * h - 1][0]);
    let half = m / 2;
    outer.extend(&outer_extras[..half]);
    outer.push(shares[2 * h - 1][1]);
    outer.extend(&outer_extras[half..]);
    cycles.push(close_cycle(&mut g, &outer, 2 * h % 2 == 0));

    // Every extra outer vertex owes one extra out and one extra in:
    // chords pair outs with non-adjacent ins, terminal edges absorb the
    // rest. A small backtracking search finds a consistent assignment.
    let mut outs: Vec<VertexId> = outer_extras.clone();
    let mut ins: Vec<VertexId> = outer_extras.clone();
    outs.shuffle(&mut rng);
    ins.shuffle(&mut rng);
    let pos_of = |v: VertexId| outer.iter().position(|&w| w == v).unwrap();
    let adjacent = |a: VertexId, b: VertexId| {
        let (x, y) = (pos_of(a), pos_of(b));
        let n = outer.len();
        (x + 1) % n == y || (y + 1) % n == x || x == y
    };
    fn assign(
        outs: &[VertexId],
        ins: &[VertexId],
        adjacent: &dyn Fn(VertexId, VertexId) -> bool,
        k: usize,
        chords_left: usize,
        terminals_left: usize,
        used_in: &mut Vec<bool>,
        picks: &mut Vec<Option<usize>>,
    ) -> bool {
        if k == outs.len() {
            return chords_left == 0 && terminals_left == 0;
        }
        if terminals_left > 0 {
            picks.push(None);
            if assign(outs, ins, adjacent, k + 1, chords_left, terminals_left - 1, used_in, picks)
            {
                return true;
            }
            picks.pop();
        }
        if chords_left > 0 {
            for b in 0..ins.len() {
                if used_in[b] || adjacent(outs[k], ins[b]) {
                    continue;
                }
                used_in[b] = true;
                picks.push(Some(b));
                if assign(outs, ins, adjacent, k + 1, chords_left - 1, terminals_left, used_in, picks)
                {
                    return true;
                }
                picks.pop();
                used_in[b] = false;
            }
        }
        false
    }
    let mut used_in = vec![false; ins.len()];
    let mut picks: Vec<Option<usize>> = Vec::new();
    if !assign(&outs, &ins, &adjacent, 0, chords, p, &mut used_in, &mut picks) {
        return Err(EedpError::Structure(
            "could not place the chords; increase the slot count".into(),
        ));
    }
    let mut demands = Vec::new();
    let mut chord_edges = Vec::new();
    for (k, pick) in picks.iter().enumerate() {
        match pick {
            Some(b) => {
                chord_edges.push(g.add_edge(outs[k], ins[*b]));
            }
            None => {
                let t = g.add_vertex();
                g.add_edge(outs[k], t);
                demands.push((t, VertexId(0)));
            }
        }
    }
    // leftover ins, in order, receive the source edges
    let mut demand_idx = 0;
    for (b, &to) in ins.iter().enumerate() {
        if !used_in[b] {
            let s = g.add_vertex();
            g.add_edge(s, to);
            demands[demand_idx].1 = s;
            demand_idx += 1;
        }
    }
    debug_assert_eq!(demand_idx, p);
    let instance = Instance::new(g, demands);
    debug_assert!(instance.is_union_eulerian());
    let flower = Flower {
        instance,
        cycles,
        chords: chord_edges,
    };
    validate_flower(&flower)?;
    Ok(flower)
}

/// Structural checks of the flower shape.
pub fn validate_flower(f: &Flower) -> Result<(), EedpError> {
    let g = &f.instance.supply;
    let err = |m: String| Err(EedpError::Structure(m));
    if !f.instance.is_union_eulerian() {
        return err("flower union is not Eulerian".into());
    }
    for (i, c) in f.cycles.iter().enumerate() {
        c.validate(g)
            .map_err(|e| EedpError::Structure(format!("flower cycle {i}: {e}")))?;
        if !c.is_vertex_disjoint(g) {
            return err(format!("flower cycle {i} repeats a vertex"));
        }
    }
    let vsets: Vec<BTreeSet<VertexId>> = f.cycles.iter().map(|c| c.vertex_set(g)).collect();
    for i in 0..vsets.len() {
        for j in 0..vsets.len() {
            if j > i + 1 && !vsets[i].is_disjoint(&vsets[j]) {
                return err(format!("flower cycles {i} and {j} intersect"));
            }
        }
        if i + 1 < vsets.len() && vsets[i].is_disjoint(&vsets[i + 1]) {
            return err(format!("flower cycles {i} and {} do not touch", i + 1));
        }
    }
    // Non-cycle supply edges live on the outer cycle or reach terminals.
    let cycle_edges: BTreeSet<EdgeId> = f.cycles.iter().flat_map(|c| c.edges.iter().copied()).collect();
    let outer = vsets.last().unwrap();
    let terminals = f.instance.terminals();
    let outer_walk: Vec<VertexId> = f.cycles.last().unwrap().vertex_walk(g);
    for e in g.edges() {
        if cycle_edges.contains(&e) {
            continue;
        }
        let (t, h) = g.ends(e).unwrap();
        let touches_terminal = terminals.contains(&t) || terminals.contains(&h);
        if touches_terminal {
            if !(outer.contains(&t) || outer.contains(&h)) {
                return err(format!("terminal edge {e} misses the outer cycle"));
            }
            continue;
        }
        if !(outer.contains(&t) && outer.contains(&h)) {
            return err(format!("chord {e} leaves the outer cycle"));
        }
        // skipping at least one vertex: endpoints not consecutive
        let n = outer_walk.len() - 1;
        let x = outer_walk.iter().position(|&v| v == t).unwrap();
        let y = outer_walk.iter().position(|&v| v == h).unwrap();
        if (x + 1) % n == y || (y + 1) % n == x {
            return err(format!("chord {e} joins consecutive outer vertices"));
        }
    }
    Ok(())
}

/// Instance with a planted router: pairwise-intersecting cycles built on a
/// triangular grid of meeting vertices, demand paths that weave through
/// the router region, and optional noise.
pub struct PlantedRouter {
    pub instance: Instance,
    pub router: Router,
}

pub fn planted_router(order: usize, p: usize, noise: usize, seed: u64) -> PlantedRouter {
    let mut rng = rng(seed);
    let mut g = IncidenceDigraph::new();
    // meeting vertex of cycles i < j
    let mut meet = std::collections::BTreeMap::new();
    for i in 0..order {
        for j in i + 1..order {
            meet.insert((i, j), g.add_vertex());
        }
    }
    let at = |i: usize, j: usize| meet[&(i.min(j), i.max(j))];
    let mut cycles = Vec::new();
    for i in 0..order {
        let stops: Vec<VertexId> = (0..order).filter(|&j| j != i).map(|j| at(i, j)).collect();
        let mut edges = Vec::new();
        for k in 0..stops.len() {
            edges.push(g.add_edge(stops[k], stops[(k + 1) % stops.len()]));
        }
        cycles.push(Trail {
            edges,
            kind: TrailKind::Cycle,
        });
    }
    let router_vertices: Vec<VertexId> = meet.values().copied().collect();
    // Demand paths: fresh terminals; interiors may weave through router
    // vertices on fresh edges, keeping every vertex balanced.
    let mut demands = Vec::new();
    for _ in 0..p {
        let s = g.add_vertex();
        let t = g.add_vertex();
        let mut route = vec![s];
        for _ in 0..rng.gen_range(1..4usize) {
            if rng.gen_bool(0.7) {
                route.push(*router_vertices.as_slice().choose(&mut rng).unwrap());
            } else {
                route.push(g.add_vertex());
            }
        }
        route.push(t);
        route.dedup();
        for w in route.windows(2) {
            g.add_edge(w[0], w[1]);
        }
        demands.push((t, s));
    }
    for _ in 0..noise {
        let a = *router_vertices.as_slice().choose(&mut rng).unwrap();
        let b = g.add_vertex();
        g.add_edge(a, b);
        g.add_edge(b, a);
    }
    let instance = Instance::new(g, demands);
    debug_assert!(instance.is_union_eulerian());
    PlantedRouter {
        instance,
        router: Router {
            cycles,
            branching: None,
        },
    }
}

/// Splits a non-terminal degree-4 vertex into a digon pair behind a
/// 4-cut; returns the new instance and the planted interior.
pub fn plant_four_cut_blob(inst: &Instance, seed: u64) -> Option<(Instance, [VertexId; 2])> {
    let mut rng = rng(seed);
    let terminals = inst.terminals();
    let mut candidates: Vec<VertexId> = inst
        .supply
        .vertices()
        .filter(|v| {
            !terminals.contains(v)
                && inst.supply.in_degree(*v) == 2
                && inst.supply.out_degree(*v) == 2
                && inst.supply.in_edges(*v).all(|e| inst.supply.tail(e) != Some(*v))
        })
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let v = candidates.remove(rng.gen_range(0..candidates.len()));
    let mut g = inst.supply.clone();
    let ins: Vec<EdgeId> = g.in_edges(v).collect();
    let outs: Vec<EdgeId> = g.out_edges(v).collect();
    let v1 = g.add_vertex();
    let v2 = g.add_vertex();
    g.add_edge(v1, v2);
    g.add_edge(v2, v1);
    for (k, &e) in ins.iter().enumerate() {
        let t = g.tail(e).unwrap();
        g.remove_edge(e);
        g.add_edge(t, if k == 0 { v1 } else { v2 });
    }
    for (k, &e) in outs.iter().enumerate() {
        let h = g.head(e).unwrap();
        g.remove_edge(e);
        g.add_edge(if k == 0 { v1 } else { v2 }, h);
    }
    g.remove_vertex(v).ok()?;
    let out = Instance::new(g, inst.demands.clone());
    debug_assert!(out.is_union_eulerian());
    Some((out, [v1, v2]))
}

/// Reroutes a supply edge through a fresh vertex carrying a pendant digon
/// chain, planting a 2-cut; returns the new instance and the interior.
pub fn plant_two_cut_blob(
    inst: &Instance,
    chain: usize,
    seed: u64,
) -> Option<(Instance, BTreeSet<VertexId>)> {
    let mut rng = rng(seed);
    let edges: Vec<EdgeId> = inst.supply.edges().collect();
    if edges.is_empty() {
        return None;
    }
    let e = edges[rng.gen_range(0..edges.len())];
    let (u, w) = inst.supply.ends(e)?;
    let mut g = inst.supply.clone();
    g.remove_edge(e);
    let x1 = g.add_vertex();
    g.add_edge(u, x1);
    g.add_edge(x1, w);
    let mut interior: BTreeSet<VertexId> = [x1].into();
    let mut prev = x1;
    for _ in 0..chain.max(1) {
        let next = g.add_vertex();
        g.add_edge(prev, next);
        g.add_edge(next, prev);
        interior.insert(next);
        prev = next;
    }
    let out = Instance::new(g, inst.demands.clone());
    debug_assert!(out.is_union_eulerian());
    Some((out, interior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::find_small_cut;
    use crate::structure::router::verify_router;
    use crate::structure::wall::build_elementary_wall;

    #[test]
    fn random_euler_is_eulerian_and_deterministic() {
        let a = random_euler(8, 3, 7);
        let b = random_euler(8, 3, 7);
        assert!(a.supply.is_eulerian());
        assert_eq!(a, b);
    }

    #[test]
    fn random_instances_have_eulerian_unions() {
        for seed in 0..20 {
            let inst = random_instance(9, 2, 3, seed);
            assert!(inst.is_union_eulerian(), "seed {seed}");
        }
    }

    #[test]
    fn random_matchings_are_complete() {
        let wall = build_elementary_wall(4);
        for seed in 0..5 {
            let m = random_matching(&wall, seed);
            assert!(m.is_complete(&wall));
        }
    }

    #[test]
    fn flower_shape_validates() {
        let f = flower(2, 2, 3, 11).unwrap();
        assert_eq!(f.cycles.len(), 5);
        validate_flower(&f).unwrap();
    }

    #[test]
    fn planted_router_verifies() {
        for seed in 0..5 {
            let planted = planted_router(5, 2, 2, seed);
            assert!(verify_router(&planted.instance.supply, &planted.router));
            assert!(planted.instance.is_union_eulerian());
        }
    }

    #[test]
    fn four_cut_blob_is_reducible_and_detected() {
        let planted = planted_router(4, 1, 0, 3);
        let (with_blob, pair) = plant_four_cut_blob(&planted.instance, 5).unwrap();
        let x: BTreeSet<VertexId> = pair.into_iter().collect();
        let reduced = crate::normalize::reduce_four_cut(&with_blob, &x).unwrap();
        assert!(reduced.size() < with_blob.size());
        // the search finds some applicable small cut as well
        assert!(find_small_cut(&with_blob).is_some());
    }
}
