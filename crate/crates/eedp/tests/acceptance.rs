//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see
//! the lines; every tolerance is pinned here.

use std::collections::BTreeSet;
use std::time::Instant;

use eedp::flow::max_flow_unit;
use eedp::generate;
use eedp::graph::{induced_cut, IncidenceDigraph, VertexId};
use eedp::normalize::{normalize_degrees, reduce_four_cut, reduce_two_cut, split_edge, SplitRewrite};
use eedp::oracle::{equivalent, solve_exact, Budget, Verdict};
use eedp::path::{Instance, Trail, TrailKind};
use eedp::reducer::{
    find_irrelevant_router_cycle, reduce_pipeline, IrrelevantOutcome, PipelineConfig,
};
use eedp::structure::{
    build_elementary_grid, build_elementary_wall, canonical_swirl, check_router, check_swirl,
    classify_jump, cross_from_jump, inner_tile_edges, jump_in_margin, line_graph_swirl_order,
    router_from_cross_column, CoordinateMatching, JumpKind, Wall,
};
use eedp::twostar::{cut_criterion_exhaustive, cut_criterion_holds, solve_two_star};

fn report(criterion: &str, pass: bool, detail: String) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

/// Criterion 1: on at least 1000 seeded random two-star instances with
/// |V| <= 10, |E| <= 24, p <= 3, the polynomial criterion and the
/// exhaustive oracle agree on feasibility, 100%, within five minutes.
#[test]
fn criterion_1_oracle_frank_agreement() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 1000 {
        seed += 1;
        assert!(seed < 50_000, "generator starved");
        let p = 1 + (seed as usize % 3);
        let n = 6 + (seed % 5) as u32; // <= 10
        let extra = (seed % 3) as usize;
        let (g, dem) = generate::random_two_star(n, p, extra, seed);
        if g.vertex_count() > 10 || g.edge_count() > 24 {
            continue;
        }
        let inst = dem.to_instance(g.clone());
        let frank = cut_criterion_holds(&g, &dem).unwrap();
        let oracle = solve_exact(&inst, Budget::UNLIMITED)
            .is_feasible()
            .expect("oracle must finish at this scale");
        assert_eq!(
            frank, oracle,
            "criterion/oracle disagreement at seed {seed}: {inst:?}"
        );
        // When feasible, the extraction must produce a valid witness.
        if frank {
            let linkage = solve_two_star(&g, &dem).unwrap().expect("criterion holds");
            inst.validate_solution(&linkage).unwrap();
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    report(
        "1 oracle/frank agreement",
        elapsed.as_secs() <= 300,
        format!("{checked} instances, 100% agreement, {elapsed:.2?} <= 5min"),
    );
}

/// Criterion 2: the two-max-flow reformulation equals the exhaustive
/// all-subsets directed cut criterion on a 200-instance suite, |V| <= 12.
#[test]
fn criterion_2_criterion_reformulation_certificate() {
    let mut checked = 0usize;
    let mut seed = 1_000u64;
    while checked < 200 {
        seed += 1;
        assert!(seed < 20_000, "generator starved");
        let p = 1 + (seed as usize % 3);
        let (g, dem) = generate::random_two_star(7 + (seed % 5) as u32, p, (seed % 3) as usize, seed);
        if g.vertex_count() > 12 {
            continue;
        }
        let fast = cut_criterion_holds(&g, &dem).unwrap();
        let slow = cut_criterion_exhaustive(&g, &dem).unwrap();
        assert_eq!(fast, slow, "reformulation mismatch at seed {seed}");
        checked += 1;
    }
    report(
        "2 criterion reformulation",
        true,
        format!("{checked} instances, 100% agreement"),
    );
}

/// Criterion 3: normalize_degrees, reduce_two_cut, reduce_four_cut, and
/// split_edge preserve oracle feasibility on >= 500 seeded instances.
#[test]
fn criterion_3_reduction_equivalence() {
    let mut checked = 0usize;
    let mut seed = 2_000u64;
    while checked < 500 {
        seed += 1;
        assert!(seed < 50_000, "generator starved");
        let p = 1 + (seed as usize % 3);
        let inst = generate::random_instance(5 + (seed % 5) as u32, (seed % 3) as usize, p, seed);
        if inst.supply.vertex_count() > 9 || inst.supply.edge_count() > 22 {
            continue;
        }
        let base = solve_exact(&inst, Budget::UNLIMITED);
        let feasible = base.is_feasible().expect("desk scale");

        let normalized = normalize_degrees(&inst);
        assert_eq!(
            Ok(true),
            equivalent(&inst, &normalized, Budget::UNLIMITED),
            "normalize changed the answer at seed {seed}"
        );

        let (with_two, x2) = generate::plant_two_cut_blob(&inst, 1 + (seed % 3) as usize, seed)
            .expect("instances have edges");
        let reduced = reduce_two_cut(&with_two, &x2).unwrap();
        assert_eq!(
            Ok(true),
            equivalent(&with_two, &reduced, Budget::UNLIMITED),
            "two-cut reduction changed the answer at seed {seed}"
        );
        assert!(reduced.size() < with_two.size());

        if let Some((with_four, pair)) = generate::plant_four_cut_blob(&normalized, seed) {
            let x4: BTreeSet<VertexId> = pair.into_iter().collect();
            let reduced = reduce_four_cut(&with_four, &x4).unwrap();
            assert_eq!(
                Ok(true),
                equivalent(&with_four, &reduced, Budget::UNLIMITED),
                "four-cut reduction changed the answer at seed {seed}"
            );
            assert!(reduced.size() < with_four.size());
        }

        // Splitting an edge on a witness path splits its demand; splitting
        // an avoidable edge keeps the demands and adds the pendant pair.
        match base {
            Verdict::Feasible(witness) => {
                let (idx, path) = witness
                    .paths
                    .iter()
                    .enumerate()
                    .find(|(_, p)| !p.edges.is_empty())
                    .expect("demands exist");
                let e = path.edges[0];
                let split = split_edge(&inst, e, SplitRewrite::SplitDemand(idx)).unwrap();
                assert_eq!(
                    solve_exact(&split, Budget::UNLIMITED).is_feasible(),
                    Some(true),
                    "demand split lost feasibility at seed {seed}"
                );
                let used = witness.edge_set();
                if let Some(free) = inst.supply.edges().find(|e| !used.contains(e)) {
                    let split = split_edge(&inst, free, SplitRewrite::AddPair).unwrap();
                    assert_eq!(
                        solve_exact(&split, Budget::UNLIMITED).is_feasible(),
                        Some(true),
                        "avoidable-edge split lost feasibility at seed {seed}"
                    );
                }
            }
            Verdict::Infeasible => {
                let e = inst.supply.edges().next().unwrap();
                for rewrite in [SplitRewrite::SplitDemand(0), SplitRewrite::AddPair] {
                    let split = split_edge(&inst, e, rewrite).unwrap();
                    assert_eq!(
                        solve_exact(&split, Budget::UNLIMITED).is_feasible(),
                        Some(false),
                        "split created feasibility at seed {seed}"
                    );
                }
            }
            Verdict::Timeout => unreachable!("unlimited budget"),
        }
        let _ = feasible;
        checked += 1;
    }
    report(
        "3 reduction equivalence",
        true,
        format!("{checked} instances, 0 violations"),
    );
}

/// Criterion 4: on walls of order 12, every in-margin Type 0 jump and
/// every eligible saturated Type I/II sequence yields a validated
/// edge-disjoint cross with endpoints on the exact corners of its tile;
/// exhaustive over 20 seeded matchings.
#[test]
fn criterion_4_cross_constructions() {
    let wall = build_elementary_wall(12);
    let mut crosses = 0usize;
    let mut degenerate = 0usize;
    for seed in 0..20u64 {
        let matching = generate::random_matching(&wall, seed);
        let (host, ids) = matching.realize(&wall);
        for pair in matching.pairs() {
            let rec = classify_jump(&wall, pair).unwrap();
            if rec.kind == JumpKind::UpPath || !jump_in_margin(&wall, &matching, &rec) {
                continue;
            }
            if matches!(rec.kind, JumpKind::TypeI | JumpKind::TypeII) {
                degenerate += 1;
            }
            let witness = cross_from_jump(&wall, &matching, &host, &ids, &rec)
                .unwrap_or_else(|e| panic!("seed {seed}, jump {rec:?}: {e}"));
            witness
                .validate(&wall, &host)
                .unwrap_or_else(|e| panic!("seed {seed}, jump {rec:?}: {e}"));
            // endpoints sit on the four tile corners, with each path
            // joining a diagonally opposite pair (the mirror automorphism
            // may flip which corner is which)
            let (s1, s2, t1, t2) = witness.corners;
            let pos = |v| {
                let c = wall.coord_of(v).unwrap();
                (c.ring, c.row)
            };
            let tile = witness.tile;
            let tops: BTreeSet<_> = [pos(s1), pos(s2)].into();
            let bots: BTreeSet<_> = [pos(t1), pos(t2)].into();
            assert_eq!(
                tops,
                [(tile.ring_lo, tile.row_lo), (tile.ring_hi, tile.row_lo)].into(),
                "start corners off the tile"
            );
            assert_eq!(
                bots,
                [(tile.ring_lo, tile.row_hi), (tile.ring_hi, tile.row_hi)].into(),
                "end corners off the tile"
            );
            assert_ne!(pos(s1).0, pos(t1).0, "p1 must join opposite corners");
            assert_ne!(pos(s2).0, pos(t2).0, "p2 must join opposite corners");
            crosses += 1;
        }
    }
    report(
        "4 cross constructions",
        crosses > 0,
        format!("{crosses} validated crosses ({degenerate} from saturated sequences), 20 matchings"),
    );
}

/// Criterion 5: the cross-column configuration yields a verified router
/// for t = 2 and t = 3 within thirty seconds.
#[test]
fn criterion_5_cross_column_router() {
    let start = Instant::now();
    for t in [2usize, 3] {
        let wall = Wall::elementary(2 * t, 2 * t * t * t);
        let mut host = wall.graph.clone();
        let mut paths = Vec::new();
        for i in 1..=t * t {
            let tail = wall.x_in(t + 1, 2 * t * (i - 1) + 1);
            let head = wall.x_out(t, 2 * t * i);
            let e = host.add_edge(tail, head);
            paths.push(Trail {
                edges: vec![e],
                kind: TrailKind::Path,
            });
        }
        let router = router_from_cross_column(&wall, &host, &paths).unwrap();
        assert_eq!(router.order(), t);
        check_router(&host, &router).unwrap();
    }
    let elapsed = start.elapsed();
    report(
        "5 cross column to router",
        elapsed.as_secs() <= 30,
        format!("t in {{2,3}} verified, {elapsed:.2?} <= 30s"),
    );
}

/// Criterion 6: canonical swirls of order 2..=5 verify structurally,
/// contain their inner tile, and pass to vertex-disjoint swirls of equal
/// order in the line graph. Exact assertions, no tolerance.
#[test]
fn criterion_6_canonical_swirl() {
    for t in 2..=5usize {
        let wall = build_elementary_wall(t + 2);
        let matching = CoordinateMatching::new(wall.up_path_matching()).unwrap();
        let (host, ids) = matching.realize(&wall);
        let swirl = canonical_swirl(&wall, &matching, &host, &ids, t, 1, 1).unwrap();
        assert_eq!(swirl.order(), t);
        check_swirl(&wall, &host, &swirl).unwrap();
        let covered = swirl.edge_set();
        for e in inner_tile_edges(&wall, &swirl) {
            assert!(covered.contains(&e), "order {t}: tile edge {e} missing");
        }
        assert_eq!(line_graph_swirl_order(&host, &swirl).unwrap(), t);
    }
    report("6 canonical swirl", true, "orders 2..=5 exact".into());
}

/// Criterion 7: on 50 seeded planted-router instances (order 5..=8,
/// p <= 2), the irrelevant-cycle search returns an oracle-equivalent
/// cycle at least 90% of the time and never a wrong one, in ten minutes.
#[test]
fn criterion_7_irrelevant_router_cycle() {
    let start = Instant::now();
    let mut found = 0usize;
    let mut other = 0usize;
    for seed in 0..50u64 {
        let order = 5 + (seed as usize % 4);
        let p = 1 + (seed as usize % 2);
        let planted = generate::planted_router(order, p, (seed % 3) as usize, seed);
        match find_irrelevant_router_cycle(&planted.instance, &planted.router, 2, Budget::UNLIMITED)
            .unwrap()
        {
            IrrelevantOutcome::Cycle(idx) => {
                let next =
                    eedp::reducer::delete_cycle(&planted.instance, &planted.router.cycles[idx]);
                assert!(next.is_union_eulerian());
                assert_eq!(
                    Ok(true),
                    equivalent(&planted.instance, &next, Budget::UNLIMITED),
                    "a wrong cycle was returned at seed {seed}"
                );
                found += 1;
            }
            IrrelevantOutcome::Unverified | IrrelevantOutcome::NoCandidate => other += 1,
        }
    }
    let elapsed = start.elapsed();
    let rate = found as f64 / 50.0;
    report(
        "7 irrelevant router cycle",
        rate >= 0.90 && elapsed.as_secs() <= 600,
        format!("{found}/50 verified cycles, {other} abstentions, {elapsed:.2?} <= 10min"),
    );
}

/// Criterion 8: the verified pipeline never changes the oracle answer and
/// strictly shrinks |V| + |E| on every step it reports as a deletion or
/// cut reduction.
#[test]
fn criterion_8_pipeline_soundness() {
    let mut fixtures: Vec<Instance> = vec![
        eedp::format::parse_instance_checked(
            &std::fs::read_to_string(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/../../fixtures/bowtie.eedp"
            ))
            .unwrap(),
            false,
        )
        .unwrap(),
        eedp::format::parse_instance_checked(
            &std::fs::read_to_string(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/../../fixtures/triangle.eedp"
            ))
            .unwrap(),
            false,
        )
        .unwrap(),
        eedp::format::parse_instance_checked(
            &std::fs::read_to_string(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/../../fixtures/parallel.eedp"
            ))
            .unwrap(),
            false,
        )
        .unwrap(),
    ];
    for seed in 0..12u64 {
        fixtures.push(generate::random_instance(7, 2, 1 + (seed as usize % 2), seed));
    }
    for seed in 0..4u64 {
        fixtures.push(generate::flower(1, 1, 3, seed).unwrap().instance);
        fixtures.push(generate::planted_router(4, 1, 1, seed).instance);
    }
    let config = PipelineConfig {
        budget: Budget::UNLIMITED,
        verify: true,
        min_router_order: 2,
    };
    let mut steps = 0usize;
    for (i, inst) in fixtures.iter().enumerate() {
        let before = solve_exact(inst, Budget::UNLIMITED).is_feasible().unwrap();
        let (out, log) = reduce_pipeline(inst, &config).unwrap();
        let after = solve_exact(&out, Budget::UNLIMITED).is_feasible().unwrap();
        assert_eq!(before, after, "pipeline changed the answer on fixture {i}");
        let mut last = inst.size();
        for step in &log {
            if step.op.starts_with("delete") || step.op.starts_with("reduce") {
                assert!(
                    step.size_after < last,
                    "step {step} did not shrink on fixture {i}"
                );
            }
            last = step.size_after;
            steps += 1;
        }
        // replay determinism
        let (out2, log2) = reduce_pipeline(inst, &config).unwrap();
        assert_eq!(out, out2);
        assert_eq!(log, log2);
    }
    report(
        "8 pipeline soundness",
        true,
        format!("{} fixtures, {steps} logged steps", fixtures.len()),
    );
}

/// Criterion 9: grid counts match the construction exactly, and the wall
/// plus any complete coordinate matching is Eulerian for k in 2..=6.
#[test]
fn criterion_9_quantitative_size_checks() {
    for k in 2..=6usize {
        let grid = build_elementary_grid(k);
        assert_eq!(grid.graph.vertex_count(), 2 * k * k, "grid order {k}");
        assert_eq!(grid.rings.len(), k);
        for ring in &grid.rings {
            assert_eq!(ring.len(), 2 * k);
        }
        let wall = build_elementary_wall(k);
        let up = wall.up_path_matching();
        assert!(wall.graph.is_eulerian_with(&up), "wall order {k}");
        let random = generate::random_matching(&wall, k as u64);
        let pairs: Vec<_> = random.pairs().collect();
        assert!(wall.graph.is_eulerian_with(&pairs), "wall order {k} random");
        // a concrete cut stays balanced in the realized Eulerian host
        let (host, _) = random.realize(&wall);
        let x: BTreeSet<VertexId> = host.vertices().take(host.vertex_count() / 2).collect();
        let cut = induced_cut(&host, &x);
        assert_eq!(cut.delta_plus.len(), cut.delta_minus.len());
        let _ = max_flow_unit(&host, &[], &[]);
        let _ = &IncidenceDigraph::new();
    }
    report("9 quantitative size checks", true, "k in 2..=6 exact".into());
}
