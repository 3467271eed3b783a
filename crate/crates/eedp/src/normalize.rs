//! Instance normal form and small-cut reductions.
//!
//! Normal form: every terminal is distinct with degree 2 in supply plus
//! demands, every non-terminal has degree 4. High-degree vertices are
//! replaced by the k-row cycle gadget; degree-2 vertices are dissolved by
//! splitting off; over-degree or doubled terminals are subdivided onto
//! fresh pendant terminals. Each transformation preserves the YES/NO
//! answer.

use std::collections::BTreeSet;

use crate::flow::max_flow_unit;
use crate::graph::{induced_cut, EdgeId, IncidenceDigraph, VertexId};
use crate::path::Instance;
use crate::EedpError;

/// Every non-terminal has degree 4 and every terminal is distinct with
/// union degree 2.
pub fn is_normalized(inst: &Instance) -> bool {
    let terminals = inst.terminals();
    inst.supply.vertices().all(|v| {
        if terminals.contains(&v) {
            inst.union_degree(v) == 2 && inst.demand_degree(v) == 1
        } else {
            inst.supply.degree(v) == 4
        }
    })
}

/// Rewrites the instance into normal form.
pub fn normalize_degrees(inst: &Instance) -> Instance {
    let mut supply = inst.supply.clone();
    let mut demands = inst.demands.clone();

    // Settle each demand whose endpoints are over-degree or doubled onto a
    // fresh pendant pair: (t, s) becomes supply (t, t'), (s', s) with the
    // new demand (t', s').
    loop {
        let bad = first_bad_terminal(&supply, &demands);
        let Some(w) = bad else { break };
        let i = demands
            .iter()
            .position(|&(t, s)| t == w || s == w)
            .expect("bad terminal must carry a demand");
        let (t, s) = demands[i];
        let t_new = supply.add_vertex();
        let s_new = supply.add_vertex();
        supply.add_edge(t, t_new);
        supply.add_edge(s_new, s);
        demands[i] = (t_new, s_new);
    }

    // Non-terminal cleanups, lowest vertex id first.
    loop {
        let terminals: BTreeSet<VertexId> = demands.iter().flat_map(|&(t, s)| [t, s]).collect();
        let Some((v, action)) = supply
            .vertices()
            .filter(|v| !terminals.contains(v))
            .find_map(|v| classify(&supply, v).map(|a| (v, a)))
        else {
            break;
        };
        match action {
            Action::Delete => {
                supply.remove_vertex(v).unwrap();
            }
            Action::DropLoop(e) => {
                supply.remove_edge(e);
            }
            Action::Dissolve(e_in, e_out) => {
                supply.split_off(e_in, e_out).expect("degree-2 dissolution");
            }
            Action::Gadget => expand_gadget(&mut supply, v),
        }
    }

    let out = Instance::new(supply, demands);
    debug_assert!(out.is_union_eulerian());
    debug_assert!(is_normalized(&out));
    out
}

fn first_bad_terminal(
    supply: &IncidenceDigraph,
    demands: &[(VertexId, VertexId)],
) -> Option<VertexId> {
    let inst = Instance::new(supply.clone(), demands.to_vec());
    let mut terminals: Vec<VertexId> = inst.terminals().into_iter().collect();
    terminals.sort();
    terminals
        .into_iter()
        .find(|&w| inst.union_degree(w) != 2 || inst.demand_degree(w) != 1)
}

enum Action {
    Delete,
    DropLoop(EdgeId),
    Dissolve(EdgeId, EdgeId),
    Gadget,
}

fn classify(g: &IncidenceDigraph, v: VertexId) -> Option<Action> {
    // A supply loop never carries part of any solution; drop it first so
    // the degree cases below see a loop-free vertex.
    if let Some(l) = g.out_edges(v).find(|&e| g.head(e) == Some(v)) {
        return Some(Action::DropLoop(l));
    }
    match g.degree(v) {
        0 => Some(Action::Delete),
        2 => {
            let e_in = g.in_edges(v).next().unwrap();
            let e_out = g.out_edges(v).next().unwrap();
            Some(Action::Dissolve(e_in, e_out))
        }
        4 => None,
        d if d >= 6 => Some(Action::Gadget),
        d => unreachable!("odd supply degree {d} at non-terminal {v} in Eulerian union"),
    }
}

/// Replaces `v` (in-degree = out-degree = k, no loops) by k disjoint
/// k-cycles stacked into rows, in-neighbours rewired onto row 1 and
/// out-neighbours onto row k. Any source-to-sink matching stays routable
/// through the gadget.
fn expand_gadget(g: &mut IncidenceDigraph, v: VertexId) {
    let k = g.in_degree(v);
    debug_assert_eq!(k, g.out_degree(v));
    debug_assert!(k >= 3);
    let ins: Vec<EdgeId> = g.in_edges(v).collect();
    let outs: Vec<EdgeId> = g.out_edges(v).collect();

    // rows[i][j] = v^{i+1}_{j+1}; cycles run within a row, verticals run
    // row i to row i+1.
    let rows: Vec<Vec<VertexId>> = (0..k)
        .map(|_| (0..k).map(|_| g.add_vertex()).collect())
        .collect();
    for row in &rows {
        for j in 0..k {
            g.add_edge(row[j], row[(j + 1) % k]);
        }
    }
    for i in 0..k - 1 {
        for j in 0..k {
            g.add_edge(rows[i][j], rows[i + 1][j]);
        }
    }
    for (j, &e) in ins.iter().enumerate() {
        let tail = g.tail(e).unwrap();
        g.remove_edge(e);
        g.add_edge(tail, rows[0][j]);
    }
    for (j, &e) in outs.iter().enumerate() {
        let head = g.head(e).unwrap();
        g.remove_edge(e);
        g.add_edge(rows[k - 1][j], head);
    }
    g.remove_vertex(v).unwrap();
}

/// Kind of small cut a reduction applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallCutKind {
    Two,
    Four,
}

/// Deletes a 2-cut interior: `X` vanishes and the through-connection is
/// replaced by the single bridging edge.
pub fn reduce_two_cut(inst: &Instance, x: &BTreeSet<VertexId>) -> Result<Instance, EedpError> {
    check_cut_preconditions(inst, x, SmallCutKind::Two)?;
    let cut = induced_cut(&inst.supply, x);
    let e_in = *cut.delta_minus.iter().next().unwrap();
    let e_out = *cut.delta_plus.iter().next().unwrap();
    let u = inst.supply.tail(e_in).unwrap();
    let v = inst.supply.head(e_out).unwrap();
    let mut supply = inst.supply.clone();
    for e in supply.edges().collect::<Vec<_>>() {
        let (t, h) = supply.ends(e).unwrap();
        if x.contains(&t) || x.contains(&h) {
            supply.remove_edge(e);
        }
    }
    for &w in x {
        supply.remove_vertex(w)?;
    }
    if u != v {
        supply.add_edge(u, v);
    }
    let out = Instance::new(supply, inst.demands.clone());
    debug_assert!(out.is_union_eulerian());
    debug_assert!(out.size() < inst.size());
    Ok(out)
}

/// Contracts a connected 4-cut interior to a single degree-4 vertex,
/// dropping the edges inside.
pub fn reduce_four_cut(inst: &Instance, x: &BTreeSet<VertexId>) -> Result<Instance, EedpError> {
    check_cut_preconditions(inst, x, SmallCutKind::Four)?;
    let mut supply = inst.supply.clone();
    let z = supply.add_vertex();
    for e in supply.edges().collect::<Vec<_>>() {
        let (t, h) = supply.ends(e).unwrap();
        match (x.contains(&t), x.contains(&h)) {
            (true, true) => {
                supply.remove_edge(e);
            }
            (true, false) => {
                supply.remove_edge(e);
                supply.add_edge(z, h);
            }
            (false, true) => {
                supply.remove_edge(e);
                supply.add_edge(t, z);
            }
            (false, false) => {}
        }
    }
    for &w in x {
        supply.remove_vertex(w)?;
    }
    let out = Instance::new(supply, inst.demands.clone());
    debug_assert_eq!(out.supply.degree(z), 4);
    debug_assert!(out.is_union_eulerian());
    debug_assert!(out.size() < inst.size());
    Ok(out)
}

fn check_cut_preconditions(
    inst: &Instance,
    x: &BTreeSet<VertexId>,
    kind: SmallCutKind,
) -> Result<(), EedpError> {
    if x.is_empty() {
        return Err(EedpError::Reduction("cut interior is empty".into()));
    }
    let terminals = inst.terminals();
    if let Some(w) = x.intersection(&terminals).next() {
        return Err(EedpError::Reduction(format!(
            "cut interior contains terminal {w}"
        )));
    }
    if let Some(w) = x.iter().find(|w| !inst.supply.has_vertex(**w)) {
        return Err(EedpError::Reduction(format!("unknown vertex {w}")));
    }
    let cut = induced_cut(&inst.supply, x);
    match kind {
        SmallCutKind::Two => {
            if cut.delta_plus.len() != 1 || cut.delta_minus.len() != 1 {
                return Err(EedpError::Reduction(format!(
                    "expected a 2-cut, found order {}",
                    cut.order()
                )));
            }
        }
        SmallCutKind::Four => {
            if cut.delta_plus.len() != 2 || cut.delta_minus.len() != 2 {
                return Err(EedpError::Reduction(format!(
                    "expected a 4-cut, found order {}",
                    cut.order()
                )));
            }
            if x.len() < 2 {
                return Err(EedpError::Reduction(
                    "4-cut interior must have at least two vertices".into(),
                ));
            }
            let comps = inst.supply.undirected_components(x);
            if comps.len() != 1 {
                return Err(EedpError::Reduction(
                    "4-cut interior must be connected".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Searches for an applicable small cut away from the terminals: for each
/// ordered vertex pair the min-cut is computed by max-flow and the source
/// side is filtered through the reduction preconditions. 2-cuts win over
/// 4-cuts, then smaller interiors win.
pub fn find_small_cut(inst: &Instance) -> Option<(SmallCutKind, BTreeSet<VertexId>)> {
    let terminals = inst.terminals();
    let verts: Vec<VertexId> = inst.supply.vertices().collect();
    let mut best: Option<(SmallCutKind, BTreeSet<VertexId>)> = None;
    let rank = |kind: SmallCutKind, len: usize| (matches!(kind, SmallCutKind::Four), len);
    for &a in &verts {
        for &b in &verts {
            if a == b {
                continue;
            }
            let flow = max_flow_unit(&inst.supply, &[(a, u32::MAX)], &[(b, u32::MAX)]);
            if flow.value == 0 || flow.value > 2 {
                continue;
            }
            for side in [minimal_source_side(inst, a, b), flow.max_source_side] {
                if side.contains(&b) || !side.contains(&a) {
                    continue;
                }
                if side.iter().any(|w| terminals.contains(w)) {
                    continue;
                }
                let kind = match induced_cut(&inst.supply, &side).order() {
                    2 => SmallCutKind::Two,
                    4 => SmallCutKind::Four,
                    _ => continue,
                };
                if check_cut_preconditions(inst, &side, kind).is_err() {
                    continue;
                }
                if best
                    .as_ref()
                    .map(|(bk, bx)| rank(kind, side.len()) < rank(*bk, bx.len()))
                    .unwrap_or(true)
                {
                    best = Some((kind, side));
                }
            }
        }
    }
    best
}

fn minimal_source_side(inst: &Instance, a: VertexId, b: VertexId) -> BTreeSet<VertexId> {
    // Vertices reachable from `a` in the residual network; recomputed via a
    // second flow run for simplicity.
    let flow = max_flow_unit(&inst.supply, &[(a, u32::MAX)], &[(b, u32::MAX)]);
    let used: BTreeSet<EdgeId> = flow
        .witness
        .paths
        .iter()
        .flat_map(|p| p.edges.iter().copied())
        .collect();
    // Residual forward: unused edges; residual backward: used edges reversed.
    let mut seen: BTreeSet<VertexId> = [a].into();
    let mut stack = vec![a];
    while let Some(v) = stack.pop() {
        for e in inst.supply.out_edges(v) {
            if !used.contains(&e) {
                let h = inst.supply.head(e).unwrap();
                if seen.insert(h) {
                    stack.push(h);
                }
            }
        }
        for e in inst.supply.in_edges(v) {
            if used.contains(&e) {
                let t = inst.supply.tail(e).unwrap();
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
    seen
}

/// How `split_edge` patches the demand list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRewrite {
    /// Replace demand `i` by the two half-demands around the split edge,
    /// as when a known solution routes demand `i` through it.
    SplitDemand(usize),
    /// Keep all demands and add the pendant pair; equivalence holds when
    /// some solution avoids the edge.
    AddPair,
}

/// Splits supply edge `e = (u, v)` into pendants `(u, u_e)` and `(v_e, v)`
/// and patches the demand list so the union stays Eulerian. The demand
/// count grows by exactly one.
pub fn split_edge(
    inst: &Instance,
    e: EdgeId,
    rewrite: SplitRewrite,
) -> Result<Instance, EedpError> {
    let (u, v) = inst
        .supply
        .ends(e)
        .ok_or_else(|| EedpError::Reduction(format!("split_edge: no such supply edge {e}")))?;
    let mut supply = inst.supply.clone();
    supply.remove_edge(e);
    let u_e = supply.add_vertex();
    let v_e = supply.add_vertex();
    supply.add_edge(u, u_e);
    supply.add_edge(v_e, v);
    let mut demands = inst.demands.clone();
    match rewrite {
        SplitRewrite::SplitDemand(i) => {
            let &(t, s) = demands
                .get(i)
                .ok_or_else(|| EedpError::Reduction(format!("split_edge: no demand {i}")))?;
            demands[i] = (t, v_e);
            demands.insert(i + 1, (u_e, s));
        }
        SplitRewrite::AddPair => {
            demands.push((u_e, v_e));
        }
    }
    let out = Instance::new(supply, demands);
    debug_assert!(out.is_union_eulerian());
    debug_assert_eq!(out.demand_count(), inst.demand_count() + 1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{solve_exact, Budget};

    /// s -> v -> t chain with demand (t, s); already normal except `v`.
    fn chain() -> Instance {
        let mut g = IncidenceDigraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        Instance::new(g, vec![(VertexId(2), VertexId(0))])
    }

    #[test]
    fn already_normal_instance_is_unchanged() {
        // terminals s, t of union degree 2; interior dissolved away.
        let inst = normalize_degrees(&chain());
        assert!(is_normalized(&inst));
        assert_eq!(solve_exact(&inst, Budget::UNLIMITED).is_feasible(), Some(true));
        let again = normalize_degrees(&inst);
        assert_eq!(inst, again);
    }

    #[test]
    fn degree_six_vertex_becomes_gadget() {
        // Three in, three out through one hub, plus demands closing it.
        let mut g = IncidenceDigraph::new();
        let hub = VertexId(0);
        g.ensure_vertex(hub);
        let mut demands = Vec::new();
        for i in 0..3u32 {
            let s = VertexId(1 + 2 * i);
            let t = VertexId(2 + 2 * i);
            g.add_edge(s, hub);
            g.add_edge(hub, t);
            demands.push((t, s));
        }
        let inst = Instance::new(g, demands);
        assert!(inst.is_union_eulerian());
        let out = normalize_degrees(&inst);
        assert!(is_normalized(&out));
        assert_eq!(
            solve_exact(&out, Budget::UNLIMITED).is_feasible(),
            Some(true)
        );
    }

    #[test]
    fn gadget_routes_every_matching() {
        // All 3! matchings through a degree-6 hub stay routable.
        use crate::oracle::solve_exact;
        let perms: [[u32; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in perms {
            let mut g = IncidenceDigraph::new();
            let hub = VertexId(0);
            g.ensure_vertex(hub);
            let sources: Vec<VertexId> = (0..3).map(|i| VertexId(1 + i)).collect();
            let sinks: Vec<VertexId> = (0..3).map(|i| VertexId(4 + i)).collect();
            for i in 0..3 {
                g.add_edge(sources[i], hub);
                g.add_edge(hub, sinks[i]);
            }
            let demands: Vec<_> = (0..3)
                .map(|i| (sinks[perm[i] as usize], sources[i]))
                .collect();
            let inst = Instance::new(g, demands);
            let out = normalize_degrees(&inst);
            assert_eq!(
                solve_exact(&out, Budget::UNLIMITED).is_feasible(),
                Some(true),
                "matching {perm:?} must stay routable"
            );
        }
    }

    #[test]
    fn over_degree_terminal_is_subdivided() {
        // Terminal t also lies on a through-digon, degree 4 in the union.
        let mut g = IncidenceDigraph::with_vertices(3);
        let [s, t, a] = [0, 1, 2].map(VertexId);
        g.add_edge(s, t);
        g.add_edge(t, a);
        g.add_edge(a, t);
        let inst = Instance::new(g, vec![(t, s)]);
        assert!(inst.is_union_eulerian());
        let out = normalize_degrees(&inst);
        assert!(is_normalized(&out));
        assert_eq!(
            solve_exact(&out, Budget::UNLIMITED).is_feasible(),
            Some(true)
        );
    }

    #[test]
    fn two_cut_collapses_pendant_digons() {
        // Long chain of digons hanging behind a 2-cut.
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        let mut prev = VertexId(1);
        for i in 2..6u32 {
            let v = VertexId(i);
            g.ensure_vertex(v);
            g.add_edge(prev, v);
            g.add_edge(v, prev);
            prev = v;
        }
        let inst = Instance::new(g, vec![]);
        let x: BTreeSet<_> = (2..6).map(VertexId).collect();
        let out = reduce_two_cut(&inst, &x).unwrap();
        assert!(out.size() < inst.size());
        assert!(out.is_union_eulerian());
    }

    #[test]
    fn two_cut_rejects_terminals_inside() {
        let mut g = IncidenceDigraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        g.add_edge(VertexId(1), VertexId(2));
        g.add_edge(VertexId(2), VertexId(1));
        let inst = Instance::new(g, vec![(VertexId(2), VertexId(2))]);
        let x: BTreeSet<_> = [VertexId(2)].into();
        assert!(reduce_two_cut(&inst, &x).is_err());
    }

    #[test]
    fn four_cut_contracts_digon_pair() {
        // X = {2,3} joined by a digon with 4 outside edges.
        let mut g = IncidenceDigraph::with_vertices(4);
        let [a, b, x1, x2] = [0, 1, 2, 3].map(VertexId);
        g.add_edge(a, x1);
        g.add_edge(x1, x2);
        g.add_edge(x2, x1);
        g.add_edge(x1, b);
        g.add_edge(b, x2);
        g.add_edge(x2, a);
        g.add_edge(a, b);
        g.add_edge(b, a);
        let inst = Instance::new(g, vec![]);
        let x: BTreeSet<_> = [x1, x2].into();
        let out = reduce_four_cut(&inst, &x).unwrap();
        assert!(out.size() < inst.size());
        assert!(out.is_union_eulerian());
    }

    #[test]
    fn four_cut_rejects_disconnected_interior() {
        let mut g = IncidenceDigraph::with_vertices(4);
        let [a, x1, x2, _] = [0, 1, 2, 3].map(VertexId);
        g.add_edge(a, x1);
        g.add_edge(x1, a);
        g.add_edge(a, x2);
        g.add_edge(x2, a);
        let inst = Instance::new(g, vec![]);
        let x: BTreeSet<_> = [x1, x2].into();
        assert!(reduce_four_cut(&inst, &x).is_err());
    }

    #[test]
    fn find_small_cut_spots_planted_blob() {
        // Pendant digon chain behind vertex 1.
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        let v = VertexId(2);
        g.ensure_vertex(v);
        g.add_edge(VertexId(1), v);
        g.add_edge(v, VertexId(1));
        let inst = Instance::new(g, vec![]);
        let (kind, x) = find_small_cut(&inst).unwrap();
        assert_eq!(kind, SmallCutKind::Two);
        assert_eq!(x, [v].into());
    }

    #[test]
    fn find_small_cut_none_on_empty_supply() {
        let inst = Instance::new(IncidenceDigraph::new(), vec![]);
        assert!(find_small_cut(&inst).is_none());
    }

    #[test]
    fn split_edge_keeps_union_eulerian_and_feasibility() {
        let inst = chain();
        // Split the only edge of the 1-demand chain via the demand rewrite.
        let out = split_edge(&inst, EdgeId(0), SplitRewrite::SplitDemand(0)).unwrap();
        assert_eq!(out.demand_count(), 2);
        assert!(out.is_union_eulerian());
        assert_eq!(
            solve_exact(&out, Budget::UNLIMITED).is_feasible(),
            Some(true)
        );
    }

    #[test]
    fn split_edge_add_pair_on_avoidable_edge() {
        // demand 0 -> 1 has two routes; split one of them.
        let mut g = IncidenceDigraph::with_vertices(2);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(0));
        g.add_edge(VertexId(0), VertexId(1));
        let inst = Instance::new(g, vec![(VertexId(1), VertexId(0))]);
        assert!(inst.is_union_eulerian());
        let before = solve_exact(&inst, Budget::UNLIMITED).is_feasible();
        let out = split_edge(&inst, EdgeId(2), SplitRewrite::AddPair).unwrap();
        let after = solve_exact(&out, Budget::UNLIMITED).is_feasible();
        assert_eq!(before, after);
    }
}

/// Optional variant of the 2-cut reduction where the interior contains
/// exactly one terminal: the interior is contracted onto it, loops
/// dropped, leaving the terminal with degree two. The main pipeline never
/// calls this; terminals stay untouched there.
pub fn reduce_two_cut_onto_terminal(
    inst: &Instance,
    x: &BTreeSet<VertexId>,
) -> Result<Instance, EedpError> {
    let terminals = inst.terminals();
    let inside: Vec<VertexId> = x.intersection(&terminals).copied().collect();
    let [t] = inside.as_slice() else {
        return Err(EedpError::Reduction(
            "the interior must contain exactly one terminal".into(),
        ));
    };
    let t = *t;
    if inst.demand_degree(t) != 1 {
        return Err(EedpError::Reduction(
            "the enclosed terminal must carry a single demand".into(),
        ));
    }
    let cut = induced_cut(&inst.supply, x);
    if cut.delta_plus.len() != 1 || cut.delta_minus.len() != 1 {
        return Err(EedpError::Reduction(format!(
            "expected a 2-cut, found order {}",
            cut.order()
        )));
    }
    let mut supply = inst.supply.clone();
    for e in supply.edges().collect::<Vec<_>>() {
        let (tail, head) = supply.ends(e).unwrap();
        match (x.contains(&tail), x.contains(&head)) {
            (true, true) => {
                supply.remove_edge(e);
            }
            (true, false) => {
                supply.remove_edge(e);
                supply.add_edge(t, head);
            }
            (false, true) => {
                supply.remove_edge(e);
                supply.add_edge(tail, t);
            }
            (false, false) => {}
        }
    }
    for &w in x {
        if w != t {
            supply.remove_vertex(w)?;
        }
    }
    let out = Instance::new(supply, inst.demands.clone());
    debug_assert!(out.is_union_eulerian());
    debug_assert_eq!(out.union_degree(t), 2);
    debug_assert!(out.size() < inst.size());
    Ok(out)
}
