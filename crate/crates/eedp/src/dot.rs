//! Graphviz DOT emission for instances, walls, swirls, and routers.

use std::collections::BTreeMap;

use crate::graph::{EdgeId, IncidenceDigraph, VertexId};
use crate::path::Instance;
use crate::structure::wall::{Sign, Wall};

fn coord_label(wall: &Wall, v: VertexId) -> String {
    match wall.coord_of(v) {
        Some(c) => {
            let sign = if c.sign == Sign::In { "-" } else { "+" };
            format!("x{sign}({},{})", c.ring, c.row)
        }
        None => format!("{v}"),
    }
}

/// A plain digraph; demand edges are dashed.
pub fn instance_to_dot(inst: &Instance) -> String {
    let mut out = String::from("digraph eedp {\n");
    for v in inst.supply.vertices() {
        out.push_str(&format!("  v{v};\n"));
    }
    for e in inst.supply.edges() {
        let (t, h) = inst.supply.ends(e).unwrap();
        out.push_str(&format!("  v{t} -> v{h} [label=\"e{e}\"];\n"));
    }
    for &(t, s) in &inst.demands {
        out.push_str(&format!("  v{t} -> v{s} [style=dashed, color=red];\n"));
    }
    out.push_str("}\n");
    out
}

/// A wall (plus any extra host edges) with coordinate labels; `groups`
/// colours chosen edge sets, one colour per group, for swirls and routers.
pub fn wall_to_dot(
    wall: &Wall,
    host: &IncidenceDigraph,
    groups: &[(String, Vec<EdgeId>)],
) -> String {
    const COLORS: [&str; 8] = [
        "red", "blue", "darkgreen", "orange", "purple", "brown", "cadetblue", "magenta",
    ];
    let mut colour_of: BTreeMap<EdgeId, (&str, &str)> = BTreeMap::new();
    for (i, (name, edges)) in groups.iter().enumerate() {
        for &e in edges {
            colour_of.insert(e, (COLORS[i % COLORS.len()], name.as_str()));
        }
    }
    let mut out = String::from("digraph wall {\n");
    for v in host.vertices() {
        let (label, pos) = match wall.layout(v) {
            Some((x, y)) => (coord_label(wall, v), format!(", pos=\"{x},{}!\"", -y)),
            None => (format!("{v}"), String::new()),
        };
        out.push_str(&format!("  v{v} [label=\"{label}\"{pos}];\n"));
    }
    for e in host.edges() {
        let (t, h) = host.ends(e).unwrap();
        match colour_of.get(&e) {
            Some((color, name)) => out.push_str(&format!(
                "  v{t} -> v{h} [color={color}, penwidth=2, tooltip=\"{name}\"];\n"
            )),
            None => out.push_str(&format!("  v{t} -> v{h} [color=gray];\n")),
        }
    }
    out.push_str("}\n");
    out
}
