//! The `eedp` text format.
//!
//! ```text
//! eedp 1
//! v <n>          # vertices 0..n-1
//! e <tail> <head>  # one per supply edge; line order defines edge ids
//! d <t> <s>        # demand edge (t, s), requesting an s-to-t path
//! ```
//! `#` starts a comment; tokens are whitespace-separated.

use crate::graph::{IncidenceDigraph, VertexId};
use crate::path::Instance;
use crate::EedpError;

pub fn parse_instance(text: &str) -> Result<Instance, EedpError> {
    let mut supply: Option<IncidenceDigraph> = None;
    let mut demands = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let err = |message: String| EedpError::Parse {
            line: line_no,
            message,
        };
        if !saw_header {
            if tokens.next() != Some("eedp") || tokens.next() != Some("1") {
                return Err(err("expected header `eedp 1`".into()));
            }
            saw_header = true;
            continue;
        }
        let kind = tokens.next().unwrap();
        let mut num = |what: &str| -> Result<u32, EedpError> {
            tokens
                .next()
                .ok_or_else(|| err(format!("missing {what}")))?
                .parse::<u32>()
                .map_err(|_| err(format!("{what} is not a number")))
        };
        match kind {
            "v" => {
                let n = num("vertex count")?;
                if supply.is_some() {
                    return Err(err("duplicate `v` line".into()));
                }
                supply = Some(IncidenceDigraph::with_vertices(n));
            }
            "e" => {
                let g = supply
                    .as_mut()
                    .ok_or_else(|| err("`e` before `v`".into()))?;
                let t = num("tail")?;
                let h = num("head")?;
                for v in [t, h] {
                    if !g.has_vertex(VertexId(v)) {
                        return Err(err(format!("vertex {v} out of range")));
                    }
                }
                g.add_edge(VertexId(t), VertexId(h));
            }
            "d" => {
                if supply.is_none() {
                    return Err(err("`d` before `v`".into()));
                }
                let t = num("demand target")?;
                let s = num("demand source")?;
                demands.push((VertexId(t), VertexId(s)));
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }
    if !saw_header {
        return Err(EedpError::Parse {
            line: 1,
            message: "missing header `eedp 1`".into(),
        });
    }
    let supply = supply.unwrap_or_default();
    for &(t, s) in &demands {
        for v in [t, s] {
            if !supply.has_vertex(v) {
                return Err(EedpError::Parse {
                    line: 0,
                    message: format!("demand references unknown vertex {v}"),
                });
            }
        }
    }
    Ok(Instance::new(supply, demands))
}

/// Parses and additionally enforces the Eulerian union invariant, naming
/// the offending vertex otherwise.
pub fn parse_instance_checked(text: &str, allow_noneuler: bool) -> Result<Instance, EedpError> {
    let inst = parse_instance(text)?;
    if !allow_noneuler {
        if let Some(v) = inst.eulerian_violation() {
            return Err(EedpError::Parse {
                line: 0,
                message: format!("supply plus demands is not Eulerian at vertex {v}"),
            });
        }
    }
    Ok(inst)
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::from("eedp 1\n");
    let n = inst
        .supply
        .vertices()
        .map(|v| v.0 + 1)
        .max()
        .unwrap_or(0);
    out.push_str(&format!("v {n}\n"));
    for e in inst.supply.edges() {
        let (t, h) = inst.supply.ends(e).expect("supply edges are proper");
        out.push_str(&format!("e {t} {h}\n"));
    }
    for &(t, s) in &inst.demands {
        out.push_str(&format!("d {t} {s}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "eedp 1\nv 3\ne 0 1\ne 1 2\ne 2 0\nd 0 0\n";

    #[test]
    fn minimal_file_parses() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.supply.vertex_count(), 3);
        assert_eq!(inst.supply.edge_count(), 3);
        assert_eq!(inst.demands.len(), 1);
        assert!(inst.is_union_eulerian());
    }

    #[test]
    fn round_trip_is_token_stable() {
        let with_comments = "eedp 1 # header\nv 3\n# full comment\ne 0 1\ne 1 2\ne 2 0\nd 0 0\n";
        let inst = parse_instance(with_comments).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(text, MINIMAL);
        let again = parse_instance(&text).unwrap();
        assert_eq!(serialize_instance(&again), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_instance("eedp 1\nv 2\ne 0 5\n").unwrap_err();
        match err {
            EedpError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn eulerian_check_names_the_vertex() {
        let err = parse_instance_checked("eedp 1\nv 2\ne 0 1\n", false).unwrap_err();
        match err {
            EedpError::Parse { message, .. } => assert!(message.contains("vertex")),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_instance_checked("eedp 1\nv 2\ne 0 1\n", true).is_ok());
    }
}
