//! Command-line driver: instance validation, solving, wall analysis, the
//! reduction pipeline, generators, and DOT export.
//!
//! Reports are stable line-oriented `key: value` text suitable for golden
//! files. Exit codes: 0 success, 1 infeasible instance or failed
//! validation, 2 usage or parse error, 3 oracle budget exhausted.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use eedp::dot::{instance_to_dot, wall_to_dot};
use eedp::format::{parse_instance_checked, serialize_instance};
use eedp::generate;
use eedp::oracle::{solve_exact, Budget, Verdict};
use eedp::path::Instance;
use eedp::reducer::{reduce_pipeline, PipelineConfig};
use eedp::structure::{
    build_elementary_grid, build_elementary_wall, canonical_swirl, classify_jump, jump_in_margin,
    CoordinateMatching, JumpKind,
};
use eedp::twostar::{cut_criterion_holds, solve_two_star, TwoStarDemand};

#[derive(Parser)]
#[command(name = "eedp", about = "Edge-disjoint paths toolkit for Eulerian digraphs")]
struct Cli {
    /// Oracle node budget (default from EEDP_BUDGET or a built-in cap).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Accept instances whose supply plus demands is not Eulerian.
    #[arg(long, global = true)]
    allow_noneuler: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Frank,
    Pipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Grid,
    Wall,
    Swirl,
    Flower,
    RandomEuler,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file.
    Check { file: PathBuf },
    /// Decide feasibility and print a witness when one exists.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "oracle")]
        method: Method,
    },
    /// Jump census of a wall with a seeded random matching.
    Analyze {
        /// Wall order.
        #[arg(long, default_value_t = 8)]
        wall: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the reduction pipeline and print its log.
    Reduce {
        file: PathBuf,
        /// Oracle-check every normalization and cut step too.
        #[arg(long)]
        verify: bool,
    },
    /// Generate an instance and print it in the eedp format.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Order (grid/wall/swirl/flower) or vertex count (random kinds).
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Demand count where applicable.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Extra cycles (random kinds) or chord count (flower).
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Emit an instance, or a canonical swirl host, as Graphviz DOT.
    ExportDot {
        /// Instance file; omit when using --swirl.
        file: Option<PathBuf>,
        /// Export the canonical swirl of this order instead.
        #[arg(long)]
        swirl: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget(
        cli.budget
            .or_else(|| {
                std::env::var("EEDP_BUDGET")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(50_000_000),
    );
    match run(cli, budget) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &PathBuf, allow_noneuler: bool) -> Result<Instance, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_instance_checked(&text, allow_noneuler).map_err(|e| e.to_string())
}

fn run(cli: Cli, budget: Budget) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { file } => {
            let inst = load(&file, cli.allow_noneuler)?;
            println!("vertices: {}", inst.supply.vertex_count());
            println!("edges: {}", inst.supply.edge_count());
            println!("demands: {}", inst.demand_count());
            println!(
                "eulerian: {}",
                if inst.is_union_eulerian() { "yes" } else { "no" }
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { file, method } => {
            let inst = load(&file, cli.allow_noneuler)?;
            solve(&inst, method, budget)
        }
        Command::Analyze { wall, seed } => {
            let wall = build_elementary_wall(wall.max(2));
            let matching = generate::random_matching(&wall, seed);
            let mut census: BTreeMap<&str, usize> = BTreeMap::new();
            let mut in_margin = 0usize;
            for pair in matching.pairs() {
                let rec = classify_jump(&wall, pair).map_err(|e| e.to_string())?;
                let key = match rec.kind {
                    JumpKind::UpPath => "up-path",
                    JumpKind::TypeI => "type-1",
                    JumpKind::TypeII => "type-2",
                    JumpKind::Type0 => "type-0",
                };
                *census.entry(key).or_insert(0) += 1;
                if jump_in_margin(&wall, &matching, &rec) {
                    in_margin += 1;
                }
            }
            println!("matching-edges: {}", matching.len());
            for (key, count) in census {
                println!("{key}: {count}");
            }
            println!("in-margin: {in_margin}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { file, verify } => {
            let inst = load(&file, cli.allow_noneuler)?;
            let config = PipelineConfig {
                budget,
                verify,
                ..PipelineConfig::default()
            };
            let (out, log) = reduce_pipeline(&inst, &config).map_err(|e| e.to_string())?;
            for step in &log {
                println!("step: {step}");
            }
            println!("size-before: {}", inst.size());
            println!("size-after: {}", out.size());
            match solve_exact(&out, budget) {
                Verdict::Feasible(_) => println!("feasible: yes"),
                Verdict::Infeasible => println!("feasible: no"),
                Verdict::Timeout => {
                    println!("feasible: timeout");
                    return Ok(ExitCode::from(3));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            kind,
            n,
            p,
            r,
            seed,
            format,
        } => {
            let inst = match kind {
                GenKind::Grid => Instance::new(build_elementary_grid(n.max(2)).graph, vec![]),
                GenKind::Wall => {
                    let wall = build_elementary_wall(n.max(2));
                    let matching = if seed == 0 {
                        CoordinateMatching::new(wall.up_path_matching())
                            .map_err(|e| e.to_string())?
                    } else {
                        generate::random_matching(&wall, seed)
                    };
                    generate::wall_host(&wall, &matching)
                }
                GenKind::Swirl => {
                    let t = n.max(2);
                    let wall = build_elementary_wall(t + 2);
                    let matching = CoordinateMatching::new(wall.up_path_matching())
                        .map_err(|e| e.to_string())?;
                    let (host, ids) = matching.realize(&wall);
                    let swirl = canonical_swirl(&wall, &matching, &host, &ids, t, 1, 1)
                        .map_err(|e| e.to_string())?;
                    let own = swirl.edge_set();
                    Instance::new(host.edge_subgraph(|e| own.contains(&e)), vec![])
                }
                GenKind::Flower => {
                    generate::flower(n.max(1), p, r, seed)
                        .map_err(|e| e.to_string())?
                        .instance
                }
                GenKind::RandomEuler => generate::random_euler(n as u32, r, seed),
                GenKind::Random => generate::random_instance(n as u32, r, p, seed),
            };
            match format {
                Format::Text => print!("{}", serialize_instance(&inst)),
                Format::Dot => print!("{}", instance_to_dot(&inst)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { file, swirl } => {
            if let Some(t) = swirl {
                let t = t.max(2);
                let wall = build_elementary_wall(t + 2);
                let matching =
                    CoordinateMatching::new(wall.up_path_matching()).map_err(|e| e.to_string())?;
                let (host, ids) = matching.realize(&wall);
                let s = canonical_swirl(&wall, &matching, &host, &ids, t, 1, 1)
                    .map_err(|e| e.to_string())?;
                let groups: Vec<(String, Vec<eedp::EdgeId>)> = s
                    .cycles
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (format!("swirl-cycle-{i}"), c.edges.clone()))
                    .collect();
                print!("{}", wall_to_dot(&wall, &host, &groups));
                return Ok(ExitCode::SUCCESS);
            }
            let file = file.ok_or("export-dot needs a file or --swirl")?;
            let inst = load(&file, cli.allow_noneuler)?;
            print!("{}", instance_to_dot(&inst));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn solve(inst: &Instance, method: Method, budget: Budget) -> Result<ExitCode, String> {
    let print_linkage = |linkage: &eedp::Linkage| {
        for (i, path) in linkage.paths.iter().enumerate() {
            let ids: Vec<String> = path.edges.iter().map(|e| e.to_string()).collect();
            println!("path {i}: {}", ids.join(" "));
        }
    };
    match method {
        Method::Oracle => match solve_exact(inst, budget) {
            Verdict::Feasible(linkage) => {
                println!("feasible: yes");
                print_linkage(&linkage);
                Ok(ExitCode::SUCCESS)
            }
            Verdict::Infeasible => {
                println!("feasible: no");
                Ok(ExitCode::from(1))
            }
            Verdict::Timeout => {
                println!("feasible: timeout");
                Ok(ExitCode::from(3))
            }
        },
        Method::Frank => {
            let dem = as_two_star(inst).ok_or(
                "the demand list is not a two-star around a common centre; use --method oracle",
            )?;
            let holds = cut_criterion_holds(&inst.supply, &dem).map_err(|e| e.to_string())?;
            println!("criterion: {}", if holds { "holds" } else { "violated" });
            match solve_two_star(&inst.supply, &dem).map_err(|e| e.to_string())? {
                Some(linkage) => {
                    println!("feasible: yes");
                    print_linkage(&linkage);
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("feasible: no");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Method::Pipeline => {
            let config = PipelineConfig {
                budget,
                verify: true,
                ..PipelineConfig::default()
            };
            let (out, log) = reduce_pipeline(inst, &config).map_err(|e| e.to_string())?;
            for step in &log {
                println!("step: {step}");
            }
            solve(&out, Method::Oracle, budget)
        }
    }
}

/// Recognizes demand lists of the shape `(v, s_i)* (t_i, v)*`.
fn as_two_star(inst: &Instance) -> Option<TwoStarDemand> {
    let mut candidates: Vec<eedp::VertexId> = Vec::new();
    for &(t, s) in &inst.demands {
        if candidates.is_empty() {
            candidates = vec![t, s];
        } else {
            candidates.retain(|&v| v == t || v == s);
        }
    }
    let center = *candidates.first()?;
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for &(t, s) in &inst.demands {
        if t == center {
            sources.push(s);
        } else if s == center {
            sinks.push(t);
        } else {
            return None;
        }
    }
    if sources.len() != sinks.len() {
        return None;
    }
    Some(TwoStarDemand {
        center,
        sources,
        sinks,
    })
}
