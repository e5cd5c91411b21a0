//! The `soficshift` command line: cover computation, invariants, and
//! presentation synthesis over the text graph format.
//!
//! Exit codes: 0 success (or property true), 1 property false for the
//! check-style commands (`equiv`, `condstar`, `condk`), 2 input or
//! format errors, 3 resource cap exceeded.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use soficshift_core::{
    construct, covers, dot, format, graph::LabelledGraph, invariants, Error as CoreError,
};

use report::{digest_bytes, Report};

#[derive(Debug, Parser)]
#[command(
    name = "soficshift",
    version,
    about = "Canonical covers, layers, and flow invariants of sofic shifts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the JSON report instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the principal graph of the command as DOT to a file.
    #[arg(long, global = true, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Turn auto-trim warnings into errors.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverKindArg {
    Fischer,
    Gfc,
    Krieger,
    Pastset,
    Multiplicity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReturnsArg {
    Sinks,
    All,
}

impl ReturnsArg {
    fn mode(self) -> construct::ReturnEdges {
        match self {
            ReturnsArg::Sinks => construct::ReturnEdges::SinksOnly,
            ReturnsArg::All => construct::ReturnEdges::AllNonRoot,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the five structural predicates of a presentation.
    Check { file: PathBuf },
    /// Compute a canonical cover of the presented shift.
    Cover {
        #[arg(long, value_enum)]
        kind: CoverKindArg,
        file: PathBuf,
    },
    /// Layer structure of the left Krieger cover.
    Layers { file: PathBuf },
    /// Proper communication graph of the left Krieger cover.
    Pcg { file: PathBuf },
    /// Hereditary and saturated vertex subsets of the given graph.
    Ideals { file: PathBuf },
    /// Condition (*): Krieger cover vs maximal essential past set part.
    Condstar { file: PathBuf },
    /// Condition (K) on the given graph.
    Condk { file: PathBuf },
    /// Replace each edge labelled SYMBOL by a two-edge path.
    Expand {
        #[arg(long)]
        symbol: String,
        /// Fresh symbol for the second edge; generated when omitted.
        #[arg(long)]
        fresh: Option<String>,
        file: PathBuf,
    },
    /// Do two presentations present the same sofic shift?
    Equiv { file1: PathBuf, file2: PathBuf },
    /// Synthesize presentations realizing a prescribed invariant.
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Print a named fixture graph (see `fixture list`).
    Fixture { name: String },
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Left Fischer cover of an AFT shift whose Krieger-cover PCG is the
    /// transitive closure of the DAG.
    Pcg {
        #[arg(long)]
        dag: PathBuf,
        #[arg(long, value_enum, default_value = "sinks")]
        returns: ReturnsArg,
    },
    /// Same with doubled loops, realizing the DAG's ideal lattice.
    Ideal {
        #[arg(long)]
        dag: PathBuf,
        #[arg(long, value_enum, default_value = "sinks")]
        returns: ReturnsArg,
    },
    /// The c-charge constrained shift presentation.
    Charge { c: usize },
}

/// Outcome of a command: report content plus the value of the checked
/// property when the command is check-style.
struct Outcome {
    results: serde_json::Value,
    text: String,
    property: Option<bool>,
    dot: Option<String>,
    warnings: Vec<String>,
}

pub fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let input = describe_input(&cli.command);
    match execute(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.dot {
                match &out.dot {
                    Some(text) => {
                        if let Err(e) = fs::write(path, text) {
                            eprintln!("error: cannot write {}: {e}", path.display());
                            return 2;
                        }
                    }
                    None => eprintln!("warning: this command has no DOT output"),
                }
            }
            let report = Report::new(
                command_name(&cli.command),
                input,
                out.results,
                out.warnings.clone(),
                started.elapsed(),
            );
            if cli.json {
                println!("{}", report.to_json_string());
            } else {
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
                print!("{}", out.text);
            }
            match out.property {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::StateCapExceeded { .. }) | Some(CoreError::CapExceeded(_)) => 3,
        _ => 2,
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Check { .. } => "check".into(),
        Command::Cover { kind, .. } => format!("cover --kind {}", kind_str(*kind)),
        Command::Layers { .. } => "layers".into(),
        Command::Pcg { .. } => "pcg".into(),
        Command::Ideals { .. } => "ideals".into(),
        Command::Condstar { .. } => "condstar".into(),
        Command::Condk { .. } => "condk".into(),
        Command::Expand { .. } => "expand".into(),
        Command::Equiv { .. } => "equiv".into(),
        Command::Construct { what } => match what {
            ConstructCmd::Pcg { .. } => "construct pcg".into(),
            ConstructCmd::Ideal { .. } => "construct ideal".into(),
            ConstructCmd::Charge { .. } => "construct charge".into(),
        },
        Command::Fixture { .. } => "fixture".into(),
    }
}

fn kind_str(k: CoverKindArg) -> &'static str {
    match k {
        CoverKindArg::Fischer => "fischer",
        CoverKindArg::Gfc => "gfc",
        CoverKindArg::Krieger => "krieger",
        CoverKindArg::Pastset => "pastset",
        CoverKindArg::Multiplicity => "multiplicity",
    }
}

fn describe_input(c: &Command) -> (String, String) {
    let file_digest = |p: &Path| -> (String, String) {
        match fs::read(p) {
            Ok(bytes) => (p.display().to_string(), digest_bytes(&bytes)),
            Err(_) => (p.display().to_string(), String::new()),
        }
    };
    match c {
        Command::Check { file }
        | Command::Cover { file, .. }
        | Command::Layers { file }
        | Command::Pcg { file }
        | Command::Ideals { file }
        | Command::Condstar { file }
        | Command::Condk { file }
        | Command::Expand { file, .. } => file_digest(file),
        Command::Equiv { file1, file2 } => {
            let (a, da) = file_digest(file1);
            let (b, db) = file_digest(file2);
            (format!("{a},{b}"), digest_bytes(format!("{da},{db}").as_bytes()))
        }
        Command::Construct { what } => match what {
            ConstructCmd::Pcg { dag, .. } | ConstructCmd::Ideal { dag, .. } => file_digest(dag),
            ConstructCmd::Charge { c } => {
                (format!("charge {c}"), digest_bytes(c.to_string().as_bytes()))
            }
        },
        Command::Fixture { name } => (format!("fixture {name}"), digest_bytes(name.as_bytes())),
    }
}

fn load_graph(path: &Path) -> anyhow::Result<LabelledGraph> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Ok(format::parse_graph(&text)?)
}

/// Loads a graph and trims it to its essential part, warning (or
/// failing under `--strict`) when vertices are dropped.
fn load_essential(
    path: &Path,
    strict: bool,
    warnings: &mut Vec<String>,
) -> anyhow::Result<LabelledGraph> {
    let g = load_graph(path)?;
    if g.is_essential() {
        return Ok(g);
    }
    if strict {
        anyhow::bail!("input graph is not essential (strict mode)");
    }
    let trimmed = g.trim_to_essential()?;
    let dropped: Vec<&str> = g
        .vertex_names()
        .iter()
        .filter(|v| trimmed.vertex_id(v).is_none())
        .map(|v| v.as_str())
        .collect();
    warnings.push(format!(
        "input graph was not essential; trimmed {} stranded vertices ({})",
        dropped.len(),
        dropped.join(",")
    ));
    Ok(trimmed)
}

fn graph_payload(g: &LabelledGraph) -> serde_json::Value {
    json!({
        "name": g.name(),
        "vertex_count": g.vertex_count(),
        "edge_count": g.edges().len(),
        "alphabet": g.alphabet().symbols(),
        "text": format::serialize_graph(g),
    })
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Check { file } => {
            let g = load_graph(file)?;
            let essential = g.is_essential();
            let pred_sep: Option<bool> = if essential {
                Some(g.is_predecessor_separated()?)
            } else {
                None
            };
            let mut warnings = Vec::new();
            if !essential {
                warnings.push(
                    "predecessor separation is undefined for non-essential graphs".to_string(),
                );
            }
            let results = json!({
                "left_resolving": g.is_left_resolving(),
                "right_resolving": g.is_right_resolving(),
                "essential": essential,
                "irreducible_graph": g.is_irreducible_graph(),
                "predecessor_separated": pred_sep,
                "vertex_count": g.vertex_count(),
                "edge_count": g.edges().len(),
            });
            let text = format!(
                "left_resolving: {}\nright_resolving: {}\nessential: {}\nirreducible_graph: {}\npredecessor_separated: {}\n",
                g.is_left_resolving(),
                g.is_right_resolving(),
                essential,
                g.is_irreducible_graph(),
                pred_sep.map_or("undefined".to_string(), |b| b.to_string()),
            );
            Ok(Outcome {
                results,
                text,
                property: None,
                dot: Some(dot::graph_dot(&g)),
                warnings,
            })
        }
        Command::Cover { kind, file } => {
            let mut warnings = Vec::new();
            let g = load_essential(file, cli.strict, &mut warnings)?;
            let cover = match kind {
                CoverKindArg::Fischer => covers::fischer_cover(&g)?,
                CoverKindArg::Gfc => covers::generalized_fischer_cover(&g)?,
                CoverKindArg::Krieger => covers::krieger_cover(&g)?,
                CoverKindArg::Pastset => covers::past_set_cover(&g)?,
                CoverKindArg::Multiplicity => covers::multiplicity_set_cover(&g)?,
            };
            let results = json!({
                "kind": cover.kind.as_str(),
                "graph": graph_payload(&cover.graph),
                "layer_histogram": histogram_json(&cover),
                "annotations": cover.annotations_json(),
            });
            let text = format!(
                "{}# annotations\n# {}\n",
                format::serialize_graph(&cover.graph),
                cover.annotations_json()
            );
            Ok(Outcome {
                results,
                text,
                property: None,
                dot: Some(dot::cover_dot(&cover)),
                warnings,
            })
        }
        Command::Layers { file } => {
            let mut warnings = Vec::new();
            let g = load_essential(file, cli.strict, &mut warnings)?;
            let cover = covers::krieger_cover(&g)?;
            let results = json!({
                "layer_histogram": histogram_json(&cover),
                "vertices": cover
                    .vertices
                    .iter()
                    .map(|v| json!({ "name": v.name, "layer": v.layer }))
                    .collect::<Vec<_>>(),
            });
            let mut text = String::new();
            for (layer, count) in cover.layer_histogram() {
                text.push_str(&format!("layer {layer}: {count} vertices\n"));
            }
            Ok(Outcome {
                results,
                text,
                property: None,
                dot: Some(dot::cover_dot(&cover)),
                warnings,
            })
        }
        Command::Pcg { file } => {
            let mut warnings = Vec::new();
            let g = load_essential(file, cli.strict, &mut warnings)?;
            let pcg = invariants::pcg_invariant(&g)?;
            let results = json!({
                "node_count": pcg.nodes.len(),
                "arc_count": pcg.closure.len(),
                "root": pcg.root.map(|i| pcg.node_names[i].clone()),
                "nodes": pcg.node_names,
                "arcs_reduced": pcg.reduced,
                "arcs_closure": pcg.closure,
            });
            let text = format!(
                "nodes: {}\narcs: {}\nroot: {}\n",
                pcg.nodes.len(),
                pcg.closure.len(),
                pcg.root
                    .map(|i| pcg.node_names[i].clone())
                    .unwrap_or_else(|| "none".into()),
            );
            Ok(Outcome {
                results,
                text,
                property: None,
                dot: Some(dot::pcg_dot(&pcg)),
                warnings,
            })
        }
        Command::Ideals { file } => {
            let g = load_graph(file)?;
            let lattice = invariants::hereditary_saturated_subsets(&g)?;
            let results = json!({
                "ideal_count": lattice.elements.len(),
                "elements": lattice.element_names,
                "hasse": lattice.hasse,
            });
            let mut text = format!("ideals: {}\n", lattice.elements.len());
            for name in &lattice.element_names {
                text.push_str(&format!("  {name}\n"));
            }
            Ok(Outcome {
                results,
                text,
                property: None,
                dot: Some(dot::hasse_dot(&lattice)),
                warnings: Vec::new(),
            })
        }
        Command::Condstar { file } => {
            let mut warnings = Vec::new();
            let g = load_essential(file, cli.strict, &mut warnings)?;
            let c = covers::condition_star(&g)?;
            let results = json!({
                "holds": c.holds,
                "witness": c.witness.as_ref().map(|(name, key)| json!({
                    "class": name,
                    "class_key": key.digest(),
                })),
            });
            let text = match &c.witness {
                None => format!("condition_star: {}\n", c.holds),
                Some((name, _)) => {
                    format!("condition_star: {} (witness class {name})\n", c.holds)
                }
            };
            Ok(Outcome {
                results,
                text,
                property: Some(c.holds),
                dot: None,
                warnings,
            })
        }
        Command::Condk { file } => {
            let g = load_graph(file)?;
            let holds = invariants::condition_k(&g);
            Ok(Outcome {
                results: json!({ "holds": holds }),
                text: format!("condition_k: {holds}\n"),
                property: Some(holds),
                dot: Some(dot::graph_dot(&g)),
                warnings: Vec::new(),
            })
        }
        Command::Expand { symbol, fresh, file } => {
            let g = load_graph(file)?;
            let fresh = fresh
                .clone()
                .unwrap_or_else(|| invariants::fresh_symbol(&g, symbol));
            let expanded = g.symbol_expand(symbol, &fresh)?;
            Ok(Outcome {
                results: json!({
                    "symbol": symbol,
                    "fresh": fresh,
                    "graph": graph_payload(&expanded),
                }),
                text: format::serialize_graph(&expanded),
                property: None,
                dot: Some(dot::graph_dot(&expanded)),
                warnings: Vec::new(),
            })
        }
        Command::Equiv { file1, file2 } => {
            let mut warnings = Vec::new();
            let a = load_essential(file1, cli.strict, &mut warnings)?;
            let b = load_essential(file2, cli.strict, &mut warnings)?;
            let equal = soficshift_core::lang::shift_language_equal(&a, &b)?;
            Ok(Outcome {
                results: json!({ "equal": equal }),
                text: format!("equal: {equal}\n"),
                property: Some(equal),
                dot: None,
                warnings,
            })
        }
        Command::Construct { what } => {
            let (graph, mode_str) = match what {
                ConstructCmd::Pcg { dag, returns } => {
                    let d = load_dag(dag)?;
                    (
                        construct::realize_pcg(&d, returns.mode())?,
                        Some(format!("{returns:?}")),
                    )
                }
                ConstructCmd::Ideal { dag, returns } => {
                    let d = load_dag(dag)?;
                    (
                        construct::realize_ideal_lattice(&d, returns.mode())?,
                        Some(format!("{returns:?}")),
                    )
                }
                ConstructCmd::Charge { c } => (construct::charge_constrained(*c)?, None),
            };
            Ok(Outcome {
                results: json!({
                    "graph": graph_payload(&graph),
                    "mode": mode_str,
                }),
                text: format::serialize_graph(&graph),
                property: None,
                dot: Some(dot::graph_dot(&graph)),
                warnings: Vec::new(),
            })
        }
        Command::Fixture { name } => {
            if name == "list" {
                let names = construct::FIXTURES.join("\n");
                return Ok(Outcome {
                    results: json!({ "fixtures": construct::FIXTURES }),
                    text: format!("{names}\n"),
                    property: None,
                    dot: None,
                    warnings: Vec::new(),
                });
            }
            let g = construct::fixture(name)?;
            Ok(Outcome {
                results: json!({ "name": name, "graph": graph_payload(&g) }),
                text: format::serialize_graph(&g),
                property: None,
                dot: Some(dot::graph_dot(&g)),
                warnings: Vec::new(),
            })
        }
    }
}

fn histogram_json(cover: &covers::CoverResult) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (layer, count) in cover.layer_histogram() {
        m.insert(layer.to_string(), json!(count));
    }
    serde_json::Value::Object(m)
}

fn load_dag(path: &Path) -> anyhow::Result<construct::RootedDag> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Ok(format::parse_dag(&text)?)
}
