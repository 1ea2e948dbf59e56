use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropfw::phylo::{self, Anchor, LabelTable};
use tropfw::{
    central_cayley_cell, enumerate_bounded_cells, realize_cell, solve_fw, CovectorGraph, DataSet, ErrorCategory, Rational,
    WeightVector,
};

mod verify;

#[derive(Parser)]
#[command(name = "tropfw", version, about = "Exact weighted tropical Fermat-Weber sets and consensus trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fermat-Weber set of a point file.
    Fw {
        points: PathBuf,
        /// Comma-separated weights such as `1/3,2/3`, or `uniform`.
        #[arg(long, default_value = "uniform")]
        weights: String,
        #[arg(long, value_enum, default_value_t = Method::Lp)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bounded cells of the covector decomposition of the hull.
    Cells {
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Weights whose Fermat-Weber set is a given bounded cell.
    Inverse {
        points: PathBuf,
        /// JSON edge list `[[1,1],[2,3]]` (1-based) or `{"m","n","edges"}`.
        #[arg(long)]
        cell: PathBuf,
    },
    /// Weighted consensus of equidistant Newick trees.
    Consensus {
        trees: PathBuf,
        #[arg(long, default_value = "uniform")]
        weights: String,
        /// `mean` (default), `zero-sum`, or `min-branch=<length>`.
        #[arg(long, default_value = "mean")]
        anchor: String,
        #[arg(long, value_enum, default_value_t = TreeFormat::Newick)]
        format: TreeFormat,
    },
    /// Seeded property checks over random instances.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        instances: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lp,
    Transport,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Newick,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<tropfw::Error> for Failure {
    fn from(e: tropfw::Error) -> Self {
        let code = match e.category() {
            ErrorCategory::Parse => 2,
            ErrorCategory::Validation => 3,
            ErrorCategory::Infeasible => 4,
            ErrorCategory::ScaleGuard => 5,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        let code = if e.is_syntax() || e.is_eof() || e.is_data() { 2 } else { 1 };
        Failure { code, message: format!("{}: {e}", path.display()) }
    })
}

fn load_points(path: &Path) -> CliResult<DataSet> {
    let rows: Vec<Vec<Rational>> = parse_json(path, &read(path)?)?;
    Ok(DataSet::from_rows(&rows)?)
}

fn load_weights(given: &str, m: usize) -> CliResult<WeightVector> {
    let w = if given.trim() == "uniform" { WeightVector::uniform(m)? } else { WeightVector::parse_list(given)? };
    w.check_len(m)?;
    Ok(w)
}

fn load_cell(path: &Path, data: &DataSet) -> CliResult<CovectorGraph> {
    let text = read(path)?;
    let value: Value = parse_json(path, &text)?;
    if value.is_object() {
        let g: CovectorGraph = parse_json(path, &text)?;
        if g.m() != data.m() || g.n() != data.n() {
            return Err(tropfw::Error::DimensionMismatch { expected: data.m() * data.n(), found: g.m() * g.n() }.into());
        }
        return Ok(g);
    }
    let edges: Vec<(usize, usize)> = parse_json(path, &text)?;
    Ok(CovectorGraph::from_one_based(data.m(), data.n(), &edges)?)
}

fn parse_anchor(s: &str) -> CliResult<Anchor> {
    match s {
        "mean" => Ok(Anchor::WeightedInputMean),
        "zero-sum" => Ok(Anchor::ZeroSum),
        _ => match s.strip_prefix("min-branch=") {
            Some(r) => Ok(Anchor::MinLeafBranch(Rational::parse(r)?)),
            None => Err(Failure { code: 2, message: format!("unknown anchor `{s}`") }),
        },
    }
}

fn to_json(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn vertex_tsv(rows: impl IntoIterator<Item = (usize, usize, Vec<Rational>)>, n: usize) -> String {
    let mut out = String::from("cell\tdim");
    for j in 1..=n {
        out.push_str(&format!("\tx{j}"));
    }
    out.push('\n');
    for (cell, dim, coords) in rows {
        out.push_str(&format!("{cell}\t{dim}"));
        for c in coords {
            // plotting tools want decimals; fall back to a/b when it does not terminate
            out.push_str(&format!("\t{}", c.to_decimal().unwrap_or_else(|| c.to_string())));
        }
        out.push('\n');
    }
    out
}

fn cmd_fw(points: &Path, weights: &str, method: Method, format: Format) -> CliResult<String> {
    let data = load_points(points)?;
    let w = load_weights(weights, data.m())?;
    let lp = || solve_fw(&data, &w);
    let transport = || {
        central_cayley_cell(&data, &w).map(|c| {
            json!({
                "value": c.optimal_value,
                "graph": c.support,
                "plan": c.plan,
                "row_duals": c.row_duals,
                "col_duals": c.col_duals,
                "dual_point": c.dual_point(),
            })
        })
    };
    if format == Format::Tsv {
        let r = lp()?;
        let rows = r.vertices().iter().map(|v| (1, r.dim(), v.coords().to_vec()));
        return Ok(vertex_tsv(rows, data.n()));
    }
    let value = match method {
        Method::Lp => to_json(&lp()?),
        Method::Transport => transport()?,
        Method::Both => {
            let r = lp()?;
            let t = transport()?;
            let agree = t["graph"] == to_json(r.graph()) && t["value"] == to_json(r.optimal_value());
            if !agree {
                return Err(Failure {
                    code: 4,
                    message: format!("methods disagree: LP graph {:?}, transport support {}", r.graph(), t["graph"]),
                });
            }
            json!({ "lp": r, "transport": t, "agree": true })
        }
    };
    Ok(pretty(&value))
}

fn cmd_cells(points: &Path, format: Format) -> CliResult<String> {
    let data = load_points(points)?;
    let cells = enumerate_bounded_cells(&data)?;
    match format {
        Format::Json => {
            let mut out = Vec::with_capacity(cells.len());
            for c in &cells {
                out.push(json!({ "graph": c.graph(), "dim": c.dim(), "vertices": c.vertices()? }));
            }
            Ok(pretty(&Value::Array(out)))
        }
        Format::Tsv => {
            let mut rows = Vec::new();
            for (k, c) in cells.iter().enumerate() {
                for v in c.vertices()? {
                    rows.push((k + 1, c.dim(), v.into_coords()));
                }
            }
            Ok(vertex_tsv(rows, data.n()))
        }
    }
}

fn cmd_inverse(points: &Path, cell: &Path) -> CliResult<String> {
    let data = load_points(points)?;
    let graph = load_cell(cell, &data)?;
    Ok(pretty(&to_json(&realize_cell(&data, &graph)?)))
}

fn cmd_consensus(trees: &Path, weights: &str, anchor: &str, format: TreeFormat) -> CliResult<String> {
    let (trees, labels) = phylo::parse_trees(&read(trees)?)?;
    let w = load_weights(weights, trees.len())?;
    let c = phylo::consensus_with_anchor(&trees, &w, &parse_anchor(anchor)?)?;
    let newick = phylo::to_newick(&c.tree, Some(&labels));
    match format {
        TreeFormat::Newick => Ok(newick + "\n"),
        TreeFormat::Json => {
            let triples: Vec<String> =
                phylo::rooted_triples(&c.tree).iter().map(|t| named_triple(t, &labels)).collect();
            let report = phylo::check_pareto(&trees, &c.tree);
            Ok(pretty(&json!({
                "newick": newick,
                "ultrametric": c.ultrametric.as_slice(),
                "rooted_triples": triples,
                "pareto_violations": report.pareto_violations.len(),
                "co_pareto_violations": report.co_pareto_violations.len(),
                "fermat_weber": c.fermat_weber,
            })))
        }
    }
}

fn named_triple(t: &phylo::RootedTriple, labels: &LabelTable) -> String {
    let (a, b) = t.pair;
    format!("{},{}|{}", labels.name(a), labels.name(b), labels.name(t.outgroup))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Fw { points, weights, method, format } => cmd_fw(points, weights, *method, *format),
        Command::Cells { points, format } => cmd_cells(points, *format),
        Command::Inverse { points, cell } => cmd_inverse(points, cell),
        Command::Consensus { trees, weights, anchor, format } => cmd_consensus(trees, weights, anchor, *format),
        Command::Verify { seed, instances } => verify::run(*seed, *instances),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text).map_err(|e| io_failure(path, e)),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("stdout"), e)),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(f) => {
                    eprintln!("error: {}", f.message);
                    ExitCode::from(f.code)
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
