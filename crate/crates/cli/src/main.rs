//! `rainbow-aw`: classify trees, compute `aw(T□T',3)`, build and check
//! colorings, and run the exhaustive oracle.
//!
//! Results go to stdout as JSON. Exit codes: 0 success, 1 domain error,
//! 2 usage error, 3 inconclusive oracle run.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use rainbow_aw::classifier::{aw_forest_product, aw_tree_product, explain, Witness};
use rainbow_aw::coloring::{find_rainbow_3ap, Coloring};
use rainbow_aw::dot::{graph_to_dot, product_to_dot};
use rainbow_aw::graph::{all_pairs_distances, parse_edge_list, Graph};
use rainbow_aw::oracle::{
    brute_force_aw3, crosscheck_sweep, exists_rainbow_free_exact_coloring, CrosscheckStatus,
    OracleError, OracleStatus, SearchBudget,
};
use rainbow_aw::product::{cartesian_product, ProductGraph};
use rainbow_aw::tree::{canonical_form, classify_tree, enumerate_trees, DEFAULT_ENUMERATION_BOUND};
use serde::Serialize;
use serde_json::{json, Value};

const ABOUT: &str = "Anti-van der Waerden numbers aw(T□T',3) for Cartesian products of trees";

const LONG_ABOUT: &str = "\
Anti-van der Waerden numbers aw(T□T',3) for Cartesian products of trees.

Graphs are read as edge lists: optional '#' comment lines, then the vertex
count n, then one 'u v' pair per line with 0-based ids in 0..n.

Machine output is JSON on stdout and uses 0-based ids; product vertex (i,j)
has flat id i*n2 + j. Human-facing output (--explain, verify triples, DOT
labels) uses 1-based labels v<i>,<j>.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 inconclusive oracle.
Set RAINBOW_AW_LOG (e.g. debug) for logging on stderr.";

#[derive(Parser)]
#[command(name = "rainbow-aw", version, about = ABOUT, long_about = LONG_ABOUT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct BudgetArgs {
    /// Node expansions allowed across the whole oracle run.
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    /// Wall-clock limit in milliseconds.
    #[arg(long, default_value_t = 300_000)]
    budget_ms: u64,
}

impl BudgetArgs {
    fn budget(self) -> Result<SearchBudget, Failure> {
        SearchBudget::new(self.budget_nodes, Duration::from_millis(self.budget_ms), 64)
            .map_err(|e| Failure::domain("budget", e))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a tree: 3-peripheral, strongly or weakly non-3-peripheral.
    Classify { tree: PathBuf },
    /// aw(T□T',3) for two nontrivial trees.
    Aw {
        t1: PathBuf,
        t2: PathBuf,
        /// Print the rule trace on stderr.
        #[arg(long)]
        explain: bool,
        /// Write a rainbow-free exact 3-coloring of the product (aw = 4 only).
        #[arg(long, value_name = "PATH")]
        emit_coloring: Option<PathBuf>,
    },
    /// aw(F1□F2,3) for two forests without isolated vertices.
    AwForest { f1: PathBuf, f2: PathBuf },
    /// Build the red/blue/green rainbow-free 3-coloring of T□T'.
    Color {
        t1: PathBuf,
        t2: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// Also write the colored product as Graphviz DOT.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Check a coloring of T□T' for rainbow 3-APs and exactness.
    Verify {
        t1: PathBuf,
        t2: PathBuf,
        #[arg(long, value_name = "PATH")]
        coloring: PathBuf,
    },
    /// Exhaustive search on any connected graph.
    Oracle {
        graph: PathBuf,
        /// Only decide whether a rainbow-free exact r-coloring exists.
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compare classifier and oracle on every pair of trees up to N vertices.
    Crosscheck {
        #[arg(long, value_name = "N")]
        max_factor: usize,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write JSON lines here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// All trees on n vertices up to isomorphism.
    EnumerateTrees { n: usize },
    /// Graphviz DOT for a graph, or for a product with --with.
    ExportDot {
        graph: PathBuf,
        /// Second factor; the graph exported is GRAPH□WITH.
        #[arg(long, value_name = "PATH")]
        with: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        coloring: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
    payload: Option<Value>,
}

impl Failure {
    fn domain(kind: &'static str, e: impl std::fmt::Display) -> Self {
        Failure {
            kind,
            message: e.to_string(),
            code: 1,
            payload: None,
        }
    }

    fn inconclusive(message: String, payload: Value) -> Self {
        Failure {
            kind: "inconclusive",
            message,
            code: 3,
            payload: Some(payload),
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::domain("io", format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::domain("parse", format!("{}: {e}", path.display())))
}

fn read_coloring(path: &Path) -> Result<Coloring, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::domain("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::domain("coloring", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::domain("io", format!("{}: {e}", path.display())))
}

fn product(t1: &Graph, t2: &Graph) -> Result<ProductGraph, Failure> {
    cartesian_product(t1, t2).map_err(|e| Failure::domain("product", e))
}

fn emit(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    println!("{text}");
    Ok(())
}

fn label_triple(pg: &ProductGraph, x: usize, y: usize, z: usize, d: u32) -> Value {
    json!({
        "x": format!("v{}", pg.label(x)),
        "y": format!("v{}", pg.label(y)),
        "z": format!("v{}", pg.label(z)),
        "flat": [x, y, z],
        "d": d,
    })
}

fn classify(tree: &Path) -> Result<(), Failure> {
    let t = read_graph(tree)?;
    emit(&classify_tree(&t).map_err(|e| Failure::domain("tree", e))?)
}

/// A rainbow-free exact 3-coloring of `T□T'` when `aw = 4`: the constructive
/// one for rule 5, otherwise from the oracle.
fn rainbow_free_coloring(pg: &ProductGraph, witness: &Witness) -> Result<Coloring, Failure> {
    if let Witness::RainbowFree { coloring, .. } = witness {
        return Ok(coloring.clone());
    }
    let out = exists_rainbow_free_exact_coloring(pg.graph(), 3, &SearchBudget::default())
        .map_err(|e| Failure::domain("oracle", e))?;
    match out.status {
        OracleStatus::Found(c) => Ok(c),
        OracleStatus::Exhausted => Err(Failure::domain(
            "oracle",
            "no rainbow-free exact 3-coloring exists",
        )),
        OracleStatus::Inconclusive => Err(Failure::inconclusive(
            "search for a 3-coloring ran out of budget".into(),
            serde_json::to_value(&out).expect("serializable"),
        )),
    }
}

fn aw(t1: &Path, t2: &Path, show: bool, emit_coloring: Option<&Path>) -> Result<(), Failure> {
    let (a, b) = (read_graph(t1)?, read_graph(t2)?);
    let result = aw_tree_product(&a, &b).map_err(|e| Failure::domain("classifier", e))?;
    if show {
        eprint!("{}", explain(&result));
    }
    let mut out = serde_json::to_value(&result).expect("serializable");
    if let Some(path) = emit_coloring {
        if result.value != 4 {
            return Err(Failure::domain(
                "no_coloring",
                "aw = 3: every exact 3-coloring of this product has a rainbow 3-AP",
            ));
        }
        let pg = product(&a, &b)?;
        let c = rainbow_free_coloring(&pg, &result.witness)?;
        write_file(path, &serde_json::to_string(&c).expect("serializable"))?;
        out["coloring_ref"] = json!(path.display().to_string());
    }
    emit(&out)
}

fn aw_forest(f1: &Path, f2: &Path) -> Result<(), Failure> {
    let (a, b) = (read_graph(f1)?, read_graph(f2)?);
    emit(&aw_forest_product(&a, &b).map_err(|e| Failure::domain("classifier", e))?)
}

fn color(t1: &Path, t2: &Path, out: &Path, dot: Option<&Path>) -> Result<(), Failure> {
    let (a, b) = (read_graph(t1)?, read_graph(t2)?);
    let result = aw_tree_product(&a, &b).map_err(|e| Failure::domain("classifier", e))?;
    // The red/blue/green construction only applies when both factors are
    // strongly non-3-peripheral and the product diameter is even.
    let Witness::RainbowFree { anchors, coloring } = result.witness else {
        return Err(Failure::domain(
            "coloring",
            format!("construction needs both factors strongly non-3-peripheral with even product diameter; rule {} ({:?}) applies", result.rule.number(), result.rule),
        ));
    };
    let pg = product(&a, &b)?;
    let rainbow = find_rainbow_3ap(&pg, &coloring);
    write_file(
        out,
        &serde_json::to_string(&coloring).expect("serializable"),
    )?;
    if let Some(path) = dot {
        write_file(path, &product_to_dot(&pg, Some(&coloring)))?;
    }
    emit(&json!({
        "anchors": anchors,
        "coloring_ref": out.display().to_string(),
        "exact": coloring.is_exact(),
        "rainbow_free": rainbow.is_none(),
    }))
}

fn verify(t1: &Path, t2: &Path, coloring: &Path) -> Result<(), Failure> {
    let (a, b) = (read_graph(t1)?, read_graph(t2)?);
    let pg = product(&a, &b)?;
    let c = read_coloring(coloring)?;
    if c.len() != pg.order() {
        return Err(Failure::domain(
            "size_mismatch",
            format!(
                "coloring has {} entries, product has {} vertices",
                c.len(),
                pg.order()
            ),
        ));
    }
    let rainbow = find_rainbow_3ap(&pg, &c);
    let exact_note = if c.is_exact() {
        format!("exact {}-coloring", c.palette())
    } else {
        format!(
            "not exact: {} of {} colors used",
            c.used_colors(),
            c.palette()
        )
    };
    emit(&json!({
        "result": if rainbow.is_some() { "rainbow" } else { "rainbow-free" },
        "rainbow": rainbow.map(|t| label_triple(&pg, t.x, t.y, t.z, t.d)),
        "exact": c.is_exact(),
        "palette": c.palette(),
        "used_colors": c.used_colors(),
        "note": exact_note,
    }))
}

fn oracle(graph: &Path, r: Option<usize>, budget: BudgetArgs) -> Result<(), Failure> {
    let g = read_graph(graph)?;
    let budget = budget.budget()?;
    match r {
        Some(r) => {
            let out = exists_rainbow_free_exact_coloring(&g, r, &budget)
                .map_err(|e| Failure::domain("oracle", e))?;
            if out.status == OracleStatus::Inconclusive {
                let payload = serde_json::to_value(&out).expect("serializable");
                return Err(Failure::inconclusive(
                    format!("r = {r}: budget spent"),
                    payload,
                ));
            }
            emit(&json!({ "r": r, "outcome": out }))
        }
        None => match brute_force_aw3(&g, &budget) {
            Ok(res) => emit(&res),
            Err(OracleError::Inconclusive { r, stats }) => Err(Failure::inconclusive(
                format!("r = {r}: budget spent after {} nodes", stats.nodes),
                json!({ "status": "inconclusive", "r": r, "stats": stats }),
            )),
            Err(e) => Err(Failure::domain("oracle", e)),
        },
    }
}

fn crosscheck(
    max_factor: usize,
    jobs: Option<usize>,
    out: Option<&Path>,
    budget: BudgetArgs,
) -> Result<(), Failure> {
    if !(2..=DEFAULT_ENUMERATION_BOUND).contains(&max_factor) {
        return Err(Failure::domain(
            "bound",
            format!("--max-factor must be in 2..={DEFAULT_ENUMERATION_BOUND}, got {max_factor}"),
        ));
    }
    let budget = budget.budget()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| Failure::domain("threads", e))?;
    let records = pool.install(|| crosscheck_sweep(max_factor, &budget));

    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(
            fs::File::create(p)
                .map_err(|e| Failure::domain("io", format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    for rec in &records {
        let line = serde_json::to_string(rec).expect("serializable");
        writeln!(sink, "{line}").map_err(|e| Failure::domain("io", e))?;
    }
    sink.flush().map_err(|e| Failure::domain("io", e))?;
    drop(sink);

    let count = |s: CrosscheckStatus| records.iter().filter(|r| r.status == s).count();
    let (disagree, inconclusive, errors) = (
        count(CrosscheckStatus::Disagree),
        count(CrosscheckStatus::Inconclusive),
        count(CrosscheckStatus::Error),
    );
    eprintln!(
        "{} pairs: {} agree, {disagree} disagree, {inconclusive} inconclusive, {errors} errors",
        records.len(),
        count(CrosscheckStatus::Agree)
    );
    if disagree + errors > 0 {
        Err(Failure {
            kind: "disagreement",
            message: format!("{disagree} disagreements, {errors} errors"),
            code: 1,
            payload: None,
        })
    } else if inconclusive > 0 {
        Err(Failure {
            kind: "inconclusive",
            message: format!("{inconclusive} inconclusive pairs"),
            code: 3,
            payload: None,
        })
    } else {
        Ok(())
    }
}

fn enumerate(n: usize) -> Result<(), Failure> {
    let trees = enumerate_trees(n).map_err(|e| Failure::domain("tree", e))?;
    let listed: Vec<Value> = trees
        .iter()
        .map(|t| {
            let edges: Vec<[usize; 2]> = t.edges().map(|(u, v)| [u, v]).collect();
            json!({ "canonical": canonical_form(t), "diameter": all_pairs_distances(t).diameter(), "edges": edges })
        })
        .collect();
    emit(&json!({ "n": n, "count": trees.len(), "trees": listed }))
}

fn export_dot(graph: &Path, with: Option<&Path>, coloring: Option<&Path>) -> Result<(), Failure> {
    let g = read_graph(graph)?;
    let c = coloring.map(read_coloring).transpose()?;
    let (text, order) = match with {
        Some(h) => {
            let pg = product(&g, &read_graph(h)?)?;
            let order = pg.order();
            check_len(c.as_ref(), order)?;
            (product_to_dot(&pg, c.as_ref()), order)
        }
        None => {
            check_len(c.as_ref(), g.order())?;
            (graph_to_dot(&g, c.as_ref()), g.order())
        }
    };
    log::debug!("exported {order} vertices");
    print!("{text}");
    Ok(())
}

fn check_len(c: Option<&Coloring>, n: usize) -> Result<(), Failure> {
    match c {
        Some(c) if c.len() != n => Err(Failure::domain(
            "size_mismatch",
            format!("coloring has {} entries, graph has {n} vertices", c.len()),
        )),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { tree } => classify(&tree),
        Command::Aw {
            t1,
            t2,
            explain,
            emit_coloring,
        } => aw(&t1, &t2, explain, emit_coloring.as_deref()),
        Command::AwForest { f1, f2 } => aw_forest(&f1, &f2),
        Command::Color { t1, t2, out, dot } => color(&t1, &t2, &out, dot.as_deref()),
        Command::Verify { t1, t2, coloring } => verify(&t1, &t2, &coloring),
        Command::Oracle { graph, r, budget } => oracle(&graph, r, budget),
        Command::Crosscheck {
            max_factor,
            jobs,
            out,
            budget,
        } => crosscheck(max_factor, jobs, out.as_deref(), budget),
        Command::EnumerateTrees { n } => enumerate(n),
        Command::ExportDot {
            graph,
            with,
            coloring,
        } => export_dot(&graph, with.as_deref(), coloring.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RAINBOW_AW_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            log::debug!("{f:?}");
            let mut body = json!({ "error": { "kind": f.kind, "message": f.message } });
            if let Some(p) = f.payload {
                body["error"]["detail"] = p;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&body).expect("serializable")
            );
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
