//! `solvency`: command-line front end for the solvency cone library.
//!
//! Exit codes: 0 success, 1 domain failure, 2 usage or parse error,
//! 3 budget exceeded.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use solvency_cone::algorithm::extract;
use solvency_cone::bipartite::{
    degree_sequence_sets, draconian_equals_degrees, BipartiteDigraph, Bipartition, BipartitionJson,
    Configuration, Side, DEFAULT_TREE_BUDGET,
};
use solvency_cone::dual_cone::{
    count_bounds, enumerate_extreme_directions, solvency_report, trade_plan, DualDirection,
    EnumerationOptions, ExtremeSet, Strategy,
};
use solvency_cone::oracle::{
    brute_force_extremes, double_description_extremes, random_connected_bipartite, HRepresentation,
    DD_MAX_D,
};
use solvency_cone::prices::{
    from_bid_ask, matrix_to_csv, matrix_to_json, prime_matrix, read_matrix_file, validate_axioms,
    BidAskQuote, PriceMatrix,
};
use solvency_cone::rational::{format_pretty, format_rational, parse_rational_list};
use solvency_cone::Error;

#[derive(Parser)]
#[command(name = "solvency", version, about = "Solvency cones under proportional transaction costs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Maximum number of spanning trees examined by exhaustive steps.
    #[arg(long, env = "SOLVENCY_BUDGET", default_value_t = DEFAULT_TREE_BUDGET, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads (0 = one per core). Output order does not depend on it.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Check the price matrix axioms.
    Validate { matrix: PathBuf },
    /// Generate a price matrix.
    #[command(subcommand)]
    Gen(GenKind),
    /// Extract the extreme direction for a bipartition and configuration.
    Extract {
        matrix: PathBuf,
        /// The kept assets P, comma separated, 1-based.
        #[arg(long = "p", value_delimiter = ',', required = true)]
        p: Vec<usize>,
        /// Tree degrees on the chosen side, in increasing index order.
        #[arg(long, value_delimiter = ',', required = true)]
        config: Vec<usize>,
        #[arg(long, value_enum, default_value_t = SideArg::P)]
        side: SideArg,
    },
    /// Enumerate every extreme direction of the dual cone.
    Enumerate {
        matrix: PathBuf,
        /// Independent cross-check: brute-force trees or double description.
        #[arg(long, value_enum, default_value_t = OracleArg::None)]
        oracle: OracleArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Skip computing the full configuration sets of each direction.
        #[arg(long)]
        no_config_sets: bool,
    },
    /// Bounds on the number of extreme directions, and the exact count for a matrix.
    Count {
        /// Matrix file; its directions are enumerated and counted.
        matrix: Option<PathBuf>,
        #[arg(long, conflicts_with = "matrix")]
        d: Option<usize>,
    },
    /// Decide whether a portfolio is solvent.
    Solvent {
        matrix: PathBuf,
        /// Portfolio, comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Exit with code 1 when the portfolio is insolvent.
        #[arg(long)]
        strict: bool,
    },
    /// Candidate price systems and exchange trees for a portfolio.
    Tradeplan {
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Compare left and right degree sequence set sizes of bipartite graphs.
    Lemma4 {
        /// Number of random connected graphs.
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        random: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_arcs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph file: {"P": [...], "N": [...], "arcs": [[i, j], ...]}, 1-based.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Consecutive primes from `start`, filled column by column.
    Prime {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 59)]
        start: u64,
    },
    /// π_ij = a_j / b_i from ask and bid prices.
    Bidask {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "N", alias = "n")]
    N,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    None,
    Tree,
    Dd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Exhaustive,
    Algorithmic,
}

/// What a command produced plus whether it counts as a domain failure.
struct Output {
    text: String,
    failure: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: false }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Axiom(_) => 1,
        Error::Budget { .. } => 3,
        Error::Input(_) | Error::Parse(_) | Error::Io(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        // Only fails if a pool exists already, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.global, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.failure {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(g: &Global, text: &str) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &g.output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> solvency_cone::Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { matrix } => cmd_validate(g, matrix),
        Command::Gen(kind) => cmd_gen(g, kind),
        Command::Extract { matrix, p, config, side } => cmd_extract(g, matrix, p, config, *side),
        Command::Enumerate {
            matrix,
            oracle,
            strategy,
            no_config_sets,
        } => cmd_enumerate(g, matrix, *oracle, *strategy, !no_config_sets),
        Command::Count { matrix, d } => cmd_count(g, matrix.as_deref(), *d),
        Command::Solvent { matrix, x, strict } => cmd_solvent(g, matrix, x, *strict),
        Command::Tradeplan { matrix, x } => cmd_tradeplan(g, matrix, x),
        Command::Lemma4 {
            random,
            max_arcs,
            seed,
            graph,
        } => cmd_lemma4(g, *random, *max_arcs, *seed, graph.as_deref()),
    }
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn rationals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn pretty_vector(v: &[BigRational]) -> String {
    v.iter()
        .enumerate()
        .map(|(k, x)| format!("    y_{:<3} = {}", k + 1, format_pretty(x)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn load_matrix(path: &Path) -> solvency_cone::Result<PriceMatrix> {
    PriceMatrix::new(read_matrix_file(path)?)
}

fn load_portfolio(x: &str, d: usize) -> solvency_cone::Result<Vec<BigRational>> {
    let x = parse_rational_list(x)?;
    if x.len() != d {
        return Err(Error::Input(format!("portfolio has {} entries, matrix is {d}x{d}", x.len())));
    }
    Ok(x)
}

fn cmd_validate(g: &Global, path: &Path) -> solvency_cone::Result<Output> {
    let report = validate_axioms(&read_matrix_file(path)?)?;
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        Format::Csv => {
            let mut s = String::from("axiom,holds\n");
            for (name, holds) in [
                ("eq1", report.holds_1),
                ("eq2", report.holds_2),
                ("eq3", report.holds_3),
                ("eq4", report.holds_4),
                ("eq5", report.holds_5_strict),
            ] {
                let _ = writeln!(s, "{name},{holds}");
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{}x{} price matrix\n", report.d, report.d);
            for (name, holds) in [
                ("unit diagonal", report.holds_1),
                ("positive entries", report.holds_2),
                ("triangle inequality", report.holds_3),
                ("some friction", report.holds_4),
                ("strict friction", report.holds_5_strict),
            ] {
                let _ = writeln!(s, "  {name:<20} {}", if holds { "yes" } else { "no" });
            }
            for w in &report.witnesses {
                let idx: Vec<String> = w.indices.iter().map(|i| (i + 1).to_string()).collect();
                let _ = writeln!(s, "  witness {:?} {:?}: ({})", w.axiom, w.kind, idx.join(", "));
            }
            s
        }
    };
    Ok(Output {
        text,
        failure: !report.is_market(),
    })
}

fn render_matrix(g: &Global, pi: &PriceMatrix) -> String {
    let csv_output = g.format == Format::Csv
        || g.output.as_ref().and_then(|p| p.extension()).is_some_and(|e| e == "csv");
    match g.format {
        Format::Pretty => pi.to_string(),
        _ if csv_output => matrix_to_csv(pi.rows()),
        _ => matrix_to_json(pi.rows()),
    }
}

fn cmd_gen(g: &Global, kind: &GenKind) -> solvency_cone::Result<Output> {
    let pi = match kind {
        GenKind::Prime { d, start } => prime_matrix(*d, *start).map_err(|e| match e {
            Error::Axiom(m) => Error::Input(m),
            other => other,
        })?,
        GenKind::Bidask { a, b } => {
            let q = BidAskQuote::new(parse_rational_list(a)?, parse_rational_list(b)?)?;
            from_bid_ask(&q)?
        }
    };
    Ok(Output::ok(render_matrix(g, &pi)))
}

fn cmd_extract(
    g: &Global,
    path: &Path,
    p: &[usize],
    config: &[usize],
    side: SideArg,
) -> solvency_cone::Result<Output> {
    let pi = load_matrix(path)?;
    let d = pi.d();
    let p0 = p
        .iter()
        .map(|&i| {
            if i == 0 || i > d {
                Err(Error::Input(format!("index {i} outside 1..={d}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect::<solvency_cone::Result<Vec<_>>>()?;
    let bp = Bipartition::from_p(d, &p0)?;
    let side = match side {
        SideArg::P => Side::P,
        SideArg::N => Side::N,
    };
    let cfg = Configuration::new(&bp, side, config.to_vec())?;
    let res = extract(&pi, &bp, &cfg)?;
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(&res.to_json()).expect("serializable"),
        Format::Csv => {
            let mut s = String::from("index,y\n");
            for (k, v) in res.y.as_slice().iter().enumerate() {
                let _ = writeln!(s, "{},{}", k + 1, format_rational(v));
            }
            s
        }
        Format::Pretty => {
            let j = res.to_json();
            format!(
                "P = {:?}, N = {:?}\n{:?}-configuration {:?}, complementary {:?}\ntree {:?}\ny (max entry 1):\n{}",
                j.bipartition.p,
                j.bipartition.n,
                j.side,
                j.config,
                j.complementary_config,
                j.tree,
                pretty_vector(res.y.as_slice())
            )
        }
    };
    Ok(Output::ok(text))
}

fn enumeration_options(g: &Global, strategy: StrategyArg, config_sets: bool) -> EnumerationOptions {
    EnumerationOptions {
        strategy: match strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Algorithmic => Strategy::Algorithmic,
        },
        tree_budget: g.budget,
        config_sets,
        parallel: true,
    }
}

fn oracle_set(
    pi: &PriceMatrix,
    oracle: OracleArg,
    budget: u64,
) -> solvency_cone::Result<Option<BTreeSet<DualDirection>>> {
    Ok(match oracle {
        OracleArg::None => None,
        OracleArg::Tree => Some(brute_force_extremes(pi, budget)?.vector_set()),
        OracleArg::Dd => Some(
            double_description_extremes(&HRepresentation::from_prices(pi), DD_MAX_D)?
                .into_iter()
                .collect(),
        ),
    })
}

fn cmd_enumerate(
    g: &Global,
    path: &Path,
    oracle: OracleArg,
    strategy: StrategyArg,
    config_sets: bool,
) -> solvency_cone::Result<Output> {
    let pi = load_matrix(path)?;
    let set = enumerate_extreme_directions(&pi, &enumeration_options(g, strategy, config_sets))?;
    let agreement = oracle_set(&pi, oracle, g.budget)?.map(|o| o == set.vector_set());
    let oracle_name = match oracle {
        OracleArg::None => "none",
        OracleArg::Tree => "tree",
        OracleArg::Dd => "dd",
    };
    let text = match g.format {
        Format::Json => to_json(&json!({
            "d": set.d,
            "count": set.len(),
            "oracle": oracle_name,
            "agreement": agreement,
            "directions": set.to_json(),
        })),
        Format::Csv => {
            let mut s = String::from("P,N");
            for k in 1..=set.d {
                let _ = write!(s, ",y{k}");
            }
            s.push('\n');
            for e in &set.directions {
                let bp = e.bipartition().to_json();
                let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                let _ = write!(s, "{},{}", join(&bp.p), join(&bp.n));
                for v in e.y.as_slice() {
                    let _ = write!(s, ",{}", format_rational(v));
                }
                s.push('\n');
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("{} extreme directions (d = {})\n", set.len(), set.d);
            if let Some(a) = agreement {
                let _ = writeln!(s, "oracle {oracle_name}: {}", if a { "agrees" } else { "DISAGREES" });
            }
            for (k, e) in set.directions.iter().enumerate() {
                let bp = e.bipartition().to_json();
                let _ = writeln!(s, "#{} P = {:?}, N = {:?}\n{}", k + 1, bp.p, bp.n, pretty_vector(e.y.as_slice()));
            }
            s
        }
    };
    Ok(Output {
        text,
        failure: agreement == Some(false),
    })
}

fn number(n: &num_bigint::BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn cmd_count(g: &Global, path: Option<&Path>, d: Option<usize>) -> solvency_cone::Result<Output> {
    let (d, exact) = match (path, d) {
        (Some(path), _) => {
            let pi = load_matrix(path)?;
            let opts = EnumerationOptions {
                config_sets: false,
                ..enumeration_options(g, StrategyArg::Auto, false)
            };
            (pi.d(), Some(enumerate_extreme_directions(&pi, &opts)?.len()))
        }
        (None, Some(d)) => (d, None),
        (None, None) => return Err(Error::Input("give a matrix file or --d".into())),
    };
    let (lower, upper) = count_bounds(d)?;
    let text = match g.format {
        Format::Json => to_json(&json!({
            "d": d,
            "lower": number(&lower),
            "upper": number(&upper),
            "exact": exact,
        })),
        Format::Csv => format!(
            "d,lower,upper,exact\n{d},{lower},{upper},{}",
            exact.map(|e| e.to_string()).unwrap_or_default()
        ),
        Format::Pretty => {
            let mut s = format!("d = {d}\nlower bound (strict friction) {lower}\nupper bound {upper}");
            if let Some(e) = exact {
                let _ = write!(s, "\nexact count {e}");
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn extremes_for(g: &Global, pi: &PriceMatrix) -> solvency_cone::Result<ExtremeSet> {
    enumerate_extreme_directions(pi, &enumeration_options(g, StrategyArg::Auto, false))
}

fn cmd_solvent(g: &Global, path: &Path, x: &str, strict: bool) -> solvency_cone::Result<Output> {
    let pi = load_matrix(path)?;
    let x = load_portfolio(x, pi.d())?;
    let set = extremes_for(g, &pi)?;
    let report = solvency_report(&set, &x)?;
    let facet = |k: &usize| {
        json!({
            "y": set.directions[*k].y,
            "value": format_rational(&report.values[*k]),
        })
    };
    let text = match g.format {
        Format::Json => to_json(&json!({
            "solvent": report.solvent,
            "x": rationals(&x),
            "directions": set.len(),
            "violated": report.violated.iter().map(facet).collect::<Vec<_>>(),
            "tight": report.tight.iter().map(facet).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("direction,value,status\n");
            for (k, v) in report.values.iter().enumerate() {
                let status = if report.violated.contains(&k) {
                    "violated"
                } else if report.tight.contains(&k) {
                    "tight"
                } else {
                    "slack"
                };
                let _ = writeln!(s, "{},{},{status}", k + 1, format_rational(v));
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "{} ({} of {} directions violated, {} tight)\n",
                if report.solvent { "solvent" } else { "insolvent" },
                report.violated.len(),
                set.len(),
                report.tight.len()
            );
            for k in &report.violated {
                let _ = writeln!(s, "  y^T x = {} for\n{}", format_pretty(&report.values[*k]), pretty_vector(set.directions[*k].y.as_slice()));
            }
            s
        }
    };
    Ok(Output {
        text,
        failure: strict && !report.solvent,
    })
}

fn cmd_tradeplan(g: &Global, path: &Path, x: &str) -> solvency_cone::Result<Output> {
    let pi = load_matrix(path)?;
    let x = load_portfolio(x, pi.d())?;
    let set = extremes_for(g, &pi)?;
    let plan = trade_plan(&pi, Some(&set), &x, g.budget)?;
    let bp = plan.bipartition.to_json();
    let entries: Vec<Value> = plan
        .entries
        .iter()
        .map(|e| {
            json!({
                "y": e.y,
                "value": format_rational(&e.value),
                "trees": e.trees.iter().map(|t| solvency_cone::bipartite::arcs_one_based(t.arcs())).collect::<Vec<_>>(),
                "contributions": e.contributions.iter().map(|c| c.values.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let text = match g.format {
        Format::Json => to_json(&json!({
            "P": bp.p,
            "N": bp.n,
            "solvent": plan.solvent,
            "entries": entries,
        })),
        Format::Csv => {
            let mut s = String::from("entry,value,tree,contribution\n");
            for (k, e) in plan.entries.iter().enumerate() {
                for (t, c) in e.trees.iter().zip(&e.contributions) {
                    let arcs: Vec<String> = solvency_cone::bipartite::arcs_one_based(t.arcs())
                        .iter()
                        .map(|[i, j]| format!("{i}>{j}"))
                        .collect();
                    let cv: Vec<String> = c.values.iter().map(usize::to_string).collect();
                    let _ = writeln!(s, "{},{},{},{}", k + 1, format_rational(&e.value), arcs.join(" "), cv.join(" "));
                }
            }
            s
        }
        Format::Pretty => {
            let mut s = format!("keep P = {:?}, cover N = {:?}\n", bp.p, bp.n);
            if let Some(solvent) = plan.solvent {
                let _ = writeln!(s, "portfolio is {}", if solvent { "solvent" } else { "insolvent" });
            }
            for (k, e) in plan.entries.iter().enumerate() {
                let _ = writeln!(s, "candidate {}: y^T x = {}", k + 1, format_pretty(&e.value));
                for t in &e.trees {
                    let arcs: Vec<String> = solvency_cone::bipartite::arcs_one_based(t.arcs())
                        .iter()
                        .map(|[i, j]| format!("{i}->{j}"))
                        .collect();
                    let _ = writeln!(s, "    exchange {}", arcs.join(", "));
                }
            }
            s
        }
    };
    Ok(Output::ok(text))
}

#[derive(Deserialize)]
struct GraphFile {
    #[serde(flatten)]
    bipartition: BipartitionJson,
    arcs: Vec<[usize; 2]>,
}

fn read_graph(path: &Path) -> solvency_cone::Result<BipartiteDigraph> {
    let file: GraphFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let bp = file.bipartition.to_bipartition()?;
    let arcs = file
        .arcs
        .iter()
        .map(|&[i, j]| {
            if i == 0 || j == 0 {
                Err(Error::Input("indices are 1-based; found 0".into()))
            } else {
                Ok((i - 1, j - 1))
            }
        })
        .collect::<solvency_cone::Result<Vec<_>>>()?;
    BipartiteDigraph::new(bp, arcs)
}

fn cmd_lemma4(
    g: &Global,
    random: Option<usize>,
    max_arcs: usize,
    seed: u64,
    graph: Option<&Path>,
) -> solvency_cone::Result<Output> {
    let graphs: Vec<BipartiteDigraph> = match (random, graph) {
        (_, Some(path)) => vec![read_graph(path)?],
        (Some(n), None) => {
            if max_arcs == 0 {
                return Err(Error::Input("--max-arcs must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| random_connected_bipartite(&mut rng, max_arcs)).collect()
        }
        (None, None) => return Err(Error::Input("give --random or --graph".into())),
    };
    let mut rows = Vec::with_capacity(graphs.len());
    let mut all_equal = true;
    for h in &graphs {
        let (left, right) = degree_sequence_sets(h, g.budget)?;
        let draconian = draconian_equals_degrees(h, g.budget)?;
        let equal = left.len() == right.len();
        all_equal &= equal && draconian;
        let bp = h.bipartition().to_json();
        rows.push(json!({
            "P": bp.p,
            "N": bp.n,
            "arcs": solvency_cone::bipartite::arcs_one_based(h.arcs()),
            "left": left.len(),
            "right": right.len(),
            "equal": equal,
            "draconian": draconian,
        }));
    }
    let seed_value = graph.is_none().then_some(seed);
    let text = match g.format {
        Format::Json => to_json(&json!({
            "seed": seed_value,
            "max_arcs": graph.is_none().then_some(max_arcs),
            "all_equal": all_equal,
            "graphs": rows,
        })),
        Format::Csv => {
            let mut s = String::new();
            if let Some(seed) = seed_value {
                let _ = writeln!(s, "# seed {seed}");
            }
            s.push_str("graph,left,right,equal,draconian\n");
            for (k, r) in rows.iter().enumerate() {
                let _ = writeln!(s, "{},{},{},{},{}", k + 1, r["left"], r["right"], r["equal"], r["draconian"]);
            }
            s
        }
        Format::Pretty => {
            let mut s = String::new();
            if let Some(seed) = seed_value {
                let _ = writeln!(s, "seed {seed}");
            }
            for (k, r) in rows.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "graph {:>4}: left {:>3}  right {:>3}  {}",
                    k + 1,
                    r["left"],
                    r["right"],
                    if r["equal"] == json!(true) { "equal" } else { "DIFFER" }
                );
            }
            let _ = write!(s, "{}", if all_equal { "all equal" } else { "some differ" });
            s
        }
    };
    Ok(Output {
        text,
        failure: !all_equal,
    })
}
