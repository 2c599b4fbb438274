//! Command-line front end for `pathcount`.
//!
//! Every invocation prints one JSON [`ResultEnvelope`] on standard output.
//! Exit codes: 0 on success, 1 when `selftest` finds a violation, 2 on
//! invalid input, 3 when the input is valid but the chosen algorithm cannot
//! handle it (enumeration cap, fractional weights, missing second weights).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use pathcount::bicriteria::{build_bi_table, build_pseudo_table};
use pathcount::generators::{
    gen_knapsack_bicriteria, gen_partition, gen_poly_product, gen_random_layered, parse_factor,
    GeneratedInstance, LayeredParams, Query,
};
use pathcount::json::{graph_to_json, parse_graph};
use pathcount::numeric::{parse_decimal, to_exact_decimal};
use pathcount::oracle::{exact_count_at_most, exact_count_bicriteria, exact_count_by_length};
use pathcount::{build_staircase, Dag, Extended, Instance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pathcount::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_capability() => EXIT_CAPABILITY,
            _ => EXIT_INVALID,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Count s-t paths of bounded length in weighted DAGs, exactly or approximately.
#[derive(Parser, Debug)]
#[command(name = "pathcount", author, version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count paths with one of the exact or approximate algorithms
    #[command(subcommand)]
    Count(CountCommand),
    /// Generate an instance
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a graph file and summarise it
    Validate(GraphArg),
    /// Compare approximate counts against exact ones on random graphs
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum CountCommand {
    /// Exact count of paths with length at most L, by enumeration
    Exact(ExactArgs),
    /// Exact count for integer weights, by dynamic programming over lengths
    DpLength(LengthArgs),
    /// Total number of s-t paths
    Total(GraphArg),
    /// (1+eps)-approximate count of paths with length at most L
    Fptas(FptasArgs),
    /// Approximate count of paths within a factor rho of the shortest
    Rho(RhoArgs),
    /// Two-weight count with rounded first-instance budgets
    Bicriteria(BiArgs),
    /// Exact two-weight count, by enumeration
    BicriteriaExact(BiExactArgs),
    /// Two-weight count with exact integer first-instance budgets
    BicriteriaPseudo(PseudoArgs),
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph JSON file
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args, Debug)]
struct LengthArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Length bound L (decimal)
    #[arg(long)]
    max_length: String,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    length: LengthArgs,
    /// Refuse to enumerate more paths than this
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Args, Debug)]
struct FptasArgs {
    #[command(flatten)]
    length: LengthArgs,
    /// Accuracy parameter (decimal, positive)
    #[arg(long)]
    epsilon: String,
}

#[derive(Args, Debug)]
struct RhoArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Approximation factor, at least 1 (decimal)
    #[arg(long)]
    rho: String,
    /// Accuracy parameter (decimal, positive)
    #[arg(long)]
    epsilon: String,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// First-instance bound L1 (decimal)
    #[arg(long)]
    l1: String,
    /// Second-instance bound L2 (decimal)
    #[arg(long)]
    l2: String,
}

#[derive(Args, Debug)]
struct BiArgs {
    #[command(flatten)]
    budgets: BudgetArgs,
    /// Count accuracy parameter (decimal, positive)
    #[arg(long)]
    epsilon: String,
    /// Budget rounding parameter (decimal, positive)
    #[arg(long)]
    delta: String,
}

#[derive(Args, Debug)]
struct BiExactArgs {
    #[command(flatten)]
    budgets: BudgetArgs,
    /// Refuse to enumerate more paths than this
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Args, Debug)]
struct PseudoArgs {
    #[command(flatten)]
    budgets: BudgetArgs,
    /// Count accuracy parameter (decimal, positive)
    #[arg(long)]
    epsilon: String,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Chain whose paths of length n*max(S) are the perfect partitions of S
    Partition {
        /// Comma-separated positive integers
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Two-weight chain whose feasible paths are the feasible knapsack subsets
    Knapsack {
        /// Comma-separated item weights
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        weights: Vec<i64>,
        /// Comma-separated item prices
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        prices: Vec<i64>,
        /// Weight capacity W
        #[arg(long, allow_negative_numbers = true)]
        capacity: i64,
        /// Price target P
        #[arg(long, allow_negative_numbers = true)]
        target: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random layered DAG
    Random {
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
        /// Probability of an edge between consecutive layers (decimal)
        #[arg(long, default_value = "0.5")]
        edge_prob: String,
        /// Weights are uniform in 1..=w-max
        #[arg(long, default_value_t = 10)]
        w_max: u64,
        /// Draw a second weight for every edge
        #[arg(long)]
        two_weights: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Chain realising a product of polynomials
    Poly {
        /// One factor as coeff:power terms, e.g. 1:0,1:1 for 1+x (repeatable)
        #[arg(long = "factor", required = true)]
        factors: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write the graph here and the queries to <PATH>.queries.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random graphs
    #[arg(long, default_value_t = 20)]
    instances: u64,
    #[arg(long, default_value = "0.1")]
    epsilon: String,
}

/// The JSON object printed by every invocation.
#[derive(Debug, Serialize)]
pub struct ResultEnvelope {
    pub command: String,
    pub input_digest: Option<String>,
    pub parameters: BTreeMap<String, String>,
    pub result: Value,
    pub timing_ms: u64,
    pub warnings: Vec<String>,
}

/// Exit code plus what the process writes to its two streams.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    digest: Option<String>,
    parameters: BTreeMap<String, String>,
    result: Value,
    warnings: Vec<String>,
    code: i32,
}

impl Report {
    fn new(digest: Option<String>, result: Value) -> Report {
        Report {
            digest,
            parameters: BTreeMap::new(),
            result,
            warnings: Vec::new(),
            code: EXIT_OK,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Report {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    match execute(cli.command) {
        Ok(report) => {
            let envelope = ResultEnvelope {
                command: name,
                input_digest: report.digest,
                parameters: report.parameters,
                result: report.result,
                timing_ms: start.elapsed().as_millis() as u64,
                warnings: report.warnings,
            };
            let mut stdout = serde_json::to_string_pretty(&envelope).expect("envelope serialises");
            stdout.push('\n');
            Outcome {
                code: report.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn command_name(command: &Command) -> String {
    let sub = match command {
        Command::Count(c) => match c {
            CountCommand::Exact(_) => "count exact",
            CountCommand::DpLength(_) => "count dp-length",
            CountCommand::Total(_) => "count total",
            CountCommand::Fptas(_) => "count fptas",
            CountCommand::Rho(_) => "count rho",
            CountCommand::Bicriteria(_) => "count bicriteria",
            CountCommand::BicriteriaExact(_) => "count bicriteria-exact",
            CountCommand::BicriteriaPseudo(_) => "count bicriteria-pseudo",
        },
        Command::Gen(g) => match g {
            GenCommand::Partition { .. } => "gen partition",
            GenCommand::Knapsack { .. } => "gen knapsack",
            GenCommand::Random { .. } => "gen random",
            GenCommand::Poly { .. } => "gen poly",
        },
        Command::Validate(_) => "validate",
        Command::Selftest(_) => "selftest",
    };
    sub.to_string()
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load(arg: &GraphArg) -> CliResult<(Dag, String)> {
    let bytes = fs::read(&arg.graph).map_err(|e| io_error(&arg.graph, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Usage(format!("{}: not UTF-8", arg.graph.display())))?;
    Ok((parse_graph(&text)?, digest(&bytes)))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn decimal(name: &str, text: &str) -> CliResult<BigRational> {
    parse_decimal(text).map_err(|_| CliError::Usage(format!("--{name}: invalid decimal {text:?}")))
}

fn positive(name: &str, text: &str) -> CliResult<BigRational> {
    let x = decimal(name, text)?;
    if !x.is_positive() {
        return Err(CliError::Usage(format!("--{name} must be positive")));
    }
    Ok(x)
}

/// Exact decimal, or `p/q` when the value does not terminate.
fn render(x: &BigRational) -> String {
    to_exact_decimal(x).unwrap_or_else(|| x.to_string())
}

fn render_extended(x: &Extended) -> String {
    match x {
        Extended::Finite(v) => render(v),
        Extended::Infinity => "inf".into(),
        Extended::NegInfinity => "-inf".into(),
    }
}

fn execute(command: Command) -> CliResult<Report> {
    match command {
        Command::Count(c) => count(c),
        Command::Gen(g) => generate(g),
        Command::Validate(a) => validate(&a),
        Command::Selftest(a) => selftest(&a),
    }
}

fn count(command: CountCommand) -> CliResult<Report> {
    match command {
        CountCommand::Exact(a) => {
            let (dag, d) = load(&a.length.graph)?;
            let l = decimal("max-length", &a.length.max_length)?;
            let n = exact_count_at_most(&dag, &l, a.cap)?;
            Ok(Report::new(Some(d), json!({ "count": n.to_string() }))
                .param("graph", a.length.graph.graph.display())
                .param("max_length", render(&l))
                .param("cap", a.cap))
        }
        CountCommand::DpLength(a) => {
            let (dag, d) = load(&a.graph)?;
            let l = decimal("max-length", &a.max_length)?;
            // with integer lengths, "at most L" is "at most floor(L)"
            let n = exact_count_by_length(&dag, &l.floor().to_integer())?;
            Ok(Report::new(Some(d), json!({ "count": n.to_string() }))
                .param("graph", a.graph.graph.display())
                .param("max_length", render(&l)))
        }
        CountCommand::Total(a) => {
            let (dag, d) = load(&a)?;
            let n = dag.total_path_count();
            Ok(Report::new(Some(d), json!({ "count": n.to_string() }))
                .param("graph", a.graph.display()))
        }
        CountCommand::Fptas(a) => {
            let (dag, d) = load(&a.length.graph)?;
            let l = decimal("max-length", &a.length.max_length)?;
            let eps = positive("epsilon", &a.epsilon)?;
            let table = build_staircase(&dag, &eps)?;
            let est = table.count_at_most(&l);
            let result = json!({
                "estimate": est.report(),
                "s_max": table.grid().s_max().to_string(),
                "vertices": table.dag().vertex_count().to_string(),
            });
            Ok(Report::new(Some(d), result)
                .param("graph", a.length.graph.graph.display())
                .param("max_length", render(&l))
                .param("epsilon", render(&eps)))
        }
        CountCommand::Rho(a) => {
            let (dag, d) = load(&a.graph)?;
            let rho = decimal("rho", &a.rho)?;
            let eps = positive("epsilon", &a.epsilon)?;
            let table = build_staircase(&dag, &eps)?;
            let est = table.count_rho_approx(&rho)?;
            let mut report = Report::new(
                Some(d),
                json!({
                    "estimate": est.estimate.report(),
                    "opt": render(&est.opt),
                    "max_length": render(&est.max_length),
                }),
            )
            .param("graph", a.graph.graph.display())
            .param("rho", render(&rho))
            .param("epsilon", render(&eps));
            if est.opt_is_zero {
                report
                    .warnings
                    .push("shortest path has length 0; only zero-length paths are counted".into());
            }
            Ok(report)
        }
        CountCommand::Bicriteria(a) => {
            let (dag, d) = load(&a.budgets.graph)?;
            let l1 = decimal("l1", &a.budgets.l1)?;
            let l2 = decimal("l2", &a.budgets.l2)?;
            let eps = positive("epsilon", &a.epsilon)?;
            let delta = positive("delta", &a.delta)?;
            let table = build_bi_table(&dag, &eps, &delta, &l1)?;
            let est = table.count_bi(&l2);
            let mut report = Report::new(
                Some(d),
                serde_json::to_value(est.report()).expect("serialisable"),
            )
            .param("graph", a.budgets.graph.graph.display())
            .param("l1", render(&l1))
            .param("l2", render(&l2))
            .param("epsilon", render(&eps))
            .param("delta", render(&delta));
            report.warnings.push(
                "the estimate is certified only between the counts at budget_lo and budget_hi, not for L1 itself"
                    .into(),
            );
            Ok(report)
        }
        CountCommand::BicriteriaExact(a) => {
            let (dag, d) = load(&a.budgets.graph)?;
            let l1 = decimal("l1", &a.budgets.l1)?;
            let l2 = decimal("l2", &a.budgets.l2)?;
            let n = exact_count_bicriteria(
                &dag,
                &Extended::Finite(l1.clone()),
                &Extended::Finite(l2.clone()),
                a.cap,
            )?;
            Ok(Report::new(Some(d), json!({ "count": n.to_string() }))
                .param("graph", a.budgets.graph.graph.display())
                .param("l1", render(&l1))
                .param("l2", render(&l2))
                .param("cap", a.cap))
        }
        CountCommand::BicriteriaPseudo(a) => {
            let (dag, d) = load(&a.budgets.graph)?;
            let l1 = decimal("l1", &a.budgets.l1)?;
            let l2 = decimal("l2", &a.budgets.l2)?;
            let eps = positive("epsilon", &a.epsilon)?;
            let budget = if l1.is_integer() && !l1.is_negative() {
                l1.to_integer().to_u64()
            } else {
                None
            }
            .ok_or_else(|| CliError::Usage("--l1 must be a nonnegative integer".into()))?;
            let table = build_pseudo_table(&dag, &eps, budget)?;
            let est = table.count_pseudo(&l2);
            Ok(Report::new(Some(d), json!({ "estimate": est.report() }))
                .param("graph", a.budgets.graph.graph.display())
                .param("l1", render(&l1))
                .param("l2", render(&l2))
                .param("epsilon", render(&eps)))
        }
    }
}

fn generate(command: GenCommand) -> CliResult<Report> {
    let join = |xs: &[String]| xs.join(";");
    let (instance, out, params): (GeneratedInstance, OutArg, Vec<(&str, String)>) = match command {
        GenCommand::Partition { set, out } => {
            let text = set.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            (gen_partition(&set)?, out, vec![("set", text)])
        }
        GenCommand::Knapsack {
            weights,
            prices,
            capacity,
            target,
            out,
        } => {
            let list = |xs: &[i64]| xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let params = vec![
                ("weights", list(&weights)),
                ("prices", list(&prices)),
                ("capacity", capacity.to_string()),
                ("target", target.to_string()),
            ];
            (
                gen_knapsack_bicriteria(&weights, &prices, capacity, target)?,
                out,
                params,
            )
        }
        GenCommand::Random {
            layers,
            width,
            edge_prob,
            w_max,
            two_weights,
            seed,
            out,
        } => {
            let prob = decimal("edge-prob", &edge_prob)?;
            let params = vec![
                ("layers", layers.to_string()),
                ("width", width.to_string()),
                ("edge_prob", render(&prob)),
                ("w_max", w_max.to_string()),
                ("two_weights", two_weights.to_string()),
                ("seed", seed.to_string()),
            ];
            let p = LayeredParams {
                layers,
                width,
                edge_prob: prob,
                w_max,
                two_weights,
                seed,
            };
            (gen_random_layered(&p)?, out, params)
        }
        GenCommand::Poly { factors, out } => {
            let parsed = factors
                .iter()
                .map(|f| {
                    parse_factor(f)
                        .map_err(|_| CliError::Usage(format!("--factor: cannot parse {f:?}")))
                })
                .collect::<CliResult<Vec<_>>>()?;
            (
                gen_poly_product(&parsed)?,
                out,
                vec![("factors", join(&factors))],
            )
        }
    };
    let graph_json = graph_to_json(&instance.dag)?;
    let queries = instance.queries_doc()?;
    let queries_json = serde_json::to_string_pretty(&queries).expect("serialisable");
    let result = match &out.out {
        Some(path) => {
            let sidecar = sidecar_path(path);
            fs::write(path, format!("{graph_json}\n")).map_err(|e| io_error(path, e))?;
            fs::write(&sidecar, format!("{queries_json}\n")).map_err(|e| io_error(&sidecar, e))?;
            json!({
                "graph_path": path.display().to_string(),
                "queries_path": sidecar.display().to_string(),
                "queries": queries,
            })
        }
        None => json!({ "graph": instance.graph_doc()?, "queries": queries }),
    };
    let mut report = Report::new(Some(digest(format!("{graph_json}\n").as_bytes())), result);
    for (k, v) in params {
        report = report.param(k, v);
    }
    if let Some(path) = &out.out {
        report = report.param("out", path.display());
    }
    Ok(report)
}

/// `<out>.queries.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".queries.json");
    PathBuf::from(name)
}

fn validate(arg: &GraphArg) -> CliResult<Report> {
    let (dag, d) = load(arg)?;
    let pruned = dag.prune_to_st();
    let shortest = dag.shortest_path_length(Instance::First)?;
    let result = json!({
        "vertices": dag.vertex_count().to_string(),
        "edges": dag.edge_count().to_string(),
        "source": dag.source().to_string(),
        "sink": dag.sink().to_string(),
        "pruned_vertices": pruned.vertex_count().to_string(),
        "pruned_edges": pruned.edge_count().to_string(),
        "total_paths": dag.total_path_count().to_string(),
        "shortest_length": render_extended(&shortest),
        "second_weights": dag.has_second_weights(),
        "integer_weights": dag.has_integer_weights(),
    });
    let mut report = Report::new(Some(d), result).param("graph", arg.graph.display());
    if !dag.is_reachable() {
        report
            .warnings
            .push("the sink is not reachable from the source".into());
    }
    Ok(report)
}

/// Random layered graphs small enough to enumerate; every query is checked
/// against the exact count.
fn selftest(args: &SelftestArgs) -> CliResult<Report> {
    let eps = positive("epsilon", &args.epsilon)?;
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut violations = Vec::new();
    for i in 0..args.instances {
        let seed = args.seed.wrapping_add(i);
        let params = LayeredParams {
            layers: 2 + (seed % 4) as usize,
            width: 1 + (seed / 4 % 3) as usize,
            edge_prob: BigRational::new(BigInt::one(), BigInt::from(2)),
            w_max: 9,
            two_weights: false,
            seed,
        };
        let instance = match gen_random_layered(&params) {
            Ok(g) => g,
            Err(pathcount::Error::DegenerateInstance) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let table = build_staircase(&instance.dag, &eps)?;
        for q in &instance.queries {
            if let Query::AtMost { max_length, .. } = q {
                let exact: BigUint = exact_count_at_most(&instance.dag, max_length, u64::MAX)?;
                checked += 1;
                if !table.count_at_most(max_length).brackets(&exact) {
                    violations.push(format!("seed {seed}, L = {}", render(max_length)));
                }
            }
        }
    }
    let mut report = Report::new(
        None,
        json!({
            "queries_checked": checked.to_string(),
            "instances_skipped": skipped.to_string(),
            "violations": violations,
        }),
    )
    .param("seed", args.seed)
    .param("instances", args.instances)
    .param("epsilon", render(&eps));
    if !report.result["violations"]
        .as_array()
        .is_none_or(Vec::is_empty)
    {
        report.code = EXIT_SELFTEST_FAILED;
    }
    Ok(report)
}
