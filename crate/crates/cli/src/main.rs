//! `submatch`: estimate min-weight matchings with outliers, earth mover's
//! distances and budgeted matching sizes from cost queries.

mod bench;
mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use submatch::generators::Generator;
use submatch::template::ParamMode;
use submatch::Backend;

use config::{Command, EmdInput, InstanceSpec, RunConfig, Sweep};
use run::Verdict;

#[derive(Parser)]
#[command(name = "submatch", version, about = "Sublinear-query matching and EMD estimation")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance in the core file format.
    Gen(GenArgs),
    /// Estimate the cost of a min-weight matching covering between αn and βn vertices.
    EstimateMwm(MwmArgs),
    /// Estimate the earth mover's distance between two distributions.
    EstimateEmd(EmdArgs),
    /// Estimate the size of the largest matching within a cost budget.
    Knapsack(KnapsackArgs),
    /// Sweep instance sizes and report query counts as CSV.
    BenchQueries(BenchArgs),
    /// Re-run a serialized configuration (or the `config` field of a report).
    Run {
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamsArg {
    Paper,
    Practical,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// Exponent of the sampled backend's per-call budget `n^(2-ε)`.
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, env = "SUBMATCH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "practical")]
    params: ParamsArg,
    /// Report stage timings (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Record full-scan invariants for every iteration.
    #[arg(long)]
    desk: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (text or binary core format).
    #[arg(long, conflicts_with = "generator")]
    input: Option<PathBuf>,
    /// `uniform`, `euclidean(d)`, `one-two-metric(p)` or `permutation`.
    #[arg(long)]
    generator: Option<String>,
    #[arg(long, short)]
    n: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    /// A generator name, or `file` to convert `--input`.
    #[arg(long)]
    generator: String,
    #[arg(long, short)]
    n: Option<usize>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, env = "SUBMATCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the binary format instead of text.
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MwmArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long = "T", default_value_t = 6)]
    iterations: u64,
    #[arg(long, default_value_t = 5)]
    k: u64,
    /// Compare against the exact baseline; exits 2 when the sandwich breaks.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EmdArgs {
    /// Distribution file for μ (`point mass` lines).
    #[arg(long, requires = "nu", conflicts_with = "mu_draws")]
    mu: Option<PathBuf>,
    #[arg(long)]
    nu: Option<PathBuf>,
    /// File of recorded draws from μ.
    #[arg(long, requires_all = ["nu_draws", "support"])]
    mu_draws: Option<PathBuf>,
    #[arg(long)]
    nu_draws: Option<PathBuf>,
    /// Bound on the support size of both distributions (with draw files).
    #[arg(long)]
    support: Option<usize>,
    /// Distance table, `rows cols` header then rows.
    #[arg(long)]
    metric: PathBuf,
    #[arg(long, default_value_t = 0.15)]
    gamma: f64,
    #[arg(long = "T", default_value_t = 20)]
    iterations: u64,
    #[arg(long, default_value_t = 5)]
    k: u64,
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct KnapsackArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    budget: f64,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long = "T", default_value_t = 20)]
    iterations: u64,
    #[arg(long, default_value_t = 5)]
    k: u64,
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "uniform")]
    generator: String,
    /// Comma-separated sizes; overrides the geometric grid.
    #[arg(long, value_delimiter = ',')]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 512)]
    n_min: usize,
    #[arg(long, default_value_t = 8192)]
    n_max: usize,
    /// Seeds per size.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Largest size compared against the exact baseline.
    #[arg(long, default_value_t = 400)]
    exact_cap: usize,
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long = "T", default_value_t = 6)]
    iterations: u64,
    #[arg(long, default_value_t = 3)]
    k: u64,
    #[command(flatten)]
    common: Common,
}

fn generator(name: &str) -> anyhow::Result<Generator> {
    Ok(name.parse::<Generator>()?)
}

fn instance(args: &InstanceArgs) -> anyhow::Result<InstanceSpec> {
    match (&args.input, &args.generator, args.n) {
        (Some(path), _, _) => Ok(InstanceSpec::File { path: path.clone() }),
        (None, Some(g), Some(n)) => Ok(InstanceSpec::Generator { generator: generator(g)?, n }),
        (None, Some(_), None) => anyhow::bail!("--generator needs --n"),
        (None, None, _) => anyhow::bail!("give --input or --generator with --n"),
    }
}

fn base(command: Command, common: &Common, gamma: f64, iterations: u64, k: u64) -> RunConfig {
    RunConfig {
        command,
        instance: None,
        emd: None,
        metric: None,
        sweep: None,
        alpha: 0.0,
        beta: 1.0,
        gamma,
        budget: None,
        backend: match common.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Sampled => Backend::Sampled { epsilon: common.epsilon },
        },
        seed: common.seed,
        params: match common.params {
            ParamsArg::Paper => ParamMode::Paper,
            ParamsArg::Practical => ParamMode::Practical,
        },
        iterations,
        k,
        exact: false,
        desk: common.desk,
        timings: common.timings,
        binary: false,
        out: common.out.clone(),
    }
}

fn geometric(lo: usize, hi: usize) -> Vec<usize> {
    std::iter::successors(Some(lo.max(2)), |&n| n.checked_mul(2)).take_while(|&n| n <= hi).collect()
}

fn config(cmd: Cmd) -> anyhow::Result<RunConfig> {
    Ok(match cmd {
        Cmd::Gen(a) => {
            let instance = if a.generator == "file" {
                let path = a.input.ok_or_else(|| anyhow::anyhow!("`file` needs --input"))?;
                InstanceSpec::File { path }
            } else {
                let n = a.n.ok_or_else(|| anyhow::anyhow!("--n is required"))?;
                InstanceSpec::Generator { generator: generator(&a.generator)?, n }
            };
            let common = Common {
                backend: BackendArg::Exact,
                epsilon: 0.3,
                seed: a.seed,
                params: ParamsArg::Practical,
                timings: false,
                desk: false,
                out: Some(a.out),
            };
            RunConfig { instance: Some(instance), binary: a.binary, ..base(Command::Gen, &common, 0.05, 6, 5) }
        }
        Cmd::EstimateMwm(a) => RunConfig {
            instance: Some(instance(&a.instance)?),
            alpha: a.alpha,
            beta: a.beta,
            exact: a.exact,
            ..base(Command::EstimateMwm, &a.common, a.gamma, a.iterations, a.k)
        },
        Cmd::EstimateEmd(a) => {
            let emd = match (a.mu, a.nu, a.mu_draws, a.nu_draws, a.support) {
                (Some(mu), Some(nu), None, None, _) => EmdInput::Distributions { mu, nu },
                (None, None, Some(mu), Some(nu), Some(support)) => EmdInput::Draws { mu, nu, support },
                _ => anyhow::bail!("give --mu and --nu, or --mu-draws, --nu-draws and --support"),
            };
            RunConfig {
                emd: Some(emd),
                metric: Some(a.metric),
                exact: a.exact,
                ..base(Command::EstimateEmd, &a.common, a.gamma, a.iterations, a.k)
            }
        }
        Cmd::Knapsack(a) => RunConfig {
            instance: Some(instance(&a.instance)?),
            budget: Some(a.budget),
            exact: a.exact,
            ..base(Command::Knapsack, &a.common, a.gamma, a.iterations, a.k)
        },
        Cmd::BenchQueries(a) => {
            let ns = if a.ns.is_empty() { geometric(a.n_min, a.n_max) } else { a.ns };
            RunConfig {
                instance: Some(InstanceSpec::Generator { generator: generator(&a.generator)?, n: 0 }),
                sweep: Some(Sweep { ns, seeds: a.seeds, exact_cap: a.exact_cap }),
                alpha: a.alpha,
                beta: a.beta,
                ..base(Command::BenchQueries, &a.common, a.gamma, a.iterations, a.k)
            }
        }
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(&config)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let inner = value.get("config").cloned().unwrap_or(value);
            serde_json::from_value(inner)?
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match config(cli.command).and_then(|cfg| run::execute(&cfg)) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::ContractViolation) => {
            eprintln!("contract violation: the estimate breaks its guarantee against the exact baseline");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
