//! Command-line front end: rate tables, exact laws, Monte Carlo runs and
//! the verification suite as reproducible batch commands.
//!
//! Identical configuration and seed produce byte-identical output, for any
//! worker count. Exit codes: 0 success, 1 verification failure, 2
//! configuration errors, 3 numeric failures (quadrature or root finding).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::measure::CharacteristicMeasure;
use crate::oracle::{exact_expected_times, exact_x_distribution};
use crate::rates::{RateTable, DEFAULT_N_MAX};
use crate::simulate::{monte_carlo, Job, SampleTable};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "lcoal",
    version,
    about = "Exchangeable coalescents with multiple collisions: rates, exact laws, samplers, verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Death-chain rate and jump tables as CSV
    Rates(RatesArgs),
    /// Exact law of the collision count for small n
    Exact(ExactArgs),
    /// Monte Carlo replicates of (X_n, tau_n)
    Simulate(SimulateArgs),
    /// Coupled coalescent-annihilator replicates
    Coupled(McArgs),
    /// Tagged-particle external-branch replicates
    Tagged(McArgs),
    /// Run the verification suite and emit a JSON report
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Sequential-construction sampler; works for any n
    Epoch,
    /// Embedded jump chain from a rate table; needs n within table range
    Chain,
}

/// Seed argument; `random` opts out of reproducibility.
#[derive(Debug, Clone, Copy)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl FromStr for SeedArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("random") {
            Ok(SeedArg::Random)
        } else {
            s.parse::<u64>()
                .map(SeedArg::Fixed)
                .map_err(|_| format!("seed must be a 64-bit integer or `random`, got `{s}`"))
        }
    }
}

impl SeedArg {
    fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Random => rand::random(),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output path; standard output when absent
    #[arg(long, env = "LCOAL_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    /// Measure spec: uniform | beta:THETA,B | logpareto:ALPHA |
    /// loglogpareto | tabulated:PATH
    #[arg(long)]
    pub measure: String,
    /// State(s) to tabulate, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub measure: String,
    /// Initial particle count (2 ..= 500)
    #[arg(long)]
    pub n: u64,
    /// Also emit the expected absorption times per state
    #[arg(long)]
    pub expected_times: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub mc: McArgs,
    /// Sampler engine; the chain engine requires n within the table cap
    #[arg(long, value_enum, default_value_t = Engine::Epoch)]
    pub engine: Engine,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub measure: String,
    /// Initial particle count(s), comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// Number of replicates per n
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    /// Run seed; `random` for a fresh one
    #[arg(long, default_value = "0")]
    pub seed: SeedArg,
    /// Worker threads for replicate-level parallelism
    #[arg(long, env = "LCOAL_WORKERS", default_value_t = 1)]
    pub workers: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Criterion indices to run (default: all twelve)
    #[arg(long, value_delimiter = ',')]
    pub criteria: Option<Vec<usize>>,
    #[arg(long, default_value = "0")]
    pub seed: SeedArg,
    #[arg(long, env = "LCOAL_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Output path; standard output when absent
    #[arg(long, env = "LCOAL_OUTPUT")]
    pub output: Option<PathBuf>,
}

/// The rendered result of a command, before it is written anywhere.
pub struct RunOutput {
    pub body: String,
    pub output: Option<PathBuf>,
    pub verification_failed: bool,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_measure(spec: &str) -> Result<CharacteristicMeasure> {
    CharacteristicMeasure::from_spec(spec)
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.to_string()))
    }
}

fn rates_body(args: &RatesArgs) -> Result<String> {
    let measure = parse_measure(&args.measure)?;
    require(!args.n.is_empty(), "at least one n is required")?;
    require(args.n.iter().all(|&n| n >= 2), "rates need n >= 2")?;
    let n_max = *args.n.iter().max().expect("non-empty");
    let table = RateTable::build(&measure, n_max)?;

    match args.out.format {
        OutputFormat::Csv => {
            let mut body = String::new();
            body.push_str("n,m,g_nm,p_nm\n");
            for &n in &args.n {
                let jump = table.jump_distribution(n);
                for m in 1..n {
                    let _ = writeln!(
                        body,
                        "{n},{m},{},{}",
                        fmt17(table.g_nm(n, m)),
                        fmt17(jump[(m - 1) as usize]),
                    );
                }
            }
            body.push('\n');
            body.push_str("n,g_n\n");
            for &n in &args.n {
                let _ = writeln!(body, "{n},{}", fmt17(table.g_total(n)));
            }
            Ok(body)
        }
        OutputFormat::Json => {
            let mut rates = Vec::new();
            for &n in &args.n {
                let jump = table.jump_distribution(n);
                for m in 1..n {
                    rates.push(serde_json::json!({
                        "n": n,
                        "m": m,
                        "g_nm": table.g_nm(n, m),
                        "p_nm": jump[(m - 1) as usize],
                    }));
                }
            }
            let totals: Vec<_> = args
                .n
                .iter()
                .map(|&n| serde_json::json!({ "n": n, "g_n": table.g_total(n) }))
                .collect();
            let doc = serde_json::json!({ "rates": rates, "totals": totals });
            Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
        }
    }
}

fn exact_body(args: &ExactArgs) -> Result<String> {
    let measure = parse_measure(&args.measure)?;
    require(args.n >= 2, "the exact law needs n >= 2")?;
    let table = RateTable::build(&measure, args.n)?;
    let dist = exact_x_distribution(&table, args.n)?;
    let times = if args.expected_times {
        Some(exact_expected_times(&table, args.n)?)
    } else {
        None
    };
    match args.out.format {
        OutputFormat::Csv => {
            let mut body = String::new();
            let _ = writeln!(body, "# mean={}, var={}", fmt17(dist.mean), fmt17(dist.variance));
            body.push_str("j,probability\n");
            for (j, p) in dist.support.iter().zip(&dist.pmf) {
                let _ = writeln!(body, "{j},{}", fmt17(*p));
            }
            if let Some(times) = times {
                body.push('\n');
                body.push_str("m,expected_tau\n");
                for (m, t) in times.iter().enumerate().skip(1) {
                    let _ = writeln!(body, "{m},{}", fmt17(*t));
                }
            }
            Ok(body)
        }
        OutputFormat::Json => {
            let pmf: Vec<_> = dist
                .support
                .iter()
                .zip(&dist.pmf)
                .map(|(j, p)| serde_json::json!({ "j": j, "probability": p }))
                .collect();
            let mut doc = serde_json::json!({
                "n": dist.n,
                "mean": dist.mean,
                "var": dist.variance,
                "pmf": pmf,
            });
            if let Some(times) = times {
                doc["expected_tau"] = serde_json::json!(times[1..].to_vec());
            }
            Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
        }
    }
}

fn table_body(table: &SampleTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => table.to_csv_string(),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&table.rows).expect("serializable") + "\n"
        }
    }
}

fn simulate_body(args: &SimulateArgs) -> Result<String> {
    let measure = parse_measure(&args.mc.measure)?;
    require(!args.mc.n.is_empty(), "at least one n is required")?;
    require(args.mc.replicates >= 1, "replicates must be at least 1")?;
    require(args.mc.n.iter().all(|&n| n >= 1), "simulation needs n >= 1")?;
    let seed = args.mc.seed.resolve();

    let chain_table = match args.engine {
        Engine::Epoch => None,
        Engine::Chain => {
            let n_max = *args.mc.n.iter().max().expect("non-empty");
            require(
                n_max <= DEFAULT_N_MAX,
                "the chain engine tabulates rates; n beyond 10000 routes to --engine epoch",
            )?;
            require(
                args.mc.n.iter().all(|&n| n >= 2),
                "the chain engine needs n >= 2",
            )?;
            Some(RateTable::build(&measure, n_max)?)
        }
    };

    let mut rows = Vec::new();
    for &n in &args.mc.n {
        let job = match &chain_table {
            None => Job::Epoch {
                measure: measure.clone(),
                n,
            },
            Some(table) => Job::Chain { table, n },
        };
        rows.extend(monte_carlo(&job, args.mc.replicates, seed, args.mc.workers)?.rows);
    }
    Ok(table_body(&SampleTable { rows }, args.mc.out.format))
}

fn coupled_body(args: &McArgs) -> Result<String> {
    let measure = parse_measure(&args.measure)?;
    require(args.replicates >= 1, "replicates must be at least 1")?;
    require(args.n.iter().all(|&n| n >= 2), "the coupling needs n >= 2")?;
    let seed = args.seed.resolve();
    let mut rows = Vec::new();
    for &n in &args.n {
        let job = Job::Coupled {
            measure: measure.clone(),
            n,
        };
        rows.extend(monte_carlo(&job, args.replicates, seed, args.workers)?.rows);
    }
    Ok(table_body(&SampleTable { rows }, args.out.format))
}

fn tagged_body(args: &McArgs) -> Result<String> {
    let measure = parse_measure(&args.measure)?;
    require(args.replicates >= 1, "replicates must be at least 1")?;
    require(args.n.iter().all(|&n| n >= 2), "tagging needs n >= 2")?;
    let seed = args.seed.resolve();
    let mut rows = Vec::new();
    for &n in &args.n {
        let job = Job::Tagged {
            measure: measure.clone(),
            n,
        };
        rows.extend(monte_carlo(&job, args.replicates, seed, args.workers)?.rows);
    }
    Ok(table_body(&SampleTable { rows }, args.out.format))
}

/// Render a command's output without writing it anywhere.
pub fn execute(cli: Cli) -> Result<RunOutput> {
    match cli.command {
        Command::Rates(args) => Ok(RunOutput {
            body: rates_body(&args)?,
            output: args.out.output,
            verification_failed: false,
        }),
        Command::Exact(args) => Ok(RunOutput {
            body: exact_body(&args)?,
            output: args.out.output,
            verification_failed: false,
        }),
        Command::Simulate(args) => Ok(RunOutput {
            body: simulate_body(&args)?,
            output: args.mc.out.output.clone(),
            verification_failed: false,
        }),
        Command::Coupled(args) => Ok(RunOutput {
            body: coupled_body(&args)?,
            output: args.out.output,
            verification_failed: false,
        }),
        Command::Tagged(args) => Ok(RunOutput {
            body: tagged_body(&args)?,
            output: args.out.output,
            verification_failed: false,
        }),
        Command::Verify(args) => {
            let indices = match &args.criteria {
                Some(list) if !list.is_empty() => list.clone(),
                _ => (1..=verify::CRITERIA.len()).collect(),
            };
            require(
                indices.iter().all(|&i| (1..=verify::CRITERIA.len()).contains(&i)),
                "criterion indices lie in 1..=12",
            )?;
            let report = verify::run_selected(&indices, args.seed.resolve(), args.workers)?;
            let body = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            Ok(RunOutput {
                body,
                output: args.output,
                verification_failed: !report.pass,
            })
        }
    }
}

/// Execute and write, returning the process exit code.
pub fn run(cli: Cli) -> Result<u8> {
    let out = execute(cli)?;
    match &out.output {
        Some(path) => std::fs::write(path, out.body.as_bytes())?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.body.as_bytes())?;
        }
    }
    Ok(if out.verification_failed { 1 } else { 0 })
}
