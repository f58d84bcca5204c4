use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sumset_core::discrete::DISCRETE_REGISTRY;
use sumset_core::expr::parse_expression;
use sumset_core::gaussian_network::{
    rho_sweep, run_bsg_scenario, run_weak_bsg_scenario, BsgScenarioReport,
};
use sumset_core::report::{InequalityReport, Summary};
use sumset_core::suite::{
    exit_code, reports_to_csv, run_suite, CheckSelection, DiscreteCorpusSpec, OutputFormat,
    SuiteConfig, DEFAULT_DISCRETE_COUNT, DEFAULT_DISCRETE_ORDER, DISCRETE_EXTRA_CHECKS,
    INVERSE_CHECK, SCHEMA_VERSION, TOOL_VERSION,
};
use sumset_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "sumset",
    version,
    about = "Entropy functionals and sumset inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the checks selected by a configuration.
    Check(SuiteArgs),
    /// Differential entropy of a signed sum of independent models.
    Entropy {
        /// For example "gaussian(0,1) + uniform(0,1) - exponential(1)".
        expression: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Report in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Gaussian BSG scenarios for one correlation or a sweep.
    Bsg {
        #[arg(
            long,
            allow_negative_numbers = true,
            conflicts_with = "sweep",
            required_unless_present = "sweep"
        )]
        rho: Option<f64>,
        /// `start:stop:step`, inclusive.
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact discrete checks over seeded pmfs on a cyclic group.
    Discrete {
        #[command(flatten)]
        suite: SuiteArgs,
        /// Group order of the random pmfs.
        #[arg(long)]
        order: Option<usize>,
        /// Number of random pmfs.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Stability bundle around the Gaussian equality case over the corpus.
    Inverse {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        corpus_size: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Grid cells per density (power of two).
    #[arg(long)]
    grid_count: Option<usize>,
    /// Half-width of the initial window in standard deviations.
    #[arg(long)]
    window_sigmas: Option<f64>,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Worker threads (default: number of processors).
    #[arg(long)]
    jobs: Option<usize>,
}

impl SuiteArgs {
    fn config(&self) -> Result<SuiteConfig> {
        let mut cfg = match &self.config {
            Some(path) => SuiteConfig::load(path)?,
            None => SuiteConfig::new(self.seed.unwrap_or(0)),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.grid.grid_count {
            cfg.numerics.grid_count = n;
        }
        if let Some(w) = self.grid.window_sigmas {
            cfg.numerics.window_sigmas = w;
        }
        if let Some(f) = &self.out.format {
            cfg.output.format = f.parse()?;
        }
        if let Some(p) = &self.out.out {
            cfg.output.path = Some(p.display().to_string());
        }
        Ok(cfg)
    }
}

fn set_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

fn emit(text: &str, path: Option<&str>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn summary_line(s: &Summary) -> String {
    format!(
        "holds={} violated={} inconclusive={} skipped={}",
        s.holds, s.violated, s.inconclusive, s.skipped
    )
}

fn run_and_emit(cfg: SuiteConfig) -> Result<u8> {
    cfg.validate()?;
    let report = run_suite(&cfg)?;
    let text = match cfg.output.format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.to_csv()?,
    };
    emit(&text, cfg.output.path.as_deref())?;
    eprintln!("{}", summary_line(&report.summary));
    Ok(exit_code(&report.reports) as u8)
}

#[derive(Serialize)]
struct EntropyOutput<'a> {
    expression: String,
    value: f64,
    err: f64,
    unit: &'a str,
}

fn cmd_entropy(expression: &str, grid: &GridArgs, bits: bool, format: &str) -> Result<u8> {
    let expr = parse_expression(expression)?;
    let mut numerics = sumset_core::grid::Numerics::default();
    if let Some(n) = grid.grid_count {
        numerics.grid_count = n;
    }
    if let Some(w) = grid.window_sigmas {
        numerics.window_sigmas = w;
    }
    numerics.validate()?;
    let est = expr.entropy(&numerics)?;
    let (scale, unit) = if bits {
        (1.0 / std::f64::consts::LN_2, "bits")
    } else {
        (1.0, "nats")
    };
    let (value, err) = (est.value * scale, est.err * scale);
    match format {
        "text" => println!("{value:.6} ± {err:.1e} {unit}"),
        "json" => {
            let out = EntropyOutput {
                expression: expr.to_string(),
                value,
                err,
                unit,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&out).map_err(|e| Error::Io(e.to_string()))?
            );
        }
        other => {
            return Err(Error::Config(format!(
                "unknown format `{other}` (expected text or json)"
            )))
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BsgOutput {
    schema_version: u32,
    tool_version: &'static str,
    scenarios: Vec<BsgScenarioReport>,
    summary: Summary,
    reports: Vec<InequalityReport>,
}

fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: std::result::Result<Vec<f64>, _> =
        parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    match nums.as_deref() {
        Ok([a, b, step]) => rho_sweep(*a, *b, *step),
        _ => Err(Error::Config(format!(
            "sweep must be start:stop:step, got `{s}`"
        ))),
    }
}

fn cmd_bsg(rho: Option<f64>, sweep: Option<&str>, out: &OutArgs) -> Result<u8> {
    let rhos = match (rho, sweep) {
        (Some(r), None) if r.abs() < 1.0 => vec![r],
        (Some(r), None) => return Err(Error::Config(format!("rho must lie in (-1, 1), got {r}"))),
        (None, Some(s)) => parse_sweep(s)?,
        _ => {
            return Err(Error::Config(
                "give exactly one of --rho and --sweep".into(),
            ))
        }
    };
    let format: OutputFormat = out.format.as_deref().unwrap_or("json").parse()?;
    let mut scenarios = Vec::new();
    let mut reports = Vec::new();
    for &r in &rhos {
        let s = run_bsg_scenario(r)?;
        reports.extend(s.to_reports());
        reports.push(run_weak_bsg_scenario(r)?);
        scenarios.push(s);
    }
    let summary = Summary::tally(&reports);
    let text = match format {
        OutputFormat::Csv => reports_to_csv(&reports)?,
        OutputFormat::Json => {
            let out = BsgOutput {
                schema_version: SCHEMA_VERSION,
                tool_version: TOOL_VERSION,
                scenarios,
                summary,
                reports,
            };
            let mut t = serde_json::to_string_pretty(&out).map_err(|e| Error::Io(e.to_string()))?;
            t.push('\n');
            t
        }
    };
    emit(&text, out.out.as_ref().and_then(|p| p.to_str()))?;
    eprintln!("{} scenarios, {}", rhos.len(), summary_line(&summary));
    Ok(if summary.violated > 0 { 1 } else { 0 })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check(args) => {
            set_jobs(args.jobs)?;
            run_and_emit(args.config()?)
        }
        Command::Entropy {
            expression,
            grid,
            bits,
            format,
        } => cmd_entropy(&expression, &grid, bits, &format),
        Command::Bsg { rho, sweep, out } => cmd_bsg(rho, sweep.as_deref(), &out),
        Command::Discrete {
            suite,
            order,
            count,
        } => {
            set_jobs(suite.jobs)?;
            let mut cfg = suite.config()?;
            if order.is_some() || count.is_some() {
                let (o, c) = match cfg.discrete_corpus {
                    DiscreteCorpusSpec::Random { order, count } => (order, count),
                    DiscreteCorpusSpec::Pmfs(_) => (DEFAULT_DISCRETE_ORDER, DEFAULT_DISCRETE_COUNT),
                };
                cfg.discrete_corpus = DiscreteCorpusSpec::Random {
                    order: order.unwrap_or(o),
                    count: count.unwrap_or(c),
                };
            }
            if suite.config.is_none() {
                let ids = DISCRETE_REGISTRY
                    .iter()
                    .map(|d| d.id)
                    .chain(DISCRETE_EXTRA_CHECKS);
                cfg.checks = CheckSelection::Ids(ids.map(str::to_string).collect());
            }
            run_and_emit(cfg)
        }
        Command::Inverse { suite, corpus_size } => {
            set_jobs(suite.jobs)?;
            let mut cfg = suite.config()?;
            cfg.checks = CheckSelection::Ids(vec![INVERSE_CHECK.to_string()]);
            if let Some(n) = corpus_size {
                cfg.corpus_size = n;
            }
            run_and_emit(cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
