use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use tvbounds::{
    input::apply_setting, parse_config, parse_prob_csv, parse_prob_list, render_sweep_csv,
    run_suite, sweep, BoundReport, Error, ProbVector, Scale, Settings, Suite, Variant,
};

const CONFIG_ENV: &str = "TVBOUNDS_CONFIG";

#[derive(Parser)]
#[command(name = "tvbounds", version, about = "Poisson approximation distance bounds")]
struct Cli {
    /// Optimiser budget file (`key = value` lines); falls back to $TVBOUNDS_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    budget: Budget,
    #[command(subcommand)]
    command: Command,
}

/// Flags that override the config file.
#[derive(Args)]
struct Budget {
    /// Grid points per optimiser axis.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true)]
    refine_starts: Option<usize>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Largest instance for which the exact distance is computed.
    #[arg(long, global = true)]
    exact_limit: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds for one instance.
    Bounds {
        /// Comma or space separated probabilities.
        #[arg(long, conflicts_with_all = ["probs_file", "lambda"])]
        probs: Option<String>,
        /// CSV file of probabilities.
        #[arg(long, conflicts_with = "lambda")]
        probs_file: Option<PathBuf>,
        /// Mean of `n` equal probabilities; needs `--n`.
        #[arg(long, requires = "n")]
        lambda: Option<f64>,
        #[arg(long, requires = "lambda")]
        n: Option<usize>,
        /// Skip the numerical optimisation of the lower-bound coefficient.
        #[arg(long)]
        no_k1: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficient ratios over a grid of means, as CSV.
    Sweep {
        #[arg(long)]
        lambda_min: f64,
        #[arg(long)]
        lambda_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, value_enum, default_value_t = ScaleArg::Log)]
        scale: ScaleArg,
        /// Comma separated subset of three,common,closed.
        #[arg(long, value_delimiter = ',', default_value = "three,common,closed")]
        variants: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Log,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Stein,
    Sandwich,
    Ordering,
    Limits,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Stein => Suite::Stein,
            SuiteArg::Sandwich => Suite::Sandwich,
            SuiteArg::Ordering => Suite::Ordering,
            SuiteArg::Limits => Suite::Limits,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn load_settings(cli: &Cli) -> Result<Settings, CliError> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut settings = match path {
        Some(p) => {
            debug!("reading config {}", p.display());
            parse_config(&read_file(&p)?, Settings::default())?
        }
        None => Settings::default(),
    };
    let b = &cli.budget;
    let overrides = [
        ("grid", b.grid),
        ("refine_starts", b.refine_starts),
        ("max_iter", b.max_iter),
        ("exact_limit", b.exact_limit),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            apply_setting(&mut settings, key, &v.to_string(), 0)?;
        }
    }
    Ok(settings)
}

fn instance(
    probs: Option<&str>,
    probs_file: Option<&Path>,
    lambda: Option<f64>,
    n: Option<usize>,
) -> Result<ProbVector, CliError> {
    match (probs, probs_file, lambda, n) {
        (Some(text), None, None, None) => Ok(parse_prob_list(text)?),
        (None, Some(path), None, None) => Ok(parse_prob_csv(&read_file(path)?)?),
        (None, None, Some(l), Some(n)) => Ok(ProbVector::uniform(l, n)?),
        _ => Err(CliError::Usage(
            "give exactly one of --probs, --probs-file or --lambda with --n".into(),
        )),
    }
}

fn parse_variants(names: &[String]) -> Result<Vec<Variant>, CliError> {
    let mut out = Vec::new();
    for name in names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let v: Variant = name
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown variant `{name}`")))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let settings = load_settings(&cli)?;
    match cli.command {
        Command::Bounds {
            probs,
            probs_file,
            lambda,
            n,
            no_k1,
            format,
            out,
        } => {
            let p = instance(probs.as_deref(), probs_file.as_deref(), lambda, n)?;
            info!("instance n = {}, lambda = {}", p.len(), p.lambda());
            let report = BoundReport::compute(&p, &settings, !no_k1)?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Table => report.to_table(),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Sweep {
            lambda_min,
            lambda_max,
            points,
            scale,
            variants,
            out,
        } => {
            let variants = parse_variants(&variants)?;
            let scale = match scale {
                ScaleArg::Log => Scale::Log,
                ScaleArg::Linear => Scale::Linear,
            };
            let rows = sweep(lambda_min, lambda_max, points, scale, &variants, &settings.optimizer)?;
            emit(out.as_deref(), &render_sweep_csv(&rows))?;
        }
        Command::Verify { suite, seed } => {
            let report = run_suite(suite.into(), seed, &settings.optimizer);
            let mut text = String::new();
            for check in &report.checks {
                text.push_str(&check.to_string());
                text.push('\n');
            }
            text.push_str(&format!(
                "{} passed, {} failed\n",
                report.passed(),
                report.failed()
            ));
            emit(None, &text)?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
