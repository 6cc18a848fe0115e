//! Library side of the `seqmeas` command-line tool.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use seqmeas_core::{
    build_example, imprecise_collapse, imprecise_distribution, orthogonality_metric, ExampleId,
    ExampleParams, Mode, OutcomeDistribution, Scenario,
};

pub mod config;
pub mod output;
pub mod svg;

pub use config::{Overrides, ScenarioConfig};

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "SEQMEAS_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid config at {field}: {message}")]
    Config { field: String, message: String },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{context}: {source}")]
    Domain {
        context: String,
        #[source]
        source: seqmeas_core::Error,
    },

    #[error(transparent)]
    Core(#[from] seqmeas_core::Error),

    #[error("{0}")]
    Unsupported(String),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn domain(context: impl Into<String>, source: seqmeas_core::Error) -> Self {
        CliError::Domain {
            context: context.into(),
            source,
        }
    }

    /// 2 for usage and parse problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Read { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "seqmeas", version, about = "Sequential-measurement simulator")]
pub struct Cli {
    /// Worker threads for the measurement engine (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one of the built-in examples (3.1 to 3.5).
    Example {
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Measure the scenario described by a JSON config.
    Measure {
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Normalize input states instead of rejecting them.
        #[arg(long)]
        normalize: bool,
    },
    /// Imprecise measurement with the config's resolution matrix.
    Imprecise {
        config: PathBuf,
        /// Reported value whose post-measurement state is emitted.
        #[arg(long, allow_negative_numbers = true)]
        reported: f64,
        /// Write the report here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        normalize: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sample,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the distribution here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also draw the scenario as an SVG diagram (two dimensions only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Measurement mode; giving --samples implies `sample`.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunArgs {
    fn mode(&self) -> Option<Mode> {
        match (self.mode, self.samples) {
            (Some(ModeArg::Exact), _) => Some(Mode::Exact),
            (Some(ModeArg::Sample), _) | (None, Some(_)) => Some(Mode::Sampled),
            (None, None) => None,
        }
    }
}

/// Seed from [`SEED_ENV`], if set.
pub fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map(Some).map_err(|_| {
            CliError::Usage(format!(
                "{SEED_ENV} must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(None),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Example { id, run } => cmd_example(id, run),
        Command::Measure {
            config,
            run,
            normalize,
        } => cmd_measure(config, run, *normalize),
        Command::Imprecise {
            config,
            reported,
            output,
            normalize,
        } => cmd_imprecise(config, *reported, output.as_deref(), *normalize),
    }
}

pub fn cmd_example(id: &str, args: &RunArgs) -> Result<(), CliError> {
    let id: ExampleId = id.parse().map_err(|e: seqmeas_core::Error| {
        CliError::Usage(format!("{e}; expected one of 3.1, 3.2, 3.3, 3.4, 3.5"))
    })?;
    let seed = args.seed.or(env_seed()?).unwrap_or(0);
    let params = ExampleParams {
        seed,
        ..ExampleParams::default()
    };
    let mut scenario = build_example(id, &params)?;
    if let Some(mode) = args.mode() {
        scenario.options.mode = mode;
    }
    if let Some(samples) = args.samples {
        scenario.options.samples = samples;
    }
    emit_scenario(&scenario, args)
}

pub fn cmd_measure(path: &Path, args: &RunArgs, normalize: bool) -> Result<(), CliError> {
    let config = read_config(path)?;
    let overrides = Overrides {
        mode: args.mode(),
        samples: args.samples,
        seed: args.seed,
        fallback_seed: env_seed()?,
    };
    let scenario = config.scenario(normalize, &overrides)?;
    emit_scenario(&scenario, args)
}

pub fn cmd_imprecise(
    path: &Path,
    reported: f64,
    output: Option<&Path>,
    normalize: bool,
) -> Result<(), CliError> {
    let config = read_config(path)?;
    let psi = config.initial_state(normalize)?;
    let (basis, y) = config.imprecise_setup(normalize)?;
    let table = imprecise_distribution(&psi, &basis, &y)?;
    let post = imprecise_collapse(&psi, &basis, &y, reported)
        .map_err(|e| CliError::domain(format!("reported value {reported}"), e))?;
    let report = output::imprecise_json(&table, reported, &post, orthogonality_metric(&y));
    write_text(output, &output::to_json_string(&report))
}

fn read_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_json(&text)
}

/// Measures `scenario` and renders the distribution in the requested format.
pub fn render(
    scenario: &Scenario,
    format: Format,
) -> Result<(OutcomeDistribution, String), CliError> {
    let dist = scenario.run()?;
    let text = match format {
        Format::Json => output::to_json_string(&output::distribution_json(&dist)),
        Format::Csv => output::distribution_csv(&dist)?,
    };
    Ok((dist, text))
}

fn emit_scenario(scenario: &Scenario, args: &RunArgs) -> Result<(), CliError> {
    let (dist, text) = render(scenario, args.format)?;
    if let Some(path) = &args.svg {
        let drawing = svg::render_svg(
            &scenario.initial_state,
            &scenario.device,
            &dist,
            &svg::SvgStyle::default(),
        )?;
        write_text(Some(path), &drawing)?;
    }
    write_text(args.output.as_deref(), &text)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let result = match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    result.map_err(CliError::Output)
}
