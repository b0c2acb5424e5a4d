//! `mcisel`: fit log-linear models, run MCI tests and learn graphical model structure from a
//! counts CSV.
//!
//! Exit codes: 0 success, 1 error, 2 non-convergence (`fit`) or warnings (`select`).

mod doc;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcisel::loglinear::ipf_fit;
use mcisel::mci::mci_test;
use mcisel::selection::{forward_select, DEFAULT_ALPHA};
use mcisel::{ContingencyTable, GeneratingClass, IpfSettings};

use doc::{FitDoc, MciDoc, Names, TraceDoc};

#[derive(Parser)]
#[command(name = "mcisel", version, about = "Graphical log-linear model selection by MCI forward search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model given in bracket notation, e.g. "[AC][ADE][BC][BE][F]".
    Fit {
        input: PathBuf,
        model: String,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Test whether a comma-separated factor set is mutually independent given the rest.
    Mci {
        input: PathBuf,
        set: String,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Run forward selection.
    Select {
        input: PathBuf,
        #[command(flatten)]
        opts: RunOptions,
        /// Write the selected graph in DOT format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Print the pending and accepted set lists after every transition.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Args, Clone)]
struct RunOptions {
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = IpfSettings::default().tol)]
    ipf_tol: f64,
    #[arg(long, default_value_t = IpfSettings::default().max_iter)]
    ipf_max_iter: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Resolved settings for one invocation.
struct RunConfig {
    input_path: PathBuf,
    alpha: f64,
    ipf: IpfSettings,
    output_format: Format,
    dot_path: Option<PathBuf>,
    trace: bool,
}

impl RunConfig {
    fn new(input_path: PathBuf, opts: RunOptions, dot_path: Option<PathBuf>, trace: bool) -> Result<Self> {
        if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
            bail!("--alpha must lie in (0, 1), got {}", opts.alpha);
        }
        if opts.ipf_tol.is_nan() || opts.ipf_tol <= 0.0 {
            bail!("--ipf-tol must be positive, got {}", opts.ipf_tol);
        }
        if opts.ipf_max_iter == 0 {
            bail!("--ipf-max-iter must be at least 1");
        }
        Ok(RunConfig {
            input_path,
            alpha: opts.alpha,
            ipf: IpfSettings { tol: opts.ipf_tol, max_iter: opts.ipf_max_iter },
            output_format: opts.format,
            dot_path,
            trace,
        })
    }

    fn load(&self) -> Result<ContingencyTable> {
        let text = std::fs::read_to_string(&self.input_path)
            .with_context(|| format!("reading {}", self.input_path.display()))?;
        ContingencyTable::parse_counts_csv(&text).with_context(|| format!("parsing {}", self.input_path.display()))
    }
}

fn emit_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_fit(config: &RunConfig, model: &str) -> Result<u8> {
    let table = config.load()?;
    let gc = GeneratingClass::parse(model, &table)?;
    let fit = ipf_fit(&table, &gc, config.ipf)?;
    let labels = table.abbreviations();
    match config.output_format {
        Format::Text => {
            let mut out = String::new();
            render::fit(&mut out, &fit, &labels);
            print!("{out}");
        }
        Format::Json => {
            let factors: Vec<String> = table.factor_names().into_iter().map(String::from).collect();
            emit_json(&FitDoc::new(&fit, &Names { factors: &factors, labels: &labels }))?;
        }
    }
    if !fit.converged {
        eprintln!("warning: IPF did not converge after {} sweeps", fit.iterations);
        return Ok(2);
    }
    Ok(0)
}

fn cmd_mci(config: &RunConfig, set_spec: &str) -> Result<u8> {
    let table = config.load()?;
    let names: Vec<&str> = set_spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        bail!("empty factor set");
    }
    let labels = table.abbreviations();
    let resolve = |n: &str| -> Result<usize> {
        table
            .factor_index(n)
            .or_else(|e| labels.iter().position(|l| l == n).ok_or(e))
            .map_err(Into::into)
    };
    let set = names.iter().map(|n| resolve(n)).collect::<Result<_>>()?;
    let rec = mci_test(&table, set, config.alpha, config.ipf)?;
    match config.output_format {
        Format::Text => {
            let mut out = String::new();
            render::mci(&mut out, &rec, &labels);
            print!("{out}");
        }
        Format::Json => {
            let factors: Vec<String> = table.factor_names().into_iter().map(String::from).collect();
            emit_json(&MciDoc::new(&rec, &Names { factors: &factors, labels: &labels }))?;
        }
    }
    Ok(0)
}

fn cmd_select(config: &RunConfig) -> Result<u8> {
    let table = config.load()?;
    let trace = forward_select(&table, config.alpha, config.ipf)?;
    match config.output_format {
        Format::Text => {
            let mut out = String::new();
            render::trace(&mut out, &trace, config.trace);
            print!("{out}");
        }
        Format::Json => emit_json(&TraceDoc::new(&trace))?,
    }
    if let Some(path) = &config.dot_path {
        std::fs::write(path, trace.final_state.current_graph.to_dot())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if trace.warnings.is_empty() { 0 } else { 2 })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Fit { input, model, opts } => cmd_fit(&RunConfig::new(input, opts, None, false)?, &model),
        Command::Mci { input, set, opts } => cmd_mci(&RunConfig::new(input, opts, None, false)?, &set),
        Command::Select { input, opts, dot, trace } => cmd_select(&RunConfig::new(input, opts, dot, trace)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
