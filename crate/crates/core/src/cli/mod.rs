//! Command-line front end shared by the `dephaser` binary.
//!
//! ```text
//! dephaser <params|sweep|opt|protocol> --config <path> [--out <path>]
//!          [--figure fe|se|ic] [--precision N] [--allow-invalid-kraus]
//! ```
//!
//! Exit codes: 0 success, 1 usage, config or I/O error, 2 numerical failure.
//! `DEPHASER_THREADS` caps the number of worker threads.

pub mod config;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::bath::{dephasing_params, DephasingParams};
use crate::channel::kraus_two_paper;
use crate::error::Error;
use crate::infometrics::{optimize_p, two_use_family_metrics, PqInput};
use crate::protocol::protocol_advantage;

pub use config::{ConfigError, Range, RunConfig, Source, Sweep};
pub use format::{format_g, CsvTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Dephasing parameters of a bath source.
    Params,
    /// Two-use metrics over a (g, gamma_mem, p) grid.
    Sweep,
    /// Optimal input weight p for each g.
    Opt,
    /// Coded versus uncoded entanglement fidelity.
    Protocol,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[default]
    Fe,
    Se,
    Ic,
}

#[derive(Debug, Parser)]
#[command(
    name = "dephaser",
    version,
    about = "Dephasing channel with inter-use memory"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Run configuration (INI).
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV; overrides [output] path. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metric placed first in sweep output.
    #[arg(long, value_enum, default_value_t = Figure::Fe)]
    pub figure: Figure,
    /// Significant digits; overrides [output] precision.
    #[arg(long, value_parser = parse_precision_arg)]
    pub precision: Option<usize>,
    /// Print Kraus weights even when some are negative.
    #[arg(long)]
    pub allow_invalid_kraus: bool,
}

fn parse_precision_arg(s: &str) -> Result<usize, String> {
    config::parse_precision(s)
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Io(String),
    Numerical(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e)
    }
}

/// Options that shape a command's output beyond the config file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub figure: Figure,
    pub allow_invalid_kraus: bool,
}

/// Parses arguments, runs the command and writes its CSV. Returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 1;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match run(&args, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "dephaser: {e}");
            e.exit_code()
        }
    }
}

pub fn run(args: &Args, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(p) = args.precision {
        cfg.precision = p;
    }
    let opts = RunOptions {
        figure: args.figure,
        allow_invalid_kraus: args.allow_invalid_kraus,
    };
    let csv = with_thread_cap(|| execute(args.command, &cfg, opts))?;
    match args.out.as_ref().or(cfg.output_path.as_ref()) {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

fn with_thread_cap<T: Send>(
    job: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let Ok(raw) = std::env::var("DEPHASER_THREADS") else {
        return job();
    };
    let threads = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "DEPHASER_THREADS='{raw}' is not a positive integer"
            ))
        })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(job)
}

/// Runs a command and returns the rendered CSV.
pub fn execute(command: Command, cfg: &RunConfig, opts: RunOptions) -> Result<String, CliError> {
    let table = match command {
        Command::Params => cmd_params(cfg, opts)?,
        Command::Sweep => cmd_sweep(cfg, opts)?,
        Command::Opt => cmd_opt(cfg)?,
        Command::Protocol => cmd_protocol(cfg)?,
    };
    Ok(table.render())
}

/// The `(g, gamma_mem)` points a command runs over, in grid order.
fn parameter_grid(
    cfg: &RunConfig,
    default_gamma: Option<f64>,
) -> Result<Vec<DephasingParams>, CliError> {
    match &cfg.source {
        Source::Bath { model, timing } => Ok(vec![dephasing_params(model, timing)?]),
        Source::Direct => {
            let g = cfg.sweep.g.ok_or_else(|| {
                CliError::Usage("direct source needs a 'g' range in [sweep]".into())
            })?;
            let gamma = match (cfg.sweep.gamma_mem, default_gamma) {
                (Some(r), _) => r,
                (None, Some(x)) => Range::single(x),
                (None, None) => {
                    return Err(CliError::Usage(
                        "direct source needs a 'gamma_mem' range in [sweep]".into(),
                    ))
                }
            };
            let mut out = Vec::with_capacity(g.count * gamma.count);
            for gv in g.values() {
                for cv in gamma.values() {
                    out.push(DephasingParams::from_factors(gv, cv)?);
                }
            }
            Ok(out)
        }
    }
}

fn gamma_cell(params: &DephasingParams, precision: usize) -> String {
    params
        .gamma_mem
        .map_or_else(|| "undefined".to_string(), |x| format_g(x, precision))
}

fn option_cell(x: Option<f64>, precision: usize) -> String {
    x.map_or_else(String::new, |x| format_g(x, precision))
}

pub fn cmd_params(cfg: &RunConfig, opts: RunOptions) -> Result<CsvTable, CliError> {
    if !matches!(cfg.source, Source::Bath { .. }) {
        return Err(CliError::Usage(
            "params command requires a bath source".into(),
        ));
    }
    let params = parameter_grid(cfg, None)?.remove(0);
    let n = cfg.precision;
    let set = kraus_two_paper(params.g, params.h_plus, params.h_minus)?;
    let mut table = CsvTable::new(&[
        "g",
        "gamma_mem",
        "h_plus",
        "h_minus",
        "i0",
        "i_tau",
        "kraus_valid",
        "w0",
        "w1",
        "w2",
        "w3",
        "w4",
        "w5",
    ]);
    let mut row = vec![
        format_g(params.g, n),
        gamma_cell(&params, n),
        format_g(params.h_plus, n),
        format_g(params.h_minus, n),
        option_cell(params.i0(), n),
        option_cell(params.i_tau(), n),
        set.is_valid().to_string(),
    ];
    let show = set.is_valid() || opts.allow_invalid_kraus;
    row.extend(
        set.weights()
            .into_iter()
            .map(|w| if show { format_g(w, n) } else { String::new() }),
    );
    table.push(row);
    Ok(table)
}

pub fn cmd_sweep(cfg: &RunConfig, opts: RunOptions) -> Result<CsvTable, CliError> {
    let p_range = cfg
        .sweep
        .p
        .ok_or_else(|| CliError::Usage("sweep command needs a 'p' range in [sweep]".into()))?;
    let grid = parameter_grid(cfg, None)?;
    let ps = p_range.values();
    let n = cfg.precision;
    let metrics = match opts.figure {
        Figure::Fe => ["fe", "se", "ic"],
        Figure::Se => ["se", "fe", "ic"],
        Figure::Ic => ["ic", "fe", "se"],
    };
    let mut header = vec!["g", "gamma_mem", "p"];
    header.extend(metrics);
    header.push("s_in");
    let points: Vec<(&DephasingParams, f64)> = grid
        .iter()
        .flat_map(|par| ps.iter().map(move |&p| (par, p)))
        .collect();
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(params, p)| -> Result<Vec<String>, CliError> {
            let m = two_use_family_metrics(PqInput::new(p)?, params);
            let mut row = vec![format_g(params.g, n), gamma_cell(params, n), format_g(p, n)];
            for name in metrics {
                let v = match name {
                    "fe" => m.fe,
                    "se" => m.se,
                    _ => m.ic,
                };
                row.push(format_g(v, n));
            }
            row.push(format_g(m.s_in, n));
            Ok(row)
        })
        .collect::<Result<_, _>>()?;
    let mut table = CsvTable::new(&header);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn cmd_opt(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    if let Some(r) = cfg.sweep.gamma_mem {
        if r.count != 1 {
            return Err(CliError::Usage(
                "opt command takes a single gamma_mem value".into(),
            ));
        }
    }
    let grid = parameter_grid(cfg, Some(1.0))?;
    let n = cfg.precision;
    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .map(|params| -> Result<Vec<String>, CliError> {
            let opt = optimize_p(params);
            let memoryless = optimize_p(&DephasingParams::from_factors(params.g, 0.0)?);
            Ok(vec![
                format_g(params.g, n),
                format_g(opt.p_opt, n),
                format_g(opt.ic_max, n),
                format_g(memoryless.ic_max, n),
                format_g(opt.fe, n),
                format_g(opt.se, n),
                format_g(opt.s_in, n),
            ])
        })
        .collect::<Result<_, _>>()?;
    let mut table = CsvTable::new(&["g", "p_opt", "ic_max", "ic_memoryless", "fe", "se", "s_in"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn cmd_protocol(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    let grid = parameter_grid(cfg, None)?;
    let n = cfg.precision;
    let rows: Vec<Vec<String>> = grid
        .par_iter()
        .map(|params| -> Result<Vec<String>, CliError> {
            let adv = protocol_advantage(params)?;
            Ok(vec![
                format_g(params.g, n),
                gamma_cell(params, n),
                format_g(adv.coded, n),
                format_g(adv.uncoded, n),
                adv.advantageous.to_string(),
            ])
        })
        .collect::<Result<_, _>>()?;
    let mut table = CsvTable::new(&["g", "gamma_mem", "coded", "uncoded", "advantageous"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}
