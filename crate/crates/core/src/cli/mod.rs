//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime or numerical failure, 2 on usage
//! errors (including out-of-range flag values).

mod commands;
mod field_file;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::fockspace::{FieldSpec, DEFAULT_TAIL_TOL};
use crate::model::Nonlinearity;
use crate::timeseries::TimeSeries;

pub use commands::{inversion_series, rabi_profile_series, rescaled_series, squeezing_series};
pub use field_file::{parse_field_file, read_field_file};
pub use verify::{run_suite, CheckOutcome, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "ijcm",
    version,
    about = "Multiphoton intensity-dependent Jaynes-Cummings dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Atomic inversion <sigma_z(T)>.
    Inversion(SeriesArgs),
    /// Squeezing factors S_N, Q_N with the commutator and uncertainty product.
    Squeezing(OrderedArgs),
    /// Rescaled squeezing factor V_N(T).
    Rescaled(RescaledArgs),
    /// Generalized Rabi frequencies Omega_n alongside P(n).
    RabiProfile(ProfileArgs),
    /// Oracle-equivalence and invariant suite at reduced scale.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    #[value(alias = "standard")]
    Sjcm,
    #[value(alias = "intensity")]
    Ijcm,
}

impl From<ModelKind> for Nonlinearity {
    fn from(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Sjcm => Nonlinearity::Standard,
            ModelKind::Ijcm => Nonlinearity::IntensityDependent,
        }
    }
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Photons exchanged per atomic transition.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Detuning in units of the coupling constant.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
    eta: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FieldArgs {
    /// Real coherent amplitude of the initial field.
    #[arg(long, value_parser = nonnegative)]
    alpha: Option<f64>,
    /// File of Fock amplitudes, one `n,re[,im]` line per component.
    #[arg(long, value_name = "PATH")]
    field: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    t_max: f64,
    /// Grid points including both ends; chosen from the fastest Rabi frequency when omitted.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    steps: Option<u64>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL, value_parser = tail_tol)]
    tail_tol: f64,
    /// CSV destination; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long, requires = "output")]
    emit_plot_script: bool,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct OrderedArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Squeezing order N.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,
}

#[derive(Debug, Args)]
struct RescaledArgs {
    #[command(flatten)]
    ordered: OrderedArgs,
    /// Add the single-photon inversion on the same grid and similarity metrics.
    #[arg(long)]
    compare_inversion: bool,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, default_value_t = 0)]
    n_min: usize,
    /// Defaults to the truncation cutoff of the field.
    #[arg(long)]
    n_max: Option<usize>,
    /// Divide Omega_n by this factor.
    #[arg(long, value_parser = nonzero)]
    rescale: Option<f64>,
    /// Extra detunings to tabulate next to the primary one.
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    compare_eta: Vec<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 4.0, value_parser = nonnegative)]
    alpha: f64,
    /// Relative perturbation of the shared Rabi spectrum (negative control).
    #[arg(long, hide = true, allow_negative_numbers = true, value_parser = finite)]
    tamper_gamma: Option<f64>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"))
}

fn finite(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn nonnegative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err("must be nonnegative".into())
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

fn nonzero(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v != 0.0 {
        Ok(v)
    } else {
        Err("division by zero".into())
    }
}

fn tail_tol(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie in (0, 1)".into())
    }
}

/// Validated settings shared by the figure commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Nonlinearity,
    pub m: u32,
    pub field: FieldSpec,
    /// Source file of a custom field, recorded in the metadata.
    pub field_path: Option<PathBuf>,
    pub eta: f64,
    pub order: usize,
    pub t_max: f64,
    pub steps: Option<usize>,
    pub tail_tol: f64,
}

fn run_config(
    model: &ModelArgs,
    field: &FieldArgs,
    grid: Option<&GridArgs>,
    out: &OutputArgs,
    order: usize,
) -> anyhow::Result<RunConfig> {
    let (spec, field_path) = match (&field.alpha, &field.field) {
        (Some(alpha), _) => (FieldSpec::Coherent { alpha: *alpha }, None),
        (None, Some(path)) => (read_field_file(path)?, Some(path.clone())),
        (None, None) => unreachable!("clap enforces the field group"),
    };
    Ok(RunConfig {
        model: model.model.into(),
        m: model.m,
        field: spec,
        field_path,
        eta: model.eta,
        order,
        t_max: grid.map_or(10.0, |g| g.t_max),
        steps: grid.and_then(|g| g.steps).map(|s| s as usize),
        tail_tol: out.tail_tol,
    })
}

fn emit(series: &TimeSeries, out: &OutputArgs) -> anyhow::Result<()> {
    match &out.output {
        Some(path) => {
            series.write_csv(path)?;
            if out.emit_plot_script {
                let script = path.with_extension("gp");
                fs::write(&script, plot_script(series, path))
                    .with_context(|| format!("writing {}", script.display()))?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            series
                .write_to(std::io::BufWriter::new(stdout.lock()))
                .context("writing to standard output")?;
        }
    }
    Ok(())
}

fn plot_script(series: &TimeSeries, csv: &Path) -> String {
    let name = csv.file_name().map_or_else(
        || csv.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let ncols = series.column_names().count();
    let mut s = String::new();
    s.push_str(&format!(
        "# gnuplot script for {name}; run from the directory holding it\n"
    ));
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{}'\n", series.axis()));
    if ncols == 0 {
        s.push_str(&format!("plot '{name}' using 1:1 with lines\n"));
    } else {
        s.push_str(&format!(
            "plot for [i=2:{}] '{name}' using 1:i with lines\n",
            ncols + 1
        ));
    }
    s
}

fn dispatch(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Inversion(a) => {
            let cfg = run_config(&a.model, &a.field, Some(&a.grid), &a.out, 1)?;
            emit(&inversion_series(&cfg)?, &a.out)?;
        }
        Command::Squeezing(a) => {
            let s = &a.series;
            let cfg = run_config(&s.model, &s.field, Some(&s.grid), &s.out, a.order as usize)?;
            emit(&squeezing_series(&cfg)?, &s.out)?;
        }
        Command::Rescaled(a) => {
            let s = &a.ordered.series;
            let order = a.ordered.order as usize;
            let cfg = run_config(&s.model, &s.field, Some(&s.grid), &s.out, order)?;
            emit(&rescaled_series(&cfg, a.compare_inversion)?, &s.out)?;
        }
        Command::RabiProfile(a) => {
            let cfg = run_config(&a.model, &a.field, None, &a.out, 1)?;
            let series = rabi_profile_series(&cfg, a.n_min, a.n_max, a.rescale, &a.compare_eta)?;
            emit(&series, &a.out)?;
        }
        Command::Verify(a) => {
            let outcomes = run_suite(&VerifyOptions {
                alpha: a.alpha,
                tamper_gamma: a.tamper_gamma,
            })?;
            let mut failed = 0;
            for o in &outcomes {
                println!(
                    "{} {}: {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.detail
                );
                if !o.passed {
                    failed += 1;
                }
            }
            println!("{} checks, {failed} failed", outcomes.len());
            return Ok(if failed == 0 { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
