//! Command-line surface. Exit codes: 0 ok, 1 validation failed, 2 bad arguments, 3 solver failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fracrefl_core::{Method, SolveConfig};
use serde::Serialize;

use crate::compute::{fresnel_row, parse_list, parse_theta_grid, reflect_row, sweep, ThetaSource, ROW_HEADER};
use crate::error::{Error, Result};
use crate::io::write_trace;
use crate::synth::{
    multiplier_symbol, reflect_with, ricker_wavelet, spectral_phase, spectral_slope, valid_band, SymbolConfig,
};
use crate::validate::{all_pass, run_validate, ValidateOptions};

#[derive(Debug, Parser)]
#[command(name = "fracrefl", version, about = "Reflection of plane waves by fractional-ramp interfaces")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one reflection coefficient.
    Reflect(ReflectArgs),
    /// Run the self-checks and print a JSON report.
    Validate(ValidateArgs),
    /// Evaluate a grid of (alpha, theta) pairs.
    Sweep(SweepArgs),
    /// Synthesize incident and reflected traces.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct ReflectArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Speed ratio below/above the interface, for the fresnel method.
    #[arg(long)]
    c_ratio: Option<f64>,
    #[arg(long)]
    method: String,
    /// Split point of the Volterra solver.
    #[arg(long, default_value_t = 1.0)]
    x0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    quick: bool,
    /// Add a profile whose kernel is not a contraction; the run must then fail.
    #[arg(long, hide = true)]
    inject_contraction_failure: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated alpha values.
    #[arg(long)]
    alpha_list: String,
    /// Log-spaced grid `lo:hi:n`.
    #[arg(long)]
    theta_grid: String,
    #[arg(long)]
    method: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    ell: f64,
    #[arg(long)]
    c0: f64,
    #[arg(long)]
    fpeak: f64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta: f64,
    #[arg(long, default_value = "asymptotic")]
    method: String,
    #[arg(long, default_value_t = 0.3)]
    theta_cap: f64,
    /// Upper theta of the band used for the slope fit.
    #[arg(long, default_value_t = 0.1)]
    theta_band: f64,
    /// Output prefix: writes PREFIX_incident.csv, PREFIX_reflected.csv and PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

fn method(name: &str) -> Result<Method> {
    name.parse::<Method>().map_err(|_| Error::Usage(format!("unknown method `{name}`")))
}

/// Writes `text` to `out` if given, else to `stdout`.
fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn reflect(a: ReflectArgs, stdout: &mut dyn Write) -> Result<()> {
    let m = method(&a.method)?;
    let row = if m == Method::Fresnel {
        let c = a.c_ratio.ok_or_else(|| Error::Usage("fresnel needs --c-ratio".into()))?;
        fresnel_row(c, a.eta.unwrap_or(0.0))?
    } else {
        let alpha = a.alpha.ok_or_else(|| Error::Usage("--alpha is required".into()))?;
        let source = match (a.theta, a.c0, a.ell, a.omega) {
            (Some(t), None, None, None) => ThetaSource::Direct(t),
            (None, Some(c0), Some(ell), Some(omega)) => ThetaSource::Physical { c0, ell, omega, eta: a.eta.unwrap_or(0.0) },
            _ => return Err(Error::Usage("give either --theta or all of --c0 --ell --omega".into())),
        };
        let cfg = SolveConfig { x0: a.x0, ..SolveConfig::default() };
        reflect_row(alpha, source, m, &cfg)?
    };
    emit(&a.out, stdout, &format!("{ROW_HEADER}\n{}\n", row.csv()))
}

fn sweep_cmd(a: SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let m = method(&a.method)?;
    let alphas = parse_list(&a.alpha_list)?;
    let thetas = parse_theta_grid(&a.theta_grid)?;
    let rows = sweep(&alphas, &thetas, m, &SolveConfig::default())?;
    let mut text = format!("{ROW_HEADER}\n");
    for r in rows {
        text.push_str(&r.csv());
        text.push('\n');
    }
    emit(&a.out, stdout, &text)
}

#[derive(Debug, Serialize)]
struct Sidecar {
    alpha: f64,
    method: &'static str,
    n_fft: usize,
    band_lo_hz: f64,
    band_hi_hz: f64,
    slope: f64,
    expected_slope: f64,
    mean_phase: f64,
    max_discarded_imag: f64,
}

fn synth(a: SynthArgs, stdout: &mut dyn Write) -> Result<()> {
    let m = method(&a.method)?;
    let cfg = SymbolConfig { theta_cap: a.theta_cap, ..SymbolConfig::default() };
    let incident = ricker_wavelet(a.fpeak, a.dt, a.n)?;
    let reflected = reflect_with(&incident, |f| multiplier_symbol(a.alpha, a.ell, a.c0, a.eta, f, m, &cfg))?;
    let band = valid_band(&incident, a.alpha, a.ell, a.c0, a.eta, a.theta_band)?;
    let side = Sidecar {
        alpha: a.alpha,
        method: m.name(),
        n_fft: incident.fft_len(),
        band_lo_hz: band[0],
        band_hi_hz: band[1],
        slope: spectral_slope(&incident, &reflected.trace, band)?,
        expected_slope: -a.alpha,
        mean_phase: spectral_phase(&incident, &reflected.trace, band)?,
        max_discarded_imag: reflected.max_imag,
    };
    let prefix = a.out.to_string_lossy().into_owned();
    write_trace(BufWriter::new(File::create(format!("{prefix}_incident.csv"))?), &incident)?;
    write_trace(BufWriter::new(File::create(format!("{prefix}_reflected.csv"))?), &reflected.trace)?;
    let json = serde_json::to_string_pretty(&side).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(format!("{prefix}.json"), format!("{json}\n"))?;
    writeln!(stdout, "{json}")?;
    Ok(())
}

fn validate(a: ValidateArgs, stdout: &mut dyn Write) -> Result<bool> {
    let report = run_validate(ValidateOptions { quick: a.quick, inject_contraction_failure: a.inject_contraction_failure });
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
    emit(&a.out, stdout, &format!("{json}\n"))?;
    Ok(all_pass(&report))
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Reflect(a) => reflect(a, stdout).map(|_| true),
        Command::Sweep(a) => sweep_cmd(a, stdout).map(|_| true),
        Command::Synth(a) => synth(a, stdout).map(|_| true),
        Command::Validate(a) => validate(a, stdout),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
