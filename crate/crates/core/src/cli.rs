//! Command-line front end.
//!
//! Numbers are accepted as decimal literals, hexadecimal floats
//! (`0x1.8p+1`), `2^k`, `inf` or `nan`; positional numbers may start with
//! `-`, so options go before them. Exit status: 0 on success, 1 on a
//! domain error or a bound/condition violation, 2 on a usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algorithm::{Algorithm, Dim, KernelTable};
use crate::bench::{run_bench, BenchConfig, CallMode, Regime};
use crate::error::{Error, Result};
use crate::float::{Format, Real};
use crate::literal::{format_decimal, format_hex, parse};
use crate::oracle::sweep::{run_sweep, SweepConfig, SweepSummary};
use crate::params::{FpParams, Param};
use crate::rotation::rotation_general;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "normscale", version, about = "Overflow- and underflow-robust vector and quaternion normalization")]
pub struct Cli {
    /// Print bit-exact values as hexadecimal floats only
    #[arg(long, global = true)]
    pub hex: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize one vector and print its length and direction
    Normalize(NormalizeArgs),
    /// Check a parameter set against the correctness conditions
    ValidateParams(ValidateArgs),
    /// Run a seeded sweep and check every result against the error bounds
    VerifyBounds(VerifyArgs),
    /// Time the kernels with empty-loop subtraction
    Bench(BenchArgs),
    /// Print the rotation matrix of a quaternion (q1, q2, q3 vector part, q4 scalar)
    Rotate(RotateArgs),
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// Dimension: 2, 3 or 4 (quaternion)
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    pub dim: u8,
    /// Working precision: single or double
    #[arg(long, default_value = "double")]
    pub prec: Format,
    /// Algorithm: scaling, quotient, quotient_fast (3D only) or naive
    #[arg(long, default_value = "scaling")]
    pub algo: Algorithm,
    /// Components, decimal or hexadecimal float (after all options)
    #[arg(required = true, allow_hyphen_values = true)]
    pub components: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Built-in parameter set (single or double), or the format of FILE
    #[arg(long)]
    pub format: Option<Format>,
    /// JSON object with keys u, alpha, nu, omega, tau_min, tau_max,
    /// sigma_min, sigma_max; values are strings such as "2^-53" or decimals
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SummaryFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Dimension: 2, 3 or 4 (quaternion)
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    pub dim: u8,
    /// Working precision: single or double
    #[arg(long, default_value = "double")]
    pub prec: Format,
    /// Algorithm: scaling, quotient, quotient_fast (3D only) or naive
    #[arg(long, default_value = "scaling")]
    pub algo: Algorithm,
    /// Number of random inputs
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Input regime: all, normal, subnormal, huge, mixed or unit-ish
    #[arg(long, default_value = "mixed")]
    pub regime: Regime,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SummaryFormat::Json)]
    pub output: SummaryFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchOutput {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Number of experiments [default: 50, or 500 with --full-scale]
    #[arg(long)]
    pub experiments: Option<u32>,
    /// Calls per experiment [default: 100000, or 1000000 with --full-scale]
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Dimensions to time, comma separated
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    /// Precisions to time, comma separated
    #[arg(long, value_delimiter = ',', default_value = "single,double")]
    pub precisions: Vec<Format>,
    /// Algorithms to time, comma separated
    #[arg(long, value_delimiter = ',', default_value = "naive,quotient,quotient_fast,scaling")]
    pub algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Input regime: normal, subnormal, huge, mixed, unit-ish or all
    #[arg(long, default_value = "normal")]
    pub regime: Regime,
    /// How the loop calls the kernel: inline or indirect (opaque function pointer)
    #[arg(long, default_value = "inline")]
    pub call_mode: CallMode,
    /// 500 experiments of 10^6 calls (hours rather than seconds)
    #[arg(long)]
    pub full_scale: bool,
    #[arg(long, value_enum, default_value_t = BenchOutput::Table)]
    pub output: BenchOutput,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    /// Working precision: single or double
    #[arg(long, default_value = "double")]
    pub prec: Format,
    /// Also rotate this vector, given as x,y,z
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub apply: Option<Vec<String>>,
    /// Quaternion q1 q2 q3 q4 (after all options)
    #[arg(num_args = 4, required = true, allow_hyphen_values = true)]
    pub quaternion: Vec<String>,
}

/// Parse `args` (program name first), run the command and return the exit
/// status. Normal output goes to `out`, diagnostics to `err`.
pub fn dispatch<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Literal { .. } | Error::Usage(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Normalize(a) => normalize_cmd(a, cli.hex, out),
        Command::ValidateParams(a) => validate_cmd(a, cli.hex, out),
        Command::VerifyBounds(a) => verify_cmd(a, out),
        Command::Bench(a) => bench_cmd(a, out),
        Command::Rotate(a) => match a.prec {
            Format::Single => rotate_cmd::<f32>(a, cli.hex, out),
            Format::Double => rotate_cmd::<f64>(a, cli.hex, out),
        },
    }
}

fn parse_array<T: Real, const N: usize>(items: &[String]) -> Result<[T; N]> {
    if items.len() != N {
        return Err(Error::Usage(format!("expected {N} components, got {}", items.len())));
    }
    let mut v = [T::zero(); N];
    for (slot, s) in v.iter_mut().zip(items) {
        *slot = parse(s)?;
    }
    Ok(v)
}

fn show<T: Real>(x: T, hex: bool) -> String {
    if hex {
        format_hex(x)
    } else {
        format!("{} {}", format_decimal(x), format_hex(x))
    }
}

fn normalize_cmd(a: &NormalizeArgs, hex: bool, out: &mut dyn Write) -> Result<i32> {
    if !a.algo.supports(usize::from(a.dim)) {
        return Err(Error::Usage(format!("algorithm {} has no {}D variant", a.algo, a.dim)));
    }
    match (a.prec, a.dim) {
        (Format::Single, 2) => normalize_typed::<f32, 2>(a, hex, out),
        (Format::Single, 3) => normalize_typed::<f32, 3>(a, hex, out),
        (Format::Single, _) => normalize_typed::<f32, 4>(a, hex, out),
        (Format::Double, 2) => normalize_typed::<f64, 2>(a, hex, out),
        (Format::Double, 3) => normalize_typed::<f64, 3>(a, hex, out),
        (Format::Double, _) => normalize_typed::<f64, 4>(a, hex, out),
    }
}

fn normalize_typed<T: Real, const N: usize>(a: &NormalizeArgs, hex: bool, out: &mut dyn Write) -> Result<i32>
where
    Dim<N>: KernelTable<T, N>,
{
    let x: [T; N] = parse_array(&a.components)?;
    let kernel = a.algo.kernel::<T, N>().expect("support checked");
    let r = kernel(&FpParams::ieee(), x);
    writeln!(out, "length {}", show(r.length, hex))?;
    for (i, v) in r.unit.iter().enumerate() {
        writeln!(out, "unit[{i}] {}", show(*v, hex))?;
    }
    Ok(EXIT_OK)
}

fn validate_cmd(a: &ValidateArgs, hex: bool, out: &mut dyn Write) -> Result<i32> {
    let format = a.format.unwrap_or(Format::Double);
    match (&a.file, format) {
        (None, _) if a.format.is_none() => Err(Error::Usage("give --format or a parameter file".into())),
        (None, Format::Single) => report_params(&FpParams::<f32>::ieee(), hex, out),
        (None, Format::Double) => report_params(&FpParams::<f64>::ieee(), hex, out),
        (Some(path), f) => {
            let text = fs::read_to_string(path)?;
            let fields: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text)?;
            match f {
                Format::Single => report_params(&params_from_json::<f32>(&fields)?, hex, out),
                Format::Double => report_params(&params_from_json::<f64>(&fields)?, hex, out),
            }
        }
    }
}

fn params_from_json<T: Real>(fields: &BTreeMap<String, serde_json::Value>) -> Result<FpParams<T>> {
    if let Some(k) = fields.keys().find(|k| !Param::ALL.iter().any(|p| p.key() == k.as_str())) {
        return Err(Error::Config(format!("unknown parameter `{k}`")));
    }
    let mut p = FpParams::<T>::ieee();
    for which in Param::ALL {
        let text = match fields.get(which.key()) {
            Some(serde_json::Value::String(s)) => s.clone(),
            Some(serde_json::Value::Number(n)) => n.to_string(),
            Some(other) => return Err(Error::Config(format!("`{}` must be a string, got {other}", which.key()))),
            None => return Err(Error::Config(format!("missing parameter `{}`", which.key()))),
        };
        p = p.with(which, parse(&text)?);
    }
    Ok(p)
}

fn report_params<T: Real>(p: &FpParams<T>, hex: bool, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "format {}", T::FORMAT)?;
    for which in Param::ALL {
        writeln!(out, "{} {}", which.key(), show(p.get(which), hex))?;
    }
    let violated = p.validate_conditions();
    if violated.is_empty() {
        writeln!(out, "all conditions satisfied")?;
        return Ok(EXIT_OK);
    }
    for c in violated {
        writeln!(out, "violated {c}: {}", c.description())?;
    }
    Ok(EXIT_FAILURE)
}

/// Flat view of a sweep summary for CSV output.
#[derive(Serialize)]
struct SummaryRow<'a> {
    dim: usize,
    precision: &'a str,
    algorithm: &'a str,
    regime: &'a str,
    samples: u64,
    seed: u64,
    checked: u64,
    violations: u64,
    max_sin_phi_u: Option<f64>,
    max_dir_err_u: f64,
    max_rel_length_err_u: f64,
    max_underflow_length_err_alpha: f64,
    max_product_err_u: Option<f64>,
    worst_input: String,
    worst_violations: String,
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = SweepConfig {
        dim: usize::from(a.dim),
        format: a.prec,
        algorithm: a.algo,
        samples: a.samples,
        regime: a.regime,
        seed: a.seed,
    };
    if !a.algo.supports(cfg.dim) {
        return Err(Error::Usage(format!("algorithm {} has no {}D variant", a.algo, a.dim)));
    }
    let s = run_sweep(&cfg)?;
    match a.output {
        SummaryFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &s)?;
            writeln!(out)?;
        }
        SummaryFormat::Csv => write_summary_csv(&s, out)?,
    }
    Ok(if s.violations > 0 && a.algo == Algorithm::Scaling { EXIT_FAILURE } else { EXIT_OK })
}

fn write_summary_csv(s: &SweepSummary, out: &mut dyn Write) -> Result<()> {
    let (worst_input, worst_violations) = match &s.worst {
        Some(w) => (w.input.join(" "), w.violations.join(" ")),
        None => (String::new(), String::new()),
    };
    let mut w = csv::Writer::from_writer(out);
    w.serialize(SummaryRow {
        dim: s.config.dim,
        precision: s.config.format.name(),
        algorithm: s.config.algorithm.name(),
        regime: s.config.regime.name(),
        samples: s.config.samples,
        seed: s.config.seed,
        checked: s.checked,
        violations: s.violations,
        max_sin_phi_u: s.max_sin_phi_u,
        max_dir_err_u: s.max_dir_err_u,
        max_rel_length_err_u: s.max_rel_length_err_u,
        max_underflow_length_err_alpha: s.max_underflow_length_err_alpha,
        max_product_err_u: s.max_product_err_u,
        worst_input,
        worst_violations,
    })
    .map_err(|e| Error::Config(format!("csv output failed: {e}")))?;
    w.flush()?;
    Ok(())
}

fn bench_cmd(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let base = if a.full_scale { BenchConfig::full_scale() } else { BenchConfig::default() };
    let cfg = BenchConfig {
        experiments: a.experiments.unwrap_or(base.experiments),
        iterations_per_experiment: a.iterations.unwrap_or(base.iterations_per_experiment),
        dimensions: a.dims.clone(),
        precisions: a.precisions.clone(),
        algorithms: a.algorithms.clone(),
        seed: a.seed,
        regime: a.regime,
        call_mode: a.call_mode,
    };
    let report = run_bench(&cfg)?;
    match a.output {
        BenchOutput::Table => report.write_table(out)?,
        BenchOutput::Csv => report.write_csv(out)?,
        BenchOutput::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_OK)
}

fn rotate_cmd<T: Real>(a: &RotateArgs, hex: bool, out: &mut dyn Write) -> Result<i32> {
    let q: [T; 4] = parse_array(&a.quaternion)?;
    let r = rotation_general(&FpParams::ieee(), q)?;
    let cell = |v: T| if hex { format_hex(v) } else { format_decimal(v) };
    for row in &r.rows {
        writeln!(out, "{}", row.map(cell).join(" "))?;
    }
    if let Some(v) = &a.apply {
        let v: [T; 3] = parse_array(v)?;
        writeln!(out, "applied {}", r.apply(v).map(cell).join(" "))?;
    }
    Ok(EXIT_OK)
}
