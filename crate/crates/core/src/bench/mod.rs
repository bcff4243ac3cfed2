//! Microbenchmark harness.
//!
//! Each experiment times a loop of calls through the dispatch table, then an
//! identical loop that skips the call, and charges the difference to the
//! kernel. Both loops fold their values into a checksum that ends up in the
//! report, so neither can be optimized away. Experiments for all selected
//! algorithms are interleaved, which lets the ratio rows be formed
//! experiment by experiment.
//!
//! By default each kernel is reached through the table with a constant key
//! and inlined into its loop, as at an ordinary call site. [`CallMode::Indirect`]
//! instead forces an opaque function-pointer call; on x86-64 that passes 3-
//! and 2-element arrays through memory and can stall the kernels' vector
//! loads on store forwarding, which inflates their times severalfold.
//!
//! Absolute times depend on the machine and compiler; only their ratios are
//! meant for comparison, and even those are reported, never asserted.

pub mod inputs;

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algorithm::{Algorithm, Dim, Kernel, KernelTable};
use crate::error::{Error, Result};
use crate::float::{Format, Real};
use crate::params::FpParams;

pub use inputs::{generate_inputs, InputGenerator, Regime};

/// Vectors per input batch; the timed loop cycles through the batch.
pub const BATCH_LEN: usize = 1024;

/// A timed loop must span at least this many clock ticks.
pub const MIN_TICKS: f64 = 100.0;

/// Per-call times below this (in ns) are clamped and flagged.
pub const FLOOR_NS: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchConfig {
    pub experiments: u32,
    pub iterations_per_experiment: u64,
    pub dimensions: Vec<usize>,
    pub precisions: Vec<Format>,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub regime: Regime,
    pub call_mode: CallMode,
}

/// How the timed loop reaches the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CallMode {
    /// Through the dispatch table with a constant key, letting the compiler
    /// inline the kernel into the loop as it would at an ordinary call site.
    Inline,
    /// Through an opaque function pointer. Arrays wider than two registers
    /// then travel through memory, and the kernels' vector loads can stall
    /// on store forwarding, so this mode partly measures the calling
    /// convention.
    Indirect,
}

impl CallMode {
    pub fn name(self) -> &'static str {
        match self {
            CallMode::Inline => "inline",
            CallMode::Indirect => "indirect",
        }
    }
}

impl std::str::FromStr for CallMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inline" => Ok(CallMode::Inline),
            "indirect" => Ok(CallMode::Indirect),
            _ => Err(format!("unknown call mode `{s}` (expected inline or indirect)")),
        }
    }
}

impl Default for BenchConfig {
    /// Desk scale: 50 experiments of 10^5 calls, every task, precision and
    /// algorithm, normal-range inputs.
    fn default() -> Self {
        BenchConfig {
            experiments: 50,
            iterations_per_experiment: 100_000,
            dimensions: vec![2, 3, 4],
            precisions: vec![Format::Single, Format::Double],
            algorithms: Algorithm::ALL.to_vec(),
            seed: 1,
            regime: Regime::Normal,
            call_mode: CallMode::Inline,
        }
    }
}

impl BenchConfig {
    /// 500 experiments of 10^6 calls each; takes hours over all tasks.
    pub fn full_scale() -> Self {
        BenchConfig { experiments: 500, iterations_per_experiment: 1_000_000, ..BenchConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiments == 0 || self.iterations_per_experiment == 0 {
            return Err(Error::Config("experiment and iteration counts must be positive".into()));
        }
        if self.dimensions.is_empty() || self.precisions.is_empty() || self.algorithms.is_empty() {
            return Err(Error::Config("select at least one dimension, precision and algorithm".into()));
        }
        if let Some(d) = self.dimensions.iter().find(|d| !(2..=4).contains(*d)) {
            return Err(Error::Config(format!("dimension must be 2, 3 or 4, got {d}")));
        }
        if !self.dimensions.iter().any(|&d| self.algorithms.iter().any(|a| a.supports(d))) {
            return Err(Error::Config("no selected algorithm supports a selected dimension".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClockSource {
    ProcessCpuTime,
    Monotonic,
}

/// Process CPU time where available, else a monotonic wall clock.
#[derive(Clone, Copy, Debug)]
pub struct Clock {
    source: ClockSource,
    origin: Instant,
}

impl Clock {
    pub fn detect() -> Clock {
        let source = if process_cpu_ns().is_some() { ClockSource::ProcessCpuTime } else { ClockSource::Monotonic };
        Clock { source, origin: Instant::now() }
    }

    pub fn monotonic() -> Clock {
        Clock { source: ClockSource::Monotonic, origin: Instant::now() }
    }

    pub fn source(&self) -> ClockSource {
        self.source
    }

    pub fn now_ns(&self) -> u64 {
        match self.source {
            ClockSource::ProcessCpuTime => process_cpu_ns().unwrap_or(0),
            ClockSource::Monotonic => self.origin.elapsed().as_nanos() as u64,
        }
    }

    /// Smallest observed nonzero step of the clock, in ns.
    pub fn granularity_ns(&self) -> u64 {
        (0..8)
            .map(|_| {
                let t0 = self.now_ns();
                let mut t1 = self.now_ns();
                while t1 == t0 {
                    t1 = self.now_ns();
                }
                t1 - t0
            })
            .min()
            .unwrap_or(1)
    }
}

#[cfg(unix)]
fn process_cpu_ns() -> Option<u64> {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid, writable timespec.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
    (rc == 0).then(|| ts.tv_sec as u64 * 1_000_000_000 + ts.tv_nsec as u64)
}

#[cfg(not(unix))]
fn process_cpu_ns() -> Option<u64> {
    None
}

/// Pin the process to the CPU it is running on; returns that CPU.
#[cfg(target_os = "linux")]
fn pin_current_cpu() -> Option<usize> {
    // SAFETY: plain libc calls on a zero-initialised cpu_set_t we own.
    unsafe {
        let cpu = libc::sched_getcpu();
        if cpu < 0 {
            return None;
        }
        let mut set: libc::cpu_set_t = std::mem::zeroed();
        libc::CPU_SET(cpu as usize, &mut set);
        (libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set) == 0).then_some(cpu as usize)
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_current_cpu() -> Option<usize> {
    None
}

/// Error unless a loop of `elapsed_ns` spans [`MIN_TICKS`] clock steps;
/// the message suggests an iteration count that would.
pub fn check_resolution(granularity_ns: u64, elapsed_ns: u64, iterations: u64) -> Result<()> {
    let needed = MIN_TICKS * granularity_ns as f64;
    if elapsed_ns as f64 >= needed {
        return Ok(());
    }
    let per_iter = elapsed_ns.max(1) as f64 / iterations as f64;
    let suggested = (needed / per_iter).ceil() as u64;
    Err(Error::Config(format!(
        "clock step of {granularity_ns} ns is too coarse for {iterations} iterations \
         (loop took {elapsed_ns} ns); use at least {suggested} iterations per experiment"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub clock_source: ClockSource,
    pub clock_granularity_ns: u64,
    pub pinned_cpu: Option<usize>,
    pub build_flags: String,
    pub build_flags_sha256: String,
    /// Fold of every value produced in the timed loops.
    pub checksum: String,
}

/// Mean and standard deviation of per-call time over all experiments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub task: &'static str,
    pub precision: Format,
    pub algorithm: Algorithm,
    pub mean_ns_per_call: f64,
    pub std_ns_per_call: f64,
    /// Some experiment's time fell to the floor after subtraction.
    pub clamped: bool,
}

/// `numerator / denominator` time, averaged experiment by experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ratio {
    /// "T3" (quotient over scaling) or "T4" (scaling over naive).
    pub table: &'static str,
    pub task: &'static str,
    pub precision: Format,
    pub numerator: Algorithm,
    pub denominator: Algorithm,
    pub mean: f64,
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub environment: Environment,
    pub timings: Vec<Timing>,
    pub ratios: Vec<Ratio>,
}

pub fn task_name(dim: usize) -> &'static str {
    match dim {
        2 => "vector2",
        3 => "vector3",
        _ => "quaternion",
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    run_bench_with_clock(config, Clock::detect())
}

pub fn run_bench_with_clock(config: &BenchConfig, clock: Clock) -> Result<BenchReport> {
    config.validate()?;
    let pinned_cpu = pin_current_cpu();
    let granularity = clock.granularity_ns();
    let mut checksum = 0u64;
    let mut timings = Vec::new();
    let mut ratios = Vec::new();

    for &format in &config.precisions {
        for &dim in &config.dimensions {
            let algos: Vec<Algorithm> = config.algorithms.iter().copied().filter(|a| a.supports(dim)).collect();
            if algos.is_empty() {
                continue;
            }
            let per_call = match (format, dim) {
                (Format::Single, 2) => time_task::<f32, 2>(config, &algos, clock, granularity, &mut checksum)?,
                (Format::Single, 3) => time_task::<f32, 3>(config, &algos, clock, granularity, &mut checksum)?,
                (Format::Single, _) => time_task::<f32, 4>(config, &algos, clock, granularity, &mut checksum)?,
                (Format::Double, 2) => time_task::<f64, 2>(config, &algos, clock, granularity, &mut checksum)?,
                (Format::Double, 3) => time_task::<f64, 3>(config, &algos, clock, granularity, &mut checksum)?,
                (Format::Double, _) => time_task::<f64, 4>(config, &algos, clock, granularity, &mut checksum)?,
            };
            let task = task_name(dim);
            for (algorithm, (samples, clamped)) in algos.iter().zip(&per_call) {
                let (mean, std) = mean_std(samples);
                timings.push(Timing {
                    task,
                    precision: format,
                    algorithm: *algorithm,
                    mean_ns_per_call: mean,
                    std_ns_per_call: std,
                    clamped: *clamped,
                });
            }
            let find = |a: Algorithm| algos.iter().position(|&b| b == a).map(|i| &per_call[i].0);
            let pairs = [
                ("T3", Algorithm::Quotient, Algorithm::Scaling),
                ("T3", Algorithm::QuotientFast, Algorithm::Scaling),
                ("T4", Algorithm::Scaling, Algorithm::Naive),
            ];
            for (table, num, den) in pairs {
                if let (Some(n), Some(d)) = (find(num), find(den)) {
                    let r: Vec<f64> = n.iter().zip(d).map(|(a, b)| a / b).collect();
                    let (mean, std) = mean_std(&r);
                    ratios.push(Ratio { table, task, precision: format, numerator: num, denominator: den, mean, std });
                }
            }
        }
    }

    let build_flags = env!("NORMSCALE_BUILD_FLAGS").to_string();
    let build_flags_sha256 = Sha256::digest(build_flags.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    Ok(BenchReport {
        config: config.clone(),
        environment: Environment {
            clock_source: clock.source(),
            clock_granularity_ns: granularity,
            pinned_cpu,
            build_flags,
            build_flags_sha256,
            checksum: format!("{checksum:016x}"),
        },
        timings,
        ratios,
    })
}

/// Per-experiment ns/call for each algorithm, plus whether any was clamped.
fn time_task<T: Real, const N: usize>(
    config: &BenchConfig,
    algos: &[Algorithm],
    clock: Clock,
    granularity: u64,
    checksum: &mut u64,
) -> Result<Vec<(Vec<f64>, bool)>>
where
    Dim<N>: KernelTable<T, N>,
{
    let p = FpParams::<T>::ieee();
    let batch: Vec<[T; N]> = generate_inputs(config.regime, BATCH_LEN, config.seed);
    let iters = config.iterations_per_experiment;
    let (elapsed, _) = empty_loop(&batch, iters, clock);
    check_resolution(granularity, elapsed, iters)?;

    let floor = FLOOR_NS.max(granularity as f64 / iters as f64);
    let mut out: Vec<(Vec<f64>, bool)> = vec![(Vec::with_capacity(config.experiments as usize), false); algos.len()];
    for _ in 0..config.experiments {
        for (k, &algo) in algos.iter().enumerate() {
            let (t_call, c1) = timed_calls(config.call_mode, algo, &p, &batch, iters, clock);
            let (t_empty, c2) = empty_loop(&batch, iters, clock);
            *checksum = checksum.rotate_left(7) ^ c1 ^ c2;
            let mut ns = (t_call as f64 - t_empty as f64) / iters as f64;
            if ns < floor {
                ns = floor;
                out[k].1 = true;
            }
            out[k].0.push(ns);
        }
    }
    Ok(out)
}

/// Time one algorithm in the requested call mode.
fn timed_calls<T: Real, const N: usize>(
    mode: CallMode,
    algo: Algorithm,
    p: &FpParams<T>,
    batch: &[[T; N]],
    iters: u64,
    clock: Clock,
) -> (u64, u64)
where
    Dim<N>: KernelTable<T, N>,
{
    match mode {
        CallMode::Inline => inline_loop(algo, p, batch, iters, clock),
        CallMode::Indirect => {
            let kernel = algo.kernel::<T, N>().expect("algorithms were filtered by dimension");
            indirect_loop(kernel, p, batch, iters, clock)
        }
    }
}

/// Each arm looks the kernel up in the dispatch table with a constant key,
/// so the optimizer resolves the pointer and may inline the kernel.
#[inline(never)]
fn inline_loop<T: Real, const N: usize>(
    algo: Algorithm,
    p: &FpParams<T>,
    batch: &[[T; N]],
    iters: u64,
    clock: Clock,
) -> (u64, u64)
where
    Dim<N>: KernelTable<T, N>,
{
    let table = |a: Algorithm| Dim::<N>::kernel(a).expect("algorithms were filtered by dimension");
    match algo {
        Algorithm::Naive => call_loop(table(Algorithm::Naive), p, batch, iters, clock),
        Algorithm::Quotient => call_loop(table(Algorithm::Quotient), p, batch, iters, clock),
        Algorithm::QuotientFast => call_loop(table(Algorithm::QuotientFast), p, batch, iters, clock),
        Algorithm::Scaling => call_loop(table(Algorithm::Scaling), p, batch, iters, clock),
    }
}

/// The kernel pointer is hidden from the optimizer: every call is a real
/// indirect call with the platform calling convention.
#[inline(never)]
fn indirect_loop<T: Real, const N: usize>(
    kernel: Kernel<T, N>,
    p: &FpParams<T>,
    batch: &[[T; N]],
    iters: u64,
    clock: Clock,
) -> (u64, u64) {
    call_loop(black_box(kernel), p, batch, iters, clock)
}

#[inline(always)]
fn call_loop<T: Real, const N: usize>(
    kernel: Kernel<T, N>,
    p: &FpParams<T>,
    batch: &[[T; N]],
    iters: u64,
    clock: Clock,
) -> (u64, u64) {
    let mask = batch.len() - 1;
    let mut acc = 0u64;
    let t0 = clock.now_ns();
    for i in 0..iters as usize {
        let x = batch[black_box(i) & mask];
        let o = kernel(p, x);
        acc = acc.wrapping_add(o.length.to_raw() ^ o.unit[0].to_raw());
    }
    let t1 = clock.now_ns();
    (t1 - t0, black_box(acc))
}

#[inline(never)]
fn empty_loop<T: Real, const N: usize>(batch: &[[T; N]], iters: u64, clock: Clock) -> (u64, u64) {
    let mask = batch.len() - 1;
    let mut acc = 0u64;
    let t0 = clock.now_ns();
    for i in 0..iters as usize {
        let x = batch[black_box(i) & mask];
        acc = acc.wrapping_add(x[0].to_raw() ^ x[N - 1].to_raw());
    }
    let t1 = clock.now_ns();
    (t1 - t0, black_box(acc))
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    row: &'a str,
    task: &'a str,
    precision: &'a str,
    algorithm: String,
    mean_ns_per_call: Option<f64>,
    std_ns_per_call: Option<f64>,
    ratio_mean: Option<f64>,
    ratio_std: Option<f64>,
    clamped: Option<bool>,
}

impl BenchReport {
    /// One `time` row per timing, then one `T3`/`T4` row per ratio, whose
    /// `algorithm` column reads `numerator/denominator`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for t in &self.timings {
            out.serialize(CsvRow {
                row: "time",
                task: t.task,
                precision: t.precision.name(),
                algorithm: t.algorithm.name().to_string(),
                mean_ns_per_call: Some(t.mean_ns_per_call),
                std_ns_per_call: Some(t.std_ns_per_call),
                ratio_mean: None,
                ratio_std: None,
                clamped: Some(t.clamped),
            })
            .map_err(csv_err)?;
        }
        for r in &self.ratios {
            out.serialize(CsvRow {
                row: r.table,
                task: r.task,
                precision: r.precision.name(),
                algorithm: format!("{}/{}", r.numerator, r.denominator),
                mean_ns_per_call: None,
                std_ns_per_call: None,
                ratio_mean: Some(r.mean),
                ratio_std: Some(r.std),
                clamped: None,
            })
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_table<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{:<11} {:<7} {:<14} {:>12} {:>10}", "task", "prec", "algorithm", "ns/call", "std")?;
        for t in &self.timings {
            writeln!(
                w,
                "{:<11} {:<7} {:<14} {:>12.3} {:>10.3}{}",
                t.task,
                t.precision.name(),
                t.algorithm.name(),
                t.mean_ns_per_call,
                t.std_ns_per_call,
                if t.clamped { "  (clamped)" } else { "" }
            )?;
        }
        for r in &self.ratios {
            writeln!(
                w,
                "{:<3} {:<11} {:<7} {:<24} {:>7.3} +- {:.3}",
                r.table,
                r.task,
                r.precision.name(),
                format!("{}/{}", r.numerator, r.denominator),
                r.mean,
                r.std
            )?;
        }
        let e = &self.environment;
        writeln!(
            w,
            "clock {:?} (step {} ns), calls {}, build {}, checksum {}",
            e.clock_source,
            e.clock_granularity_ns,
            self.config.call_mode.name(),
            &e.build_flags_sha256[..12],
            e.checksum
        )?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv output failed: {e}"))
}
