//! Seeded bound sweeps: run a kernel over many generated inputs and
//! summarize what the oracle measured.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algorithm::{Algorithm, Dim, KernelTable};
use crate::bench::inputs::{InputGenerator, Regime};
use crate::error::{Error, Result};
use crate::float::{Format, Real};
use crate::literal::format_hex;
use crate::params::FpParams;

use super::{measure, Bound, LengthRegime};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub dim: usize,
    pub format: Format,
    pub algorithm: Algorithm,
    pub samples: u64,
    pub regime: Regime,
    pub seed: u64,
}

/// Input that produced the largest error (or the first violation).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstCase {
    pub input: Vec<String>,
    pub dir_err_u: f64,
    pub violations: Vec<&'static str>,
}

/// Aggregate of one sweep. Error magnitudes are in units of `u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    #[serde(flatten)]
    pub config: SweepConfig,
    /// Samples measured (zero vectors are skipped).
    pub checked: u64,
    /// Samples violating at least one bound.
    pub violations: u64,
    pub violations_by_bound: BTreeMap<&'static str, u64>,
    pub max_sin_phi_u: Option<f64>,
    pub max_dir_err_u: f64,
    /// Over samples in the normal length regime.
    pub max_rel_length_err_u: f64,
    /// Over samples near underflow, in units of `alpha`.
    pub max_underflow_length_err_alpha: f64,
    pub max_product_err_u: Option<f64>,
    pub worst: Option<WorstCase>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Run the sweep described by `cfg`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    match (cfg.format, cfg.dim) {
        (Format::Single, 2) => sweep_typed::<f32, 2>(cfg),
        (Format::Single, 3) => sweep_typed::<f32, 3>(cfg),
        (Format::Single, 4) => sweep_typed::<f32, 4>(cfg),
        (Format::Double, 2) => sweep_typed::<f64, 2>(cfg),
        (Format::Double, 3) => sweep_typed::<f64, 3>(cfg),
        (Format::Double, 4) => sweep_typed::<f64, 4>(cfg),
        (_, d) => Err(Error::Config(format!("dimension must be 2, 3 or 4, got {d}"))),
    }
}

fn sweep_typed<T: Real, const N: usize>(cfg: &SweepConfig) -> Result<SweepSummary>
where
    Dim<N>: KernelTable<T, N>,
{
    let kernel = cfg
        .algorithm
        .kernel::<T, N>()
        .ok_or_else(|| Error::Config(format!("algorithm {} has no {N}D variant", cfg.algorithm)))?;
    let p = FpParams::<T>::ieee();
    let u = p.unit_roundoff().to_f64();
    let alpha = p.alpha().to_f64();
    let mut gen = InputGenerator::<T>::new(cfg.regime, cfg.seed);

    let mut summary = SweepSummary {
        config: cfg.clone(),
        checked: 0,
        violations: 0,
        violations_by_bound: BTreeMap::new(),
        max_sin_phi_u: (N != 4).then_some(0.0),
        max_dir_err_u: 0.0,
        max_rel_length_err_u: 0.0,
        max_underflow_length_err_alpha: 0.0,
        max_product_err_u: (N == 4).then_some(0.0),
        worst: None,
    };
    let mut worst_is_violation = false;

    for _ in 0..cfg.samples {
        let x: [T; N] = gen.next_vector();
        if x.iter().all(|v| *v == T::zero()) {
            continue;
        }
        let out = kernel(&p, x);
        let rep = measure(&p, &x, &out)?;
        summary.checked += 1;

        let dir_u = rep.dir_err / u;
        summary.max_dir_err_u = summary.max_dir_err_u.max(dir_u);
        if let (Some(m), Some(s)) = (summary.max_sin_phi_u.as_mut(), rep.sin_phi) {
            *m = m.max(s / u);
        }
        if let (Some(m), Some(e)) = (summary.max_product_err_u.as_mut(), rep.product_err) {
            *m = m.max(e / u);
        }
        match rep.regime {
            LengthRegime::Normal => {
                summary.max_rel_length_err_u = summary.max_rel_length_err_u.max(rep.rel_length_err / u)
            }
            LengthRegime::NearUnderflow => {
                summary.max_underflow_length_err_alpha =
                    summary.max_underflow_length_err_alpha.max(rep.abs_length_err / alpha)
            }
            LengthRegime::Overflowing => {}
        }

        let violated = !rep.bound_violations.is_empty();
        if violated {
            summary.violations += 1;
            for b in &rep.bound_violations {
                *summary.violations_by_bound.entry(b.id()).or_default() += 1;
            }
        }
        let replace = match &summary.worst {
            None => true,
            Some(w) => (violated && !worst_is_violation) || (violated == worst_is_violation && dir_u > w.dir_err_u),
        };
        if replace {
            worst_is_violation = violated;
            summary.worst = Some(WorstCase {
                input: x.iter().map(|v| format_hex(*v)).collect(),
                dir_err_u: dir_u,
                violations: rep.bound_violations.iter().map(|b: &Bound| b.id()).collect(),
            });
        }
    }
    Ok(summary)
}
