//! High-precision reference and error measurement.
//!
//! Inputs and outputs are binary floats, hence dyadic rationals, so every
//! accuracy bound the kernels promise can be decided exactly: each inequality
//! is rearranged until only sums and products of floats and exact constants
//! remain, then squared where a root appears. The square root and quotient
//! needed for the reported magnitudes are taken to [`ORACLE_BITS`] bits and
//! never feed a pass/fail decision.

pub mod exact;
mod reference;
pub mod sweep;
mod ulp;

use serde::Serialize;

pub use exact::Dyadic;
pub use reference::{ref_normalize, Reference};
pub use ulp::ulp_distance;

use crate::error::{Error, Result};
use crate::float::Real;
use crate::normalize::NormalizeOutcome;
use crate::params::FpParams;

/// Working precision of the reference, in significant bits.
pub const ORACLE_BITS: u32 = 256;

/// One accuracy guarantee that a [`measure`]d outcome can violate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// A unit component is infinite or NaN.
    UnitNotFinite,
    /// Nonzero input but zero length.
    LengthZero,
    /// Infinite or NaN length although `(1 + (1 + n/2) u) r <= omega`.
    LengthNotFinite,
    /// `|sin phi| <= 1.001 u` (2D and 3D).
    SinPhi,
    /// `|x_hat - x/r| <= (3.001 + n/2) u`.
    Direction,
    /// `|r_hat - r| <= (1 + n/2) r u`, applied when `2r >= 3 nu`.
    LengthRelative,
    /// `|r_hat - r| <= (1 + n/2) r u + alpha/2`, applied when `2r < 3 nu`.
    LengthNearUnderflow,
    /// `|q_i q_j - qbar_i qbar_j| <= (1.001 + 8.001 |qbar_i qbar_j|) u` (quaternions).
    Product,
}

impl Bound {
    pub fn id(self) -> &'static str {
        match self {
            Bound::UnitNotFinite => "unit_not_finite",
            Bound::LengthZero => "length_zero",
            Bound::LengthNotFinite => "length_not_finite",
            Bound::SinPhi => "sin_phi",
            Bound::Direction => "direction",
            Bound::LengthRelative => "length_relative",
            Bound::LengthNearUnderflow => "length_near_underflow",
            Bound::Product => "product",
        }
    }
}

/// Which length bound applies to an input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthRegime {
    /// `2r >= 3 nu`: pure relative bound.
    Normal,
    /// `2r < 3 nu`: relative bound plus `alpha/2`.
    NearUnderflow,
    /// `(1 + (1 + n/2) u) r > omega`: no length guarantee.
    Overflowing,
}

/// Oracle-measured errors of one normalization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    /// `|r_hat - r| / r`.
    pub rel_length_err: f64,
    /// `|r_hat - r|`.
    pub abs_length_err: f64,
    /// `|x_hat - x/r|`.
    pub dir_err: f64,
    /// `|sin phi|` between input and unit output; `None` for quaternions.
    pub sin_phi: Option<f64>,
    /// `max_ij |q_i q_j - qbar_i qbar_j|`; quaternions only.
    pub product_err: Option<f64>,
    pub regime: LengthRegime,
    pub bound_violations: Vec<Bound>,
}

impl ErrorReport {
    pub fn passed(&self) -> bool {
        self.bound_violations.is_empty()
    }
}

/// Exact `(3.001 + n/2) * 1000` and friends.
fn direction_coeff_milli(n: usize) -> i64 {
    3001 + 500 * n as i64
}

/// Measure `outcome` against the exact normalization of `x`.
///
/// `x` must be finite and nonzero. The bounds checked are those of the
/// scaling kernels for dimension `N` (the quaternion product bound when
/// `N == 4`, the angle bound otherwise).
pub fn measure<T: Real, const N: usize>(
    p: &FpParams<T>,
    x: &[T; N],
    outcome: &NormalizeOutcome<T, N>,
) -> Result<ErrorReport> {
    let xs: Vec<Dyadic> = x
        .iter()
        .map(|v| Dyadic::from_real(*v))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Domain("oracle input must be finite".into()))?;
    let sum_sq: Dyadic = xs.iter().map(Dyadic::square).sum();
    if sum_sq.is_zero() {
        return Err(Error::Domain("oracle input must be nonzero".into()));
    }
    let ex = |v: T| Dyadic::from_real(v).expect("finite parameter");
    let u = ex(p.unit_roundoff());
    let u2 = u.square();
    // 1 + n/2, exact.
    let len_coeff = Dyadic::from_int(2 + N as i64).scale_pow2(-1);
    let ku = &len_coeff * &u;
    let one = Dyadic::one();

    let regime = if (&one + &ku).square() * &sum_sq > ex(p.omega()).square() {
        LengthRegime::Overflowing
    } else if sum_sq.mul_int(4) >= ex(p.nu()).square().mul_int(9) {
        LengthRegime::Normal
    } else {
        LengthRegime::NearUnderflow
    };

    let r = sum_sq.sqrt(ORACLE_BITS);
    let mut violations = Vec::new();

    // Length.
    let (rel_length_err, abs_length_err) = match Dyadic::from_real(outcome.length) {
        None => {
            if regime != LengthRegime::Overflowing {
                violations.push(Bound::LengthNotFinite);
            }
            (f64::INFINITY, f64::INFINITY)
        }
        Some(len) => {
            if len.is_zero() {
                violations.push(Bound::LengthZero);
            }
            let slack = match regime {
                LengthRegime::NearUnderflow => ex(p.alpha()).scale_pow2(-1),
                _ => Dyadic::zero(),
            };
            let bound = match regime {
                LengthRegime::Normal => Some(Bound::LengthRelative),
                LengthRegime::NearUnderflow => Some(Bound::LengthNearUnderflow),
                LengthRegime::Overflowing => None,
            };
            if let Some(bound) = bound {
                if !length_within(&len, &sum_sq, &ku, &slack) {
                    violations.push(bound);
                }
            }
            let diff = (&len - &r).abs();
            (diff.ratio_f64(&r), diff.to_f64())
        }
    };

    // Direction.
    let unit: Option<Vec<Dyadic>> = outcome.unit.iter().map(|v| Dyadic::from_real(*v)).collect();
    let (dir_err, sin_phi, product_err) = match unit {
        None => {
            violations.push(Bound::UnitNotFinite);
            (f64::INFINITY, (N != 4).then_some(f64::INFINITY), (N == 4).then_some(f64::INFINITY))
        }
        Some(unit) => {
            let q: Dyadic = unit.iter().map(Dyadic::square).sum();
            let dot: Dyadic = unit.iter().zip(&xs).map(|(a, b)| a * b).sum();
            let c = direction_coeff_milli(N);
            // (3.001 + n/2)^2 u^2, scaled by 10^6.
            let lhs = (&q + &one).mul_int(1_000_000) - u2.mul_int(c * c);
            let rhs = dot.mul_int(2_000_000);
            if !product_le_sqrt(&lhs, &sum_sq, &rhs) {
                violations.push(Bound::Direction);
            }
            // |x_hat - x/r|^2 = Q - 2 D / r + 1
            let dir_sq = &q + &one - dot.scale_pow2(1).div(&r, ORACLE_BITS);
            let dir_err = dir_sq.to_f64().max(0.0).sqrt();

            let sin_phi = if N == 4 {
                None
            } else {
                let cross_sq = cross_norm_sq(&xs, &unit);
                // |sin phi| <= 1.001 u  <=>  10^6 |x cross x_hat|^2 <= 1001^2 u^2 S Q
                let scaled = &sum_sq * &q;
                if q.is_zero() || cross_sq.mul_int(1_000_000) > (&u2 * &scaled).mul_int(1001 * 1001) {
                    violations.push(Bound::SinPhi);
                }
                Some(if q.is_zero() { f64::INFINITY } else { cross_sq.ratio_f64(&scaled).sqrt() })
            };

            let product_err = (N == 4).then(|| {
                let mut worst = 0.0f64;
                let mut violated = false;
                for i in 0..N {
                    for j in i..N {
                        let xx = &xs[i] * &xs[j];
                        // 1000 |S q_i q_j - x_i x_j| <= (1001 S + 8001 |x_i x_j|) u
                        let diff = (&sum_sq * &(&unit[i] * &unit[j]) - &xx).abs();
                        let tol = (sum_sq.mul_int(1001) + xx.abs().mul_int(8001)) * &u;
                        if diff.mul_int(1000) > tol {
                            violated = true;
                        }
                        worst = worst.max(diff.ratio_f64(&sum_sq));
                    }
                }
                if violated {
                    violations.push(Bound::Product);
                }
                worst
            });
            (dir_err, sin_phi, product_err)
        }
    };

    violations.sort();
    Ok(ErrorReport {
        rel_length_err,
        abs_length_err,
        dir_err,
        sin_phi,
        product_err,
        regime,
        bound_violations: violations,
    })
}

/// `|len - sqrt(s)| <= sqrt(s) ku + slack`, decided without square roots.
fn length_within(len: &Dyadic, s: &Dyadic, ku: &Dyadic, slack: &Dyadic) -> bool {
    if len.signum() < 0 {
        return false;
    }
    let one = Dyadic::one();
    // len - slack <= sqrt(s) (1 + ku)
    let lower = len - slack;
    let upper_ok = lower.signum() <= 0 || lower.square() <= s * &(&one + ku).square();
    // sqrt(s) (1 - ku) <= len + slack
    let lower_ok = s * &(&one - ku).square() <= (len + slack).square();
    upper_ok && lower_ok
}

/// `a * sqrt(s) <= b` for `s > 0`.
fn product_le_sqrt(a: &Dyadic, s: &Dyadic, b: &Dyadic) -> bool {
    match (a.signum() <= 0, b.signum() >= 0) {
        (true, true) => true,
        // a <= 0, b < 0: need |a| sqrt(s) >= |b|
        (true, false) => a.square() * s >= b.square(),
        // a > 0, b >= 0: need a sqrt(s) <= b
        (false, true) => a.square() * s <= b.square(),
        (false, false) => false,
    }
}

/// `|x cross y|^2`; the scalar cross product in 2D.
fn cross_norm_sq(x: &[Dyadic], y: &[Dyadic]) -> Dyadic {
    match x.len() {
        2 => (&x[0] * &y[1] - &x[1] * &y[0]).square(),
        3 => {
            let c1 = &x[1] * &y[2] - &x[2] * &y[1];
            let c2 = &x[2] * &y[0] - &x[0] * &y[2];
            let c3 = &x[0] * &y[1] - &x[1] * &y[0];
            c1.square() + c2.square() + c3.square()
        }
        n => panic!("no cross product in dimension {n}"),
    }
}
