//! Arithmetic parameters and the scaling constants built on them.
//!
//! An [`FpParams`] describes the format (`u`, `alpha`, `nu`, `omega`) together
//! with the thresholds `tau_min`, `tau_max` bracketing the magnitude band where
//! a sum of squares is safe, and the power-of-two factors `sigma_min`,
//! `sigma_max` that move out-of-band vectors into it.
//!
//! The scaling kernels are only accurate when the six conditions checked by
//! [`FpParams::validate_conditions`] hold; the built-in IEEE presets satisfy
//! all of them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::{Format, Real};
use crate::oracle::exact::Dyadic;

/// One of the eight constants of an [`FpParams`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    #[serde(rename = "u")]
    UnitRoundoff,
    Alpha,
    Nu,
    Omega,
    TauMin,
    TauMax,
    SigmaMin,
    SigmaMax,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::UnitRoundoff,
        Param::Alpha,
        Param::Nu,
        Param::Omega,
        Param::TauMin,
        Param::TauMax,
        Param::SigmaMin,
        Param::SigmaMax,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Param::UnitRoundoff => "u",
            Param::Alpha => "alpha",
            Param::Nu => "nu",
            Param::Omega => "omega",
            Param::TauMin => "tau_min",
            Param::TauMax => "tau_max",
            Param::SigmaMin => "sigma_min",
            Param::SigmaMax => "sigma_max",
        }
    }
}

/// Identifier of a violated correctness condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// Some constant is zero, negative, infinite or NaN.
    #[serde(rename = "range")]
    Range,
    /// `fl(nu^2) = 0`, `u^2 >= 16 alpha`, `u <= 1e-6`.
    #[serde(rename = "condA")]
    CondA,
    /// The scale factors and thresholds are powers of two.
    #[serde(rename = "condB")]
    CondB,
    /// `u^2 tau_min^2 >= alpha` and `8 tau_max^2 <= omega`.
    #[serde(rename = "condC")]
    CondC,
    /// `omega tau_min >= 1` and `3 nu tau_max <= 1`.
    #[serde(rename = "condD")]
    CondD,
    /// Scaling up by `sigma_min` maps `(0, tau_min]` into `[tau_min, tau_max]`.
    #[serde(rename = "condE")]
    CondE,
    /// Scaling down by `sigma_max` maps `[tau_max, omega]` into `[tau_min, tau_max]`.
    #[serde(rename = "condF")]
    CondF,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::Range => "range",
            Condition::CondA => "condA",
            Condition::CondB => "condB",
            Condition::CondC => "condC",
            Condition::CondD => "condD",
            Condition::CondE => "condE",
            Condition::CondF => "condF",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Condition::Range => "all constants must be positive and finite",
            Condition::CondA => "fl(nu^2) = 0, u^2 >= 16 alpha, u <= 1e-6",
            Condition::CondB => "sigma_min, sigma_max, tau_min, tau_max are powers of 2",
            Condition::CondC => "u^2 tau_min^2 >= alpha and 8 tau_max^2 <= omega",
            Condition::CondD => "omega tau_min >= 1 and 3 nu tau_max <= 1",
            Condition::CondE => "sigma_min x in [tau_min, tau_max] for x in (0, tau_min]",
            Condition::CondF => "sigma_max x in [tau_min, tau_max] for x in [tau_max, omega]",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Arithmetic description plus scaling constants, in the working format `T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FpParams<T> {
    u: T,
    alpha: T,
    nu: T,
    omega: T,
    tau_min: T,
    tau_max: T,
    sigma_min: T,
    sigma_max: T,
    inv_sigma_min: T,
    inv_sigma_max: T,
}

/// Exponents `(tau_min, sigma_min, tau_max, sigma_max)` of the IEEE presets.
const SINGLE_EXPONENTS: (i32, i32, i32, i32) = (-49, 100, 62, -66);
const DOUBLE_EXPONENTS: (i32, i32, i32, i32) = (-482, 592, 510, -514);

impl<T: Real> FpParams<T> {
    /// The canonical constants for `T`'s IEEE binary format.
    pub fn ieee() -> Self {
        let (tmin, smin, tmax, smax) = match T::FORMAT {
            Format::Single => SINGLE_EXPONENTS,
            Format::Double => DOUBLE_EXPONENTS,
        };
        Self::from_parts(
            T::unit_roundoff(),
            T::smallest_subnormal(),
            T::min_positive_value(),
            T::max_value(),
            T::pow2(tmin),
            T::pow2(tmax),
            T::pow2(smin),
            T::pow2(smax),
        )
    }

    /// Builds a parameter set without validating it.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(u: T, alpha: T, nu: T, omega: T, tau_min: T, tau_max: T, sigma_min: T, sigma_max: T) -> Self {
        FpParams {
            u,
            alpha,
            nu,
            omega,
            tau_min,
            tau_max,
            sigma_min,
            sigma_max,
            inv_sigma_min: T::one() / sigma_min,
            inv_sigma_max: T::one() / sigma_max,
        }
    }

    /// Builds a parameter set and rejects it unless every condition holds.
    #[allow(clippy::too_many_arguments)]
    pub fn new(u: T, alpha: T, nu: T, omega: T, tau_min: T, tau_max: T, sigma_min: T, sigma_max: T) -> Result<Self> {
        Self::from_parts(u, alpha, nu, omega, tau_min, tau_max, sigma_min, sigma_max).validated()
    }

    pub fn validated(self) -> Result<Self> {
        let violations = self.validate_conditions();
        if violations.is_empty() {
            Ok(self)
        } else {
            let ids: Vec<&str> = violations.iter().map(|c| c.id()).collect();
            Err(Error::InvalidParams(ids.join(", ")))
        }
    }

    pub fn get(&self, which: Param) -> T {
        match which {
            Param::UnitRoundoff => self.u,
            Param::Alpha => self.alpha,
            Param::Nu => self.nu,
            Param::Omega => self.omega,
            Param::TauMin => self.tau_min,
            Param::TauMax => self.tau_max,
            Param::SigmaMin => self.sigma_min,
            Param::SigmaMax => self.sigma_max,
        }
    }

    /// Copy with one constant replaced (unvalidated).
    pub fn with(&self, which: Param, value: T) -> Self {
        let mut v =
            [self.u, self.alpha, self.nu, self.omega, self.tau_min, self.tau_max, self.sigma_min, self.sigma_max];
        let idx = Param::ALL.iter().position(|p| *p == which).unwrap();
        v[idx] = value;
        Self::from_parts(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7])
    }

    #[inline(always)]
    pub fn unit_roundoff(&self) -> T {
        self.u
    }
    #[inline(always)]
    pub fn alpha(&self) -> T {
        self.alpha
    }
    #[inline(always)]
    pub fn nu(&self) -> T {
        self.nu
    }
    #[inline(always)]
    pub fn omega(&self) -> T {
        self.omega
    }
    #[inline(always)]
    pub fn tau_min(&self) -> T {
        self.tau_min
    }
    #[inline(always)]
    pub fn tau_max(&self) -> T {
        self.tau_max
    }
    #[inline(always)]
    pub fn sigma_min(&self) -> T {
        self.sigma_min
    }
    #[inline(always)]
    pub fn sigma_max(&self) -> T {
        self.sigma_max
    }
    /// `1 / sigma_min`, exact for power-of-two factors.
    #[inline(always)]
    pub fn inv_sigma_min(&self) -> T {
        self.inv_sigma_min
    }
    #[inline(always)]
    pub fn inv_sigma_max(&self) -> T {
        self.inv_sigma_max
    }

    /// Every violated condition, in identifier order. Empty means usable.
    ///
    /// All inequalities are decided in exact arithmetic. The interval
    /// conditions E and F are checked at their endpoints, which is enough
    /// because multiplication by a power of two is exact and monotone there.
    pub fn validate_conditions(&self) -> Vec<Condition> {
        let all = [self.u, self.alpha, self.nu, self.omega, self.tau_min, self.tau_max, self.sigma_min, self.sigma_max];
        if all.iter().any(|x| !x.is_finite() || *x <= T::zero()) {
            return vec![Condition::Range];
        }
        let ex = |x: T| Dyadic::from_real(x).expect("finite");
        let (u, alpha, nu, omega) = (ex(self.u), ex(self.alpha), ex(self.nu), ex(self.omega));
        let (tmin, tmax, smin, smax) = (ex(self.tau_min), ex(self.tau_max), ex(self.sigma_min), ex(self.sigma_max));
        let one = Dyadic::one();
        let in_band = |x: &Dyadic| *x >= tmin && *x <= tmax;
        let is_pow2 = |x: &Dyadic| x.abs().leading_exponent().map(Dyadic::pow2).as_ref() == Some(x);

        let mut out = Vec::new();
        let cond_a = self.nu * self.nu == T::zero() && u.square() >= alpha.mul_int(16) && u.mul_int(1_000_000) <= one;
        if !cond_a {
            out.push(Condition::CondA);
        }
        if ![&smin, &smax, &tmin, &tmax].iter().all(|x| is_pow2(x)) {
            out.push(Condition::CondB);
        }
        if !((&u * &tmin).square() >= alpha && tmax.square().mul_int(8) <= omega) {
            out.push(Condition::CondC);
        }
        if !(&omega * &tmin >= one && (&nu * &tmax).mul_int(3) <= one) {
            out.push(Condition::CondD);
        }
        if !(in_band(&(&smin * &alpha)) && in_band(&(&smin * &tmin))) {
            out.push(Condition::CondE);
        }
        if !(in_band(&(&smax * &tmax)) && in_band(&(&smax * &omega))) {
            out.push(Condition::CondF);
        }
        out
    }
}

/// Thresholds produced by the closed-form derivation, for comparison with
/// the canonical presets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TauCandidates {
    pub tau_min_exponent: i32,
    pub tau_max_exponent: i32,
}

/// `tau_min = 2^ceil(log2(alpha/u^2)/2)`, `tau_max = 2^floor((log2(omega)-3)/2)`.
///
/// Diagnostic only: for both IEEE formats the derived `tau_min` sits a power
/// or two below the preset value, and the presets stay canonical.
pub fn derive_tau(format: Format) -> TauCandidates {
    let u_exp = -(format.precision() as i32);
    // alpha / u^2 is an exact power of two.
    let ratio_log2 = f64::from(format.min_exponent() - 2 * u_exp);
    let omega_log2 = match format {
        Format::Single => f64::from(f32::MAX).log2(),
        Format::Double => f64::MAX.log2(),
    };
    TauCandidates {
        tau_min_exponent: (ratio_log2 / 2.0).ceil() as i32,
        tau_max_exponent: ((omega_log2 - 3.0) / 2.0).floor() as i32,
    }
}
