//! Uniform dispatch over the normalization algorithms.
//!
//! The benchmark harness and the bound sweeps call kernels exclusively
//! through [`Algorithm::kernel`], so what is timed and verified is exactly
//! what the library exports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{
    naive_normalize2, naive_normalize3, naive_normalize4, quotient2, quotient3_fast, quotient3_robust, quotient4,
};
use crate::float::Real;
use crate::normalize::{normalize2, normalize3, normalize4, NormalizeOutcome};
use crate::params::FpParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Naive,
    /// Divide by the largest magnitude, then by the root (all dimensions).
    Quotient,
    /// Pivoted quotient algorithm (3D only).
    QuotientFast,
    Scaling,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::Naive, Algorithm::Quotient, Algorithm::QuotientFast, Algorithm::Scaling];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Quotient => "quotient",
            Algorithm::QuotientFast => "quotient_fast",
            Algorithm::Scaling => "scaling",
        }
    }

    pub fn supports(self, dim: usize) -> bool {
        match self {
            Algorithm::QuotientFast => dim == 3,
            _ => (2..=4).contains(&dim),
        }
    }

    /// The kernel for dimension `N`, or `None` when the algorithm has no
    /// variant of that dimension.
    #[inline]
    pub fn kernel<T: Real, const N: usize>(self) -> Option<Kernel<T, N>>
    where
        Dim<N>: KernelTable<T, N>,
    {
        Dim::<N>::kernel(self)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "naive" => Ok(Algorithm::Naive),
            "quotient" | "quotient_robust" => Ok(Algorithm::Quotient),
            "quotient_fast" => Ok(Algorithm::QuotientFast),
            "scaling" => Ok(Algorithm::Scaling),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

pub type Kernel<T, const N: usize> = fn(&FpParams<T>, [T; N]) -> NormalizeOutcome<T, N>;

/// Dimension marker used to select a kernel table.
pub struct Dim<const N: usize>;

pub trait KernelTable<T: Real, const N: usize> {
    fn kernel(algo: Algorithm) -> Option<Kernel<T, N>>;
}

impl<T: Real> KernelTable<T, 2> for Dim<2> {
    #[inline]
    fn kernel(algo: Algorithm) -> Option<Kernel<T, 2>> {
        match algo {
            Algorithm::Naive => Some(|_, x| naive_normalize2(x)),
            Algorithm::Quotient => Some(|_, x| quotient2(x)),
            Algorithm::QuotientFast => None,
            Algorithm::Scaling => Some(normalize2::<T>),
        }
    }
}

impl<T: Real> KernelTable<T, 3> for Dim<3> {
    #[inline]
    fn kernel(algo: Algorithm) -> Option<Kernel<T, 3>> {
        match algo {
            Algorithm::Naive => Some(|_, x| naive_normalize3(x)),
            Algorithm::Quotient => Some(|_, x| quotient3_robust(x)),
            Algorithm::QuotientFast => Some(|_, x| quotient3_fast(x)),
            Algorithm::Scaling => Some(normalize3::<T>),
        }
    }
}

impl<T: Real> KernelTable<T, 4> for Dim<4> {
    #[inline]
    fn kernel(algo: Algorithm) -> Option<Kernel<T, 4>> {
        match algo {
            Algorithm::Naive => Some(|_, x| naive_normalize4(x)),
            Algorithm::Quotient => Some(|_, x| quotient4(x)),
            Algorithm::QuotientFast => None,
            Algorithm::Scaling => Some(normalize4::<T>),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_entries_are_the_exported_kernels() {
        let k2: Kernel<f64, 2> = normalize2::<f64>;
        let k3: Kernel<f32, 3> = normalize3::<f32>;
        let k4: Kernel<f64, 4> = normalize4::<f64>;
        assert!(std::ptr::fn_addr_eq(Algorithm::Scaling.kernel::<f64, 2>().unwrap(), k2));
        assert!(std::ptr::fn_addr_eq(Algorithm::Scaling.kernel::<f32, 3>().unwrap(), k3));
        assert!(std::ptr::fn_addr_eq(Algorithm::Scaling.kernel::<f64, 4>().unwrap(), k4));
    }

    #[test]
    fn baseline_entries_forward_to_the_exported_functions() {
        let p = FpParams::<f64>::ieee();
        let x3 = [0.3, -1e-5, 7.0];
        assert_eq!(Algorithm::Naive.kernel::<f64, 3>().unwrap()(&p, x3), naive_normalize3(x3));
        assert_eq!(Algorithm::Quotient.kernel::<f64, 3>().unwrap()(&p, x3), quotient3_robust(x3));
        assert_eq!(Algorithm::QuotientFast.kernel::<f64, 3>().unwrap()(&p, x3), quotient3_fast(x3));
        let x4 = [0.3, -1e-5, 7.0, 2.0];
        assert_eq!(Algorithm::Quotient.kernel::<f64, 4>().unwrap()(&p, x4), quotient4(x4));
        assert_eq!(Algorithm::Naive.kernel::<f64, 4>().unwrap()(&p, x4), naive_normalize4(x4));
        assert_eq!(Algorithm::Quotient.kernel::<f64, 2>().unwrap()(&p, [1.0, 2.0]), quotient2([1.0, 2.0]));
    }

    #[test]
    fn fast_quotient_exists_only_in_3d() {
        assert!(Algorithm::QuotientFast.kernel::<f64, 2>().is_none());
        assert!(Algorithm::QuotientFast.kernel::<f64, 4>().is_none());
        assert!(Algorithm::QuotientFast.supports(3) && !Algorithm::QuotientFast.supports(4));
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fastest".parse::<Algorithm>().is_err());
    }
}
