//! Seeded input batches for benchmarks and bound sweeps.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::float::Real;
use crate::params::FpParams;

/// Magnitude regime of generated vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Every component in `[tau_min, tau_max)`: the unscaled fast path.
    Normal,
    /// Every component below the smallest normal value.
    Subnormal,
    /// Every component above `tau_max`.
    Huge,
    /// Independent exponents, uniform over the whole representable range
    /// (subnormals included), with occasional exact zeros.
    Mixed,
    /// Norms within `2^-10` of one, as for quaternions that are already
    /// nearly normalized.
    UnitIsh,
    /// Each vector drawn from one of the five regimes above at random.
    All,
}

impl Regime {
    pub const ALL: [Regime; 6] =
        [Regime::Normal, Regime::Subnormal, Regime::Huge, Regime::Mixed, Regime::UnitIsh, Regime::All];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Normal => "normal",
            Regime::Subnormal => "subnormal",
            Regime::Huge => "huge",
            Regime::Mixed => "mixed",
            Regime::UnitIsh => "unit-ish",
            Regime::All => "all",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == key || (key == "unitish" && *r == Regime::UnitIsh))
            .ok_or_else(|| format!("unknown regime `{s}`"))
    }
}

/// `e` such that `2^e <= |x| < 2^(e+1)`, for finite nonzero `x`.
pub fn leading_exponent<T: Real>(x: T) -> i32 {
    let fmt = T::FORMAT;
    let frac_bits = T::FRACTION_BITS;
    let bits = x.abs().to_raw();
    let biased = (bits >> frac_bits) as i32;
    if biased == 0 {
        let frac = bits & ((1u64 << frac_bits) - 1);
        fmt.min_exponent() + (63 - frac.leading_zeros() as i32)
    } else {
        biased - fmt.max_exponent()
    }
}

/// Deterministic stream of input vectors.
pub struct InputGenerator<T> {
    rng: ChaCha8Rng,
    regime: Regime,
    params: FpParams<T>,
}

impl<T: Real> InputGenerator<T> {
    pub fn new(regime: Regime, seed: u64) -> Self {
        InputGenerator { rng: ChaCha8Rng::seed_from_u64(seed), regime, params: FpParams::ieee() }
    }

    pub fn next_vector<const N: usize>(&mut self) -> [T; N] {
        let regime = if self.regime == Regime::All { Regime::ALL[self.rng.gen_range(0..5)] } else { self.regime };
        let fmt = T::FORMAT;
        let tmin = leading_exponent(self.params.tau_min());
        let tmax = leading_exponent(self.params.tau_max());
        match regime {
            Regime::Normal => std::array::from_fn(|_| self.with_exponent_in(tmin, tmax - 1)),
            Regime::Subnormal => {
                std::array::from_fn(|_| self.with_exponent_in(fmt.min_exponent(), fmt.min_normal_exponent() - 1))
            }
            Regime::Huge => std::array::from_fn(|_| loop {
                let v = self.with_exponent_in(tmax, fmt.max_exponent());
                if v.abs() > self.params.tau_max() {
                    break v;
                }
            }),
            Regime::Mixed => loop {
                let v: [T; N] = std::array::from_fn(|_| {
                    if self.rng.gen_ratio(1, 16) {
                        T::zero()
                    } else {
                        self.with_exponent_in(fmt.min_exponent(), fmt.max_exponent())
                    }
                });
                if v.iter().any(|c| *c != T::zero()) {
                    break v;
                }
            },
            Regime::UnitIsh => self.unit_ish(),
            Regime::All => unreachable!(),
        }
    }

    /// Random sign and fraction bits, leading exponent uniform in `[lo, hi]`.
    fn with_exponent_in(&mut self, lo: i32, hi: i32) -> T {
        let fmt = T::FORMAT;
        let e = self.rng.gen_range(lo..=hi);
        let frac_bits = T::FRACTION_BITS;
        let random: u64 = self.rng.gen();
        let bits = if e >= fmt.min_normal_exponent() {
            (((e + fmt.max_exponent()) as u64) << frac_bits) | (random & ((1u64 << frac_bits) - 1))
        } else {
            let k = (e - fmt.min_exponent()) as u32;
            (1u64 << k) | (random & ((1u64 << k) - 1))
        };
        let v = T::from_raw(bits);
        if random >> 63 == 1 {
            -v
        } else {
            v
        }
    }

    fn unit_ish<const N: usize>(&mut self) -> [T; N] {
        loop {
            let d: [f64; N] = std::array::from_fn(|_| self.rng.gen_range(-1.0..=1.0));
            let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n < 0.1 {
                continue;
            }
            let stretch = 1.0 + self.rng.gen_range(-1.0..=1.0) * 2f64.powi(-10);
            return d.map(|v| T::from_f64(v / n * stretch));
        }
    }
}

/// `count` vectors of the given regime, reproducible for a fixed seed.
pub fn generate_inputs<T: Real, const N: usize>(regime: Regime, count: usize, seed: u64) -> Vec<[T; N]> {
    let mut g = InputGenerator::<T>::new(regime, seed);
    (0..count).map(|_| g.next_vector::<N>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_batch() {
        let a = generate_inputs::<f64, 3>(Regime::Normal, 4, 1);
        let b = generate_inputs::<f64, 3>(Regime::Normal, 4, 1);
        assert_eq!(a.len(), 4);
        assert_eq!(a, b);
        assert_ne!(a, generate_inputs::<f64, 3>(Regime::Normal, 4, 2));
    }

    #[test]
    fn regimes_respect_their_magnitude_ranges() {
        fn check<T: Real>() {
            let p = FpParams::<T>::ieee();
            for v in generate_inputs::<T, 2>(Regime::Subnormal, 2000, 3) {
                assert!(v.iter().all(|c| c.abs() < p.nu() && *c != T::zero()));
            }
            for v in generate_inputs::<T, 3>(Regime::Normal, 2000, 3) {
                assert!(v.iter().all(|c| c.abs() >= p.tau_min() && c.abs() < p.tau_max()));
            }
            for v in generate_inputs::<T, 4>(Regime::Huge, 2000, 3) {
                assert!(v.iter().all(|c| c.abs() > p.tau_max() && c.is_finite()));
            }
            for v in generate_inputs::<T, 4>(Regime::UnitIsh, 2000, 3) {
                let n = v.iter().map(|c| Real::to_f64(*c) * Real::to_f64(*c)).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() <= 2f64.powi(-10) * 1.001, "{n}");
            }
            for v in generate_inputs::<T, 3>(Regime::Mixed, 2000, 3) {
                assert!(v.iter().all(|c| c.is_finite()) && v.iter().any(|c| *c != T::zero()));
            }
        }
        check::<f32>();
        check::<f64>();
    }

    #[test]
    fn leading_exponent_of_extremes() {
        assert_eq!(leading_exponent(f64::from_bits(1)), -1074);
        assert_eq!(leading_exponent(f64::MIN_POSITIVE), -1022);
        assert_eq!(leading_exponent(-3.0f64), 1);
        assert_eq!(leading_exponent(f64::MAX), 1023);
        assert_eq!(leading_exponent(f32::from_bits(3)), -148);
        assert_eq!(leading_exponent(0.75f32), -1);
    }

    #[test]
    fn regime_names_parse() {
        for r in Regime::ALL {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
        assert_eq!("unit_ish".parse::<Regime>().unwrap(), Regime::UnitIsh);
        assert!("tiny".parse::<Regime>().is_err());
    }
}
