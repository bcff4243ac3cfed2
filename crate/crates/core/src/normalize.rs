//! Scaling normalization of 2D and 3D vectors and quaternions.
//!
//! Each kernel scales the input into `[tau_min, tau_max]`, takes the square
//! root of the sum of squares of the scaled components (evaluated left to
//! right, one rounding per operation), forms a single reciprocal `h = 1/r`
//! and multiplies. The length is recovered as `inv_sigma * r`.
//!
//! With valid parameters and full IEEE semantics (subnormals honoured), for
//! a finite nonzero input of dimension `n` the unit vector is finite, its
//! angle `phi` to the input satisfies `|sin phi| <= 1.001 u`, and it lies
//! within `(3.001 + n/2) u` of `x / |x|`. The length has relative error at
//! most `(1 + n/2) u`, plus an absolute `alpha / 2` once `|x|` falls below
//! roughly `3 nu / 2`. When subnormal inputs are flushed to zero (DAZ), the
//! same holds for the flushed input; when subnormal results are flushed
//! (FTZ), the `alpha / 2` term becomes `nu`.

use crate::float::Real;
use crate::params::FpParams;
use crate::scale::{scale2, scale3, scale4};

/// Computed length and unit direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizeOutcome<T, const N: usize> {
    pub length: T,
    pub unit: [T; N],
}

impl<T: Real, const N: usize> NormalizeOutcome<T, N> {
    pub fn has_nan(&self) -> bool {
        self.length.is_nan() || self.unit.iter().any(|v| v.is_nan())
    }

    pub fn is_finite(&self) -> bool {
        self.length.is_finite() && self.unit.iter().all(|v| v.is_finite())
    }
}

/// Length and direction of a 2D vector. The zero vector maps to `(0, [0, 0])`.
#[inline]
pub fn normalize2<T: Real>(p: &FpParams<T>, x: [T; 2]) -> NormalizeOutcome<T, 2> {
    let s = scale2(p, x[0], x[1]);
    if s.inv_sigma == T::zero() {
        return NormalizeOutcome { length: T::zero(), unit: [T::zero(); 2] };
    }
    let [a, b] = s.scaled;
    let r = (a * a + b * b).sqrt();
    let h = T::one() / r;
    NormalizeOutcome { length: s.inv_sigma * r, unit: [h * a, h * b] }
}

/// Length and direction of a 3D vector. The zero vector maps to `(0, [0, 0, 0])`.
#[inline]
pub fn normalize3<T: Real>(p: &FpParams<T>, x: [T; 3]) -> NormalizeOutcome<T, 3> {
    let s = scale3(p, x[0], x[1], x[2]);
    if s.inv_sigma == T::zero() {
        return NormalizeOutcome { length: T::zero(), unit: [T::zero(); 3] };
    }
    let [a, b, c] = s.scaled;
    let r = (a * a + b * b + c * c).sqrt();
    let h = T::one() / r;
    NormalizeOutcome { length: s.inv_sigma * r, unit: [h * a, h * b, h * c] }
}

/// Length and unit quaternion.
///
/// The zero quaternion maps to length `0` and the identity rotation
/// `(0, 0, 0, 1)`; the fourth component is the scalar part.
#[inline]
pub fn normalize4<T: Real>(p: &FpParams<T>, x: [T; 4]) -> NormalizeOutcome<T, 4> {
    let s = scale4(p, x[0], x[1], x[2], x[3]);
    if s.inv_sigma == T::zero() {
        return NormalizeOutcome { length: T::zero(), unit: [T::zero(), T::zero(), T::zero(), T::one()] };
    }
    let [a, b, c, d] = s.scaled;
    let r = (a * a + b * b + c * c + d * d).sqrt();
    let h = T::one() / r;
    NormalizeOutcome { length: s.inv_sigma * r, unit: [h * a, h * b, h * c, h * d] }
}

/// Length of a 2D vector; the same value [`normalize2`] reports.
#[inline]
pub fn norm2<T: Real>(p: &FpParams<T>, x: [T; 2]) -> T {
    let s = scale2(p, x[0], x[1]);
    if s.inv_sigma == T::zero() {
        return T::zero();
    }
    let [a, b] = s.scaled;
    s.inv_sigma * (a * a + b * b).sqrt()
}

#[inline]
pub fn norm3<T: Real>(p: &FpParams<T>, x: [T; 3]) -> T {
    let s = scale3(p, x[0], x[1], x[2]);
    if s.inv_sigma == T::zero() {
        return T::zero();
    }
    let [a, b, c] = s.scaled;
    s.inv_sigma * (a * a + b * b + c * c).sqrt()
}

#[inline]
pub fn norm4<T: Real>(p: &FpParams<T>, x: [T; 4]) -> T {
    let s = scale4(p, x[0], x[1], x[2], x[3]);
    if s.inv_sigma == T::zero() {
        return T::zero();
    }
    let [a, b, c, d] = s.scaled;
    s.inv_sigma * (a * a + b * b + c * c + d * d).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, ulps: f64) -> bool {
        (a - b).abs() <= ulps * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn pythagorean_inputs() {
        let p = FpParams::<f64>::ieee();
        let o = normalize2(&p, [3.0, 4.0]);
        assert_eq!(o.length, 5.0);
        assert!(close(o.unit[0], 0.6, 1.0) && close(o.unit[1], 0.8, 1.0));

        let o = normalize3(&p, [2.0, 10.0, 11.0]);
        assert_eq!(o.length, 15.0);
        for (got, num) in o.unit.iter().zip([2.0, 10.0, 11.0]) {
            assert!(close(*got, num / 15.0, 2.0));
        }

        let o = normalize4(&p, [1.0; 4]);
        assert_eq!(o, NormalizeOutcome { length: 2.0, unit: [0.5; 4] });
    }

    #[test]
    fn zero_inputs() {
        let p = FpParams::<f64>::ieee();
        assert_eq!(normalize2(&p, [0.0; 2]), NormalizeOutcome { length: 0.0, unit: [0.0; 2] });
        assert_eq!(normalize3(&p, [0.0; 3]), NormalizeOutcome { length: 0.0, unit: [0.0; 3] });
        assert_eq!(normalize4(&p, [0.0; 4]), NormalizeOutcome { length: 0.0, unit: [0.0, 0.0, 0.0, 1.0] });
        assert_eq!(norm3(&p, [0.0; 3]), 0.0);
    }

    #[test]
    fn smallest_subnormal_is_recovered_exactly() {
        let p = FpParams::<f64>::ieee();
        let alpha = f64::from_bits(1);
        let o = normalize2(&p, [alpha, 0.0]);
        assert_eq!(o, NormalizeOutcome { length: alpha, unit: [1.0, 0.0] });
        assert_eq!(norm4(&p, [alpha, 0.0, 0.0, 0.0]), alpha);

        let pf = FpParams::<f32>::ieee();
        let o = normalize3(&pf, [0.0, -f32::from_bits(1), 0.0]);
        assert_eq!(o, NormalizeOutcome { length: f32::from_bits(1), unit: [0.0, -1.0, 0.0] });
    }

    #[test]
    fn huge_input_does_not_overflow() {
        let p = FpParams::<f64>::ieee();
        let x = f64::pow2(600);
        let o = normalize3(&p, [x, x, x]);
        let want = x * 3f64.sqrt();
        assert!(close(o.length, want, 2.0), "{} vs {}", o.length, want);
        for v in o.unit {
            assert!(close(v, 1.0 / 3f64.sqrt(), 4.0));
        }
    }

    #[test]
    fn length_only_variants_agree_bitwise() {
        let p = FpParams::<f64>::ieee();
        let cases: [[f64; 4]; 4] =
            [[3.0, 4.0, 12.0, 84.0], [1e-310, 3e-320, 0.0, 1e-315], [1e300, -1e301, 2e299, 5.0], [0.1, 0.2, 0.3, 0.4]];
        for x in cases {
            assert_eq!(norm2(&p, [x[0], x[1]]), normalize2(&p, [x[0], x[1]]).length);
            assert_eq!(norm3(&p, [x[0], x[1], x[2]]), normalize3(&p, [x[0], x[1], x[2]]).length);
            assert_eq!(norm4(&p, x), normalize4(&p, x).length);
        }
    }

    #[test]
    fn nan_propagates() {
        let p = FpParams::<f32>::ieee();
        assert!(normalize2(&p, [f32::NAN, 0.0]).has_nan());
        assert!(normalize3(&p, [0.0, f32::NAN, 0.0]).has_nan());
        assert!(normalize4(&p, [0.0, 0.0, f32::NAN, 0.0]).has_nan());
    }
}
