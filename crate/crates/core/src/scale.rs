//! Power-of-two scaling into the safe band `[tau_min, tau_max]`.
//!
//! Each routine finds `m = max |x_k|` with the comparison cascade of the
//! corresponding normalization kernel and multiplies by `sigma_min`,
//! `sigma_max` or nothing. The returned `inv_sigma` undoes the scaling; it is
//! zero exactly when the input is the zero vector.
//!
//! NaNs are not special-cased. The comparisons that guard the zero test are
//! written as `!(m >= |x_k|)` rather than `m < |x_k|`: the two agree on
//! ordered operands, and the former sends a NaN component down the branch
//! that keeps it as the running maximum, so a NaN can never be mistaken for
//! a zero vector. Infinite inputs pass through unchanged in kind.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // see above: the negation is the point

use crate::float::Real;
use crate::params::FpParams;

/// Inverse scale factor and scaled components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleOutcome<T, const N: usize> {
    /// `1/sigma`; `0` signals the zero vector.
    pub inv_sigma: T,
    /// `sigma * x_k`.
    pub scaled: [T; N],
}

impl<T: Real, const N: usize> ScaleOutcome<T, N> {
    #[inline(always)]
    fn zero() -> Self {
        ScaleOutcome { inv_sigma: T::zero(), scaled: [T::zero(); N] }
    }

    #[inline(always)]
    fn by(p: &FpParams<T>, m: T, x: [T; N]) -> Self {
        if m >= p.tau_min() {
            if m <= p.tau_max() {
                return ScaleOutcome { inv_sigma: T::one(), scaled: x };
            }
            let s = p.sigma_max();
            ScaleOutcome { inv_sigma: p.inv_sigma_max(), scaled: x.map(|v| s * v) }
        } else {
            let s = p.sigma_min();
            ScaleOutcome { inv_sigma: p.inv_sigma_min(), scaled: x.map(|v| s * v) }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.inv_sigma == T::zero()
    }
}

/// Scale a 2D vector so that its largest magnitude lies in `[tau_min, tau_max]`.
#[inline]
pub fn scale2<T: Real>(p: &FpParams<T>, x1: T, x2: T) -> ScaleOutcome<T, 2> {
    let mut m = x1.abs();
    if m >= x2.abs() {
        if m == T::zero() {
            return ScaleOutcome::zero();
        }
    } else {
        m = x2.abs();
    }
    ScaleOutcome::by(p, m, [x1, x2])
}

/// Three-component analogue of [`scale2`]; the zero test sits on the branch
/// where `|x1|` dominates.
#[inline]
pub fn scale3<T: Real>(p: &FpParams<T>, x1: T, x2: T, x3: T) -> ScaleOutcome<T, 3> {
    let mut m = x1.abs();
    if !(m >= x2.abs()) {
        m = x2.abs();
        if m < x3.abs() {
            m = x3.abs();
        }
    } else if m >= x3.abs() {
        if m == T::zero() {
            return ScaleOutcome::zero();
        }
    } else {
        m = x3.abs();
    }
    ScaleOutcome::by(p, m, [x1, x2, x3])
}

/// Four-component scaling used by the quaternion kernel.
#[inline]
pub fn scale4<T: Real>(p: &FpParams<T>, x1: T, x2: T, x3: T, x4: T) -> ScaleOutcome<T, 4> {
    let mut m = x1.abs();
    if !(m >= x2.abs()) {
        m = x2.abs();
        if m < x3.abs() {
            m = x3.abs();
        }
        if m < x4.abs() {
            m = x4.abs();
        }
    } else if !(m >= x3.abs()) {
        m = x3.abs();
        if m < x4.abs() {
            m = x4.abs();
        }
    } else if m >= x4.abs() {
        if m == T::zero() {
            return ScaleOutcome::zero();
        }
    } else {
        m = x4.abs();
    }
    ScaleOutcome::by(p, m, [x1, x2, x3, x4])
}
