//! Reference algorithms the scaling kernels are measured against.
//!
//! * naive: `r = sqrt(sum x_k^2)`, `x_k / r`, no protection at all.
//! * quotient (robust): divide by `m = max |x_k|`, take the root, divide
//!   again. Division-heavy but immune to spurious over/underflow.
//! * quotient (fast, 3D only): pivot on the largest component so that only
//!   two quotients and one root are needed.

use crate::float::Real;
use crate::normalize::NormalizeOutcome;

#[inline(always)]
fn naive<T: Real, const N: usize>(x: [T; N]) -> NormalizeOutcome<T, N> {
    let mut sum = x[0] * x[0];
    for v in &x[1..] {
        sum = sum + *v * *v;
    }
    let r = sum.sqrt();
    NormalizeOutcome { length: r, unit: x.map(|v| v / r) }
}

/// Direct evaluation; overflows for `|x| ~ sqrt(omega)` and underflows for
/// `|x| ~ sqrt(nu)`. The zero vector yields NaN components.
#[inline]
pub fn naive_normalize2<T: Real>(x: [T; 2]) -> NormalizeOutcome<T, 2> {
    naive(x)
}

#[inline]
pub fn naive_normalize3<T: Real>(x: [T; 3]) -> NormalizeOutcome<T, 3> {
    naive(x)
}

#[inline]
pub fn naive_normalize4<T: Real>(x: [T; 4]) -> NormalizeOutcome<T, 4> {
    naive(x)
}

/// `max |x_k|`, NaN if any component is NaN.
#[inline(always)]
fn max_abs<T: Real, const N: usize>(x: &[T; N]) -> T {
    let mut m = x[0].abs();
    for v in &x[1..] {
        let a = v.abs();
        if a > m || a.is_nan() {
            m = a;
        }
    }
    m
}

#[inline(always)]
fn quotient<T: Real, const N: usize>(x: [T; N]) -> NormalizeOutcome<T, N> {
    let m = max_abs(&x);
    if m == T::zero() {
        return NormalizeOutcome { length: T::zero(), unit: [T::zero(); N] };
    }
    let y = x.map(|v| v / m);
    let mut sum = y[0] * y[0];
    for v in &y[1..] {
        sum = sum + *v * *v;
    }
    let s = sum.sqrt();
    NormalizeOutcome { length: m * s, unit: y.map(|v| v / s) }
}

/// Robust quotient algorithm for 3D vectors. The zero vector yields length
/// `0` and zero components.
#[inline]
pub fn quotient3_robust<T: Real>(x: [T; 3]) -> NormalizeOutcome<T, 3> {
    quotient(x)
}

/// The robust quotient pattern applied to 2D vectors.
#[inline]
pub fn quotient2<T: Real>(x: [T; 2]) -> NormalizeOutcome<T, 2> {
    quotient(x)
}

/// The robust quotient pattern applied to quaternions (zero stays zero).
#[inline]
pub fn quotient4<T: Real>(x: [T; 4]) -> NormalizeOutcome<T, 4> {
    quotient(x)
}

/// Pivoted quotient algorithm: divide the two smaller components by the
/// largest one. Returns NaNs whenever the input holds a NaN.
#[inline]
pub fn quotient3_fast<T: Real>(x: [T; 3]) -> NormalizeOutcome<T, 3> {
    let [x1, x2, x3] = x;
    if x1.abs() > x2.abs() {
        if x3.abs() > x1.abs() {
            pivot(x3, x1, x2, |a, b, c| [b, c, a])
        } else {
            pivot(x1, x2, x3, |a, b, c| [a, b, c])
        }
    } else if x3.abs() >= x2.abs() {
        if x3 == T::zero() {
            // Here x1 is zero unless it is NaN, which must reach the output.
            let z = x1.abs() * T::zero();
            return NormalizeOutcome { length: z, unit: [z; 3] };
        }
        pivot(x3, x1, x2, |a, b, c| [b, c, a])
    } else {
        pivot(x2, x1, x3, |a, b, c| [b, a, c])
    }
}

/// Normalize with `p` as pivot; `place` puts (pivot, first, second) back in
/// component order.
#[inline(always)]
fn pivot<T: Real>(p: T, a: T, b: T, place: impl Fn(T, T, T) -> [T; 3]) -> NormalizeOutcome<T, 3> {
    let qa = a / p;
    let qb = b / p;
    let h = (T::one() + qa * qa + qb * qb).sqrt();
    let r = p.abs() * h;
    let s = p.signum() / h;
    NormalizeOutcome { length: r, unit: place(s, qa * s, qb * s) }
}
