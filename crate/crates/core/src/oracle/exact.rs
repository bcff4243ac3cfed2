//! Exact dyadic arithmetic.
//!
//! Every finite binary float is an integer times a power of two, so sums,
//! differences and products of floats can be carried out with no rounding
//! at all. Division and square roots round toward zero to a requested number
//! of bits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::float::Real;

/// `mantissa * 2^exponent`, kept with an odd mantissa (or zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.trim();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mantissa: BigInt::from(1), exponent: k }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_real<T: Real>(x: T) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let (mant, exp, sign) = x.integer_decode();
        let m = BigInt::from(mant);
        Some(Dyadic::new(if sign < 0 { -m } else { m }, i64::from(exp)))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Multiply by `2^k`; always exact.
    pub fn scale_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Dyadic::new(&self.mantissa * n, self.exponent)
    }

    /// Position of the leading bit: `2^e <= |self| < 2^(e+1)`.
    pub fn leading_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64 - 1)
        }
    }

    /// Quotient truncated toward zero to at least `bits` significant bits.
    ///
    /// Panics on division by zero.
    pub fn div(&self, other: &Dyadic, bits: u32) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = i64::from(bits) + other.mantissa.bits() as i64 - self.mantissa.bits() as i64 + 1;
        let shift = shift.max(0);
        let num = &self.mantissa << shift as usize;
        Dyadic::new(num / &other.mantissa, self.exponent - other.exponent - shift)
    }

    /// Square root truncated toward zero to at least `bits` significant bits.
    ///
    /// Panics on negative input.
    pub fn sqrt(&self, bits: u32) -> Dyadic {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mag: BigUint = self.mantissa.magnitude().clone();
        let mut shift = (2 * i64::from(bits) + 2 - mag.bits() as i64).max(0);
        if (self.exponent - shift) % 2 != 0 {
            shift += 1;
        }
        let root = (mag << shift as usize).sqrt();
        Dyadic::new(BigInt::from(root), (self.exponent - shift) / 2)
    }

    /// Nearest-ish `f64` (truncated to 64 bits first); saturates to
    /// infinity and flushes to zero outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (self.mantissa.magnitude() >> drop as usize).to_u64().unwrap_or(u64::MAX);
        let exp = self.exponent + drop;
        let lead = exp + 63;
        let v = if lead > 1100 {
            f64::INFINITY
        } else if lead < -1200 {
            0.0
        } else {
            // Split the power of two so neither factor over- or underflows.
            let half = exp / 2;
            (top as f64) * 2f64.powi(half as i32) * 2f64.powi((exp - half) as i32)
        };
        if self.signum() < 0 {
            -v
        } else {
            v
        }
    }

    /// `self / other` as an `f64`, computed without intermediate overflow.
    pub fn ratio_f64(&self, other: &Dyadic) -> f64 {
        self.div(other, 64).to_f64()
    }

    fn trim(&mut self) {
        match self.mantissa.trailing_zeros() {
            None => self.exponent = 0,
            Some(0) => {}
            Some(tz) => {
                self.mantissa >>= tz as usize;
                self.exponent += tz as i64;
            }
        }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exponent.min(b.exponent);
        let ma = &a.mantissa << (a.exponent - e) as usize;
        let mb = &b.mantissa << (b.exponent - e) as usize;
        (ma, mb, e)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        // Same nonzero sign: compare leading exponents before aligning.
        let (la, lb) = (self.leading_exponent().unwrap(), other.leading_exponent().unwrap());
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (ma, mb, _) = Dyadic::aligned(self, other);
        ma.cmp(&mb)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

macro_rules! forward_owned {
    ($($tr:ident::$m:ident),*) => {$(
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic { (&self).$m(&rhs) }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic { (&self).$m(rhs) }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        -&self
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}
