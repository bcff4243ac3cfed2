//! The binary IEEE formats the kernels are instantiated for.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Binary interchange formats supported by the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Single,
    Double,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Single => "single",
            Format::Double => "double",
        }
    }

    /// Precision in bits, counting the hidden bit.
    pub fn precision(self) -> u32 {
        match self {
            Format::Single => f32::MANTISSA_DIGITS,
            Format::Double => f64::MANTISSA_DIGITS,
        }
    }

    /// Exponent of the smallest subnormal, `alpha = 2^min_exponent`.
    pub fn min_exponent(self) -> i32 {
        match self {
            Format::Single => -149,
            Format::Double => -1074,
        }
    }

    /// Exponent of the smallest positive normal value.
    pub fn min_normal_exponent(self) -> i32 {
        match self {
            Format::Single => -126,
            Format::Double => -1022,
        }
    }

    /// Exponent of the leading bit of the largest finite value.
    pub fn max_exponent(self) -> i32 {
        match self {
            Format::Single => 127,
            Format::Double => 1023,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" | "f32" | "binary32" => Ok(Format::Single),
            "double" | "f64" | "binary64" => Ok(Format::Double),
            other => Err(format!("unknown format `{other}` (expected single or double)")),
        }
    }
}

impl Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A binary IEEE-754 floating-point type with round-to-nearest arithmetic.
///
/// Implemented for `f32` and `f64` only. Rust never contracts `a * b + c`
/// into a fused multiply-add, so every kernel written against this trait
/// rounds once per operation.
pub trait Real: Float + Debug + Display + LowerExp + Default + Send + Sync + 'static {
    const FORMAT: Format;

    /// Number of explicitly stored fraction bits.
    const FRACTION_BITS: u32;

    fn to_raw(self) -> u64;
    fn from_raw(bits: u64) -> Self;

    /// Widening conversion, exact for both formats.
    fn to_f64(self) -> f64;

    /// Conversion with a single rounding to nearest.
    fn from_f64(x: f64) -> Self;

    /// `2^k`, exact whenever it is representable (including subnormal powers).
    fn pow2(k: i32) -> Self {
        let fmt = Self::FORMAT;
        if k > fmt.max_exponent() {
            return Self::infinity();
        }
        if k < fmt.min_exponent() {
            return Self::zero();
        }
        let bias = fmt.max_exponent();
        if k >= fmt.min_normal_exponent() {
            Self::from_raw(((k + bias) as u64) << Self::FRACTION_BITS)
        } else {
            Self::from_raw(1u64 << (k - fmt.min_exponent()))
        }
    }

    /// Unit roundoff for round-to-nearest, `2^-precision`.
    fn unit_roundoff() -> Self {
        Self::pow2(-(Self::FORMAT.precision() as i32))
    }

    /// Smallest positive (subnormal) value.
    fn smallest_subnormal() -> Self {
        Self::from_raw(1)
    }
}

impl Real for f32 {
    const FORMAT: Format = Format::Single;
    const FRACTION_BITS: u32 = 23;

    fn to_raw(self) -> u64 {
        u64::from(self.to_bits())
    }

    fn from_raw(bits: u64) -> Self {
        f32::from_bits(bits as u32)
    }

    fn to_f64(self) -> f64 {
        f64::from(self)
    }

    fn from_f64(x: f64) -> Self {
        x as f32
    }
}

impl Real for f64 {
    const FORMAT: Format = Format::Double;
    const FRACTION_BITS: u32 = 52;

    fn to_raw(self) -> u64 {
        self.to_bits()
    }

    fn from_raw(bits: u64) -> Self {
        f64::from_bits(bits)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn from_f64(x: f64) -> Self {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_covers_subnormal_and_normal_range() {
        assert_eq!(f64::pow2(0), 1.0);
        assert_eq!(f64::pow2(-1074), f64::from_bits(1));
        assert_eq!(f64::pow2(-1022), f64::MIN_POSITIVE);
        assert_eq!(f64::pow2(1023), 8.98846567431158e307);
        assert_eq!(f64::pow2(1024), f64::INFINITY);
        assert_eq!(f64::pow2(-1075), 0.0);
        assert_eq!(f32::pow2(-149), f32::from_bits(1));
        assert_eq!(f32::pow2(-126), f32::MIN_POSITIVE);
        assert_eq!(f32::pow2(100), 1.2676506e30);
    }

    #[test]
    fn unit_roundoff_matches_half_epsilon() {
        assert_eq!(f64::unit_roundoff(), f64::EPSILON / 2.0);
        assert_eq!(f32::unit_roundoff(), f32::EPSILON / 2.0);
    }
}
