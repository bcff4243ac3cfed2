use crate::error::{Error, Result};
use crate::float::Real;

use super::exact::Dyadic;
use super::ORACLE_BITS;

/// Length and unit direction carried to [`ORACLE_BITS`] significant bits.
#[derive(Clone, Debug, PartialEq)]
pub struct Reference {
    /// Exact `sum x_k^2`.
    pub sum_sq: Dyadic,
    pub length: Dyadic,
    pub unit: Vec<Dyadic>,
}

impl Reference {
    pub fn length_f64(&self) -> f64 {
        self.length.to_f64()
    }

    pub fn unit_f64(&self) -> Vec<f64> {
        self.unit.iter().map(Dyadic::to_f64).collect()
    }
}

/// Reference normalization of a finite, nonzero vector of any length.
///
/// Squares and their sum are exact; the root and the quotients are
/// truncated to `ORACLE_BITS` bits, so each result has relative error
/// below `2^-(ORACLE_BITS - 2)`.
pub fn ref_normalize<T: Real>(x: &[T]) -> Result<Reference> {
    let xs: Vec<Dyadic> = x
        .iter()
        .map(|v| Dyadic::from_real(*v))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Domain("reference input must be finite".into()))?;
    let sum_sq: Dyadic = xs.iter().map(Dyadic::square).sum();
    if sum_sq.is_zero() {
        return Err(Error::Domain("reference input must be nonzero".into()));
    }
    let length = sum_sq.sqrt(ORACLE_BITS);
    let unit = xs.iter().map(|v| v.div(&length, ORACLE_BITS)).collect();
    Ok(Reference { sum_sq, length, unit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagorean_reference() {
        let r = ref_normalize(&[3.0f64, 4.0]).unwrap();
        assert_eq!(r.length, Dyadic::from_int(5));
        assert_eq!(r.length_f64(), 5.0);
        assert_eq!(r.unit_f64(), vec![0.6, 0.8]);
    }

    #[test]
    fn sqrt3_to_full_precision() {
        let r = ref_normalize(&[1.0f32, 1.0, 1.0]).unwrap();
        let three = Dyadic::from_int(3);
        // r^2 <= 3 < (r + ulp)^2 at 256 bits
        assert!(r.length.square() <= three);
        let ulp = Dyadic::pow2(1 - i64::from(ORACLE_BITS));
        assert!((&r.length + &ulp).square() > three);
    }

    #[test]
    fn subnormal_reference_is_scaled_exactly() {
        let a = f64::from_bits(1);
        let r = ref_normalize(&[a, a]).unwrap();
        let sqrt2 = ref_normalize(&[1.0f64, 1.0]).unwrap().length;
        assert_eq!(r.length, sqrt2.scale_pow2(-1074));
        assert_eq!(r.sum_sq, Dyadic::pow2(-2147));
    }

    #[test]
    fn unit_has_norm_one_to_oracle_precision() {
        let r = ref_normalize(&[1e-300f64, 7.0, -2e10, 0.1]).unwrap();
        let n: Dyadic = r.unit.iter().map(Dyadic::square).sum();
        let err = (n - Dyadic::one()).abs();
        assert!(err < Dyadic::pow2(-100));
    }

    #[test]
    fn zero_and_non_finite_are_domain_errors() {
        assert!(ref_normalize(&[0.0f64, -0.0]).is_err());
        assert!(ref_normalize(&[f64::INFINITY, 1.0]).is_err());
    }

    #[test]
    fn oracle_precision_dominates_both_formats() {
        const { assert!(ORACLE_BITS >= f64::MANTISSA_DIGITS + 100) };
        const { assert!(ORACLE_BITS > 128) };
    }
}
