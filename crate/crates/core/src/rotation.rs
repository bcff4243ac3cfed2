//! Rotation matrices from quaternions `(q1, q2, q3, q4)`, `q4` being the
//! scalar part.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::float::Real;
use crate::oracle::Dyadic;
use crate::params::FpParams;
use crate::scale::scale4;

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RotationMatrix<T> {
    pub rows: [[T; 3]; 3],
}

impl<T: Real> RotationMatrix<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        RotationMatrix { rows: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    pub fn apply(&self, v: [T; 3]) -> [T; 3] {
        self.rows.map(|r| r[0] * v[0] + r[1] * v[1] + r[2] * v[2])
    }

    /// `max_ij |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.rows[i][j] - other.rows[i][j]).abs());
            }
        }
        m
    }

    fn exact(&self) -> Option<[[Dyadic; 3]; 3]> {
        let mut out: [[Dyadic; 3]; 3] = Default::default();
        for (row, src) in out.iter_mut().zip(&self.rows) {
            for (d, v) in row.iter_mut().zip(src) {
                *d = Dyadic::from_real(*v)?;
            }
        }
        Some(out)
    }

    /// `max |R^T R - I|`, evaluated exactly from the stored entries.
    pub fn orthogonality_defect(&self) -> f64 {
        let Some(r) = self.exact() else { return f64::INFINITY };
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut dot: Dyadic = (0..3).map(|k| &r[k][i] * &r[k][j]).sum();
                if i == j {
                    dot = dot - Dyadic::one();
                }
                worst = worst.max(dot.abs().to_f64());
            }
        }
        worst
    }

    /// `|det R - 1|`, evaluated exactly from the stored entries.
    pub fn determinant_defect(&self) -> f64 {
        let Some(r) = self.exact() else { return f64::INFINITY };
        let minor = |a: usize, b: usize| &r[1][a] * &r[2][b] - &r[1][b] * &r[2][a];
        let det = &r[0][0] * &minor(1, 2) - &r[0][1] * &minor(0, 2) + &r[0][2] * &minor(0, 1);
        (det - Dyadic::one()).abs().to_f64()
    }
}

/// `R(q)` for any finite nonzero quaternion, dividing by `|q|^2`.
///
/// The quaternion is first scaled into the safe band; the formula is
/// homogeneous of degree zero, so the scale factor cancels and `|q|^2` never
/// overflows or underflows harmfully.
pub fn rotation_general<T: Real>(p: &FpParams<T>, q: [T; 4]) -> Result<RotationMatrix<T>> {
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("quaternion must be finite".into()));
    }
    let s = scale4(p, q[0], q[1], q[2], q[3]);
    if s.is_zero() {
        return Err(Error::Domain("zero quaternion has no rotation".into()));
    }
    let [a, b, c, d] = s.scaled;
    let n = a * a + b * b + c * c + d * d;
    let two = T::one() + T::one();
    Ok(RotationMatrix {
        rows: [
            [(a * a + d * d - b * b - c * c) / n, two * (a * b - c * d) / n, two * (a * c + b * d) / n],
            [two * (a * b + c * d) / n, (b * b + d * d - a * a - c * c) / n, two * (b * c - a * d) / n],
            [two * (a * c - b * d) / n, two * (b * c + a * d) / n, (c * c + d * d - a * a - b * b) / n],
        ],
    })
}

/// `R(q)` for a quaternion of unit length (e.g. the output of
/// [`normalize4`](crate::normalize::normalize4)); no division.
pub fn rotation_unit<T: Real>(q: [T; 4]) -> RotationMatrix<T> {
    let [a, b, c, d] = q;
    let one = T::one();
    let two = one + one;
    RotationMatrix {
        rows: [
            [one - two * (b * b + c * c), two * (a * b - c * d), two * (a * c + b * d)],
            [two * (a * b + c * d), one - two * (a * a + c * c), two * (b * c - a * d)],
            [two * (a * c - b * d), two * (b * c + a * d), one - two * (a * a + b * b)],
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> FpParams<f64> {
        FpParams::ieee()
    }

    #[test]
    fn scalar_quaternion_is_identity() {
        assert_eq!(rotation_general(&p(), [0.0, 0.0, 0.0, 2.0]).unwrap(), RotationMatrix::identity());
        assert_eq!(rotation_unit([0.0, 0.0, 0.0, 1.0f64]), RotationMatrix::identity());
    }

    #[test]
    fn half_turn_about_first_axis() {
        let r = rotation_general(&p(), [1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.rows, [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);
    }

    #[test]
    fn all_ones_is_a_cyclic_permutation() {
        let r = rotation_general(&p(), [1.0; 4]).unwrap();
        assert_eq!(r.rows, [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        assert_eq!(r.apply([1.0, 2.0, 3.0]), [3.0, 1.0, 2.0]);
    }

    #[test]
    fn quarter_turn_about_third_axis() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = rotation_unit([0.0, 0.0, h, h]);
        let want = RotationMatrix { rows: [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]] };
        assert!(r.max_abs_diff(&want) <= 16.0 * f64::EPSILON / 2.0, "{r:?}");
    }

    #[test]
    fn extreme_magnitudes_do_not_matter() {
        let base = rotation_general(&p(), [0.3, -0.2, 0.9, 0.1]).unwrap();
        for k in [-1000, -600, 600, 1000] {
            let s = f64::pow2(k);
            let r = rotation_general(&p(), [0.3 * s, -0.2 * s, 0.9 * s, 0.1 * s]).unwrap();
            assert!(r.max_abs_diff(&base) <= 4.0 * f64::EPSILON / 2.0, "k = {k}");
        }
    }

    #[test]
    fn zero_or_non_finite_quaternion_is_rejected() {
        assert!(matches!(rotation_general(&p(), [0.0; 4]), Err(Error::Domain(_))));
        assert!(rotation_general(&p(), [f64::NAN, 0.0, 0.0, 1.0]).is_err());
        assert!(rotation_general(&p(), [f64::INFINITY, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn defects_of_exact_rotations_vanish() {
        let r = rotation_general(&p(), [1.0; 4]).unwrap();
        assert_eq!(r.orthogonality_defect(), 0.0);
        assert_eq!(r.determinant_defect(), 0.0);
        let reflect = RotationMatrix { rows: [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };
        assert_eq!(reflect.determinant_defect(), 2.0);
    }
}
