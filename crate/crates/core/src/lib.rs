//! Overflow- and underflow-robust normalization of 2D and 3D vectors and
//! quaternions.
//!
//! The kernels in [`normalize`] bring the input into a safe magnitude band
//! by multiplying with an exact power of two, normalize there, and undo the
//! scaling on the length only. No division by a data-dependent value is
//! needed before the square root, so the common case costs little more than
//! the textbook formula while never overflowing or losing the direction to
//! underflow.
//!
//! ```
//! use normscale::{normalize3, FpParams};
//!
//! let p = FpParams::<f64>::ieee();
//! let big = 2f64.powi(600);
//! let out = normalize3(&p, [3.0 * big, 4.0 * big, 12.0 * big]);
//! assert_eq!(out.length, 13.0 * big);
//! assert!((out.unit[1] - 4.0 / 13.0).abs() <= f64::EPSILON);
//! ```

pub mod algorithm;
pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod float;
pub mod literal;
pub mod normalize;
pub mod oracle;
pub mod params;
pub mod rotation;
pub mod scale;

pub use algorithm::Algorithm;
pub use error::{Error, Result};
pub use float::{Format, Real};
pub use normalize::{norm2, norm3, norm4, normalize2, normalize3, normalize4, NormalizeOutcome};
pub use params::{Condition, FpParams, Param};
pub use rotation::{rotation_general, rotation_unit, RotationMatrix};
pub use scale::{scale2, scale3, scale4, ScaleOutcome};
