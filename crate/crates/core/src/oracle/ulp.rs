use crate::float::Real;

/// Position of `x` on the line of representable values, with `-0` and `+0`
/// sharing the origin.
fn ordinal<T: Real>(x: T) -> i128 {
    let bits = x.to_raw();
    let sign_bit = 1u64 << (T::FORMAT.precision() - 1 + exponent_width::<T>());
    let magnitude = i128::from(bits & (sign_bit - 1));
    if bits & sign_bit != 0 {
        -magnitude
    } else {
        magnitude
    }
}

fn exponent_width<T: Real>() -> u32 {
    match T::FORMAT {
        crate::float::Format::Single => 8,
        crate::float::Format::Double => 11,
    }
}

/// Number of representable steps from `a` to `b`: the count of values strictly
/// between them, plus one unless they are equal. Symmetric. Both arguments
/// must be finite.
pub fn ulp_distance<T: Real>(a: T, b: T) -> u64 {
    debug_assert!(a.is_finite() && b.is_finite());
    (ordinal(a) - ordinal(b)).unsigned_abs() as u64
}
