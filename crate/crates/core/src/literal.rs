//! Numeric literals: hexadecimal floats (`0x1.8p+3`), decimals, and `2^k`.
//!
//! Hexadecimal output is bit-exact and round-trips through [`parse`]. Parsing
//! rounds to nearest, ties to even, when a literal carries more bits than the
//! target format holds.

use crate::error::{Error, Result};
use crate::float::Real;

/// C99 `%a` style rendering: `0x1.8p+1`, `-0x0.0000000000001p-1022`, `inf`, `nan`.
pub fn format_hex<T: Real>(x: T) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    if x == T::zero() {
        return format!("{sign}0x0p+0");
    }
    let frac_bits = T::FRACTION_BITS;
    let bits = x.abs().to_raw();
    let frac = bits & ((1u64 << frac_bits) - 1);
    let biased = bits >> frac_bits;
    let bias = i64::from(T::FORMAT.max_exponent());
    // Pad the fraction out to a whole number of hex digits.
    let digits = frac_bits.div_ceil(4);
    let padded = frac << (digits * 4 - frac_bits);
    let (lead, exp) = if biased == 0 { (0, 1 - bias) } else { (1, biased as i64 - bias) };
    let mut hex = format!("{:0width$x}", padded, width = digits as usize);
    while hex.ends_with('0') {
        hex.pop();
    }
    let exp_sign = if exp < 0 { '-' } else { '+' };
    if hex.is_empty() {
        format!("{sign}0x{lead}p{exp_sign}{}", exp.abs())
    } else {
        format!("{sign}0x{lead}.{hex}p{exp_sign}{}", exp.abs())
    }
}

/// Shortest round-trip decimal, switching to scientific notation outside
/// `[1e-5, 1e16)`.
pub fn format_decimal<T: Real>(x: T) -> String {
    let a = x.abs();
    if x.is_nan() {
        // Match the spelling `parse` and `format_hex` use.
        "nan".to_string()
    } else if x.is_finite() && a != T::zero() && (a < T::from_f64(1e-5) || a >= T::from_f64(1e16)) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Parse a hexadecimal float, a decimal literal, `2^k`, `inf` or `nan`.
pub fn parse<T: Real>(s: &str) -> Result<T> {
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let lower = body.to_ascii_lowercase();
    let magnitude = if let Some(hex) = lower.strip_prefix("0x") {
        parse_hex_magnitude::<T>(hex).map_err(|r| Error::literal(s, r))?
    } else if let Some(k) = lower.strip_prefix("2^") {
        let k: i32 = k.trim().parse().map_err(|_| Error::literal(s, "bad exponent after `2^`"))?;
        let v = T::pow2(k);
        if v == T::zero() || v.is_infinite() {
            return Err(Error::literal(s, "power of two not representable in this format"));
        }
        v
    } else {
        match lower.as_str() {
            "inf" | "infinity" => T::infinity(),
            "nan" => T::nan(),
            _ => {
                if lower.is_empty() || !lower.bytes().all(|c| c.is_ascii_digit() || b".e+-".contains(&c)) {
                    return Err(Error::literal(s, "not a numeric literal"));
                }
                let v: f64 = lower.parse().map_err(|_| Error::literal(s, "malformed decimal"))?;
                if T::FORMAT == crate::float::Format::Double {
                    T::from_f64(v)
                } else {
                    // Avoid double rounding through f64.
                    let v32: f32 = lower.parse().map_err(|_| Error::literal(s, "malformed decimal"))?;
                    T::from_f64(f64::from(v32))
                }
            }
        }
    };
    Ok(if neg { -magnitude } else { magnitude })
}

fn parse_hex_magnitude<T: Real>(s: &str) -> std::result::Result<T, String> {
    let (digits, exp_part) = match s.find('p') {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let mut exp2: i64 = match exp_part {
        Some(e) => e.parse::<i64>().map_err(|_| "bad binary exponent".to_string())?,
        None => 0,
    };
    let mut mant: u128 = 0;
    let mut sticky = false;
    let mut seen_digit = false;
    let mut seen_point = false;
    for c in digits.chars() {
        if c == '.' {
            if seen_point {
                return Err("more than one radix point".into());
            }
            seen_point = true;
            continue;
        }
        let d = c.to_digit(16).ok_or_else(|| format!("unexpected character `{c}`"))?;
        seen_digit = true;
        if mant >> 124 == 0 {
            mant = (mant << 4) | u128::from(d);
            if seen_point {
                exp2 -= 4;
            }
        } else {
            sticky |= d != 0;
            if !seen_point {
                exp2 += 4;
            }
        }
    }
    if !seen_digit {
        return Err("no hexadecimal digits".into());
    }
    if mant == 0 {
        return Ok(T::zero());
    }
    Ok(round_to::<T>(mant, exp2, sticky))
}

/// Round `mant * 2^exp2` (plus a nonzero tail below it when `sticky`) to `T`.
fn round_to<T: Real>(mant: u128, exp2: i64, sticky: bool) -> T {
    let lz = mant.leading_zeros();
    let mant = mant << lz;
    let exp2 = exp2 - i64::from(lz);
    let fmt = T::FORMAT;
    let p = i64::from(fmt.precision());
    let lead = exp2 + 127;
    if lead > i64::from(fmt.max_exponent()) + 1 {
        return T::infinity();
    }
    let quantum = (lead - p + 1).max(i64::from(fmt.min_exponent()));
    let shift = quantum - exp2;
    debug_assert!(shift > 0);
    let (mut n, round, rest) = if shift > 128 {
        (0u128, false, true)
    } else if shift == 128 {
        (0u128, mant >> 127 == 1, (mant << 1) != 0 || sticky)
    } else {
        let n = mant >> shift;
        let round = (mant >> (shift - 1)) & 1 == 1;
        let rest = shift > 1 && (mant & ((1u128 << (shift - 1)) - 1)) != 0;
        (n, round, rest || sticky)
    };
    if round && (rest || n & 1 == 1) {
        n += 1;
    }
    // n <= 2^p, exactly representable; the power-of-two product is exact
    // unless it overflows, which is then the correctly rounded result.
    T::from_f64(n as f64) * T::pow2(quantum as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_c_percent_a() {
        assert_eq!(format_hex(1.0f64), "0x1p+0");
        assert_eq!(format_hex(3.0f64), "0x1.8p+1");
        assert_eq!(format_hex(-0.1f64), "-0x1.999999999999ap-4");
        assert_eq!(format_hex(f64::from_bits(1)), "0x0.0000000000001p-1022");
        assert_eq!(format_hex(f64::MAX), "0x1.fffffffffffffp+1023");
        assert_eq!(format_hex(100.0f32), "0x1.9p+6");
        assert_eq!(format_hex(f32::from_bits(1)), "0x0.000002p-126");
        assert_eq!(format_hex(-f32::from_bits(1)), "-0x0.000002p-126");
        assert_eq!(format_hex(-1.5f32), "-0x1.8p+0");
        assert_eq!(format_hex(-0.0f64), "-0x0p+0");
        assert_eq!(format_hex(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_hex(f32::NAN), "nan");
    }

    #[test]
    fn parses_all_literal_kinds() {
        assert_eq!(parse::<f64>("0x1.8p1").unwrap(), 3.0);
        assert_eq!(parse::<f64>("0x0.0008p-7").unwrap(), 2f64.powi(-20));
        assert_eq!(parse::<f64>("-0X10").unwrap(), -16.0);
        assert_eq!(parse::<f64>("2^-1074").unwrap(), f64::from_bits(1));
        assert_eq!(parse::<f32>("2^100").unwrap(), 2f32.powi(100));
        assert_eq!(parse::<f64>("12.5").unwrap(), 12.5);
        assert_eq!(parse::<f32>("0.1").unwrap(), 0.1f32);
        assert_eq!(parse::<f64>("1e-320").unwrap(), 1e-320);
        assert!(parse::<f64>("inf").unwrap().is_infinite());
        assert!(parse::<f64>("nan").unwrap().is_nan());
        assert!(parse::<f64>("2^-1075").is_err());
        assert!(parse::<f64>("0x1.2.3").is_err());
        assert!(parse::<f64>("abc").is_err());
        assert!(parse::<f64>("0xp3").is_err());
    }

    #[test]
    fn hex_parse_rounds_to_nearest_even() {
        // 1 + 2^-53 is a tie between 1 and 1 + 2^-52: even wins.
        assert_eq!(parse::<f64>("0x1.00000000000008p0").unwrap(), 1.0);
        assert_eq!(parse::<f64>("0x1.00000000000018p0").unwrap(), 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(parse::<f64>("0x1.000000000000080000001p0").unwrap(), 1.0 + f64::EPSILON);
        assert_eq!(parse::<f32>("0x1.000001p0").unwrap(), 1.0);
        assert_eq!(parse::<f32>("0x1.000003p0").unwrap(), 1.0 + 2.0 * f32::EPSILON);
        assert_eq!(parse::<f32>("0x1.0000030001p0").unwrap(), 1.0 + 2.0 * f32::EPSILON);
        assert_eq!(parse::<f32>("0x1.0000010001p0").unwrap(), 1.0 + f32::EPSILON);
        // Half the smallest subnormal ties to zero; just above rounds up.
        assert_eq!(parse::<f64>("0x1p-1075").unwrap(), 0.0);
        assert_eq!(parse::<f64>("0x1.0000001p-1075").unwrap(), f64::from_bits(1));
        assert_eq!(parse::<f64>("0x1p1024").unwrap(), f64::INFINITY);
        assert_eq!(parse::<f64>("0x1.fffffffffffff8p1023").unwrap(), f64::INFINITY);
    }

    #[test]
    fn decimal_rendering_switches_notation() {
        assert_eq!(format_decimal(13.0f64), "13");
        assert_eq!(format_decimal(0.25f64), "0.25");
        assert_eq!(format_decimal(f64::from_bits(1)), "5e-324");
        assert_eq!(format_decimal(2f64.powi(600)), "4.149515568880993e180");
        assert_eq!(format_decimal(f64::NAN), "nan");
        assert_eq!(format_decimal(f32::NEG_INFINITY), "-inf");
    }

    proptest::proptest! {
        #[test]
        fn hex_round_trips_every_f64(bits in proptest::num::u64::ANY) {
            let x = f64::from_bits(bits);
            let back: f64 = parse(&format_hex(x)).unwrap();
            if x.is_nan() {
                proptest::prop_assert!(back.is_nan());
            } else {
                proptest::prop_assert_eq!(back.to_bits(), x.to_bits());
            }
        }

        #[test]
        fn hex_round_trips_every_f32(bits in proptest::num::u32::ANY) {
            let x = f32::from_bits(bits);
            let back: f32 = parse(&format_hex(x)).unwrap();
            if x.is_nan() {
                proptest::prop_assert!(back.is_nan());
            } else {
                proptest::prop_assert_eq!(back.to_bits(), x.to_bits());
            }
        }
    }
}
