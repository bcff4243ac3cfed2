//! Statistical checks on the seeded input generator.

use normscale::bench::inputs::leading_exponent;
use normscale::bench::{generate_inputs, Regime};
use normscale::{FpParams, Real};

/// Pearson statistic of `counts` against equal expected frequencies.
fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// Leading exponents of nonzero components counted in `bands` bands of
/// `width` exponents starting at `lo`; anything past the last band is
/// ignored. Also returns the number of zero components.
fn exponent_bands<T: Real>(xs: &[[T; 3]], lo: i32, width: i32, bands: usize) -> (Vec<u64>, u64) {
    let mut counts = vec![0u64; bands];
    let mut zeros = 0;
    for c in xs.iter().flatten() {
        if *c == T::zero() {
            zeros += 1;
            continue;
        }
        let e = leading_exponent(*c);
        assert!(e >= lo, "exponent {e} below {lo}");
        if let Some(slot) = counts.get_mut(((e - lo) / width) as usize) {
            *slot += 1;
        }
    }
    (counts, zeros)
}

// With 38 degrees of freedom the 0.999 quantile of chi-square is about 70.7.
const CHI2_38_DOF_999: f64 = 70.7;

#[test]
fn mixed_exponents_are_uniform_in_double() {
    let xs = generate_inputs::<f64, 3>(Regime::Mixed, 100_000, 42);
    // -1074..=1023 spans 2098 exponents: 39 bands of 53 cover all but the top 31.
    let (counts, zeros) = exponent_bands(&xs, -1074, 53, 39);
    let chi2 = chi_square(&counts);
    assert!(chi2 < CHI2_38_DOF_999, "chi-square {chi2:.1} over {counts:?}");

    // About one component in sixteen is an exact zero.
    let frac = zeros as f64 / (3.0 * xs.len() as f64);
    assert!((frac - 1.0 / 16.0).abs() < 0.003, "zero fraction {frac}");
}

#[test]
fn mixed_exponents_are_uniform_in_single() {
    let xs = generate_inputs::<f32, 3>(Regime::Mixed, 100_000, 43);
    // -149..=127 spans 277 exponents: 39 bands of 7 cover all but the top 4.
    let (counts, _) = exponent_bands(&xs, -149, 7, 39);
    let chi2 = chi_square(&counts);
    assert!(chi2 < CHI2_38_DOF_999, "chi-square {chi2:.1} over {counts:?}");
}

#[test]
fn signs_are_balanced() {
    let xs = generate_inputs::<f64, 4>(Regime::All, 50_000, 3);
    let (neg, pos) = xs.iter().flatten().filter(|c| **c != 0.0).fold((0u64, 0u64), |(n, p), c| {
        if c.is_sign_negative() {
            (n + 1, p)
        } else {
            (n, p + 1)
        }
    });
    // Two-bucket chi-square, 1 degree of freedom, 0.999 quantile 10.83.
    assert!(chi_square(&[neg, pos]) < 10.83, "{neg} negative vs {pos} positive");
}

#[test]
fn regimes_respect_their_magnitude_ranges() {
    let p = FpParams::<f64>::ieee();
    for x in generate_inputs::<f64, 3>(Regime::Normal, 10_000, 1) {
        assert!(x.iter().all(|c| c.abs() >= p.tau_min() && c.abs() < p.tau_max()), "{x:?}");
    }
    for x in generate_inputs::<f64, 3>(Regime::Subnormal, 10_000, 1) {
        assert!(x.iter().all(|c| *c != 0.0 && c.abs() < f64::MIN_POSITIVE), "{x:?}");
    }
    for x in generate_inputs::<f64, 3>(Regime::Huge, 10_000, 1) {
        assert!(x.iter().all(|c| c.is_finite() && c.abs() > p.tau_max()), "{x:?}");
    }
    for x in generate_inputs::<f64, 4>(Regime::UnitIsh, 10_000, 1) {
        let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() <= 2f64.powi(-10) * 1.001, "{x:?} has norm {n}");
    }
}

#[test]
fn seeds_reproduce_and_differ() {
    let a = generate_inputs::<f32, 2>(Regime::All, 1000, 9);
    assert_eq!(a, generate_inputs::<f32, 2>(Regime::All, 1000, 9));
    assert_ne!(a, generate_inputs::<f32, 2>(Regime::All, 1000, 10));
}
