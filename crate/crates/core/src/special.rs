//! The Gaussian-cloud potential function `Na` and the complex error function.
//!
//! `Na(a²) = ∫ exp(−(r − a)²) / |r| d³r` up to a constant factor, written as a
//! power series in the scalar `a² = a·a` of a possibly complex 3-vector `a`:
//!
//! ```text
//! Na(a²) = π^{3/2} exp(−a²) Σ_k a^{2k} / (2 Γ(k + 3/2))
//!        = (π^{3/2} / 2) erf(a) / a
//! ```
//!
//! The function is entire and even in `a`, so either square root of `a²` may
//! be used in the closed form. Note that the series is half of the integral it
//! is named after; the potentials module carries the compensating constant.

use std::f64::consts::PI;

use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::CVec3;

/// Complex scalar.
pub type ComplexScalar = Complex64;

/// Default term cap for [`na_series`].
pub const SERIES_TERM_CAP: usize = 500;

/// Radius `|a|` below which [`na_eval`] sums the series; at and above it the
/// closed form through `erf` is used.
pub const SWITCHOVER_RADIUS: f64 = 3.0;

/// Stopping tolerance used by [`na_eval`] for the series branch.
pub const SERIES_TOLERANCE: f64 = 1e-16;

/// Sums the `Na` series in `a²` until the next term drops below
/// `tol · |partial sum|`.
pub fn na_series(a_squared: ComplexScalar, tol: f64) -> Result<ComplexScalar> {
    na_series_capped(a_squared, tol, SERIES_TERM_CAP)
}

/// [`na_series`] with an explicit term cap.
pub fn na_series_capped(a_squared: ComplexScalar, tol: f64, cap: usize) -> Result<ComplexScalar> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("series tolerance must be positive, got {tol}")));
    }
    if a_squared.re < 0.0 {
        return maclaurin_series(a_squared, tol, cap);
    }
    // u_k = Γ(3/2) a^{2k} / Γ(k + 3/2), so Na = π e^{−a²} Σ u_k.
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..cap {
        term *= a_squared / (k as f64 + 1.5);
        if term.norm() < tol * sum.norm() {
            return Ok(PI * (-a_squared).exp() * sum);
        }
        sum += term;
    }
    Err(Error::NoConvergence { terms: cap })
}

// Same function from the Maclaurin series of erf(a)/a:
// Na = π Σ (−a²)^k / (k! (2k + 1)). Used for Re a² < 0, where the prefactor
// e^{−a²} above would amplify rounding in the sum.
fn maclaurin_series(a_squared: ComplexScalar, tol: f64, cap: usize) -> Result<ComplexScalar> {
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = power;
    for k in 1..=cap {
        power *= -a_squared / k as f64;
        let term = power / (2 * k + 1) as f64;
        if term.norm() < tol * sum.norm() {
            return Ok(PI * sum);
        }
        sum += term;
    }
    Err(Error::NoConvergence { terms: cap })
}

/// Complex error function.
///
/// Accurate to about 1e−13 relative for `|z| ≤ 8`, `|Im z| ≤ 8`, away from
/// the complex zeros of `erf`. Satisfies `erf(z̄) = conj(erf(z))` and
/// `erf(−z) = −erf(z)` exactly.
pub fn erf_complex(z: ComplexScalar) -> ComplexScalar {
    // Fold into the right half plane and upper half plane so the reflection
    // identities hold bit-for-bit.
    let flip_re = z.re < 0.0;
    let flip_im = z.im < 0.0;
    let folded = Complex64::new(z.re.abs(), z.im.abs());
    let mut value = folded.erf();
    if flip_im {
        value = value.conj();
    }
    if flip_re {
        value = -value.conj();
    }
    value
}

/// Closed form `(π^{3/2}/2) erf(a)/a` with `a = sqrt(a²)`.
pub fn na_closed_form(a_squared: ComplexScalar) -> ComplexScalar {
    let a = a_squared.sqrt();
    0.5 * PI.powf(1.5) * erf_complex(a) / a
}

/// Evaluates `Na(a·a)` for a complex 3-vector.
///
/// `a·a` is the bilinear dot product without conjugation. The series branch
/// is used for `|a| < 3`, the closed form otherwise; both agree to ~1e−12 in
/// the band `1 ≤ |a| ≤ 4`.
pub fn na_eval(a: &CVec3) -> Result<ComplexScalar> {
    na_of_square(a.x * a.x + a.y * a.y + a.z * a.z)
}

/// [`na_eval`] for an already formed scalar `a²`.
pub fn na_of_square(a_squared: ComplexScalar) -> Result<ComplexScalar> {
    if a_squared.norm().sqrt() < SWITCHOVER_RADIUS {
        na_series(a_squared, SERIES_TOLERANCE)
    } else {
        Ok(na_closed_form(a_squared))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // erf reference values computed with mpmath at 40 digits.
    const ERF_TABLE: [(f64, f64, f64, f64); 10] = [
        (0.5, 0.5, 0.642_612_914_854_820_53, 0.457_881_394_435_192_22),
        (2.0, 1.0, 1.003_606_342_725_651_8, -0.011_259_006_028_815_025),
        (-1.5, 3.0, -118.855_904_046_575_5, -88.120_890_671_506_46),
        (0.3, -7.5, -1.802_446_403_256_367e23, 4.662_161_792_588_62e22),
        (6.0, 6.0, 1.057_634_240_135_678_6, -0.033_139_114_741_156_5),
        (7.9, 0.2, 1.0, -2.511_565_405_087_599_4e-30),
        (0.01, 0.02, 0.011_287_929_523_862_137, 0.022_568_335_165_829_54),
        (3.0, -2.0, 0.998_963_278_856_817_3, 1.154_672_437_929_060_3e-5),
        (-4.0, -7.0, 13_259_529_390_628.82, -7_178_870_339_253.993),
        (0.001, 5.0, 81_247_447.118_625_23, 8_297_867_640.123_574),
    ];

    #[test]
    fn erf_matches_reference_table() {
        assert_eq!(erf_complex(c(0.0, 0.0)), c(0.0, 0.0));
        assert!((erf_complex(c(1.0, 0.0)).re - 0.842_700_792_949_714_9).abs() < 1e-15);
        for (re, im, vr, vi) in ERF_TABLE {
            let got = erf_complex(c(re, im));
            assert!(rel(got, c(vr, vi)) < 1e-12, "erf({re}+{im}i) = {got}, want {vr}+{vi}i");
        }
    }

    #[test]
    fn erf_tends_to_one_on_real_axis() {
        assert!((erf_complex(c(10.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn erf_reflections_are_exact() {
        for (re, im, _, _) in ERF_TABLE {
            let z = c(re, im);
            assert_eq!(erf_complex(z.conj()), erf_complex(z).conj());
            assert_eq!(erf_complex(-z), -erf_complex(z));
        }
    }

    #[test]
    fn series_at_zero_is_pi() {
        assert_eq!(na_series(c(0.0, 0.0), 1e-14).unwrap(), c(PI, 0.0));
    }

    #[test]
    fn series_matches_erf_identity_at_one() {
        let v = na_series(c(1.0, 0.0), 1e-14).unwrap();
        assert!((v.re - 2.346_217_209_167_088_8).abs() < 1e-13);
    }

    #[test]
    fn series_with_negative_square_is_real() {
        let v = na_series(c(-1.0, 0.0), 1e-14).unwrap();
        assert!((v.re - 4.595_055_979_702_286_7).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn series_reports_no_convergence() {
        assert_eq!(
            na_series_capped(c(400.0, 0.0), 1e-14, 20),
            Err(Error::NoConvergence { terms: 20 })
        );
        assert!(na_series(c(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn complex_squares_match_reference() {
        // (a², Na) pairs from mpmath.
        let table = [
            (c(2.0, 3.0), c(1.332_271_425_137_267_6, -0.729_339_000_653_934_2)),
            (c(-5.0, 1.0), c(37.873_406_191_250_78, -36.504_304_656_100_55)),
            (c(20.0, -30.0), c(0.408_806_040_294_170_25, 0.218_786_353_218_573_13)),
            (c(-40.0, 0.5), c(8_272_985_747_148_351.0, -4_384_418_099_856_743.0)),
        ];
        for (a2, want) in table {
            let got = na_of_square(a2).unwrap();
            assert!(rel(got, want) < 1e-12, "Na({a2}) = {got}, want {want}");
        }
    }

    #[test]
    fn eval_limits() {
        let zero = CVec3::zeros();
        assert_eq!(na_eval(&zero).unwrap(), c(PI, 0.0));
        let far = CVec3::new(c(0.0, 0.0), c(0.0, 0.0), c(10.0, 0.0));
        let want = 0.5 * PI.powf(1.5) / 10.0;
        assert!((na_eval(&far).unwrap().re - want).abs() < 1e-10 * want);
    }

    #[test]
    fn branches_agree_in_overlap_band() {
        for i in 0..=30 {
            let r = 1.0 + 0.1 * i as f64;
            for j in 0..64 {
                let angle = -PI + 2.0 * PI * j as f64 / 63.0;
                let a2 = Complex64::from_polar(r * r, angle);
                let s = na_series(a2, 1e-16).unwrap();
                let cf = na_closed_form(a2);
                assert!(rel(s, cf) < 1e-10, "|a|={r} arg={angle}: {s} vs {cf}");
            }
        }
    }
}
