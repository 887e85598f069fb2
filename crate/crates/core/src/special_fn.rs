//! Complex Fresnel integral `F(x) = ∫₀ˣ exp(jπt²/2) dt = C(x) + j·S(x)`.
//!
//! This π/2-normalised kernel is the only convention used in the crate.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this magnitude the power series is used, above it the continued
/// fraction for the complementary error function.
const SERIES_LIMIT: f64 = 1.6;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 200;

/// `F(x)` for finite real `x`.
pub fn fresnel(x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(fresnel_finite(x))
}

/// Conjugate `F*(x)`.
pub fn fresnel_conj(x: f64) -> Result<Complex64> {
    fresnel(x).map(|f| f.conj())
}

/// `F(x)` without the finiteness check.
pub(crate) fn fresnel_finite(x: f64) -> Complex64 {
    let ax = x.abs();
    let f = if ax <= SERIES_LIMIT {
        series(ax)
    } else {
        continued_fraction(ax)
    };
    if x < 0.0 {
        -f
    } else {
        f
    }
}

/// `x · Σ (jπx²/2)^m / (m! (2m+1))`.
fn series(x: f64) -> Complex64 {
    let w = Complex64::new(0.0, 0.5 * PI * x * x);
    let mut power = Complex64::new(x, 0.0);
    let mut sum = power;
    for m in 1..MAX_ITER {
        power = power * w / m as f64;
        let term = power / (2 * m + 1) as f64;
        sum += term;
        if term.norm() <= EPS * sum.norm() {
            break;
        }
    }
    sum
}

/// Modified Lentz evaluation of the erfc continued fraction, valid for
/// x > ~1.5.
fn continued_fraction(x: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let tiny = 1e-300;
    let pix = PI * x;
    let mut b = Complex64::new(1.0, -pix * x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0_f64;
    for _ in 1..MAX_ITER {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = one / (d * a + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta.re - 1.0).abs() + delta.im.abs() < EPS {
            break;
        }
    }
    h *= Complex64::new(x, -x);
    let phase = Complex64::from_polar(1.0, 0.5 * pix * x);
    Complex64::new(0.5, 0.5) * (one - phase * h)
}
