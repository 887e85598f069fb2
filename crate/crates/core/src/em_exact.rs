//! Brute-force physical-optics evaluation of the plate return.
//!
//! The received signal of pair (l, l') is
//!
//! ```text
//! u(t) = -2k²ηL²I₀/(4π)² ∬ g(y, z) exp(jψ(y, z)) dy dz
//! g    = s(t - (r_l + r_l')/c) · cosθ_l cosφ_l cos²θ_l' / (r_l r_l')
//! ψ    = -k (r_l + r_l')
//! ```
//!
//! Direction cosines, for a ray from an antenna at `(-R, 0, z_a)` to the plate
//! point `(0, y, z)` with `ρ² = R² + (z - z_a)²` and `r² = ρ² + y²`:
//! elevation out of the xz-plane (the dipole lies along ŷ) gives
//! `cosθ = ρ/r`; azimuth inside the xz-plane from the plate normal gives
//! `cosφ = R/ρ`. Hence `cosθ_l cosφ_l = R/r_l` and `cos²θ_l' = ρ_l'²/r_l'²`.
//! At the specular point this reduces to `R/r_s³`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scenario::{AntennaPair, Scenario};
use crate::signal::Waveform;
use crate::SPEED_OF_LIGHT;

pub const MIN_POINTS_PER_WAVELENGTH: f64 = 4.0;

/// Nodes per panel for the composite Gauss-Legendre rule.
const GAUSS_ORDER: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Midpoint,
    GaussLegendreComposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub points_per_wavelength: f64,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            points_per_wavelength: 10.0,
            rule: QuadratureRule::Midpoint,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.points_per_wavelength >= MIN_POINTS_PER_WAVELENGTH) {
            return Err(Error::QuadratureTooCoarse(self.points_per_wavelength));
        }
        Ok(())
    }

    /// Nodes and weights along one plate dimension of the given extent.
    fn axis(&self, extent: f64, wavelength: f64) -> Vec<(f64, f64)> {
        if extent <= 0.0 {
            return Vec::new();
        }
        let density = extent / wavelength * self.points_per_wavelength;
        match self.rule {
            QuadratureRule::Midpoint => {
                let n = density.ceil().max(1.0) as usize;
                let h = extent / n as f64;
                (0..n)
                    .map(|i| ((i as f64 + 0.5) * h - 0.5 * extent, h))
                    .collect()
            }
            QuadratureRule::GaussLegendreComposite => {
                let panels = (density / GAUSS_ORDER as f64).ceil().max(1.0) as usize;
                let h = extent / panels as f64;
                let (nodes, weights) = gauss_legendre(GAUSS_ORDER);
                (0..panels)
                    .flat_map(|p| {
                        let mid = (p as f64 + 0.5) * h - 0.5 * extent;
                        nodes
                            .iter()
                            .zip(weights.iter())
                            .map(move |(x, w)| (mid + 0.5 * h * x, 0.5 * h * w))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Folds a y-axis rule onto y ≥ 0. The integrand depends on y² only.
fn fold_symmetric(axis: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = axis.len();
    let mut folded: Vec<(f64, f64)> = (0..n / 2)
        .map(|i| (axis[n - 1 - i].0.abs(), axis[i].1 + axis[n - 1 - i].1))
        .collect();
    if n % 2 == 1 {
        folded.push((0.0, axis[n / 2].1));
    }
    folded
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandSample {
    /// `g(y, z)` including the waveform factor.
    pub amplitude: f64,
    /// `ψ(y, z)`, rad.
    pub phase: f64,
}

impl IntegrandSample {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

/// `r_l + r_l'` for the plate point (0, y, z).
pub fn path_length_sum(pair: &AntennaPair, range: f64, y: f64, z: f64) -> f64 {
    let r2 = range * range + y * y;
    let dt = z - pair.tx_z;
    let dr = z - pair.rx_z;
    (r2 + dt * dt).sqrt() + (r2 + dr * dr).sqrt()
}

/// Geometric part of the integrand: (obliquity / (r_l r_l'), r_l + r_l').
#[inline]
fn kernel(pair: &AntennaPair, range: f64, y: f64, z: f64) -> (f64, f64) {
    let r_sq = range * range;
    let dt = z - pair.tx_z;
    let dr = z - pair.rx_z;
    let rho_r_sq = r_sq + dr * dr;
    let r_t = (r_sq + dt * dt + y * y).sqrt();
    let r_r_sq = rho_r_sq + y * y;
    let r_r = r_r_sq.sqrt();
    let amplitude = (range / r_t) * (rho_r_sq / r_r_sq) / (r_t * r_r);
    (amplitude, r_t + r_r)
}

fn inside_plate(scenario: &Scenario, y: f64, z: f64) -> bool {
    y.abs() <= 0.5 * scenario.plate_width && z.abs() <= 0.5 * scenario.plate_height
}

pub fn integrand_sample(
    pair: &AntennaPair,
    scenario: &Scenario,
    y: f64,
    z: f64,
    t: f64,
    waveform: &Waveform,
) -> Result<IntegrandSample> {
    if !inside_plate(scenario, y, z) {
        return Err(Error::PointOutsidePlate { y, z });
    }
    let (geometric, path) = kernel(pair, scenario.range, y, z);
    Ok(IntegrandSample {
        amplitude: geometric * waveform.value(t - path / SPEED_OF_LIGHT),
        phase: -scenario.wavenumber() * path,
    })
}

/// `g·exp(jψ)` at a plate point.
pub fn integrand(
    pair: &AntennaPair,
    scenario: &Scenario,
    y: f64,
    z: f64,
    t: f64,
    waveform: &Waveform,
) -> Result<Complex64> {
    integrand_sample(pair, scenario, y, z, t, waveform).map(|s| s.value())
}

/// `-2k²ηL²I₀/(4π)²`.
pub fn exact_prefactor(scenario: &Scenario) -> f64 {
    let k = scenario.wavenumber();
    -2.0 * k * k * scenario.free_space_impedance * scenario.antenna_gain_factor / (16.0 * PI * PI)
}

/// Pairwise sum; fixed association order regardless of how `values` was
/// produced.
fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Applies `row` to every folded y-node and returns the rows in order.
fn over_rows<T, F>(scenario: &Scenario, quad: &QuadratureSpec, row: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64, f64, &[(f64, f64)]) -> T + Sync,
{
    let lambda = scenario.wavelength();
    let ys = fold_symmetric(&quad.axis(scenario.plate_width, lambda));
    let zs = quad.axis(scenario.plate_height, lambda);
    ys.par_iter().map(|&(y, wy)| row(y, wy, &zs)).collect()
}

/// `u_{l'l}(t)` by direct quadrature over the plate.
pub fn exact_received_signal(
    pair: &AntennaPair,
    scenario: &Scenario,
    t: f64,
    waveform: &Waveform,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    let k = scenario.wavenumber();
    let range = scenario.range;
    let rows = over_rows(scenario, quad, |y, wy, zs| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(z, wz) in zs {
            let (geometric, path) = kernel(pair, range, y, z);
            let s = waveform.value(t - path / SPEED_OF_LIGHT);
            let (sin, cos) = (k * path).sin_cos();
            let a = geometric * s * wz;
            acc += Complex64::new(a * cos, -a * sin);
        }
        acc * wy
    });
    Ok(pairwise_sum(&rows) * exact_prefactor(scenario))
}

/// Plate response of one pair binned by path length `r_l + r_l'`.
///
/// Because the waveform enters the integrand only through
/// `s(t - (r_l + r_l')/c)`, the received signal at any `t` is
/// `Σ_b w_b s(t - p_b/c)` over the bins. Each cell's weight is split linearly
/// between its two neighbouring bins, so the total weight equals the plain
/// quadrature sum and a constant waveform is reproduced exactly.
#[derive(Debug, Clone)]
pub struct DelayProfile {
    pub path_start: f64,
    pub bin_width: f64,
    /// Prefactor already applied.
    pub weights: Vec<Complex64>,
}

impl DelayProfile {
    pub fn compute(
        pair: &AntennaPair,
        scenario: &Scenario,
        quad: &QuadratureSpec,
        bin_width: f64,
    ) -> Result<Self> {
        quad.validate()?;
        let k = scenario.wavenumber();
        let range = scenario.range;
        // Path lengths over the plate are bounded by the corners and 2R.
        let hy = 0.5 * scenario.plate_width;
        let hz = 0.5 * scenario.plate_height;
        let mut longest: f64 = 0.0;
        for (y, z) in [(hy, hz), (hy, -hz)] {
            longest = longest.max(path_length_sum(pair, range, y, z));
        }
        let path_start = 2.0 * range - bin_width;
        let n_bins = ((longest - path_start) / bin_width).ceil() as usize + 2;

        let rows = over_rows(scenario, quad, |y, wy, zs| {
            let mut bins = vec![Complex64::new(0.0, 0.0); n_bins];
            for &(z, wz) in zs {
                let (geometric, path) = kernel(pair, range, y, z);
                let (sin, cos) = (k * path).sin_cos();
                let a = geometric * wz * wy;
                let w = Complex64::new(a * cos, -a * sin);
                let pos = (path - path_start) / bin_width;
                let i = pos.floor() as usize;
                let frac = pos - i as f64;
                bins[i] += w * (1.0 - frac);
                bins[i + 1] += w * frac;
            }
            bins
        });
        let prefactor = exact_prefactor(scenario);
        let weights = (0..n_bins)
            .map(|b| {
                let column: Vec<Complex64> = rows.iter().map(|r| r[b]).collect();
                pairwise_sum(&column) * prefactor
            })
            .collect();
        Ok(Self {
            path_start,
            bin_width,
            weights,
        })
    }

    pub fn total(&self) -> Complex64 {
        pairwise_sum(&self.weights)
    }

    pub fn signal_at(&self, t: f64, waveform: &Waveform) -> Complex64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.norm_sqr() > 0.0)
            .map(|(b, w)| {
                let path = self.path_start + b as f64 * self.bin_width;
                w * waveform.value(t - path / SPEED_OF_LIGHT)
            })
            .sum()
    }
}
