//! Closed-form stationary-phase model of the plate return.
//!
//! For a pair (l, l') the phase `-k(r_l + r_l')` is stationary at the specular
//! point `(0, z_s)`, `z_s = (z_l + z_l')/2`, at distance `r_s` from both
//! antennas. Expanding the phase to second order and freezing the amplitude
//! there leaves two quadratic-phase integrals over the plate, which reduce to
//! Fresnel integrals. The received signal is then
//!
//! ```text
//! u(t) = ξ · α · exp(-j2k r_s) / r_s · s(t - 2 r_s / c),   ξ = -kηL²I₀/(8π)
//! α    = F*(D_y/√(λ r_s)) · [F*(a₊) + F*(a₋)] · 1{|z_s| ≤ D_z/2}
//! a±   = |D_z ∓ (z_l + z_l')| · R / √(λ r_s³)
//! ```
//!
//! `a±` are the distances from `z_s` to the two plate edges in Fresnel units;
//! both are non-negative whenever the specular point is on the plate.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::scenario::{AntennaPair, Scenario};
use crate::signal::Waveform;
use crate::special_fn::fresnel_finite;
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecularGeometry {
    /// Always zero: the array lies in the y = 0 plane.
    pub y_s: f64,
    pub z_s: f64,
    /// Distance from either antenna to the specular point.
    pub r_s: f64,
    pub on_plate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCoefficient {
    pub alpha: Complex64,
    pub xi: Complex64,
    /// `ξ·α·exp(-j2k r_s)/r_s`.
    pub full_gain: Complex64,
    /// Round-trip delay `2 r_s / c`, s.
    pub delay: f64,
}

pub fn specular_geometry(pair: &AntennaPair, scenario: &Scenario) -> SpecularGeometry {
    let z_s = 0.5 * (pair.tx_z + pair.rx_z);
    // Half-separation squared is exactly symmetric under tx/rx swap.
    let half_sep = 0.5 * (pair.tx_z - pair.rx_z);
    let r_s = (scenario.range * scenario.range + half_sep * half_sep).sqrt();
    SpecularGeometry {
        y_s: 0.0,
        z_s,
        r_s,
        on_plate: z_s.abs() <= 0.5 * scenario.plate_height,
    }
}

/// Second-order expansion of the integrand phase about the specular point.
pub fn spa_phase_expansion(geom: &SpecularGeometry, scenario: &Scenario, y: f64, z: f64) -> f64 {
    let k = scenario.wavenumber();
    let r = geom.r_s;
    let r_sq = scenario.range * scenario.range;
    let dz = z - geom.z_s;
    -2.0 * k * r - (k / r) * y * y - (k * r_sq / (r * r * r)) * dz * dz
}

pub fn alpha_coefficient(pair: &AntennaPair, scenario: &Scenario) -> Complex64 {
    let geom = specular_geometry(pair, scenario);
    alpha_from_geometry(&geom, pair, scenario)
}

fn alpha_from_geometry(
    geom: &SpecularGeometry,
    pair: &AntennaPair,
    scenario: &Scenario,
) -> Complex64 {
    if !geom.on_plate {
        return Complex64::new(0.0, 0.0);
    }
    let lambda = scenario.wavelength();
    let r = geom.r_s;
    let z_sum = pair.tx_z + pair.rx_z;
    let y_arg = scenario.plate_width / (lambda * r).sqrt();
    let z_scale = scenario.range / (lambda * r * r * r).sqrt();
    let upper = (scenario.plate_height - z_sum).abs() * z_scale;
    let lower = (scenario.plate_height + z_sum).abs() * z_scale;
    fresnel_finite(y_arg).conj() * (fresnel_finite(upper).conj() + fresnel_finite(lower).conj())
}

/// Pair-independent prefactor `-kηL²I₀/(8π)`.
pub fn xi(scenario: &Scenario) -> Complex64 {
    let k = scenario.wavenumber();
    Complex64::new(
        -k * scenario.free_space_impedance * scenario.antenna_gain_factor / (8.0 * PI),
        0.0,
    )
}

pub fn pair_coefficient(pair: &AntennaPair, scenario: &Scenario) -> PairCoefficient {
    let geom = specular_geometry(pair, scenario);
    let alpha = alpha_from_geometry(&geom, pair, scenario);
    let xi = xi(scenario);
    let k = scenario.wavenumber();
    let carrier = Complex64::from_polar(1.0 / geom.r_s, -2.0 * k * geom.r_s);
    PairCoefficient {
        alpha,
        xi,
        full_gain: xi * alpha * carrier,
        delay: 2.0 * geom.r_s / SPEED_OF_LIGHT,
    }
}

/// `u_{l'l}(t)` under the stationary-phase model.
pub fn spa_received_signal(
    pair: &AntennaPair,
    scenario: &Scenario,
    t: f64,
    waveform: &Waveform,
) -> Complex64 {
    let coeff = pair_coefficient(pair, scenario);
    coeff.full_gain * waveform.value(t - coeff.delay)
}
