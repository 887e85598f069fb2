//! Maximum-likelihood range estimation.
//!
//! Under white circular Gaussian noise with an unknown complex scale `a`,
//! profiling `a` out of the likelihood of `r = a·μ(R) + n` leaves the
//! statistic
//!
//! ```text
//! T(R̂) = |⟨r, μ(R̂)⟩|² / ‖μ(R̂)‖²
//! ```
//!
//! whose maximiser is the ML range. `μ` is either the full stationary-phase
//! model (plate-dependent α included) or the partial model, which keeps only
//! the geometry-free delays and carrier phases `exp(-j2k r_s)·s(t - 2r_s/c)`.
//! The partial model comes in two flavours: one common unknown gain across
//! all pairs (coherent), or an independent unknown gain per pair
//! (incoherent, `Σ_p |⟨r_p, μ_p⟩|² / ‖μ_p‖²`). The incoherent form discards
//! the carrier phase entirely and is bandwidth-limited.
//!
//! Ambiguity curves report `√T` normalised to a unit peak, i.e. the
//! normalised matched-filter magnitude.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::em_spa::pair_coefficient;
use crate::em_spa::specular_geometry;
use crate::error::{Error, Result};
use crate::scenario::{AntennaPair, Scenario};
use crate::signal::{
    fill_delayed, synthesize, Backend, SignalSet, SynthesisOptions, TimeBase, TimeWindow, Trace,
    Waveform,
};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Stationary-phase model with the plate's α coefficients.
    Full,
    /// Unit-gain templates, one common unknown gain.
    Partial,
    /// Unit-gain templates, one unknown gain per pair.
    PartialIncoherent,
}

/// Uniform range grid `min, min + step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl RangeGrid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let g = Self { min, max, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.min.is_finite()
            && self.max.is_finite()
            && self.step.is_finite()
            && self.step > 0.0
            && self.min < self.max;
        if !ok {
            return Err(Error::InvalidGrid {
                min: self.min,
                max: self.max,
                step: self.step,
            });
        }
        Ok(())
    }

    /// Grid of half-width `half_span` centred on `centre`.
    pub fn centred(centre: f64, half_span: f64, step: f64) -> Result<Self> {
        Self::new(centre - half_span, centre + half_span, step)
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step * (1.0 + 1e-12)).floor() as usize;
        (0..=n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityCurve {
    pub grid: Vec<f64>,
    /// Normalised so that the peak is 1.
    pub values: Vec<f64>,
}

impl AmbiguityCurve {
    pub fn peak_index(&self) -> usize {
        first_argmax(&self.values)
    }

    pub fn argmax(&self) -> f64 {
        self.grid[self.peak_index()]
    }

    /// Highest local maximum outside the main lobe, which extends from the
    /// peak down to the first local minimum on either side. Zero when the
    /// curve has no side lobe inside the grid.
    pub fn peak_sidelobe(&self) -> f64 {
        let v = &self.values;
        let peak = self.peak_index();
        let mut lo = peak;
        while lo > 0 && v[lo - 1] <= v[lo] {
            lo -= 1;
        }
        let mut hi = peak;
        while hi + 1 < v.len() && v[hi + 1] <= v[hi] {
            hi += 1;
        }
        v[..lo]
            .iter()
            .chain(v[hi + 1..].iter())
            .copied()
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbResult {
    pub range: f64,
    /// Variance lower bound, m².
    pub bound: f64,
    /// `-T''` at the peak (unnormalised statistic), 1/m² × signal energy.
    pub curvature: f64,
    /// Noise power per complex sample implied by the requested SNR.
    pub noise_power: f64,
}

/// How a fixed receive SNR is converted into a noise power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrNormalization {
    /// SNR = total received energy over all pairs / noise power.
    #[default]
    Total,
    /// SNR = mean received energy per pair / noise power.
    PerPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbOptions {
    /// Finite-difference step, m. Defaults to λ/16.
    pub step: Option<f64>,
    /// Linear receive SNR.
    pub snr: f64,
    pub normalization: SnrNormalization,
    /// Half-width of the observation window, in units of 1/B.
    pub window_half_width: f64,
}

impl Default for CrbOptions {
    fn default() -> Self {
        Self {
            step: None,
            snr: 100.0,
            normalization: SnrNormalization::Total,
            window_half_width: 64.0,
        }
    }
}

fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Gain and delay of the model template for one pair at range `r_hat`.
fn template(pair: &AntennaPair, scenario_at: &Scenario, kind: ModelKind) -> (Complex64, f64) {
    match kind {
        ModelKind::Full => {
            let c = pair_coefficient(pair, scenario_at);
            (c.full_gain, c.delay)
        }
        ModelKind::Partial | ModelKind::PartialIncoherent => {
            let g = specular_geometry(pair, scenario_at);
            let k = scenario_at.wavenumber();
            (
                Complex64::from_polar(1.0, -2.0 * k * g.r_s),
                2.0 * g.r_s / SPEED_OF_LIGHT,
            )
        }
    }
}

/// Model signals at hypothesised range `r_hat`, sampled on `base`.
pub fn model_signals(
    scenario: &Scenario,
    r_hat: f64,
    kind: ModelKind,
    base: &TimeBase,
) -> Result<SignalSet> {
    scenario.check_range(r_hat)?;
    let at = scenario.with_range(r_hat);
    let waveform = Waveform::Sinc {
        bandwidth: scenario.bandwidth,
    };
    let mut set = SignalSet::empty(*base);
    set.traces = scenario
        .all_pairs()
        .iter()
        .map(|p| {
            let (gain, delay) = template(p, &at, kind);
            let mut samples = vec![Complex64::new(0.0, 0.0); base.n_samples];
            fill_delayed(
                &mut samples,
                gain,
                delay,
                &waveform,
                base.t_start,
                base.sample_rate,
            );
            Trace {
                tx: p.tx,
                rx: p.rx,
                samples,
            }
        })
        .collect();
    Ok(set)
}

fn check_layout(received: &SignalSet, pairs: &[AntennaPair]) -> Result<()> {
    let matches =
        received.traces.len() == pairs.len()
            && received.traces.iter().zip(pairs).all(|(t, p)| {
                t.tx == p.tx && t.rx == p.rx && t.samples.len() == received.n_samples
            });
    if matches {
        Ok(())
    } else {
        Err(Error::TimeBaseMismatch)
    }
}

/// Per-pair `(⟨r_p, μ_p(R̂)⟩, ‖μ_p(R̂)‖²)`, tx-major.
pub fn pair_correlations(
    received: &SignalSet,
    scenario: &Scenario,
    r_hat: f64,
    kind: ModelKind,
) -> Result<Vec<(Complex64, f64)>> {
    scenario.check_range(r_hat)?;
    let pairs = scenario.all_pairs();
    check_layout(received, &pairs)?;
    Ok(correlations_unchecked(
        received, scenario, &pairs, r_hat, kind,
    ))
}

fn correlations_unchecked(
    received: &SignalSet,
    scenario: &Scenario,
    pairs: &[AntennaPair],
    r_hat: f64,
    kind: ModelKind,
) -> Vec<(Complex64, f64)> {
    let at = scenario.with_range(r_hat);
    let waveform = Waveform::Sinc {
        bandwidth: scenario.bandwidth,
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); received.n_samples];
    pairs
        .iter()
        .zip(&received.traces)
        .map(|(p, trace)| {
            let (gain, delay) = template(p, &at, kind);
            if gain.norm_sqr() == 0.0 {
                return (Complex64::new(0.0, 0.0), 0.0);
            }
            fill_delayed(
                &mut scratch,
                gain,
                delay,
                &waveform,
                received.t_start,
                received.sample_rate,
            );
            let mut inner = Complex64::new(0.0, 0.0);
            let mut energy = 0.0;
            for (r, m) in trace.samples.iter().zip(&scratch) {
                inner += r * m.conj();
                energy += m.norm_sqr();
            }
            (inner, energy)
        })
        .collect()
}

fn statistic(correlations: &[(Complex64, f64)], kind: ModelKind) -> f64 {
    match kind {
        ModelKind::Full | ModelKind::Partial => {
            let (inner, energy) = correlations
                .iter()
                .fold((Complex64::new(0.0, 0.0), 0.0), |(i, e), (ci, ce)| {
                    (i + ci, e + ce)
                });
            if energy > 0.0 {
                inner.norm_sqr() / energy
            } else {
                0.0
            }
        }
        ModelKind::PartialIncoherent => correlations
            .iter()
            .filter(|(_, e)| *e > 0.0)
            .map(|(i, e)| i.norm_sqr() / e)
            .sum(),
    }
}

/// Profiled log-likelihood statistic `T(R̂)` (up to the 1/σ² factor).
pub fn ml_objective(
    received: &SignalSet,
    scenario: &Scenario,
    r_hat: f64,
    kind: ModelKind,
) -> Result<f64> {
    let c = pair_correlations(received, scenario, r_hat, kind)?;
    Ok(statistic(&c, kind))
}

/// `T` over a grid; grid points are independent and evaluated in parallel.
pub fn objective_over(
    received: &SignalSet,
    scenario: &Scenario,
    grid: &[f64],
    kind: ModelKind,
) -> Result<Vec<f64>> {
    let pairs = scenario.all_pairs();
    check_layout(received, &pairs)?;
    for &r in grid {
        scenario.check_range(r)?;
    }
    Ok(grid
        .par_iter()
        .map(|&r| {
            statistic(
                &correlations_unchecked(received, scenario, &pairs, r, kind),
                kind,
            )
        })
        .collect())
}

fn check_increasing(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid {
            min: grid[0],
            max: grid[grid.len() - 1],
            step: f64::NAN,
        });
    }
    Ok(())
}

/// Vertex of the parabola through three points.
fn parabolic_vertex(x: [f64; 3], y: [f64; 3]) -> Option<f64> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let curvature = (d2 - d1) / (x[2] - x[0]);
    if !(curvature < 0.0) {
        return None;
    }
    let vertex = 0.5 * (x[0] + x[1]) - d1 / (2.0 * curvature);
    (vertex >= x[0] && vertex <= x[2]).then_some(vertex)
}

/// Grid maximiser of the ML statistic refined by a three-point parabola.
/// Ties go to the smaller range.
///
/// On noise-only input this still returns a grid point; callers decide
/// detection from the peak-to-mean ratio of [`objective_over`].
pub fn estimate_range(
    received: &SignalSet,
    scenario: &Scenario,
    grid: &[f64],
    kind: ModelKind,
) -> Result<f64> {
    check_increasing(grid)?;
    let values = objective_over(received, scenario, grid, kind)?;
    let i = first_argmax(&values);
    if i == 0 || i + 1 == grid.len() {
        return Ok(grid[i]);
    }
    Ok(parabolic_vertex(
        [grid[i - 1], grid[i], grid[i + 1]],
        [values[i - 1], values[i], values[i + 1]],
    )
    .unwrap_or(grid[i]))
}

/// Normalised ambiguity of an arbitrary received set.
pub fn ambiguity_of(
    received: &SignalSet,
    scenario: &Scenario,
    grid: &[f64],
    kind: ModelKind,
) -> Result<AmbiguityCurve> {
    check_increasing(grid)?;
    let t = objective_over(received, scenario, grid, kind)?;
    let magnitudes: Vec<f64> = t.iter().map(|v| v.sqrt()).collect();
    let peak = magnitudes.iter().copied().fold(0.0, f64::max);
    let values = if peak > 0.0 {
        magnitudes.iter().map(|m| m / peak).collect()
    } else {
        magnitudes
    };
    Ok(AmbiguityCurve {
        grid: grid.to_vec(),
        values,
    })
}

/// Window that holds the received pulse and every hypothesis on the grid.
pub fn window_for_grid(scenario: &Scenario, grid: &[f64], margin_bandwidths: f64) -> TimeWindow {
    let margin = margin_bandwidths / scenario.bandwidth;
    let lo = grid[0].min(scenario.range);
    let hi = grid[grid.len() - 1].max(scenario.range);
    TimeWindow::spanning(scenario, lo, hi, margin)
}

/// Ambiguity function: the normalised ML statistic over `grid` for
/// noise-free stationary-phase signals from a plate at `scenario.range`.
pub fn ambiguity(scenario: &Scenario, grid: &[f64], kind: ModelKind) -> Result<AmbiguityCurve> {
    check_increasing(grid)?;
    if scenario.range < grid[0] || scenario.range > grid[grid.len() - 1] {
        return Err(Error::RangeOutsideGrid(scenario.range));
    }
    let window = window_for_grid(scenario, grid, 16.0);
    let received = synthesize(
        scenario,
        Backend::Spa,
        &window,
        &SynthesisOptions::default(),
    )?;
    ambiguity_of(&received, scenario, grid, kind)
}

/// Width of the contiguous region around the peak where the curve is at
/// least 0.5, with linearly interpolated crossings.
pub fn half_power_width(curve: &AmbiguityCurve) -> Result<f64> {
    const LEVEL: f64 = 0.5;
    let v = &curve.values;
    let x = &curve.grid;
    if v.iter().all(|&a| a >= LEVEL) {
        return Err(Error::NoHalfPowerCrossing);
    }
    let peak = curve.peak_index();
    if peak == 0 || peak + 1 == v.len() {
        return Err(Error::PeakAtEdge);
    }
    let mut lo = peak;
    while v[lo] >= LEVEL {
        if lo == 0 {
            return Err(Error::NoHalfPowerCrossing);
        }
        lo -= 1;
    }
    let mut hi = peak;
    while v[hi] >= LEVEL {
        if hi + 1 == v.len() {
            return Err(Error::NoHalfPowerCrossing);
        }
        hi += 1;
    }
    let cross = |a: usize, b: usize| x[a] + (LEVEL - v[a]) / (v[b] - v[a]) * (x[b] - x[a]);
    Ok(cross(hi - 1, hi) - cross(lo, lo + 1))
}

/// Cramér-Rao bound from the curvature of the noise-free statistic.
///
/// With circular noise of power σ² per sample, the profiled log-likelihood
/// is `T/σ²`, so the Fisher information is `-T''/σ²` and the bound is
/// `σ² / |T''|`. σ² follows from the requested SNR, which makes the result
/// independent of the absolute signal level.
pub fn crb(scenario: &Scenario, kind: ModelKind, options: &CrbOptions) -> Result<CrbResult> {
    scenario.validate()?;
    let step = options.step.unwrap_or(scenario.wavelength() / 16.0);
    let r = scenario.range;
    let search: Vec<f64> = (-4..=4).map(|i| r + i as f64 * step).collect();
    let window = window_for_grid(scenario, &search, options.window_half_width);
    let received = synthesize(
        scenario,
        Backend::Spa,
        &window,
        &SynthesisOptions::default(),
    )?;

    let energy = received.energy();
    let noise_power = match options.normalization {
        SnrNormalization::Total => energy / options.snr,
        SnrNormalization::PerPair => energy / received.traces.len() as f64 / options.snr,
    };

    let t = objective_over(&received, scenario, &search, kind)?;
    let mut centre = first_argmax(&t).clamp(1, t.len() - 2);
    // Full and coherent models peak at the true range; keep the stencil there
    // unless a neighbour is strictly larger.
    if t[4] >= t[centre] {
        centre = 4;
    }
    let second = (t[centre + 1] - 2.0 * t[centre] + t[centre - 1]) / (step * step);
    let curvature = -second;
    if !(curvature > 0.0) {
        return Err(Error::NonConcave(curvature));
    }
    Ok(CrbResult {
        range: r,
        bound: noise_power / curvature,
        curvature,
        noise_power,
    })
}
