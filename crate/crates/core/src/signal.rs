//! Waveforms, sampled multistatic synthesis and noise.
//!
//! Signals are complex baseband: the carrier phase `exp(-j2k r_s)` lives in
//! the pair gain and the waveform is evaluated at the true delay. Each
//! transmitter uses its own time slot, so all N² pair traces are observed
//! separately and without cross-talk.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{Read, Write};

use crate::em_exact::{DelayProfile, QuadratureSpec};
use crate::em_spa::pair_coefficient;
use crate::error::{Error, Result};
use crate::scenario::{AntennaPair, Scenario};
use crate::SPEED_OF_LIGHT;

/// Transmitted baseband pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Waveform {
    /// `sin(πBt)/(πBt)`.
    Sinc {
        bandwidth: f64,
    },
    Constant {
        level: f64,
    },
}

impl Waveform {
    pub fn constant() -> Self {
        Waveform::Constant { level: 1.0 }
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Waveform::Sinc { bandwidth } => sinc(bandwidth * t),
            Waveform::Constant { level } => level,
        }
    }

    fn for_kind(kind: WaveformKind, scenario: &Scenario) -> Self {
        match kind {
            WaveformKind::Sinc => Waveform::Sinc {
                bandwidth: scenario.bandwidth,
            },
            WaveformKind::Constant => Waveform::constant(),
        }
    }
}

/// `sin(πx)/(πx)` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    let px = PI * x;
    if px.abs() < 1e-8 {
        1.0 - px * px / 6.0
    } else {
        px.sin() / px
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformKind {
    #[default]
    Sinc,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Spa,
    Exact,
}

/// Observation interval `[t_start, t_end]`, s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub t_start: f64,
    pub t_end: f64,
}

impl TimeWindow {
    pub fn around(centre: f64, half_width: f64) -> Self {
        Self {
            t_start: centre - half_width,
            t_end: centre + half_width,
        }
    }

    /// `2R/c ± 16/B`.
    pub fn default_for(scenario: &Scenario) -> Self {
        Self::around(
            2.0 * scenario.range / SPEED_OF_LIGHT,
            16.0 / scenario.bandwidth,
        )
    }

    /// Covers every pair delay for ranges in `[r_min, r_max]`, plus
    /// `margin` seconds either side.
    pub fn spanning(scenario: &Scenario, r_min: f64, r_max: f64, margin: f64) -> Self {
        let half_aperture = 0.5 * (scenario.n_antennas as f64 - 1.0) * scenario.spacing;
        let longest = (r_max * r_max + half_aperture * half_aperture).sqrt();
        Self {
            t_start: 2.0 * r_min / SPEED_OF_LIGHT - margin,
            t_end: 2.0 * longest / SPEED_OF_LIGHT + margin,
        }
    }

    fn contains(&self, start: f64, end: f64) -> bool {
        self.t_start <= start && self.t_end >= end
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisOptions {
    /// Sample rate as a multiple of the bandwidth.
    pub oversampling: f64,
    pub waveform: WaveformKind,
    /// The exact backend is refused above this carrier, Hz.
    pub exact_carrier_ceiling: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            oversampling: 4.0,
            waveform: WaveformKind::Sinc,
            exact_carrier_ceiling: 12e9,
            quadrature: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub tx: usize,
    pub rx: usize,
    pub samples: Vec<Complex64>,
}

impl Trace {
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }
}

/// Sampled received signals, one trace per ordered pair in tx-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSet {
    pub sample_rate: f64,
    pub t_start: f64,
    pub n_samples: usize,
    pub traces: Vec<Trace>,
}

/// One row of the columnar signal file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub tx: usize,
    pub rx: usize,
    pub time_s: f64,
    pub re: f64,
    pub im: f64,
}

/// Uniform sampling grid shared by received and model signals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeBase {
    pub t_start: f64,
    pub sample_rate: f64,
    pub n_samples: usize,
}

impl TimeBase {
    pub fn from_window(window: &TimeWindow, sample_rate: f64) -> Self {
        Self {
            t_start: window.t_start,
            sample_rate,
            n_samples: ((window.t_end - window.t_start) * sample_rate).floor() as usize + 1,
        }
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t_start + n as f64 / self.sample_rate
    }
}

impl SignalSet {
    pub(crate) fn empty(base: TimeBase) -> Self {
        Self {
            sample_rate: base.sample_rate,
            t_start: base.t_start,
            n_samples: base.n_samples,
            traces: Vec::new(),
        }
    }

    pub fn time_base(&self) -> TimeBase {
        TimeBase {
            t_start: self.t_start,
            sample_rate: self.sample_rate,
            n_samples: self.n_samples,
        }
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t_start + n as f64 / self.sample_rate
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n_samples.saturating_sub(1))
    }

    pub fn same_time_base(&self, other: &SignalSet) -> bool {
        self.time_base() == other.time_base()
    }

    pub fn trace(&self, tx: usize, rx: usize) -> Option<&Trace> {
        self.traces.iter().find(|t| t.tx == tx && t.rx == rx)
    }

    pub fn energy(&self) -> f64 {
        self.traces.iter().map(Trace::energy).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for t in &mut out.traces {
            for s in &mut t.samples {
                *s *= factor;
            }
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = SampleRow> + '_ {
        self.traces.iter().flat_map(move |t| {
            t.samples.iter().enumerate().map(move |(n, s)| SampleRow {
                tx: t.tx,
                rx: t.rx,
                time_s: self.time(n),
                re: s.re,
                im: s.im,
            })
        })
    }

    /// Writes `tx,rx,time_s,re,im`, one row per sample, traces in order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reads the format of [`SignalSet::write_csv`]. The time base is
    /// recovered from the first trace.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let mut traces: Vec<Trace> = Vec::new();
        let mut times = Vec::new();
        for row in r.deserialize() {
            let row: SampleRow = row?;
            let value = Complex64::new(row.re, row.im);
            match traces.last_mut() {
                Some(t) if t.tx == row.tx && t.rx == row.rx => t.samples.push(value),
                _ => traces.push(Trace {
                    tx: row.tx,
                    rx: row.rx,
                    samples: vec![value],
                }),
            }
            if traces.len() == 1 {
                times.push(row.time_s);
            }
        }
        let n_samples = times.len();
        if n_samples == 0 || traces.iter().any(|t| t.samples.len() != n_samples) {
            return Err(Error::Csv("traces have unequal or zero length".into()));
        }
        let sample_rate = if n_samples > 1 {
            (n_samples - 1) as f64 / (times[n_samples - 1] - times[0])
        } else {
            f64::INFINITY
        };
        Ok(Self {
            sample_rate,
            t_start: times[0],
            n_samples,
            traces,
        })
    }
}

/// Fills `out[n] = gain · w(t_start + n/fs - delay)`.
pub(crate) fn fill_delayed(
    out: &mut [Complex64],
    gain: Complex64,
    delay: f64,
    waveform: &Waveform,
    t_start: f64,
    sample_rate: f64,
) {
    match *waveform {
        Waveform::Constant { level } => out.fill(gain * level),
        Waveform::Sinc { bandwidth } => {
            // sin(π B (t_n - τ)) by phasor rotation, re-anchored periodically.
            let step = PI * bandwidth / sample_rate;
            let rotation = Complex64::from_polar(1.0, step);
            let mut phasor = Complex64::new(0.0, 0.0);
            for (n, o) in out.iter_mut().enumerate() {
                let arg = PI * bandwidth * (t_start + n as f64 / sample_rate - delay);
                if n % 64 == 0 {
                    phasor = Complex64::from_polar(1.0, arg);
                } else {
                    phasor *= rotation;
                }
                let value = if arg.abs() < 1e-8 {
                    1.0 - arg * arg / 6.0
                } else {
                    phasor.im / arg
                };
                *o = gain * value;
            }
        }
    }
}

/// Noise-free received signals for every pair.
pub fn synthesize(
    scenario: &Scenario,
    backend: Backend,
    window: &TimeWindow,
    options: &SynthesisOptions,
) -> Result<SignalSet> {
    scenario.validate()?;
    let sample_rate = options.oversampling * scenario.bandwidth;
    if !(sample_rate >= 2.0 * scenario.bandwidth) {
        return Err(Error::Undersampled {
            sample_rate,
            bandwidth: scenario.bandwidth,
        });
    }
    let nominal = 2.0 * scenario.range / SPEED_OF_LIGHT;
    let guard = 8.0 / scenario.bandwidth;
    if !window.contains(nominal - guard, nominal + guard) {
        return Err(Error::WindowTooShort {
            start: window.t_start,
            end: window.t_end,
            need_start: nominal - guard,
            need_end: nominal + guard,
        });
    }
    if backend == Backend::Exact && scenario.carrier_freq > options.exact_carrier_ceiling {
        return Err(Error::CarrierAboveCeiling {
            carrier: scenario.carrier_freq,
            ceiling: options.exact_carrier_ceiling,
        });
    }
    options.quadrature.validate()?;

    let waveform = Waveform::for_kind(options.waveform, scenario);
    let mut set = SignalSet::empty(TimeBase::from_window(window, sample_rate));
    let pairs = scenario.all_pairs();
    set.traces = match backend {
        Backend::Spa => pairs
            .par_iter()
            .map(|p| spa_trace(p, scenario, &waveform, &set))
            .collect(),
        Backend::Exact => {
            // Binning error is second order in bin/(c/B).
            let bin = SPEED_OF_LIGHT / scenario.bandwidth * 1e-3;
            pairs
                .iter()
                .map(|p| {
                    let profile = DelayProfile::compute(p, scenario, &options.quadrature, bin)?;
                    let samples = (0..set.n_samples)
                        .map(|n| profile.signal_at(set.time(n), &waveform))
                        .collect();
                    Ok(Trace {
                        tx: p.tx,
                        rx: p.rx,
                        samples,
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(set)
}

fn spa_trace(
    pair: &AntennaPair,
    scenario: &Scenario,
    waveform: &Waveform,
    base: &SignalSet,
) -> Trace {
    let coeff = pair_coefficient(pair, scenario);
    let mut samples = vec![Complex64::new(0.0, 0.0); base.n_samples];
    fill_delayed(
        &mut samples,
        coeff.full_gain,
        coeff.delay,
        waveform,
        base.t_start,
        base.sample_rate,
    );
    Trace {
        tx: pair.tx,
        rx: pair.rx,
        samples,
    }
}

/// Adds circular complex white Gaussian noise of `noise_power` per sample.
///
/// Trace `i` draws from its own ChaCha stream `i` under `seed`, so the result
/// does not depend on evaluation order.
pub fn add_awgn(signals: &SignalSet, noise_power: f64, seed: u64) -> Result<SignalSet> {
    if !(noise_power >= 0.0) {
        return Err(Error::NegativeNoisePower(noise_power));
    }
    let mut out = signals.clone();
    if noise_power == 0.0 {
        return Ok(out);
    }
    let normal = Normal::new(0.0, (0.5 * noise_power).sqrt()).expect("finite std");
    out.traces
        .par_iter_mut()
        .enumerate()
        .for_each(|(i, trace)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for s in &mut trace.samples {
                *s += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
            }
        });
    Ok(out)
}
