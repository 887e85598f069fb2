//! The three experiments. Each returns rows in a fixed order that depends
//! only on the configuration.

use anyhow::{bail, Context, Result};
use nfradar_core::em_spa::spa_received_signal;
use nfradar_core::estimator::{ambiguity_of, window_for_grid};
use nfradar_core::{
    add_awgn, crb, exact_received_signal, half_power_width, synthesize, Backend, CrbOptions,
    ModelKind, QuadratureSpec, RangeGrid, Scenario, SynthesisOptions, Waveform,
};
use serde::Serialize;

use crate::config::Config;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Validate at the scenario carrier without the cost ceiling.
    pub slow: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationRow {
    pub tx: usize,
    pub rx: usize,
    pub exact_db: f64,
    pub spa_db: f64,
    pub amp_err_db: f64,
    pub phase_err_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Record {
    Curve,
    Summary,
}

/// Curve rows carry `r_hat` and `value`; the summary row per case carries
/// the argmax in `r_hat`, plus `width` and `sidelobe`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbiguityRow {
    pub record: Record,
    pub carrier_freq: f64,
    pub bandwidth: f64,
    pub range: f64,
    pub r_hat: f64,
    pub value: Option<f64>,
    pub width: Option<f64>,
    pub sidelobe: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrbRow {
    pub carrier_freq: f64,
    pub bandwidth: f64,
    pub range: f64,
    pub crb: f64,
    pub curvature: f64,
    pub noise_power: f64,
    pub snr_db: f64,
}

/// Stationary-phase model against plate quadrature, constant waveform, every
/// ordered pair.
pub fn run_validate_spa(cfg: &Config, opts: RunOptions) -> Result<Vec<ValidationRow>> {
    let v = &cfg.validation;
    let carrier = if opts.slow {
        cfg.scenario.carrier_freq
    } else {
        v.carrier_freq
    };
    if !opts.slow && carrier > v.carrier_ceiling {
        bail!(
            "validation carrier {carrier} Hz exceeds the {} Hz ceiling; pass --slow to run it",
            v.carrier_ceiling
        );
    }
    let s = Scenario {
        carrier_freq: carrier,
        ..cfg.scenario
    };
    s.validate()?;
    let quad = QuadratureSpec {
        points_per_wavelength: v.points_per_wavelength,
        rule: v.rule,
    };
    let w = Waveform::constant();
    s.all_pairs()
        .iter()
        .map(|p| {
            let exact = exact_received_signal(p, &s, 0.0, &w, &quad)?;
            let spa = spa_received_signal(p, &s, 0.0, &w);
            let exact_db = 20.0 * exact.norm().log10();
            let spa_db = 20.0 * spa.norm().log10();
            Ok(ValidationRow {
                tx: p.tx,
                rx: p.rx,
                exact_db,
                spa_db,
                amp_err_db: spa_db - exact_db,
                phase_err_deg: (spa / exact).arg().to_degrees(),
            })
        })
        .collect()
}

fn grid_for(cfg: &Config, s: &Scenario) -> Result<RangeGrid> {
    let g = &cfg.grid;
    let step = g.step.unwrap_or(s.wavelength() / 8.0);
    let grid = match g.half_span {
        Some(h) => RangeGrid::centred(s.range, h, step)?,
        None => RangeGrid::new(g.min, g.max, step)?,
    };
    Ok(grid)
}

/// Normalised ML statistic over the grid for each sweep case.
pub fn run_ambiguity(cfg: &Config, _opts: RunOptions) -> Result<Vec<AmbiguityRow>> {
    let kind = cfg.model.kind.unwrap_or(ModelKind::Partial);
    let mut rows = Vec::new();
    for (i, s) in cfg.cases().iter().enumerate() {
        let grid = grid_for(cfg, s)?.points();
        let window = window_for_grid(s, &grid, 16.0);
        let clean = synthesize(s, Backend::Spa, &window, &SynthesisOptions::default())?;
        let received = add_awgn(
            &clean,
            cfg.noise.noise_power,
            cfg.noise.seed.wrapping_add(i as u64),
        )?;
        let curve = ambiguity_of(&received, s, &grid, kind).with_context(|| {
            format!(
                "ambiguity at f_c={} B={} R={}",
                s.carrier_freq, s.bandwidth, s.range
            )
        })?;
        let row = |record, r_hat, value, width, sidelobe| AmbiguityRow {
            record,
            carrier_freq: s.carrier_freq,
            bandwidth: s.bandwidth,
            range: s.range,
            r_hat,
            value,
            width,
            sidelobe,
        };
        rows.extend(
            curve
                .grid
                .iter()
                .zip(&curve.values)
                .map(|(&r, &v)| row(Record::Curve, r, Some(v), None, None)),
        );
        rows.push(row(
            Record::Summary,
            curve.argmax(),
            None,
            half_power_width(&curve).ok(),
            Some(curve.peak_sidelobe()),
        ));
    }
    Ok(rows)
}

/// Cramér-Rao bound at fixed receive SNR for each sweep case.
pub fn run_crb(cfg: &Config, _opts: RunOptions) -> Result<Vec<CrbRow>> {
    let kind = cfg.model.kind.unwrap_or(ModelKind::Full);
    let options = CrbOptions {
        step: cfg.crb.step,
        snr: 10f64.powf(cfg.noise.snr_db / 10.0),
        normalization: cfg.noise.snr_normalization,
        window_half_width: cfg.crb.window_half_width,
    };
    cfg.cases()
        .iter()
        .map(|s| {
            let r = crb(s, kind, &options).with_context(|| {
                format!(
                    "bound at f_c={} B={} R={}",
                    s.carrier_freq, s.bandwidth, s.range
                )
            })?;
            Ok(CrbRow {
                carrier_freq: s.carrier_freq,
                bandwidth: s.bandwidth,
                range: s.range,
                crb: r.bound,
                curvature: r.curvature,
                noise_power: r.noise_power,
                snr_db: cfg.noise.snr_db,
            })
        })
        .collect()
}
