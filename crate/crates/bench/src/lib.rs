//! Shared fixtures for the benchmarks.

use nfradar_core::estimator::window_for_grid;
use nfradar_core::{synthesize, Backend, RangeGrid, Result, Scenario, SignalSet, SynthesisOptions};

/// Default geometry with the carrier lowered so the exact backend is affordable.
pub fn low_carrier() -> Scenario {
    Scenario {
        carrier_freq: 5e9,
        ..Scenario::default()
    }
}

/// Noise-free stationary-phase signals for `scenario` and the grid they cover.
pub fn received(scenario: &Scenario, half_span: f64, step: f64) -> Result<(SignalSet, Vec<f64>)> {
    let grid = RangeGrid::centred(scenario.range, half_span, step)?.points();
    let window = window_for_grid(scenario, &grid, 16.0);
    let signals = synthesize(
        scenario,
        Backend::Spa,
        &window,
        &SynthesisOptions::default(),
    )?;
    Ok((signals, grid))
}
