//! Experiment configuration: TOML with one table per concern.
//!
//! Every field has a default, so an empty file describes the reference
//! scenario. Overrides given as `section.field=value` are applied to the
//! parsed document before it is typed, with `value` read as a TOML value
//! (bare words fall back to strings).

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use nfradar_core::{ModelKind, QuadratureRule, Scenario, SnrNormalization};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub scenario: Scenario,
    pub sweep: SweepConfig,
    pub grid: GridConfig,
    pub noise: NoiseConfig,
    pub model: ModelConfig,
    pub crb: CrbConfig,
    pub validation: ValidationConfig,
}

/// Values substituted into the scenario, expanded as a Cartesian product
/// in carrier, bandwidth, range order. An empty list keeps the scenario
/// value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub carrier_freq: Vec<f64>,
    pub bandwidth: Vec<f64>,
    pub range: Vec<f64>,
}

/// Hypothesis grid for ambiguity curves. With `half_span` set the grid is
/// centred on each case's true range and `min`/`max` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    /// Defaults to λ/8 at each case's carrier.
    pub step: Option<f64>,
    pub half_span: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            min: 2.0,
            max: 8.0,
            step: None,
            half_span: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    /// Per-sample noise power added to ambiguity inputs; 0 keeps them clean.
    pub noise_power: f64,
    pub seed: u64,
    /// Receive SNR for the Cramér-Rao bound, dB.
    pub snr_db: f64,
    pub snr_normalization: SnrNormalization,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            noise_power: 0.0,
            seed: 0,
            snr_db: 20.0,
            snr_normalization: SnrNormalization::Total,
        }
    }
}

/// Unset means the experiment default: partial for ambiguity, full for the
/// bound.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub kind: Option<ModelKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrbConfig {
    /// Finite-difference step, m. Defaults to λ/16.
    pub step: Option<f64>,
    /// Observation half-width in units of 1/B.
    pub window_half_width: f64,
}

impl Default for CrbConfig {
    fn default() -> Self {
        Self {
            step: None,
            window_half_width: 64.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidationConfig {
    /// Carrier used unless `--slow` is given, Hz.
    pub carrier_freq: f64,
    /// The quadrature is refused above this carrier unless `--slow`, Hz.
    pub carrier_ceiling: f64,
    pub points_per_wavelength: f64,
    pub rule: QuadratureRule,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            carrier_freq: 10e9,
            carrier_ceiling: 12e9,
            points_per_wavelength: 10.0,
            rule: QuadratureRule::Midpoint,
        }
    }
}

impl Config {
    /// Parses `text` after applying `overrides` of the form `a.b=value`.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self> {
        let mut doc: Table = text.parse().context("malformed configuration")?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let config = Config::deserialize(Value::Table(doc)).context("invalid configuration")?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .with_context(|| format!("cannot read {}", p.display()))?,
            None => String::new(),
        };
        Self::parse(&text, overrides)
    }

    /// Effective configuration with every default written out.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable")
    }

    pub fn validate(&self) -> Result<()> {
        for s in self.cases() {
            s.validate().with_context(|| {
                format!(
                    "scenario f_c={} B={} R={}",
                    s.carrier_freq, s.bandwidth, s.range
                )
            })?;
        }
        let g = &self.grid;
        if let Some(h) = g.half_span {
            if !(h > 0.0) {
                bail!("grid.half_span must be positive");
            }
        } else if !(g.min < g.max) {
            bail!("grid.min must be below grid.max");
        }
        if let Some(step) = g.step {
            if !(step > 0.0) {
                bail!("grid.step must be positive");
            }
        }
        if !(self.noise.noise_power >= 0.0) {
            bail!("noise.noise_power must be non-negative");
        }
        if !self.noise.snr_db.is_finite() {
            bail!("noise.snr_db must be finite");
        }
        Ok(())
    }

    /// Scenarios of the sweep, carrier-major then bandwidth then range.
    pub fn cases(&self) -> Vec<Scenario> {
        let base = self.scenario;
        let or_base = |v: &[f64], d: f64| if v.is_empty() { vec![d] } else { v.to_vec() };
        let mut out = Vec::new();
        for &fc in &or_base(&self.sweep.carrier_freq, base.carrier_freq) {
            for &b in &or_base(&self.sweep.bandwidth, base.bandwidth) {
                for &r in &or_base(&self.sweep.range, base.range) {
                    out.push(Scenario {
                        carrier_freq: fc,
                        bandwidth: b,
                        range: r,
                        ..base
                    });
                }
            }
        }
        out
    }
}

fn apply_override(doc: &mut Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| anyhow!("override `{assignment}` is not key=value"))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        bail!("override key `{key}` is malformed");
    }
    let value = parse_value(raw.trim());
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut table = doc;
    for p in parents {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| anyhow!("override `{key}`: `{p}` is not a table"))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_scenario() {
        let c = Config::parse("", &[]).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.cases(), vec![Scenario::default()]);
    }

    #[test]
    fn overrides_are_typed() {
        let c = Config::parse(
            "[scenario]\nrange = 3.0\n",
            &[
                "scenario.range=5".into(),
                "sweep.carrier_freq=[5e9, 77e9]".into(),
                "model.kind=partial_incoherent".into(),
                "noise.snr_normalization = per_pair".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.scenario.range, 5.0);
        assert_eq!(c.sweep.carrier_freq, vec![5e9, 77e9]);
        assert_eq!(c.model.kind, Some(ModelKind::PartialIncoherent));
        assert_eq!(c.noise.snr_normalization, SnrNormalization::PerPair);
        assert_eq!(c.cases().len(), 2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(Config::parse("[scenario]\nrnage = 3.0\n", &[]).is_err());
        assert!(Config::parse("", &["sweep.phase=[1.0]".into()]).is_err());
        assert!(Config::parse("", &["nonsense".into()]).is_err());
        assert!(Config::parse("", &["grid.min=9".into()]).is_err());
    }

    #[test]
    fn effective_config_round_trips() {
        let c = Config::parse(
            "",
            &["sweep.range=[2.0, 4.0]".into(), "grid.half_span=0.5".into()],
        )
        .unwrap();
        let text = c.to_toml();
        let back = Config::parse(&text, &[]).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml(), text);
    }

    #[test]
    fn sweep_order_is_carrier_major() {
        let c = Config::parse(
            "[sweep]\ncarrier_freq = [5e9, 24e9]\nrange = [2.0, 3.0]\n",
            &[],
        )
        .unwrap();
        let order: Vec<(f64, f64)> = c
            .cases()
            .iter()
            .map(|s| (s.carrier_freq, s.range))
            .collect();
        assert_eq!(
            order,
            vec![(5e9, 2.0), (5e9, 3.0), (24e9, 2.0), (24e9, 3.0)]
        );
    }
}
