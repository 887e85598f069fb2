//! Scene description: a linear array on the line x = -R, y = 0 facing an
//! axis-aligned rectangular plate centred on the origin of the x = 0 plane.
//!
//! Geometry conventions used throughout the crate:
//!
//! * antenna `l` sits at `(-R, 0, z_l)`, with `z_l = (l - (N-1)/2)·Δ`;
//! * the plate spans `y ∈ [-D_y/2, D_y/2]`, `z ∈ [-D_z/2, D_z/2]` at `x = 0`;
//! * dipoles are oriented along `ŷ`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

/// CODATA free-space impedance, ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730313668;

/// Smallest accepted standoff, in wavelengths.
pub const MIN_RANGE_WAVELENGTHS: f64 = 10.0;

/// Largest accepted fractional bandwidth `B / f_c`.
pub const MAX_FRACTIONAL_BANDWIDTH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub n_antennas: usize,
    /// Element spacing Δ, m.
    pub spacing: f64,
    /// Drive product L²·I₀, m²·A.
    pub antenna_gain_factor: f64,
    /// Signal bandwidth B, Hz.
    pub bandwidth: f64,
    /// Carrier frequency f_c, Hz.
    pub carrier_freq: f64,
    /// Plate extent D_y along ŷ, m.
    pub plate_width: f64,
    /// Plate extent D_z along ẑ, m.
    pub plate_height: f64,
    /// Plate standoff R, m.
    pub range: f64,
    /// η, ohms.
    pub free_space_impedance: f64,
}

impl Default for Scenario {
    /// The automotive reference scene: 13 antennas at 12.5 cm, 77 GHz,
    /// 100 MHz, a 0.8 m × 1.75 m plate at 4 m.
    fn default() -> Self {
        Self {
            n_antennas: 13,
            spacing: 0.125,
            antenna_gain_factor: 1.0,
            bandwidth: 100e6,
            carrier_freq: 77e9,
            plate_width: 0.8,
            plate_height: 1.75,
            range: 4.0,
            free_space_impedance: FREE_SPACE_IMPEDANCE,
        }
    }
}

impl Scenario {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength()
    }

    pub fn min_range(&self) -> f64 {
        MIN_RANGE_WAVELENGTHS * self.wavelength()
    }

    pub fn with_range(&self, range: f64) -> Self {
        Self { range, ..*self }
    }

    /// Checks the invariants every other module relies on.
    ///
    /// Plate dimensions may be zero (an empty plate integrates to nothing);
    /// everything else must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        if self.n_antennas == 0 {
            return Err(Error::NoAntennas);
        }
        let positive = [
            ("spacing", self.spacing),
            ("bandwidth", self.bandwidth),
            ("carrier_freq", self.carrier_freq),
            ("range", self.range),
            ("free_space_impedance", self.free_space_impedance),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositive { field, value });
            }
        }
        let non_negative = [
            ("antenna_gain_factor", self.antenna_gain_factor),
            ("plate_width", self.plate_width),
            ("plate_height", self.plate_height),
        ];
        for (field, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::NonPositive { field, value });
            }
        }
        if self.bandwidth > MAX_FRACTIONAL_BANDWIDTH * self.carrier_freq {
            return Err(Error::BandwidthTooWide {
                bandwidth: self.bandwidth,
                carrier: self.carrier_freq,
            });
        }
        self.check_range(self.range)
    }

    /// Validates a hypothesised range against the near-wavelength limit.
    pub fn check_range(&self, range: f64) -> Result<()> {
        let min_range = self.min_range();
        if !range.is_finite() || range < min_range {
            return Err(Error::RangeTooShort { range, min_range });
        }
        Ok(())
    }

    pub fn antenna_z_position(&self, l: usize) -> Result<f64> {
        if l >= self.n_antennas {
            return Err(Error::AntennaIndexOutOfRange {
                index: l,
                n_antennas: self.n_antennas,
            });
        }
        Ok(self.z_unchecked(l))
    }

    fn z_unchecked(&self, l: usize) -> f64 {
        (l as f64 - 0.5 * (self.n_antennas as f64 - 1.0)) * self.spacing
    }

    pub fn pair(&self, tx: usize, rx: usize) -> Result<AntennaPair> {
        Ok(AntennaPair {
            tx,
            rx,
            tx_z: self.antenna_z_position(tx)?,
            rx_z: self.antenna_z_position(rx)?,
        })
    }

    /// All N² ordered (tx, rx) pairs, tx-major.
    pub fn all_pairs(&self) -> Vec<AntennaPair> {
        let n = self.n_antennas;
        (0..n)
            .flat_map(|tx| {
                (0..n).map(move |rx| AntennaPair {
                    tx,
                    rx,
                    tx_z: self.z_unchecked(tx),
                    rx_z: self.z_unchecked(rx),
                })
            })
            .collect()
    }
}

/// One transmit/receive combination of the multistatic array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaPair {
    pub tx: usize,
    pub rx: usize,
    pub tx_z: f64,
    pub rx_z: f64,
}

impl AntennaPair {
    pub fn swapped(&self) -> Self {
        Self {
            tx: self.rx,
            rx: self.tx,
            tx_z: self.rx_z,
            rx_z: self.tx_z,
        }
    }
}
