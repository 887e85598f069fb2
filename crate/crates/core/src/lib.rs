//! Near-field multistatic radar ranging of an extended rectangular plate.
//!
//! A linear array faces a rectangular plate at close range. The crate
//! provides:
//!
//! - [`em_exact`]: brute-force physical-optics quadrature of the plate return,
//! - [`em_spa`]: the closed-form stationary-phase model built on Fresnel
//!   integrals ([`special_fn`]),
//! - [`signal`]: sampled multistatic signal synthesis and noise,
//! - [`estimator`]: maximum-likelihood ranging, ambiguity functions and the
//!   Cramér-Rao bound.

// `!(a > b)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod em_exact;
pub mod em_spa;
pub mod error;
pub mod estimator;
pub mod scenario;
pub mod signal;
pub mod special_fn;

pub use num_complex::Complex64;

pub use em_exact::{exact_received_signal, QuadratureRule, QuadratureSpec};
pub use em_spa::{pair_coefficient, PairCoefficient, SpecularGeometry};
pub use error::{Error, Result};
pub use estimator::{
    ambiguity, crb, estimate_range, half_power_width, ml_objective, AmbiguityCurve, CrbOptions,
    CrbResult, ModelKind, RangeGrid, SnrNormalization,
};
pub use scenario::{AntennaPair, Scenario};
pub use signal::{
    add_awgn, synthesize, Backend, SignalSet, SynthesisOptions, TimeBase, TimeWindow, Waveform,
};
pub use special_fn::{fresnel, fresnel_conj};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
