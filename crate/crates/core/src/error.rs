use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scenario field `{field}` must be strictly positive and finite, got {value}")]
    NonPositive { field: &'static str, value: f64 },

    #[error("scenario needs at least one antenna")]
    NoAntennas,

    #[error("bandwidth {bandwidth} Hz exceeds a tenth of the carrier {carrier} Hz")]
    BandwidthTooWide { bandwidth: f64, carrier: f64 },

    #[error("range {range} m is closer than the far-from-wavelength limit {min_range} m")]
    RangeTooShort { range: f64, min_range: f64 },

    #[error("antenna index {index} out of range for {n_antennas} antennas")]
    AntennaIndexOutOfRange { index: usize, n_antennas: usize },

    #[error("argument must be finite, got {0}")]
    NonFinite(f64),

    #[error("point (y = {y}, z = {z}) lies outside the plate")]
    PointOutsidePlate { y: f64, z: f64 },

    #[error("quadrature density {0} points per wavelength is below the minimum of 4")]
    QuadratureTooCoarse(f64),

    #[error(
        "time window [{start}, {end}] s does not cover the required [{need_start}, {need_end}] s"
    )]
    WindowTooShort {
        start: f64,
        end: f64,
        need_start: f64,
        need_end: f64,
    },

    #[error("sample rate {sample_rate} Hz is below twice the bandwidth {bandwidth} Hz")]
    Undersampled { sample_rate: f64, bandwidth: f64 },

    #[error("exact backend refused: carrier {carrier} Hz above the ceiling {ceiling} Hz")]
    CarrierAboveCeiling { carrier: f64, ceiling: f64 },

    #[error("noise power must be non-negative, got {0}")]
    NegativeNoisePower(f64),

    #[error("received and model signals do not share a time base")]
    TimeBaseMismatch,

    #[error("range grid is empty")]
    EmptyGrid,

    #[error("invalid range grid: min {min}, max {max}, step {step}")]
    InvalidGrid { min: f64, max: f64, step: f64 },

    #[error("true range {0} m is outside the hypothesis grid")]
    RangeOutsideGrid(f64),

    #[error("ambiguity peak lies on the grid edge")]
    PeakAtEdge,

    #[error("ambiguity curve has no half-power crossing inside the grid")]
    NoHalfPowerCrossing,

    #[error("objective is not concave at the peak (curvature {0}); reduce the step")]
    NonConcave(f64),

    #[error("signal file: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
