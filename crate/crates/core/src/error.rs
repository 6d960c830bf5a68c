use thiserror::Error;

use crate::units::Unit;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("cannot convert {from} to {to}: dimensions differ")]
    IncompatibleUnits { from: Unit, to: Unit },
    #[error("NC parameter must be non-negative, got {0}")]
    NegativeTheta(f64),
    #[error("kinetic energy must be non-negative, got {0} eV")]
    NegativeEnergy(f64),
    #[error("scattering angle {0} rad outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("radius must be positive (>= 1e-12 Angstrom), got {0}")]
    NonpositiveRadius(f64),
    #[error("atomic number must be >= 1, got {0}")]
    InvalidZ(i64),
    #[error("screening parameter must be non-negative, got {0}")]
    NegativeScreening(f64),
    #[error("reduction {limit} is not defined for a {kind} potential")]
    UnsupportedReduction { kind: &'static str, limit: &'static str },
    #[error("amplitude undefined at q = 0 without screening")]
    UndefinedAmplitude,
    #[error("quadrature did not reach tolerance: estimate {value:e}, error {abs_error:e}")]
    QuadratureNonConvergence { value: f64, abs_error: f64 },
    #[error("Born integral diverges without screening (alpha = 0)")]
    DivergentIntegral,
    #[error("total cross section diverges for unscreened {0} potential")]
    DivergentCrossSection(&'static str),
    #[error("series form requires alpha > 0")]
    ZeroScreening,
    #[error("wave number must be positive")]
    ZeroWaveNumber,
    #[error("momentum transfer must be non-negative, got {0}")]
    NegativeMomentumTransfer(f64),
    #[error("deviation never reaches epsilon = {epsilon:e} for sqrt(theta) in [1e-35, 1e-8] m")]
    NoBracket { epsilon: f64 },
    #[error("invalid detectability criterion: {0}")]
    InvalidCriterion(String),
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),
    #[error("preset file line {line}: {message}")]
    PresetParse { line: usize, message: String },
    #[error("unknown preset '{name}' (available: {available})")]
    UnknownPreset { name: String, available: String },
}
