//! Elastic electron scattering off Yukawa-type potentials with a leading-order
//! non-commutative (NC) space-time correction, in the first Born
//! approximation.
//!
//! Units throughout: energies in eV, lengths in Å, the NC parameter Θ as an
//! area in Å², cross sections in Å². See [`units`] for conversions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod bounds;
pub mod cross_section;
pub mod error;
pub mod kinematics;
pub mod potentials;
pub mod presets;
pub mod quadrature;
pub mod units;

pub use amplitude::{
    born_amplitude_closed, born_amplitude_quadrature, nc_amplitude_theta, AmplitudeMethod, AmplitudeResult,
};
pub use bounds::{
    bound_table, cs_deviation, estimate_bound, BoundCell, BoundScanResult, CalibrationRow, DetectabilityCriterion,
};
pub use cross_section::{
    differential_cs, series_validity, total_cs_angular_quadrature, total_cs_paper_series, total_cs_quadrature,
    CrossSectionMethod, CrossSectionResult, SeriesValidity,
};
pub use error::{Error, Result};
pub use kinematics::{DispersionMode, Kinematics};
pub use potentials::{Interaction, Limit, NcMatrix, PotentialKind, PotentialModel};
pub use presets::MoleculePreset;
pub use units::{PhysicalConstants, Quantity, Unit};
