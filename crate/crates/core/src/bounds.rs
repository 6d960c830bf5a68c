//! Lower bounds on the NC parameter from elastic electron–molecule scattering.
//!
//! A value of Θ counts as detectable at a given beam energy when it shifts
//! the total elastic cross section by a relative amount of at least ε:
//!
//! ```text
//! D(Θ) = |σ̂(Θ) − σ̂(0)| / σ̂(0) ≥ ε
//! ```
//!
//! The bound is the Θ where D crosses ε, located by a one-decade scan of
//! log₁₀Θ followed by bisection. ε is either chosen directly or calibrated so
//! that an anchor row (by default H₂ at 1 eV with √Θ = 1e-11 m) is reproduced
//! exactly, and then held fixed for every other energy and target.
//!
//! D depends on Θ only through δ = ΘE/(2ħc) and on the target only through
//! α (Z cancels in the ratio), so it is computed from the q-moments of the
//! amplitude shapes in [`AmplitudeMoments`]: one set of quadratures per
//! (energy, α) serves the whole scan.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cross_section::AmplitudeMoments;
use crate::error::{Error, Result};
use crate::kinematics::{DispersionMode, Kinematics};
use crate::potentials::nc_length;
use crate::presets::MoleculePreset;
use crate::units::{sqrt_theta_m, theta_from_sqrt_m, PhysicalConstants};

/// Search window for √Θ, meters.
pub const SQRT_THETA_RANGE_M: (f64, f64) = (1e-35, 1e-8);
/// Bisection stops once the bracket on log₁₀Θ is narrower than this.
pub const BRACKET_WIDTH_DECADES: f64 = 0.05;
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub target: MoleculePreset,
    /// kinetic energy, eV
    pub energy: f64,
    pub sqrt_theta_m: f64,
}

impl CalibrationRow {
    /// H₂ at 1 eV, √Θ = 1e-11 m.
    pub fn h2_one_ev() -> Self {
        Self {
            target: MoleculePreset::h2(),
            energy: 1.0,
            sqrt_theta_m: 1e-11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectabilityCriterion {
    pub epsilon: f64,
    pub calibration_row: Option<CalibrationRow>,
}

impl DetectabilityCriterion {
    pub fn fixed(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidCriterion(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            calibration_row: None,
        })
    }

    /// Solves ε so that the anchor row sits exactly on the threshold.
    ///
    /// The calibrated ε is whatever deviation the anchor produces; it is
    /// only required to be finite and positive, since a large anchor Θ can
    /// change the cross section by more than 100 %.
    pub fn calibrated(row: CalibrationRow, mode: DispersionMode, constants: &PhysicalConstants) -> Result<Self> {
        let kin = Kinematics::new(row.energy, mode, constants)?;
        let theta = theta_from_sqrt_m(row.sqrt_theta_m)?;
        let epsilon = cs_deviation(&kin, row.target.z, row.target.alpha_inv_angstrom, theta, constants)?;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidCriterion(format!(
                "anchor row gives a non-positive or infinite deviation ({epsilon})"
            )));
        }
        Ok(Self {
            epsilon,
            calibration_row: Some(row),
        })
    }
}

impl Default for DetectabilityCriterion {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            calibration_row: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundScanResult {
    /// kinetic energy, eV
    pub energy: f64,
    pub sqrt_theta_bound: f64,
    pub epsilon_used: f64,
    pub method: BoundMethod,
    pub iterations: u32,
}

fn check_target(z: i64, alpha: f64) -> Result<()> {
    if z < 1 {
        return Err(Error::InvalidZ(z));
    }
    if !(alpha > 0.0) {
        return Err(Error::DivergentCrossSection("kratzer"));
    }
    Ok(())
}

/// Relative total-cross-section change |σ̂(Θ) − σ̂(0)|/σ̂(0) for Θ in Å².
pub fn cs_deviation(kin: &Kinematics, z: i64, alpha: f64, theta_nc: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_target(z, alpha)?;
    if !(theta_nc >= 0.0) {
        return Err(Error::NegativeTheta(theta_nc));
    }
    let moments = AmplitudeMoments::compute(kin, alpha)?;
    Ok(moments
        .relative_deviation(nc_length(theta_nc, kin.total_energy, constants))
        .abs())
}

/// Deviation D at each √Θ (meters) of `grid`, for diagnostics.
pub fn deviation_curve(
    kin: &Kinematics,
    alpha: f64,
    grid: &[f64],
    constants: &PhysicalConstants,
) -> Result<Vec<(f64, f64)>> {
    let moments = AmplitudeMoments::compute(kin, alpha)?;
    grid.iter()
        .map(|&s| {
            let theta = theta_from_sqrt_m(s)?;
            Ok((
                s,
                moments
                    .relative_deviation(nc_length(theta, kin.total_energy, constants))
                    .abs(),
            ))
        })
        .collect()
}

pub fn estimate_bound(
    kin: &Kinematics,
    z: i64,
    alpha: f64,
    criterion: &DetectabilityCriterion,
    constants: &PhysicalConstants,
) -> Result<BoundScanResult> {
    check_target(z, alpha)?;
    let epsilon = criterion.epsilon;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidCriterion(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let moments = AmplitudeMoments::compute(kin, alpha)?;
    let deviation = |log_theta: f64| {
        let theta = 10f64.powf(log_theta);
        moments
            .relative_deviation(nc_length(theta, kin.total_energy, constants))
            .abs()
    };

    let lo_limit = theta_from_sqrt_m(SQRT_THETA_RANGE_M.0)?.log10().round();
    let hi_limit = theta_from_sqrt_m(SQRT_THETA_RANGE_M.1)?.log10().round();
    let steps = (hi_limit - lo_limit) as usize;
    if deviation(lo_limit) >= epsilon {
        return Err(Error::NoBracket { epsilon });
    }
    let (mut lo, mut hi) = (0..steps)
        .map(|i| (lo_limit + i as f64, lo_limit + (i + 1) as f64))
        .find(|&(_, b)| deviation(b) >= epsilon)
        .ok_or(Error::NoBracket { epsilon })?;

    let mut iterations = 0;
    while hi - lo >= BRACKET_WIDTH_DECADES {
        let mid = 0.5 * (lo + hi);
        if deviation(mid) >= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    debug_assert!(deviation(lo) < epsilon && deviation(hi) >= epsilon);
    let theta = 10f64.powf(0.5 * (lo + hi));
    Ok(BoundScanResult {
        energy: kin.energy,
        sqrt_theta_bound: sqrt_theta_m(theta)?,
        epsilon_used: epsilon,
        method: BoundMethod::Bisection,
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCell {
    pub target: String,
    pub energy: f64,
    pub result: Result<BoundScanResult>,
}

/// Every (target, energy) pair, targets outermost. Cell failures are kept
/// in place rather than aborting the table.
pub fn bound_table(
    targets: &[MoleculePreset],
    energies: &[f64],
    criterion: &DetectabilityCriterion,
    mode: DispersionMode,
    constants: &PhysicalConstants,
) -> Result<Vec<BoundCell>> {
    if targets.is_empty() {
        return Err(Error::EmptyInput("target list"));
    }
    if energies.is_empty() {
        return Err(Error::EmptyInput("energy list"));
    }
    let cells: Vec<(&MoleculePreset, f64)> = targets
        .iter()
        .flat_map(|t| energies.iter().map(move |&e| (t, e)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(target, energy)| BoundCell {
            target: target.name.clone(),
            energy,
            result: Kinematics::new(energy, mode, constants)
                .and_then(|kin| estimate_bound(&kin, target.z, target.alpha_inv_angstrom, criterion, constants)),
        })
        .collect())
}
