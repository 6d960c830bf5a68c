//! Coulomb, Yukawa, Kratzer and screened-Kratzer (NC Yukawa) potentials.
//!
//! The NC Yukawa potential follows from the Bopp shift r̂ = r − ΘE/(2ħc)
//! at leading order in Θ:
//!
//! ```text
//! V̂(r) = (V₁/r + V₂/r²)·e^{−αr}
//! V₁   = e^{αΘE/(2ħc)}·V₀
//! V₂   = e^{αΘE/(2ħc)}·V₀·ΘE/(2ħc)
//! ```
//!
//! The exponential prefactor is kept unexpanded. The remaining three
//! potentials are limits of this one (Θ → 0, α → 0, or both), so every model
//! carries the same `(V₀, α, Θ, E)` parameters and the derived `(V₁, V₂)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

/// Smallest radius accepted by [`PotentialModel::evaluate`], Å.
pub const MIN_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PotentialKind {
    Coulomb,
    Yukawa,
    Kratzer,
    /// NC Yukawa
    ScreenedKratzer,
}

impl PotentialKind {
    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Coulomb => "coulomb",
            PotentialKind::Yukawa => "yukawa",
            PotentialKind::Kratzer => "kratzer",
            PotentialKind::ScreenedKratzer => "screened-kratzer",
        }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which charge the incident electron sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interaction {
    /// Attractive nuclear field, V₀ = −Z·k_C e².
    #[default]
    Nucleus,
    /// Repulsive interaction with the atomic electrons, V₀ = +Z·k_C e².
    AtomicElectrons,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    ThetaToZero,
    AlphaToZero,
}

impl Limit {
    fn name(self) -> &'static str {
        match self {
            Limit::ThetaToZero => "theta->0",
            Limit::AlphaToZero => "alpha->0",
        }
    }
}

/// Shifted radius r̂ = r − ΘE/(2ħc).
pub fn bopp_shift_radius(r: f64, theta: f64, total_energy: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonpositiveRadius(r));
    }
    Ok(r - nc_length(theta, total_energy, constants))
}

/// ΘE/(2ħc), the length scale of the NC correction.
pub fn nc_length(theta: f64, total_energy: f64, constants: &PhysicalConstants) -> f64 {
    theta * total_energy / (2.0 * constants.hbar_c)
}

/// Space-time NC matrix with only Θ^{01} = −Θ^{10} = Θ nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NcMatrix {
    pub theta: f64,
}

impl NcMatrix {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta >= 0.0) {
            return Err(Error::NegativeTheta(theta));
        }
        Ok(Self { theta })
    }

    pub fn entry(&self, mu: usize, nu: usize) -> f64 {
        match (mu, nu) {
            (0, 1) => self.theta,
            (1, 0) => -self.theta,
            _ => 0.0,
        }
    }

    pub fn to_array(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (mu, row) in m.iter_mut().enumerate() {
            for (nu, x) in row.iter_mut().enumerate() {
                *x = self.entry(mu, nu);
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    kind: PotentialKind,
    v0: f64,
    alpha: f64,
    theta: f64,
    energy_total: f64,
    nc_length: f64,
    v1: f64,
    v2: f64,
}

impl PotentialModel {
    fn build(
        kind: PotentialKind,
        v0: f64,
        alpha: f64,
        theta: f64,
        energy_total: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::NegativeScreening(alpha));
        }
        if !(theta >= 0.0) {
            return Err(Error::NegativeTheta(theta));
        }
        if !(energy_total >= 0.0) {
            return Err(Error::NegativeEnergy(energy_total));
        }
        let nc_length = nc_length(theta, energy_total, constants);
        let v1 = (alpha * nc_length).exp() * v0;
        Ok(Self {
            kind,
            v0,
            alpha,
            theta,
            energy_total,
            nc_length,
            v1,
            v2: v1 * nc_length,
        })
    }

    pub fn coulomb(v0: f64) -> Self {
        Self::build(
            PotentialKind::Coulomb,
            v0,
            0.0,
            0.0,
            0.0,
            &PhysicalConstants::CODATA_2018,
        )
        .expect("zero parameters are valid")
    }

    pub fn yukawa(v0: f64, alpha: f64) -> Result<Self> {
        Self::build(
            PotentialKind::Yukawa,
            v0,
            alpha,
            0.0,
            0.0,
            &PhysicalConstants::CODATA_2018,
        )
    }

    /// Kratzer form V₀/r + V₁ᴷ/r² with V₁ᴷ = V₀ΘE/(2ħc).
    pub fn kratzer(v0: f64, theta: f64, energy_total: f64, constants: &PhysicalConstants) -> Result<Self> {
        Self::build(PotentialKind::Kratzer, v0, 0.0, theta, energy_total, constants)
    }

    pub fn screened_kratzer(
        v0: f64,
        alpha: f64,
        theta: f64,
        energy_total: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        Self::build(
            PotentialKind::ScreenedKratzer,
            v0,
            alpha,
            theta,
            energy_total,
            constants,
        )
    }

    /// NC Yukawa potential for a target of atomic number `z`.
    pub fn nc_yukawa(
        z: i64,
        alpha: f64,
        theta: f64,
        energy_total: f64,
        interaction: Interaction,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        if z < 1 {
            return Err(Error::InvalidZ(z));
        }
        let magnitude = z as f64 * constants.coulomb_coupling;
        let v0 = match interaction {
            Interaction::Nucleus => -magnitude,
            Interaction::AtomicElectrons => magnitude,
        };
        Self::screened_kratzer(v0, alpha, theta, energy_total, constants)
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn energy_total(&self) -> f64 {
        self.energy_total
    }

    /// ΘE/(2ħc) in Å.
    pub fn nc_length(&self) -> f64 {
        self.nc_length
    }

    /// Coefficient of e^{−αr}/r (equals V₀ for every kind except the
    /// screened Kratzer form with αΘ > 0).
    pub fn v1(&self) -> f64 {
        self.v1
    }

    /// Coefficient of e^{−αr}/r². For the Kratzer kind this is V₁ᴷ.
    pub fn v2(&self) -> f64 {
        self.v2
    }

    /// Same model with a different NC parameter.
    pub fn with_theta(&self, theta: f64, constants: &PhysicalConstants) -> Result<Self> {
        Self::build(self.kind, self.v0, self.alpha, theta, self.energy_total, constants)
    }

    /// Potential energy in eV at radius `r` in Å.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r >= MIN_RADIUS) {
            return Err(Error::NonpositiveRadius(r));
        }
        let value = match self.kind {
            PotentialKind::Coulomb => self.v0 / r,
            PotentialKind::Yukawa => (self.v0 / r) * (-self.alpha * r).exp(),
            PotentialKind::Kratzer => self.v0 / r + self.v2 / (r * r),
            PotentialKind::ScreenedKratzer => (self.v1 / r + self.v2 / (r * r)) * (-self.alpha * r).exp(),
        };
        Ok(value)
    }

    pub fn reduce(&self, limit: Limit, constants: &PhysicalConstants) -> Result<Self> {
        use PotentialKind::*;
        match (self.kind, limit) {
            (ScreenedKratzer, Limit::ThetaToZero) => Self::yukawa(self.v0, self.alpha),
            (Kratzer, Limit::ThetaToZero) => Ok(Self::coulomb(self.v0)),
            (ScreenedKratzer, Limit::AlphaToZero) => Self::kratzer(self.v0, self.theta, self.energy_total, constants),
            (Yukawa, Limit::AlphaToZero) => Ok(Self::coulomb(self.v0)),
            (kind, limit) => Err(Error::UnsupportedReduction {
                kind: kind.name(),
                limit: limit.name(),
            }),
        }
    }
}
