//! Unit system and physical constants.
//!
//! Everything inside the crate computes with energies in eV, lengths in Å,
//! the NC parameter Θ as an area in Å² and cross sections in Å². The
//! [`Quantity`] type exists only at the edges, where users speak meters,
//! barns or GeV.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant times speed of light, eV·Å (CODATA 2018).
pub const HBAR_C: f64 = 1973.269804;
/// Electron rest energy mₑc², eV (CODATA 2018).
pub const ELECTRON_REST_ENERGY: f64 = 510_998.95;
/// Inverse fine-structure constant (CODATA 2018).
pub const INVERSE_FINE_STRUCTURE: f64 = 137.035_999_084;

/// Å per meter.
pub const ANGSTROM_PER_METER: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ħc in eV·Å
    pub hbar_c: f64,
    /// mₑc² in eV
    pub electron_rest_energy: f64,
    /// k_C e² = ħc·α_fs in eV·Å
    pub coulomb_coupling: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar_c: HBAR_C,
        electron_rest_energy: ELECTRON_REST_ENERGY,
        coulomb_coupling: HBAR_C / INVERSE_FINE_STRUCTURE,
    };

    /// 2m/ħ² expressed as 2mₑc²/(ħc)², in eV⁻¹·Å⁻².
    pub fn two_m_over_hbar2(&self) -> f64 {
        2.0 * self.electron_rest_energy / (self.hbar_c * self.hbar_c)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Exponents of (energy, length) in a derived dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dimension {
    pub energy: i8,
    pub length: i8,
}

impl Dimension {
    pub const NONE: Dimension = Dimension::new(0, 0);
    pub const ENERGY: Dimension = Dimension::new(1, 0);
    pub const LENGTH: Dimension = Dimension::new(0, 1);
    pub const INVERSE_LENGTH: Dimension = Dimension::new(0, -1);
    pub const AREA: Dimension = Dimension::new(0, 2);

    pub const fn new(energy: i8, length: i8) -> Self {
        Self { energy, length }
    }

    pub const fn powi(self, n: i8) -> Self {
        Self::new(self.energy * n, self.length * n)
    }
}

impl Mul for Dimension {
    type Output = Dimension;
    fn mul(self, rhs: Dimension) -> Dimension {
        Dimension::new(self.energy + rhs.energy, self.length + rhs.length)
    }
}

impl Div for Dimension {
    type Output = Dimension;
    fn div(self, rhs: Dimension) -> Dimension {
        Dimension::new(self.energy - rhs.energy, self.length - rhs.length)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E^{} L^{}", self.energy, self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "eV")]
    ElectronVolt,
    #[serde(rename = "keV")]
    KiloElectronVolt,
    #[serde(rename = "MeV")]
    MegaElectronVolt,
    #[serde(rename = "GeV")]
    GigaElectronVolt,
    #[serde(rename = "Å")]
    Angstrom,
    #[serde(rename = "Å⁻¹")]
    InverseAngstrom,
    #[serde(rename = "m")]
    Meter,
    #[serde(rename = "m²")]
    SquareMeter,
    #[serde(rename = "barn")]
    Barn,
    #[serde(rename = "Å²")]
    SquareAngstrom,
}

impl Unit {
    pub const ALL: [Unit; 10] = [
        Unit::ElectronVolt,
        Unit::KiloElectronVolt,
        Unit::MegaElectronVolt,
        Unit::GigaElectronVolt,
        Unit::Angstrom,
        Unit::InverseAngstrom,
        Unit::Meter,
        Unit::SquareMeter,
        Unit::Barn,
        Unit::SquareAngstrom,
    ];

    pub fn dimension(self) -> Dimension {
        match self {
            Unit::ElectronVolt | Unit::KiloElectronVolt | Unit::MegaElectronVolt | Unit::GigaElectronVolt => {
                Dimension::ENERGY
            }
            Unit::Angstrom | Unit::Meter => Dimension::LENGTH,
            Unit::InverseAngstrom => Dimension::INVERSE_LENGTH,
            Unit::SquareMeter | Unit::Barn | Unit::SquareAngstrom => Dimension::AREA,
        }
    }

    /// Size of one of this unit in internal units (eV, Å, Å⁻¹, Å²).
    fn internal_scale(self) -> f64 {
        match self {
            Unit::ElectronVolt => 1.0,
            Unit::KiloElectronVolt => 1e3,
            Unit::MegaElectronVolt => 1e6,
            Unit::GigaElectronVolt => 1e9,
            Unit::Angstrom => 1.0,
            Unit::InverseAngstrom => 1.0,
            Unit::Meter => ANGSTROM_PER_METER,
            Unit::SquareMeter => ANGSTROM_PER_METER * ANGSTROM_PER_METER,
            // 1 barn = 1e-28 m² = 1e-8 Å²
            Unit::Barn => 1e-8,
            Unit::SquareAngstrom => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::ElectronVolt => "eV",
            Unit::KiloElectronVolt => "keV",
            Unit::MegaElectronVolt => "MeV",
            Unit::GigaElectronVolt => "GeV",
            Unit::Angstrom => "Å",
            Unit::InverseAngstrom => "Å⁻¹",
            Unit::Meter => "m",
            Unit::SquareMeter => "m²",
            Unit::Barn => "barn",
            Unit::SquareAngstrom => "Å²",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub const fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    /// Value expressed in the internal unit of the same dimension.
    pub fn to_internal(self) -> f64 {
        self.value * self.unit.internal_scale()
    }

    pub fn from_internal(value: f64, unit: Unit) -> Self {
        Self::new(value / unit.internal_scale(), unit)
    }

    pub fn dimension(self) -> Dimension {
        self.unit.dimension()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

pub fn convert(x: Quantity, target: Unit) -> Result<Quantity> {
    if x.unit.dimension() != target.dimension() {
        return Err(Error::IncompatibleUnits {
            from: x.unit,
            to: target,
        });
    }
    if x.unit == target {
        return Ok(x);
    }
    Ok(Quantity::from_internal(x.to_internal(), target))
}

/// √Θ in meters for Θ given in Å².
pub fn sqrt_theta_m(theta: f64) -> Result<f64> {
    if theta < 0.0 || theta.is_nan() {
        return Err(Error::NegativeTheta(theta));
    }
    Ok(theta.sqrt() / ANGSTROM_PER_METER)
}

/// Θ in Å² from √Θ in meters (the user-facing convention).
pub fn theta_from_sqrt_m(sqrt_theta_m: f64) -> Result<f64> {
    if sqrt_theta_m < 0.0 || sqrt_theta_m.is_nan() {
        return Err(Error::NegativeTheta(sqrt_theta_m));
    }
    let root = sqrt_theta_m * ANGSTROM_PER_METER;
    Ok(root * root)
}

/// Dimension of every exported formula, as the crate composes it from its
/// inputs. Used by the dimension-consistency tests.
pub mod formulas {
    use super::Dimension;

    const E: Dimension = Dimension::ENERGY;
    const L: Dimension = Dimension::LENGTH;

    pub const THETA: Dimension = Dimension::AREA;
    pub const HBAR_C: Dimension = Dimension::new(1, 1);
    pub const COULOMB_COUPLING: Dimension = Dimension::new(1, 1);
    pub const V0: Dimension = Dimension::new(1, 1);
    pub const ALPHA: Dimension = Dimension::INVERSE_LENGTH;

    /// ΘE/(2ħc)
    pub fn nc_length() -> Dimension {
        THETA * E / HBAR_C
    }

    /// αΘE/(2ħc), the argument of the exponential prefactor
    pub fn nc_exponent() -> Dimension {
        ALPHA * nc_length()
    }

    pub fn v1() -> Dimension {
        V0 * Dimension::NONE
    }

    pub fn v2() -> Dimension {
        V0 * nc_length()
    }

    /// 2mₑc²/(ħc)²
    pub fn two_m_over_hbar2() -> Dimension {
        E / HBAR_C.powi(2)
    }

    pub fn wave_number() -> Dimension {
        E / HBAR_C
    }

    pub fn screened_kratzer_potential() -> Dimension {
        // (V₁/r + V₂/r²)·e^{-αr}; both terms must agree
        let a = v1() / L;
        let b = v2() / L.powi(2);
        assert_eq!(a, b, "V1/r and V2/r^2 disagree");
        a
    }

    pub fn born_amplitude() -> Dimension {
        let q = wave_number();
        let a = two_m_over_hbar2() * v1() / q.powi(2);
        let b = two_m_over_hbar2() * v2() / q;
        assert_eq!(a, b, "amplitude terms disagree");
        a
    }

    pub fn born_integral_amplitude() -> Dimension {
        // -(2m/ħ²)(1/q)∫V(r) r sin(qr) dr
        let q = wave_number();
        two_m_over_hbar2() / q * screened_kratzer_potential() * L * L
    }

    pub fn differential_cross_section() -> Dimension {
        born_amplitude().powi(2)
    }

    pub fn total_cross_section() -> Dimension {
        let k = wave_number();
        born_amplitude().powi(2) * k * k / k.powi(2)
    }

    pub fn series_ratio() -> Dimension {
        wave_number() / ALPHA
    }
}
