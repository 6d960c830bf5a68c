//! Incident-electron kinematics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DispersionMode {
    #[default]
    Relativistic,
    Nonrelativistic,
}

impl fmt::Display for DispersionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DispersionMode::Relativistic => "rel",
            DispersionMode::Nonrelativistic => "nonrel",
        })
    }
}

impl FromStr for DispersionMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rel" | "relativistic" => Ok(Self::Relativistic),
            "nonrel" | "nonrelativistic" => Ok(Self::Nonrelativistic),
            other => Err(format!("unknown kinematic mode '{other}' (expected rel|nonrel)")),
        }
    }
}

/// Wave number in Å⁻¹ for kinetic energy `kinetic` in eV.
pub fn wave_number(kinetic: f64, mode: DispersionMode, constants: &PhysicalConstants) -> Result<f64> {
    if !(kinetic >= 0.0) {
        return Err(Error::NegativeEnergy(kinetic));
    }
    let mc2 = constants.electron_rest_energy;
    let pc = match mode {
        DispersionMode::Relativistic => (kinetic * (kinetic + 2.0 * mc2)).sqrt(),
        DispersionMode::Nonrelativistic => (2.0 * mc2 * kinetic).sqrt(),
    };
    Ok(pc / constants.hbar_c)
}

/// q = 2k·sin(θ/2).
pub fn momentum_transfer(k: f64, theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::AngleOutOfRange(theta));
    }
    if !(k >= 0.0) {
        return Err(Error::ZeroWaveNumber);
    }
    Ok(2.0 * k * (0.5 * theta).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    /// kinetic energy T, eV
    pub energy: f64,
    /// E = T + mₑc², eV; this is the energy entering the Bopp shift
    pub total_energy: f64,
    /// Å⁻¹
    pub k: f64,
    pub mode: DispersionMode,
}

impl Kinematics {
    pub fn new(kinetic: f64, mode: DispersionMode, constants: &PhysicalConstants) -> Result<Self> {
        let k = wave_number(kinetic, mode, constants)?;
        Ok(Self {
            energy: kinetic,
            total_energy: kinetic + constants.electron_rest_energy,
            k,
            mode,
        })
    }

    pub fn relativistic(kinetic: f64) -> Result<Self> {
        Self::new(kinetic, DispersionMode::Relativistic, &PhysicalConstants::CODATA_2018)
    }

    pub fn momentum_transfer(&self, theta: f64) -> Result<f64> {
        momentum_transfer(self.k, theta)
    }

    pub fn max_momentum_transfer(&self) -> f64 {
        2.0 * self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const C: PhysicalConstants = PhysicalConstants::CODATA_2018;

    #[test]
    fn zero_energy() {
        for mode in [DispersionMode::Relativistic, DispersionMode::Nonrelativistic] {
            assert_eq!(wave_number(0.0, mode, &C).unwrap(), 0.0);
        }
    }

    #[test]
    fn one_ev_nonrelativistic() {
        // sqrt(2 * 510998.95 * 1) / 1973.269804
        let k = wave_number(1.0, DispersionMode::Nonrelativistic, &C).unwrap();
        assert_relative_eq!(k, 0.512_316_722_123_381_9, max_relative = 1e-12);
    }

    #[test]
    fn one_gev_relativistic() {
        let k = wave_number(1e9, DispersionMode::Relativistic, &C).unwrap();
        assert_relative_eq!(k * C.hbar_c, 1_000_510_868.456_71, max_relative = 1e-12);
    }

    #[test]
    fn negative_energy() {
        assert_eq!(
            wave_number(-1.0, DispersionMode::Relativistic, &C),
            Err(Error::NegativeEnergy(-1.0))
        );
    }

    #[test]
    fn momentum_transfer_examples() {
        assert_eq!(momentum_transfer(3.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(momentum_transfer(3.0, PI).unwrap(), 6.0, max_relative = 1e-15);
        assert_relative_eq!(
            momentum_transfer(1.0, PI / 2.0).unwrap(),
            2f64.sqrt(),
            max_relative = 1e-15
        );
        assert!(matches!(momentum_transfer(1.0, -0.1), Err(Error::AngleOutOfRange(_))));
        assert!(matches!(momentum_transfer(1.0, 3.2), Err(Error::AngleOutOfRange(_))));
    }

    #[test]
    fn total_energy_adds_rest_energy() {
        let kin = Kinematics::relativistic(1.0).unwrap();
        assert_eq!(kin.total_energy, 1.0 + C.electron_rest_energy);
    }

    proptest! {
        #[test]
        fn k_increasing(t in 0.0f64..1e11, dt in 1e-3f64..1e3) {
            for mode in [DispersionMode::Relativistic, DispersionMode::Nonrelativistic] {
                let a = wave_number(t, mode, &C).unwrap();
                let b = wave_number(t + dt * (1.0 + t * 1e-6), mode, &C).unwrap();
                prop_assert!(b > a);
            }
        }

        #[test]
        fn modes_agree_below_kev(t in 0.0f64..1e3) {
            let r = wave_number(t, DispersionMode::Relativistic, &C).unwrap();
            let n = wave_number(t, DispersionMode::Nonrelativistic, &C).unwrap();
            prop_assert!((r - n).abs() <= 0.01 * n.max(1e-300));
        }

        #[test]
        fn q_monotone_and_bounded(k in 0.0f64..1e6, a in 0.0f64..=PI, b in 0.0f64..=PI) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let qa = momentum_transfer(k, lo).unwrap();
            let qb = momentum_transfer(k, hi).unwrap();
            prop_assert!(qa <= qb);
            prop_assert!(qb <= 2.0 * k * (1.0 + 1e-15));
        }
    }
}
