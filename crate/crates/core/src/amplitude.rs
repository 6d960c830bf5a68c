//! First-order Born scattering amplitudes.
//!
//! ```text
//! f(q) = −(2m/ħ²)(1/q) ∫₀^∞ V(r)·r·sin(qr) dr
//! ```
//!
//! For the screened Kratzer form this integrates to
//! `f(q) = −(2m/ħ²)[V₁/(q²+α²) + V₂·arctan(q/α)/q]`, which covers Yukawa
//! (V₂ = 0), Kratzer (α = 0, arctan → π/2) and Coulomb (both). The amplitude
//! is real; 2m/ħ² is realised as 2mₑc²/(ħc)².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Kinematics;
use crate::potentials::{PotentialKind, PotentialModel};
use crate::quadrature::{self, Tolerance};
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeResult {
    /// Å
    pub value: f64,
    pub method: AmplitudeMethod,
    /// Å; zero for closed forms
    pub abs_error_estimate: f64,
}

/// Below `q < SERIES_THRESHOLD·α` arctan(x)/x is replaced by its series.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// arctan(q/α)/q, continuous through q = 0 for α > 0 and equal to
/// (π/2)/q for α = 0.
pub fn arctan_ratio(q: f64, alpha: f64) -> f64 {
    if alpha > 0.0 && q < SERIES_THRESHOLD * alpha {
        let x = q / alpha;
        let x2 = x * x;
        (1.0 - x2 / 3.0 + x2 * x2 / 5.0) / alpha
    } else {
        q.atan2(alpha) / q
    }
}

fn check_q(model: &PotentialModel, q: f64) -> Result<()> {
    if !(q >= 0.0) {
        return Err(Error::NegativeMomentumTransfer(q));
    }
    if q == 0.0 && model.alpha() == 0.0 {
        return Err(Error::UndefinedAmplitude);
    }
    Ok(())
}

/// Closed-form Born amplitude in Å at momentum transfer `q` (Å⁻¹).
pub fn born_amplitude_closed(model: &PotentialModel, q: f64, constants: &PhysicalConstants) -> Result<AmplitudeResult> {
    check_q(model, q)?;
    let c = constants.two_m_over_hbar2();
    let alpha = model.alpha();
    let value = match model.kind() {
        PotentialKind::Coulomb => -c * model.v0() / (q * q),
        PotentialKind::Yukawa => -c * model.v0() / (q * q + alpha * alpha),
        PotentialKind::Kratzer => -c * (model.v0() / (q * q) + model.v2() * std::f64::consts::FRAC_PI_2 / q),
        PotentialKind::ScreenedKratzer => {
            -c * (model.v1() / (q * q + alpha * alpha) + model.v2() * arctan_ratio(q, alpha))
        }
    };
    Ok(AmplitudeResult {
        value,
        method: AmplitudeMethod::ClosedForm,
        abs_error_estimate: 0.0,
    })
}

/// Default absolute tolerance on f, Å.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

/// Radius beyond which e^{−αr} < 1e-16.
pub fn integration_cutoff(alpha: f64) -> f64 {
    16.0 * std::f64::consts::LN_10 / alpha
}

/// Born amplitude by direct quadrature of the radial integral.
pub fn born_amplitude_quadrature(
    model: &PotentialModel,
    q: f64,
    constants: &PhysicalConstants,
    abs_tol: f64,
) -> Result<AmplitudeResult> {
    let alpha = model.alpha();
    if alpha == 0.0 {
        return Err(Error::DivergentIntegral);
    }
    if !(q > 0.0) {
        return Err(if q == 0.0 {
            Error::UndefinedAmplitude
        } else {
            Error::NegativeMomentumTransfer(q)
        });
    }
    let c = constants.two_m_over_hbar2();
    let prefactor = c / q;
    // V(r)·r; evaluate() rejects r below MIN_RADIUS, and the radial
    // integrand V(r)·r·sin(qr) stays finite there, so clamp instead.
    let radial = |r: f64| {
        let r = r.max(crate::potentials::MIN_RADIUS);
        model.evaluate(r).map(|v| v * r).unwrap_or(0.0)
    };
    let tol = Tolerance::new(abs_tol / prefactor, 1e-11);
    let est = quadrature::integrate_sine(radial, q, integration_cutoff(alpha), tol)?;
    let abs_error = est.abs_error * prefactor;
    if abs_error > abs_tol.max(1e-9 * (est.value * prefactor).abs()) {
        return Err(Error::QuadratureNonConvergence {
            value: -est.value * prefactor,
            abs_error,
        });
    }
    Ok(AmplitudeResult {
        value: -est.value * prefactor,
        method: AmplitudeMethod::Quadrature,
        abs_error_estimate: abs_error,
    })
}

/// NC Yukawa amplitude at scattering angle `angle` for the target (Z, α).
///
/// At `angle = 0` the V₂ term takes its q → 0 limit (needs α > 0).
pub fn nc_amplitude_theta(
    angle: f64,
    kin: &Kinematics,
    z: i64,
    alpha: f64,
    theta_nc: f64,
    constants: &PhysicalConstants,
) -> Result<AmplitudeResult> {
    let model = PotentialModel::nc_yukawa(
        z,
        alpha,
        theta_nc,
        kin.total_energy,
        crate::potentials::Interaction::Nucleus,
        constants,
    )?;
    let q = kin.momentum_transfer(angle)?;
    born_amplitude_closed(&model, q, constants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{Interaction, Limit};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const C: PhysicalConstants = PhysicalConstants::CODATA_2018;
    const H2_ALPHA: f64 = 1.9426;

    fn unit_mass() -> PhysicalConstants {
        // 2m/ħ² = 1
        PhysicalConstants {
            hbar_c: 1.0,
            electron_rest_energy: 0.5,
            coulomb_coupling: 1.0,
        }
    }

    #[test]
    fn yukawa_synthetic_units() {
        let m = PotentialModel::yukawa(1.0, 1.0).unwrap();
        let f = born_amplitude_closed(&m, 1.0, &unit_mass()).unwrap();
        assert_eq!(f.value, -0.5);
        assert_eq!(f.method, AmplitudeMethod::ClosedForm);
    }

    #[test]
    fn screened_kratzer_without_nc_is_yukawa() {
        let sk = PotentialModel::screened_kratzer(-7.0, 1.1, 0.0, 5e5, &C).unwrap();
        let y = PotentialModel::yukawa(-7.0, 1.1).unwrap();
        for q in [0.0, 1e-3, 0.7, 12.0, 3e4] {
            let a = born_amplitude_closed(&sk, q, &C).unwrap().value;
            let b = born_amplitude_closed(&y, q, &C).unwrap().value;
            assert_relative_eq!(a, b, max_relative = 1e-15);
        }
    }

    #[test]
    fn kratzer_is_zero_alpha_limit() {
        let sk = PotentialModel::screened_kratzer(-7.0, 0.0, 1e-3, 5e5, &C).unwrap();
        let k = sk.reduce(Limit::AlphaToZero, &C).unwrap();
        for q in [1e-3, 0.7, 12.0] {
            let a = born_amplitude_closed(&sk, q, &C).unwrap().value;
            let b = born_amplitude_closed(&k, q, &C).unwrap().value;
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
        // and the tiny-alpha screened form approaches it
        let near = PotentialModel::screened_kratzer(-7.0, 1e-9, 1e-3, 5e5, &C).unwrap();
        let a = born_amplitude_closed(&near, 2.0, &C).unwrap().value;
        let b = born_amplitude_closed(&k, 2.0, &C).unwrap().value;
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }

    #[test]
    fn forward_limit_is_continuous() {
        let sk = PotentialModel::screened_kratzer(-7.0, 1.3, 2e-3, 5e5, &C).unwrap();
        let at_zero = born_amplitude_closed(&sk, 0.0, &C).unwrap().value;
        let c = C.two_m_over_hbar2();
        let expected = -c * (sk.v1() / (1.3 * 1.3) + sk.v2() / 1.3);
        assert_relative_eq!(at_zero, expected, max_relative = 1e-15);
        for q in [1e-12, 1e-9, 1.2e-8, 1e-6] {
            let v = born_amplitude_closed(&sk, q, &C).unwrap().value;
            assert_relative_eq!(v, at_zero, max_relative = 1e-11);
        }
    }

    #[test]
    fn undefined_and_divergent_cases() {
        let c = PotentialModel::coulomb(-1.0);
        assert_eq!(born_amplitude_closed(&c, 0.0, &C), Err(Error::UndefinedAmplitude));
        assert_eq!(
            born_amplitude_quadrature(&c, 1.0, &C, 1e-10),
            Err(Error::DivergentIntegral)
        );
        let y = PotentialModel::yukawa(-1.0, 1.0).unwrap();
        assert!(born_amplitude_quadrature(&y, 0.0, &C, 1e-10).is_err());
        assert!(born_amplitude_closed(&y, -1.0, &C).is_err());
    }

    #[test]
    fn h2_one_ev_right_angle_matches_oracle() {
        // mpmath quadosc of the radial integral: tests/oracles/born_oracle.py
        let kin = Kinematics::relativistic(1.0).unwrap();
        let f = nc_amplitude_theta(PI / 2.0, &kin, 2, H2_ALPHA, 0.0, &C).unwrap();
        assert_relative_eq!(f.value, 1.758_444_148_677_654, max_relative = 1e-12);
        let model = PotentialModel::nc_yukawa(2, H2_ALPHA, 0.0, kin.total_energy, Interaction::Nucleus, &C).unwrap();
        let q = kin.momentum_transfer(PI / 2.0).unwrap();
        let quad = born_amplitude_quadrature(&model, q, &C, DEFAULT_ABS_TOL).unwrap();
        assert_relative_eq!(quad.value, f.value, max_relative = 1e-6);
        assert!(quad.abs_error_estimate >= 0.0);
    }

    #[test]
    fn h2_one_kev_thirty_degrees_nc() {
        // √Θ = 1e-15 m → Θ = 1e-10 Å²; oracle value from mpmath quadosc
        let kin = Kinematics::relativistic(1e3).unwrap();
        let f = nc_amplitude_theta(PI / 6.0, &kin, 2, H2_ALPHA, 1e-10, &C).unwrap();
        assert!(f.value.is_finite());
        assert_relative_eq!(f.value, 0.101_912_273_935_432_36, max_relative = 1e-10);
    }

    #[test]
    fn kratzer_convention_in_angle_form() {
        // α = 0: the V₂ term carries arctan → π/2, i.e. V₂ → πV₀ΘE/(4ħc)
        // multiplying 1/(2k sin(θ/2)).
        let kin = Kinematics::relativistic(50.0).unwrap();
        let theta_nc = 1e-4;
        let angle = 0.8;
        let f = nc_amplitude_theta(angle, &kin, 3, 0.0, theta_nc, &C).unwrap().value;
        let v0 = -3.0 * C.coulomb_coupling;
        let v2 = PI * v0 * theta_nc * kin.total_energy / (4.0 * C.hbar_c);
        let s = (angle / 2.0).sin();
        let expected = -C.two_m_over_hbar2() * (v0 / (4.0 * kin.k * kin.k * s * s) + v2 / (2.0 * kin.k * s));
        assert_relative_eq!(f, expected, max_relative = 1e-13);
    }

    #[test]
    fn large_momentum_transfer_quadrature() {
        // 2k at 1 GeV
        let kin = Kinematics::relativistic(1e9).unwrap();
        let q = kin.max_momentum_transfer();
        let model = PotentialModel::nc_yukawa(2, H2_ALPHA, 1e-12, kin.total_energy, Interaction::Nucleus, &C).unwrap();
        let closed = born_amplitude_closed(&model, q, &C).unwrap().value;
        let quad = born_amplitude_quadrature(&model, q, &C, 1e-14).unwrap();
        assert!(
            (quad.value - closed).abs() <= (1e-6 * closed.abs()).max(1e-9),
            "{} vs {}",
            quad.value,
            closed
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn linear_in_coefficients(
            a in -10.0f64..10.0, b in -10.0f64..10.0,
            alpha in 0.1f64..4.0, q in 1e-3f64..1e3,
        ) {
            // f is linear in (V₁, V₂) at fixed (q, α): f(V₁, V₂) = V₁·f(1,0) + V₂·f(0,1)
            let c = C.two_m_over_hbar2();
            let unit1 = -c / (q * q + alpha * alpha);
            let unit2 = -c * arctan_ratio(q, alpha);
            let nc_len = 0.37;
            let theta = nc_len * 2.0 * C.hbar_c / 1e6;
            let m1 = PotentialModel::screened_kratzer(a, alpha, theta, 1e6, &C).unwrap();
            let m2 = PotentialModel::screened_kratzer(b, alpha, theta, 1e6, &C).unwrap();
            let fa = born_amplitude_closed(&m1, q, &C).unwrap().value;
            let fb = born_amplitude_closed(&m2, q, &C).unwrap().value;
            let direct = m1.v1() * unit1 + m1.v2() * unit2;
            prop_assert!((fa - direct).abs() <= 1e-12 * direct.abs().max(1e-300));
            let msum = PotentialModel::screened_kratzer(a + b, alpha, theta, 1e6, &C).unwrap();
            let fsum = born_amplitude_closed(&msum, q, &C).unwrap().value;
            prop_assert!((fsum - (fa + fb)).abs() <= 1e-11 * (fa.abs() + fb.abs()));
        }

        #[test]
        fn attractive_sign_and_monotone(z in 1i64..30, alpha in 0.5f64..3.0, t in 1.0f64..1e6, theta in 0.0f64..1e-4) {
            let kin = Kinematics::relativistic(t).unwrap();
            let mut prev = f64::INFINITY;
            for i in 1..=40 {
                let angle = PI * i as f64 / 40.0;
                let f = nc_amplitude_theta(angle, &kin, z, alpha, theta, &C).unwrap().value;
                // V₀ < 0 ⇒ f > 0 (the overall minus flips the sign)
                prop_assert!(f > 0.0);
                prop_assert!(f <= prev);
                prev = f;
            }
        }
    }
}
