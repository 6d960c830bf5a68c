//! Differential and total elastic cross sections.
//!
//! Three routes to the total cross section are kept side by side:
//!
//! * [`total_cs_quadrature`] integrates (2π/k²)∫₀^{2k} f(q)² q dq with the
//!   exact arctan amplitude. This is the reference.
//! * [`total_cs_paper_series`] evaluates the polynomial series closed form
//!   verbatim. It was obtained from a truncated arctan series, so it is only
//!   meaningful for 2k/α < 1 (see [`series_validity`]), and its V₁V₂ term
//!   does not agree with a re-derivation even there. It is reported, never
//!   corrected.
//! * [`total_cs_angular_quadrature`] integrates 2π∫₀^π f(θ)² sinθ dθ, which
//!   equals the q-integral by an exact change of variables.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::amplitude::{arctan_ratio, born_amplitude_closed};
use crate::error::{Error, Result};
use crate::kinematics::Kinematics;
use crate::potentials::{PotentialKind, PotentialModel};
use crate::quadrature::{self, log_breakpoints, Tolerance, DEFAULT_MAX_PANELS};
use crate::units::{convert, PhysicalConstants, Quantity, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossSectionMethod {
    ClosedForm,
    PaperSeries,
    Quadrature,
}

impl CrossSectionMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CrossSectionMethod::ClosedForm => "closed_form",
            CrossSectionMethod::PaperSeries => "paper_series",
            CrossSectionMethod::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionResult {
    /// Å² (or Å²/sr for differential values)
    pub value: f64,
    pub method: CrossSectionMethod,
    pub rel_error_estimate: f64,
}

impl CrossSectionResult {
    pub fn in_unit(&self, unit: Unit) -> Result<f64> {
        Ok(convert(Quantity::new(self.value, Unit::SquareAngstrom), unit)?.value)
    }

    pub fn barn(&self) -> f64 {
        self.in_unit(Unit::Barn).expect("area units")
    }

    pub fn square_meters(&self) -> f64 {
        self.in_unit(Unit::SquareMeter).expect("area units")
    }
}

/// Relative accuracy requested from every cross-section quadrature.
pub const QUADRATURE_REL_TOL: f64 = 1e-11;

/// dσ/dΩ = f(θ)² in Å²/sr.
pub fn differential_cs(
    angle: f64,
    kin: &Kinematics,
    model: &PotentialModel,
    constants: &PhysicalConstants,
) -> Result<CrossSectionResult> {
    let q = kin.momentum_transfer(angle)?;
    let f = born_amplitude_closed(model, q, constants)?.value;
    Ok(CrossSectionResult {
        value: f * f,
        method: CrossSectionMethod::ClosedForm,
        rel_error_estimate: 0.0,
    })
}

fn check_total(kin: &Kinematics, model: &PotentialModel) -> Result<()> {
    if !(kin.k > 0.0) {
        return Err(Error::ZeroWaveNumber);
    }
    if model.alpha() == 0.0 {
        let name = match model.kind() {
            PotentialKind::Coulomb | PotentialKind::Yukawa => "coulomb",
            PotentialKind::Kratzer | PotentialKind::ScreenedKratzer => "kratzer",
        };
        return Err(Error::DivergentCrossSection(name));
    }
    Ok(())
}

/// Exact total cross section of the Yukawa potential,
/// 16πm²V₀²/(ħ⁴α²(4k²+α²)).
pub fn yukawa_total_cs_exact(kin: &Kinematics, v0: f64, alpha: f64, constants: &PhysicalConstants) -> f64 {
    let c = constants.two_m_over_hbar2();
    let k2 = kin.k * kin.k;
    4.0 * PI * c * c * v0 * v0 / (alpha * alpha * (4.0 * k2 + alpha * alpha))
}

/// The polynomial series closed form, evaluated term by term as written.
pub fn total_cs_paper_series(
    kin: &Kinematics,
    model: &PotentialModel,
    constants: &PhysicalConstants,
) -> Result<CrossSectionResult> {
    let alpha = model.alpha();
    if alpha == 0.0 {
        return Err(Error::ZeroScreening);
    }
    if !(kin.k > 0.0) {
        return Err(Error::ZeroWaveNumber);
    }
    let (v1, v2) = (model.v1(), model.v2());
    let c = constants.two_m_over_hbar2();
    let k2 = kin.k * kin.k;
    let k4 = k2 * k2;
    let a2 = alpha * alpha;
    let a4 = a2 * a2;
    let first = 2.0 * v1 * v1 / (a2 * (4.0 * k2 + a2));
    let second = v1 * v2 / (15.0 * alpha.powi(5) * k2) * (a4 * (4.0 * k2 / a2).ln_1p() + 24.0 * k4 - 32.0 * k2 * a2);
    let third = 2.0 * v2 * v2 / (135.0 * alpha.powi(6)) * (368.0 * k4 - 180.0 * k2 * a2 + 135.0 * a4);
    // 8πm²/ħ⁴ = 2π(2m/ħ²)²
    Ok(CrossSectionResult {
        value: 2.0 * PI * c * c * (first + second + third),
        method: CrossSectionMethod::PaperSeries,
        rel_error_estimate: f64::NAN,
    })
}

/// σ = (2π/k²)∫₀^{2k} f(q)² q dq by adaptive quadrature.
pub fn total_cs_quadrature(
    kin: &Kinematics,
    model: &PotentialModel,
    constants: &PhysicalConstants,
) -> Result<CrossSectionResult> {
    check_total(kin, model)?;
    let q_max = kin.max_momentum_transfer();
    let integrand = |q: f64| {
        let f = born_amplitude_closed(model, q, constants)
            .map(|a| a.value)
            .unwrap_or(f64::NAN);
        f * f * q
    };
    let pts = log_breakpoints(model.alpha().min(q_max) * 1e-3, q_max, 4);
    let est = quadrature::integrate_points(
        integrand,
        &pts,
        Tolerance::new(0.0, QUADRATURE_REL_TOL),
        DEFAULT_MAX_PANELS,
    )?;
    let scale = 2.0 * PI / (kin.k * kin.k);
    Ok(quadrature_result(est.value * scale, est.abs_error * scale))
}

/// σ = 2π∫₀^π (dσ/dΩ) sinθ dθ by adaptive quadrature over the angle.
pub fn total_cs_angular_quadrature(
    kin: &Kinematics,
    model: &PotentialModel,
    constants: &PhysicalConstants,
) -> Result<CrossSectionResult> {
    check_total(kin, model)?;
    let integrand = |angle: f64| {
        let dcs = differential_cs(angle, kin, model, constants)
            .map(|d| d.value)
            .unwrap_or(f64::NAN);
        dcs * angle.sin()
    };
    // angle at which q = α; the amplitude varies on this scale
    let knee = 2.0 * (model.alpha() / (2.0 * kin.k)).min(1.0).asin();
    let pts = log_breakpoints(knee * 1e-3, PI, 4);
    let est = quadrature::integrate_points(
        integrand,
        &pts,
        Tolerance::new(0.0, QUADRATURE_REL_TOL),
        DEFAULT_MAX_PANELS,
    )?;
    Ok(quadrature_result(2.0 * PI * est.value, 2.0 * PI * est.abs_error))
}

fn quadrature_result(value: f64, abs_error: f64) -> CrossSectionResult {
    CrossSectionResult {
        value,
        method: CrossSectionMethod::Quadrature,
        rel_error_estimate: if value > 0.0 { abs_error / value } else { 0.0 },
    }
}

/// Highest power of q/α kept in the arctan expansion behind the series form.
pub const SERIES_TRUNCATION_ORDER: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValidity {
    /// 2k/α, the largest argument of arctan(q/α) on [0, 2k]
    pub ratio: f64,
    pub truncation_order: u32,
    pub valid: bool,
}

pub fn series_validity(kin: &Kinematics, model: &PotentialModel) -> SeriesValidity {
    let ratio = if model.alpha() > 0.0 {
        kin.max_momentum_transfer() / model.alpha()
    } else {
        f64::INFINITY
    };
    SeriesValidity {
        ratio,
        truncation_order: SERIES_TRUNCATION_ORDER,
        valid: ratio < 1.0,
    }
}

/// q-moments of the two amplitude shapes a(q) = 1/(q²+α²) and
/// b(q) = arctan(q/α)/q on [0, 2k].
///
/// The amplitude is linear in (V₁, V₂), so
/// σ = (2π/k²)(2m/ħ²)²(V₁²·aa + 2V₁V₂·ab + V₂²·bb) for every Θ at once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMoments {
    pub k: f64,
    pub alpha: f64,
    pub aa: f64,
    pub ab: f64,
    pub bb: f64,
}

impl AmplitudeMoments {
    pub fn compute(kin: &Kinematics, alpha: f64) -> Result<Self> {
        if !(kin.k > 0.0) {
            return Err(Error::ZeroWaveNumber);
        }
        if !(alpha > 0.0) {
            return Err(Error::DivergentCrossSection("kratzer"));
        }
        let q_max = kin.max_momentum_transfer();
        let pts = log_breakpoints(alpha.min(q_max) * 1e-3, q_max, 4);
        let tol = Tolerance::new(0.0, QUADRATURE_REL_TOL);
        let a = |q: f64| 1.0 / (q * q + alpha * alpha);
        let b = |q: f64| arctan_ratio(q, alpha);
        let aa = quadrature::integrate_points(|q| a(q) * a(q) * q, &pts, tol, DEFAULT_MAX_PANELS)?;
        let ab = quadrature::integrate_points(|q| a(q) * b(q) * q, &pts, tol, DEFAULT_MAX_PANELS)?;
        let bb = quadrature::integrate_points(|q| b(q) * b(q) * q, &pts, tol, DEFAULT_MAX_PANELS)?;
        Ok(Self {
            k: kin.k,
            alpha,
            aa: aa.value,
            ab: ab.value,
            bb: bb.value,
        })
    }

    pub fn total_cs(&self, v1: f64, v2: f64, constants: &PhysicalConstants) -> f64 {
        let c = constants.two_m_over_hbar2();
        2.0 * PI / (self.k * self.k) * c * c * (v1 * v1 * self.aa + 2.0 * v1 * v2 * self.ab + v2 * v2 * self.bb)
    }

    /// σ(δ)/σ(0) − 1 for the NC Yukawa family, where δ = ΘE/(2ħc).
    ///
    /// With V₁ = e^{αδ}V₀ and V₂ = V₁δ the ratio is
    /// e^{2αδ}(1 + 2δ·ab/aa + δ²·bb/aa); V₀ cancels. Written with expm1 so
    /// small deviations keep full relative precision.
    pub fn relative_deviation(&self, nc_length: f64) -> f64 {
        let d = nc_length;
        let p = d * (2.0 * self.ab + d * self.bb) / self.aa;
        (2.0 * self.alpha * d).exp_m1() * (1.0 + p) + p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Interaction;
    use approx::assert_relative_eq;

    const C: PhysicalConstants = PhysicalConstants::CODATA_2018;
    const H2_ALPHA: f64 = 1.9426;

    fn h2(kin: &Kinematics, theta: f64) -> PotentialModel {
        PotentialModel::nc_yukawa(2, H2_ALPHA, theta, kin.total_energy, Interaction::Nucleus, &C).unwrap()
    }

    #[test]
    fn dcs_is_amplitude_squared() {
        let kin = Kinematics::relativistic(30.0).unwrap();
        let m = h2(&kin, 1e-3);
        for angle in [0.0, 0.1, 1.0, PI] {
            let q = kin.momentum_transfer(angle).unwrap();
            let f = born_amplitude_closed(&m, q, &C).unwrap().value;
            assert_eq!(differential_cs(angle, &kin, &m, &C).unwrap().value, f * f);
        }
    }

    #[test]
    fn yukawa_forward_dcs() {
        let kin = Kinematics::relativistic(5.0).unwrap();
        let m = h2(&kin, 0.0);
        let expected = (C.two_m_over_hbar2() * m.v0() / (H2_ALPHA * H2_ALPHA)).powi(2);
        assert_relative_eq!(
            differential_cs(0.0, &kin, &m, &C).unwrap().value,
            expected,
            max_relative = 1e-15
        );
    }

    #[test]
    fn nc_enhances_dcs_at_ten_degrees() {
        let kin = Kinematics::relativistic(1.0).unwrap();
        let angle = 10f64.to_radians();
        let base = differential_cs(angle, &kin, &h2(&kin, 0.0), &C).unwrap().value;
        let nc = differential_cs(angle, &kin, &h2(&kin, 1e-2), &C).unwrap().value;
        assert!(nc > base);
    }

    #[test]
    fn yukawa_quadrature_matches_analytic() {
        for t in [1.0, 1e3, 1e6, 1e9] {
            let kin = Kinematics::relativistic(t).unwrap();
            let m = h2(&kin, 0.0);
            let q = total_cs_quadrature(&kin, &m, &C).unwrap();
            let exact = yukawa_total_cs_exact(&kin, m.v0(), H2_ALPHA, &C);
            assert_relative_eq!(q.value, exact, max_relative = 1e-9);
            assert!(q.rel_error_estimate >= 0.0);
        }
    }

    #[test]
    fn h2_one_ev_regression() {
        // mpmath reference: tests/oracles/born_oracle.py
        let kin = Kinematics::relativistic(1.0).unwrap();
        let q = total_cs_quadrature(&kin, &h2(&kin, 0.0), &C).unwrap();
        assert_relative_eq!(q.value, 39.445_028_429_558, max_relative = 1e-10);
    }

    #[test]
    fn series_first_term_exact_for_yukawa() {
        let kin = Kinematics::relativistic(1.0).unwrap();
        let m = h2(&kin, 0.0);
        let s = total_cs_paper_series(&kin, &m, &C).unwrap();
        assert_eq!(s.method, CrossSectionMethod::PaperSeries);
        let q = total_cs_quadrature(&kin, &m, &C).unwrap();
        assert_relative_eq!(s.value, q.value, max_relative = 1e-6);
    }

    #[test]
    fn series_errors() {
        let kin = Kinematics::relativistic(1.0).unwrap();
        let k = PotentialModel::kratzer(-1.0, 1e-3, 5e5, &C).unwrap();
        assert_eq!(total_cs_paper_series(&kin, &k, &C), Err(Error::ZeroScreening));
        let still = Kinematics::relativistic(0.0).unwrap();
        assert_eq!(
            total_cs_paper_series(&still, &h2(&still, 0.0), &C),
            Err(Error::ZeroWaveNumber)
        );
    }

    #[test]
    fn unscreened_total_is_divergent() {
        let kin = Kinematics::relativistic(1.0).unwrap();
        let c = PotentialModel::coulomb(-1.0);
        assert_eq!(
            total_cs_quadrature(&kin, &c, &C),
            Err(Error::DivergentCrossSection("coulomb"))
        );
        let k = PotentialModel::kratzer(-1.0, 1e-3, 5e5, &C).unwrap();
        assert_eq!(
            total_cs_quadrature(&kin, &k, &C),
            Err(Error::DivergentCrossSection("kratzer"))
        );
    }

    #[test]
    fn validity_flags() {
        let low = Kinematics::relativistic(1.0).unwrap();
        let v = series_validity(&low, &h2(&low, 0.0));
        assert!(v.valid);
        assert_relative_eq!(v.ratio, 0.527, max_relative = 1e-3);
        assert_eq!(v.truncation_order, 5);
        let high = Kinematics::relativistic(1e9).unwrap();
        let v = series_validity(&high, &h2(&high, 0.0));
        assert!(!v.valid && v.ratio > 1e5);
        let wide = PotentialModel::yukawa(-1.0, 1e12).unwrap();
        assert!(series_validity(&high, &wide).ratio < 1e-3);
    }

    #[test]
    fn moments_reproduce_direct_quadrature() {
        for (t, theta) in [(1.0, 1e-2), (1e3, 1e-6), (1e9, 1e-12)] {
            let kin = Kinematics::relativistic(t).unwrap();
            let m = h2(&kin, theta);
            let mom = AmplitudeMoments::compute(&kin, H2_ALPHA).unwrap();
            let direct = total_cs_quadrature(&kin, &m, &C).unwrap().value;
            assert_relative_eq!(mom.total_cs(m.v1(), m.v2(), &C), direct, max_relative = 1e-9);
            let base = total_cs_quadrature(&kin, &h2(&kin, 0.0), &C).unwrap().value;
            assert_relative_eq!(
                mom.relative_deviation(m.nc_length()),
                direct / base - 1.0,
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn unit_converters() {
        let r = CrossSectionResult {
            value: 2.0,
            method: CrossSectionMethod::Quadrature,
            rel_error_estimate: 0.0,
        };
        assert_relative_eq!(r.barn(), 2e8, max_relative = 1e-15);
        assert_relative_eq!(r.square_meters(), 2e-20, max_relative = 1e-15);
    }
}
