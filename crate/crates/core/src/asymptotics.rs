//! Closed-form narrow-gap results and first-order correction factors.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::quadrature::GaussLegendre;
use crate::units;

/// Largest `d/a` accepted by the first-order formulas.
pub const XI_WINDOW: f64 = 0.2;

/// `d/a` above which the first-order force is flagged as approximate.
pub const XI_WARN: f64 = 0.05;

/// Parallel-plate Casimir pressure `pi^2 hbar c / (240 d^4)` in Pa, `d` in micrometres.
pub fn plate_pressure(d_um: f64) -> f64 {
    let d = d_um * units::MICRON;
    PI * PI * units::HBAR_C / (240.0 * d.powi(4))
}

/// First-order force on a sphere in a dip, split into its factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PfaForce {
    /// Force in newtons.
    pub force: f64,
    /// Parallel-plate pressure at the gap, Pa.
    pub plate_pressure: f64,
    /// `pi a^2` in m^2.
    pub effective_area: f64,
    /// `1 + (4/3) d/a`.
    pub correction: f64,
    /// Set when `d/a` exceeds [`XI_WARN`].
    pub warn: bool,
}

impl PfaForce {
    /// Parallel-plate pressure times the effective area, without curvature correction.
    pub fn baseline(&self) -> f64 {
        self.plate_pressure * self.effective_area
    }
}

/// `F_z = [pi^2 hbar c/(240 d^4)] (pi a^2) (1 + (4/3) d/a)` with `a`, `d` in micrometres.
pub fn pfa_force(a_um: f64, d_um: f64) -> Result<PfaForce> {
    if !(a_um > 0.0) || !(d_um > 0.0) {
        return Err(CasimirError::domain(format!(
            "radius and gap must be positive (a = {a_um}, d = {d_um})"
        )));
    }
    let xi = d_um / a_um;
    if xi > XI_WINDOW {
        return Err(CasimirError::domain(format!(
            "d/a = {xi} exceeds the first-order window {XI_WINDOW}"
        )));
    }
    let pressure = plate_pressure(d_um);
    let a = a_um * units::MICRON;
    let area = PI * a * a;
    let correction = CorrectionModel::DipDebye.factor(xi);
    Ok(PfaForce {
        force: pressure * area * correction,
        plate_pressure: pressure,
        effective_area: area,
        correction,
        warn: xi > XI_WARN,
    })
}

/// First-order curvature corrections relative to the parallel-plate force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionModel {
    /// Sphere in a dip from the uniform asymptotic mode sum: `1 + (4/3) xi`.
    DipDebye,
    /// Scalar sphere-plate optical-path result: `1 + 0.05 xi`.
    OpticalSpherePlate,
    /// Plate-based proximity force approximation: `1 - xi/2`.
    PfaPlateBased,
}

impl CorrectionModel {
    pub const ALL: [CorrectionModel; 3] = [
        CorrectionModel::OpticalSpherePlate,
        CorrectionModel::PfaPlateBased,
        CorrectionModel::DipDebye,
    ];

    pub fn slope(self) -> f64 {
        match self {
            CorrectionModel::DipDebye => 4.0 / 3.0,
            CorrectionModel::OpticalSpherePlate => 0.05,
            CorrectionModel::PfaPlateBased => -0.5,
        }
    }

    pub fn factor(self, xi: f64) -> f64 {
        1.0 + self.slope() * xi
    }

    pub fn tag(self) -> &'static str {
        match self {
            CorrectionModel::DipDebye => "dip-debye",
            CorrectionModel::OpticalSpherePlate => "optical-sphere-plate",
            CorrectionModel::PfaPlateBased => "pfa-plate-based",
        }
    }
}

impl fmt::Display for CorrectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CorrectionModel {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dip-debye" | "dip" => Ok(CorrectionModel::DipDebye),
            "optical-sphere-plate" | "optical" => Ok(CorrectionModel::OpticalSpherePlate),
            "pfa-plate-based" | "pfa-plate" => Ok(CorrectionModel::PfaPlateBased),
            other => Err(CasimirError::config(format!(
                "unknown correction model '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionFactor {
    pub model: CorrectionModel,
    pub slope: f64,
    pub value: f64,
}

pub fn correction_factor(model: CorrectionModel, xi: f64) -> Result<CorrectionFactor> {
    check_xi(xi)?;
    Ok(CorrectionFactor {
        model,
        slope: model.slope(),
        value: model.factor(xi),
    })
}

/// Looks a model up by tag.
pub fn correction_factor_by_tag(tag: &str, xi: f64) -> Result<CorrectionFactor> {
    correction_factor(tag.parse()?, xi)
}

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..=XI_WINDOW).contains(&xi) {
        return Err(CasimirError::domain(format!(
            "d/a = {xi} outside the first-order window [0, {XI_WINDOW}]"
        )));
    }
    Ok(())
}

/// All three factors at one `xi`, with the sign of each correction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorTable {
    pub xi: f64,
    pub rows: Vec<CorrectionFactor>,
}

impl FactorTable {
    /// Sign of `f - 1` for a model: +1, 0 or -1.
    pub fn correction_sign(&self, model: CorrectionModel) -> i32 {
        let row = self
            .rows
            .iter()
            .find(|r| r.model == model)
            .expect("all models present");
        let delta = row.value - 1.0;
        if delta > 0.0 {
            1
        } else if delta < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Whether two models' corrections have the same sign.
    pub fn same_sign(&self, a: CorrectionModel, b: CorrectionModel) -> bool {
        self.correction_sign(a) == self.correction_sign(b)
    }
}

pub fn factor_table(xi: f64) -> Result<FactorTable> {
    check_xi(xi)?;
    let rows = CorrectionModel::ALL
        .iter()
        .map(|&m| correction_factor(m, xi))
        .collect::<Result<_>>()?;
    Ok(FactorTable { xi, rows })
}

/// Hemisphere-truncation factor when the axial projection starts at `pi/2 + delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrayFieldModel {
    pub delta: f64,
    pub factor: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..PI / 2.0).contains(&delta) {
        return Err(CasimirError::domain(format!(
            "truncation angle must lie in [0, pi/2), got {delta}"
        )));
    }
    Ok(())
}

/// `2 pi int_{pi/2+delta}^{pi} cos(t) sin(t) dt` normalised by the full-hemisphere value `-pi`.
pub fn stray_field_projection(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let rule = GaussLegendre::new(24);
    let part = 2.0 * PI * rule.integrate(|t| t.cos() * t.sin(), PI / 2.0 + delta, PI);
    Ok(part / -PI)
}

/// `1 - sin^2(delta)`.
pub fn stray_field_factor(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(delta.cos().powi(2))
}

pub fn stray_field_model(delta: f64) -> Result<StrayFieldModel> {
    Ok(StrayFieldModel {
        delta,
        factor: stray_field_factor(delta)?,
    })
}

/// `|int cos(theta) dA|` over the lower hemisphere of radius `b`: `pi b^2`.
pub fn hemisphere_projection(b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(CasimirError::domain(format!(
            "radius must be positive, got {b}"
        )));
    }
    Ok(PI * b * b)
}
