//! Physical observables built from the mode sums.
//!
//! Lengths are carried in micrometres at the API boundary and in units of the
//! dip radius `b` inside the sums, so every mode-sum quantity depends on the
//! geometry only through `rho = a/b`. Sign conventions:
//!
//! * the axial force `F_z` on the dip wall is positive (the sphere is pulled down);
//! * the interaction energy and free energy are negative;
//! * `F_z = +dE/db` at fixed `a`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::modes::{Geometry, ModeSpectrum};
use crate::quadrature::{integrate_semi_infinite, QuadError, QuadOutcome, QuadPolicy, Sample};
use crate::summation::CompensatedSum;
use crate::units;

/// Convergence controls shared by every observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericsPolicy {
    /// Relative target tolerance.
    pub tol: f64,
    /// Cap on the angular order; `None` derives it from the geometry.
    pub l_max: Option<usize>,
    /// Maximum number of quadrature panels.
    pub panel_budget: usize,
    /// Cap on the Matsubara index.
    pub m_max: usize,
    /// Safety multiplier applied to tail estimates before accepting truncation.
    pub tail_safety: f64,
}

impl Default for NumericsPolicy {
    fn default() -> Self {
        NumericsPolicy {
            tol: 1e-8,
            l_max: None,
            panel_budget: 2000,
            m_max: 1_000_000,
            tail_safety: 10.0,
        }
    }
}

impl NumericsPolicy {
    pub fn with_tol(tol: f64) -> Self {
        NumericsPolicy {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 1e-14 && self.tol < 1e-2) {
            return Err(CasimirError::config(format!(
                "tolerance must lie in (1e-14, 1e-2), got {}",
                self.tol
            )));
        }
        if self.l_max == Some(0) || self.panel_budget == 0 || self.m_max == 0 {
            return Err(CasimirError::config("truncation caps must be positive"));
        }
        if !(self.tail_safety >= 1.0) {
            return Err(CasimirError::config(
                "tail safety factor must be at least 1",
            ));
        }
        Ok(())
    }

    /// Angular-order cap for a given radius ratio.
    pub fn order_cap(&self, rho: f64) -> usize {
        self.l_max
            .unwrap_or_else(|| 64usize.max((40.0 / (1.0 - rho)).ceil() as usize))
    }

    fn quad(&self) -> QuadPolicy {
        QuadPolicy {
            tol: self.tol,
            panel_budget: self.panel_budget,
            tail_safety: self.tail_safety,
            ..QuadPolicy::default()
        }
    }
}

/// Truncation record attached to every observable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub l_used: usize,
    pub m_used: usize,
    pub panels: usize,
    pub evaluations: usize,
    pub quadrature_error: f64,
    pub truncation_error: f64,
    pub tail_bound: f64,
}

impl Diagnostics {
    fn from_quad(q: &QuadOutcome) -> Self {
        Diagnostics {
            l_used: q.max_order,
            m_used: 0,
            panels: q.panels,
            evaluations: q.evaluations,
            quadrature_error: q.quadrature_error,
            truncation_error: q.truncation_error,
            tail_bound: q.tail_bound,
        }
    }
}

/// A computed physical number with its error estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observable {
    /// Value in SI units (`unit`).
    pub value: f64,
    pub unit: &'static str,
    /// Value in natural units (`natural_unit`).
    pub natural_value: f64,
    pub natural_unit: &'static str,
    /// Absolute error estimate in SI units.
    pub abs_error: f64,
    /// Absolute error estimate in natural units.
    pub natural_error: f64,
    pub diagnostics: Diagnostics,
}

/// Temperature of the field, with the thermal length `beta = hbar c / k_B T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalState {
    temperature_k: f64,
    beta_um: f64,
}

impl ThermalState {
    pub fn from_kelvin(temperature_k: f64) -> Result<Self> {
        if !(temperature_k >= 0.0) || !temperature_k.is_finite() {
            return Err(CasimirError::domain(format!(
                "temperature must be non-negative, got {temperature_k}"
            )));
        }
        let beta_um = if temperature_k == 0.0 {
            f64::INFINITY
        } else {
            units::thermal_length_um(temperature_k)
        };
        Ok(ThermalState {
            temperature_k,
            beta_um,
        })
    }

    /// From the reduced temperature `t = 2 pi a / beta` of a sphere of radius `a_um`.
    pub fn from_reduced(t: f64, a_um: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CasimirError::domain(format!(
                "reduced temperature must be non-negative, got {t}"
            )));
        }
        if !(a_um > 0.0) {
            return Err(CasimirError::domain("sphere radius must be positive"));
        }
        if t == 0.0 {
            return Self::from_kelvin(0.0);
        }
        let beta_um = 2.0 * PI * a_um / t;
        Ok(ThermalState {
            temperature_k: units::temperature_from_length(beta_um),
            beta_um,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature_k
    }

    /// Thermal length in micrometres (infinite at `T = 0`).
    pub fn beta_um(&self) -> f64 {
        self.beta_um
    }

    /// `t = 2 pi a / beta`.
    pub fn reduced(&self, a_um: f64) -> f64 {
        if self.temperature_k == 0.0 {
            0.0
        } else {
            2.0 * PI * a_um / self.beta_um
        }
    }

    /// `k_B T` in joules.
    pub fn kt(&self) -> f64 {
        units::K_B * self.temperature_k
    }
}

/// Dimensionless Matsubara frequencies `(x_m, y_m) = (2 pi m a / beta, 2 pi m b / beta)`.
pub fn matsubara_grid(thermal: &ThermalState, geometry: &Geometry, m: usize) -> (f64, f64) {
    if m == 0 || thermal.temperature() == 0.0 {
        return (0.0, 0.0);
    }
    let step = 2.0 * PI * m as f64 / thermal.beta_um();
    (step * geometry.a(), step * geometry.b())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SumKind {
    /// `sum_l (2l+1)/(4 pi) dLambda_l/dy`
    Force,
    /// `sum_l nu Lambda_l`
    Energy,
}

/// Orders needed before `exp(-2 (1-rho) (sqrt(nu^2 + y^2) - y))` drops below `tol/100`.
fn order_guess(rho: f64, y: f64, tol: f64) -> usize {
    let depth = (100.0 / tol).ln() / (2.0 * (1.0 - rho));
    (depth * depth + 2.0 * depth * y).sqrt().ceil() as usize + 16
}

/// Sum over `l >= 1` at one frequency, stopped after three consecutive terms
/// fall below `tol` times the running sum or below the absolute `floor`.
///
/// With a positive floor, a sum whose terms all sit under it is abandoned;
/// the reported truncation is then `cap * floor`.
fn mode_sum(
    rho: f64,
    y: f64,
    kind: SumKind,
    policy: &NumericsPolicy,
    floor: f64,
) -> Result<Sample> {
    let cap = policy.order_cap(rho);
    let mut len = order_guess(rho, y, policy.tol).max(8).min(cap);
    let mut acc = CompensatedSum::new();
    let mut streak = 0;
    let mut prev = 0.0f64;
    let mut l = 1;
    loop {
        let spectrum = ModeSpectrum::new(rho * y, y, len)?;
        while l <= len {
            let lf = l as f64;
            let term = match kind {
                SumKind::Force => (2.0 * lf + 1.0) / (4.0 * PI) * spectrum.dlambda_dy(l),
                SumKind::Energy => (lf + 0.5) * spectrum.lambda(l),
            };
            acc.add(term);
            if term.abs() <= policy.tol * acc.value().abs() || term.abs() <= floor {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak >= 3 && acc.value().abs() <= floor * l as f64 {
                return Ok(Sample {
                    value: acc.value(),
                    truncation: floor * cap as f64,
                    order: l,
                });
            }
            if streak >= 3 {
                let ratio = if prev != 0.0 {
                    (term / prev).abs().min(0.99)
                } else {
                    0.99
                };
                return Ok(Sample {
                    value: acc.value(),
                    truncation: term.abs() * ratio / (1.0 - ratio),
                    order: l,
                });
            }
            prev = term;
            l += 1;
        }
        if len >= cap {
            return Err(CasimirError::convergence(
                format!("angular sum not converged at l_max = {cap} (y = {y})"),
                Diagnostics {
                    l_used: cap,
                    ..Diagnostics::default()
                },
            ));
        }
        len = (2 * len).min(cap);
    }
}

fn check_ratio(geometry: &Geometry) -> Result<f64> {
    let rho = geometry.rho();
    if !(rho > 0.02 && rho < 0.999) {
        return Err(CasimirError::domain(format!(
            "radius ratio a/b = {rho} outside the supported window (0.02, 0.999)"
        )));
    }
    Ok(rho)
}

fn quad_failure(e: QuadError, what: &str) -> CasimirError {
    match e {
        QuadError::Integrand(e) => e,
        QuadError::Budget(q) => CasimirError::convergence(
            format!("{what}: quadrature panel budget exhausted"),
            Diagnostics::from_quad(&q),
        ),
    }
}

/// Integrates a frequency mode sum over `y in (0, inf)` using `u = 2 (1 - rho) y`.
fn frequency_integral(
    geometry: &Geometry,
    kind: SumKind,
    policy: &NumericsPolicy,
) -> Result<QuadOutcome> {
    policy.validate()?;
    let rho = check_ratio(geometry)?;
    let jac = 1.0 / (2.0 * (1.0 - rho));
    let integrand = |u: f64| -> Result<Sample> {
        let y = u * jac;
        let s = mode_sum(rho, y, kind, policy, 0.0)?;
        let weight = match kind {
            SumKind::Force => 0.5 * y * jac,
            SumKind::Energy => jac / (4.0 * PI),
        };
        Ok(Sample {
            value: weight * s.value,
            truncation: weight * s.truncation,
            order: s.order,
        })
    };
    let what = match kind {
        SumKind::Force => "force",
        SumKind::Energy => "energy",
    };
    integrate_semi_infinite(integrand, &policy.quad()).map_err(|e| quad_failure(e, what))
}

/// Zero-temperature axial force on the dip wall (equal and opposite on the sphere).
///
/// `F_z = 1/(2 b^2) int_0^inf y dy sum_l (2l+1)/(4 pi) dLambda_l/dy` at `x = a y / b`.
/// The natural value is in units of `hbar c / b^2`.
pub fn force_zero_t(geometry: &Geometry, policy: &NumericsPolicy) -> Result<Observable> {
    let q = frequency_integral(geometry, SumKind::Force, policy)?;
    let unit = units::force_unit(geometry.b());
    let err = q.total_error();
    Ok(Observable {
        value: q.value * unit,
        unit: "N",
        natural_value: q.value,
        natural_unit: "hbar c / b^2",
        abs_error: err * unit,
        natural_error: err,
        diagnostics: Diagnostics::from_quad(&q),
    })
}

/// Zero-temperature interaction energy `E = 1/(4 pi b) int_0^inf dy sum_l nu Lambda_l`.
///
/// Same normalisation as the free energy, so `F_z = dE/db` at fixed `a`.
pub fn energy_zero_t(geometry: &Geometry, policy: &NumericsPolicy) -> Result<Observable> {
    let q = frequency_integral(geometry, SumKind::Energy, policy)?;
    let unit = units::energy_unit(geometry.b());
    let err = q.total_error();
    Ok(Observable {
        value: q.value * unit,
        unit: "J",
        natural_value: q.value,
        natural_unit: "hbar c / b",
        abs_error: err * unit,
        natural_error: err,
        diagnostics: Diagnostics::from_quad(&q),
    })
}

/// Zero-frequency free energy `beta F_0 = 1/2 sum_l nu ln(1 - rho^(2 nu))`, valid for any gap.
pub fn free_energy_static(geometry: &Geometry) -> f64 {
    static_sum(geometry.rho(), 1e-17)
}

fn static_sum(rho: f64, cutoff: f64) -> f64 {
    let ln_rho = rho.ln();
    let mut acc = CompensatedSum::new();
    let mut l = 1usize;
    loop {
        let nu = l as f64 + 0.5;
        let p = (2.0 * nu * ln_rho).exp();
        acc.add(0.5 * nu * (-p).ln_1p());
        if p < cutoff {
            break;
        }
        l += 1;
    }
    acc.value()
}

/// Contribution `1/2 sum_l nu Lambda_l(x_m, y_m)` of one non-zero Matsubara index.
fn matsubara_term(rho: f64, y: f64, policy: &NumericsPolicy, floor: f64) -> Result<Sample> {
    let s = mode_sum(rho, y, SumKind::Energy, policy, floor)?;
    Ok(Sample {
        value: 0.5 * s.value,
        truncation: 0.5 * s.truncation,
        order: s.order,
    })
}

/// Breakdown of a Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraSum {
    /// Half-weighted `m = 0` contribution.
    pub zero_frequency: f64,
    /// Full sum.
    pub total: f64,
    pub abs_error: f64,
    pub m_used: usize,
    pub l_used: usize,
}

const M_CHUNK: usize = 16;

/// Sums `m >= 1` terms produced by `term` until both the term and the geometric
/// tail bound `|T_m| q/(1-q)` fall below tolerance.
fn matsubara_series<F>(
    zero: f64,
    ratio: f64,
    policy: &NumericsPolicy,
    term: F,
) -> Result<MatsubaraSum>
where
    F: Fn(usize) -> Result<Sample> + Sync,
{
    let mut acc = CompensatedSum::new();
    acc.add(zero);
    let mut trunc = 0.0;
    let mut l_used = 0;
    let tail_factor = if ratio < 1.0 {
        ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let mut m = 1;
    while m <= policy.m_max {
        let hi = (m + M_CHUNK - 1).min(policy.m_max);
        let chunk: Vec<Sample> = (m..=hi).into_par_iter().map(&term).collect::<Result<_>>()?;
        for (i, s) in chunk.iter().enumerate() {
            acc.add(s.value);
            trunc += s.truncation;
            l_used = l_used.max(s.order);
            let target = policy.tol * acc.value().abs();
            let tail = s.value.abs() * tail_factor;
            if s.value.abs() <= target && tail * policy.tail_safety <= target {
                return Ok(MatsubaraSum {
                    zero_frequency: zero,
                    total: acc.value(),
                    abs_error: tail + trunc,
                    m_used: m + i,
                    l_used,
                });
            }
        }
        m = hi + 1;
    }
    Err(CasimirError::convergence(
        format!("Matsubara sum not converged at m_max = {}", policy.m_max),
        Diagnostics {
            l_used,
            m_used: policy.m_max,
            ..Diagnostics::default()
        },
    ))
}

/// Full finite-temperature mode sum `beta F = 1/2 sum'_m sum_l nu Lambda_l(x_m, y_m)`.
pub fn free_energy_sum(
    geometry: &Geometry,
    thermal: &ThermalState,
    policy: &NumericsPolicy,
) -> Result<MatsubaraSum> {
    policy.validate()?;
    let rho = check_ratio(geometry)?;
    if !(thermal.temperature() > 0.0) {
        return Err(CasimirError::domain(
            "free energy needs T > 0; use energy_zero_t at zero temperature",
        ));
    }
    let zero = free_energy_static(geometry);
    let (_, y1) = matsubara_grid(thermal, geometry, 1);
    let ratio = (-2.0 * (1.0 - rho) * y1).exp();
    // Orders whose terms lie below this are negligible against the m = 0 term.
    let floor = 0.1 * policy.tol * zero.abs() / policy.order_cap(rho) as f64;
    matsubara_series(zero, ratio, policy, |m| {
        let (_, y) = matsubara_grid(thermal, geometry, m);
        matsubara_term(rho, y, policy, floor)
    })
}

/// Finite-temperature free energy; `value` in joules, `natural_value` is `beta F`.
pub fn free_energy(
    geometry: &Geometry,
    thermal: &ThermalState,
    policy: &NumericsPolicy,
) -> Result<Observable> {
    let sum = free_energy_sum(geometry, thermal, policy)?;
    let kt = thermal.kt();
    Ok(Observable {
        value: sum.total * kt,
        unit: "J",
        natural_value: sum.total,
        natural_unit: "beta F (dimensionless)",
        abs_error: sum.abs_error * kt,
        natural_error: sum.abs_error,
        diagnostics: Diagnostics {
            l_used: sum.l_used,
            m_used: sum.m_used,
            truncation_error: sum.abs_error,
            ..Diagnostics::default()
        },
    })
}

/// Narrow-gap free energy
/// `beta F = sum'_m sum_l nu ln(1 - exp(-2 xi sqrt(nu^2 + m^2 t^2)))`.
pub fn free_energy_narrow(xi: f64, t: f64, policy: &NumericsPolicy) -> Result<MatsubaraSum> {
    policy.validate()?;
    if !(xi > 0.0 && xi <= 0.2) {
        return Err(CasimirError::domain(format!(
            "narrow-gap form needs 0 < d/a <= 0.2, got {xi}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(CasimirError::domain(format!(
            "reduced temperature must be positive, got {t}"
        )));
    }
    let cap = policy
        .l_max
        .unwrap_or_else(|| 64usize.max((40.0 / xi).ceil() as usize));
    let l_sum = |mt: f64, floor: f64| -> Result<Sample> {
        let mut acc = CompensatedSum::new();
        let mut streak = 0;
        for l in 1..=cap {
            let nu = l as f64 + 0.5;
            let term = nu * (-(-2.0 * xi * nu.hypot(mt)).exp()).ln_1p();
            acc.add(term);
            if term.abs() <= policy.tol * acc.value().abs() || term.abs() <= floor {
                streak += 1;
                if streak >= 3 {
                    // Terms decay at least like exp(-2 xi) per order.
                    let q = (-2.0 * xi).exp();
                    return Ok(Sample {
                        value: acc.value(),
                        truncation: term.abs() * q / (1.0 - q),
                        order: l,
                    });
                }
            } else {
                streak = 0;
            }
        }
        Err(CasimirError::convergence(
            format!("narrow-gap angular sum not converged at l_max = {cap}"),
            Diagnostics {
                l_used: cap,
                ..Diagnostics::default()
            },
        ))
    };
    let zero = l_sum(0.0, 0.0)?;
    let floor = 0.1 * policy.tol * zero.value.abs() / cap as f64;
    let ratio = (-2.0 * xi * t).exp();
    let mut out = matsubara_series(0.5 * zero.value, ratio, policy, |m| {
        l_sum(m as f64 * t, floor)
    })?;
    out.abs_error += 0.5 * zero.truncation;
    out.l_used = out.l_used.max(zero.order);
    Ok(out)
}

/// High-temperature parallel-plate free energy per unit area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateFreeEnergy {
    /// `1/(8 pi) int_0^inf q ln(1 - exp(-2 q d)) dq` by quadrature.
    pub quadrature: f64,
    /// `-zeta(3) / (32 pi d^2)`.
    pub closed_form: f64,
    pub abs_error: f64,
}

/// `beta F / area` for the zero-frequency term between plates at separation `d`.
///
/// The result carries the inverse square of whatever length unit `d` uses.
pub fn free_energy_high_t_plate(d: f64) -> Result<PlateFreeEnergy> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(CasimirError::domain(format!(
            "plate separation must be positive, got {d}"
        )));
    }
    // q = u / (2d): (1/8pi) (1/4d^2) int_0^inf u ln(1 - e^-u) du
    let policy = QuadPolicy {
        tol: 1e-12,
        ..QuadPolicy::default()
    };
    let q = integrate_semi_infinite(
        |u: f64| Ok(Sample::from(u * (-(-u).exp_m1()).ln())),
        &policy,
    )
    .map_err(|e| quad_failure(e, "plate free energy"))?;
    let scale = 1.0 / (32.0 * PI * d * d);
    Ok(PlateFreeEnergy {
        quadrature: q.value * scale,
        closed_form: -units::ZETA_3 * scale,
        abs_error: q.total_error() * scale,
    })
}
