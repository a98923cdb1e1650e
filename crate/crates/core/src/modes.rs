//! Per-mode spectral quantities for two concentric perfectly conducting shells.
//!
//! Every function here returns a bare bracket or summand. Prefactors such as
//! `1/(2 b^2)` and all sign conventions belong to [`crate::observables`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::riccati::{riccati_table, RiccatiEntry, RiccatiTable};

/// Sphere of radius `a` centred in a spherical dip of radius `b` (micrometres).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    a: f64,
    b: f64,
}

impl Geometry {
    pub fn new(a_um: f64, b_um: f64) -> Result<Self> {
        if !(a_um > 0.0) || !a_um.is_finite() || !b_um.is_finite() {
            return Err(CasimirError::domain(format!(
                "radii must be positive and finite (a = {a_um}, b = {b_um})"
            )));
        }
        if !(b_um > a_um) {
            return Err(CasimirError::domain(format!(
                "gap must be positive (a = {a_um}, b = {b_um})"
            )));
        }
        Ok(Geometry { a: a_um, b: b_um })
    }

    /// Sphere radius `a` and gap `d = b - a`.
    pub fn from_gap(a_um: f64, d_um: f64) -> Result<Self> {
        if !(d_um > 0.0) {
            return Err(CasimirError::domain(format!(
                "gap must be positive (d = {d_um})"
            )));
        }
        Geometry::new(a_um, a_um + d_um)
    }

    /// Geometry with `b = 1` and `a = rho`.
    pub fn from_ratio(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(CasimirError::domain(format!(
                "radius ratio must lie in (0, 1), got {rho}"
            )));
        }
        Geometry::new(rho, 1.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn gap(&self) -> f64 {
        self.b - self.a
    }

    /// `xi = d / a`.
    pub fn xi(&self) -> f64 {
        self.gap() / self.a
    }

    /// `rho = a / b`.
    pub fn rho(&self) -> f64 {
        self.a / self.b
    }

    /// Same shape scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Geometry::new(self.a * factor, self.b * factor)
    }
}

/// Spectral data of one order `l` at inner argument `x` and outer argument `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeTerm {
    pub l: usize,
    pub x: f64,
    pub y: f64,
    /// `A_F(x) = s_l(x) / e_l(x)`; may underflow to zero at high order.
    pub a_f: f64,
    /// `A_G(x) = s_l'(x) / e_l'(x)`.
    pub a_g: f64,
    /// `ln[(1 - A_F e_l(y)/s_l(y)) (1 - A_G e_l'(y)/s_l'(y))]`.
    pub lambda: f64,
    /// Derivative of `lambda` in `y` at fixed `x`.
    pub dlambda_dy: f64,
}

/// Pointwise pieces of the outer-surface force density bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceDensityParts {
    pub total: f64,
    pub self_part: f64,
    pub mutual_part: f64,
}

/// The two reflection products entering the mutual logarithm.
///
/// `pf = A_F(x) e_l(y)/s_l(y)` and `pg = A_G(x) e_l'(y)/s_l'(y)`, both in (0, 1)
/// for `0 < x < y`.
#[derive(Debug, Clone, Copy)]
struct Reflection {
    pf: f64,
    pg: f64,
}

#[inline]
fn reflection(inner: &RiccatiEntry, outer: &RiccatiEntry) -> Reflection {
    let damp = (2.0 * (inner.log_scale - outer.log_scale)).exp();
    Reflection {
        pf: (inner.s / outer.s) * (outer.e / inner.e) * damp,
        pg: (inner.ds / outer.ds) * (outer.de / inner.de) * damp,
    }
}

#[inline]
fn ode_factor(l: usize, y: f64) -> f64 {
    1.0 + (l as f64) * (l as f64 + 1.0) / (y * y)
}

#[inline]
fn lambda_from(r: Reflection) -> f64 {
    (-r.pf).ln_1p() + (-r.pg).ln_1p()
}

/// Wronskian closed form of the derivative at fixed inner argument.
#[inline]
fn dlambda_from(l: usize, y: f64, r: Reflection, outer: &RiccatiEntry) -> f64 {
    let f_part = r.pf / ((1.0 - r.pf) * outer.s * outer.e);
    let g_part = ode_factor(l, y) * r.pg / ((1.0 - r.pg) * (-outer.ds * outer.de));
    f_part + g_part
}

/// `(s - A_G e)/(s' - A_G e')` at `y`.
#[inline]
fn g_ratio(r: Reflection, outer: &RiccatiEntry) -> f64 {
    let cross = r.pg * (outer.e * outer.ds) / (outer.de * outer.s);
    (outer.s / outer.ds) * (1.0 - cross) / (1.0 - r.pg)
}

/// `(s' - A_F e')/(s - A_F e)` at `y`.
#[inline]
fn f_ratio(r: Reflection, outer: &RiccatiEntry) -> f64 {
    let cross = r.pf * (outer.de * outer.s) / (outer.e * outer.ds);
    (outer.ds / outer.s) * (1.0 - cross) / (1.0 - r.pf)
}

/// Riccati tables at `x = rho y` and `y`, shared across all orders `1..=l_max`.
#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    inner: RiccatiTable,
    outer: RiccatiTable,
}

impl ModeSpectrum {
    pub fn new(x: f64, y: f64, l_max: usize) -> Result<Self> {
        check_pair(x, y)?;
        if x == 0.0 {
            return Err(CasimirError::domain(
                "mode spectrum needs x > 0; use the static branch for zero frequency",
            ));
        }
        Ok(ModeSpectrum {
            inner: riccati_table(x, l_max)?,
            outer: riccati_table(y, l_max)?,
        })
    }

    pub fn max_order(&self) -> usize {
        self.outer.max_order()
    }

    pub fn x(&self) -> f64 {
        self.inner.argument()
    }

    pub fn y(&self) -> f64 {
        self.outer.argument()
    }

    #[inline]
    fn reflection(&self, l: usize) -> Reflection {
        reflection(self.inner.get(l), self.outer.get(l))
    }

    #[inline]
    pub fn lambda(&self, l: usize) -> f64 {
        lambda_from(self.reflection(l))
    }

    #[inline]
    pub fn dlambda_dy(&self, l: usize) -> f64 {
        dlambda_from(l, self.y(), self.reflection(l), self.outer.get(l))
    }

    pub fn term(&self, l: usize) -> ModeTerm {
        let inner = self.inner.get(l);
        let r = self.reflection(l);
        let scale = (2.0 * inner.log_scale).exp();
        ModeTerm {
            l,
            x: self.x(),
            y: self.y(),
            a_f: inner.s / inner.e * scale,
            a_g: inner.ds / inner.de * scale,
            lambda: lambda_from(r),
            dlambda_dy: dlambda_from(l, self.y(), r, self.outer.get(l)),
        }
    }

    pub fn er2(&self, l: usize) -> f64 {
        let lf = l as f64;
        let r = self.reflection(l);
        (2.0 * lf + 1.0) / (4.0 * PI) * lf * (lf + 1.0) * g_ratio(r, self.outer.get(l)) / self.y()
    }

    pub fn hperp(&self, l: usize) -> f64 {
        let r = self.reflection(l);
        let outer = self.outer.get(l);
        (2.0 * l as f64 + 1.0) / (4.0 * PI) * (g_ratio(r, outer) + f_ratio(r, outer))
    }

    pub fn force_density(&self, l: usize) -> ForceDensityParts {
        let r = self.reflection(l);
        let outer = self.outer.get(l);
        let k = ode_factor(l, self.y());
        ForceDensityParts {
            total: f_ratio(r, outer) + k * g_ratio(r, outer),
            self_part: outer.ds / outer.s + k * outer.s / outer.ds,
            mutual_part: dlambda_from(l, self.y(), r, outer),
        }
    }
}

fn check_order(l: usize) -> Result<()> {
    if l < 1 {
        return Err(CasimirError::domain("mode order must be at least 1"));
    }
    Ok(())
}

fn check_pair(x: f64, y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(CasimirError::domain(format!(
            "outer argument must be positive and finite, got {y}"
        )));
    }
    if !(x >= 0.0) {
        return Err(CasimirError::domain(format!(
            "inner argument must be non-negative, got {x}"
        )));
    }
    if !(x < y) {
        return Err(CasimirError::domain(format!(
            "inner argument must be below outer argument (x = {x}, y = {y})"
        )));
    }
    Ok(())
}

fn check_positive(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(CasimirError::domain(format!(
            "argument must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

fn spectrum_for(l: usize, x: f64, y: f64) -> Result<ModeSpectrum> {
    check_order(l)?;
    ModeSpectrum::new(x, y, l)
}

fn spectrum_on(l: usize, geometry: &Geometry, y: f64) -> Result<ModeSpectrum> {
    check_order(l)?;
    check_positive(y)?;
    ModeSpectrum::new(geometry.rho() * y, y, l)
}

/// `A_F(x) = s_l(x) / e_l(x)`.
pub fn coeff_af(l: usize, x: f64) -> Result<f64> {
    check_order(l)?;
    check_positive(x)?;
    let en = *riccati_table(x, l)?.get(l);
    Ok(en.s / en.e * (2.0 * en.log_scale).exp())
}

/// `A_G(x) = s_l'(x) / e_l'(x)`, always negative.
pub fn coeff_ag(l: usize, x: f64) -> Result<f64> {
    check_order(l)?;
    check_positive(x)?;
    let en = *riccati_table(x, l)?.get(l);
    Ok(en.ds / en.de * (2.0 * en.log_scale).exp())
}

/// The mutual logarithm `Lambda_l(x, y)` for `0 <= x < y`.
///
/// At `x = 0` the inner coefficients vanish and the result is exactly zero.
/// The zero-frequency limit taken along `x = rho y` is [`lambda_static`].
pub fn lambda_term(l: usize, x: f64, y: f64) -> Result<f64> {
    check_order(l)?;
    check_pair(x, y)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(spectrum_for(l, x, y)?.lambda(l))
}

/// `lim_{y -> 0} Lambda_l(rho y, y) = 2 ln(1 - rho^(2l+1))`.
pub fn lambda_static(l: usize, rho: f64) -> Result<f64> {
    check_order(l)?;
    if !(rho > 0.0 && rho < 1.0) {
        return Err(CasimirError::domain(format!(
            "radius ratio must lie in (0, 1), got {rho}"
        )));
    }
    let nu2 = (2 * l + 1) as f64;
    Ok(2.0 * (-(nu2 * rho.ln()).exp()).ln_1p())
}

/// `dLambda_l/dy` at fixed `x`, from the Wronskian closed form.
pub fn dlambda_dy(l: usize, x: f64, y: f64) -> Result<f64> {
    check_order(l)?;
    check_pair(x, y)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(spectrum_for(l, x, y)?.dlambda_dy(l))
}

/// Full spectral record for one order.
pub fn mode_term(l: usize, x: f64, y: f64) -> Result<ModeTerm> {
    check_order(l)?;
    check_pair(x, y)?;
    if x == 0.0 {
        return Ok(ModeTerm {
            l,
            x,
            y,
            a_f: 0.0,
            a_g: 0.0,
            lambda: 0.0,
            dlambda_dy: 0.0,
        });
    }
    Ok(spectrum_for(l, x, y)?.term(l))
}

/// Summand of the radial electric two-point function just inside `r = b`:
/// `(2l+1)/(4 pi) l(l+1) [s - A_G e]/[s' - A_G e'] / y` with `A_G` at `rho y`.
pub fn er2_integrand(l: usize, geometry: &Geometry, y: f64) -> Result<f64> {
    Ok(spectrum_on(l, geometry, y)?.er2(l))
}

/// The transverse electric and radial magnetic two-point functions vanish at
/// the conducting wall.
pub fn vanishing_two_point_integrands(_l: usize, _geometry: &Geometry, _y: f64) -> (f64, f64) {
    (0.0, 0.0)
}

/// Bracket of the transverse magnetic two-point function with weight `(2l+1)/(4 pi)`.
pub fn hperp_integrand(l: usize, geometry: &Geometry, y: f64) -> Result<f64> {
    Ok(spectrum_on(l, geometry, y)?.hperp(l))
}

/// Force density bracket split into its single-shell and mutual parts.
pub fn force_density_decomposition(
    l: usize,
    geometry: &Geometry,
    y: f64,
) -> Result<ForceDensityParts> {
    Ok(spectrum_on(l, geometry, y)?.force_density(l))
}
