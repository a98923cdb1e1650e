//! Modified Riccati-Bessel functions of half-integer order.
//!
//! `s_l(x) = sqrt(pi x / 2) I_{l+1/2}(x)` and `e_l(x) = sqrt(2x / pi) K_{l+1/2}(x)`,
//! normalised so that `s_l e_l' - s_l' e_l = -1`.
//!
//! Raw values overflow or underflow long before the orders and arguments the
//! mode sums need, so every order carries its own logarithmic scale `sigma_l`:
//!
//! ```text
//! s_l  = s_hat  * exp(+sigma_l)      e_l  = e_hat  * exp(-sigma_l)
//! s_l' = ds_hat * exp(+sigma_l)      e_l' = de_hat * exp(-sigma_l)
//! ```
//!
//! Products such as `s_l e_l` or the Wronskian never see the scale, and ratios
//! between two arguments see it only as `exp(2 (sigma_x - sigma_y))`.

use crate::error::{CasimirError, Result};

/// Largest order a table may be built for.
pub const MAX_ORDER: usize = 1_000_000;

/// Smallest `nu = l + 1/2` for which [`riccati_debye`] is accepted.
pub const DEBYE_MIN_NU: f64 = 10.0;

/// One order of a Riccati-Bessel table in scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiEntry {
    /// `sigma_l`; `s_l = s * exp(sigma_l)`, `e_l = e * exp(-sigma_l)`.
    pub log_scale: f64,
    pub s: f64,
    pub ds: f64,
    pub e: f64,
    pub de: f64,
}

impl RiccatiEntry {
    /// `s_l e_l' - s_l' e_l`, which is exactly -1 for the true functions.
    #[inline]
    pub fn wronskian(&self) -> f64 {
        self.s * self.de - self.ds * self.e
    }

    /// `s_l(x) e_l(x)`, free of any exponential scale.
    #[inline]
    pub fn product(&self) -> f64 {
        self.s * self.e
    }

    pub fn ln_s(&self) -> f64 {
        self.s.ln() + self.log_scale
    }

    pub fn ln_e(&self) -> f64 {
        self.e.ln() - self.log_scale
    }

    /// Unscaled `(s_l, s_l', e_l, e_l')`. Overflows for large arguments or orders.
    pub fn unscaled(&self) -> (f64, f64, f64, f64) {
        let up = self.log_scale.exp();
        let down = (-self.log_scale).exp();
        (self.s * up, self.ds * up, self.e * down, self.de * down)
    }

    /// Values scaled by `exp(-x)` for `s` and `exp(+x)` for `e`.
    pub fn exp_scaled(&self, x: f64) -> (f64, f64, f64, f64) {
        let up = (self.log_scale - x).exp();
        let down = (x - self.log_scale).exp();
        (self.s * up, self.ds * up, self.e * down, self.de * down)
    }
}

/// Scaled `s_l, s_l', e_l, e_l'` for `l = 0..=l_max` at one argument.
#[derive(Debug, Clone)]
pub struct RiccatiTable {
    x: f64,
    entries: Vec<RiccatiEntry>,
}

impl RiccatiTable {
    pub fn new(x: f64, l_max: usize) -> Result<Self> {
        riccati_table(x, l_max)
    }

    pub fn argument(&self) -> f64 {
        self.x
    }

    pub fn max_order(&self) -> usize {
        self.entries.len() - 1
    }

    #[inline]
    pub fn get(&self, l: usize) -> &RiccatiEntry {
        &self.entries[l]
    }

    pub fn entries(&self) -> &[RiccatiEntry] {
        &self.entries
    }

    /// `s_l''` from the recurrences `s_l' = s_{l-1} - (l/x) s_l`, in the scale of order `l`.
    ///
    /// Used to check the modified Riccati-Bessel equation; production code
    /// takes second derivatives from the equation itself.
    pub fn second_derivative_s(&self, l: usize) -> f64 {
        assert!(l >= 1 && l <= self.max_order());
        let x = self.x;
        let cur = &self.entries[l];
        let prev = &self.entries[l - 1];
        let rescale = (prev.log_scale - cur.log_scale).exp();
        let lf = l as f64;
        prev.ds * rescale + lf / (x * x) * cur.s - lf / x * cur.ds
    }

    /// `e_l''` from `e_l' = -e_{l-1} - (l/x) e_l`, in the scale of order `l`.
    pub fn second_derivative_e(&self, l: usize) -> f64 {
        assert!(l >= 1 && l <= self.max_order());
        let x = self.x;
        let cur = &self.entries[l];
        let prev = &self.entries[l - 1];
        let rescale = (cur.log_scale - prev.log_scale).exp();
        let lf = l as f64;
        -prev.de * rescale + lf / (x * x) * cur.e - lf / x * cur.de
    }
}

fn downward_start(x: f64, l_max: usize) -> usize {
    let margin = 20usize.max((0.5 * (l_max as f64).sqrt()).ceil() as usize);
    // For x >> l the ratios s_{l+1}/s_l sit close to 1 and damp start errors
    // only like exp(-(L^2 - l^2)/x).
    let damped = (((l_max + 1) as f64).powi(2) + 32.0 * x).sqrt().ceil() as usize;
    (l_max + 1 + margin).max(damped)
}

/// Builds the scaled table for `l = 0..=l_max` at argument `x`.
///
/// `e_l` comes from the upward recurrence `e_{l+1} = e_{l-1} + (2l+1)/x e_l`
/// carried as ratios. `s_l` uses the ratios `s_{l+1}/s_l` from a downward
/// (Miller-type) recurrence and is then fixed by the cross-order identity
/// `s_l e_{l+1} + s_{l+1} e_l = 1`, so no global normalisation pass is needed.
pub fn riccati_table(x: f64, l_max: usize) -> Result<RiccatiTable> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(CasimirError::domain(format!(
            "Riccati-Bessel argument must be positive and finite, got {x}"
        )));
    }
    if !(1..=MAX_ORDER).contains(&l_max) {
        return Err(CasimirError::config(format!(
            "table order must lie in 1..={MAX_ORDER}, got {l_max}"
        )));
    }

    // e_ratio[l] = e_l / e_{l-1}, with e_{-1} = e_0.
    let mut e_ratio = Vec::with_capacity(l_max + 2);
    e_ratio.push(1.0);
    e_ratio.push(1.0 + 1.0 / x);
    for l in 1..=l_max {
        let next = 1.0 / e_ratio[l] + (2 * l + 1) as f64 / x;
        e_ratio.push(next);
    }

    // s_ratio[l] = s_l / s_{l-1}, needed for l = 1..=l_max+1.
    let start = downward_start(x, l_max);
    let mut s_ratio = vec![0.0; l_max + 2];
    let half = start as f64;
    let mut q = x / (half + ((half + 0.5).powi(2) + x * x).sqrt());
    for l in (1..start).rev() {
        q = 1.0 / ((2 * l + 1) as f64 / x + q);
        if l <= l_max + 1 {
            s_ratio[l] = q;
        }
    }

    let mut entries = Vec::with_capacity(l_max + 1);
    let mut ln_e = -x;
    for l in 0..=l_max {
        if l > 0 {
            ln_e += e_ratio[l].ln();
        }
        let lf = l as f64;
        let q_next = s_ratio[l + 1];
        let s = 1.0 / (e_ratio[l + 1] + q_next);
        let ds = s * ((lf + 1.0) / x + q_next);
        let de = -(1.0 / e_ratio[l] + lf / x);
        let entry = RiccatiEntry {
            log_scale: -ln_e,
            s,
            ds,
            e: 1.0,
            de,
        };
        if !(entry.s.is_finite() && entry.ds.is_finite() && entry.de.is_finite())
            || !entry.log_scale.is_finite()
        {
            return Err(CasimirError::domain(format!(
                "Riccati-Bessel table not representable at x = {x}, l = {l}"
            )));
        }
        entries.push(entry);
    }

    Ok(RiccatiTable { x, entries })
}

/// Leading-order uniform asymptotic (Debye) values of `s_l, s_l', e_l, e_l'`.
///
/// With `nu = l + 1/2`, `z = x / nu`, `w = sqrt(1 + z^2)` and
/// `eta = w + ln(z / (1 + w))` the scale is `sigma = nu * eta` and
///
/// ```text
/// s_hat = sqrt(z/w) / 2      ds_hat = s_hat/(2x) + sqrt(w/z) / 2
/// e_hat = sqrt(z/w)          de_hat = e_hat/(2x) - sqrt(w/z)
/// ```
///
/// The pair keeps the Wronskian at exactly -1. Relative error is `O(1/nu)`.
pub fn riccati_debye(l: usize, x: f64) -> Result<RiccatiEntry> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(CasimirError::domain(format!(
            "Debye argument must be positive and finite, got {x}"
        )));
    }
    let nu = l as f64 + 0.5;
    if nu < DEBYE_MIN_NU {
        return Err(CasimirError::Precondition(format!(
            "Debye expansion requires nu = l + 1/2 >= {DEBYE_MIN_NU}, got nu = {nu}"
        )));
    }
    let z = x / nu;
    let w = z.hypot(1.0);
    let eta = w + (z / (1.0 + w)).ln();
    let root = (z / w).sqrt();
    let inv_root = (w / z).sqrt();
    let s = 0.5 * root;
    let e = root;
    Ok(RiccatiEntry {
        log_scale: nu * eta,
        s,
        ds: s / (2.0 * x) + 0.5 * inv_root,
        e,
        de: e / (2.0 * x) - inv_root,
    })
}
