//! Panel-based adaptive Gauss-Legendre quadrature.
//!
//! Each panel is integrated with a 12-point and a 24-point Gauss-Legendre rule;
//! their difference is the panel error estimate. Refinement always bisects
//! the panel with the largest estimate, so the panel layout depends only on
//! the integrand values, never on evaluation order or thread count.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::CasimirError;
use crate::summation::CompensatedSum;

const COARSE_POINTS: usize = 12;
const FINE_POINTS: usize = 24;

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node positions and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, half * w))
    }

    /// Plain sequential application to a scalar function.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b)
            .map(|(x, w)| w * f(x))
            .collect::<CompensatedSum>()
            .value()
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

fn rules() -> &'static (GaussLegendre, GaussLegendre) {
    static RULES: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    RULES.get_or_init(|| {
        (
            GaussLegendre::new(COARSE_POINTS),
            GaussLegendre::new(FINE_POINTS),
        )
    })
}

/// Integrand value at one node together with its own truncation estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sample {
    pub value: f64,
    /// Absolute error bound on `value` from truncating an inner series.
    pub truncation: f64,
    /// Highest series order used to produce `value`.
    pub order: usize,
}

impl From<f64> for Sample {
    fn from(value: f64) -> Self {
        Sample {
            value,
            truncation: 0.0,
            order: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPolicy {
    /// Relative tolerance on the integral.
    pub tol: f64,
    /// Maximum number of live panels.
    pub panel_budget: usize,
    /// Multiplier applied to the last panel before accepting the tail as negligible.
    pub tail_safety: f64,
    /// Width of the initial panels on a semi-infinite range.
    pub base_width: f64,
    /// Minimum number of initial panels on a semi-infinite range.
    pub min_panels: usize,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        QuadPolicy {
            tol: 1e-10,
            panel_budget: 2000,
            tail_safety: 10.0,
            base_width: 2.0,
            min_panels: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    /// Sum of `|fine - coarse|` over panels.
    pub quadrature_error: f64,
    /// Weighted sum of node truncation estimates.
    pub truncation_error: f64,
    /// Estimate of the discarded range beyond the last panel.
    pub tail_bound: f64,
    pub panels: usize,
    pub evaluations: usize,
    pub max_order: usize,
}

impl QuadOutcome {
    pub fn total_error(&self) -> f64 {
        self.quadrature_error + self.truncation_error + self.tail_bound
    }
}

#[derive(Debug, Clone)]
pub enum QuadError {
    /// The integrand itself failed at some node.
    Integrand(CasimirError),
    /// The panel budget ran out; carries the best estimate so far.
    Budget(QuadOutcome),
}

impl From<CasimirError> for QuadError {
    fn from(e: CasimirError) -> Self {
        QuadError::Integrand(e)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    coarse: f64,
    fine: f64,
    truncation: f64,
    order: usize,
}

impl Panel {
    fn error(&self) -> f64 {
        (self.fine - self.coarse).abs()
    }
}

fn eval_panel<F>(f: &F, a: f64, b: f64) -> Result<Panel, CasimirError>
where
    F: Fn(f64) -> Result<Sample, CasimirError> + Sync,
{
    let (coarse_rule, fine_rule) = rules();
    let points: Vec<(f64, f64)> = coarse_rule
        .mapped(a, b)
        .chain(fine_rule.mapped(a, b))
        .collect();
    let samples: Vec<Sample> = points
        .par_iter()
        .map(|&(x, _)| f(x))
        .collect::<Result<_, _>>()?;

    let n = coarse_rule.len();
    let mut coarse = CompensatedSum::new();
    let mut fine = CompensatedSum::new();
    let mut truncation = CompensatedSum::new();
    let mut order = 0;
    for (i, (&(_, w), s)) in points.iter().zip(&samples).enumerate() {
        order = order.max(s.order);
        if i < n {
            coarse.add(w * s.value);
        } else {
            fine.add(w * s.value);
            truncation.add(w.abs() * s.truncation);
        }
    }
    Ok(Panel {
        a,
        b,
        coarse: coarse.value(),
        fine: fine.value(),
        truncation: truncation.value(),
        order,
    })
}

fn summarize(panels: &[Panel], tail_bound: f64, evaluations: usize) -> QuadOutcome {
    let mut value = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    let mut trunc = CompensatedSum::new();
    let mut order = 0;
    // Panels are kept sorted by position, so the reduction order is fixed.
    for p in panels {
        value.add(p.fine);
        err.add(p.error());
        trunc.add(p.truncation);
        order = order.max(p.order);
    }
    QuadOutcome {
        value: value.value(),
        quadrature_error: err.value(),
        truncation_error: trunc.value(),
        tail_bound,
        panels: panels.len(),
        evaluations,
        max_order: order,
    }
}

fn refine<F>(
    f: &F,
    panels: &mut Vec<Panel>,
    policy: &QuadPolicy,
    tail_bound: f64,
    evaluations: &mut usize,
) -> Result<QuadOutcome, QuadError>
where
    F: Fn(f64) -> Result<Sample, CasimirError> + Sync,
{
    let per_panel = COARSE_POINTS + FINE_POINTS;
    loop {
        let outcome = summarize(panels, tail_bound, *evaluations);
        if outcome.quadrature_error <= policy.tol * outcome.value.abs() {
            return Ok(outcome);
        }
        if panels.len() >= policy.panel_budget {
            return Err(QuadError::Budget(outcome));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p.error() > best.1 {
                    (i, p.error())
                } else {
                    best
                }
            });
        let p = panels[idx];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(QuadError::Budget(outcome));
        }
        let left = eval_panel(f, p.a, mid)?;
        let right = eval_panel(f, mid, p.b)?;
        *evaluations += 2 * per_panel;
        panels[idx] = left;
        panels.insert(idx + 1, right);
    }
}

/// Integrates `f` over `[a, b]` to relative tolerance `policy.tol`.
pub fn integrate_interval<F>(
    f: F,
    a: f64,
    b: f64,
    policy: &QuadPolicy,
) -> Result<QuadOutcome, QuadError>
where
    F: Fn(f64) -> Result<Sample, CasimirError> + Sync,
{
    let mut panels = vec![eval_panel(&f, a, b)?];
    let mut evaluations = COARSE_POINTS + FINE_POINTS;
    refine(&f, &mut panels, policy, 0.0, &mut evaluations)
}

/// Integrates `f` over `(0, inf)` for integrands with an `exp(-u)`-type envelope.
///
/// Panels of width `policy.base_width` are laid down from the origin until a
/// panel is both smaller than its predecessor and negligible after
/// multiplication by `policy.tail_safety`; that panel's magnitude is reported
/// as the tail bound.
pub fn integrate_semi_infinite<F>(f: F, policy: &QuadPolicy) -> Result<QuadOutcome, QuadError>
where
    F: Fn(f64) -> Result<Sample, CasimirError> + Sync,
{
    let w = policy.base_width;
    let mut panels: Vec<Panel> = Vec::new();
    let mut evaluations = 0;
    let mut total = CompensatedSum::new();
    let tail_bound;
    loop {
        let k = panels.len() as f64;
        let p = eval_panel(&f, k * w, (k + 1.0) * w)?;
        evaluations += COARSE_POINTS + FINE_POINTS;
        total.add(p.fine);
        let shrinking = panels
            .last()
            .is_none_or(|prev| p.fine.abs() <= prev.fine.abs());
        panels.push(p);
        if panels.len() >= policy.min_panels
            && shrinking
            && p.fine.abs() * policy.tail_safety <= policy.tol * total.value().abs()
        {
            tail_bound = p.fine.abs();
            break;
        }
        if panels.len() >= policy.panel_budget {
            return Err(QuadError::Budget(summarize(
                &panels,
                p.fine.abs(),
                evaluations,
            )));
        }
    }
    refine(&f, &mut panels, policy, tail_bound, &mut evaluations)
}
