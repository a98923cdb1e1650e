//! Subcommand implementations.

use std::fmt::Write as _;
use std::io::Write as _;

use casimir_core::asymptotics::{self, CorrectionModel, XI_WARN};
use casimir_core::observables::{self, NumericsPolicy, Observable, ThermalState};
use casimir_core::selfcheck::{self, SelfcheckOptions, Suite};
use casimir_core::units::{self, PICONEWTON};
use casimir_core::Geometry;
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::settings::{Axis, Format, Limit, Model, Scale, Settings, SweepArgs};
use crate::Failure;

const SCHEMA: &str = "# schema=1";

/// Full-precision cell: 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(s: &Settings, body: &str) -> Result<(), Failure> {
    match &s.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::config(format!("cannot write output: {e}")))
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::config(format!("cannot serialise output: {e}")))
}

fn require(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::config(format!("missing --{flag}")))
}

fn radius(s: &Settings) -> Result<f64, Failure> {
    require(s.a, "a")
}

/// Geometry from `a` plus exactly one of `b`, `d` or `xi`.
fn geometry(s: &Settings) -> Result<Geometry, Failure> {
    let a = radius(s)?;
    let g = match (s.b, s.d, s.xi) {
        (Some(b), None, None) => Geometry::new(a, b)?,
        (None, Some(d), None) => Geometry::from_gap(a, d)?,
        (None, None, Some(xi)) => Geometry::from_gap(a, xi * a)?,
        (None, None, None) => return Err(Failure::config("give one of --b, --d or --xi")),
        _ => return Err(Failure::config("give exactly one of --b, --d or --xi")),
    };
    Ok(g)
}

fn policy(s: &Settings) -> Result<NumericsPolicy, Failure> {
    let mut p = NumericsPolicy::default();
    if let Some(tol) = s.tol {
        p.tol = tol;
    }
    p.l_max = s.lmax;
    if let Some(m) = s.mmax {
        p.m_max = m;
    }
    p.validate()?;
    Ok(p)
}

fn thermal_state(s: &Settings, a: f64) -> Result<Option<ThermalState>, Failure> {
    match (s.temperature, s.reduced) {
        (Some(t), None) => Ok(Some(ThermalState::from_kelvin(t)?)),
        (None, Some(t)) => Ok(Some(ThermalState::from_reduced(t, a)?)),
        (None, None) => Ok(None),
        _ => Err(Failure::config("give only one of --T and --t")),
    }
}

fn stray_factor(s: &Settings) -> Result<f64, Failure> {
    match s.delta_deg {
        Some(deg) => Ok(asymptotics::stray_field_factor(deg.to_radians())?),
        None => Ok(1.0),
    }
}

/// One force evaluation, in newtons.
#[derive(Debug, Clone, Serialize)]
struct ForcePoint {
    force: f64,
    baseline: f64,
    error: f64,
    l_used: usize,
    panels: usize,
    warn: bool,
    #[serde(skip)]
    observable: Option<Observable>,
}

fn plate_baseline(g: &Geometry) -> f64 {
    let a = g.a() * units::MICRON;
    asymptotics::plate_pressure(g.gap()) * std::f64::consts::PI * a * a
}

fn force_point(g: &Geometry, model: Model, p: &NumericsPolicy) -> Result<ForcePoint, Failure> {
    match model {
        Model::Pfa => {
            let f = asymptotics::pfa_force(g.a(), g.gap())?;
            Ok(ForcePoint {
                force: f.force,
                baseline: f.baseline(),
                error: 0.0,
                l_used: 0,
                panels: 0,
                warn: f.warn,
                observable: None,
            })
        }
        Model::Modesum => {
            let o = observables::force_zero_t(g, p)?;
            Ok(ForcePoint {
                force: o.value,
                baseline: plate_baseline(g),
                error: o.abs_error,
                l_used: o.diagnostics.l_used,
                panels: o.diagnostics.panels,
                warn: false,
                observable: Some(o),
            })
        }
    }
}

#[derive(Serialize)]
struct GeometryReport {
    a_um: f64,
    b_um: f64,
    d_um: f64,
    xi: f64,
    rho: f64,
}

impl From<&Geometry> for GeometryReport {
    fn from(g: &Geometry) -> Self {
        GeometryReport {
            a_um: g.a(),
            b_um: g.b(),
            d_um: g.gap(),
            xi: g.xi(),
            rho: g.rho(),
        }
    }
}

#[derive(Serialize)]
struct ForceReport<'a> {
    model: &'static str,
    geometry: GeometryReport,
    force_pn: f64,
    force_natural: f64,
    natural_unit: &'static str,
    plate_baseline_pn: f64,
    ratio: f64,
    dip_debye_factor: f64,
    stray_factor: f64,
    err_estimate_pn: f64,
    observable: Option<&'a Observable>,
}

pub fn force(s: &Settings) -> Result<(), Failure> {
    let g = geometry(s)?;
    let p = policy(s)?;
    let model = s.model.unwrap_or(Model::Modesum);
    let stray = stray_factor(s)?;
    let pt = force_point(&g, model, &p)?;
    let force = pt.force * stray;
    let report = ForceReport {
        model: match model {
            Model::Modesum => "modesum",
            Model::Pfa => "pfa",
        },
        geometry: (&g).into(),
        force_pn: force / PICONEWTON,
        force_natural: force / units::force_unit(g.b()),
        natural_unit: "hbar c / b^2",
        plate_baseline_pn: pt.baseline / PICONEWTON,
        ratio: force / pt.baseline,
        dip_debye_factor: CorrectionModel::DipDebye.factor(g.xi()),
        stray_factor: stray,
        err_estimate_pn: pt.error * stray / PICONEWTON,
        observable: pt.observable.as_ref(),
    };
    let body = match s.format.unwrap_or(Format::Text) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut out = format!("{SCHEMA}\n{}\n", CSV_FORCE_HEADER);
            row(&mut out, g.gap(), force / PICONEWTON, &pt, stray, 0);
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "model            {}", report.model);
            let _ = writeln!(
                out,
                "geometry         a = {} um, b = {} um, d = {} um, d/a = {:.6}",
                g.a(),
                g.b(),
                g.gap(),
                g.xi()
            );
            let _ = writeln!(out, "force            {:.6} pN", report.force_pn);
            let _ = writeln!(
                out,
                "force (natural)  {:.10e} hbar c / b^2",
                report.force_natural
            );
            let _ = writeln!(out, "plate baseline   {:.6} pN", report.plate_baseline_pn);
            let _ = writeln!(out, "factor vs plate  {:.6}", report.ratio);
            let _ = writeln!(out, "1 + (4/3) d/a    {:.6}", report.dip_debye_factor);
            if s.delta_deg.is_some() {
                let _ = writeln!(out, "stray factor     {:.6}", stray);
            }
            let _ = writeln!(out, "error estimate   {:.3e} pN", report.err_estimate_pn);
            if let Some(o) = &pt.observable {
                let d = &o.diagnostics;
                let _ = writeln!(
                    out,
                    "diagnostics      l_used = {}, panels = {}, evaluations = {}, quadrature = {:.2e}, truncation = {:.2e}, tail = {:.2e}",
                    d.l_used, d.panels, d.evaluations, d.quadrature_error, d.truncation_error, d.tail_bound
                );
            }
            if pt.warn {
                let _ = writeln!(
                    out,
                    "warning          d/a > {XI_WARN}: first-order formula is approximate"
                );
            }
            out
        }
    };
    emit(s, &body)
}

const CSV_FORCE_HEADER: &str =
    "axis_value,force_pN,plate_baseline,ratio,err_estimate,l_used,m_used,panels";
const CSV_THERMAL_HEADER: &str =
    "axis_value,beta_F,plate_baseline,ratio,err_estimate,l_used,m_used,panels";

fn row(out: &mut String, axis: f64, value_pn: f64, pt: &ForcePoint, stray: f64, m_used: usize) {
    let baseline = pt.baseline / PICONEWTON;
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        num(axis),
        num(value_pn),
        num(baseline),
        num(value_pn / baseline),
        num(pt.error * stray / PICONEWTON),
        pt.l_used,
        m_used,
        pt.panels
    );
}

/// Free energy in units of `k_B T`, with its error and truncation record.
#[derive(Debug, Clone, Serialize)]
struct ThermalPoint {
    t: f64,
    temperature_k: f64,
    beta_f: f64,
    free_energy_j: f64,
    zero_t_beta_e: f64,
    ratio: f64,
    err_estimate: f64,
    l_used: usize,
    m_used: usize,
}

fn thermal_point(
    g: &Geometry,
    th: &ThermalState,
    limit: Limit,
    p: &NumericsPolicy,
    e0_joule: f64,
) -> Result<ThermalPoint, Failure> {
    if !(th.temperature() > 0.0) {
        return Err(Failure::config(
            "free energy needs T > 0 (use force or --limit static)",
        ));
    }
    let (beta_f, err, l_used, m_used) = match limit {
        Limit::Full => {
            let sum = observables::free_energy_sum(g, th, p)?;
            (sum.total, sum.abs_error, sum.l_used, sum.m_used)
        }
        Limit::Narrow => {
            let sum = observables::free_energy_narrow(g.xi(), th.reduced(g.a()), p)?;
            (sum.total, sum.abs_error, sum.l_used, sum.m_used)
        }
        Limit::Static => (observables::free_energy_static(g), 0.0, 0, 0),
        Limit::Plate => unreachable!("plate limit has no geometry"),
    };
    let kt = th.kt();
    let zero_t_beta_e = e0_joule / kt;
    Ok(ThermalPoint {
        t: th.reduced(g.a()),
        temperature_k: th.temperature(),
        beta_f,
        free_energy_j: beta_f * kt,
        zero_t_beta_e,
        ratio: beta_f / zero_t_beta_e,
        err_estimate: err,
        l_used,
        m_used,
    })
}

#[derive(Serialize)]
struct PlateReport {
    d_um: f64,
    quadrature_per_um2: f64,
    closed_form_per_um2: f64,
    quadrature_per_m2: f64,
    closed_form_per_m2: f64,
    abs_error_per_um2: f64,
}

#[derive(Serialize)]
struct ThermalReport {
    limit: &'static str,
    geometry: GeometryReport,
    #[serde(flatten)]
    point: ThermalPoint,
    plateau_deviation: f64,
}

pub fn thermal(s: &Settings) -> Result<(), Failure> {
    let limit = s.limit.unwrap_or(Limit::Full);
    if limit == Limit::Plate {
        let d = require(s.d, "d")?;
        let r = observables::free_energy_high_t_plate(d)?;
        let rep = PlateReport {
            d_um: d,
            quadrature_per_um2: r.quadrature,
            closed_form_per_um2: r.closed_form,
            quadrature_per_m2: r.quadrature * 1e12,
            closed_form_per_m2: r.closed_form * 1e12,
            abs_error_per_um2: r.abs_error,
        };
        let body = match s.format.unwrap_or(Format::Text) {
            Format::Json => json(&rep)?,
            Format::Csv => format!(
                "{SCHEMA}\nd_um,quadrature_per_um2,closed_form_per_um2,abs_error_per_um2\n{},{},{},{}\n",
                num(d),
                num(r.quadrature),
                num(r.closed_form),
                num(r.abs_error)
            ),
            Format::Text => format!(
                "limit            plate (m = 0, per unit area)\n\
                 d                {d} um\n\
                 quadrature       {:.12e} per um^2 ({:.12e} per m^2)\n\
                 closed form      {:.12e} per um^2 ({:.12e} per m^2)\n\
                 relative diff    {:.3e}\n",
                r.quadrature,
                rep.quadrature_per_m2,
                r.closed_form,
                rep.closed_form_per_m2,
                ((r.quadrature - r.closed_form) / r.closed_form).abs()
            ),
        };
        return emit(s, &body);
    }

    let g = geometry(s)?;
    let p = policy(s)?;
    let th = thermal_state(s, g.a())?.ok_or_else(|| Failure::config("give one of --T or --t"))?;
    let e0 = observables::energy_zero_t(&g, &p)?.value;
    let point = thermal_point(&g, &th, limit, &p, e0)?;
    let rep = ThermalReport {
        limit: match limit {
            Limit::Full => "full",
            Limit::Static => "static",
            Limit::Narrow => "narrow",
            Limit::Plate => "plate",
        },
        geometry: (&g).into(),
        plateau_deviation: (point.ratio - 1.0).abs(),
        point,
    };
    let body = match s.format.unwrap_or(Format::Text) {
        Format::Json => json(&rep)?,
        Format::Csv => {
            let mut out = format!("{SCHEMA}\n{CSV_THERMAL_HEADER}\n");
            thermal_row(&mut out, rep.point.t, &rep.point);
            out
        }
        Format::Text => {
            let pt = &rep.point;
            let mut out = String::new();
            let _ = writeln!(out, "limit            {}", rep.limit);
            let _ = writeln!(
                out,
                "geometry         a = {} um, b = {} um, d = {} um, d/a = {:.6}",
                g.a(),
                g.b(),
                g.gap(),
                g.xi()
            );
            let _ = writeln!(
                out,
                "temperature      T = {:.6} K, t = {:.6}",
                pt.temperature_k, pt.t
            );
            let _ = writeln!(out, "beta F           {:.12e}", pt.beta_f);
            let _ = writeln!(out, "F                {:.6e} J", pt.free_energy_j);
            let _ = writeln!(out, "beta E (T = 0)   {:.12e}", pt.zero_t_beta_e);
            let _ = writeln!(out, "F / E(T = 0)     {:.6}", pt.ratio);
            let _ = writeln!(out, "|F/E(T=0) - 1|   {:.4e}", rep.plateau_deviation);
            let _ = writeln!(
                out,
                "diagnostics      t = {:.6}, l_used = {}, m_used = {}, error = {:.2e}",
                pt.t, pt.l_used, pt.m_used, pt.err_estimate
            );
            out
        }
    };
    emit(s, &body)
}

fn thermal_row(out: &mut String, axis: f64, pt: &ThermalPoint) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        num(axis),
        num(pt.beta_f),
        num(pt.zero_t_beta_e),
        num(pt.ratio),
        num(pt.err_estimate),
        pt.l_used,
        pt.m_used,
        0
    );
}

fn sweep_values(w: &SweepArgs) -> Result<Vec<f64>, Failure> {
    let start = w.start.ok_or_else(|| Failure::config("missing --start"))?;
    let stop = w.stop.ok_or_else(|| Failure::config("missing --stop"))?;
    let count = w.count.ok_or_else(|| Failure::config("missing --count"))?;
    if count < 2 {
        return Err(Failure::config(format!(
            "sweep count must be at least 2, got {count}"
        )));
    }
    if !(start < stop) || !start.is_finite() || !stop.is_finite() {
        return Err(Failure::config(format!(
            "sweep bounds must satisfy start < stop, got {start}..{stop}"
        )));
    }
    let last = (count - 1) as f64;
    match w.scale.unwrap_or(Scale::Lin) {
        Scale::Lin => Ok((0..count)
            .map(|i| {
                if i + 1 == count {
                    stop
                } else {
                    start + (stop - start) * i as f64 / last
                }
            })
            .collect()),
        Scale::Log => {
            if !(start > 0.0) {
                return Err(Failure::config("log sweep needs start > 0"));
            }
            let (l0, l1) = (start.ln(), stop.ln());
            Ok((0..count)
                .map(|i| match i {
                    0 => start,
                    _ if i + 1 == count => stop,
                    _ => (l0 + (l1 - l0) * i as f64 / last).exp(),
                })
                .collect())
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    axis_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    force_pn: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_f: Option<f64>,
    plate_baseline: f64,
    ratio: f64,
    err_estimate: f64,
    l_used: usize,
    m_used: usize,
    panels: usize,
}

pub fn sweep(s: &Settings, w: &SweepArgs) -> Result<(), Failure> {
    let axis = w.axis.ok_or_else(|| Failure::config("missing --axis"))?;
    let values = sweep_values(w)?;
    let p = policy(s)?;
    let model = s.model.unwrap_or(Model::Modesum);

    let rows: Vec<SweepRow> = match axis {
        Axis::Gap | Axis::Outer | Axis::Xi => {
            let a = radius(s)?;
            let stray = stray_factor(s)?;
            let points: Vec<ForcePoint> = values
                .par_iter()
                .map(|&v| {
                    let g = match axis {
                        Axis::Gap => Geometry::from_gap(a, v)?,
                        Axis::Outer => Geometry::new(a, v)?,
                        _ => Geometry::from_gap(a, v * a)?,
                    };
                    force_point(&g, model, &p)
                })
                .collect::<Result<_, _>>()?;
            values
                .iter()
                .zip(points)
                .map(|(&v, pt)| force_row(v, &pt, pt.force * stray, pt.baseline, stray))
                .collect()
        }
        Axis::Delta => {
            // Baseline is the untruncated force; the ratio is the stray factor.
            let g = geometry(s)?;
            let pt = force_point(&g, model, &p)?;
            values
                .iter()
                .map(|&deg| {
                    let f = asymptotics::stray_field_factor(deg.to_radians())?;
                    Ok(force_row(deg, &pt, pt.force * f, pt.force, f))
                })
                .collect::<Result<_, Failure>>()?
        }
        Axis::Kelvin | Axis::Reduced => {
            let g = geometry(s)?;
            let limit = s.limit.unwrap_or(Limit::Full);
            if limit == Limit::Plate {
                return Err(Failure::config(
                    "plate limit cannot be swept in temperature",
                ));
            }
            let e0 = observables::energy_zero_t(&g, &p)?.value;
            let points: Vec<ThermalPoint> = values
                .par_iter()
                .map(|&v| {
                    let th = if axis == Axis::Kelvin {
                        ThermalState::from_kelvin(v)?
                    } else {
                        ThermalState::from_reduced(v, g.a())?
                    };
                    thermal_point(&g, &th, limit, &p, e0)
                })
                .collect::<Result<_, _>>()?;
            values
                .iter()
                .zip(points)
                .map(|(&v, pt)| SweepRow {
                    axis_value: v,
                    force_pn: None,
                    beta_f: Some(pt.beta_f),
                    plate_baseline: pt.zero_t_beta_e,
                    ratio: pt.ratio,
                    err_estimate: pt.err_estimate,
                    l_used: pt.l_used,
                    m_used: pt.m_used,
                    panels: 0,
                })
                .collect()
        }
    };

    let body = match s.format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows)?,
        Format::Csv | Format::Text => {
            let thermal = matches!(axis, Axis::Kelvin | Axis::Reduced);
            let mut out = format!(
                "{SCHEMA}\n{}\n",
                if thermal {
                    CSV_THERMAL_HEADER
                } else {
                    CSV_FORCE_HEADER
                }
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    num(r.axis_value),
                    num(r.force_pn.or(r.beta_f).unwrap_or(f64::NAN)),
                    num(r.plate_baseline),
                    num(r.ratio),
                    num(r.err_estimate),
                    r.l_used,
                    r.m_used,
                    r.panels
                );
            }
            out
        }
    };
    emit(s, &body)
}

fn force_row(axis: f64, pt: &ForcePoint, force: f64, baseline: f64, scale: f64) -> SweepRow {
    SweepRow {
        axis_value: axis,
        force_pn: Some(force / PICONEWTON),
        beta_f: None,
        plate_baseline: baseline / PICONEWTON,
        ratio: force / baseline,
        err_estimate: pt.error * scale / PICONEWTON,
        l_used: pt.l_used,
        m_used: 0,
        panels: pt.panels,
    }
}

#[derive(Serialize)]
struct FactorRow {
    model: &'static str,
    slope: f64,
    value: f64,
    sign: i32,
}

pub fn factors(s: &Settings) -> Result<(), Failure> {
    let xi = match (s.xi, s.a, s.d) {
        (Some(xi), _, _) => xi,
        (None, Some(a), Some(d)) => d / a,
        _ => return Err(Failure::config("give --xi, or --a with --d")),
    };
    let table = asymptotics::factor_table(xi)?;
    let rows: Vec<FactorRow> = table
        .rows
        .iter()
        .map(|r| FactorRow {
            model: r.model.tag(),
            slope: r.slope,
            value: r.value,
            sign: table.correction_sign(r.model),
        })
        .collect();
    let body = match s.format.unwrap_or(Format::Text) {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut out = format!("{SCHEMA}\nmodel,slope,value,sign\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.model,
                    num(r.slope),
                    num(r.value),
                    r.sign
                );
            }
            out
        }
        Format::Text => {
            let mut out = format!("d/a = {xi}\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:<22} slope {:>8.4}  f = {:.4}",
                    r.model, r.slope, r.value
                );
            }
            let same = table.same_sign(CorrectionModel::DipDebye, CorrectionModel::PfaPlateBased);
            let _ = writeln!(
                out,
                "dip-debye and pfa-plate-based corrections have {} signs",
                if same { "the same" } else { "opposite" }
            );
            out
        }
    };
    emit(s, &body)
}

#[derive(Debug, Clone, Default, Args)]
pub struct SelfcheckArgs {
    /// Suite to run (repeatable); default is all.
    #[arg(long, value_name = "NAME")]
    suite: Vec<String>,
    #[arg(long)]
    riccati: bool,
    #[arg(long)]
    modes: bool,
    #[arg(long)]
    observables: bool,
    #[arg(long)]
    asymptotics: bool,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Force the named check to fail.
    #[arg(long, hide = true, value_name = "CHECK")]
    inject_fault: Option<String>,
}

pub fn selfcheck(s: &Settings, args: &SelfcheckArgs) -> Result<(), Failure> {
    let mut suites: Vec<Suite> = args
        .suite
        .iter()
        .filter(|n| n.as_str() != "all")
        .map(|n| n.parse::<Suite>())
        .collect::<Result<_, _>>()?;
    for (on, suite) in [
        (args.riccati, Suite::Riccati),
        (args.modes, Suite::Modes),
        (args.observables, Suite::Observables),
        (args.asymptotics, Suite::Asymptotics),
    ] {
        if on && !suites.contains(&suite) {
            suites.push(suite);
        }
    }
    if suites.is_empty() {
        suites = Suite::ALL.to_vec();
    }
    let opts = SelfcheckOptions {
        seed: args.seed,
        inject_fault: args.inject_fault.clone(),
    };
    let results: Vec<_> = suites
        .iter()
        .flat_map(|&su| selfcheck::run_suite(su, &opts))
        .collect();
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}/{}", r.suite, r.name))
        .collect();
    let body = match s.format.unwrap_or(Format::Text) {
        Format::Json => json(&results)?,
        Format::Csv => {
            let mut out = format!("{SCHEMA}\nsuite,check,passed,worst,tolerance,samples\n");
            for r in &results {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.suite,
                    r.name,
                    r.passed,
                    num(r.worst),
                    num(r.tolerance),
                    r.samples
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(
                    out,
                    "{} {:<12} {:<28} worst {:.3e}  tol {:.1e}  n = {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.name,
                    r.worst,
                    r.tolerance,
                    r.samples
                );
            }
            let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
            let _ = writeln!(
                out,
                "{}/{} checks passed in suites: {}",
                results.len() - failed.len(),
                results.len(),
                names.join(", ")
            );
            out
        }
    };
    emit(s, &body)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::convergence(format!(
            "invariant violated: {}",
            failed.join(", ")
        )))
    }
}
