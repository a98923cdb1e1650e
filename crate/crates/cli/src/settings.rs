//! Command-line flags, the flat config file, and their merge.
//!
//! Precedence: flag > config file > built-in default.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use toml::Value;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Modesum,
    Pfa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Limit {
    Full,
    Static,
    Narrow,
    Plate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    /// Gap d in um at fixed a.
    #[value(name = "d")]
    Gap,
    /// Dip radius b in um at fixed a.
    #[value(name = "b")]
    Outer,
    /// d/a at fixed a.
    #[value(name = "xi")]
    Xi,
    /// Temperature in K.
    #[value(name = "T")]
    Kelvin,
    /// Reduced temperature 2 pi a k_B T / hbar c.
    #[value(name = "t")]
    Reduced,
    /// Stray-field truncation angle in degrees.
    #[value(name = "delta")]
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Lin,
    Log,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Flat key = value config file; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Sphere radius, um.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Dip radius, um.
    #[arg(long, global = true, conflicts_with = "d")]
    pub b: Option<f64>,
    /// Gap b - a, um.
    #[arg(long, global = true)]
    pub d: Option<f64>,
    /// Temperature, K.
    #[arg(long = "T", global = true, conflicts_with = "reduced")]
    pub temperature: Option<f64>,
    /// Reduced temperature t = 2 pi a k_B T / hbar c.
    #[arg(long = "t", global = true)]
    pub reduced: Option<f64>,
    /// Relative tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Cap on the angular order.
    #[arg(long, global = true)]
    pub lmax: Option<usize>,
    /// Cap on the Matsubara index.
    #[arg(long, global = true)]
    pub mmax: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub model: Option<Model>,
    #[arg(long, global = true, value_enum)]
    pub limit: Option<Limit>,
    /// Gap ratio d/a.
    #[arg(long, global = true)]
    pub xi: Option<f64>,
    /// Stray-field truncation angle, degrees.
    #[arg(long = "delta-deg", global = true)]
    pub delta_deg: Option<f64>,
}

/// Sweep-specific flags.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: Option<Axis>,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::config(msg)
}

fn as_f64(key: &str, v: &Value) -> Result<f64, Failure> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(config_err(format!("config key '{key}' must be a number"))),
    }
}

fn as_usize(key: &str, v: &Value) -> Result<usize, Failure> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(config_err(format!(
            "config key '{key}' must be a non-negative integer"
        ))),
    }
}

fn as_enum<T: ValueEnum>(key: &str, v: &Value) -> Result<T, Failure> {
    let s = v
        .as_str()
        .ok_or_else(|| config_err(format!("config key '{key}' must be a string")))?;
    T::from_str(s, false)
        .map_err(|_| config_err(format!("config key '{key}': invalid value '{s}'")))
}

/// Reads a flat config file into the same shape as the flags.
pub fn load_config(path: &Path) -> Result<(Settings, SweepArgs), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| config_err(format!("cannot parse config {}: {e}", path.display())))?;
    let mut s = Settings::default();
    let mut w = SweepArgs::default();
    for (key, v) in &table {
        match key.as_str() {
            "a" => s.a = Some(as_f64(key, v)?),
            "b" => s.b = Some(as_f64(key, v)?),
            "d" => s.d = Some(as_f64(key, v)?),
            "T" => s.temperature = Some(as_f64(key, v)?),
            "t" => s.reduced = Some(as_f64(key, v)?),
            "tol" => s.tol = Some(as_f64(key, v)?),
            "lmax" => s.lmax = Some(as_usize(key, v)?),
            "mmax" => s.mmax = Some(as_usize(key, v)?),
            "format" => s.format = Some(as_enum(key, v)?),
            "out" => {
                let p = v
                    .as_str()
                    .ok_or_else(|| config_err("config key 'out' must be a string"))?;
                s.out = Some(PathBuf::from(p));
            }
            "model" => s.model = Some(as_enum(key, v)?),
            "limit" => s.limit = Some(as_enum(key, v)?),
            "xi" => s.xi = Some(as_f64(key, v)?),
            "delta-deg" | "delta_deg" => s.delta_deg = Some(as_f64(key, v)?),
            "axis" => w.axis = Some(as_enum(key, v)?),
            "start" => w.start = Some(as_f64(key, v)?),
            "stop" => w.stop = Some(as_f64(key, v)?),
            "count" => w.count = Some(as_usize(key, v)?),
            "scale" => w.scale = Some(as_enum(key, v)?),
            other => return Err(config_err(format!("unknown config key '{other}'"))),
        }
    }
    Ok((s, w))
}

impl Settings {
    /// Fills every unset field from `file`.
    pub fn or(self, file: Settings) -> Settings {
        // A flag for one of b/d or T/t overrides the whole pair from the file.
        let (b, d) = if self.b.is_some() || self.d.is_some() {
            (self.b, self.d)
        } else {
            (file.b, file.d)
        };
        let (temperature, reduced) = if self.temperature.is_some() || self.reduced.is_some() {
            (self.temperature, self.reduced)
        } else {
            (file.temperature, file.reduced)
        };
        Settings {
            config: self.config,
            a: self.a.or(file.a),
            b,
            d,
            temperature,
            reduced,
            tol: self.tol.or(file.tol),
            lmax: self.lmax.or(file.lmax),
            mmax: self.mmax.or(file.mmax),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            model: self.model.or(file.model),
            limit: self.limit.or(file.limit),
            xi: self.xi.or(file.xi),
            delta_deg: self.delta_deg.or(file.delta_deg),
        }
    }
}

impl SweepArgs {
    pub fn or(self, file: SweepArgs) -> SweepArgs {
        SweepArgs {
            axis: self.axis.or(file.axis),
            start: self.start.or(file.start),
            stop: self.stop.or(file.stop),
            count: self.count.or(file.count),
            scale: self.scale.or(file.scale),
        }
    }
}
