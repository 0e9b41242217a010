//! Run configuration: a flat `key = value unit` file, overridden by flags.
//!
//! ```text
//! # circuit
//! L_J = 0.75 nH
//! L_g = 0.45 nH
//! C_J = 24 fF
//! C_R0 = 2 fF
//! # scan
//! L_R0_min = 0.30 nH
//! L_R0_max = 1.0 nH
//! L_R0_steps = 20
//! T_max = 200 GHz
//! N = 1, 2, 3
//! ```
//!
//! Temperatures are given as `k_B·T/h` in GHz or MHz, or directly in K / mK.

use crate::CliError;
use srpt_core::units::{ff, nh};
use srpt_core::{CircuitParams, Temperature};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown output format `{other}` (csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Inclusive uniform axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        srpt_core::fluct::uniform_axis(self.min, self.max, self.steps)
    }

    /// `scale` converts the stored values into `unit` for messages.
    fn validate(&self, name: &str, scale: f64, unit: &str) -> Result<(), CliError> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Config(format!("{name}: range bounds must be finite")));
        }
        if self.steps == 0 {
            return Err(CliError::Config(format!("{name}: at least one step is required")));
        }
        if self.steps > 1 && !(self.max > self.min) {
            return Err(CliError::Config(format!(
                "{name}: max ({} {unit}) must exceed min ({} {unit}) for a multi-point scan",
                self.max * scale,
                self.min * scale
            )));
        }
        Ok(())
    }
}

/// Axis entries set so far; unset ones fall back to the subcommand default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PartialRange {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub steps: Option<usize>,
}

impl PartialRange {
    fn single(x: f64) -> Self {
        PartialRange { min: Some(x), max: Some(x), steps: Some(1) }
    }

    fn is_set(&self) -> bool {
        self.min.is_some() || self.max.is_some() || self.steps.is_some()
    }

    fn resolve(&self, default: Range) -> Range {
        Range {
            min: self.min.unwrap_or(default.min),
            max: self.max.unwrap_or(default.max),
            steps: self.steps.unwrap_or(default.steps),
        }
    }
}

/// Everything a subcommand needs. Physical values are stored in SI except
/// temperatures, kept as `k_B·T/h` in GHz to match the output columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub l_j: f64,
    pub l_g: f64,
    pub c_j: f64,
    pub c_r0: f64,
    pub l_r0: PartialRange,
    pub temperature: PartialRange,
    pub n_atoms: Option<Vec<usize>>,
    /// `L_R0/L_J` values for the classical potential curves.
    pub ratios: Option<Vec<f64>>,
    pub phase_points: usize,
    pub phase_max: f64,
    pub atom_dim: usize,
    pub per_mode: usize,
    pub total: usize,
    pub quartic: bool,
    pub eigenvalues: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            l_j: nh(0.75),
            l_g: nh(0.45),
            c_j: ff(24.0),
            c_r0: ff(2.0),
            l_r0: PartialRange::default(),
            temperature: PartialRange::default(),
            n_atoms: None,
            ratios: None,
            phase_points: 401,
            phase_max: std::f64::consts::PI,
            atom_dim: srpt_core::fock::DEFAULT_ATOM_DIM,
            per_mode: 24,
            total: 48,
            quartic: true,
            eigenvalues: 2,
            seed: 0x5eed,
            format: Format::Csv,
            out: None,
        }
    }
}

fn split_unit(value: &str) -> (f64, Option<&str>) {
    let value = value.trim();
    let cut = value.find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E').unwrap_or(value.len());
    // A bare exponent letter followed by a unit ("2e-3 nH") is handled by the
    // whitespace split; unit letters glued to the number ("0.75nH") by `cut`.
    let (num, unit) = match value.split_once(char::is_whitespace) {
        Some((n, u)) => (n, Some(u.trim())),
        None if cut < value.len() => (&value[..cut], Some(&value[cut..])),
        None => (value, None),
    };
    (num.trim().parse::<f64>().unwrap_or(f64::NAN), unit.filter(|u| !u.is_empty()))
}

fn quantity(key: &str, value: &str, units: &[(&str, f64)]) -> Result<f64, CliError> {
    let (x, unit) = split_unit(value);
    if !x.is_finite() {
        return Err(CliError::Config(format!("{key}: cannot parse number in `{value}`")));
    }
    let names: Vec<&str> = units.iter().map(|u| u.0).collect();
    let unit = unit.ok_or_else(|| CliError::Config(format!("{key}: missing unit, expected one of {names:?}")))?;
    units
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, scale)| x * scale)
        .ok_or_else(|| CliError::Config(format!("{key}: unknown unit `{unit}`, expected one of {names:?}")))
}

const INDUCTANCE: &[(&str, f64)] = &[("pH", 1e-12), ("nH", 1e-9), ("uH", 1e-6), ("µH", 1e-6), ("H", 1.0)];
const CAPACITANCE: &[(&str, f64)] = &[("aF", 1e-18), ("fF", 1e-15), ("pF", 1e-12), ("F", 1.0)];

/// `k_B·T/h` in GHz from a frequency or an absolute temperature.
fn temperature_ghz(key: &str, value: &str) -> Result<f64, CliError> {
    let (x, unit) = split_unit(value);
    let ghz = match unit {
        Some("GHz") => x,
        Some("MHz") => x * 1e-3,
        Some("K") => Temperature::kelvin(x).as_ghz(),
        Some("mK") => Temperature::kelvin(x * 1e-3).as_ghz(),
        Some(u) => return Err(CliError::Config(format!("{key}: unknown temperature unit `{u}` (GHz, MHz, K, mK)"))),
        None => return Err(CliError::Config(format!("{key}: missing unit (GHz, MHz, K, mK)"))),
    };
    if !(ghz.is_finite() && ghz >= 0.0) {
        return Err(CliError::Config(format!("{key}: temperature must be finite and non-negative")));
    }
    Ok(ghz)
}

fn count(key: &str, value: &str) -> Result<usize, CliError> {
    value.trim().parse().map_err(|_| CliError::Config(format!("{key}: expected a non-negative integer, got `{value}`")))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse list entry `{s}`"))))
        .collect()
}

fn flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got `{value}`"))),
    }
}

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim();
        match key {
            "L_J" => self.l_j = quantity(key, value, INDUCTANCE)?,
            "L_g" => self.l_g = quantity(key, value, INDUCTANCE)?,
            "C_J" => self.c_j = quantity(key, value, CAPACITANCE)?,
            "C_R0" => self.c_r0 = quantity(key, value, CAPACITANCE)?,
            "L_R0" => self.l_r0 = PartialRange::single(quantity(key, value, INDUCTANCE)?),
            "L_R0_min" => self.l_r0.min = Some(quantity(key, value, INDUCTANCE)?),
            "L_R0_max" => self.l_r0.max = Some(quantity(key, value, INDUCTANCE)?),
            "L_R0_steps" => self.l_r0.steps = Some(count(key, value)?),
            "T" => self.temperature = PartialRange::single(temperature_ghz(key, value)?),
            "T_min" => self.temperature.min = Some(temperature_ghz(key, value)?),
            "T_max" => self.temperature.max = Some(temperature_ghz(key, value)?),
            "T_steps" => self.temperature.steps = Some(count(key, value)?),
            "N" => self.n_atoms = Some(list(key, value)?),
            "L_R0_over_L_J" => self.ratios = Some(list(key, value)?),
            "phase_points" => self.phase_points = count(key, value)?,
            "phase_max" => {
                let (x, unit) = split_unit(value);
                if !matches!(unit, Some("rad")) || !x.is_finite() {
                    return Err(CliError::Config(format!("{key}: expected a value in rad, got `{value}`")));
                }
                self.phase_max = x;
            }
            "M" => self.atom_dim = count(key, value)?,
            "per_mode" => self.per_mode = count(key, value)?,
            "total" => self.total = count(key, value)?,
            "quartic" => self.quartic = flag(key, value)?,
            "eigenvalues" => self.eigenvalues = count(key, value)?,
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| CliError::Config(format!("seed: cannot parse `{value}`")))?
            }
            "format" => self.format = value.parse().map_err(CliError::Config)?,
            "out" => self.out = Some(value.trim().to_string()),
            _ => return Err(CliError::Config(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Parses a configuration file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key, value).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("line {}: {m}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    /// Applies a `KEY=VALUE` override from the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not of the form KEY=VALUE")))?;
        self.set(key, value)
    }

    pub fn circuit(&self, l_r0: f64) -> Result<CircuitParams, CliError> {
        CircuitParams::new(self.l_j, self.l_g, self.c_j, self.c_r0, l_r0).map_err(|e| CliError::Config(e.to_string()))
    }

    /// `L_R0` axis with a subcommand-specific default.
    pub fn l_r0_axis(&self, default: Range) -> Result<Vec<f64>, CliError> {
        let r = self.l_r0.resolve(default);
        r.validate("L_R0", 1e9, "nH")?;
        if r.min <= 0.0 {
            return Err(CliError::Config("L_R0: values must be positive".into()));
        }
        Ok(r.points())
    }

    /// Temperature axis (`k_B·T/h` in GHz) with a subcommand-specific default.
    pub fn temperature_axis(&self, default: Range) -> Result<Vec<f64>, CliError> {
        let r = self.temperature.resolve(default);
        r.validate("T", 1.0, "GHz")?;
        if r.min < 0.0 {
            return Err(CliError::Config("T: temperatures must be non-negative".into()));
        }
        Ok(r.points())
    }

    pub fn has_l_r0_axis(&self) -> bool {
        self.l_r0.is_set()
    }

    pub fn atom_counts(&self, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let n = self.n_atoms.clone().unwrap_or_else(|| default.to_vec());
        if n.is_empty() || n.contains(&0) {
            return Err(CliError::Config("N: need a non-empty list of positive atom counts".into()));
        }
        if !n.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Config("N: list must be strictly ascending".into()));
        }
        Ok(n)
    }

    /// Checks the settings shared by every subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        self.circuit(self.l_j)?;
        if self.atom_dim < 2 {
            return Err(CliError::Config("M: need at least two Fock states".into()));
        }
        if self.phase_points == 0 || !(self.phase_max > 0.0) {
            return Err(CliError::Config("phase grid: need at least one point and a positive phase_max".into()));
        }
        Ok(())
    }
}
