//! Run configuration: TOML sections with built-in defaults and `--set`
//! overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Scenarios the runner knows.
pub const SCENARIOS: [&str; 8] = [
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "semiclassical-table",
    "shift-table",
    "scaling-check",
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Physics {
    /// Amplitude decay rate γ.
    pub gamma: f64,
    /// Packet wavenumber width κ.
    pub kappa: f64,
    /// |Λ|: the hit packet starts at −|Λ|, the missing one at +|Λ|.
    pub displacement: f64,
    /// Quantization length L.
    pub length: f64,
    /// Number of box modes N (odd).
    pub n_modes: usize,
}

impl Default for Physics {
    fn default() -> Self {
        Self {
            gamma: 0.0125,
            kappa: 0.25,
            displacement: 20.0,
            length: 251.32,
            n_modes: 159,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// k domain is [−k_max, k_max].
    pub k_max: f64,
    pub rel_tol: f64,
    pub t_end: f64,
    pub n_times: usize,
    pub mode_t_end: f64,
    pub mode_n_times: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Half-width of the uniform core around ω = 1, in units of γ.
    pub omega_core_halfwidth: f64,
    /// Core step, in units of γ.
    pub omega_core_step: f64,
    /// Step growth factor outside the core.
    pub omega_growth: f64,
    /// Arrival times for the first-order shift scan.
    pub arrivals: Vec<f64>,
    /// Relative tolerance of the outer first-order integral.
    pub first_order_rel_tol: f64,
    /// Evaluate every first-order kernel variant at the first arrival time.
    pub first_order_variants: bool,
    /// Box lengths for the scaling check, in units of `physics.length`.
    pub length_multiples: Vec<f64>,
    /// Time at which the scaling check is evaluated.
    pub scaling_time: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            k_max: 4.0,
            rel_tol: 1e-10,
            t_end: 400.0,
            n_times: 4001,
            mode_t_end: 200.0,
            mode_n_times: 2001,
            omega_min: 0.05,
            omega_max: 3.0,
            omega_core_halfwidth: 30.0,
            omega_core_step: 0.1,
            omega_growth: 1.02,
            arrivals: (2..=13).map(|i| 10.0 * i as f64).collect(),
            first_order_rel_tol: 1e-6,
            first_order_variants: false,
            length_multiples: vec![1.0, 2.0, 4.0, 8.0],
            scaling_time: 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Cgs {
    /// Transition frequency, s⁻¹.
    pub omega0: f64,
    /// Dipole matrix element, statC·cm.
    pub dipole: f64,
    /// Pulse duration, s.
    pub tau: f64,
    /// Pulse section, cm².
    pub area: f64,
}

impl Default for Cgs {
    fn default() -> Self {
        Self {
            omega0: 3.54e15,
            dipole: 2.42e-18,
            tau: 1e-9,
            area: 5e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub dir: PathBuf,
    pub svg: bool,
}

impl Default for Output {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub physics: Physics,
    pub numerics: Numerics,
    pub cgs: Cgs,
    pub output: Output,
}

/// Configuration problem, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl RunConfig {
    /// Parses `text` (possibly empty) and applies `key=value` overrides, where
    /// the key is `section.field` and the value is TOML (bare words are taken
    /// as strings).
    pub fn from_toml(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError(format!("config: {e}")))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml(&text, overrides).map_err(|e| match path {
            Some(p) => ConfigError(format!("{}: {}", p.display(), e.0)),
            None => e,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.physics;
        let n = &self.numerics;
        let positive = [
            ("physics.gamma", p.gamma),
            ("physics.kappa", p.kappa),
            ("physics.length", p.length),
            ("numerics.k_max", n.k_max),
            ("numerics.rel_tol", n.rel_tol),
            ("numerics.t_end", n.t_end),
            ("numerics.mode_t_end", n.mode_t_end),
            ("numerics.omega_min", n.omega_min),
            ("numerics.omega_core_halfwidth", n.omega_core_halfwidth),
            ("numerics.omega_core_step", n.omega_core_step),
            ("numerics.first_order_rel_tol", n.first_order_rel_tol),
            ("numerics.scaling_time", n.scaling_time),
            ("cgs.omega0", self.cgs.omega0),
            ("cgs.dipole", self.cgs.dipole),
            ("cgs.tau", self.cgs.tau),
            ("cgs.area", self.cgs.area),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError(format!("{name} must be positive, got {v}")));
            }
        }
        if !(p.displacement >= 0.0 && p.displacement.is_finite()) {
            return Err(ConfigError(format!(
                "physics.displacement must be >= 0, got {}",
                p.displacement
            )));
        }
        if p.n_modes % 2 == 0 {
            return Err(ConfigError(format!("physics.n_modes must be odd, got {}", p.n_modes)));
        }
        if n.n_times < 3 || n.mode_n_times < 3 {
            return Err(ConfigError("numerics.n_times and mode_n_times must be >= 3".into()));
        }
        if !(n.omega_max > n.omega_min) {
            return Err(ConfigError("numerics.omega_max must exceed omega_min".into()));
        }
        if !(n.omega_growth >= 1.0) {
            return Err(ConfigError("numerics.omega_growth must be >= 1".into()));
        }
        if n.arrivals.is_empty() || n.arrivals.iter().any(|t| !(*t >= 0.0)) {
            return Err(ConfigError("numerics.arrivals must be a non-empty list of times >= 0".into()));
        }
        if n.length_multiples.is_empty() || n.length_multiples.iter().any(|m| !(*m > 0.0)) {
            return Err(ConfigError("numerics.length_multiples must be positive".into()));
        }
        Ok(())
    }
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<(), ConfigError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("--set {item}: expected key=value")))?;
    let (section, field) = key
        .trim()
        .split_once('.')
        .ok_or_else(|| ConfigError(format!("--set {item}: key must be section.field")))?;
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(sec) = entry else {
        return Err(ConfigError(format!("--set {item}: `{section}` is not a section")));
    };
    sec.insert(field.to_string(), value);
    Ok(())
}
