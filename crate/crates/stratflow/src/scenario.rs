//! Scenario configuration: domain, background, initial vortex, schedule.
//!
//! The presets reproduce the published tank runs: a 1 m x 0.25 m rectangle
//! (wide enough to center the vortex; a 0.5 m tank variant is also provided),
//! exponential stratification with scale H = 6.23 m and its halved, doubled,
//! and nearly-homogeneous (H = 311.5 m) variants, a strictly constant-density
//! case, and a coarse-grid twin of the reference run.

use crate::diagnostics::Tolerances;
use crate::error::{Error, Result};
use crate::field::{make_grid, Grid};
use crate::solver::SolverConfig;
use crate::stratification::StratificationProfile;
use std::path::PathBuf;

/// Parameters of the initial Gaussian streamfunction vortex
/// psi = A exp(-((x-x0)/lx)^2 - ((z-z0)/lz)^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexParams {
    /// Peak streamfunction, m^2/s (negative: clockwise).
    pub a: f64,
    pub lx: f64,
    pub lz: f64,
    pub x0: f64,
    pub z0: f64,
}

impl VortexParams {
    /// The oscillating-paddle disturbance of the tank experiments.
    pub fn paddle() -> Self {
        VortexParams {
            a: -0.0095,
            lx: 0.16,
            lz: 0.052,
            x0: 0.5,
            z0: 0.125,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub width: f64,
    pub height: f64,
    pub h: f64,
    pub profile: StratificationProfile,
    pub vortex: VortexParams,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    /// Diagnostics are sampled every this many steps.
    pub diag_interval: usize,
    pub solver: SolverConfig,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<Grid> {
        make_grid(self.width, self.height, self.h)
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        self.grid()?;
        if self.t_end < 0.0 {
            return Err(Error::Config(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        for &t in &self.snapshot_times {
            if !(0.0..=self.t_end).contains(&t) {
                return Err(Error::Config(format!(
                    "snapshot time {t} s outside [0, {}]",
                    self.t_end
                )));
            }
        }
        let v = &self.vortex;
        if !(v.x0 > 0.0 && v.x0 < self.width && v.z0 > 0.0 && v.z0 < self.height) {
            return Err(Error::Config(format!(
                "vortex center ({}, {}) must lie strictly inside the domain",
                v.x0, v.z0
            )));
        }
        if self.diag_interval == 0 {
            return Err(Error::Config("diag_interval must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_scale(mut self, scale_h: f64) -> Self {
        let rho00 = self.profile.rho_bottom();
        self.profile = StratificationProfile::Exponential { rho00, scale_h };
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.snapshot_times.retain(|&t| t <= t_end);
        self.t_end = t_end;
        self
    }

    pub fn with_snapshots(mut self, times: &[f64]) -> Self {
        self.snapshot_times = times.to_vec();
        self
    }

    pub fn with_output_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output_dir = dir.into();
        self
    }

    pub fn with_diag_interval(mut self, every: usize) -> Self {
        self.diag_interval = every;
        self
    }
}

pub const PRESET_NAMES: [&str; 7] = [
    "baseline",
    "coarse",
    "H-half",
    "H-double",
    "H-huge",
    "homogeneous",
    "tank-50cm",
];

/// Build a named preset.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let base = ScenarioConfig {
        name: name.to_string(),
        width: 1.0,
        height: 0.25,
        h: 0.0025,
        profile: StratificationProfile::exponential(1000.0, 6.23)?,
        vortex: VortexParams::paddle(),
        t_end: 14.0,
        snapshot_times: vec![3.0, 7.0, 8.0, 9.0, 14.0],
        diag_interval: 10,
        solver: SolverConfig::default(),
        tolerances: Tolerances::default(),
        output_dir: PathBuf::from("out"),
    };
    Ok(match name {
        "baseline" => base,
        "coarse" => ScenarioConfig {
            h: 0.005,
            t_end: 8.0,
            snapshot_times: vec![3.0, 7.0, 8.0],
            ..base
        },
        "H-half" => ScenarioConfig {
            profile: StratificationProfile::exponential(1000.0, 3.1)?,
            t_end: 7.0,
            snapshot_times: vec![3.0, 7.0],
            ..base
        },
        "H-double" => ScenarioConfig {
            profile: StratificationProfile::exponential(1000.0, 12.4)?,
            t_end: 7.0,
            snapshot_times: vec![3.0, 7.0],
            ..base
        },
        "H-huge" => ScenarioConfig {
            profile: StratificationProfile::exponential(1000.0, 311.5)?,
            t_end: 7.0,
            snapshot_times: vec![3.0, 6.0, 7.0],
            ..base
        },
        "homogeneous" => ScenarioConfig {
            profile: StratificationProfile::constant(1000.0)?,
            t_end: 7.0,
            snapshot_times: vec![3.0, 7.0],
            ..base
        },
        "tank-50cm" => ScenarioConfig {
            width: 0.5,
            vortex: VortexParams {
                x0: 0.25,
                ..VortexParams::paddle()
            },
            t_end: 8.0,
            snapshot_times: vec![3.0, 7.0, 8.0],
            ..base
        },
        _ => {
            return Err(Error::UnknownPreset {
                name: name.to_string(),
                valid: PRESET_NAMES.join(", "),
            })
        }
    })
}

/// Parse a plain `key=value` configuration text.  Keys mirror the
/// configuration fields (`grid.h`, `profile.kind`, `vortex.a`, `t_end`,
/// `snapshot_times`, `solver.courant`, ...).  Unknown keys are rejected.
/// Lines starting with `#` and blank lines are ignored.  When a `preset` key
/// is present it seeds the configuration and the remaining keys override it.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected key=value, got '{line}'", lineno + 1))
        })?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }

    let mut config = match pairs.iter().find(|(k, _)| k == "preset") {
        Some((_, name)) => preset(name)?,
        None => preset("baseline")?,
    };

    // the profile may be assembled from several keys; collect them first
    let mut profile_kind: Option<String> = None;
    let mut rho00 = config.profile.rho_bottom();
    let mut scale_h = config.profile.scale().unwrap_or(6.23);
    let mut gradient_a = 50.0;

    let parse_f64 = |key: &str, v: &str| -> Result<f64> {
        v.parse::<f64>()
            .map_err(|_| Error::Parse(format!("{key}: expected a number, got '{v}'")))
    };

    for (key, value) in &pairs {
        match key.as_str() {
            "preset" => {}
            "name" => config.name = value.clone(),
            "grid.width" => config.width = parse_f64(key, value)?,
            "grid.height" => config.height = parse_f64(key, value)?,
            "grid.h" => config.h = parse_f64(key, value)?,
            "profile.kind" => profile_kind = Some(value.clone()),
            "profile.rho00" => rho00 = parse_f64(key, value)?,
            "profile.H" => scale_h = parse_f64(key, value)?,
            "profile.a" => gradient_a = parse_f64(key, value)?,
            "vortex.a" => config.vortex.a = parse_f64(key, value)?,
            "vortex.lx" => config.vortex.lx = parse_f64(key, value)?,
            "vortex.lz" => config.vortex.lz = parse_f64(key, value)?,
            "vortex.x0" => config.vortex.x0 = parse_f64(key, value)?,
            "vortex.z0" => config.vortex.z0 = parse_f64(key, value)?,
            "t_end" => config.t_end = parse_f64(key, value)?,
            "snapshot_times" => {
                config.snapshot_times = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_f64(key, s.trim()))
                    .collect::<Result<Vec<f64>>>()?;
            }
            "diag_interval" => {
                config.diag_interval = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("{key}: expected an integer, got '{value}'")))?;
            }
            "solver.courant" => config.solver.courant = parse_f64(key, value)?,
            "solver.div_tol" => config.solver.div_tol = parse_f64(key, value)?,
            "solver.poisson_tol" => config.solver.poisson_tol = parse_f64(key, value)?,
            "solver.poisson_max_iter" => {
                config.solver.poisson_max_iter = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("{key}: expected an integer, got '{value}'")))?;
            }
            "solver.limiter" => {
                config.solver.limiter = match value.as_str() {
                    "minmod" => crate::solver::flux::Limiter::Minmod,
                    "none" => crate::solver::flux::Limiter::None,
                    other => {
                        return Err(Error::Parse(format!(
                            "solver.limiter: expected minmod or none, got '{other}'"
                        )))
                    }
                };
            }
            "solver.dt_max" => config.solver.dt_max = parse_f64(key, value)?,
            "output_dir" => config.output_dir = PathBuf::from(value),
            other => return Err(Error::Parse(format!("unknown key '{other}'"))),
        }
    }

    if let Some(kind) = profile_kind {
        config.profile = match kind.as_str() {
            "exponential" => StratificationProfile::exponential(rho00, scale_h)?,
            "linear" => StratificationProfile::linear(rho00, gradient_a, config.height)?,
            "constant" => StratificationProfile::constant(rho00)?,
            other => {
                return Err(Error::Parse(format!(
                    "profile.kind: expected exponential, linear or constant, got '{other}'"
                )))
            }
        };
    } else if pairs.iter().any(|(k, _)| k == "profile.H") {
        config.profile = StratificationProfile::exponential(rho00, scale_h)?;
    }

    config.validate()?;
    Ok(config)
}
