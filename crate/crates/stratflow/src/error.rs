use crate::sim::Snapshot;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("resolution error: spacing {h} m leaves fewer than 4 cells in a {width} m x {height} m domain")]
    Resolution { width: f64, height: f64, h: f64 },

    #[error("z = {z} m lies outside the domain [0, {height}] m")]
    OutOfDomain { z: f64, height: f64 },

    #[error("density must be strictly positive (min found: {min} kg/m^3)")]
    NonPositiveDensity { min: f64 },

    #[error("Poisson right-hand side violates Neumann solvability: |mean| = {mean:.3e} exceeds {tol:.3e}")]
    PoissonIncompatible { mean: f64, tol: f64 },

    #[error("Poisson solver stalled: relative residual {residual:.3e} after {iters} iterations (target {tol:.3e})")]
    PoissonNoConvergence { residual: f64, iters: usize, tol: f64 },

    #[error("numeric blowup at step {step}, t = {t:.6} s: {reason}")]
    Blowup {
        step: usize,
        t: f64,
        reason: String,
        /// Last state that passed the sanity checks, kept for post-mortem inspection.
        last_good: Option<Box<Snapshot>>,
    },

    #[error("invalid diagnostics series: {0}")]
    InvalidSeries(String),

    #[error("unknown preset '{name}'; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
