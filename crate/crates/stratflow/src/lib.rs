//! 2D variable-density incompressible Euler flow in a closed stratified tank.
//!
//! The solver integrates the conservative form of the Euler equations for an
//! ideal incompressible fluid in a gravity field: flux-form MUSCL advection
//! of density and momentum on a staggered mesh, a buoyancy source against
//! the hydrostatic background, and a variable-coefficient pressure
//! projection.  Nonsmooth features (overturning isopycnals, breaking
//! internal waves) are admitted by construction; the diagnostics module
//! evaluates the conservation and monotonicity conditions a physically
//! meaningful generalized solution must satisfy — conserved mass and
//! hydrodynamic energy, a non-increasing wave-energy functional, and a
//! non-increasing entropy-like density functional.
//!
//! The [`analytic`] module carries a closed-form rotating vortex in a linear
//! stratification, used as an oracle and to illustrate the vorticity-cascade
//! mechanism behind vortex destruction.
//!
//! See the `examples/` directory for runnable entry points per capability,
//! and the `stratflow` binary for the scenario CLI.

pub mod analytic;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod init;
pub mod output;
pub mod scenario;
pub mod sim;
pub mod solver;
pub mod stratification;
pub mod streamfunction;

pub use error::{Error, Result};
pub use field::{
    apply_wall_bc, discrete_divergence, make_grid, Grid, Placement, ScalarField, State,
    VectorField,
};
pub use scenario::{parse_config, preset, ScenarioConfig, VortexParams, PRESET_NAMES};
pub use sim::{run, run_from_state, run_sweep, RunOutput, Snapshot, SweepOutput, SweepRow};
pub use solver::{cfl_dt, flux::Limiter, project, SolverConfig, Stepper};
pub use stratification::{
    buoyancy_frequency, max_linear_phase_speed, rho0, StratificationProfile, G,
};
