//! Scenario execution: time-stepping driver, snapshot capture, and the
//! multi-scenario sweep.

use crate::diagnostics::{admissibility_report, sample_functionals, AdmissibilityVerdict, DiagnosticsReport, Tolerances};
use crate::error::{Error, Result};
use crate::field::{ScalarField, State};
use crate::init::gaussian_vortex_init;
use crate::scenario::ScenarioConfig;
use crate::solver::Stepper;
use crate::streamfunction::{diagnose_streamfunction, vorticity};
use rayon::prelude::*;

/// One captured flow field with the derived streamfunction and vorticity.
#[derive(Clone)]
pub struct Snapshot {
    pub t: f64,
    pub rho: ScalarField,
    pub u: ScalarField,
    pub w: ScalarField,
    pub p: ScalarField,
    /// Diagnosed streamfunction on grid nodes.
    pub psi: ScalarField,
    /// Vorticity du/dz - dw/dx on grid nodes.
    pub xi: ScalarField,
}

impl std::fmt::Debug for Snapshot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Snapshot(t = {:.6} s)", self.t)
    }
}

impl Snapshot {
    pub fn capture(state: &State, stepper: &mut Stepper) -> Result<Self> {
        let grid = *stepper.grid();
        let xi = vorticity(state, &grid);
        let psi = diagnose_streamfunction(state, &grid, stepper.config())?;
        Ok(Snapshot {
            t: state.t,
            rho: state.rho.clone(),
            u: state.u.clone(),
            w: state.w.clone(),
            p: stepper.total_pressure(state),
            psi,
            xi,
        })
    }
}

/// Everything a finished run produces.
#[derive(Debug)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub report: DiagnosticsReport,
}

/// Integrate a scenario from its initial vortex to `t_end`.
pub fn run(scenario: &ScenarioConfig) -> Result<RunOutput> {
    scenario.validate()?;
    let grid = scenario.grid()?;
    let state = gaussian_vortex_init(&grid, &scenario.profile, &scenario.vortex, &scenario.solver)?;
    let mut stepper = Stepper::new(grid, scenario.profile, scenario.solver)?;
    run_from_state(state, &mut stepper, scenario.t_end, &scenario.snapshot_times, scenario.diag_interval, &scenario.tolerances)
}

/// Integrate an arbitrary initial state.  Snapshot times are hit exactly by
/// clamping the step; diagnostics are sampled every `diag_interval` steps and
/// at the first and last step.
pub fn run_from_state(
    state: State,
    stepper: &mut Stepper,
    t_end: f64,
    snapshot_times: &[f64],
    diag_interval: usize,
    tolerances: &Tolerances,
) -> Result<RunOutput> {
    let diag_interval = diag_interval.max(1);
    let mut targets: Vec<f64> = snapshot_times.to_vec();
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut snapshots = Vec::new();
    let mut samples = Vec::new();
    let mut s = state;

    // abort threshold: a 100x growth of the initial max speed signals blowup
    let v0 = s.max_speed();
    stepper.speed_limit = if v0 > 0.0 { 100.0 * v0 } else { f64::INFINITY };

    let mut next_target = targets.iter().position(|&t| t >= s.t).unwrap_or(targets.len());
    let profile = *stepper.profile();
    let grid = *stepper.grid();

    samples.push(sample_functionals(&s, &grid, &profile));
    while next_target < targets.len() && targets[next_target] <= s.t + 1e-12 {
        snapshots.push(Snapshot::capture(&s, stepper)?);
        next_target += 1;
    }

    let mut step_index = 0usize;
    while s.t < t_end - 1e-12 {
        let mut dt_cap = t_end - s.t;
        if next_target < targets.len() {
            dt_cap = dt_cap.min(targets[next_target] - s.t);
        }
        let (next_state, _info) = match stepper.step(&s, dt_cap) {
            Ok(ok) => ok,
            Err(Error::Blowup { t, reason, .. }) => {
                let last_good = Snapshot::capture(&s, stepper).ok().map(Box::new);
                return Err(Error::Blowup {
                    step: step_index,
                    t,
                    reason,
                    last_good,
                });
            }
            Err(e) => return Err(e),
        };
        s = next_state;
        step_index += 1;

        let at_end = s.t >= t_end - 1e-12;
        if step_index % diag_interval == 0 || at_end {
            samples.push(sample_functionals(&s, &grid, &profile));
        }
        while next_target < targets.len() && s.t >= targets[next_target] - 1e-12 {
            snapshots.push(Snapshot::capture(&s, stepper)?);
            next_target += 1;
        }
    }

    let verdict: AdmissibilityVerdict = admissibility_report(&samples, tolerances)?;
    Ok(RunOutput {
        snapshots,
        report: DiagnosticsReport { samples, verdict },
    })
}

/// One row of the sweep comparison table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub name: String,
    /// Stratification scale; infinity for constant density.
    pub scale: f64,
    pub mixing_fraction_at_probe: f64,
    /// F(0) - F(t_end): total decay of the entropy-like functional.
    pub f_decay: f64,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub runs: Vec<(String, Result<RunOutput>)>,
    /// Comparison rows for the runs that completed, sorted by scale.
    pub table: Vec<SweepRow>,
}

/// Run several scenarios (in parallel) and tabulate mixing and F-decay at
/// `probe_time`.  Individual failures are reported per scenario without
/// aborting the sweep.
pub fn run_sweep(scenarios: &[ScenarioConfig], probe_time: f64) -> SweepOutput {
    let runs: Vec<(String, Result<RunOutput>)> = scenarios
        .par_iter()
        .map(|sc| (sc.name.clone(), run(sc)))
        .collect();

    let mut table = Vec::new();
    for (name, result) in &runs {
        if let Ok(out) = result {
            let scale = scenarios
                .iter()
                .find(|sc| &sc.name == name)
                .and_then(|sc| sc.profile.scale())
                .unwrap_or(f64::INFINITY);
            let samples = &out.report.samples;
            if samples.is_empty() {
                continue;
            }
            let probe = samples
                .iter()
                .min_by(|a, b| {
                    (a.t - probe_time)
                        .abs()
                        .partial_cmp(&(b.t - probe_time).abs())
                        .unwrap()
                })
                .unwrap();
            table.push(SweepRow {
                name: name.clone(),
                scale,
                mixing_fraction_at_probe: probe.mixing_fraction,
                f_decay: samples[0].f - samples[samples.len() - 1].f,
            });
        }
    }
    table.sort_by(|a, b| a.scale.partial_cmp(&b.scale).unwrap());
    SweepOutput { runs, table }
}
