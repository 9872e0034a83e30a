//! Integral functionals of the flow and the admissibility verdicts that
//! separate physically meaningful weak solutions from spurious ones.
//!
//! For the exponential background rho0(z) = rho0(0) exp(-z/H) the wave energy
//! functional
//!
//!   H_nonl = integral[ rho (u^2+w^2)/2 + rho g z
//!                      + g H (rho ln(rho/rho0(0)) + (rho0(z) - rho)) ]
//!
//! has a non-negative integrand, vanishes exactly on the undisturbed rest
//! state, is conserved on smooth solutions, and may only decrease across
//! density discontinuities.  The entropy-like functional
//! F = integral rho ln(rho/rho0(0)) must likewise be non-increasing.  A run
//! is admissible when mass and hydrodynamic energy are conserved and both
//! monotonicity conditions hold.
//!
//! All quadrature is the midpoint rule (cell sums times h^2), matching the
//! finite-volume cell averages; velocities are averaged from faces to cell
//! centers.

use crate::error::{Error, Result};
use crate::field::{kahan_sum, Grid, State};
use crate::stratification::{StratificationProfile, G};

/// All functionals evaluated on one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSample {
    pub t: f64,
    /// Total mass per unit depth, kg/m.
    pub mass: f64,
    /// Hydrodynamic energy: integral of rho((u^2+w^2)/2 + g z), J/m.
    pub hydro_energy: f64,
    /// Nonlinear wave energy, J/m.
    pub h_nonl: f64,
    /// Quadratic wave energy of the linearized theory, J/m.
    pub h_lin: f64,
    /// Linearized hydrodynamic energy, J/m.
    pub e_lin: f64,
    /// Entropy-like functional integral rho ln(rho/rho0(0)), kg/m.
    pub f: f64,
    /// Fraction of vertically adjacent cell pairs that are unstably ordered.
    pub mixing_fraction: f64,
}

/// Total mass per unit depth: sum of rho h^2.
pub fn mass(state: &State, grid: &Grid) -> f64 {
    let h2 = grid.h * grid.h;
    kahan_sum(state.rho.values().iter().map(|r| r * h2))
}

/// Hydrodynamic energy: sum of rho ((u^2 + w^2)/2 + g z) h^2 with velocities
/// averaged to cell centers.
pub fn hydro_energy(state: &State, grid: &Grid) -> f64 {
    let h2 = grid.h * grid.h;
    kahan_sum((0..grid.nz).flat_map(|k| {
        let z = grid.zc(k);
        (0..grid.nx).map(move |i| (k, i, z))
    }).map(|(k, i, z)| {
        let (uc, wc) = state.center_velocity(i, k);
        state.rho.at(i, k) * (0.5 * (uc * uc + wc * wc) + G * z) * h2
    }))
}

/// Kinetic part of the hydrodynamic energy (used as the scale for the energy
/// conservation verdict).
pub fn kinetic_energy(state: &State, grid: &Grid) -> f64 {
    let h2 = grid.h * grid.h;
    kahan_sum((0..grid.nz).flat_map(|k| (0..grid.nx).map(move |i| (k, i))).map(|(k, i)| {
        let (uc, wc) = state.center_velocity(i, k);
        0.5 * state.rho.at(i, k) * (uc * uc + wc * wc) * h2
    }))
}

/// Per-cell integrand of the nonlinear wave energy functional.
#[inline]
pub fn wave_energy_integrand(rho: f64, z: f64, uc: f64, wc: f64, rho00: f64, scale_h: f64, rho0_z: f64) -> f64 {
    0.5 * rho * (uc * uc + wc * wc)
        + rho * G * z
        + G * scale_h * (rho * (rho / rho00).ln() + (rho0_z - rho))
}

/// Nonlinear wave energy for an exponential background.  Errors if the
/// profile is not exponential or the density is not strictly positive.
pub fn wave_energy_nonlinear(
    state: &State,
    grid: &Grid,
    profile: &StratificationProfile,
) -> Result<f64> {
    let scale_h = profile.scale().ok_or_else(|| {
        Error::Config("nonlinear wave energy requires an exponential background".into())
    })?;
    let rho_min = state.rho.min();
    if rho_min <= 0.0 {
        return Err(Error::NonPositiveDensity { min: rho_min });
    }
    let rho00 = profile.rho_bottom();
    let h2 = grid.h * grid.h;
    Ok(kahan_sum(
        (0..grid.nz).flat_map(|k| (0..grid.nx).map(move |i| (k, i))).map(|(k, i)| {
            let z = grid.zc(k);
            let (uc, wc) = state.center_velocity(i, k);
            wave_energy_integrand(
                state.rho.at(i, k),
                z,
                uc,
                wc,
                rho00,
                scale_h,
                profile.rho0_unchecked(z),
            ) * h2
        }),
    ))
}

/// Degenerate stand-in used for non-exponential backgrounds in the time
/// series: kinetic plus potential energy (the logarithmic terms vanish for a
/// constant profile).
fn wave_energy_degenerate(state: &State, grid: &Grid) -> f64 {
    hydro_energy(state, grid)
}

/// Effective stratification scale g/N^2 of the linear theory, if defined.
fn linear_scale(profile: &StratificationProfile) -> Option<f64> {
    match *profile {
        StratificationProfile::Exponential { scale_h, .. } => Some(scale_h),
        StratificationProfile::Linear { rho00, a } => Some(rho00 / a),
        StratificationProfile::Constant { .. } => None,
    }
}

/// Quadratic wave energy of the linearized equations,
/// (1/2) sum rho0 [ (u^2 + w^2) + g H phi^2 ] h^2 with rho = rho0 (1 + phi).
pub fn wave_energy_linear(state: &State, grid: &Grid, profile: &StratificationProfile) -> f64 {
    let h2 = grid.h * grid.h;
    let gh = linear_scale(profile).map(|s| G * s);
    kahan_sum((0..grid.nz).flat_map(|k| (0..grid.nx).map(move |i| (k, i))).map(|(k, i)| {
        let rho0 = profile.rho0_unchecked(grid.zc(k));
        let (uc, wc) = state.center_velocity(i, k);
        let kinetic = uc * uc + wc * wc;
        let potential = match gh {
            Some(gh) => {
                let phi = state.rho.at(i, k) / rho0 - 1.0;
                gh * phi * phi
            }
            None => 0.0,
        };
        0.5 * rho0 * (kinetic + potential) * h2
    }))
}

/// Linearized hydrodynamic energy, sum rho0 [ (u^2+w^2)/2 + g z phi ] h^2.
pub fn hydro_energy_linear(state: &State, grid: &Grid, profile: &StratificationProfile) -> f64 {
    let h2 = grid.h * grid.h;
    kahan_sum((0..grid.nz).flat_map(|k| (0..grid.nx).map(move |i| (k, i))).map(|(k, i)| {
        let z = grid.zc(k);
        let rho0 = profile.rho0_unchecked(z);
        let (uc, wc) = state.center_velocity(i, k);
        let phi = state.rho.at(i, k) / rho0 - 1.0;
        rho0 * (0.5 * (uc * uc + wc * wc) + G * z * phi) * h2
    }))
}

/// Entropy-like functional: sum rho ln(rho / rho_max) h^2, where rho_max is
/// the background density at the bottom.  Non-positive whenever rho never
/// exceeds rho_max.
pub fn f_functional(state: &State, grid: &Grid, rho_max: f64) -> Result<f64> {
    let rho_min = state.rho.min();
    if rho_min <= 0.0 {
        return Err(Error::NonPositiveDensity { min: rho_min });
    }
    let h2 = grid.h * grid.h;
    Ok(kahan_sum(
        state
            .rho
            .values()
            .iter()
            .map(|&r| r * (r / rho_max).ln() * h2),
    ))
}

/// Fraction of vertically adjacent cell pairs with heavier fluid on top
/// (d rho / dz > 0), the breaking-intensity metric.
pub fn mixing_fraction(state: &State, grid: &Grid) -> f64 {
    if grid.nz < 2 {
        return 0.0;
    }
    let mut unstable = 0usize;
    for k in 0..grid.nz - 1 {
        for i in 0..grid.nx {
            if state.rho.at(i, k + 1) > state.rho.at(i, k) {
                unstable += 1;
            }
        }
    }
    unstable as f64 / (grid.nx * (grid.nz - 1)) as f64
}

/// Evaluate every functional on one state.
pub fn sample_functionals(
    state: &State,
    grid: &Grid,
    profile: &StratificationProfile,
) -> FunctionalSample {
    let h_nonl = match wave_energy_nonlinear(state, grid, profile) {
        Ok(v) => v,
        Err(_) => wave_energy_degenerate(state, grid),
    };
    FunctionalSample {
        t: state.t,
        mass: mass(state, grid),
        hydro_energy: hydro_energy(state, grid),
        h_nonl,
        h_lin: wave_energy_linear(state, grid, profile),
        e_lin: hydro_energy_linear(state, grid, profile),
        f: f_functional(state, grid, profile.rho_bottom()).unwrap_or(f64::NAN),
        mixing_fraction: mixing_fraction(state, grid),
    }
}

/// Relative tolerances of the admissibility verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Energy drift bound, relative to the initial kinetic energy.
    pub energy: f64,
    /// Per-comparison slack of the F monotonicity check, relative to |F(0)|.
    pub f_rel: f64,
    /// Per-comparison slack of the H_nonl check, relative to max H_nonl.
    pub h_rel: f64,
    /// Mass drift bound, relative to the initial mass.
    pub mass_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            energy: 0.02,
            f_rel: 1e-8,
            h_rel: 1e-6,
            mass_rel: 1e-11,
        }
    }
}

/// One conservation check: worst drift against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCheck {
    pub pass: bool,
    pub max_drift: f64,
    pub bound: f64,
}

/// One monotonicity check: worst increase between any ordered sample pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneCheck {
    pub pass: bool,
    pub max_violation: f64,
    pub bound: f64,
    /// Sample index where the worst violation ends, if any increase was seen.
    pub violation_index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityVerdict {
    pub energy_conserved: DriftCheck,
    pub f_monotone: MonotoneCheck,
    pub h_nonl_monotone: MonotoneCheck,
    pub mass_conserved: DriftCheck,
}

impl AdmissibilityVerdict {
    pub fn all_pass(&self) -> bool {
        self.energy_conserved.pass
            && self.f_monotone.pass
            && self.h_nonl_monotone.pass
            && self.mass_conserved.pass
    }
}

/// A completed run: the functional time series plus its verdict.
#[derive(Debug)]
pub struct DiagnosticsReport {
    pub samples: Vec<FunctionalSample>,
    pub verdict: AdmissibilityVerdict,
}

fn monotone_non_increasing(values: &[f64], bound: f64) -> MonotoneCheck {
    // non-increasing means every later value stays below every earlier one;
    // tracking the running minimum checks all ordered pairs in one pass
    let mut run_min = f64::INFINITY;
    let mut worst = 0.0f64;
    let mut worst_idx = None;
    for (idx, &v) in values.iter().enumerate() {
        let rise = v - run_min;
        if rise > worst {
            worst = rise;
            worst_idx = Some(idx);
        }
        run_min = run_min.min(v);
    }
    MonotoneCheck {
        pass: worst <= bound,
        max_violation: worst,
        bound,
        violation_index: if worst > 0.0 { worst_idx } else { None },
    }
}

/// Evaluate the admissibility of a functional time series.
pub fn admissibility_report(
    series: &[FunctionalSample],
    tol: &Tolerances,
) -> Result<AdmissibilityVerdict> {
    if series.is_empty() {
        return Err(Error::InvalidSeries("empty series".into()));
    }
    for pair in series.windows(2) {
        if pair[1].t <= pair[0].t {
            return Err(Error::InvalidSeries(format!(
                "sample times must increase strictly (t = {} then {})",
                pair[0].t, pair[1].t
            )));
        }
    }

    let first = &series[0];

    let mass_bound = tol.mass_rel * first.mass.abs();
    let max_mass_drift = series
        .iter()
        .map(|s| (s.mass - first.mass).abs())
        .fold(0.0, f64::max);

    // kinetic scale: h_lin at t = 0 equals the kinetic energy whenever the
    // initial density is unperturbed (its potential term carries phi^2);
    // fall back to an absolute scale of 1 for runs that start at rest
    let ke0 = first.h_lin;
    let energy_scale = if ke0 > 0.0 { ke0 } else { 1.0 };
    let energy_bound = tol.energy * energy_scale;
    let max_energy_drift = series
        .iter()
        .map(|s| (s.hydro_energy - first.hydro_energy).abs())
        .fold(0.0, f64::max);

    let f_values: Vec<f64> = series.iter().map(|s| s.f).collect();
    let f_bound = tol.f_rel * first.f.abs().max(1e-300);
    let h_values: Vec<f64> = series.iter().map(|s| s.h_nonl).collect();
    let h_max = h_values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let h_bound = tol.h_rel * h_max.max(1e-300);

    Ok(AdmissibilityVerdict {
        energy_conserved: DriftCheck {
            pass: max_energy_drift <= energy_bound,
            max_drift: max_energy_drift,
            bound: energy_bound,
        },
        f_monotone: monotone_non_increasing(&f_values, f_bound),
        h_nonl_monotone: monotone_non_increasing(&h_values, h_bound),
        mass_conserved: DriftCheck {
            pass: max_mass_drift <= mass_bound,
            max_drift: max_mass_drift,
            bound: mass_bound,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_grid, Placement, ScalarField};
    use approx::assert_relative_eq;

    fn grid_1x025(h: f64) -> Grid {
        make_grid(1.0, 0.25, h).unwrap()
    }

    fn exp_profile() -> StratificationProfile {
        StratificationProfile::exponential(1000.0, 6.23).unwrap()
    }

    fn rest_state(grid: &Grid, profile: &StratificationProfile) -> State {
        State::at_rest(
            grid,
            ScalarField::from_fn(grid, Placement::Center, |_, k| {
                profile.rho0_unchecked(grid.zc(k))
            }),
        )
    }

    #[test]
    fn mass_of_uniform_density() {
        let grid = grid_1x025(0.0125);
        let state = State::at_rest(
            &grid,
            ScalarField::from_fn(&grid, Placement::Center, |_, _| 1000.0),
        );
        assert_relative_eq!(mass(&state, &grid), 250.0, max_relative = 1e-13);
    }

    #[test]
    fn mass_of_exponential_profile_matches_closed_form() {
        let grid = grid_1x025(0.0025);
        let state = rest_state(&grid, &exp_profile());
        // 1000 * H * (1 - exp(-0.25/H)) * 1.0, H = 6.23
        assert_relative_eq!(mass(&state, &grid), 245.0503762841202, max_relative = 1e-7);
    }

    #[test]
    fn hydro_energy_at_rest_matches_closed_form() {
        let grid = grid_1x025(0.0025);
        let profile = exp_profile();
        let state = rest_state(&grid, &profile);
        // g * 1000 * (H^2 (1 - e^{-D/H}) - H D e^{-D/H}), high-precision value
        // midpoint quadrature of the closed form is O(h^2) accurate
        assert_relative_eq!(
            hydro_energy(&state, &grid),
            298.48335992997995,
            max_relative = 2e-6
        );
        assert_eq!(kinetic_energy(&state, &grid), 0.0);
    }

    #[test]
    fn hydro_energy_uniform_moving() {
        let grid = grid_1x025(0.0125);
        let mut state = State::at_rest(
            &grid,
            ScalarField::from_fn(&grid, Placement::Center, |_, _| 1000.0),
        );
        for v in state.u.values_mut() {
            *v = 0.3;
        }
        // rho v^2/2 * area + rho g area D/2
        let expected = 1000.0 * 0.045 * 0.25 + 1000.0 * G * 0.25 * 0.125;
        assert_relative_eq!(hydro_energy(&state, &grid), expected, max_relative = 1e-9);
    }

    #[test]
    fn wave_energy_zero_at_rest() {
        let grid = grid_1x025(0.005);
        let profile = exp_profile();
        let state = rest_state(&grid, &profile);
        let h = wave_energy_nonlinear(&state, &grid, &profile).unwrap();
        assert!(h.abs() < 1e-8, "H_nonl at rest = {h}");
        assert_eq!(wave_energy_linear(&state, &grid, &profile), 0.0);
        assert_eq!(hydro_energy_linear(&state, &grid, &profile), 0.0);
    }

    #[test]
    fn wave_energy_matches_linear_limit() {
        let grid = grid_1x025(0.005);
        let profile = exp_profile();
        let mut state = rest_state(&grid, &profile);
        let eta = 1e-3;
        for v in state.rho.values_mut() {
            *v *= 1.0 + eta;
        }
        let h_nonl = wave_energy_nonlinear(&state, &grid, &profile).unwrap();
        let h_lin = wave_energy_linear(&state, &grid, &profile);
        assert!(h_nonl > 0.0);
        assert_relative_eq!(h_nonl, h_lin, max_relative = 2e-3);
        // closed form of the linear functional for uniform phi
        let sum_rho0 = mass(&rest_state(&grid, &profile), &grid);
        assert_relative_eq!(
            h_lin,
            0.5 * G * 6.23 * eta * eta * sum_rho0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn wave_energy_positive_when_perturbed() {
        let grid = grid_1x025(0.0125);
        let profile = exp_profile();
        let mut state = rest_state(&grid, &profile);
        state.u.set(3, 5, 0.01);
        let h = wave_energy_nonlinear(&state, &grid, &profile).unwrap();
        assert!(h > 0.0);
    }

    #[test]
    fn wave_energy_rejects_nonpositive_density() {
        let grid = grid_1x025(0.0125);
        let profile = exp_profile();
        let mut state = rest_state(&grid, &profile);
        state.rho.set(0, 0, -1.0);
        assert!(wave_energy_nonlinear(&state, &grid, &profile).is_err());
    }

    #[test]
    fn f_functional_values() {
        let grid = grid_1x025(0.0025);
        let profile = exp_profile();
        // rho == rho_max everywhere: ln(1) = 0
        let state = State::at_rest(
            &grid,
            ScalarField::from_fn(&grid, Placement::Center, |_, _| 1000.0),
        );
        assert_eq!(f_functional(&state, &grid, 1000.0).unwrap(), 0.0);
        // exponential rest profile: -(1/H) * integral rho0 z dz
        let state = rest_state(&grid, &profile);
        assert_relative_eq!(
            f_functional(&state, &grid, 1000.0).unwrap(),
            -4.883858478507042,
            max_relative = 2e-6
        );
    }

    #[test]
    fn f_functional_nonpositive_below_max() {
        let grid = grid_1x025(0.0125);
        let profile = exp_profile();
        let state = rest_state(&grid, &profile);
        let f = f_functional(&state, &grid, profile.rho_bottom()).unwrap();
        assert!(f <= 0.0);
    }

    #[test]
    fn wave_energy_decomposes_into_parts() {
        // H_nonl = hydro + g H (F + sum(rho0 - rho) h^2), term by term
        let grid = grid_1x025(0.005);
        let profile = exp_profile();
        let mut state = rest_state(&grid, &profile);
        // disturb both fields
        for (n, v) in state.rho.values_mut().iter_mut().enumerate() {
            *v *= 1.0 + 1e-3 * ((n % 17) as f64 / 17.0 - 0.3);
        }
        for v in state.u.values_mut() {
            *v = 0.05;
        }
        let scale_h = 6.23;
        let h_nonl = wave_energy_nonlinear(&state, &grid, &profile).unwrap();
        let hydro = hydro_energy(&state, &grid);
        let f = f_functional(&state, &grid, profile.rho_bottom()).unwrap();
        let h2 = grid.h * grid.h;
        let defect = kahan_sum((0..grid.nz).flat_map(|k| (0..grid.nx).map(move |i| (k, i))).map(
            |(k, i)| (profile.rho0_unchecked(grid.zc(k)) - state.rho.at(i, k)) * h2,
        ));
        let recomposed = hydro + G * scale_h * (f + defect);
        let scale = hydro.abs() + G * scale_h * (f.abs() + defect.abs());
        assert!(
            (h_nonl - recomposed).abs() <= 1e-12 * scale,
            "identity defect {} vs scale {scale}",
            (h_nonl - recomposed).abs()
        );
    }

    #[test]
    fn mixing_fraction_counts_inversions() {
        let grid = make_grid(1.0, 0.25, 0.025).unwrap(); // 40 x 10 cells
        let profile = exp_profile();
        let state = rest_state(&grid, &profile);
        assert_eq!(mixing_fraction(&state, &grid), 0.0);

        // invert exactly 10% of the vertical pairs: 40*9 = 360 pairs, 36 pairs
        let mut state = rest_state(&grid, &profile);
        for n in 0..36 {
            let i = n % grid.nx;
            let k = (n / grid.nx) * 3; // spread out, no overlaps
            let lower = state.rho.at(i, k);
            let upper = state.rho.at(i, k + 1);
            state.rho.set(i, k, upper);
            state.rho.set(i, k + 1, lower + 1.0);
        }
        let frac = mixing_fraction(&state, &grid);
        assert_relative_eq!(frac, 0.10, max_relative = 1e-12);
    }

    #[test]
    fn admissibility_constant_series_passes() {
        let s = FunctionalSample {
            t: 0.0,
            mass: 245.0,
            hydro_energy: 298.0,
            h_nonl: 0.3,
            h_lin: 0.3,
            e_lin: 0.1,
            f: -4.88,
            mixing_fraction: 0.0,
        };
        let series: Vec<_> = (0..5)
            .map(|n| FunctionalSample {
                t: n as f64,
                ..s
            })
            .collect();
        let verdict = admissibility_report(&series, &Tolerances::default()).unwrap();
        assert!(verdict.all_pass());
    }

    #[test]
    fn admissibility_flags_f_increase() {
        let mut series: Vec<FunctionalSample> = (0..5)
            .map(|n| FunctionalSample {
                t: n as f64,
                mass: 245.0,
                hydro_energy: 298.0,
                h_nonl: 0.3,
                h_lin: 0.3,
                e_lin: 0.1,
                f: -4.88,
                mixing_fraction: 0.0,
            })
            .collect();
        let tol = Tolerances::default();
        series[3].f += 10.0 * tol.f_rel * 4.88;
        let verdict = admissibility_report(&series, &tol).unwrap();
        assert!(!verdict.f_monotone.pass);
        assert_eq!(verdict.f_monotone.violation_index, Some(3));
        assert!(verdict.mass_conserved.pass);
    }

    #[test]
    fn admissibility_rejects_unordered_times() {
        let s = FunctionalSample {
            t: 1.0,
            mass: 1.0,
            hydro_energy: 1.0,
            h_nonl: 1.0,
            h_lin: 1.0,
            e_lin: 1.0,
            f: -1.0,
            mixing_fraction: 0.0,
        };
        let series = vec![s, FunctionalSample { t: 0.5, ..s }];
        assert!(admissibility_report(&series, &Tolerances::default()).is_err());
    }
}
