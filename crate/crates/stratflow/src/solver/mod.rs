//! Time integration of the variable-density incompressible Euler system.
//!
//! Each step advances density and momentum in conservative flux form with
//! MUSCL-limited upwind fluxes, applies gravity as a buoyancy source on the
//! vertical momentum, recovers velocities, and projects them onto the
//! discretely divergence-free space by solving a variable-coefficient
//! pressure Poisson equation.  Three explicit Euler stages are combined
//! convexly (strong-stability-preserving Runge-Kutta), which preserves the
//! monotone behavior of the stage update and is stable for the centered
//! momentum transport.
//!
//! Gravity is split against the background: the hydrostatic pressure of the
//! undisturbed profile is computed once and only the buoyancy of the density
//! perturbation enters the momentum equation.  The undisturbed stratified
//! state is then a discrete fixed point to round-off, not merely to solver
//! tolerance.

pub mod flux;
pub mod poisson;

use crate::error::{Error, Result};
use crate::field::{apply_wall_bc, discrete_divergence, Grid, Placement, ScalarField, State};
use crate::stratification::{buoyancy_frequency, StratificationProfile, G};
use flux::{compute_fluxes, face_density_x, face_density_z, Flux, Limiter};
use poisson::{solve_neumann, FaceCoefficients, PoissonWorkspace, StopRule};

/// Numerical parameters of the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// CFL number in (0, 1].
    pub courant: f64,
    /// Max-norm bound enforced on the discrete divergence after projection (1/s).
    pub div_tol: f64,
    /// Relative residual target of the pressure solves.
    pub poisson_tol: f64,
    pub poisson_max_iter: usize,
    pub limiter: Limiter,
    /// Upper bound on the time step (s).
    pub dt_max: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            courant: 0.4,
            div_tol: 1e-8,
            poisson_tol: 1e-10,
            poisson_max_iter: 50_000,
            limiter: Limiter::Minmod,
            dt_max: 0.1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.courant > 0.0 && self.courant <= 1.0) {
            return Err(Error::Config(format!(
                "courant must lie in (0, 1], got {}",
                self.courant
            )));
        }
        if !(self.div_tol > 0.0 && self.poisson_tol > 0.0 && self.dt_max > 0.0) {
            return Err(Error::Config(
                "tolerances and dt_max must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Stable time step: CFL bound on the fastest face speed, a buoyancy bound
/// courant/N when the fluid is stratified, and the configured ceiling.
pub fn cfl_dt(
    state: &State,
    grid: &Grid,
    cfg: &SolverConfig,
    profile: &StratificationProfile,
) -> Result<f64> {
    if !state.u.is_finite() || !state.w.is_finite() {
        return Err(Error::Blowup {
            step: 0,
            t: state.t,
            reason: "non-finite velocity field".into(),
            last_good: None,
        });
    }
    let vmax = state.max_speed();
    let mut dt = cfg.courant * grid.h / (vmax + 1e-300);
    let n = buoyancy_frequency(profile);
    if n > 0.0 {
        dt = dt.min(cfg.courant / n);
    }
    dt = dt.min(cfg.dt_max);
    debug_assert!(dt > 0.0);
    Ok(dt)
}

/// Remove the divergent part of the velocity field.  On return the discrete
/// divergence is bounded by `cfg.div_tol` in max-norm and `state.p` holds the
/// solved pressure increment.
pub fn project(
    state: &mut State,
    dt: f64,
    grid: &Grid,
    cfg: &SolverConfig,
    ws: &mut PoissonWorkspace,
) -> Result<()> {
    let rho_fx = face_density_x(grid, &state.rho);
    let rho_fz = face_density_z(grid, &state.rho);
    let coeffs = FaceCoefficients {
        bx: ScalarField::from_fn(grid, Placement::XFace, |i, k| {
            if i == 0 || i == grid.nx {
                0.0
            } else {
                1.0 / rho_fx.at(i, k)
            }
        }),
        bz: ScalarField::from_fn(grid, Placement::ZFace, |i, k| {
            if k == 0 || k == grid.nz {
                0.0
            } else {
                1.0 / rho_fz.at(i, k)
            }
        }),
    };

    let div = discrete_divergence(state, grid);
    let mut rhs = div;
    for v in rhs.values_mut() {
        *v /= dt;
    }

    // The post-correction divergence equals dt times the pointwise Poisson
    // residual, so solving to div_tol/dt in the 2-norm enforces the
    // divergence bound directly.
    let stop = StopRule {
        rel: cfg.poisson_tol,
        abs: cfg.div_tol / dt,
        max_iter: cfg.poisson_max_iter,
    };
    let phi = solve_neumann(grid, &coeffs, &rhs, stop, ws, false)?;

    let inv_h = 1.0 / grid.h;
    for k in 0..grid.nz {
        for i in 1..grid.nx {
            let grad = (phi.at(i, k) - phi.at(i - 1, k)) * inv_h;
            let v = state.u.at(i, k) - dt * coeffs.bx.at(i, k) * grad;
            state.u.set(i, k, v);
        }
    }
    for k in 1..grid.nz {
        for i in 0..grid.nx {
            let grad = (phi.at(i, k) - phi.at(i, k - 1)) * inv_h;
            let v = state.w.at(i, k) - dt * coeffs.bz.at(i, k) * grad;
            state.w.set(i, k, v);
        }
    }
    state.p = phi;
    Ok(())
}

/// Convex combination (1-wb)*a + wb*b of the conserved and velocity fields,
/// computed as a + wb*(b - a) so a fixed point (b == a) is preserved
/// bitwise; pressure is carried from `b` (the later stage).
fn blend(a: &State, b: &State, wb: f64) -> State {
    let mut out = b.clone();
    for (dst, src) in out.rho.values_mut().iter_mut().zip(a.rho.values()) {
        *dst = *src + wb * (*dst - *src);
    }
    for (dst, src) in out.u.values_mut().iter_mut().zip(a.u.values()) {
        *dst = *src + wb * (*dst - *src);
    }
    for (dst, src) in out.w.values_mut().iter_mut().zip(a.w.values()) {
        *dst = *src + wb * (*dst - *src);
    }
    out
}

/// Integrator state that persists across steps: background hydrostatics and
/// the warm-started Poisson workspace.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    profile: StratificationProfile,
    cfg: SolverConfig,
    /// Background density averaged onto z-face rows (length nz+1).
    rho0_face_z: Vec<f64>,
    /// Background density at cell-row centers (length nz).
    rho0_center: Vec<f64>,
    /// Hydrostatic pressure of the background profile, per cell row.
    p0_row: Vec<f64>,
    ws: PoissonWorkspace,
    /// Abort threshold on the face speed; set by the run driver.
    pub speed_limit: f64,
}

/// Outcome of one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub dt: f64,
}

impl Stepper {
    pub fn new(grid: Grid, profile: StratificationProfile, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let rho0_center: Vec<f64> = (0..grid.nz)
            .map(|k| profile.rho0_unchecked(grid.zc(k)))
            .collect();
        let mut rho0_face_z = vec![0.0; grid.nz + 1];
        for k in 1..grid.nz {
            rho0_face_z[k] = 0.5 * (rho0_center[k - 1] + rho0_center[k]);
        }
        rho0_face_z[0] = rho0_center[0];
        rho0_face_z[grid.nz] = rho0_center[grid.nz - 1];

        // hydrostatic background, consistent with the face-gradient stencil:
        // (p0[k] - p0[k-1]) / h = -g * rho0_face_z[k]
        let mut p0_row = vec![0.0; grid.nz];
        p0_row[grid.nz - 1] = 0.5 * grid.h * G * rho0_center[grid.nz - 1];
        for k in (0..grid.nz - 1).rev() {
            p0_row[k] = p0_row[k + 1] + grid.h * G * rho0_face_z[k + 1];
        }

        Ok(Stepper {
            grid,
            profile,
            cfg,
            rho0_face_z,
            rho0_center,
            p0_row,
            ws: PoissonWorkspace::default(),
            speed_limit: f64::INFINITY,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn profile(&self) -> &StratificationProfile {
        &self.profile
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Background density sampled like the state's density field.
    pub fn background_rho(&self) -> ScalarField {
        let rows = &self.rho0_center;
        ScalarField::from_fn(&self.grid, Placement::Center, |_, k| rows[k])
    }

    /// Total pressure estimate: background hydrostatics plus the latest
    /// projection increment.
    pub fn total_pressure(&self, state: &State) -> ScalarField {
        let rows = &self.p0_row;
        ScalarField::from_fn(&self.grid, Placement::Center, |i, k| {
            rows[k] + state.p.at(i, k)
        })
    }

    /// One forward-Euler stage: advect, apply buoyancy, recover velocities,
    /// project.  Leaves `t` advanced by `dt`.
    fn euler_stage(&mut self, state: &State, dt: f64) -> Result<State> {
        let grid = self.grid;
        let (nx, nz) = (grid.nx, grid.nz);
        let inv_h = dt / grid.h;
        let fluxes: Flux = compute_fluxes(state, &grid, self.cfg.limiter);

        let mut rho_new = state.rho.clone();
        for k in 0..nz {
            for i in 0..nx {
                let d = fluxes.dmass_x.at(i + 1, k) - fluxes.dmass_x.at(i, k)
                    + fluxes.dmass_z.at(i, k + 1)
                    - fluxes.dmass_z.at(i, k);
                rho_new.set(i, k, state.rho.at(i, k) - inv_h * d);
            }
        }

        // momentum densities on faces, old density
        let rho_fx = face_density_x(&grid, &state.rho);
        let rho_fz = face_density_z(&grid, &state.rho);

        let mut u_new = ScalarField::zeros(&grid, Placement::XFace);
        let rho_fx_new = face_density_x(&grid, &rho_new);
        for k in 0..nz {
            for i in 1..nx {
                let m = rho_fx.at(i, k) * state.u.at(i, k);
                let adv = fluxes.xmom_x.at(i, k) - fluxes.xmom_x.at(i - 1, k)
                    + fluxes.xmom_z.at(i, k + 1)
                    - fluxes.xmom_z.at(i, k);
                u_new.set(i, k, (m - inv_h * adv) / rho_fx_new.at(i, k));
            }
        }

        let mut w_new = ScalarField::zeros(&grid, Placement::ZFace);
        let rho_fz_new = face_density_z(&grid, &rho_new);
        for k in 1..nz {
            let rho0f = self.rho0_face_z[k];
            for i in 0..nx {
                let m = rho_fz.at(i, k) * state.w.at(i, k);
                let adv = fluxes.zmom_x.at(i + 1, k) - fluxes.zmom_x.at(i, k)
                    + fluxes.zmom_z.at(i, k)
                    - fluxes.zmom_z.at(i, k - 1);
                // buoyant face density: the same reconstructed value the mass
                // flux transports, so gravity work and potential-energy flux
                // cancel exactly; centered average where the face is still
                let wf = state.w.at(i, k);
                let rho_buoy = if wf != 0.0 {
                    fluxes.rho_ref + fluxes.dmass_z.at(i, k) / wf
                } else {
                    rho_fz.at(i, k)
                };
                let buoyancy = -G * (rho_buoy - rho0f);
                w_new.set(i, k, (m - inv_h * adv + dt * buoyancy) / rho_fz_new.at(i, k));
            }
        }

        let mut next = State {
            t: state.t + dt,
            rho: rho_new,
            u: u_new,
            w: w_new,
            p: state.p.clone(),
        };
        apply_wall_bc(&mut next);
        project(&mut next, dt, &grid, &self.cfg, &mut self.ws)?;
        Ok(next)
    }

    /// Advance one step of size min(CFL, `dt_cap`) with three-stage
    /// strong-stability-preserving Runge-Kutta.  Every stage is a projected
    /// forward-Euler update and the combinations are convex, so monotone
    /// properties of the stage update carry over to the full step; the third
    /// stage also buys linear stability on the imaginary axis, which the
    /// centered momentum transport needs.
    pub fn step(&mut self, state: &State, dt_cap: f64) -> Result<(State, StepInfo)> {
        let dt = cfl_dt(state, &self.grid, &self.cfg, &self.profile)?.min(dt_cap);
        if !(dt > 0.0) {
            return Err(Error::Config(format!("non-positive time step {dt}")));
        }
        let s1 = self.euler_stage(state, dt)?;
        let s2 = self.euler_stage(&s1, dt)?;
        let mut mid = blend(state, &s2, 0.25);
        mid.t = state.t + 0.5 * dt;
        let s3 = self.euler_stage(&mid, dt)?;
        let mut out = blend(state, &s3, 2.0 / 3.0);
        out.t = state.t + dt;

        self.sanity_check(&out)?;
        Ok((out, StepInfo { dt }))
    }

    fn sanity_check(&self, state: &State) -> Result<()> {
        if !state.rho.is_finite() || !state.u.is_finite() || !state.w.is_finite() {
            return Err(Error::Blowup {
                step: 0,
                t: state.t,
                reason: "non-finite field values".into(),
                last_good: None,
            });
        }
        let rho_min = state.rho.min();
        if rho_min <= 0.0 {
            return Err(Error::Blowup {
                step: 0,
                t: state.t,
                reason: format!("density lost positivity (min {rho_min})"),
                last_good: None,
            });
        }
        let vmax = state.max_speed();
        if vmax > self.speed_limit {
            return Err(Error::Blowup {
                step: 0,
                t: state.t,
                reason: format!("speed {vmax:.3} m/s exceeds limit {:.3} m/s", self.speed_limit),
                last_good: None,
            });
        }
        Ok(())
    }
}
