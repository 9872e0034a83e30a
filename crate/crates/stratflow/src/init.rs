//! Initial conditions.
//!
//! Velocities are sampled from the exact analytic derivatives of a
//! streamfunction onto the staggered faces, the density is set to the
//! undisturbed background, and one projection reconciles the sampled field
//! with the discrete divergence stencil.

use crate::error::Result;
use crate::field::{apply_wall_bc, Grid, Placement, ScalarField, State};
use crate::scenario::VortexParams;
use crate::solver::poisson::PoissonWorkspace;
use crate::solver::{project, SolverConfig};
use crate::stratification::StratificationProfile;

/// Gaussian streamfunction vortex with unperturbed density:
/// psi = A exp(-((x-x0)/lx)^2 - ((z-z0)/lz)^2), u = dpsi/dz, w = -dpsi/dx.
pub fn gaussian_vortex_init(
    grid: &Grid,
    profile: &StratificationProfile,
    vortex: &VortexParams,
    cfg: &SolverConfig,
) -> Result<State> {
    let psi = |x: f64, z: f64| {
        let ax = (x - vortex.x0) / vortex.lx;
        let az = (z - vortex.z0) / vortex.lz;
        vortex.a * (-ax * ax - az * az).exp()
    };

    // loudest wall value of psi, relative to the amplitude
    let mut wall_psi: f64 = 0.0;
    for k in 0..=grid.nz {
        let z = k as f64 * grid.h;
        wall_psi = wall_psi.max(psi(0.0, z).abs()).max(psi(grid.width, z).abs());
    }
    for i in 0..=grid.nx {
        let x = i as f64 * grid.h;
        wall_psi = wall_psi.max(psi(x, 0.0).abs()).max(psi(x, grid.height).abs());
    }
    if wall_psi > 1e-6 * vortex.a.abs() {
        log::warn!(
            "initial vortex reaches the walls: |psi_wall| = {:.2e} of |A| (truncated to no-flux)",
            wall_psi / vortex.a.abs()
        );
    }

    let rho = ScalarField::from_fn(grid, Placement::Center, |_, k| {
        profile.rho0_unchecked(grid.zc(k))
    });
    let mut state = State::at_rest(grid, rho);
    state.u = ScalarField::from_fn(grid, Placement::XFace, |i, k| {
        let (x, z) = (i as f64 * grid.h, grid.zc(k));
        // dpsi/dz
        psi(x, z) * (-2.0 * (z - vortex.z0) / (vortex.lz * vortex.lz))
    });
    state.w = ScalarField::from_fn(grid, Placement::ZFace, |i, k| {
        let (x, z) = (grid.xc(i), k as f64 * grid.h);
        // -dpsi/dx
        -psi(x, z) * (-2.0 * (x - vortex.x0) / (vortex.lx * vortex.lx))
    });
    apply_wall_bc(&mut state);
    project(&mut state, 1.0, grid, cfg, &mut PoissonWorkspace::default())?;
    Ok(state)
}

/// Standing internal wave of small amplitude: psi = B sin(kx x) sin(kz z)
/// with kx = mode_x*pi/width, kz = mode_z*pi/height, started at the
/// velocity-maximum phase (no density perturbation).  `amplitude` is the
/// peak speed (m/s): max|u| = B kz, max|w| = B kx.
pub fn standing_wave_init(
    grid: &Grid,
    profile: &StratificationProfile,
    mode_x: usize,
    mode_z: usize,
    amplitude: f64,
    cfg: &SolverConfig,
) -> Result<State> {
    let kx = mode_x as f64 * std::f64::consts::PI / grid.width;
    let kz = mode_z as f64 * std::f64::consts::PI / grid.height;
    let b = amplitude / kx.max(kz);

    let rho = ScalarField::from_fn(grid, Placement::Center, |_, k| {
        profile.rho0_unchecked(grid.zc(k))
    });
    let mut state = State::at_rest(grid, rho);
    state.u = ScalarField::from_fn(grid, Placement::XFace, |i, k| {
        let (x, z) = (i as f64 * grid.h, grid.zc(k));
        b * kz * (kx * x).sin() * (kz * z).cos()
    });
    state.w = ScalarField::from_fn(grid, Placement::ZFace, |i, k| {
        let (x, z) = (grid.xc(i), k as f64 * grid.h);
        -b * kx * (kx * x).cos() * (kz * z).sin()
    });
    apply_wall_bc(&mut state);
    project(&mut state, 1.0, grid, cfg, &mut PoissonWorkspace::default())?;
    Ok(state)
}
