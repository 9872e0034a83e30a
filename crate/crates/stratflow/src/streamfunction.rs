//! A-posteriori streamfunction and vorticity diagnosis.
//!
//! On the staggered mesh the curl xi = du/dz - dw/dx is natural at grid
//! nodes.  The streamfunction solves laplace(psi) = xi with psi = 0 on the
//! walls (walls are streamlines of a no-flux flow), the sign convention that
//! goes with u = dpsi/dz, w = -dpsi/dx.

use crate::error::{Error, Result};
use crate::field::{Grid, Placement, ScalarField, State};
use crate::solver::poisson::solve_dirichlet_nodes;
use crate::solver::SolverConfig;

/// Vorticity du/dz - dw/dx at grid nodes.  The walls are free-slip: the
/// tangential shear vanishes there, so boundary nodes carry zero vorticity.
pub fn vorticity(state: &State, grid: &Grid) -> ScalarField {
    let inv_h = 1.0 / grid.h;
    ScalarField::from_fn(grid, Placement::Node, |i, k| {
        if i == 0 || i == grid.nx || k == 0 || k == grid.nz {
            return 0.0;
        }
        let dudz = (state.u.at(i, k) - state.u.at(i, k - 1)) * inv_h;
        let dwdx = (state.w.at(i, k) - state.w.at(i - 1, k)) * inv_h;
        dudz - dwdx
    })
}

/// Diagnose the streamfunction of a projected state.  The flow must be
/// representable with psi = 0 on the walls (no net flux through any section);
/// the residual of the reconstruction is checked against the solver
/// tolerance by construction.
pub fn diagnose_streamfunction(state: &State, grid: &Grid, cfg: &SolverConfig) -> Result<ScalarField> {
    let xi = vorticity(state, grid);
    solve_dirichlet_nodes(grid, &xi, cfg.poisson_tol, cfg.poisson_max_iter)
}

/// Relative L2 mismatch between the velocities implied by `psi` and the
/// state's velocities; large values flag flows that have no wall-anchored
/// streamfunction (for instance a uniform through-flow).
pub fn streamfunction_residual(psi: &ScalarField, state: &State, grid: &Grid) -> f64 {
    assert_eq!(psi.placement(), Placement::Node);
    let inv_h = 1.0 / grid.h;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..grid.nz {
        for i in 0..=grid.nx {
            // u on x-face (i, k) from psi: dpsi/dz across the face
            let u_psi = (psi.at(i, k + 1) - psi.at(i, k)) * inv_h;
            let d = u_psi - state.u.at(i, k);
            num += d * d;
            den += state.u.at(i, k).powi(2);
        }
    }
    for k in 0..=grid.nz {
        for i in 0..grid.nx {
            let w_psi = -(psi.at(i + 1, k) - psi.at(i, k)) * inv_h;
            let d = w_psi - state.w.at(i, k);
            num += d * d;
            den += state.w.at(i, k).powi(2);
        }
    }
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (num / den).sqrt()
    }
}

/// Check that a diagnosed streamfunction actually represents the flow,
/// within `tol` relative L2.
pub fn check_representable(psi: &ScalarField, state: &State, grid: &Grid, tol: f64) -> Result<()> {
    let res = streamfunction_residual(psi, state, grid);
    if res > tol {
        return Err(Error::Config(format!(
            "flow is not representable by a wall-anchored streamfunction (residual {res:.3e})"
        )));
    }
    Ok(())
}
