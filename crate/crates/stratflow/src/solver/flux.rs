//! Conservative upwind fluxes for density and momentum.
//!
//! Mass and momentum are advected in flux form: each face value is computed
//! once and enters the two adjacent control volumes with opposite signs, so
//! interior transport telescopes exactly and the domain totals change only
//! through boundary fluxes (zero under the wall condition).
//!
//! Face values come from a MUSCL reconstruction with a minmod-limited slope,
//! upwinded on the sign of the advecting velocity.  The one-sided dissipation
//! this introduces at under-resolved gradients is what drives the monotone
//! decay of the entropy-like density functional.
//!
//! Density is reconstructed as an offset from a reference constant.  The
//! discrete fluxes are algebraically identical (slopes are differences), but
//! the update then vanishes identically for a uniform-density state instead
//! of picking up the residual divergence of the projected velocity.

use crate::field::{Grid, Placement, ScalarField, State};

/// Slope limiter for the MUSCL reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Limiter {
    #[default]
    Minmod,
    /// Unlimited central (Fromm) slopes; second order but not monotone.
    None,
}

impl Limiter {
    #[inline]
    fn slope(&self, left_diff: f64, right_diff: f64) -> f64 {
        match self {
            Limiter::Minmod => {
                if left_diff * right_diff <= 0.0 {
                    0.0
                } else if left_diff.abs() <= right_diff.abs() {
                    left_diff
                } else {
                    right_diff
                }
            }
            Limiter::None => 0.5 * (left_diff + right_diff),
        }
    }
}

/// Reconstructed value at the interface between samples `q[j]` and `q[j+1]`,
/// upwinded on `vel`.  Slopes fall back to first order at the array ends.
#[inline]
fn face_value(q: &[f64], j: usize, vel: f64, limiter: Limiter) -> f64 {
    if vel > 0.0 {
        let s = if j > 0 && j + 1 < q.len() {
            limiter.slope(q[j] - q[j - 1], q[j + 1] - q[j])
        } else {
            0.0
        };
        q[j] + 0.5 * s
    } else if vel < 0.0 {
        let s = if j + 2 < q.len() {
            limiter.slope(q[j + 1] - q[j], q[j + 2] - q[j + 1])
        } else {
            0.0
        };
        q[j + 1] - 0.5 * s
    } else {
        0.5 * (q[j] + q[j + 1])
    }
}

/// All advective fluxes of one state.  Each face value is stored once, so
/// antisymmetric pairing between neighbors is exact by construction.
#[derive(Debug, Clone)]
pub struct Flux {
    /// Mass flux rho*u through x-faces (kg m^-2 s^-1); zero on wall faces.
    pub mass_x: ScalarField,
    /// Mass flux rho*w through z-faces; zero on wall faces.
    pub mass_z: ScalarField,
    /// Same fluxes with the reference density removed; used for the update.
    pub(crate) dmass_x: ScalarField,
    pub(crate) dmass_z: ScalarField,
    /// Reference density subtracted before reconstruction.
    #[allow(dead_code)]
    pub(crate) rho_ref: f64,
    /// Flux of x-momentum in x (rho u^2 term), at cell centers.
    pub xmom_x: ScalarField,
    /// Flux of x-momentum in z (rho u w term), at nodes.
    pub xmom_z: ScalarField,
    /// Flux of z-momentum in x (rho u w term), at nodes.
    pub zmom_x: ScalarField,
    /// Flux of z-momentum in z (rho w^2 term), at cell centers.
    pub zmom_z: ScalarField,
}

/// Density averaged onto interior x-faces; wall faces copy the adjacent cell.
pub fn face_density_x(grid: &Grid, rho: &ScalarField) -> ScalarField {
    ScalarField::from_fn(grid, Placement::XFace, |i, k| {
        if i == 0 {
            rho.at(0, k)
        } else if i == grid.nx {
            rho.at(grid.nx - 1, k)
        } else {
            0.5 * (rho.at(i - 1, k) + rho.at(i, k))
        }
    })
}

/// Density averaged onto interior z-faces; wall faces copy the adjacent cell.
pub fn face_density_z(grid: &Grid, rho: &ScalarField) -> ScalarField {
    ScalarField::from_fn(grid, Placement::ZFace, |i, k| {
        if k == 0 {
            rho.at(i, 0)
        } else if k == grid.nz {
            rho.at(i, grid.nz - 1)
        } else {
            0.5 * (rho.at(i, k - 1) + rho.at(i, k))
        }
    })
}

/// Compute every advective flux of `state`.  Requires the wall condition to
/// hold (wall-normal velocities exactly zero).
pub fn compute_fluxes(state: &State, grid: &Grid, limiter: Limiter) -> Flux {
    let (nx, nz) = (grid.nx, grid.nz);
    let rho_ref = state.rho.at(0, 0);

    let mut dmass_x = ScalarField::zeros(grid, Placement::XFace);
    let mut mass_x = ScalarField::zeros(grid, Placement::XFace);
    let mut drow = vec![0.0f64; nx];
    for k in 0..nz {
        for i in 0..nx {
            drow[i] = state.rho.at(i, k) - rho_ref;
        }
        for i in 1..nx {
            let vel = state.u.at(i, k);
            if vel != 0.0 {
                let dhat = face_value(&drow, i - 1, vel, limiter);
                dmass_x.set(i, k, dhat * vel);
                mass_x.set(i, k, (rho_ref + dhat) * vel);
            }
        }
    }

    // Vertical transport splits the density into a per-row reference (the
    // stratification column) carried with centered face values and a
    // deviation carried with upwind-limited reconstruction.  Upwinding the
    // full field would bias the transport of the smooth background profile
    // itself, which damps small-amplitude waves; the deviation is where
    // fronts live, so the limiter still acts on them.
    let row_ref: Vec<f64> = (0..nz).map(|k| state.rho.at(0, k)).collect();
    let mut dmass_z = ScalarField::zeros(grid, Placement::ZFace);
    let mut mass_z = ScalarField::zeros(grid, Placement::ZFace);
    let mut dcol = vec![0.0f64; nz];
    for i in 0..nx {
        for k in 0..nz {
            dcol[k] = state.rho.at(i, k) - row_ref[k];
        }
        for k in 1..nz {
            let vel = state.w.at(i, k);
            if vel != 0.0 {
                let ref_face = 0.5 * (row_ref[k - 1] + row_ref[k]);
                let dhat = face_value(&dcol, k - 1, vel, limiter);
                dmass_z.set(i, k, (ref_face - rho_ref + dhat) * vel);
                mass_z.set(i, k, (ref_face + dhat) * vel);
            }
        }
    }

    // Momentum fluxes pair the continuity mass flux with centered velocity
    // averages.  With this pairing the advective terms move kinetic energy
    // around without creating or destroying it (semi-discrete), so the
    // energy budget of a run reflects physics and pressure work, not scheme
    // dissipation.  Upwinding the momentum density instead was measured to
    // bleed roughly a tenth of the initial kinetic energy over one breaking
    // event at desk resolution.

    // Flux of x-momentum in x at cell centers: advecting velocity is the
    // average of the two straddling u-faces.
    let mut xmom_x = ScalarField::zeros(grid, Placement::Center);
    for k in 0..nz {
        for i in 0..nx {
            let ubar = 0.5 * (state.u.at(i, k) + state.u.at(i + 1, k));
            xmom_x.set(i, k, 0.5 * (mass_x.at(i, k) + mass_x.at(i + 1, k)) * ubar);
        }
    }

    // Flux of x-momentum in z at nodes; zero on top/bottom walls.
    let mut xmom_z = ScalarField::zeros(grid, Placement::Node);
    for i in 1..nx {
        for k in 1..nz {
            let flux = 0.5 * (mass_z.at(i - 1, k) + mass_z.at(i, k));
            xmom_z.set(i, k, flux * 0.5 * (state.u.at(i, k - 1) + state.u.at(i, k)));
        }
    }

    // Flux of z-momentum in x at nodes; zero on left/right walls (u = 0).
    let mut zmom_x = ScalarField::zeros(grid, Placement::Node);
    for k in 1..nz {
        for i in 1..nx {
            let flux = 0.5 * (mass_x.at(i, k - 1) + mass_x.at(i, k));
            zmom_x.set(i, k, flux * 0.5 * (state.w.at(i - 1, k) + state.w.at(i, k)));
        }
    }

    // Flux of z-momentum in z at cell centers.
    let mut zmom_z = ScalarField::zeros(grid, Placement::Center);
    for i in 0..nx {
        for k in 0..nz {
            let wbar = 0.5 * (state.w.at(i, k) + state.w.at(i, k + 1));
            zmom_z.set(i, k, 0.5 * (mass_z.at(i, k) + mass_z.at(i, k + 1)) * wbar);
        }
    }

    Flux {
        mass_x,
        mass_z,
        dmass_x,
        dmass_z,
        rho_ref,
        xmom_x,
        xmom_z,
        zmom_x,
        zmom_z,
    }
}
