//! Iterative solvers for the elliptic problems the solver needs:
//! the variable-coefficient Neumann problem div(beta grad phi) = rhs of the
//! pressure projection, and the constant-coefficient Dirichlet problem of the
//! streamfunction diagnosis.
//!
//! Both use preconditioned conjugate gradients with a Jacobi preconditioner.
//! The Neumann operator is singular (constants); solvability requires a
//! zero-mean right-hand side, which is checked, and the returned solution is
//! normalized to zero mean.  A warm start from the previous solve cuts the
//! iteration count substantially when the field evolves slowly.

use crate::error::{Error, Result};
use crate::field::{kahan_sum, Grid, Placement, ScalarField};

/// Face-centered diffusion coefficients for div(beta grad .) on cell centers.
/// Wall faces carry coefficient zero, which encodes the homogeneous Neumann
/// condition.
#[derive(Debug, Clone)]
pub struct FaceCoefficients {
    pub bx: ScalarField,
    pub bz: ScalarField,
}

impl FaceCoefficients {
    /// Unit coefficients (plain Laplacian) with Neumann walls.
    pub fn uniform(grid: &Grid) -> Self {
        Self::build(grid, |_, _| 1.0, |_, _| 1.0)
    }

    /// Arithmetic average of a cell-centered coefficient onto interior faces.
    pub fn from_cell_beta(grid: &Grid, beta: &ScalarField) -> Self {
        assert_eq!(beta.placement(), Placement::Center);
        Self::build(
            grid,
            |i, k| 0.5 * (beta.at(i - 1, k) + beta.at(i, k)),
            |i, k| 0.5 * (beta.at(i, k - 1) + beta.at(i, k)),
        )
    }

    fn build(
        grid: &Grid,
        mut fx: impl FnMut(usize, usize) -> f64,
        mut fz: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let bx = ScalarField::from_fn(grid, Placement::XFace, |i, k| {
            if i == 0 || i == grid.nx {
                0.0
            } else {
                fx(i, k)
            }
        });
        let bz = ScalarField::from_fn(grid, Placement::ZFace, |i, k| {
            if k == 0 || k == grid.nz {
                0.0
            } else {
                fz(i, k)
            }
        });
        FaceCoefficients { bx, bz }
    }
}

/// Reusable buffers plus the previous solution for warm starting.
#[derive(Debug, Default, Clone)]
pub struct PoissonWorkspace {
    guess: Vec<f64>,
    r: Vec<f64>,
    z: Vec<f64>,
    p: Vec<f64>,
    ap: Vec<f64>,
}

/// Stopping rule for [`solve_neumann`].
#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    /// Converged when ||r||_2 <= rel * ||b||_2 ...
    pub rel: f64,
    /// ... or when ||r||_2 <= abs (whichever is stricter applies as a max).
    pub abs: f64,
    pub max_iter: usize,
}

/// y = -div(beta grad x) on cell centers (the SPD form used by CG).
fn apply_operator(grid: &Grid, coeffs: &FaceCoefficients, x: &[f64], y: &mut [f64]) {
    let (nx, nz) = (grid.nx, grid.nz);
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let bx = coeffs.bx.values();
    let bz = coeffs.bz.values();
    for k in 0..nz {
        for i in 0..nx {
            let c = k * nx + i;
            let xc = x[c];
            let mut acc = 0.0;
            let bw = bx[k * (nx + 1) + i];
            if bw != 0.0 {
                acc += bw * (xc - x[c - 1]);
            }
            let be = bx[k * (nx + 1) + i + 1];
            if be != 0.0 {
                acc += be * (xc - x[c + 1]);
            }
            let bs = bz[k * nx + i];
            if bs != 0.0 {
                acc += bs * (xc - x[c - nx]);
            }
            let bn = bz[(k + 1) * nx + i];
            if bn != 0.0 {
                acc += bn * (xc - x[c + nx]);
            }
            y[c] = acc * inv_h2;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    kahan_sum(a.iter().zip(b).map(|(x, y)| x * y))
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn subtract_mean(v: &mut [f64]) {
    let mean = kahan_sum(v.iter().copied()) / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

/// Solve -div(beta grad phi) = -rhs (i.e. div(beta grad phi) = rhs) with
/// homogeneous Neumann walls.  Returns phi normalized to zero mean.
///
/// `check_compat` rejects right-hand sides whose mean is not negligible
/// against their magnitude; the projection path disables the check because
/// its rhs is compatible by construction (wall-normal velocities vanish).
pub fn solve_neumann(
    grid: &Grid,
    coeffs: &FaceCoefficients,
    rhs: &ScalarField,
    stop: StopRule,
    ws: &mut PoissonWorkspace,
    check_compat: bool,
) -> Result<ScalarField> {
    assert_eq!(rhs.placement(), Placement::Center);
    let n = grid.cell_count();
    let h2 = grid.h * grid.h;

    let rhs_sum = kahan_sum(rhs.values().iter().copied());
    let rhs_abs_sum = kahan_sum(rhs.values().iter().map(|v| v.abs()));
    if check_compat {
        let tol = 1e-8 * rhs_abs_sum + 1e-300;
        if rhs_sum.abs() > tol {
            return Err(Error::PoissonIncompatible {
                mean: rhs_sum * h2 / n as f64,
                tol: tol * h2 / n as f64,
            });
        }
    }

    // b = -(rhs - mean) so the operator form is SPD on the zero-mean subspace
    let mean = rhs_sum / n as f64;
    let mut b: Vec<f64> = rhs.values().iter().map(|v| -(v - mean)).collect();
    subtract_mean(&mut b);
    let b_norm = norm2(&b);
    let mut phi = ScalarField::zeros(grid, Placement::Center);
    if b_norm == 0.0 {
        ws.guess.clear();
        ws.guess.resize(n, 0.0);
        return Ok(phi);
    }
    let target = (stop.rel * b_norm).max(stop.abs);

    // Jacobi preconditioner: diagonal of the SPD operator
    let mut diag = vec![0.0f64; n];
    {
        let bx = coeffs.bx.values();
        let bz = coeffs.bz.values();
        let inv_h2 = 1.0 / h2;
        for k in 0..grid.nz {
            for i in 0..grid.nx {
                let c = k * grid.nx + i;
                diag[c] = (bx[k * (grid.nx + 1) + i]
                    + bx[k * (grid.nx + 1) + i + 1]
                    + bz[k * grid.nx + i]
                    + bz[(k + 1) * grid.nx + i])
                    * inv_h2;
            }
        }
    }

    let x = phi.values_mut();
    if ws.guess.len() == n {
        x.copy_from_slice(&ws.guess);
        subtract_mean(x);
    } else {
        ws.guess.clear();
        ws.guess.resize(n, 0.0);
    }
    ws.r.resize(n, 0.0);
    ws.z.resize(n, 0.0);
    ws.p.resize(n, 0.0);
    ws.ap.resize(n, 0.0);
    let (r, z, p, ap) = (&mut ws.r, &mut ws.z, &mut ws.p, &mut ws.ap);

    apply_operator(grid, coeffs, x, r);
    for c in 0..n {
        r[c] = b[c] - r[c];
    }
    let mut res = norm2(r);
    if res <= target {
        subtract_mean(x);
        ws.guess.copy_from_slice(x);
        return Ok(phi);
    }

    for c in 0..n {
        z[c] = r[c] / diag[c];
    }
    p.copy_from_slice(z);
    let mut rz = dot(r, z);

    for iter in 1..=stop.max_iter {
        apply_operator(grid, coeffs, p, ap);
        let pap = dot(p, ap);
        if pap <= 0.0 {
            // numerically lost positive-definiteness (nullspace drift); restart
            subtract_mean(x);
            apply_operator(grid, coeffs, x, r);
            for c in 0..n {
                r[c] = b[c] - r[c];
            }
            for c in 0..n {
                z[c] = r[c] / diag[c];
            }
            p.copy_from_slice(z);
            rz = dot(r, z);
            continue;
        }
        let alpha = rz / pap;
        for c in 0..n {
            x[c] += alpha * p[c];
        }
        for c in 0..n {
            r[c] -= alpha * ap[c];
        }
        if iter % 64 == 0 {
            // refresh the true residual; the recurrence drifts over long solves
            apply_operator(grid, coeffs, x, r);
            for c in 0..n {
                r[c] = b[c] - r[c];
            }
        }
        res = norm2(r);
        if res <= target {
            subtract_mean(x);
            ws.guess.copy_from_slice(x);
            return Ok(phi);
        }
        for c in 0..n {
            z[c] = r[c] / diag[c];
        }
        let rz_new = dot(r, z);
        let beta = rz_new / rz;
        rz = rz_new;
        for c in 0..n {
            p[c] = z[c] + beta * p[c];
        }
    }

    Err(Error::PoissonNoConvergence {
        residual: res / b_norm,
        iters: stop.max_iter,
        tol: stop.rel,
    })
}

/// Solve laplace(psi) = rhs on grid nodes with psi = 0 on the boundary.
/// Used to diagnose the streamfunction from the vorticity.
pub fn solve_dirichlet_nodes(
    grid: &Grid,
    rhs: &ScalarField,
    rel_tol: f64,
    max_iter: usize,
) -> Result<ScalarField> {
    assert_eq!(rhs.placement(), Placement::Node);
    let (mi, mk) = (grid.nx - 1, grid.nz - 1); // interior node counts
    let n = mi * mk;
    let inv_h2 = 1.0 / (grid.h * grid.h);

    // SPD form: -laplace(psi) = -rhs on interior nodes
    let b: Vec<f64> = (0..n)
        .map(|c| -rhs.at(c % mi + 1, c / mi + 1))
        .collect();
    let b_norm = norm2(&b);
    let mut psi = ScalarField::zeros(grid, Placement::Node);
    if b_norm == 0.0 {
        return Ok(psi);
    }
    let target = rel_tol * b_norm;

    let apply = |x: &[f64], y: &mut [f64]| {
        for kk in 0..mk {
            for ii in 0..mi {
                let c = kk * mi + ii;
                let mut acc = 4.0 * x[c];
                if ii > 0 {
                    acc -= x[c - 1];
                }
                if ii + 1 < mi {
                    acc -= x[c + 1];
                }
                if kk > 0 {
                    acc -= x[c - mi];
                }
                if kk + 1 < mk {
                    acc -= x[c + mi];
                }
                y[c] = acc * inv_h2;
            }
        }
    };

    let mut x = vec![0.0f64; n];
    let mut r = b.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0f64; n];
    let mut rr = dot(&r, &r);
    let mut res = rr.sqrt();

    let mut iter = 0;
    while res > target {
        iter += 1;
        if iter > max_iter {
            return Err(Error::PoissonNoConvergence {
                residual: res / b_norm,
                iters: max_iter,
                tol: rel_tol,
            });
        }
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for c in 0..n {
            x[c] += alpha * p[c];
        }
        if iter % 64 == 0 {
            apply(&x, &mut r);
            for c in 0..n {
                r[c] = b[c] - r[c];
            }
        } else {
            for c in 0..n {
                r[c] -= alpha * ap[c];
            }
        }
        let rr_new = dot(&r, &r);
        res = rr_new.sqrt();
        let beta = rr_new / rr;
        rr = rr_new;
        for c in 0..n {
            p[c] = r[c] + beta * p[c];
        }
    }

    for kk in 0..mk {
        for ii in 0..mi {
            psi.set(ii + 1, kk + 1, x[kk * mi + ii]);
        }
    }
    Ok(psi)
}
