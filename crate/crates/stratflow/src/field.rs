//! Rectangular staggered-grid geometry and field storage.
//!
//! The mesh is a uniform MAC arrangement: scalars (density, pressure) live at
//! cell centers, the horizontal velocity u on vertical (x-normal) faces and
//! the vertical velocity w on horizontal (z-normal) faces.  With this layout
//! the discrete divergence and pressure-gradient stencils are adjoint, so the
//! no-flux wall condition and incompressibility can both be enforced to
//! round-off.
//!
//! Cell (i, k) covers [i*h, (i+1)*h] x [k*h, (k+1)*h]; u-face (i, k) sits at
//! (i*h, (k+1/2)*h), w-face (i, k) at ((i+1/2)*h, k*h), node (i, k) at
//! (i*h, k*h).

use crate::error::{Error, Result};

/// Where a field's samples live on the staggered mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Cell centers, nx x nz values.
    Center,
    /// x-normal faces, (nx+1) x nz values; columns 0 and nx are wall faces.
    XFace,
    /// z-normal faces, nx x (nz+1) values; rows 0 and nz are wall faces.
    ZFace,
    /// Cell corners, (nx+1) x (nz+1) values.
    Node,
}

/// Uniform rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub width: f64,
    pub height: f64,
    /// Grid spacing, identical in both directions.
    pub h: f64,
    pub nx: usize,
    pub nz: usize,
}

/// Build a grid, checking that the domain is an integer multiple of `h`
/// (to 1e-9 relative) and at least 4 cells wide in each direction.
pub fn make_grid(width: f64, height: f64, h: f64) -> Result<Grid> {
    if !(width > 0.0 && height > 0.0 && h > 0.0) {
        return Err(Error::Config(format!(
            "domain and spacing must be positive (got {width} x {height}, h = {h})"
        )));
    }
    if h >= width.min(height) / 4.0 {
        return Err(Error::Resolution { width, height, h });
    }
    let nx = (width / h).round();
    let nz = (height / h).round();
    for (n, extent, axis) in [(nx, width, "width"), (nz, height, "height")] {
        if (n * h - extent).abs() > 1e-9 * extent {
            return Err(Error::Config(format!(
                "{axis} = {extent} m is not an integer multiple of h = {h} m"
            )));
        }
    }
    Ok(Grid {
        width,
        height,
        h,
        nx: nx as usize,
        nz: nz as usize,
    })
}

impl Grid {
    /// x-coordinate of the center of cell column i.
    #[inline]
    pub fn xc(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    /// z-coordinate of the center of cell row k.
    #[inline]
    pub fn zc(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.h
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.nz
    }
}

/// A scalar sampled on one of the staggered placements.
#[derive(Clone, PartialEq)]
pub struct ScalarField {
    placement: Placement,
    /// Number of samples in x.
    pub ni: usize,
    /// Number of samples in z.
    pub nk: usize,
    data: Vec<f64>,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ScalarField({:?}, {}x{})",
            self.placement, self.ni, self.nk
        )
    }
}

impl ScalarField {
    pub fn zeros(grid: &Grid, placement: Placement) -> Self {
        let (ni, nk) = match placement {
            Placement::Center => (grid.nx, grid.nz),
            Placement::XFace => (grid.nx + 1, grid.nz),
            Placement::ZFace => (grid.nx, grid.nz + 1),
            Placement::Node => (grid.nx + 1, grid.nz + 1),
        };
        ScalarField {
            placement,
            ni,
            nk,
            data: vec![0.0; ni * nk],
        }
    }

    pub fn from_fn(grid: &Grid, placement: Placement, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut field = Self::zeros(grid, placement);
        for k in 0..field.nk {
            for i in 0..field.ni {
                field.data[k * field.ni + i] = f(i, k);
            }
        }
        field
    }

    #[inline]
    pub fn placement(&self) -> Placement {
        self.placement
    }

    #[inline]
    pub fn at(&self, i: usize, k: usize) -> f64 {
        debug_assert!(i < self.ni && k < self.nk);
        self.data[k * self.ni + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, k: usize, v: f64) {
        debug_assert!(i < self.ni && k < self.nk);
        self.data[k * self.ni + i] = v;
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Compensated (Kahan) sum of all samples.  The conservation checks ask
    /// for 1e-12 relative drift, which a naive left-to-right sum over 1e4+
    /// cells cannot resolve reliably.
    pub fn kahan_sum(&self) -> f64 {
        kahan_sum(self.data.iter().copied())
    }
}

/// Compensated summation over an iterator.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Two staggered velocity components; `u` on x-faces, `w` on z-faces.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub u: ScalarField,
    pub w: ScalarField,
}

impl VectorField {
    pub fn zeros(grid: &Grid) -> Self {
        VectorField {
            u: ScalarField::zeros(grid, Placement::XFace),
            w: ScalarField::zeros(grid, Placement::ZFace),
        }
    }
}

/// Full flow state at one time level.
#[derive(Debug, Clone)]
pub struct State {
    pub t: f64,
    /// Density at cell centers, kg/m^3.
    pub rho: ScalarField,
    /// Horizontal velocity on x-faces, m/s.
    pub u: ScalarField,
    /// Vertical velocity on z-faces, m/s.
    pub w: ScalarField,
    /// Pressure at cell centers, Pa, defined up to a constant.
    pub p: ScalarField,
}

impl State {
    pub fn at_rest(grid: &Grid, rho: ScalarField) -> Self {
        assert_eq!(rho.placement(), Placement::Center);
        State {
            t: 0.0,
            rho,
            u: ScalarField::zeros(grid, Placement::XFace),
            w: ScalarField::zeros(grid, Placement::ZFace),
            p: ScalarField::zeros(grid, Placement::Center),
        }
    }

    /// Largest face-sampled speed, used for the CFL bound.
    pub fn max_speed(&self) -> f64 {
        self.u.max_abs().max(self.w.max_abs())
    }

    /// Velocity components averaged to the center of cell (i, k).
    #[inline]
    pub fn center_velocity(&self, i: usize, k: usize) -> (f64, f64) {
        (
            0.5 * (self.u.at(i, k) + self.u.at(i + 1, k)),
            0.5 * (self.w.at(i, k) + self.w.at(i, k + 1)),
        )
    }
}

/// Zero the wall-normal velocities on all four walls (free-slip, no-flux).
/// Interior and tangential values are untouched, so the map is idempotent.
pub fn apply_wall_bc(state: &mut State) {
    let nx = state.u.ni - 1;
    for k in 0..state.u.nk {
        state.u.set(0, k, 0.0);
        state.u.set(nx, k, 0.0);
    }
    let nz = state.w.nk - 1;
    for i in 0..state.w.ni {
        state.w.set(i, 0, 0.0);
        state.w.set(i, nz, 0.0);
    }
}

/// Conservative cell-centered divergence (1/s) from face differences.
pub fn discrete_divergence(state: &State, grid: &Grid) -> ScalarField {
    let inv_h = 1.0 / grid.h;
    ScalarField::from_fn(grid, Placement::Center, |i, k| {
        (state.u.at(i + 1, k) - state.u.at(i, k) + state.w.at(i, k + 1) - state.w.at(i, k)) * inv_h
    })
}

/// Block-average a cell-centered field onto a coarser grid whose spacing is
/// an integer multiple of the fine spacing.  Used to compare runs across
/// resolutions.
pub fn block_average(fine: &ScalarField, fine_grid: &Grid, coarse_grid: &Grid) -> ScalarField {
    assert_eq!(fine.placement(), Placement::Center);
    let ratio = (coarse_grid.h / fine_grid.h).round() as usize;
    assert!(ratio >= 1);
    assert!(
        ((coarse_grid.h / fine_grid.h) - ratio as f64).abs() < 1e-9,
        "grids are not nested"
    );
    assert_eq!(coarse_grid.nx * ratio, fine_grid.nx);
    assert_eq!(coarse_grid.nz * ratio, fine_grid.nz);
    let weight = 1.0 / (ratio * ratio) as f64;
    ScalarField::from_fn(coarse_grid, Placement::Center, |i, k| {
        let mut sum = 0.0;
        for dk in 0..ratio {
            for di in 0..ratio {
                sum += fine.at(i * ratio + di, k * ratio + dk);
            }
        }
        sum * weight
    })
}

/// Relative L2 distance ||a - b|| / ||b|| over all samples.
pub fn relative_l2(a: &ScalarField, b: &ScalarField) -> f64 {
    assert_eq!(a.ni, b.ni);
    assert_eq!(a.nk, b.nk);
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in a.values().iter().zip(b.values()) {
        num += (x - y) * (x - y);
        den += y * y;
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
