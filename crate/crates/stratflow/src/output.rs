//! Plain-text CSV output: field snapshots and diagnostics time series.
//!
//! Snapshots carry one row per cell, `x,z,rho,u,w,psi,xi`, at 9 significant
//! digits behind a `# t=.. nx=.. nz=.. h=..` header; byte output is
//! deterministic for identical inputs.  Diagnostics series are written at
//! full precision so conservation drifts at the 1e-12 level survive a
//! round trip.

use crate::diagnostics::FunctionalSample;
use crate::error::{Error, Result};
use crate::field::Grid;
use crate::sim::Snapshot;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write one snapshot as CSV.  Velocities are averaged to cell centers;
/// streamfunction and vorticity are averaged from the four cell corners.
pub fn write_snapshot(snapshot: &Snapshot, grid: &Grid, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let mut emit = |s: String| out.write_all(s.as_bytes()).map_err(|e| io_err(path, e));

    emit(format!(
        "# t={:.9e} nx={} nz={} h={:.9e}\n",
        snapshot.t, grid.nx, grid.nz, grid.h
    ))?;
    emit("x,z,rho,u,w,psi,xi\n".to_string())?;
    for k in 0..grid.nz {
        for i in 0..grid.nx {
            let uc = 0.5 * (snapshot.u.at(i, k) + snapshot.u.at(i + 1, k));
            let wc = 0.5 * (snapshot.w.at(i, k) + snapshot.w.at(i, k + 1));
            let psic = 0.25
                * (snapshot.psi.at(i, k)
                    + snapshot.psi.at(i + 1, k)
                    + snapshot.psi.at(i, k + 1)
                    + snapshot.psi.at(i + 1, k + 1));
            let xic = 0.25
                * (snapshot.xi.at(i, k)
                    + snapshot.xi.at(i + 1, k)
                    + snapshot.xi.at(i, k + 1)
                    + snapshot.xi.at(i + 1, k + 1));
            emit(format!(
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}\n",
                grid.xc(i),
                grid.zc(k),
                snapshot.rho.at(i, k),
                uc,
                wc,
                psic,
                xic
            ))?;
        }
    }
    out.flush().map_err(|e| io_err(path, e))
}

/// A snapshot read back from CSV: header metadata plus cell rows in
/// row-major order, columns as written.
#[derive(Debug, Clone)]
pub struct SnapshotTable {
    pub t: f64,
    pub nx: usize,
    pub nz: usize,
    pub h: f64,
    pub rows: Vec<[f64; 7]>,
}

pub fn read_snapshot(path: &Path) -> Result<SnapshotTable> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut lines = BufReader::new(file).lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))?
        .map_err(|e| io_err(path, e))?;
    let mut t = None;
    let mut nx = None;
    let mut nz = None;
    let mut h = None;
    for token in header.trim_start_matches('#').split_whitespace() {
        if let Some((key, value)) = token.split_once('=') {
            match key {
                "t" => t = value.parse::<f64>().ok(),
                "nx" => nx = value.parse::<usize>().ok(),
                "nz" => nz = value.parse::<usize>().ok(),
                "h" => h = value.parse::<f64>().ok(),
                _ => {}
            }
        }
    }
    let (t, nx, nz, h) = match (t, nx, nz, h) {
        (Some(t), Some(nx), Some(nz), Some(h)) => (t, nx, nz, h),
        _ => {
            return Err(Error::Parse(format!(
                "{}: malformed snapshot header '{header}'",
                path.display()
            )))
        }
    };

    let mut rows = Vec::with_capacity(nx * nz);
    for line in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
            continue;
        }
        let mut row = [0.0f64; 7];
        let mut fields = line.split(',');
        for slot in row.iter_mut() {
            *slot = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("{}: short row '{line}'", path.display())))?
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{}: bad number in '{line}'", path.display())))?;
        }
        rows.push(row);
    }
    if rows.len() != nx * nz {
        return Err(Error::Parse(format!(
            "{}: expected {} rows, found {}",
            path.display(),
            nx * nz,
            rows.len()
        )));
    }
    Ok(SnapshotTable { t, nx, nz, h, rows })
}

pub const DIAGNOSTICS_HEADER: &str = "t,mass,hydro_energy,H_nonl,H_lin,F,mixing_fraction";

/// Write the functional time series as CSV.
pub fn write_diagnostics(samples: &[FunctionalSample], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "{DIAGNOSTICS_HEADER}").map_err(|e| io_err(path, e))?;
    for s in samples {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t, s.mass, s.hydro_energy, s.h_nonl, s.h_lin, s.f, s.mixing_fraction
        )
        .map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

/// Read a diagnostics series back.  The linearized hydrodynamic energy is not
/// part of the file format and comes back as zero.
pub fn read_diagnostics(path: &Path) -> Result<Vec<FunctionalSample>> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut samples = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('t') {
            continue;
        }
        let values: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| {
                Error::Parse(format!(
                    "{}:{}: bad number in '{line}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
        if values.len() != 7 {
            return Err(Error::Parse(format!(
                "{}:{}: expected 7 columns, found {}",
                path.display(),
                lineno + 1,
                values.len()
            )));
        }
        samples.push(FunctionalSample {
            t: values[0],
            mass: values[1],
            hydro_energy: values[2],
            h_nonl: values[3],
            h_lin: values[4],
            e_lin: 0.0,
            f: values[5],
            mixing_fraction: values[6],
        });
    }
    if samples.is_empty() {
        return Err(Error::Parse(format!(
            "{}: no samples found",
            path.display()
        )));
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_grid, Placement, ScalarField, State};
    use crate::solver::{SolverConfig, Stepper};
    use crate::stratification::StratificationProfile;

    fn tiny_snapshot() -> (Grid, Snapshot) {
        let grid = make_grid(0.5, 0.25, 0.05).unwrap(); // 10 x 5
        let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
        let state = State::at_rest(
            &grid,
            ScalarField::from_fn(&grid, Placement::Center, |_, k| {
                profile.rho0_unchecked(grid.zc(k))
            }),
        );
        let mut stepper = Stepper::new(grid, profile, SolverConfig::default()).unwrap();
        let snap = Snapshot::capture(&state, &mut stepper).unwrap();
        (grid, snap)
    }

    #[test]
    fn snapshot_row_count_and_header() {
        let (grid, snap) = tiny_snapshot();
        let dir = std::env::temp_dir().join("stratflow-test-snap");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("snap.csv");
        write_snapshot(&snap, &grid, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# t="));
        assert_eq!(lines[1], "x,z,rho,u,w,psi,xi");
        assert_eq!(lines.len(), 2 + grid.nx * grid.nz);
    }

    #[test]
    fn snapshot_round_trip_preserves_values() {
        let (grid, snap) = tiny_snapshot();
        let dir = std::env::temp_dir().join("stratflow-test-snap2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("snap.csv");
        write_snapshot(&snap, &grid, &path).unwrap();
        let table = read_snapshot(&path).unwrap();
        assert_eq!((table.nx, table.nz), (grid.nx, grid.nz));
        assert_eq!(table.rows.len(), grid.nx * grid.nz);
        // 9 significant digits survive
        for (n, row) in table.rows.iter().enumerate() {
            let (i, k) = (n % grid.nx, n / grid.nx);
            let rho = snap.rho.at(i, k);
            assert!((row[2] - rho).abs() <= 1e-8 * rho.abs());
            assert!((row[0] - grid.xc(i)).abs() <= 1e-8 * grid.xc(i).max(1e-3));
        }
    }

    #[test]
    fn snapshot_bytes_are_deterministic() {
        let (grid, snap) = tiny_snapshot();
        let dir = std::env::temp_dir().join("stratflow-test-snap3");
        std::fs::create_dir_all(&dir).unwrap();
        let (p1, p2) = (dir.join("a.csv"), dir.join("b.csv"));
        write_snapshot(&snap, &grid, &p1).unwrap();
        write_snapshot(&snap, &grid, &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn rest_snapshot_rho_column_is_the_background() {
        let (grid, snap) = tiny_snapshot();
        let dir = std::env::temp_dir().join("stratflow-test-snap4");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("snap.csv");
        write_snapshot(&snap, &grid, &path).unwrap();
        let table = read_snapshot(&path).unwrap();
        let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
        for (n, row) in table.rows.iter().enumerate() {
            let k = n / grid.nx;
            let expected = profile.rho0_unchecked(grid.zc(k));
            assert!((row[2] - expected).abs() <= 1e-6 * expected);
        }
    }

    #[test]
    fn diagnostics_round_trip() {
        let samples = vec![
            FunctionalSample {
                t: 0.0,
                mass: 245.0503762841202,
                hydro_energy: 298.48335992997995,
                h_nonl: 0.241,
                h_lin: 0.241,
                e_lin: 0.0,
                f: -4.883858478507042,
                mixing_fraction: 0.0,
            },
            FunctionalSample {
                t: 0.5,
                mass: 245.05037628412023,
                hydro_energy: 298.48335992997800,
                h_nonl: 0.240,
                h_lin: 0.239,
                e_lin: 0.0,
                f: -4.883858478517042,
                mixing_fraction: 0.001,
            },
        ];
        let dir = std::env::temp_dir().join("stratflow-test-diag");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("diagnostics.csv");
        write_diagnostics(&samples, &path).unwrap();
        let back = read_diagnostics(&path).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in samples.iter().zip(&back) {
            assert_eq!(a.t, b.t);
            assert_eq!(a.mass, b.mass);
            assert_eq!(a.hydro_energy, b.hydro_energy);
            assert_eq!(a.f, b.f);
        }
    }
}
