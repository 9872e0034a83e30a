//! Property tests for the solver's structural invariants.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stratflow::diagnostics::{
    f_functional, mixing_fraction, wave_energy_integrand, wave_energy_linear,
    wave_energy_nonlinear,
};
use stratflow::field::kahan_sum;
use stratflow::solver::flux::{compute_fluxes, Limiter};
use stratflow::*;

proptest! {
    // the wave-energy integrand is non-negative for any positive density and
    // vanishes only on the undisturbed rest state
    #[test]
    fn wave_energy_integrand_is_non_negative(
        eta in -0.999f64..10.0,
        z in 0.0f64..0.25,
        uc in -10.0f64..10.0,
        wc in -10.0f64..10.0,
        scale_h in 0.5f64..500.0,
    ) {
        let rho00 = 1000.0;
        let rho0_z = rho00 * (-z / scale_h).exp();
        let rho = rho0_z * (1.0 + eta);
        let v = wave_energy_integrand(rho, z, uc, wc, rho00, scale_h, rho0_z);
        prop_assert!(v >= -1e-12 * G * scale_h * rho00);
    }

    // the integrand's unique zero: rest state on the background
    #[test]
    fn wave_energy_integrand_zero_only_at_rest(
        z in 0.0f64..0.25,
        scale_h in 0.5f64..500.0,
    ) {
        let rho00 = 1000.0;
        let rho0_z = rho00 * (-z / scale_h).exp();
        let at_rest = wave_energy_integrand(rho0_z, z, 0.0, 0.0, rho00, scale_h, rho0_z);
        prop_assert!(at_rest.abs() <= 1e-9);
        let disturbed = wave_energy_integrand(rho0_z * 1.01, z, 0.0, 0.0, rho00, scale_h, rho0_z);
        prop_assert!(disturbed > 1e-3);
    }

    // N(H) * sqrt(H) = sqrt(g) for every exponential profile
    #[test]
    fn buoyancy_frequency_scaling_identity(scale_h in 1e-3f64..1e6) {
        let p = StratificationProfile::exponential(1000.0, scale_h).unwrap();
        let n = buoyancy_frequency(&p);
        prop_assert!((n * scale_h.sqrt() - G.sqrt()).abs() <= 1e-12 * G.sqrt());
    }

    // rho0 never increases with height
    #[test]
    fn background_density_is_monotone(
        scale_h in 0.5f64..500.0,
        z1 in 0.0f64..0.25,
        dz in 0.0f64..0.25,
    ) {
        let p = StratificationProfile::exponential(1000.0, scale_h).unwrap();
        let z2 = (z1 + dz).min(0.25);
        prop_assert!(p.rho0_unchecked(z2) <= p.rho0_unchecked(z1) + 1e-12);
    }
}

fn random_state(grid: &Grid, profile: &StratificationProfile, seed: u64, v_amp: f64) -> State {
    let mut rng = StdRng::seed_from_u64(seed);
    let rho = ScalarField::from_fn(grid, Placement::Center, |_, k| {
        profile.rho0_unchecked(grid.zc(k)) * (1.0 + 0.002 * rng.gen_range(-1.0..1.0))
    });
    let mut state = State::at_rest(grid, rho);
    for v in state.u.values_mut() {
        *v = v_amp * rng.gen_range(-1.0..1.0f64);
    }
    for v in state.w.values_mut() {
        *v = v_amp * rng.gen_range(-1.0..1.0f64);
    }
    apply_wall_bc(&mut state);
    state
}

#[test]
fn f_functional_non_positive_below_bottom_density() {
    let grid = make_grid(0.4, 0.2, 0.01).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    for seed in 0..20 {
        let state = random_state(&grid, &profile, seed, 0.1);
        // random perturbations stay within 0.2% of the background, so the
        // bottom density remains the ceiling
        let f = f_functional(&state, &grid, 1000.0 * 1.002).unwrap();
        assert!(f <= 0.0, "F = {f} for seed {seed}");
    }
}

#[test]
fn projected_random_states_meet_divergence_bound() {
    let grid = make_grid(0.4, 0.2, 0.01).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    let cfg = SolverConfig::default();
    for seed in 0..5 {
        let mut state = random_state(&grid, &profile, 1000 + seed, 0.2);
        project(
            &mut state,
            0.01,
            &grid,
            &cfg,
            &mut stratflow::solver::poisson::PoissonWorkspace::default(),
        )
        .unwrap();
        let div = discrete_divergence(&state, &grid);
        assert!(div.max_abs() <= cfg.div_tol, "div {}", div.max_abs());
    }
}

#[test]
fn small_amplitude_wave_energy_matches_linear_form() {
    // |H_nonl - H_lin| <= 0.5 |eta| H_lin for uniform relative perturbations
    let grid = make_grid(1.0, 0.25, 0.0125).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    for eta in [1e-4, 1e-3, 5e-3, 1e-2, -1e-3, -1e-2] {
        let mut state = State::at_rest(
            &grid,
            ScalarField::from_fn(&grid, Placement::Center, |_, k| {
                profile.rho0_unchecked(grid.zc(k))
            }),
        );
        for v in state.rho.values_mut() {
            *v *= 1.0 + eta;
        }
        let h_nonl = wave_energy_nonlinear(&state, &grid, &profile).unwrap();
        let h_lin = wave_energy_linear(&state, &grid, &profile);
        assert!(
            (h_nonl - h_lin).abs() <= 0.5 * eta.abs() * h_lin,
            "eta {eta}: H_nonl {h_nonl}, H_lin {h_lin}"
        );
    }
}

#[test]
fn momentum_advection_telescopes_to_boundary_fluxes() {
    // the interior momentum change under pure advection is exactly balanced
    // by the fluxes through the outermost control-volume boundaries
    let grid = make_grid(0.4, 0.2, 0.01).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    let state = random_state(&grid, &profile, 42, 0.2);
    let fluxes = compute_fluxes(&state, &grid, Limiter::Minmod);
    let (nx, nz) = (grid.nx, grid.nz);

    // x-momentum: interior faces i = 1..nx; z-fluxes at wall nodes vanish, so
    // only the x-fluxes through the half-cell strips remain
    let mut interior_change = Vec::new();
    for k in 0..nz {
        for i in 1..nx {
            interior_change.push(
                -(fluxes.xmom_x.at(i, k) - fluxes.xmom_x.at(i - 1, k)
                    + fluxes.xmom_z.at(i, k + 1)
                    - fluxes.xmom_z.at(i, k)),
            );
        }
    }
    let total = kahan_sum(interior_change.iter().copied());
    let boundary = kahan_sum((0..nz).map(|k| fluxes.xmom_x.at(0, k) - fluxes.xmom_x.at(nx - 1, k)));
    let scale = fluxes.xmom_x.max_abs() * (nx * nz) as f64;
    assert!(
        (total - boundary).abs() <= 1e-12 * scale,
        "telescoping defect {} vs scale {scale}",
        (total - boundary).abs()
    );
}

#[test]
fn wall_fluxes_are_exactly_zero() {
    let grid = make_grid(0.4, 0.2, 0.01).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    let state = random_state(&grid, &profile, 7, 0.3);
    let fluxes = compute_fluxes(&state, &grid, Limiter::Minmod);
    for k in 0..grid.nz {
        assert_eq!(fluxes.mass_x.at(0, k), 0.0);
        assert_eq!(fluxes.mass_x.at(grid.nx, k), 0.0);
    }
    for i in 0..grid.nx {
        assert_eq!(fluxes.mass_z.at(i, 0), 0.0);
        assert_eq!(fluxes.mass_z.at(i, grid.nz), 0.0);
    }
    // momentum leaves through no wall: corner fluxes on the walls vanish
    for i in 0..=grid.nx {
        assert_eq!(fluxes.xmom_z.at(i, 0), 0.0);
        assert_eq!(fluxes.xmom_z.at(i, grid.nz), 0.0);
    }
    for k in 0..=grid.nz {
        assert_eq!(fluxes.zmom_x.at(0, k), 0.0);
        assert_eq!(fluxes.zmom_x.at(grid.nx, k), 0.0);
    }
}

#[test]
fn homogeneous_density_is_bit_exact_under_stepping() {
    let grid = make_grid(0.4, 0.2, 0.01).unwrap();
    let profile = StratificationProfile::constant(1000.0).unwrap();
    let vortex = VortexParams {
        a: -0.002,
        lx: 0.1,
        lz: 0.05,
        x0: 0.2,
        z0: 0.1,
    };
    let cfg = SolverConfig::default();
    let state = init::gaussian_vortex_init(&grid, &profile, &vortex, &cfg).unwrap();
    let mut stepper = Stepper::new(grid, profile, cfg).unwrap();
    let mut s = state;
    for _ in 0..30 {
        let (ns, _) = stepper.step(&s, f64::INFINITY).unwrap();
        s = ns;
        for v in s.rho.values() {
            assert_eq!(*v, 1000.0);
        }
    }
    assert_eq!(mixing_fraction(&s, &grid), 0.0);
}

#[test]
fn centered_vortex_flow_is_centrally_symmetric_while_smooth() {
    // the diagnosed streamfunction mirrors through the vortex center to
    // within 1% of its maximum while the flow is still smooth (no inverted
    // density anywhere)
    let sc = preset("coarse")
        .unwrap()
        .with_t_end(0.4)
        .with_snapshots(&[0.4]);
    let out = run(&sc).unwrap();
    let grid = sc.grid().unwrap();
    let snap = &out.snapshots[0];

    let state = State {
        t: snap.t,
        rho: snap.rho.clone(),
        u: snap.u.clone(),
        w: snap.w.clone(),
        p: snap.p.clone(),
    };
    assert_eq!(
        mixing_fraction(&state, &grid),
        0.0,
        "flow no longer smooth at t = {}",
        snap.t
    );

    let (ci, ck) = (
        (sc.vortex.x0 / grid.h).round() as usize,
        (sc.vortex.z0 / grid.h).round() as usize,
    );
    let psi_max = snap.psi.max_abs();
    let mut worst_psi = 0.0f64;
    for k in 0..=2 * ck {
        for i in 0..=2 * ci {
            let d = snap.psi.at(i, k) - snap.psi.at(2 * ci - i, 2 * ck - k);
            worst_psi = worst_psi.max(d.abs());
        }
    }
    assert!(
        worst_psi <= 0.01 * psi_max,
        "psi asymmetry {worst_psi} vs 1% of {psi_max}"
    );

    // density perturbation is antisymmetric about the center
    let profile = sc.profile;
    let mut pert_max = 0.0f64;
    let mut worst_rho = 0.0f64;
    for k in 0..2 * ck {
        for i in 0..2 * ci {
            let d = snap.rho.at(i, k) - profile.rho0_unchecked(grid.zc(k));
            pert_max = pert_max.max(d.abs());
            let (mi, mk) = (2 * ci - 1 - i, 2 * ck - 1 - k);
            let dm = snap.rho.at(mi, mk) - profile.rho0_unchecked(grid.zc(mk));
            worst_rho = worst_rho.max((d + dm).abs());
        }
    }
    assert!(
        worst_rho <= 0.01 * pert_max,
        "density asymmetry {worst_rho} vs 1% of {pert_max}"
    );
}

#[test]
fn snapshots_are_deterministic_across_runs() {
    let sc = preset("coarse")
        .unwrap()
        .with_h(0.01)
        .with_t_end(0.8)
        .with_snapshots(&[0.8]);
    let grid = sc.grid().unwrap();
    let dir = std::env::temp_dir().join("stratflow-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let mut bytes = Vec::new();
    for n in 0..2 {
        let out = run(&sc).unwrap();
        let path = dir.join(format!("run{n}.csv"));
        stratflow::output::write_snapshot(&out.snapshots[0], &grid, &path).unwrap();
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1], "identical scenario produced different bytes");
}
