use stratflow::*;
use stratflow::diagnostics::*;

fn main() {
    let grid = make_grid(1.0, 0.25, 0.005).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    let mut cfg = SolverConfig::default();
    cfg.dt_max = std::env::var("DBG_DT").ok().and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let state = init::standing_wave_init(&grid, &profile, 8, 1, 9e-5, &cfg).unwrap();
    let mut stepper = Stepper::new(grid, profile, cfg).unwrap();
    let mut s = state;
    let mut step = 0;
    while s.t < 10.01 {
        if step % 20 == 0 {
            let ke = kinetic_energy(&s, &grid);
            let hl = wave_energy_linear(&s, &grid, &profile);
            let hn = wave_energy_nonlinear(&s, &grid, &profile).unwrap();
            let e = hydro_energy(&s, &grid);
            println!("t {:6.2}  KE {:.6e}  H_lin {:.6e}  pot(H_lin-KEish) {:.3e}  H_nonl {:.6e}  E {:.10e}  max|v| {:.3e}", s.t, ke, hl, hl-ke, hn, e, s.max_speed());
        }
        let (ns, _) = stepper.step(&s, 10.02 - s.t).unwrap();
        s = ns;
        step += 1;
    }
}
