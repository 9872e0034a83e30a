use stratflow::*;
use stratflow::diagnostics::sample_functionals;

fn main() {
    let grid = make_grid(1.0, 0.25, 0.005).unwrap();
    let profile = StratificationProfile::exponential(1000.0, 6.23).unwrap();
    let mut cfg = SolverConfig::default();
    cfg.dt_max = 0.05;
    let n = buoyancy_frequency(&profile);
    let (kx, kz) = (8.0 * std::f64::consts::PI / 1.0, std::f64::consts::PI / 0.25);
    let omega = n * kx / (kx * kx + kz * kz).sqrt();
    let period = 2.0 * std::f64::consts::PI / omega;
    println!("N {:.5}  omega_theory {:.6}  wave period {:.4} s  buoyancy period {:.4}", n, omega, period, 2.0*std::f64::consts::PI/n);

    let state = init::standing_wave_init(&grid, &profile, 8, 1, 9e-5, &cfg).unwrap();
    let mut stepper = Stepper::new(grid, profile, cfg).unwrap();
    // probe w at an antinode of w: cos(kx x)=±1 at x=0.5 (cos(4pi)=1), z=D/2
    let (pi, pk) = ((0.5_f64/0.005).round() as usize, (0.125_f64/0.005).round() as usize);
    let mut s = state;
    let t_end = 2.2 * period;
    let mut series: Vec<(f64, f64)> = vec![(s.t, s.w.at(pi, pk))];
    let mut samples = vec![sample_functionals(&s, &grid, &profile)];
    let mut steps = 0;
    while s.t < t_end {
        let (ns, _) = stepper.step(&s, t_end - s.t + 1e-9).unwrap();
        s = ns;
        steps += 1;
        series.push((s.t, s.w.at(pi, pk)));
        samples.push(sample_functionals(&s, &grid, &profile));
    }
    println!("steps {}", steps);
    // zero upcrossings with linear interpolation
    let mut crossings = Vec::new();
    for p in series.windows(2) {
        let ((t0, w0), (t1, w1)) = (p[0], p[1]);
        if w0 <= 0.0 && w1 > 0.0 {
            crossings.push(t0 + (t1 - t0) * (-w0) / (w1 - w0));
        }
    }
    println!("upcrossings: {:?}", crossings);
    if crossings.len() >= 2 {
        let measured_period = (crossings[crossings.len()-1] - crossings[0]) / (crossings.len()-1) as f64;
        let omega_measured = 2.0 * std::f64::consts::PI / measured_period;
        println!("omega measured {:.6}  rel err {:.4}", omega_measured, (omega_measured-omega).abs()/omega);
    }
    // H_lin drift per buoyancy period
    let h0 = samples[0].h_lin;
    let mut worst = 0.0f64;
    for smp in &samples {
        let periods = smp.t / (2.0*std::f64::consts::PI/n);
        let allowed = 0.01 * periods.max(1e-9);
        let drift = (smp.h_lin - h0).abs() / h0;
        if periods > 0.05 { worst = worst.max(drift / periods); }
        let _ = allowed;
    }
    println!("worst H_lin drift per buoyancy period: {:.5}", worst);
    println!("c = N*D/pi = {:.6}", max_linear_phase_speed(&profile, 0.25));
}
