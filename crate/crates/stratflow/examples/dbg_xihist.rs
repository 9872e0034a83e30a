use stratflow::*;
use stratflow::streamfunction::vorticity;

fn main() {
    let sc = preset("homogeneous").unwrap().with_h(0.005);
    let grid = sc.grid().unwrap();
    let cfg = sc.solver;
    let state = init::gaussian_vortex_init(&grid, &sc.profile, &sc.vortex, &cfg).unwrap();
    let mut stepper = Stepper::new(grid, sc.profile, cfg).unwrap();
    let xi_init = vorticity(&state, &grid);
    let xi0 = xi_init.max_abs();
    let ens = |xi: &ScalarField| -> f64 { xi.values().iter().map(|v| v*v).sum::<f64>() };
    let ens0 = ens(&xi_init);
    let mut s = state;
    let mut step = 0usize;
    let (mut worst, mut worst_t, mut wi, mut wk) = (0.0f64, 0.0f64, 0usize, 0usize);
    let mut worst_interior = 0.0f64;
    while s.t < 7.0 {
        let (ns, _) = stepper.step(&s, 7.0 - s.t + 1e-9).unwrap();
        s = ns;
        step += 1;
        if step % 5 == 0 {
            let xi = vorticity(&s, &grid);
            for k in 0..=grid.nz { for i in 0..=grid.nx {
                let r = xi.at(i, k).abs() / xi0;
                if r > worst { worst = r; worst_t = s.t; wi = i; wk = k; }
                let far = k >= 3 && k + 3 <= grid.nz && i >= 3 && i + 3 <= grid.nx;
                if far && r > worst_interior { worst_interior = r; }
            }}
            if step % 100 == 0 {
                println!("t {:5.2}  max ratio so far {:.4}  enstrophy {:.4}", s.t, worst, ens(&xi)/ens0);
            }
        }
    }
    println!("worst {:.4} at t={:.2} node ({},{}) [z={:.3}]  worst>=3-off-wall {:.4}", worst, worst_t, wi, wk, wk as f64*grid.h, worst_interior);
}
