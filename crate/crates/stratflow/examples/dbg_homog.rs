use stratflow::*;

fn main() {
    let h: f64 = std::env::var("DBG_H").ok().and_then(|s| s.parse().ok()).unwrap_or(0.005);
    let c: f64 = std::env::var("DBG_C").ok().and_then(|s| s.parse().ok()).unwrap_or(0.4);
    let mut sc = preset("homogeneous").unwrap().with_h(h)
        .with_snapshots(&[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0]);
    sc.solver.courant = c;
    let t0 = std::time::Instant::now();
    let out = run(&sc).unwrap();
    let xi0 = out.snapshots[0].xi.max_abs();
    println!("elapsed {:.1?}  max|xi(0)| = {:.4}", t0.elapsed(), xi0);
    let mut worst = 0.0f64;
    for snap in &out.snapshots {
        let r = snap.xi.max_abs() / xi0;
        worst = worst.max(r);
        println!("t {:.2}  max|xi| ratio {:.5}", snap.t, r);
    }
    println!("worst ratio {:.5} (gate 1.02)", worst);
    let mix_max = out.report.samples.iter().map(|s| s.mixing_fraction).fold(0.0f64, f64::max);
    println!("max mixing {:.3e} (must be 0)", mix_max);
    // momentum symmetry: sum rho_bar u h^2
    let g = sc.grid().unwrap();
    let h2 = g.h * g.h;
    for snap in [&out.snapshots[0], out.snapshots.last().unwrap()] {
        let mut mom = 0.0;
        for k in 0..g.nz { for i in 0..=g.nx {
            let rf = if i == 0 { snap.rho.at(0,k) } else if i == g.nx { snap.rho.at(g.nx-1,k) } else { 0.5*(snap.rho.at(i-1,k)+snap.rho.at(i,k)) };
            mom += rf * snap.u.at(i,k) * h2;
        }}
        println!("t {:.2} total x-momentum {:.3e} (scale bound 9.5e-10)", snap.t, mom);
    }
    println!("verdicts all pass: {}", out.report.verdict.all_pass());
}
