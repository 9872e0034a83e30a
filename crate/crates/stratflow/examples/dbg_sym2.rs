use stratflow::*;
use stratflow::diagnostics::mixing_fraction;

fn main() {
    let h: f64 = std::env::var("DBG_H").ok().and_then(|s| s.parse().ok()).unwrap_or(0.005);
    let sc = preset("coarse").unwrap().with_h(h).with_t_end(3.2)
        .with_snapshots(&[0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    let out = run(&sc).unwrap();
    let g = sc.grid().unwrap();
    let (ci, ck) = ((sc.vortex.x0 / g.h).round() as usize, (sc.vortex.z0 / g.h).round() as usize);
    for snap in &out.snapshots {
        let psi_max = snap.psi.max_abs();
        let mut worst = 0.0f64;
        let mut l2n = 0.0; let mut l2d = 0.0;
        for k in 0..=2*ck { for i in 0..=2*ci {
            let (mi, mk) = (2*ci - i, 2*ck - k);
            let d = snap.psi.at(i, k) - snap.psi.at(mi, mk);
            worst = worst.max(d.abs());
            l2n += d * d; l2d += snap.psi.at(i, k).powi(2);
        }}
        let state = State { t: snap.t, rho: snap.rho.clone(), u: snap.u.clone(), w: snap.w.clone(), p: snap.p.clone() };
        println!("t {:.2}: mixing {:.4}  psi max-asym {:.3}%  psi L2-asym {:.3}%",
            snap.t, mixing_fraction(&state, &g), 100.0*worst/psi_max, 100.0*(l2n/l2d).sqrt());
    }
}
