use stratflow::*;

fn main() {
    let sc = preset("coarse").unwrap().with_t_end(0.6).with_snapshots(&[0.2, 0.3, 0.4, 0.5, 0.6]);
    let out = run(&sc).unwrap();
    let g = sc.grid().unwrap();
    let profile = sc.profile;
    let (ci, ck) = ((sc.vortex.x0 / g.h).round() as usize, (sc.vortex.z0 / g.h).round() as usize);
    for snap in &out.snapshots {
        let mut pert_max = 0.0f64; let mut worst = 0.0f64;
        for k in 0..2*ck { for i in 0..2*ci {
            let d = snap.rho.at(i, k) - profile.rho0_unchecked(g.zc(k));
            pert_max = pert_max.max(d.abs());
            let (mi, mk) = (2*ci-1-i, 2*ck-1-k);
            let dm = snap.rho.at(mi, mk) - profile.rho0_unchecked(g.zc(mk));
            worst = worst.max((d + dm).abs());
        }}
        println!("t {:.2}: rho-pert asym {:.4}%", snap.t, 100.0*worst/pert_max);
    }
}
