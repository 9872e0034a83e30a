use stratflow::*;

fn main() {
    let sc = preset("coarse").unwrap().with_t_end(3.0).with_snapshots(&[1.0, 3.0]);
    let out = run(&sc).unwrap();
    let g = sc.grid().unwrap();
    let profile = sc.profile;
    // vortex center (0.5, 0.125) = node (100, 25) at h=0.005
    let (ci, ck) = ((sc.vortex.x0 / g.h).round() as usize, (sc.vortex.z0 / g.h).round() as usize);
    for snap in &out.snapshots {
        // psi centrally symmetric on nodes: psi(ci+a, ck+b) == psi(ci-a, ck-b)
        let mut worst_psi = 0.0f64;
        let psi_max = snap.psi.max_abs();
        for k in 0..=g.nz { for i in 0..=g.nx {
            let (mi, mk) = (2*ci - i.min(2*ci), 2*ck - k.min(2*ck));
            if i <= 2*ci && k <= 2*ck {
                worst_psi = worst_psi.max((snap.psi.at(i, k) - snap.psi.at(mi, mk)).abs());
            }
        }}
        // density perturbation antisymmetric on cells about the center node:
        // cell (i,k) center mirrors to cell (2ci-1-i, 2ck-1-k)
        let mut worst_rho = 0.0f64;
        let mut pert_max = 0.0f64;
        for k in 0..g.nz { for i in 0..g.nx {
            let d = snap.rho.at(i, k) - profile.rho0_unchecked(g.zc(k));
            pert_max = pert_max.max(d.abs());
        }}
        for k in 0..g.nz { for i in 0..g.nx {
            if i + 1 <= 2*ci - 1 - i + 1 && i <= 2*ci - 1 && k <= 2*ck - 1 {
                let (mi, mk) = (2*ci - 1 - i, 2*ck - 1 - k);
                if mi < g.nx && mk < g.nz {
                    let d = snap.rho.at(i, k) - profile.rho0_unchecked(g.zc(k));
                    let dm = snap.rho.at(mi, mk) - profile.rho0_unchecked(g.zc(mk));
                    worst_rho = worst_rho.max((d + dm).abs());
                }
            }
        }}
        println!("t {:.1}: psi asym {:.3e} of max {:.3e} ({:.3}%)   rho-pert asym {:.3e} of max {:.3e} ({:.3}%)",
            snap.t, worst_psi, psi_max, 100.0*worst_psi/psi_max, worst_rho, pert_max, 100.0*worst_rho/pert_max);
    }
}
