use stratflow::*;
use stratflow::field::{block_average, relative_l2};

fn main() {
    let t0 = std::time::Instant::now();
    let coarse_sc = preset("coarse").unwrap().with_h(0.01).with_t_end(3.0).with_snapshots(&[3.0]);
    let fine_sc = preset("coarse").unwrap().with_h(0.005).with_t_end(3.0).with_snapshots(&[3.0]);
    let (co, fo) = rayon::join(|| run(&coarse_sc).unwrap(), || run(&fine_sc).unwrap());
    let cg = coarse_sc.grid().unwrap();
    let fg = fine_sc.grid().unwrap();
    let fine_on_coarse = block_average(&fo.snapshots[0].rho, &fg, &cg);
    let rel = relative_l2(&co.snapshots[0].rho, &fine_on_coarse);
    println!("relative L2(rho) coarse-vs-fine at t=3: {:.5e} (gate 0.05)", rel);
    // perturbation-level comparison for context
    let profile = coarse_sc.profile;
    let mut dc = co.snapshots[0].rho.clone();
    let mut df = fine_on_coarse.clone();
    for k in 0..cg.nz { for i in 0..cg.nx {
        let bg = profile.rho0_unchecked(cg.zc(k));
        dc.set(i, k, dc.at(i, k) - bg);
        df.set(i, k, df.at(i, k) - bg);
    }}
    println!("perturbation-level relative L2: {:.4}", relative_l2(&dc, &df));
    println!("elapsed {:.1?}", t0.elapsed());
}
