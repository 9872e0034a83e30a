use stratflow::*;

fn main() {
    let t0 = std::time::Instant::now();
    let sc = preset("coarse").unwrap().with_t_end(9.0).with_snapshots(&[3.0, 7.0, 9.0]).with_diag_interval(10);
    let out = run(&sc).unwrap();
    let s = &out.report.samples;
    let first = &s[0];
    println!("elapsed {:.1?} samples {} snapshots {}", t0.elapsed(), s.len(), out.snapshots.len());
    println!("KE0(h_lin) {:.6e}  Hnonl0 {:.6e}  F0 {:.8}", first.h_lin, first.h_nonl, first.f);
    let mut worst_f_rise = 0.0f64; let mut fmin = f64::INFINITY;
    let mut worst_h_rise = 0.0f64; let mut hmin = f64::INFINITY;
    let mut max_e_drift = 0.0f64; let mut max_m_drift = 0.0f64;
    for smp in s {
        worst_f_rise = worst_f_rise.max(smp.f - fmin); fmin = fmin.min(smp.f);
        worst_h_rise = worst_h_rise.max(smp.h_nonl - hmin); hmin = hmin.min(smp.h_nonl);
        max_e_drift = max_e_drift.max((smp.hydro_energy - first.hydro_energy).abs());
        max_m_drift = max_m_drift.max(((smp.mass - first.mass)/first.mass).abs());
    }
    println!("max |E-E0| {:.4e}  (2% KE0 = {:.4e})", max_e_drift, 0.02*first.h_lin);
    println!("worst F rise {:.4e}  (tol {:.4e})", worst_f_rise, 1e-8*first.f.abs());
    println!("worst H rise {:.4e}  (tol {:.4e})", worst_h_rise, 1e-6*first.h_nonl.abs());
    println!("max mass drift {:.4e}", max_m_drift);
    for smp in s.iter().filter(|x| (x.t - 3.0).abs()<0.05 || (x.t-7.0).abs()<0.05 || (x.t-9.0).abs()<0.05).take(12) {
        println!("t {:.3}  mix {:.4}  F {:.6}  H {:.6e}  E {:.8e}", smp.t, smp.mixing_fraction, smp.f, smp.h_nonl, smp.hydro_energy);
    }
    let verdict = &out.report.verdict;
    println!("verdict: energy {} F {} H {} mass {}", verdict.energy_conserved.pass, verdict.f_monotone.pass, verdict.h_nonl_monotone.pass, verdict.mass_conserved.pass);
}
