use stratflow::*;

fn main() {
    let t0 = std::time::Instant::now();
    let scenarios: Vec<ScenarioConfig> = ["H-half", "coarse", "H-double"]
        .iter()
        .map(|n| preset(n).unwrap().with_h(0.005).with_t_end(7.0).with_snapshots(&[3.0, 7.0]))
        .collect();
    let sweep = run_sweep(&scenarios, 7.0);
    for (name, result) in &sweep.runs {
        match result {
            Ok(out) => println!("{name}: ok, verdict pass = {}", out.report.verdict.all_pass()),
            Err(e) => println!("{name}: FAILED {e}"),
        }
    }
    for row in &sweep.table {
        println!("H = {:8.2}  {}  mixing(7s) = {:.4}  F-decay = {:.6e}", row.scale, row.name, row.mixing_fraction_at_probe, row.f_decay);
    }
    println!("elapsed {:.1?}", t0.elapsed());
}
