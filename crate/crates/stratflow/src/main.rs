//! Scenario CLI: run presets, sweep stratification scales, exercise the
//! closed-form vortex oracles, and re-check saved diagnostics.
//!
//! Exit code 0 means every admissibility verdict passed.

use clap::{Parser, Subcommand};
use stratflow::diagnostics::{admissibility_report, Tolerances};
use stratflow::output::{read_diagnostics, write_diagnostics, write_snapshot};
use stratflow::{analytic, preset, run, run_sweep, Error, RunOutput, ScenarioConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "stratflow",
    about = "2D stratified incompressible Euler solver with admissibility diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write snapshots plus diagnostics.csv.
    Simulate {
        /// Preset name (baseline, coarse, H-half, H-double, H-huge,
        /// homogeneous, tank-50cm).
        #[arg(long, default_value = "coarse")]
        preset: String,
        /// Plain key=value configuration file; overrides the preset.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid spacing override (m).
        #[arg(long)]
        h: Option<f64>,
        /// Stratification scale override (m).
        #[arg(long, name = "H")]
        scale: Option<f64>,
        /// End time override (s).
        #[arg(long)]
        t_end: Option<f64>,
        /// Output directory (default: $STRATFLOW_OUT or ./out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several presets concurrently and tabulate mixing against the
    /// stratification scale.
    Sweep {
        /// Comma-separated preset names.
        #[arg(long, value_delimiter = ',')]
        presets: Vec<String>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form vortex oracles.
    Analytic {
        /// Run the oracle self-checks and report pass/fail.
        #[arg(long)]
        check: bool,
    },
    /// Evaluate the admissibility verdicts of a saved diagnostics.csv.
    Verify { diagnostics: PathBuf },
}

fn default_out() -> PathBuf {
    std::env::var_os("STRATFLOW_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn build_scenario(
    preset_name: &str,
    config: Option<&Path>,
    h: Option<f64>,
    scale: Option<f64>,
    t_end: Option<f64>,
    out: Option<PathBuf>,
) -> Result<ScenarioConfig, Error> {
    let mut sc = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            stratflow::parse_config(&text)?
        }
        None => preset(preset_name)?,
    };
    if let Some(h) = h {
        sc = sc.with_h(h);
    }
    if let Some(scale) = scale {
        sc = sc.with_scale(scale);
    }
    if let Some(t_end) = t_end {
        sc = sc.with_t_end(t_end);
    }
    sc = sc.with_output_dir(out.unwrap_or_else(default_out));
    sc.validate()?;
    Ok(sc)
}

fn write_outputs(sc: &ScenarioConfig, out: &RunOutput) -> Result<(), Error> {
    let dir = sc.output_dir.join(&sc.name);
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let grid = sc.grid()?;
    for snap in &out.snapshots {
        let path = dir.join(format!("snapshot_t{:07.3}s.csv", snap.t));
        write_snapshot(snap, &grid, &path)?;
    }
    write_diagnostics(&out.report.samples, &dir.join("diagnostics.csv"))?;
    Ok(())
}

fn print_verdict(name: &str, out: &RunOutput) {
    let v = &out.report.verdict;
    let line = |label: &str, pass: bool, detail: String| {
        println!("  {:<22} {}  {}", label, if pass { "pass" } else { "FAIL" }, detail);
    };
    println!("{name}:");
    line(
        "mass conserved",
        v.mass_conserved.pass,
        format!("max drift {:.3e} (bound {:.3e})", v.mass_conserved.max_drift, v.mass_conserved.bound),
    );
    line(
        "energy conserved",
        v.energy_conserved.pass,
        format!("max drift {:.3e} (bound {:.3e})", v.energy_conserved.max_drift, v.energy_conserved.bound),
    );
    line(
        "H_nonl non-increasing",
        v.h_nonl_monotone.pass,
        format!("worst rise {:.3e} (bound {:.3e})", v.h_nonl_monotone.max_violation, v.h_nonl_monotone.bound),
    );
    line(
        "F non-increasing",
        v.f_monotone.pass,
        format!("worst rise {:.3e} (bound {:.3e})", v.f_monotone.max_violation, v.f_monotone.bound),
    );
}

fn analytic_check() -> bool {
    let vortex = analytic::AnalyticVortex::new(0.05, 50.0, 1000.0);
    let mut all = true;
    let mut check = |label: &str, ok: bool| {
        println!("  {:<46} {}", label, if ok { "pass" } else { "FAIL" });
        all &= ok;
    };

    let r_star = analytic::v_argmax(&vortex, 0.3, 1e-12 * 0.05);
    check(
        "rotation speed peaks at R = L",
        (r_star - vortex.scale).abs() <= 1e-7 * vortex.scale,
    );

    let fd_error = |delta: f64| {
        let mut worst = 0.0f64;
        for n in 1..40 {
            let r = 0.3 * vortex.scale + 3.5 * vortex.scale * n as f64 / 40.0;
            let psi = |rr: f64| analytic::psi_stationary(rr, &vortex);
            let fd = (psi(r + delta) - 2.0 * psi(r) + psi(r - delta)) / (delta * delta)
                + (psi(r + delta) - psi(r - delta)) / (2.0 * delta * r);
            worst = worst.max((fd - analytic::laplacian_psi(r, &vortex)).abs());
        }
        worst
    };
    let ratio = fd_error(vortex.scale / 64.0) / fd_error(vortex.scale / 128.0);
    check(
        "laplacian oracle converges at second order",
        (3.7..=4.3).contains(&ratio),
    );

    let mut xi1_zero = true;
    for (x, z) in [(0.02, 0.01), (-0.07, 0.03), (0.3, -0.2)] {
        xi1_zero &= analytic::xi1(x, z, 0.0, &vortex) == 0.0;
    }
    check("late-time vorticity vanishes at t = 0", xi1_zero);

    let mut odd = true;
    let mut seed = 0x5DEECE66Du64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for _ in 0..20 {
        let (x, z, t) = (0.3 * next(), 0.3 * next(), 5.0 * (next() + 0.5));
        let (a, b) = (analytic::xi1(x, z, t, &vortex), analytic::xi1(-x, z, t, &vortex));
        odd &= (a + b).abs() <= 1e-12 * a.abs().max(1e-300);
    }
    check("late-time vorticity is odd in x", odd);

    let mut ratio_ok = true;
    for n in 0..100 {
        let r = 0.07 * n as f64;
        if (r - 2.0 * vortex.scale).abs() < 1e-9 {
            continue;
        }
        let q = analytic::laplacian_psi(r, &vortex) / analytic::xi0(r, &vortex);
        ratio_ok &= (q + 1.0 / vortex.scale).abs() <= 1e-9 / vortex.scale;
    }
    check("printed xi0 differs from laplacian by -1/L", ratio_ok);

    all
}

fn real_main() -> Result<bool, Error> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate {
            preset,
            config,
            h,
            scale,
            t_end,
            out,
        } => {
            let sc = build_scenario(&preset, config.as_deref(), h, scale, t_end, out)?;
            println!(
                "running '{}' ({}x{} cells, h = {} m, t_end = {} s)",
                sc.name,
                sc.grid()?.nx,
                sc.grid()?.nz,
                sc.h,
                sc.t_end
            );
            let output = run(&sc)?;
            write_outputs(&sc, &output)?;
            print_verdict(&sc.name, &output);
            println!("wrote {}", sc.output_dir.join(&sc.name).display());
            Ok(output.report.verdict.all_pass())
        }
        Command::Sweep {
            presets,
            h,
            t_end,
            out,
        } => {
            let out_dir = out.unwrap_or_else(default_out);
            let mut scenarios = Vec::new();
            for name in &presets {
                let mut sc = preset(name)?;
                if let Some(h) = h {
                    sc = sc.with_h(h);
                }
                if let Some(t_end) = t_end {
                    sc = sc.with_t_end(t_end);
                }
                scenarios.push(sc.with_output_dir(out_dir.clone()));
            }
            let probe = scenarios.iter().map(|s| s.t_end).fold(f64::INFINITY, f64::min);
            let sweep = run_sweep(&scenarios, probe);
            let mut all = true;
            for (name, result) in &sweep.runs {
                match result {
                    Ok(output) => {
                        let sc = scenarios.iter().find(|s| &s.name == name).unwrap();
                        write_outputs(sc, output)?;
                        print_verdict(name, output);
                        all &= output.report.verdict.all_pass();
                    }
                    Err(e) => {
                        println!("{name}: run failed: {e}");
                        all = false;
                    }
                }
            }
            println!("\n{:<14} {:>10} {:>16} {:>14}", "scenario", "H (m)", "mixing@probe", "F-decay");
            for row in &sweep.table {
                println!(
                    "{:<14} {:>10.2} {:>16.4} {:>14.6e}",
                    row.name, row.scale, row.mixing_fraction_at_probe, row.f_decay
                );
            }
            Ok(all)
        }
        Command::Analytic { check } => {
            if check {
                println!("closed-form vortex oracle checks:");
                Ok(analytic_check())
            } else {
                let vortex = analytic::AnalyticVortex::new(0.05, 50.0, 1000.0);
                println!("vortex scale L = {} m, rotation peaks at v(L) = {:.4} m/s", vortex.scale, analytic::v_of_r(vortex.scale, &vortex));
                println!("run with --check for the oracle suite");
                Ok(true)
            }
        }
        Command::Verify { diagnostics } => {
            let samples = read_diagnostics(&diagnostics)?;
            let verdict = admissibility_report(&samples, &Tolerances::default())?;
            let fake = RunOutput {
                snapshots: Vec::new(),
                report: stratflow::diagnostics::DiagnosticsReport {
                    samples,
                    verdict,
                },
            };
            print_verdict(&diagnostics.display().to_string(), &fake);
            Ok(verdict.all_pass())
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
