//! Command-line front end: scenario sweeps (`run`), randomized property
//! suites (`verify`), and closed-form vs joint-evolver comparisons
//! (`oracle`). Exit code 0 only when every bound check passes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qubit_cavity::scenario::{
    apply_overrides, emit_outputs, preset, run_scenario, ScenarioConfig, PRESET_NAMES,
};
use qubit_cavity::sweeps::{
    coherent_mixed_entropy_gap, dephasing_bound_sweep, dephasing_oracle_check,
    dephasing_recurrence_check, dissipative_bound_sweep, dissipative_oracle_ladder, LadderSetup,
};

#[derive(Parser)]
#[command(name = "qubit-cavity", version, about = "Qubit-cavity interaction sweeps and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its data files.
    Run(RunArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
    /// Compare the closed forms against the joint Fock-space evolver.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario configuration file (JSON).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled configuration name (fig1-te1, fig1-te100, fig2, fig3).
    #[arg(long)]
    preset: Option<String>,
    /// Dotted-path overrides, e.g. --set env_temperature=100.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; defaults to the config's output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Draws per randomized sweep.
    #[arg(long, default_value_t = 10_000)]
    samples: u32,
    #[arg(long, default_value_t = 0x51_6d_61_78)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleCase {
    /// Energy-exchanging coupling (second-order model).
    SigmaX,
    /// Pure-dephasing coupling (exact model).
    SigmaZ,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    case: OracleCase,
    /// Coupling constant; for sigma-x this calibrates the window and
    /// anchors a λ, λ/2, λ/4 ladder.
    #[arg(long, default_value_t = 0.02)]
    lambda: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(args: &RunArgs) -> Result<(ScenarioConfig, Option<String>), String> {
    let (mut value, preset_name) = match (&args.config, &args.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            (value, None)
        }
        (None, Some(name)) => {
            let config = preset(name).ok_or_else(|| {
                format!(
                    "unknown preset '{name}'; available: {}",
                    PRESET_NAMES.join(", ")
                )
            })?;
            let value = serde_json::to_value(&config).map_err(|e| e.to_string())?;
            (value, Some(name.clone()))
        }
        (None, None) => return Err("pass --config <file> or --preset <name>".into()),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    apply_overrides(&mut value, &args.set).map_err(|e| e.to_string())?;
    let config: ScenarioConfig =
        serde_json::from_value(value).map_err(|e| format!("config: {e}"))?;
    config.validate().map_err(|e| e.to_string())?;
    Ok((config, preset_name))
}

fn cmd_run(args: RunArgs) -> Result<bool, String> {
    let (config, preset_name) = load_config(&args)?;
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output_dir));
    let result = run_scenario(&config).map_err(|e| e.to_string())?;
    let written = emit_outputs(&result, &config, preset_name.as_deref(), &out_dir)
        .map_err(|e| e.to_string())?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    if let Some((lo, hi)) = result.gap_range() {
        println!("landauer gap range: [{lo:.6e}, {hi:.6e}]");
    }
    let ok = result.all_bounds_hold();
    if !ok {
        eprintln!("bound check FAILED on at least one row");
    }
    Ok(ok)
}

fn report_line(name: &str, ok: bool, detail: &str) -> bool {
    println!("{}  {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, String> {
    let mut all = true;

    let sx = dissipative_bound_sweep(args.samples, args.seed).map_err(|e| e.to_string())?;
    all &= report_line(
        "energy-exchange bound sweep",
        sx.violations == 0,
        &format!(
            "{} draws, min gap {:.3e}, {} guarded",
            sx.samples, sx.min_gap, sx.rejected
        ),
    );
    all &= report_line(
        "coherence-loss / p_minus non-negativity",
        sx.min_p_minus >= -1e-14 && sx.min_delta_d >= -1e-14,
        &format!("min p_minus {:.3e}, min delta_d {:.3e}", sx.min_p_minus, sx.min_delta_d),
    );
    all &= report_line(
        "entropy-change ordering (coherent <= mixed)",
        sx.ordering_violations == 0,
        &format!("{} violations", sx.ordering_violations),
    );

    let sz = dephasing_bound_sweep(args.samples, args.seed ^ 0xdead).map_err(|e| e.to_string())?;
    all &= report_line(
        "dephasing bound sweep",
        sz.violations == 0,
        &format!("{} draws, min gap {:.3e}", sz.samples, sz.min_gap),
    );

    let rec = dephasing_recurrence_check(100).map_err(|e| e.to_string())?;
    all &= report_line(
        "recurrence at 2L",
        rec.chi_at_period >= 1.0 - 1e-9
            && rec.heat_at_period <= 1e-9 * rec.heat_max
            && rec.periodicity_defect <= 1e-9,
        &format!(
            "chi(2L) = {:.12}, periodicity defect {:.2e}",
            rec.chi_at_period, rec.periodicity_defect
        ),
    );

    let gap = coherent_mixed_entropy_gap(1e-8).map_err(|e| e.to_string())?;
    all &= report_line(
        "process coincidence as p -> 0",
        gap < 1e-6,
        &format!("entropy gap {gap:.3e} at p = 1e-8"),
    );

    Ok(all)
}

fn cmd_oracle(args: OracleArgs) -> Result<bool, String> {
    match args.case {
        OracleCase::SigmaX => {
            let lambdas = [args.lambda, args.lambda / 2.0, args.lambda / 4.0];
            let setup = LadderSetup {
                calibration_lambda: args.lambda,
                ..LadderSetup::default()
            };
            let points = dissipative_oracle_ladder(&lambdas, &setup).map_err(|e| e.to_string())?;
            println!("lambda      delta_p_err   delta_d_err   heat_err");
            for p in &points {
                println!(
                    "{:<10.5} {:>12.4e}  {:>12.4e}  {:>12.4e}",
                    p.lambda,
                    p.delta_p_err(),
                    p.delta_d_err(),
                    p.heat_err()
                );
            }
            let top = &points[0];
            let within = top.delta_p_err() <= 0.05 * top.delta_p_oracle.abs()
                && top.delta_d_err() <= 0.05 * top.delta_d_oracle.abs()
                && top.heat_err() <= 0.05 * top.heat_oracle.abs();
            let mut shrinks = true;
            for pair in points.windows(2) {
                shrinks &= pair[0].delta_p_err() >= 8.0 * pair[1].delta_p_err()
                    && pair[0].delta_d_err() >= 8.0 * pair[1].delta_d_err()
                    && pair[0].heat_err() >= 8.0 * pair[1].heat_err();
            }
            let ok = within && shrinks;
            println!(
                "{}  within 5% at lambda = {}; discrepancy shrinks >= 8x per halving: {}",
                if ok { "PASS" } else { "FAIL" },
                args.lambda,
                shrinks
            );
            Ok(ok)
        }
        OracleCase::SigmaZ => {
            let windows = [0.5, 1.0, std::f64::consts::FRAC_PI_2, 2.0, 3.0, 5.5];
            let report = dephasing_oracle_check(0.2, args.lambda, 31, &windows)
                .map_err(|e| e.to_string())?;
            let ok = report.population_err <= 1e-10
                && report.coherence_err <= 1e-6
                && report.heat_err <= 1e-6;
            println!(
                "population err {:.3e}, coherence err {:.3e}, heat err {:.3e}, leak {:.3e}",
                report.population_err,
                report.coherence_err,
                report.heat_err,
                report.truncation_leak
            );
            println!("{}  exact dephasing solution vs evolver", if ok { "PASS" } else { "FAIL" });
            Ok(ok)
        }
    }
}
