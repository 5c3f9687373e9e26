//! `pipeclimb`: scenario runner for the in-pipe climbing robot simulator.
//!
//! Subcommands:
//!
//! - `speeds`    print the no-slip track speeds in a bend
//! - `simulate`  run a scenario file, write per-run CSVs and a summary
//! - `validate`  compare the model against reference observations
//! - `report`    run a scenario and render tables plus speed plots
//!
//! Exit codes: 0 success, 1 config/parse error, 2 invalid geometry,
//! 3 simulation or output error, 4 validation out of tolerance. Every
//! nonzero exit prints one machine-parseable line on stderr:
//! `error_code=<n> msg="..."`.

mod scenario;
mod validate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pipeclimb::analysis::{compare_orientation, render_report, ComparisonRow, ReportRow};
use pipeclimb::error::Error;
use pipeclimb::kinematics::{bend_track_speeds, ModuleOrientation};
use pipeclimb::reference;
use pipeclimb::sim::{run, RobotConfig, SimMode, TraversalReport};

use scenario::{load_scenario, Scenario};

#[derive(Parser)]
#[command(
    name = "pipeclimb",
    version,
    about = "Kinematic simulator for a tracked in-pipe climbing robot with a passive three-output differential"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the three no-slip track speeds and their sum for a bend pose.
    Speeds {
        /// Robot-center speed, mm/s
        #[arg(long = "v")]
        v: f64,
        /// Bend centerline radius, mm
        #[arg(long = "R")]
        bend_radius: f64,
        /// Pipe inner radius, mm
        #[arg(long = "r")]
        pipe_radius: f64,
        /// Insertion orientation of module A, degrees
        #[arg(long = "mu")]
        mu: f64,
    },
    /// Run every orientation/mode of a scenario and write CSV time series.
    Simulate {
        /// Scenario file path
        #[arg(long = "scenario")]
        scenario: PathBuf,
        /// Output directory (overrides the scenario and PIPECLIMB_OUT)
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Compare theoretical speeds against reference observations.
    Validate {
        /// Observation file replacing the bundled reference data
        #[arg(long = "reference")]
        reference: Option<PathBuf>,
    },
    /// Run a scenario and render summary tables and speed-profile plots.
    Report {
        /// Scenario file path
        #[arg(long = "scenario")]
        scenario: PathBuf,
        /// Output directory (overrides the scenario and PIPECLIMB_OUT)
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
}

/// An error carrying its process exit code.
struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Self {
            code,
            msg: msg.into(),
        }
    }
}

/// 1 for config/parse problems, 3 for everything that happens mid-run.
fn config_phase(e: Error) -> CliError {
    CliError::new(1, e.to_string())
}

fn run_phase(e: Error) -> CliError {
    CliError::new(3, e.to_string())
}

fn escape_msg(msg: &str) -> String {
    msg.replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', "; ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // keep the single-line stderr contract even for usage errors
            let msg = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("error_code=1 msg=\"{}\"", escape_msg(&msg));
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Speeds {
            v,
            bend_radius,
            pipe_radius,
            mu,
        } => cmd_speeds(v, bend_radius, pipe_radius, mu),
        Command::Simulate { scenario, out_dir } => cmd_simulate(&scenario, out_dir.as_deref()),
        Command::Validate { reference } => cmd_validate(reference.as_deref()),
        Command::Report { scenario, out_dir } => cmd_report(&scenario, out_dir.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error_code={} msg=\"{}\"", e.code, escape_msg(&e.msg));
            ExitCode::from(e.code)
        }
    }
}

fn cmd_speeds(v: f64, bend_radius: f64, pipe_radius: f64, mu: f64) -> Result<(), CliError> {
    let speeds = bend_track_speeds(v, bend_radius, pipe_radius, mu)
        .map_err(|e| CliError::new(2, e.to_string()))?;
    println!("v_tA {:.3}", speeds.v_a);
    println!("v_tB {:.3}", speeds.v_b);
    println!("v_tC {:.3}", speeds.v_c);
    println!("sum {:.3}", speeds.sum());
    Ok(())
}

/// Semantic checks beyond parsing; failures are config errors.
fn check_scenario(scenario: &Scenario) -> Result<(), CliError> {
    scenario.robot.validate().map_err(config_phase)?;
    scenario
        .settings_for(scenario.modes[0])
        .validate()
        .map_err(config_phase)
}

/// Output directory precedence: CLI flag, scenario key, PIPECLIMB_OUT,
/// then `./pipeclimb-out`.
fn resolve_out_dir(cli_dir: Option<&Path>, scenario: &Scenario) -> PathBuf {
    if let Some(d) = cli_dir {
        return d.to_path_buf();
    }
    if let Some(d) = &scenario.out_dir {
        return d.clone();
    }
    if let Ok(d) = std::env::var("PIPECLIMB_OUT") {
        if !d.is_empty() {
            return PathBuf::from(d);
        }
    }
    PathBuf::from("pipeclimb-out")
}

/// Run every (orientation, mode) combination of a scenario. Runs are
/// independent and fan out across threads; results are joined back in
/// input order so output stays deterministic.
fn run_sweep(scenario: &Scenario) -> Result<Vec<(String, f64, TraversalReport)>, CliError> {
    let mut jobs: Vec<(f64, SimMode)> = Vec::new();
    for &mu in &scenario.mu_list_deg {
        for &mode in &scenario.modes {
            jobs.push((mu, mode));
        }
    }
    let results: Vec<Result<TraversalReport, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(mu, mode)| {
                let network = &scenario.network;
                let robot = RobotConfig {
                    orientation: ModuleOrientation::new(mu),
                    ..scenario.robot
                };
                let settings = scenario.settings_for(mode);
                scope.spawn(move || run(network, &robot, &settings))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    });

    let mut out = Vec::with_capacity(jobs.len());
    for ((mu, mode), result) in jobs.into_iter().zip(results) {
        let report = result.map_err(run_phase)?;
        out.push((scenario.run_label(mu, mode), mu, report));
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::new(3, format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_simulate(scenario_path: &Path, cli_out: Option<&Path>) -> Result<(), CliError> {
    let scenario = load_scenario(scenario_path).map_err(config_phase)?;
    check_scenario(&scenario)?;
    let out_dir = resolve_out_dir(cli_out, &scenario);
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::new(3, format!("cannot create {}: {e}", out_dir.display())))?;

    let runs = run_sweep(&scenario)?;
    let mut rows = Vec::with_capacity(runs.len());
    for (label, _, report) in &runs {
        write_file(&out_dir.join(format!("{label}.csv")), &report.to_csv())?;
        rows.push(ReportRow {
            label: label.clone(),
            report: report.clone(),
        });
    }

    let rendered = render_report(&rows, &[], None).map_err(run_phase)?;
    write_file(
        &out_dir.join(format!("{}_summary.txt", scenario.name)),
        &rendered.text,
    )?;
    write_file(
        &out_dir.join(format!("{}_summary.csv", scenario.name)),
        &rendered.csv,
    )?;
    print!("{}", rendered.text);
    Ok(())
}

fn cmd_validate(reference_path: Option<&Path>) -> Result<(), CliError> {
    let (bends, straights) = match reference_path {
        Some(path) => validate::load_references(path).map_err(config_phase)?,
        None => validate::bundled_references(),
    };
    let rows = validate::build_validation(&bends, &straights).map_err(run_phase)?;
    print!("{}", validate::render_validation_table(&rows));
    if validate::all_gates_pass(&rows) {
        println!("validation: PASS");
        Ok(())
    } else {
        let failed = rows
            .iter()
            .filter(|r| r.pass == Some(false))
            .map(|r| format!("{} mu={}", r.label, r.mu_deg))
            .collect::<Vec<_>>()
            .join(", ");
        println!("validation: FAIL");
        Err(CliError::new(
            4,
            format!("validation out of tolerance: {failed}"),
        ))
    }
}

/// Bundled bend observations whose orientation appears in the scenario's
/// sweep, compared against the model at the reference geometry.
fn matching_comparisons(scenario: &Scenario) -> Result<Vec<ComparisonRow>, CliError> {
    let mut rows = Vec::new();
    for obs in reference::bend_observations() {
        if !scenario
            .mu_list_deg
            .iter()
            .any(|&mu| (mu - obs.mu_deg).abs() < 1e-9)
        {
            continue;
        }
        let comparison = compare_orientation(
            obs.mu_deg,
            reference::ELBOW_RADIUS_MM,
            reference::PIPE_RADIUS_MM,
            reference::BEND_REFERENCE_SPEED_MM_S,
            obs.observed,
        )
        .map_err(run_phase)?;
        rows.push(ComparisonRow {
            label: obs.label.clone(),
            mu_deg: obs.mu_deg,
            comparison,
            reported_ape_pct: obs.reported_ape_pct,
        });
    }
    Ok(rows)
}

fn cmd_report(scenario_path: &Path, cli_out: Option<&Path>) -> Result<(), CliError> {
    let scenario = load_scenario(scenario_path).map_err(config_phase)?;
    check_scenario(&scenario)?;
    let out_dir = resolve_out_dir(cli_out, &scenario);
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::new(3, format!("cannot create {}: {e}", out_dir.display())))?;

    let runs = run_sweep(&scenario)?;
    let rows: Vec<ReportRow> = runs
        .iter()
        .map(|(label, _, report)| ReportRow {
            label: label.clone(),
            report: report.clone(),
        })
        .collect();
    let comparisons = matching_comparisons(&scenario)?;

    let rendered = render_report(&rows, &comparisons, Some(&out_dir)).map_err(run_phase)?;
    for plot in &rendered.plot_files {
        println!("wrote {}", plot.display());
    }
    write_file(
        &out_dir.join(format!("{}_summary.txt", scenario.name)),
        &rendered.text,
    )?;
    write_file(
        &out_dir.join(format!("{}_summary.csv", scenario.name)),
        &rendered.csv,
    )?;
    print!("{}", rendered.text);
    Ok(())
}
