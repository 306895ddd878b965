//! Configured runs: simulate, replay stored snapshots through the monitor,
//! and calibrate constants.
//!
//! Output layout under `output.dir`:
//!
//! ```text
//! config.toml            effective configuration
//! constants.toml         fresh calibration, when configured
//! snapshots/frame_NNNNNN.obrg
//! report.toml            simulate; monitor writes monitor_report.toml
//! k_<i>.csv, envelope_u_<i>.csv   per configured pair i
//! envelope_theta.csv, envelope_phi.csv
//! ```

mod config;
mod presets;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{
    CalibrationSpec, ForcingPreset, ForcingSpec, GridSpec, InitialPreset, InitialSpec, MonitorSpec, OutputSpec,
    Overrides, PhysicsSpec, RunConfig, TimeSpec,
};
pub use presets::{forcing, initial_state};

use crate::dynamics::{run, SimState, Termination};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::io::{
    export_envelope, export_timeseries, read_constants, read_snapshot, write_constants, write_report, write_snapshot,
    ReportDocument,
};
use crate::lebesgue::TimeSeries;
use crate::monitor::{build_report, calibrate, CalibratedConstants, FieldFamily, MonitorReport, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;

pub const REPORT_FILE: &str = "report.toml";
pub const MONITOR_REPORT_FILE: &str = "monitor_report.toml";
pub const CONSTANTS_FILE: &str = "constants.toml";
pub const SNAPSHOT_DIR: &str = "snapshots";

#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub document: ReportDocument,
    pub termination: Termination,
    pub steps: usize,
    pub snapshots: Vec<PathBuf>,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Constants as configured: a fresh calibration on `grid`, a file, or none.
pub fn resolve_constants(config: &RunConfig, grid: &Grid) -> Result<Option<CalibratedConstants>> {
    let monitor = config.monitor.monitor_config();
    match &config.monitor.calibration {
        CalibrationSpec::None => Ok(None),
        CalibrationSpec::Fresh { seed, count, kind } => {
            let family = FieldFamily::new(grid, *seed, *count, *kind)?;
            Ok(Some(calibrate(&family, &monitor.pairs, &monitor.all_eps())?))
        }
        CalibrationSpec::File { path } => Ok(Some(read_constants(path)?)),
    }
}

fn write_series(report: &MonitorReport, dir: &Path) -> Result<()> {
    for (i, pair) in report.pairs.iter().enumerate() {
        if report.times.len() >= 2 {
            let k = TimeSeries::from_samples(report.times.clone(), pair.k.clone())?;
            export_timeseries(&k, dir.join(format!("k_{i}.csv")))?;
        }
        if let Some(env) = &pair.velocity_envelope {
            export_envelope(
                &env.times,
                &env.observed,
                &env.envelope,
                &env.contained,
                dir.join(format!("envelope_u_{i}.csv")),
            )?;
        }
    }
    for (name, env) in [("theta", &report.theta_envelope), ("phi", &report.phi_envelope)] {
        if let Some(env) = env {
            export_envelope(
                &env.times,
                &env.observed,
                &env.envelope,
                &env.contained,
                dir.join(format!("envelope_{name}.csv")),
            )?;
        }
    }
    Ok(())
}

/// Runs the configured simulation, writing snapshots at the sampling cadence
/// and the monitor report at the end. A blow-up still produces a report over
/// the finite part of the run.
pub fn simulate(config: &RunConfig) -> Result<SimulateOutcome> {
    config.validate()?;
    let grid = config.grid()?;
    let params = config.physics_params()?;
    let forcing = forcing(config, &grid);
    let initial = initial_state(config, &grid)?;
    let solver = config.solver_config();
    let dir = config.output.dir.clone();
    let snap_dir = dir.join(SNAPSHOT_DIR);
    create_dir(&snap_dir)?;

    let config_text = config.to_toml()?;
    fs::write(dir.join("config.toml"), &config_text).map_err(|e| Error::io(dir.join("config.toml"), e))?;
    let constants = resolve_constants(config, &grid)?;
    if matches!(config.monitor.calibration, CalibrationSpec::Fresh { .. }) {
        if let Some(c) = &constants {
            write_constants(c, dir.join(CONSTANTS_FILE))?;
        }
    }

    let mut traj = Trajectory::new();
    let mut snapshots = Vec::new();
    let record = |state: &SimState, traj: &mut Trajectory, snapshots: &mut Vec<PathBuf>| -> Result<()> {
        let path = snap_dir.join(format!("frame_{:06}.obrg", snapshots.len()));
        write_snapshot(state, &path)?;
        snapshots.push(path);
        traj.push(state.clone(), &forcing)
    };
    let outcome = run(
        initial,
        &params,
        &forcing,
        config.time.t_final,
        &solver,
        &mut |state: &SimState, _step: usize| record(state, &mut traj, &mut snapshots),
    )?;
    let last_t = traj.times().last().copied().unwrap_or(f64::NEG_INFINITY);
    if outcome.termination.is_blow_up() && outcome.final_state.t > last_t {
        record(&outcome.final_state, &mut traj, &mut snapshots)?;
    }

    let report = build_report(&traj, &params, constants.as_ref(), &config.monitor.monitor_config())?;
    write_series(&report, &dir)?;
    let document = ReportDocument::new(&config_text, report);
    write_report(&document, dir.join(REPORT_FILE))?;
    Ok(SimulateOutcome {
        document,
        termination: outcome.termination,
        steps: outcome.steps,
        snapshots,
    })
}

/// Monitor-only replay of stored frames matching `pattern`, in path order.
pub fn monitor(pattern: &str, config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let grid = config.grid()?;
    let params = config.physics_params()?;
    let forcing = forcing(config, &grid);
    let mut paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| Error::arg("pattern", e.to_string()))?
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::io(e.path().to_path_buf(), e.into()))?;
    paths.sort();
    if paths.len() < 3 {
        return Err(Error::InsufficientSnapshots {
            needed: 3,
            got: paths.len(),
        });
    }
    let mut traj = Trajectory::new();
    for path in &paths {
        let state = read_snapshot(path)?;
        grid.ensure_same(state.grid())?;
        traj.push(state, &forcing)?;
    }
    let constants = resolve_constants(config, &grid)?;
    let report = build_report(&traj, &params, constants.as_ref(), &config.monitor.monitor_config())?;
    let dir = &config.output.dir;
    create_dir(dir)?;
    let document = ReportDocument::new(&config.to_toml()?, report);
    write_report(&document, dir.join(MONITOR_REPORT_FILE))?;
    Ok(document)
}

/// Fresh calibration on the configured grid; writes `constants.toml`.
pub fn calibrate_constants(config: &RunConfig) -> Result<(CalibratedConstants, PathBuf)> {
    config.validate()?;
    if !matches!(config.monitor.calibration, CalibrationSpec::Fresh { .. }) {
        return Err(Error::Config {
            key: "monitor.calibration".into(),
            reason: "calibrate needs mode = \"fresh\" with a seed and count".into(),
        });
    }
    let grid = config.grid()?;
    let constants = resolve_constants(config, &grid)?.expect("fresh calibration yields constants");
    create_dir(&config.output.dir)?;
    let path = config.output.dir.join(CONSTANTS_FILE);
    write_constants(&constants, &path)?;
    Ok((constants, path))
}

fn load(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let mut config = RunConfig::load(path)?;
    config.apply(overrides);
    Ok(config)
}

fn fail(e: Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_FAILURE
}

fn summarize(report: &MonitorReport) {
    println!(
        "samples: {}  t: [{}, {}]  calibrated: {}",
        report.sample_count, report.t_start, report.t_end, report.calibrated
    );
    for p in &report.pairs {
        let t2: Vec<String> = p
            .theorem2
            .iter()
            .map(|v| format!("eps {}: {:?}", v.eps, v.status))
            .collect();
        let env = p
            .velocity_envelope
            .as_ref()
            .map_or("n/a".to_string(), |e| e.all_contained().to_string());
        println!(
            "pair {}  strong-in-time {:.6e}  {}  envelope contained: {}",
            p.pair,
            p.theorem1.strong_time_norm,
            t2.join(", "),
            env
        );
    }
}

/// `simulate <config>`: 0 on completion, 2 on blow-up, 1 on any error.
pub fn cmd_simulate(config_path: &Path, overrides: &Overrides) -> i32 {
    let config = match load(config_path, overrides) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match simulate(&config) {
        Ok(out) => {
            summarize(&out.document.report);
            println!(
                "steps: {}  termination: {:?}  report: {}",
                out.steps,
                out.termination,
                config.output.dir.join(REPORT_FILE).display()
            );
            if out.termination.is_blow_up() {
                EXIT_BLOW_UP
            } else {
                EXIT_OK
            }
        }
        Err(e) => fail(e),
    }
}

/// `monitor <glob> <config>`.
pub fn cmd_monitor(pattern: &str, config_path: &Path, overrides: &Overrides) -> i32 {
    let config = match load(config_path, overrides) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match monitor(pattern, &config) {
        Ok(doc) => {
            summarize(&doc.report);
            println!("report: {}", config.output.dir.join(MONITOR_REPORT_FILE).display());
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}

/// `calibrate <config>`.
pub fn cmd_calibrate(config_path: &Path, overrides: &Overrides) -> i32 {
    let config = match load(config_path, overrides) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match calibrate_constants(&config) {
        Ok((c, path)) => {
            println!("embedding {:.6e}  advection {:.6e}", c.embedding, c.advection);
            for pc in &c.convective {
                println!("convective {} {:.6e}", pc.pair, pc.value);
            }
            println!("constants: {}", path.display());
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}
