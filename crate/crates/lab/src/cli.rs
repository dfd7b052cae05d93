//! Subcommand dispatch. Every subcommand reads one config file and writes
//! its outputs under the output directory.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use pmelab_core::elliptic::{
    find_l0, periodic_length, poincare_bound, solve_bvp, time_map_scan, BvpProfile,
};
use pmelab_core::pme::{
    init_from_pressure, monotone_pressure_check, Grid1D, Solver, SolverConfig, State,
};
use pmelab_core::waves::{
    limit_profile_h, limit_speed_ell, shoot_q_traced, wave_profile_x, wave_speed_with_eps,
    OutcomeKind,
};
use pmelab_core::{Error, ReactionClass, ReactionModel};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_config, Config, InitialSpec};
use crate::error::{LabError, LabResult};
use crate::experiments::{
    extinction_report, receding_report, sweep_incompressible, threshold_scan, ExperimentReport,
    ExtinctionParams, SweepParams, ThresholdParams,
};
use crate::io;

#[derive(Debug, Parser)]
#[command(name = "pmelab", version, about = "Porous-medium reaction-diffusion experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the PDE and write snapshots plus run metadata.
    Simulate,
    /// Solve the elliptic problem on the configured interval.
    Bvp,
    /// Sample the time map and locate the critical length.
    Timemap,
    /// Shoot the phase-plane equation at one speed.
    TwShoot,
    /// Compute the travelling-wave speed and profile.
    TwSpeed,
    /// Compute the limiting wave profile.
    TwLimit,
    /// Sweep the exponent: shooting speeds, PDE front speeds, residuals.
    SweepM,
    /// Classify interval lengths into invasion and extinction.
    Threshold,
    /// Compare the mass with pure exponential decay on short intervals.
    Extinction,
    /// Fit the receding speeds linearly in the exponent.
    Receding,
}

/// Parses the config, runs the subcommand on a pool of `--threads` workers
/// and returns the written files.
pub fn execute(cli: &Cli) -> LabResult<Vec<PathBuf>> {
    let path = cli.config.as_deref().ok_or_else(|| {
        LabError::Config(crate::ConfigError::Invalid {
            field: "--config".into(),
            message: "a configuration file is required".into(),
        })
    })?;
    let config = parse_config(path)?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output_dir));
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| run_command(cli.command, &config, &out))
}

pub fn run_command(command: Command, config: &Config, out: &Path) -> LabResult<Vec<PathBuf>> {
    let model = config.reaction.build()?;
    let mut written = Vec::new();
    match command {
        Command::Simulate => {
            let files = simulate(&model, config, out)?;
            written.extend(files);
        }
        Command::Bvp => {
            let profiles = solve_bvp(&model, config.bvp.length, config.bvp.n)?;
            let mut rows = Vec::new();
            for (k, prof) in profiles.iter().enumerate() {
                let path = out.join(format!("profile_{k}.csv"));
                io::write_profile_csv("x,u", &prof.xs, &prof.us, &path)?;
                rows.push(json!({
                    "gamma": prof.gamma,
                    "peak": prof.peak,
                    "tangential": prof.tangential,
                    "energy_residual":
                        pmelab_core::elliptic::energy_residual(&model, prof)?,
                    "file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
                }));
                written.push(path);
            }
            let mut summary = elliptic_summary(&model);
            summary["length"] = json!(config.bvp.length);
            summary["profiles"] = Value::Array(rows);
            summary["provenance"] = config.echo();
            emit_json(out, "bvp.json", &summary, &mut written)?;
        }
        Command::Timemap => {
            let samples = time_map_scan(&model, config.timemap.samples)?;
            let path = out.join("timemap.csv");
            io::write_timemap_csv(&samples, &path)?;
            written.push(path);
            let mut summary = elliptic_summary(&model);
            summary["provenance"] = config.echo();
            emit_json(out, "elliptic.json", &summary, &mut written)?;
        }
        Command::TwShoot => {
            let w = &config.waves;
            let eps = w.eps * model.p_max();
            let outcome = shoot_q_traced(&model, w.m, w.c, eps, true)?;
            let (kind, value) = match outcome.kind {
                OutcomeKind::InteriorZero { p_star } => ("interior_zero", json!({ "p_star": p_star })),
                OutcomeKind::ReachedOrigin { q0 } => ("reached_origin", json!({ "q0": q0 })),
            };
            if let Some(trace) = &outcome.trace {
                let ps: Vec<f64> = trace.iter().map(|t| t.0).collect();
                let qs: Vec<f64> = trace.iter().map(|t| t.1).collect();
                let path = out.join("trace.csv");
                io::write_profile_csv("p,q", &ps, &qs, &path)?;
                written.push(path);
            }
            emit_json(
                out,
                "shoot.json",
                &json!({
                    "m": w.m, "c": w.c, "eps": eps,
                    "outcome": kind, "value": value,
                    "provenance": config.echo(),
                }),
                &mut written,
            )?;
        }
        Command::TwSpeed => {
            let w = &config.waves;
            let speed = wave_speed_with_eps(&model, w.m, w.eps * model.p_max())?;
            let mut report = json!({
                "m": speed.m,
                "c_star": speed.speed,
                "sharp_front": speed.sharp_front,
                "eps_robust": speed.eps_robust,
                "q0": speed.q0,
            });
            match wave_profile_x(&model, w.m, speed.speed) {
                Ok(profile) => {
                    let path = out.join("profile.csv");
                    io::write_profile_csv("x,p", &profile.xs, &profile.ps, &path)?;
                    written.push(path);
                }
                Err(e) => report["profile_error"] = json!(e.to_string()),
            }
            report["provenance"] = config.echo();
            emit_json(out, "speed.json", &report, &mut written)?;
        }
        Command::TwLimit => {
            let w = &config.waves;
            let h = limit_profile_h(&model, w.x_extent)?;
            let path = out.join("limit_profile.csv");
            io::write_profile_csv("x,p", &h.xs, &h.ps, &path)?;
            written.push(path);
            let ell_speed = match model.class() {
                ReactionClass::Monostable => Some(limit_speed_ell(&model, w.ell)?),
                _ => None,
            };
            emit_json(
                out,
                "limit.json",
                &json!({
                    "limit_speed": h.speed,
                    "ell": w.ell,
                    "speed_ell": ell_speed,
                    "x_extent": w.x_extent,
                    "provenance": config.echo(),
                }),
                &mut written,
            )?;
        }
        Command::SweepM | Command::Threshold | Command::Extinction | Command::Receding => {
            let report = run_experiment(command, &model, config)?.with_provenance(config.echo());
            let json_path = out.join("report.json");
            let csv_path = out.join("report.csv");
            io::write_report(&report, &json_path)?;
            io::write_report_csv(&report, &csv_path)?;
            written.push(json_path);
            written.push(csv_path);
        }
    }
    Ok(written)
}

/// Runs one of the multi-run studies described by `config`.
pub fn run_experiment(
    command: Command,
    model: &ReactionModel,
    config: &Config,
) -> LabResult<ExperimentReport> {
    match command {
        Command::SweepM => {
            let s = &config.sweep;
            let g = &config.grid;
            let params = SweepParams {
                grid: Grid1D::new(g.x_min, g.x_max, g.n_cells)?,
                t_end: s.t_end,
                block: s.block,
                level: s.level,
                snapshot_every: s.snapshot_every,
                cfl: config.solver.cfl,
            };
            sweep_incompressible(model, &s.m_list, &params)
        }
        Command::Threshold => {
            let t = &config.threshold;
            let l0 = find_l0(model)?.l0;
            let lengths: Vec<f64> = t.l_factors.iter().map(|f| f * l0).collect();
            let params = ThresholdParams {
                horizon_factor: t.horizon_factor,
                dx: t.dx,
                bisect_steps: t.bisect_steps,
                cfl: config.solver.cfl,
            };
            threshold_scan(model, t.m, &lengths, &params)
        }
        Command::Extinction => {
            let e = &config.extinction;
            let l = e.length_factor * model.critical_lengths()?.l_star;
            let params = ExtinctionParams {
                t_end: e.t_end,
                dx: e.dx,
                snapshot_every: e.snapshot_every,
                cfl: config.solver.cfl,
            };
            extinction_report(model, &e.m_list, l, &params)
        }
        Command::Receding => receding_report(model, &config.receding.m_list),
        other => Err(Error::Config(format!("{other:?} is not an experiment")).into()),
    }
}

fn emit_json(out: &Path, name: &str, value: &Value, written: &mut Vec<PathBuf>) -> LabResult<()> {
    let path = out.join(name);
    io::write_json(value, &path)?;
    written.push(path);
    Ok(())
}

fn elliptic_summary(model: &ReactionModel) -> Value {
    let crit = find_l0(model).ok();
    json!({
        "l0": crit.map(|c| c.l0),
        "gamma_min": crit.map(|c| c.gamma_min),
        "l_star": model.critical_lengths().ok().map(|c| c.l_star),
        "poincare_bound": poincare_bound(model),
        "L_c": periodic_length(model).ok(),
    })
}

/// Initial state described by the `initial` section on the configured grid.
pub fn initial_state(model: &ReactionModel, config: &Config) -> LabResult<State> {
    let g = &config.grid;
    let grid = Grid1D::new(g.x_min, g.x_max, g.n_cells)?;
    let m = config.solver.m;
    let state = match &config.initial {
        InitialSpec::Step { a, b, pressure } => {
            let p = pressure.unwrap_or(model.p_max());
            init_from_pressure(grid, |x| if x > *a && x < *b { p } else { 0.0 }, m)?
        }
        InitialSpec::BvpProfile { a, length, branch } => {
            let profiles = solve_bvp(model, *length, 401)?;
            let prof = profiles.get(*branch).ok_or_else(|| {
                Error::NotFound(format!(
                    "branch {branch} of {} elliptic solutions on length {length}",
                    profiles.len()
                ))
            })?;
            init_from_pressure(grid, |x| sample_profile(prof, x - a), m)?
        }
    };
    Ok(state)
}

/// Linear interpolation of a profile, zero outside its interval.
fn sample_profile(prof: &BvpProfile, x: f64) -> f64 {
    let (xs, us) = (&prof.xs, &prof.us);
    if xs.is_empty() || x <= xs[0] || x >= xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&xi| xi <= x).min(xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    (us[i - 1] + w * (us[i] - us[i - 1])).max(0.0)
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    m: f64,
    alpha: Option<f64>,
    grid: crate::experiments::GridRecord,
    cfl: f64,
    t_end: f64,
    times: Vec<f64>,
    mass_series: Vec<f64>,
    front_series: Vec<Option<f64>>,
    hs_residual_series: Vec<f64>,
    clipped_mass: f64,
    monotone_pressure: bool,
    snapshots: Vec<String>,
    provenance: &'a Value,
}

fn simulate(model: &ReactionModel, config: &Config, out: &Path) -> LabResult<Vec<PathBuf>> {
    let state = initial_state(model, config)?;
    let s = &config.solver;
    let solver_config = SolverConfig {
        cfl: s.cfl,
        t_end: s.t_end,
        snapshot_times: s.snapshot_times(),
        support_tol: s.support_tol,
        ..SolverConfig::default()
    };
    let grid = state.grid;
    let traj = Solver::new(model, solver_config)?.run(state)?;
    let mut written = Vec::new();
    let mut names = Vec::new();
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let name = format!("snapshot_{k:04}.csv");
        let path = out.join(&name);
        io::write_snapshot(snap, &path)?;
        written.push(path);
        names.push(name);
    }
    let echo = config.echo();
    let meta = RunMetadata {
        m: s.m,
        alpha: match model.class() {
            ReactionClass::Bistable { alpha } => Some(alpha),
            _ => None,
        },
        grid: grid.into(),
        cfl: s.cfl,
        t_end: s.t_end,
        times: traj.times(),
        mass_series: traj.snapshots.iter().map(State::mass).collect(),
        front_series: traj
            .snapshots
            .iter()
            .map(|st| Some(st.front_position(s.support_tol)).filter(|x| x.is_finite()))
            .collect(),
        hs_residual_series: traj.snapshots.iter().map(State::hele_shaw_residual).collect(),
        clipped_mass: traj.last().map_or(0.0, |st| st.clipped_mass),
        monotone_pressure: monotone_pressure_check(&traj, model.p_max()),
        snapshots: names,
        provenance: &echo,
    };
    let path = out.join("run.json");
    io::write_json(&meta, &path)?;
    written.push(path);
    Ok(written)
}
