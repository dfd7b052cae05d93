//! Multi-run studies. Runs inside one study go through rayon's current pool;
//! results are always assembled in input order.

use std::collections::BTreeMap;

use pmelab_core::elliptic::find_l0;
use pmelab_core::pme::{init_from_pressure, Grid1D, Solver, SolverConfig, State, Trajectory};
use pmelab_core::waves::{wave_speed_m, WaveSpeed};
use pmelab_core::{Error, ReactionClass, ReactionKind, ReactionModel};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::snapshot_grid;
use crate::error::{LabError, LabResult};

const BURN_IN: f64 = 0.3;
const MIN_FIT_POINTS: usize = 5;
const FRONT_TOL: f64 = 1e-8;
/// `max p(T) / p_max` below which the pressure counts as vanished.
const VANISHED_PRESSURE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SweepM,
    Threshold,
    Extinction,
    Receding,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SweepM => "sweep_m",
            Self::Threshold => "threshold",
            Self::Extinction => "extinction",
            Self::Receding => "receding",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelDescriptor {
    pub kind: String,
    pub alpha: Option<f64>,
    /// Coefficients of `f` in ascending powers.
    pub coeffs: Vec<f64>,
    pub p_max: f64,
    /// `F(p_max)`.
    pub integral: f64,
}

impl ModelDescriptor {
    pub fn of(model: &ReactionModel) -> Self {
        let (kind, alpha) = match model.kind() {
            ReactionKind::BistableQuadratic { alpha } => ("bistable_quadratic", Some(*alpha)),
            ReactionKind::CustomPolynomial { .. } => ("polynomial", None),
            ReactionKind::Inert => ("inert", None),
        };
        Self {
            kind: kind.to_string(),
            alpha,
            coeffs: model.polynomial_f().coeffs().to_vec(),
            p_max: model.p_max(),
            integral: model.integral(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRecord {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl From<Grid1D> for GridRecord {
    fn from(g: Grid1D) -> Self {
        Self {
            x_min: g.x_min,
            x_max: g.x_max,
            n_cells: g.n_cells,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Failed => "failed",
        }
    }
}

/// One run. `grid` and `cfl` are absent for rows without a PDE run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub m: f64,
    pub grid: Option<GridRecord>,
    pub cfl: Option<f64>,
    pub status: RunStatus,
    pub outcome: Option<String>,
    pub error: Option<String>,
    pub values: BTreeMap<String, f64>,
}

impl RunRecord {
    fn new(m: f64, grid: Option<Grid1D>, cfl: Option<f64>) -> Self {
        Self {
            m,
            grid: grid.map(Into::into),
            cfl,
            status: RunStatus::Ok,
            outcome: None,
            error: None,
            values: BTreeMap::new(),
        }
    }

    fn fail(mut self, err: &dyn std::fmt::Display) -> Self {
        self.status = RunStatus::Failed;
        self.error = Some(err.to_string());
        self
    }

    fn set(&mut self, key: &str, v: f64) {
        self.values.insert(key.to_string(), v);
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn is_ok(&self) -> bool {
        self.status == RunStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub scenario: Scenario,
    pub model: ModelDescriptor,
    pub records: Vec<RunRecord>,
    pub summary: BTreeMap<String, f64>,
    pub flags: Vec<String>,
    /// Configuration echo; `null` when the study was run from code.
    pub provenance: serde_json::Value,
}

impl ExperimentReport {
    fn new(scenario: Scenario, model: &ReactionModel) -> Self {
        Self {
            scenario,
            model: ModelDescriptor::of(model),
            records: Vec::new(),
            summary: BTreeMap::new(),
            flags: Vec::new(),
            provenance: serde_json::Value::Null,
        }
    }

    pub fn with_provenance(mut self, provenance: serde_json::Value) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }
}

fn check_m_list(m_list: &[f64]) -> LabResult<()> {
    if m_list.is_empty()
        || m_list.iter().any(|&m| !(m > 1.0) || !m.is_finite())
        || m_list.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::Config(format!(
            "exponents must be finite, > 1 and strictly ascending, got {m_list:?}"
        ))
        .into());
    }
    Ok(())
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let slope_stderr = if n > 2 {
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        intercept,
        r2,
        slope_stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSpeed {
    pub speed: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Slope of the rightmost `rho = level` crossing against time, fitted over
/// the snapshots after the first 30% of the run.
pub fn front_speed_estimate(trajectory: &Trajectory, level: f64) -> pmelab_core::Result<FrontSpeed> {
    let snaps = &trajectory.snapshots;
    let (t0, t1) = match (snaps.first(), snaps.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => return Err(Error::Domain("empty trajectory".into())),
    };
    let start = t0 + BURN_IN * (t1 - t0);
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for s in snaps.iter().filter(|s| s.t >= start) {
        ts.push(s.t);
        xs.push(s.level_position(level)?);
    }
    if ts.len() < MIN_FIT_POINTS {
        return Err(Error::Domain(format!(
            "{} snapshots after burn-in, need {MIN_FIT_POINTS}",
            ts.len()
        )));
    }
    let fit = fit_line(&ts, &xs)
        .ok_or_else(|| Error::Domain("snapshot times are not distinct".into()))?;
    Ok(FrontSpeed {
        speed: fit.slope,
        stderr: fit.slope_stderr,
        samples: ts.len(),
    })
}

fn solver_config(cfl: f64, t_end: f64, snapshot_every: f64) -> SolverConfig {
    SolverConfig {
        cfl,
        t_end,
        snapshot_times: snapshot_grid(snapshot_every, t_end),
        ..SolverConfig::default()
    }
}

fn block_state(grid: Grid1D, a: f64, b: f64, p: f64, m: f64) -> pmelab_core::Result<State> {
    init_from_pressure(grid, |x| if x > a && x < b { p } else { 0.0 }, m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub grid: Grid1D,
    pub t_end: f64,
    /// Initial pressure `p_max` on `(a, b)`.
    pub block: (f64, f64),
    pub level: f64,
    pub snapshot_every: f64,
    pub cfl: f64,
}

/// Per `m`: the shooting speed, the PDE front speed of step data and the
/// largest Hele-Shaw residual over the snapshots.
pub fn sweep_incompressible(
    model: &ReactionModel,
    m_list: &[f64],
    params: &SweepParams,
) -> LabResult<ExperimentReport> {
    check_m_list(m_list)?;
    let mut report = ExperimentReport::new(Scenario::SweepM, model);
    report.records = m_list
        .par_iter()
        .map(|&m| {
            let rec = RunRecord::new(m, Some(params.grid), Some(params.cfl));
            match sweep_row(model, m, params) {
                Ok(values) => RunRecord { values, ..rec },
                Err(e) => rec.fail(&e),
            }
        })
        .collect();

    let ok: Vec<&RunRecord> = report.records.iter().filter(|r| r.is_ok()).collect();
    if ok.is_empty() {
        report.flags.push("all_runs_failed".into());
        return Ok(report);
    }
    let speeds: Vec<f64> = ok.iter().filter_map(|r| r.value("c_star")).collect();
    let residuals: Vec<f64> = ok.iter().filter_map(|r| r.value("hs_residual_max")).collect();
    if ok.len() >= 2 {
        let (a, b) = (ok[ok.len() - 2], ok[ok.len() - 1]);
        let (ca, cb) = (speeds[speeds.len() - 2], speeds[speeds.len() - 1]);
        let k = (ca - cb) / (1.0 / a.m - 1.0 / b.m);
        report.summary.insert("speed_extrapolated".into(), cb - k / b.m);
    }
    if let Ok(c) = model.limit_speed() {
        report.summary.insert("limit_speed".into(), c);
        let gaps: Vec<f64> = speeds.iter().map(|s| (s - c).abs()).collect();
        if gaps.windows(2).any(|w| w[1] >= w[0]) {
            report.flags.push("speed_gap_not_shrinking".into());
        }
    }
    report
        .summary
        .insert("residual_first".into(), residuals[0]);
    report
        .summary
        .insert("residual_last".into(), residuals[residuals.len() - 1]);
    report.summary.insert(
        "residual_ratio".into(),
        residuals[0] / residuals[residuals.len() - 1],
    );
    if residuals.windows(2).any(|w| w[1] >= w[0]) {
        report.flags.push("residual_not_decreasing".into());
    }
    if ok.len() < report.records.len() {
        report.flags.push("some_runs_failed".into());
    }
    Ok(report)
}

fn sweep_row(model: &ReactionModel, m: f64, params: &SweepParams) -> LabResult<BTreeMap<String, f64>> {
    let wave = wave_speed_m(model, m)?;
    let state = block_state(params.grid, params.block.0, params.block.1, model.p_max(), m)?;
    let mut solver = Solver::new(
        model,
        solver_config(params.cfl, params.t_end, params.snapshot_every),
    )?;
    let traj = solver.run(state)?;
    let front = front_speed_estimate(&traj, params.level)?;
    let residual = traj
        .snapshots
        .iter()
        .map(State::hele_shaw_residual)
        .fold(0.0, f64::max);
    let last = traj.last().expect("trajectory holds the initial state");
    let mut v = BTreeMap::new();
    v.insert("c_star".into(), wave.speed);
    v.insert("sharp_front".into(), f64::from(u8::from(wave.sharp_front)));
    v.insert("eps_robust".into(), f64::from(u8::from(wave.eps_robust)));
    v.insert("pde_speed".into(), front.speed);
    v.insert("pde_speed_stderr".into(), front.stderr);
    v.insert(
        "speed_rel_gap".into(),
        (front.speed - wave.speed).abs() / wave.speed.abs(),
    );
    v.insert("hs_residual_max".into(), residual);
    v.insert("mass_final".into(), last.mass());
    v.insert("clipped_mass".into(), last.clipped_mass);
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Invasion,
    Extinction,
    Undecided,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Invasion => "invasion",
            Self::Extinction => "extinction",
            Self::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdParams {
    /// `T = horizon_factor * L / sqrt(2 F(p_max))`.
    pub horizon_factor: f64,
    pub dx: f64,
    pub bisect_steps: usize,
    pub cfl: f64,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        Self {
            horizon_factor: 2.0,
            dx: 0.15,
            bisect_steps: 5,
            cfl: 0.4,
        }
    }
}

struct ThresholdRun {
    record: RunRecord,
    class: Option<Classification>,
    /// Side of the threshold used by the bisection.
    invades: bool,
}

fn classify_length(
    model: &ReactionModel,
    m: f64,
    l: f64,
    params: &ThresholdParams,
) -> ThresholdRun {
    let c = model.limit_speed().unwrap_or(0.0);
    let t_end = if c > 0.0 {
        params.horizon_factor * l / c
    } else {
        params.horizon_factor * l
    };
    let margin = 2.0 * c * t_end + 5.0;
    let n = ((l + 2.0 * margin) / params.dx).ceil() as usize;
    let grid = Grid1D::new(-margin, l + margin, n);
    let mut record = RunRecord::new(m, grid.as_ref().ok().copied(), Some(params.cfl));
    record.set("length", l);
    record.set("t_end", t_end);
    let result = grid.and_then(|grid| {
        let state = block_state(grid, 0.0, l, model.p_max(), m)?;
        let mass0 = state.mass();
        let mut solver = Solver::new(model, solver_config(params.cfl, t_end, t_end))?;
        let traj = solver.run(state)?;
        Ok((mass0, traj.last().cloned().expect("non-empty trajectory")))
    });
    let (mass0, last) = match result {
        Ok(v) => v,
        Err(e) => {
            return ThresholdRun {
                record: record.fail(&e),
                class: None,
                invades: false,
            }
        }
    };
    let mass_t = last.mass();
    let front = last.front_position(FRONT_TOL);
    let p_end = last.max_pressure();
    let decay = (model.rate(0.0) * last.t).exp();
    let monostable = model.class() == ReactionClass::Monostable;

    let invasion = front > l + 2.0 * c * last.t * 0.25 && mass_t > 1.2 * mass0;
    let mass_rule = if monostable {
        (mass_t / mass0 - 1.0).abs() <= 0.05
    } else {
        mass_t <= mass0 * decay * 1.05
    };
    let vanished = p_end <= VANISHED_PRESSURE * model.p_max() && mass_t < mass0;
    let class = if invasion {
        Classification::Invasion
    } else if mass_rule || vanished {
        Classification::Extinction
    } else {
        Classification::Undecided
    };
    record.outcome = Some(class.as_str().to_string());
    record.set("mass_initial", mass0);
    record.set("mass_final", mass_t);
    record.set("mass_over_decay", mass_t / (mass0 * decay));
    record.set("front_final", front);
    record.set("pressure_max_final", p_end);
    record.set("clipped_mass", last.clipped_mass);
    ThresholdRun {
        record,
        class: Some(class),
        invades: match class {
            Classification::Invasion => true,
            Classification::Extinction => false,
            Classification::Undecided => mass_t >= mass0,
        },
    }
}

/// Classifies each length in `l_list`, then bisects between the largest
/// extinction and the smallest invasion when the scan is monotone.
pub fn threshold_scan(
    model: &ReactionModel,
    m: f64,
    l_list: &[f64],
    params: &ThresholdParams,
) -> LabResult<ExperimentReport> {
    check_m_list(&[m])?;
    if l_list.is_empty() || l_list.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Config(format!("lengths must be positive, got {l_list:?}")).into());
    }
    model.limit_speed()?;
    let mut report = ExperimentReport::new(Scenario::Threshold, model);
    let runs: Vec<ThresholdRun> = l_list
        .par_iter()
        .map(|&l| classify_length(model, m, l, params))
        .collect();

    let mut sorted: Vec<(f64, Classification)> = l_list
        .iter()
        .zip(&runs)
        .filter_map(|(&l, r)| r.class.map(|c| (l, c)))
        .collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    report.records = runs.into_iter().map(|r| r.record).collect();

    if let Ok(l0) = find_l0(model) {
        report.summary.insert("l0".into(), l0.l0);
    }
    if sorted.iter().all(|(_, c)| *c == Classification::Undecided) {
        report.flags.push("inconclusive".into());
        return Ok(report);
    }
    let first_invasion = sorted.iter().position(|(_, c)| *c == Classification::Invasion);
    let last_extinction = sorted.iter().rposition(|(_, c)| *c == Classification::Extinction);
    let (lo, hi) = match (last_extinction, first_invasion) {
        (Some(e), Some(i)) if e < i => (sorted[e].0, sorted[i].0),
        (Some(_), Some(_)) => {
            report.flags.push("nonmonotone_classification".into());
            return Ok(report);
        }
        _ => {
            report.flags.push("no_bracket".into());
            return Ok(report);
        }
    };
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..params.bisect_steps {
        let mid = 0.5 * (lo + hi);
        let run = classify_length(model, m, mid, params);
        let failed = run.class.is_none();
        if run.invades {
            hi = mid;
        } else {
            lo = mid;
        }
        report.records.push(run.record);
        if failed {
            report.flags.push("bisection_run_failed".into());
            break;
        }
    }
    let estimate = 0.5 * (lo + hi);
    report.summary.insert("threshold_lower".into(), lo);
    report.summary.insert("threshold_upper".into(), hi);
    report.summary.insert("threshold_estimate".into(), estimate);
    if let Some(l0) = report.summary_value("l0") {
        report
            .summary
            .insert("threshold_rel_gap".into(), (estimate - l0).abs() / l0);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionParams {
    pub t_end: f64,
    pub dx: f64,
    pub snapshot_every: f64,
    pub cfl: f64,
}

impl Default for ExtinctionParams {
    fn default() -> Self {
        Self {
            t_end: 5.0,
            dx: 0.02,
            snapshot_every: 0.25,
            cfl: 0.4,
        }
    }
}

fn extinction_run(
    model: &ReactionModel,
    m: f64,
    l: f64,
    params: &ExtinctionParams,
) -> LabResult<(Grid1D, f64, f64)> {
    let l_star = model.critical_lengths()?.l_star;
    if !(l > 0.0 && l < 0.9 * l_star) {
        return Err(Error::Domain(format!(
            "length {l} must lie in (0, 0.9 L*) = (0, {})",
            0.9 * l_star
        ))
        .into());
    }
    let margin = 0.5 * l + 2.0;
    let n = ((l + 2.0 * margin) / params.dx).ceil() as usize;
    let grid = Grid1D::new(-margin, l + margin, n)?;
    let state = block_state(grid, 0.0, l, model.p_max(), m)?;
    let mass0 = state.mass();
    let mut solver = Solver::new(
        model,
        solver_config(params.cfl, params.t_end, params.snapshot_every),
    )?;
    let traj = solver.run(state)?;
    let f0 = model.rate(0.0);
    let dev = traj
        .snapshots
        .iter()
        .map(|s| (s.mass() - mass0 * (f0 * s.t).exp()).abs() / mass0)
        .fold(0.0, f64::max);
    let clipped = traj.last().map_or(0.0, |s| s.clipped_mass);
    Ok((grid, dev, clipped))
}

/// Largest relative deviation of the mass from `mass(0) e^{f(0) t}` over
/// the snapshots of a run from `p_max` on `(0, l)`.
pub fn extinction_decay_check(
    model: &ReactionModel,
    m: f64,
    l: f64,
    params: &ExtinctionParams,
) -> LabResult<f64> {
    extinction_run(model, m, l, params).map(|(_, dev, _)| dev)
}

pub fn extinction_report(
    model: &ReactionModel,
    m_list: &[f64],
    l: f64,
    params: &ExtinctionParams,
) -> LabResult<ExperimentReport> {
    check_m_list(m_list)?;
    let mut report = ExperimentReport::new(Scenario::Extinction, model);
    report.records = m_list
        .par_iter()
        .map(|&m| {
            let mut rec = RunRecord::new(m, None, Some(params.cfl));
            rec.set("length", l);
            rec.set("t_end", params.t_end);
            match extinction_run(model, m, l, params) {
                Ok((grid, dev, clipped)) => {
                    rec.grid = Some(grid.into());
                    rec.set("max_rel_deviation", dev);
                    rec.set("clipped_mass", clipped);
                    rec
                }
                Err(e) => rec.fail(&e),
            }
        })
        .collect();
    let devs: Vec<f64> = report
        .records
        .iter()
        .filter_map(|r| r.value("max_rel_deviation"))
        .collect();
    if let Some(worst) = devs.iter().copied().reduce(f64::max) {
        report.summary.insert("max_rel_deviation".into(), worst);
    }
    if devs.windows(2).any(|w| w[1] > w[0]) {
        report.flags.push("deviation_not_decreasing_in_m".into());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecedingFit {
    /// `c*_m ~ -eta m + intercept` over the fitted exponents.
    pub eta: f64,
    pub intercept: f64,
    pub r2: f64,
    /// `eta` refitted without the smallest fitted exponent.
    pub eta_without_smallest: f64,
    pub fitted_m: Vec<f64>,
    pub speeds: Vec<WaveSpeed>,
}

/// Linear fit of the receding speeds over the largest half of `m_list`
/// (at least three exponents).
pub fn receding_fit(model: &ReactionModel, m_list: &[f64]) -> LabResult<RecedingFit> {
    check_m_list(m_list)?;
    if model.integral() >= 0.0 {
        return Err(Error::Domain(format!(
            "receding fit needs F(p_max) < 0, got {}",
            model.integral()
        ))
        .into());
    }
    if m_list.len() < 4 || m_list[m_list.len() - 1] < 64.0 {
        return Err(Error::Config(format!(
            "receding fit needs at least 4 exponents reaching 64, got {m_list:?}"
        ))
        .into());
    }
    let speeds = m_list
        .par_iter()
        .map(|&m| wave_speed_m(model, m))
        .collect::<pmelab_core::Result<Vec<_>>>()?;
    if let Some(w) = speeds.iter().find(|w| w.speed >= 0.0) {
        return Err(LabError::Regime(format!(
            "non-negative speed {} at m = {} with F(p_max) < 0",
            w.speed, w.m
        )));
    }
    let k = (m_list.len().div_ceil(2)).max(3);
    let start = m_list.len() - k;
    let ms = &m_list[start..];
    let cs: Vec<f64> = speeds[start..].iter().map(|w| w.speed).collect();
    let fit = fit_line(ms, &cs).expect("distinct exponents");
    let reduced = fit_line(&ms[1..], &cs[1..]).expect("distinct exponents");
    Ok(RecedingFit {
        eta: -fit.slope,
        intercept: fit.intercept,
        r2: fit.r2,
        eta_without_smallest: -reduced.slope,
        fitted_m: ms.to_vec(),
        speeds,
    })
}

pub fn receding_report(model: &ReactionModel, m_list: &[f64]) -> LabResult<ExperimentReport> {
    let fit = receding_fit(model, m_list)?;
    let mut report = ExperimentReport::new(Scenario::Receding, model);
    report.records = fit
        .speeds
        .iter()
        .map(|w| {
            let mut rec = RunRecord::new(w.m, None, None);
            rec.set("c_star", w.speed);
            rec.set("eps_robust", f64::from(u8::from(w.eps_robust)));
            rec.set("fitted", f64::from(u8::from(fit.fitted_m.contains(&w.m))));
            rec
        })
        .collect();
    report.summary.insert("eta".into(), fit.eta);
    report.summary.insert("intercept".into(), fit.intercept);
    report.summary.insert("r2".into(), fit.r2);
    report
        .summary
        .insert("eta_without_smallest".into(), fit.eta_without_smallest);
    Ok(report)
}
