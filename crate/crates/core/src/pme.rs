//! Explicit conservative finite-volume solver for
//! `rho_t = (rho^m)_xx + rho f(p)` on a 1-D grid with zero-density ghost
//! cells, and the diagnostics read off its states.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::reaction::ReactionModel;

/// Uniform cell-centred grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if n_cells < 8 {
            return Err(Error::Config(alloc::format!(
                "grid needs at least 8 cells, got {n_cells}"
            )));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Config(alloc::format!(
                "grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_cells,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }
}

/// Density-to-pressure map `p = m/(m-1) rho^(m-1)`.
pub fn pressure_of(rho: f64, m: f64) -> f64 {
    if rho <= 0.0 {
        0.0
    } else {
        m / (m - 1.0) * rho.powf(m - 1.0)
    }
}

/// Inverse of `pressure_of`.
pub fn density_of(p: f64, m: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        ((m - 1.0) / m * p).powf(1.0 / (m - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub grid: Grid1D,
    pub rho: Vec<f64>,
    pub m: f64,
    pub t: f64,
    /// Total mass removed by clipping negative densities.
    pub clipped_mass: f64,
}

fn check_exponent(m: f64) -> Result<()> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::Config(alloc::format!(
            "exponent m must be > 1, got {m}"
        )));
    }
    Ok(())
}

/// Samples a pressure profile at cell centres and inverts `p = P_m(rho)`.
pub fn init_from_pressure(grid: Grid1D, p_profile: impl Fn(f64) -> f64, m: f64) -> Result<State> {
    check_exponent(m)?;
    let mut rho = Vec::with_capacity(grid.n_cells);
    for i in 0..grid.n_cells {
        let x = grid.center(i);
        let p = p_profile(x);
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::Config(alloc::format!(
                "initial pressure must be finite and non-negative, got {p} at x = {x}"
            )));
        }
        rho.push(density_of(p, m));
    }
    State::from_density(grid, rho, m)
}

impl State {
    pub fn from_density(grid: Grid1D, rho: Vec<f64>, m: f64) -> Result<Self> {
        check_exponent(m)?;
        if rho.len() != grid.n_cells {
            return Err(Error::Config(alloc::format!(
                "density has {} values for {} cells",
                rho.len(),
                grid.n_cells
            )));
        }
        if rho.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::Config(
                "density must be finite and non-negative".into(),
            ));
        }
        if rho[0] > 0.0 || rho[grid.n_cells - 1] > 0.0 {
            return Err(Error::Config(
                "initial support touches the domain boundary".into(),
            ));
        }
        Ok(Self {
            grid,
            rho,
            m,
            t: 0.0,
            clipped_mass: 0.0,
        })
    }

    pub fn pressure(&self, i: usize) -> f64 {
        pressure_of(self.rho[i], self.m)
    }

    pub fn pressures(&self) -> Vec<f64> {
        self.rho.iter().map(|&r| pressure_of(r, self.m)).collect()
    }

    pub fn max_pressure(&self) -> f64 {
        let r = self.rho.iter().copied().fold(0.0, f64::max);
        pressure_of(r, self.m)
    }

    /// First and last cells with positive density.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.rho.iter().position(|&r| r > 0.0)?;
        let hi = self.rho.iter().rposition(|&r| r > 0.0)?;
        Some((lo, hi))
    }

    pub fn mass(&self) -> f64 {
        self.grid.dx() * self.rho.iter().sum::<f64>()
    }

    /// Largest cell centre with `rho > tol`, `-inf` if there is none.
    pub fn front_position(&self, tol: f64) -> f64 {
        match self.rho.iter().rposition(|&r| r > tol) {
            Some(i) => self.grid.center(i),
            None => f64::NEG_INFINITY,
        }
    }

    /// Rightmost point where the piecewise-linear interpolant of `rho`
    /// crosses `level` downwards.
    pub fn level_position(&self, level: f64) -> Result<f64> {
        let n = self.rho.len();
        let i = self
            .rho
            .iter()
            .rposition(|&r| r >= level)
            .ok_or_else(|| Error::NotFound(alloc::format!("density never reaches {level}")))?;
        if i + 1 >= n {
            return Ok(self.grid.center(i));
        }
        let (a, b) = (self.rho[i], self.rho[i + 1]);
        let frac = if a > b { (a - level) / (a - b) } else { 0.0 };
        Ok(self.grid.center(i) + frac * self.grid.dx())
    }

    /// `dx * sum p_i (1 - rho_i)`; vanishes on the Hele-Shaw graph.
    pub fn hele_shaw_residual(&self) -> f64 {
        let dx = self.grid.dx();
        dx * self
            .rho
            .iter()
            .map(|&r| pressure_of(r, self.m) * (1.0 - r))
            .sum::<f64>()
    }

    pub fn saturated_pressure_residual(&self, model: &ReactionModel, sat_tol: f64) -> f64 {
        saturated_pressure_residual(self.grid.dx(), &self.rho, &self.pressures(), model, sat_tol)
    }
}

/// Max of `|-(p_{i+1} - 2 p_i + p_{i-1}) / dx^2 - f(p_i)|` over interior cells
/// with `rho_i > 1 - sat_tol`; zero when no cell is saturated.
pub fn saturated_pressure_residual(
    dx: f64,
    rho: &[f64],
    p: &[f64],
    model: &ReactionModel,
    sat_tol: f64,
) -> f64 {
    let n = rho.len().min(p.len());
    let mut worst = 0.0f64;
    for i in 1..n.saturating_sub(1) {
        if rho[i] > 1.0 - sat_tol {
            let lap = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (dx * dx);
            worst = worst.max((-lap - model.rate(p[i])).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    ZeroDensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub support_tol: f64,
    pub boundary: Boundary,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            t_end: 0.0,
            snapshot_times: Vec::new(),
            support_tol: 1e-8,
            boundary: Boundary::ZeroDensity,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::Config(alloc::format!(
                "cfl must lie in (0, 0.5], got {}",
                self.cfl
            )));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(alloc::format!(
                "t_end must be finite and non-negative, got {}",
                self.t_end
            )));
        }
        if !(self.support_tol >= 0.0) {
            return Err(Error::Config("support_tol must be non-negative".into()));
        }
        if self.snapshot_times.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::Config("snapshot_times must be sorted".into()));
        }
        if let Some(&last) = self.snapshot_times.last() {
            if last > self.t_end {
                return Err(Error::Config(alloc::format!(
                    "snapshot time {last} exceeds t_end {}",
                    self.t_end
                )));
            }
        }
        Ok(())
    }
}

/// `cfl dx^2 / ((m-1) p_M + dx max|f| p_M)`.
pub fn stable_time_step(model: &ReactionModel, m: f64, dx: f64, cfl: f64) -> f64 {
    let p_max = model.p_max();
    cfl * dx * dx / ((m - 1.0) * p_max + dx * model.max_abs_f() * p_max)
}

/// Snapshots of one run, in time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub snapshots: Vec<State>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&State> {
        self.snapshots.last()
    }
}

/// True iff no cell pressure decreases by more than `1e-9 p_max` between
/// consecutive snapshots. Trajectories with fewer than two snapshots pass.
pub fn monotone_pressure_check(trajectory: &Trajectory, p_max: f64) -> bool {
    let eps = 1e-9 * p_max;
    trajectory.snapshots.windows(2).all(|w| {
        w[0].rho
            .iter()
            .zip(&w[1].rho)
            .all(|(&a, &b)| pressure_of(b, w[1].m) >= pressure_of(a, w[0].m) - eps)
    })
}

pub struct Solver<'a> {
    model: &'a ReactionModel,
    config: SolverConfig,
    /// `rho^m` with one ghost cell on each side.
    flux_potential: Vec<f64>,
}

impl<'a> Solver<'a> {
    pub fn new(model: &'a ReactionModel, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            model,
            config,
            flux_potential: Vec::new(),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn model(&self) -> &ReactionModel {
        self.model
    }

    pub fn time_step(&self, state: &State) -> f64 {
        stable_time_step(self.model, state.m, state.grid.dx(), self.config.cfl)
    }

    /// One explicit update; returns the step taken.
    pub fn step(&mut self, state: &mut State) -> Result<f64> {
        let n = state.rho.len();
        let dx = state.grid.dx();
        let dt = self.time_step(state);
        let Some((lo, hi)) = state.support() else {
            state.t += dt;
            return Ok(dt);
        };
        let m = state.m;
        let lam = dt / (dx * dx);
        let p_scale = m / (m - 1.0);

        let a = lo.saturating_sub(1);
        let b = (hi + 1).min(n - 1);
        self.flux_potential.resize(n + 2, 0.0);
        let u = &mut self.flux_potential;
        // ghost-offset indices: cell j lives at u[j + 1]
        u[a] = 0.0;
        u[b + 2] = 0.0;
        let mut max_p = 0.0f64;
        for j in a..=b {
            let r = state.rho[j];
            if r > 0.0 {
                let e = ((m - 1.0) * r.ln()).exp();
                u[j + 1] = r * e;
                max_p = max_p.max(p_scale * e);
            } else {
                u[j + 1] = 0.0;
            }
        }
        let ceiling = 0.5;
        let local = lam * (m - 1.0) * max_p;
        if local > ceiling {
            return Err(Error::CflViolation {
                dt,
                ceiling: ceiling * dx * dx / ((m - 1.0) * max_p),
            });
        }
        let mut clipped = 0.0;
        for j in a..=b {
            let r = state.rho[j];
            let diffusion = lam * (u[j + 2] - 2.0 * u[j + 1] + u[j]);
            let reaction = if r > 0.0 {
                let p = p_scale * u[j + 1] / r;
                dt * r * self.model.rate(p)
            } else {
                0.0
            };
            let next = r + diffusion + reaction;
            if !next.is_finite() {
                return Err(Error::NumericalBlowup {
                    t: state.t,
                    cell: j,
                });
            }
            if next < 0.0 {
                clipped -= next;
                state.rho[j] = 0.0;
            } else {
                state.rho[j] = next;
            }
        }
        state.clipped_mass += clipped * dx;
        state.t += dt;
        Ok(dt)
    }

    fn check_margin(state: &State) -> Result<()> {
        if let Some((lo, hi)) = state.support() {
            if lo < 2 || hi + 3 > state.rho.len() {
                return Err(Error::SupportAtBoundary { t: state.t });
            }
        }
        Ok(())
    }

    /// Steps until `t >= t_stop` (the last step is not shortened).
    pub fn advance_to(&mut self, state: &mut State, t_stop: f64) -> Result<()> {
        while state.t < t_stop {
            self.step(state)?;
            Self::check_margin(state)?;
        }
        Ok(())
    }

    /// Runs to `t_end`. The trajectory holds the initial state, a copy taken
    /// at the first step reaching each snapshot time, and the final state.
    pub fn run(&mut self, mut state: State) -> Result<Trajectory> {
        Self::check_margin(&state)?;
        let t_end = self.config.t_end;
        let times = self.config.snapshot_times.clone();
        let mut out = Trajectory::default();
        out.snapshots.push(state.clone());
        for &ts in &times {
            if ts <= state.t {
                continue;
            }
            self.advance_to(&mut state, ts)?;
            out.snapshots.push(state.clone());
        }
        if state.t < t_end {
            self.advance_to(&mut state, t_end)?;
            out.snapshots.push(state);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn block(grid: Grid1D, a: f64, b: f64, p: f64, m: f64) -> State {
        init_from_pressure(grid, |x| if x > a && x < b { p } else { 0.0 }, m).unwrap()
    }

    #[test]
    fn init_examples() {
        let g = Grid1D::new(-1.0, 3.0, 40).unwrap();
        let s = init_from_pressure(g, |_| 0.0, 2.0).unwrap();
        assert!(s.rho.iter().all(|&r| r == 0.0));
        assert_eq!(s.mass(), 0.0);
        assert_eq!(s.front_position(1e-8), f64::NEG_INFINITY);

        let s = block(g, 0.0, 2.0, 1.0, 2.0);
        for (i, &r) in s.rho.iter().enumerate() {
            let x = g.center(i);
            let expect = if x > 0.0 && x < 2.0 { 0.5 } else { 0.0 };
            assert_eq!(r, expect);
        }
        let s = block(g, 0.0, 2.0, 1.0, 1e4);
        assert!(s.rho.iter().all(|&r| r == 0.0 || (r - 1.0).abs() < 1e-3));

        assert!(matches!(
            init_from_pressure(g, |_| 1.0, 2.0),
            Err(Error::Config(_))
        ));
        assert!(Grid1D::new(0.0, 1.0, 7).is_err());
    }

    #[test]
    fn hele_shaw_residual_at_init() {
        let g = Grid1D::new(-2.0, 6.0, 800).unwrap();
        for m in [4.0, 16.0, 128.0] {
            let s = block(g, 0.0, 4.0, 1.0, m);
            let cells = s.rho.iter().filter(|&&r| r > 0.0).count() as f64;
            let expect = cells * g.dx() * (1.0 - ((m - 1.0) / m).powf(1.0 / (m - 1.0)));
            assert!((s.hele_shaw_residual() - expect).abs() < 1e-12 * expect.max(1e-300));
            assert!((cells * g.dx() - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn level_position_interpolates() {
        let g = Grid1D::new(0.0, 10.0, 10).unwrap();
        let rho = vec![0.0, 1.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0];
        let s = State::from_density(g, rho, 2.0).unwrap();
        assert!((s.level_position(0.75).unwrap() - 4.0).abs() < 1e-14);
        assert!((s.level_position(0.25).unwrap() - 5.0).abs() < 1e-14);
        assert!(matches!(s.level_position(2.0), Err(Error::NotFound(_))));
        assert_eq!(s.front_position(1e-8), 4.5);
    }

    #[test]
    fn uniform_saturated_state_is_stationary() {
        let model = ReactionModel::bistable_quadratic(0.25).unwrap();
        let g = Grid1D::new(0.0, 1.0, 64).unwrap();
        let m = 8.0;
        let r = density_of(1.0, m);
        let mut rho = vec![r; 64];
        rho[0] = 0.0;
        rho[63] = 0.0;
        let mut s = State::from_density(g, rho, m).unwrap();
        let mut solver = Solver::new(&model, SolverConfig::default()).unwrap();
        solver.step(&mut s).unwrap();
        for i in 3..61 {
            assert!((s.rho[i] - r).abs() < 1e-15);
        }
    }

    #[test]
    fn run_snapshots_and_empty_run() {
        let model = ReactionModel::bistable_quadratic(0.25).unwrap();
        let g = Grid1D::new(-4.0, 8.0, 96).unwrap();
        let s = block(g, 0.0, 4.0, 1.0, 4.0);
        let mut solver = Solver::new(&model, SolverConfig::default()).unwrap();
        let traj = solver.run(s.clone()).unwrap();
        assert_eq!(traj.snapshots, vec![s.clone()]);

        let config = SolverConfig {
            t_end: 0.5,
            snapshot_times: vec![0.1, 0.2],
            ..SolverConfig::default()
        };
        let mut solver = Solver::new(&model, config).unwrap();
        let traj = solver.run(s).unwrap();
        let times = traj.times();
        assert_eq!(times.len(), 4);
        let dt = solver.time_step(&traj.snapshots[0]);
        assert!(times[1] >= 0.1 && times[1] < 0.1 + dt);
        assert!(times[3] >= 0.5);
    }

    #[test]
    fn support_reaching_boundary_aborts() {
        let model = ReactionModel::bistable_quadratic(0.0).unwrap();
        let g = Grid1D::new(0.0, 4.0, 32).unwrap();
        let s = block(g, 0.5, 3.5, 1.0, 2.0);
        let config = SolverConfig {
            t_end: 50.0,
            ..SolverConfig::default()
        };
        let mut solver = Solver::new(&model, config).unwrap();
        assert!(matches!(
            solver.run(s),
            Err(Error::SupportAtBoundary { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            cfl: 0.6,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            t_end: 1.0,
            snapshot_times: vec![0.5, 0.2],
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            t_end: 1.0,
            snapshot_times: vec![2.0],
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn saturated_residual_of_elliptic_profile() {
        let model = ReactionModel::bistable_quadratic(0.25).unwrap();
        let crit = crate::elliptic::find_l0(&model).unwrap();
        let length = 1.2 * crit.l0;
        let mut last = f64::INFINITY;
        for n in [101usize, 201, 401] {
            let prof = crate::elliptic::solve_bvp(&model, length, n)
                .unwrap()
                .remove(0);
            let dx = length / (n - 1) as f64;
            let rho = vec![1.0; n];
            let r = saturated_pressure_residual(dx, &rho, &prof.us, &model, 1e-9);
            assert!(r < last / 3.0, "{r} vs {last}");
            last = r;
        }
        let empty = vec![0.5; 10];
        assert_eq!(
            saturated_pressure_residual(0.1, &empty, &empty, &model, 1e-6),
            0.0
        );
    }
}
