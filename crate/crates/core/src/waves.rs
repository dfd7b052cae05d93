//! Travelling waves of the pressure equation
//! `-c p' = (m-1) p (p'' + f(p)) + |p'|^2` and their `m -> infinity` limit.
//!
//! Along a monotone wave `q = -p'` is a function of `p`, and
//!
//! ```text
//! dq/dp = (c q - q^2 - (m-1) p f(p)) / ((m-1) p q).
//! ```
//!
//! The shooting starts on the unstable direction of the saddle
//! `(p_max, 0)` and runs towards `p = 0`. It is carried out in `s = ln p`
//! with the travel coordinate `dtau = dx / p`, in which
//!
//! ```text
//! ds/dtau = -q,    dq/dtau = (q^2 - c q) / (m-1) + p f(p),    dx/dtau = p
//! ```
//!
//! is polynomial in `(p, q)` and zeros of `q` are crossed transversally.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{bisect_predicate, rk4_step, Control, Dopri5};
use crate::reaction::{ReactionClass, ReactionModel};

/// Default start offset below `p_max`, relative to `p_max`.
pub const EPS_REL: f64 = 1e-6;
/// Shooting stops at `p_floor = P_FLOOR_REL * p_max`.
pub const P_FLOOR_REL: f64 = 1e-8;
/// `q` below this counts as an interior zero.
pub const Q_FLOOR: f64 = 1e-12;
const SHOOT_RTOL: f64 = 1e-10;
const SLOW_TOL: f64 = 1e-9;
const SPEED_TOL: f64 = 1e-8;
const SHARP_TOL: f64 = 1e-6;
const SCAN_POINTS: usize = 20;
/// Step cap in the travel coordinate when sampling a profile.
const MAX_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutcomeKind {
    /// `q` vanished at `p_star` in `(p_floor, p_max)`.
    InteriorZero { p_star: f64 },
    /// The trajectory reached `p_floor` with `q = q0`.
    ReachedOrigin { q0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveOutcome {
    pub kind: OutcomeKind,
    /// `(p, q)` at every accepted step, when requested.
    pub trace: Option<Vec<(f64, f64)>>,
}

/// Pressure along a wave or limit profile, with `xs` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub speed: f64,
    pub sharp_front: bool,
}

impl WaveProfile {
    /// Linear interpolation; constant continuation beyond both ends.
    pub fn pressure_at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 0 {
            return 0.0;
        }
        if x <= self.xs[0] {
            return self.ps[0];
        }
        if x >= self.xs[n - 1] {
            return self.ps[n - 1];
        }
        let k = self.xs.partition_point(|&v| v <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let t = (x - x0) / (x1 - x0);
        self.ps[k - 1] + t * (self.ps[k] - self.ps[k - 1])
    }

    /// Rightmost `x` where the profile crosses `level` (linear interpolation).
    pub fn position_of(&self, level: f64) -> Option<f64> {
        let k = self.ps.iter().rposition(|&p| p >= level)?;
        if k + 1 >= self.ps.len() {
            return Some(self.xs[k]);
        }
        let (p0, p1) = (self.ps[k], self.ps[k + 1]);
        let t = if p0 > p1 {
            (p0 - level) / (p0 - p1)
        } else {
            0.0
        };
        Some(self.xs[k] + t * (self.xs[k + 1] - self.xs[k]))
    }

    /// The same profile translated so that it crosses `level` at `x = 0`.
    pub fn anchored_at(&self, level: f64) -> Option<Self> {
        let shift = self.position_of(level)?;
        let mut out = self.clone();
        for x in &mut out.xs {
            *x -= shift;
        }
        Some(out)
    }
}

/// Result of `wave_speed_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSpeed {
    pub m: f64,
    pub speed: f64,
    /// `|q(p_floor) - c| <= 1e-6` at the returned speed.
    pub sharp_front: bool,
    /// `q(p_floor)` at the returned speed; `None` for an interior zero.
    pub q0: Option<f64>,
    /// The speed moved by less than `1e-6` (relative) when `eps` was halved.
    pub eps_robust: bool,
    /// The coarse validation scan, `(c, predicate)`.
    pub scan: Vec<(f64, bool)>,
}

fn saddle_rate(model: &ReactionModel) -> Result<f64> {
    let a = -model.rate_derivative(model.p_max());
    if !(a > 0.0) {
        return Err(Error::DegenerateEquilibrium { a });
    }
    Ok(a)
}

/// Slope `lambda` of `q ~ lambda (p_max - p)` on the unstable branch at
/// `p_max`: the positive root of `lambda^2 + c/k lambda - a = 0` with
/// `k = (m-1) p_max` and `a = -f'(p_max)`.
pub fn local_slope(model: &ReactionModel, m: f64, c: f64) -> Result<f64> {
    let a = saddle_rate(model)?;
    let b = c / ((m - 1.0) * model.p_max());
    Ok(0.5 * (-b + (b * b + 4.0 * a).sqrt()))
}

#[derive(Debug, Clone, Copy)]
struct Shooter<'a> {
    model: &'a ReactionModel,
    m: f64,
    c: f64,
    eps: f64,
}

/// Where a shooting run ended, with the accepted steps as `(p, q, x)`.
struct Shot {
    kind: OutcomeKind,
    path: Vec<[f64; 3]>,
}

impl Shooter<'_> {
    fn rhs(&self, y: &[f64; 3]) -> [f64; 3] {
        let (s, q) = (y[0], y[1]);
        let p = s.exp();
        [
            -q,
            (q * q - self.c * q) / (self.m - 1.0) + p * self.model.rate(p),
            p,
        ]
    }

    /// `q` at `p_max - eps` on the unstable manifold, to second order in
    /// `e = p_max - p`: `q = lambda e + mu e^2` with
    /// `mu = ((k + 1) lambda^2 + k P b - k a) / (3 k P lambda + c)`, where
    /// `P = p_max`, `k = m - 1`, `a = -f'(P)`, `b = f''(P) / 2`.
    fn start_q(&self) -> Result<f64> {
        let big_p = self.model.p_max();
        let lam = local_slope(self.model, self.m, self.c)?;
        let k = self.m - 1.0;
        let a = -self.model.rate_derivative(big_p);
        let b = 0.5 * self.model.polynomial_f().derivative().derivative().eval(big_p);
        let denom = 3.0 * k * big_p * lam + self.c;
        let mu = if denom > 0.0 {
            ((k + 1.0) * lam * lam + k * big_p * b - k * a) / denom
        } else {
            0.0
        };
        let e = self.eps;
        Ok(lam * e + mu * e * e)
    }

    /// State where component `comp` of the cubic Hermite interpolant over
    /// one accepted step reaches `level`.
    fn crossing(
        &self,
        t0: f64,
        y0: &[f64; 3],
        t1: f64,
        y1: &[f64; 3],
        comp: usize,
        level: f64,
    ) -> [f64; 3] {
        let h = t1 - t0;
        let (f0, f1) = (self.rhs(y0), self.rhs(y1));
        let eval = |th: f64| {
            let th2 = th * th;
            let th3 = th2 * th;
            let h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
            let h10 = th3 - 2.0 * th2 + th;
            let h01 = -2.0 * th3 + 3.0 * th2;
            let h11 = th3 - th2;
            let mut out = [0.0; 3];
            for i in 0..3 {
                out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
            }
            out
        };
        let above = y0[comp] > level;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if (eval(mid)[comp] > level) == above {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eval(0.5 * (lo + hi))
    }

    /// Lower root of `q^2 - c q + (m-1) p f(p) = 0`, the attracting slow
    /// branch for `c > 0` near the origin.
    fn slow_branch(&self, p: f64) -> Option<f64> {
        let g = (self.m - 1.0) * p * self.model.rate(p);
        let disc = self.c * self.c - 4.0 * g;
        (self.c > 0.0 && g > 0.0 && disc > 0.0).then(|| 2.0 * g / (self.c + disc.sqrt()))
    }

    fn shoot(&self, record: bool, h_max: f64) -> Result<Shot> {
        let p_max = self.model.p_max();
        let y0 = [(p_max - self.eps).ln(), self.start_q()?, 0.0];
        let s_floor = (P_FLOOR_REL * p_max).ln();
        let integrator = Dopri5 {
            atol: 1e-13,
            h_max,
            max_steps: 2_000_000,
            ..Dopri5::with_rtol(SHOOT_RTOL)
        };
        let mut path = Vec::new();
        let to_point = |y: &[f64; 3]| [y[0].exp(), y[1], y[2]];
        if record {
            path.push(to_point(&y0));
        }
        let mut kind = None;
        integrator
            .integrate(
                |_, y: &[f64; 3]| self.rhs(y),
                0.0,
                y0,
                f64::MAX,
                1.0,
                |t_prev, y_prev, t, y| {
                    if y[1] <= Q_FLOOR {
                        let at = self.crossing(t_prev, y_prev, t, y, 1, Q_FLOOR);
                        kind = Some(OutcomeKind::InteriorZero {
                            p_star: at[0].exp(),
                        });
                        return Control::Stop;
                    }
                    // Orbits entering the origin along the slow branch are
                    // stiff (relaxation rate c/(m-1) against p q); they are
                    // closed off once they sit on it.
                    if y[1] < 0.5 * self.c {
                        let p = y[0].exp();
                        if let Some(branch) = self.slow_branch(p) {
                            if (y[1] - branch).abs() <= SLOW_TOL * self.c {
                                let q0 = self.slow_branch(s_floor.exp()).unwrap_or(0.0);
                                if record {
                                    path.push([s_floor.exp(), q0, f64::INFINITY]);
                                }
                                kind = Some(OutcomeKind::ReachedOrigin { q0 });
                                return Control::Stop;
                            }
                        }
                    }
                    if y[0] <= s_floor {
                        let at = self.crossing(t_prev, y_prev, t, y, 0, s_floor);
                        let q0 = at[1];
                        if record {
                            path.push([s_floor.exp(), q0, at[2]]);
                        }
                        kind = Some(OutcomeKind::ReachedOrigin { q0 });
                        return Control::Stop;
                    }
                    if record {
                        path.push(to_point(y));
                    }
                    Control::Continue
                },
            )
            .map_err(|u| Error::StiffFailure {
                p: f64::NAN,
                step: u.h,
            })?;
        let kind = kind.ok_or_else(|| Error::StiffFailure {
            p: f64::NAN,
            step: f64::NAN,
        })?;
        Ok(Shot { kind, path })
    }
}

fn check_shooting_args(m: f64, c: f64, eps: f64, p_max: f64) -> Result<()> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "exponent m must be > 1, got {m}"
        )));
    }
    if !c.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "speed must be finite, got {c}"
        )));
    }
    if !(eps > 0.0 && eps < p_max) {
        return Err(Error::Domain(alloc::format!(
            "start offset must lie in (0, p_max), got {eps}"
        )));
    }
    Ok(())
}

/// Integrates the phase-plane equation from `p_max - eps` down to
/// `p_floor`.
pub fn shoot_q(model: &ReactionModel, m: f64, c: f64, eps: f64) -> Result<WaveOutcome> {
    shoot_q_traced(model, m, c, eps, false)
}

pub fn shoot_q_traced(
    model: &ReactionModel,
    m: f64,
    c: f64,
    eps: f64,
    record_trace: bool,
) -> Result<WaveOutcome> {
    check_shooting_args(m, c, eps, model.p_max())?;
    let shot = Shooter { model, m, c, eps }.shoot(record_trace, f64::INFINITY)?;
    Ok(WaveOutcome {
        kind: shot.kind,
        trace: record_trace.then(|| shot.path.iter().map(|v| (v[0], v[1])).collect()),
    })
}

/// Which side of the wave speed `c` lies on: `true` when `c` is too fast.
fn too_fast(outcome: &OutcomeKind, c: f64, receding: bool) -> bool {
    match *outcome {
        OutcomeKind::InteriorZero { .. } => true,
        OutcomeKind::ReachedOrigin { q0 } => !receding && q0 < c,
    }
}

/// Speed `c*_m` of the travelling wave at exponent `m`.
///
/// With `F(p_max) > 0` (or a monostable `f`) this is the sharp-front wave,
/// `q(0+) = c`; with `F(p_max) < 0` it is the receding wave with
/// `q(0+) = 0`.
pub fn wave_speed_m(model: &ReactionModel, m: f64) -> Result<WaveSpeed> {
    wave_speed_with_eps(model, m, EPS_REL * model.p_max())
}

pub fn wave_speed_with_eps(model: &ReactionModel, m: f64, eps: f64) -> Result<WaveSpeed> {
    let mut primary = speed_search(model, m, eps)?;
    let halved = speed_search(model, m, 0.5 * eps)?;
    let scale = primary.speed.abs().max(1.0);
    primary.eps_robust = (primary.speed - halved.speed).abs() <= 1e-6 * scale;
    Ok(primary)
}

fn speed_search(model: &ReactionModel, m: f64, eps: f64) -> Result<WaveSpeed> {
    let receding = match model.class() {
        ReactionClass::Monostable => false,
        ReactionClass::Bistable { .. } => {
            let integral = model.integral();
            if integral == 0.0 {
                return Err(Error::Domain(
                    "wave speed is not computed for F(p_max) = 0".into(),
                ));
            }
            integral < 0.0
        }
        ReactionClass::Inert => {
            return Err(Error::Domain("inert model has no travelling wave".into()))
        }
    };
    check_shooting_args(m, 0.0, eps, model.p_max())?;
    let predicate = |c: f64| -> Result<bool> {
        let out = shoot_q(model, m, c, eps)?;
        Ok(too_fast(&out.kind, c, receding))
    };

    let (lo, hi) = (-20.0 * m, if receding { 0.0 } else { 20.0 });
    let mut scan = Vec::with_capacity(SCAN_POINTS);
    for k in 0..SCAN_POINTS {
        let c = lo + (hi - lo) * k as f64 / (SCAN_POINTS - 1) as f64;
        scan.push((c, predicate(c)?));
    }
    let flips = scan.windows(2).filter(|w| w[0].1 != w[1].1).count();
    let first_true = scan.iter().position(|s| s.1);
    let (a, b) = match (flips, first_true) {
        (1, Some(k)) if k > 0 => (scan[k - 1].0, scan[k].0),
        (0, _) => {
            return Err(Error::Bracket(alloc::format!(
                "shooting predicate does not change over [{lo}, {hi}] at m = {m}"
            )))
        }
        _ => {
            return Err(Error::NonMonotonePredicate(alloc::format!(
                "{flips} sign changes over the validation scan at m = {m}"
            )))
        }
    };

    let mut failure = None;
    let (c_lo, c_hi) = bisect_predicate(
        |c| match predicate(c) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        },
        a,
        b,
        SPEED_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let speed = 0.5 * (c_lo + c_hi);
    let out = shoot_q(model, m, speed, eps)?;
    let q0 = match out.kind {
        OutcomeKind::ReachedOrigin { q0 } => Some(q0),
        OutcomeKind::InteriorZero { .. } => None,
    };
    let sharp_front = !receding && q0.is_some_and(|q| (q - speed).abs() <= SHARP_TOL);
    Ok(WaveSpeed {
        m,
        speed,
        sharp_front,
        q0,
        eps_robust: false,
        scan,
    })
}

/// The wave profile `p(x)` at speed `c`, anchored so that `p = p_floor` at
/// `x = 0`.
pub fn wave_profile_x(model: &ReactionModel, m: f64, c: f64) -> Result<WaveProfile> {
    let eps = EPS_REL * model.p_max();
    check_shooting_args(m, c, eps, model.p_max())?;
    let shot = Shooter { model, m, c, eps }.shoot(true, MAX_STEP)?;
    let q0 = match shot.kind {
        OutcomeKind::ReachedOrigin { q0 } => q0,
        OutcomeKind::InteriorZero { p_star } => return Err(Error::NoProfile { p_star }),
    };
    // a slow-branch closure has no finite position
    let path: Vec<[f64; 3]> = shot.path.into_iter().filter(|v| v[2].is_finite()).collect();
    let x_front = path.last().map_or(0.0, |v| v[2]);
    Ok(WaveProfile {
        xs: path.iter().map(|v| v[2] - x_front).collect(),
        ps: path.iter().map(|v| v[0]).collect(),
        speed: c,
        sharp_front: (q0 - c).abs() <= SHARP_TOL,
    })
}

/// `q(p_floor)` at speed `c`: the one-sided front slope is `-q0`.
pub fn front_slope(model: &ReactionModel, m: f64, c: f64) -> Result<f64> {
    match shoot_q(model, m, c, EPS_REL * model.p_max())?.kind {
        OutcomeKind::ReachedOrigin { q0 } => Ok(-q0),
        OutcomeKind::InteriorZero { p_star } => Err(Error::NoProfile { p_star }),
    }
}

/// Limit profile: `h'' + f(h) = 0` on `[-x_extent, 0]` with `h(0) = 0`,
/// `h'(0) = -sqrt(2 F(p_max))`, integrated backwards from `x = 0` with RK4
/// on `10^4` steps.
///
/// After each step the slope is reset to the value fixed by the first
/// integral `|h'|^2 / 2 + F(h) = F(p_max)`; the saddle at `p_max` would
/// otherwise amplify round-off by `exp(sqrt(-f'(p_max)) x_extent)`.
pub fn limit_profile_h(model: &ReactionModel, x_extent: f64) -> Result<WaveProfile> {
    let integral = model.integral();
    if integral < 0.0 {
        return Err(Error::NoBoundedSolution { integral });
    }
    if !(x_extent > 0.0) || !x_extent.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "x_extent must be positive, got {x_extent}"
        )));
    }
    const STEPS: usize = 10_000;
    let p_max = model.p_max();
    let speed = (2.0 * integral).sqrt();
    let dx = x_extent / STEPS as f64;
    // F(p_max) - F(p_max - e) = e D(e), free of cancellation near p_max
    let deficit = model.polynomial_primitive().backward_difference_quotient(p_max);
    let slope_on_orbit = |h: f64| {
        let e = p_max - h;
        -(2.0 * e * deficit.eval(e)).max(0.0).sqrt()
    };
    let mut rhs = |_x: f64, y: &[f64; 2]| [y[1], -model.rate(y[0])];
    let mut y = [0.0, -speed];
    let mut xs = alloc::vec![0.0; STEPS + 1];
    let mut ps = alloc::vec![0.0; STEPS + 1];
    for k in 1..=STEPS {
        let x = -(k as f64 - 1.0) * dx;
        y = rk4_step(&mut rhs, x, &y, -dx);
        y[0] = y[0].clamp(0.0, p_max);
        y[1] = slope_on_orbit(y[0]);
        xs[STEPS - k] = -(k as f64) * dx;
        ps[STEPS - k] = y[0];
    }
    Ok(WaveProfile {
        xs,
        ps,
        speed,
        sharp_front: true,
    })
}

/// `limit_speed / (1 - ell)` for monostable models.
pub fn limit_speed_ell(model: &ReactionModel, ell: f64) -> Result<f64> {
    if model.class() != ReactionClass::Monostable {
        return Err(Error::Domain(
            "the density-jump family of speeds exists only for monostable models".into(),
        ));
    }
    if !(0.0..1.0).contains(&ell) {
        return Err(Error::Domain(alloc::format!(
            "ell must lie in [0, 1), got {ell}"
        )));
    }
    Ok(model.limit_speed()? / (1.0 - ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(alpha: f64) -> ReactionModel {
        ReactionModel::bistable_quadratic(alpha).unwrap()
    }

    #[test]
    fn local_slope_examples() {
        let m = quad(0.25);
        let a = 0.75;
        assert!((local_slope(&m, 8.0, 0.0).unwrap() - a.sqrt()).abs() < 1e-15);
        let big = local_slope(&m, 1e12, 0.3).unwrap();
        assert!((big - a.sqrt()).abs() < 1e-9);
        // lambda solves lambda^2 + c/k lambda - a = 0
        let (mm, c) = (8.0, 0.3);
        let lam = local_slope(&m, mm, c).unwrap();
        assert!((lam * lam + c / (mm - 1.0) * lam - a).abs() < 1e-14);
        let degenerate = ReactionModel::polynomial(alloc::vec![0.0, 0.0, 0.0, -1.0]);
        if let Ok(d) = degenerate {
            assert!(matches!(
                local_slope(&d, 8.0, 0.0),
                Err(Error::DegenerateEquilibrium { .. })
            ));
        }
    }

    #[test]
    fn local_slope_matches_trace() {
        let model = quad(0.25);
        let (m, c) = (8.0, 0.3);
        let lam = local_slope(&model, m, c).unwrap();
        let out = shoot_q_traced(&model, m, c, 1e-6, true).unwrap();
        let trace = out.trace.unwrap();
        // fit q / (1 - p) over 1e-4 < 1 - p < 1e-3
        let fits: Vec<f64> = trace
            .iter()
            .filter(|(p, _)| (1e-4..1e-3).contains(&(1.0 - p)))
            .map(|(p, q)| q / (1.0 - p))
            .collect();
        assert!(!fits.is_empty());
        for f in fits {
            assert!((f - lam).abs() < 0.02 * lam, "{f} vs {lam}");
        }
    }

    #[test]
    fn shooting_sides() {
        let model = quad(0.25);
        // energy bound keeps q positive for a standing profile
        match shoot_q(&model, 8.0, 0.0, 1e-6).unwrap().kind {
            OutcomeKind::ReachedOrigin { q0 } => assert!(q0 > 0.0),
            k => panic!("{k:?}"),
        }
        let fast = shoot_q(&model, 8.0, 10.0, 1e-6).unwrap().kind;
        assert!(too_fast(&fast, 10.0, false), "{fast:?}");
    }

    #[test]
    fn shooting_eps_robust() {
        let model = quad(0.25);
        for c in [0.1, 0.2] {
            let a = shoot_q(&model, 8.0, c, 1e-6).unwrap().kind;
            let b = shoot_q(&model, 8.0, c, 5e-7).unwrap().kind;
            match (a, b) {
                (OutcomeKind::ReachedOrigin { q0: x }, OutcomeKind::ReachedOrigin { q0: y }) => {
                    assert!((x - y).abs() < 1e-6 * x, "{x} {y}")
                }
                (OutcomeKind::InteriorZero { .. }, OutcomeKind::InteriorZero { .. }) => {}
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn speed_at_moderate_m() {
        let model = quad(0.25);
        let w = wave_speed_m(&model, 8.0).unwrap();
        assert!(w.sharp_front, "{w:?}");
        assert!(w.eps_robust);
        assert!(w.speed > 0.2886751 && w.speed < 0.35);
        let slope = front_slope(&model, 8.0, w.speed).unwrap();
        assert!((slope + w.speed).abs() < 1e-3);
    }

    #[test]
    fn limit_speed_ell_examples() {
        let mono = quad(0.0);
        assert!((limit_speed_ell(&mono, 0.0).unwrap() - 0.5773503).abs() < 1e-7);
        assert!((limit_speed_ell(&mono, 0.5).unwrap() - 1.1547005).abs() < 1e-7);
        let a = limit_speed_ell(&mono, 0.9).unwrap();
        let b = limit_speed_ell(&mono, 0.99).unwrap();
        assert!(b > a);
        assert!(limit_speed_ell(&mono, 1.0).is_err());
        assert!(limit_speed_ell(&quad(0.25), 0.0).is_err());
    }

    #[test]
    fn limit_profile_errors() {
        assert!(matches!(
            limit_profile_h(&quad(0.4), 40.0),
            Err(Error::NoBoundedSolution { .. })
        ));
    }
}
