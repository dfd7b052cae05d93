//! The pressure boundary-value problem `-u'' = f(u)`, `u(0) = u(L) = 0`,
//! solved by the time-map method.
//!
//! A solution with slope `gamma = u'(0) > 0` rises to a peak `s0` with
//! `F(s0) = gamma^2 / 2` and is symmetric about `L / 2`; half its length is
//!
//! ```text
//! G(s0) = int_0^s0 dt / sqrt(gamma^2 - 2 F(t)).
//! ```
//!
//! Both endpoints of that integral are (integrably) singular in general, so
//! `[0, s0]` is split at `s0 / 2`: the lower part uses `t = v^2`, the upper
//! part `t = s0 - w^2`. After the substitutions both integrands are smooth.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{bisect, golden_section_min, AdaptiveQuadrature, Polynomial};
use crate::reaction::{ReactionClass, ReactionModel};

const QUAD_TOL: f64 = 1e-10;
/// Number of log-spaced slope samples used by `find_l0` and `solve_bvp`.
pub const GAMMA_SAMPLES: usize = 400;
/// Peaks with `f(s0)` below this fraction of `max |f|` are rejected.
const SINGULAR_REL_TOL: f64 = 1e-10;
/// Relative width of the band around `L0` treated as a double root.
const FOLD_REL_TOL: f64 = 1e-9;

/// One evaluation of the time map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeMapSample {
    pub gamma: f64,
    pub s0: f64,
    pub length: f64,
}

/// A single-bump solution sampled on a uniform grid of `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpProfile {
    pub xs: Vec<f64>,
    pub us: Vec<f64>,
    pub gamma: f64,
    pub peak: f64,
    /// `gamma^2 / 2`, the value of `|u'|^2 / 2 + F(u)` along the solution.
    pub energy_const: f64,
    /// Set when `L` sits on a fold of the time map (double root).
    pub tangential: bool,
}

impl BvpProfile {
    pub fn length(&self) -> f64 {
        self.xs.last().copied().unwrap_or(0.0) - self.xs.first().copied().unwrap_or(0.0)
    }
}

/// Minimum of the time map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLength {
    pub l0: f64,
    /// Slope at the minimiser; `0` when the infimum is the `gamma -> 0` limit.
    pub gamma_min: f64,
}

/// Quadrature state for one `(gamma, s0)` pair.
struct Bump<'a> {
    quad: &'a AdaptiveQuadrature,
    gamma_sq: f64,
    s0: f64,
    split: f64,
    /// `F(t) / t`
    primitive_over_t: Polynomial,
    /// `(F(s0) - F(s0 - w)) / w`
    upper_quotient: Polynomial,
}

impl<'a> Bump<'a> {
    fn new(model: &'a ReactionModel, quad: &'a AdaptiveQuadrature, gamma: f64, s0: f64) -> Self {
        let primitive = model.polynomial_primitive();
        Self {
            quad,
            gamma_sq: gamma * gamma,
            s0,
            split: 0.5 * s0,
            primitive_over_t: primitive.drop_constant_divided(),
            upper_quotient: primitive.backward_difference_quotient(s0),
        }
    }

    /// Integrand of the lower piece in `v = sqrt(t)`.
    fn lower_integrand(&self, v: f64) -> f64 {
        let w = v * v;
        let fq = self.primitive_over_t.eval(w);
        if self.gamma_sq == 0.0 {
            2.0 / (-2.0 * fq).sqrt()
        } else {
            2.0 * v / (self.gamma_sq - 2.0 * w * fq).sqrt()
        }
    }

    /// Integrand of the upper piece in `w = sqrt(s0 - t)`.
    fn upper_integrand(&self, w: f64) -> f64 {
        2.0 / (2.0 * self.upper_quotient.eval(w * w)).sqrt()
    }

    fn lower(&self, v0: f64, v1: f64) -> f64 {
        self.quad.integrate(|v| self.lower_integrand(v), v0, v1)
    }

    fn upper(&self, w0: f64, w1: f64) -> f64 {
        self.quad.integrate(|w| self.upper_integrand(w), w0, w1)
    }

    fn v_split(&self) -> f64 {
        self.split.sqrt()
    }

    fn w_split(&self) -> f64 {
        (self.s0 - self.split).sqrt()
    }

    /// `G(s0)`, half the support length.
    fn half_length(&self) -> f64 {
        self.lower(0.0, self.v_split()) + self.upper(0.0, self.w_split())
    }

    /// Samples `G^{-1}` at ascending abscissae `xs` in `[0, G(s0)]`.
    fn invert(&self, xs: &[f64]) -> Vec<f64> {
        let v_split = self.v_split();
        let w_split = self.w_split();
        let g_split = self.lower(0.0, v_split);
        let g_peak = g_split + self.upper(0.0, w_split);
        let mut out = Vec::with_capacity(xs.len());

        // lower piece, marching v upwards
        let (mut v_base, mut g_base) = (0.0, 0.0);
        // upper piece, marching w downwards from the split
        let (mut w_base, mut h_base) = (w_split, g_peak - g_split);
        for &x in xs {
            if x <= 0.0 {
                out.push(0.0);
            } else if x <= g_split {
                let v = invert_increasing(
                    x - g_base,
                    v_base,
                    v_split,
                    |a, b| self.lower(a, b),
                    |v| self.lower_integrand(v),
                );
                g_base += self.lower(v_base, v);
                v_base = v;
                out.push(v * v);
            } else if x >= g_peak {
                out.push(self.s0);
            } else {
                // remaining distance to the peak
                let target = g_peak - x;
                let w = invert_increasing_from_top(
                    h_base - target,
                    w_base,
                    |a, b| self.upper(a, b),
                    |w| self.upper_integrand(w),
                );
                h_base -= self.upper(w, w_base);
                w_base = w;
                out.push(self.s0 - w * w);
            }
        }
        out
    }
}

/// Finds `v` in `[v0, v1]` with `int_{v0}^{v} g = target`, `g > 0`.
fn invert_increasing(
    target: f64,
    v0: f64,
    v1: f64,
    integral: impl Fn(f64, f64) -> f64,
    integrand: impl Fn(f64) -> f64,
) -> f64 {
    if target <= 0.0 {
        return v0;
    }
    let (mut lo, mut hi) = (v0, v1);
    let mut v = v0 + (target / integrand(0.5 * (v0 + v1)).max(1e-300)).min(v1 - v0);
    for _ in 0..100 {
        let r = integral(v0, v) - target;
        if r > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        if r.abs() <= 1e-13 || hi - lo <= 1e-15 * hi.max(1e-300) {
            break;
        }
        let d = integrand(v);
        let mut next = v - r / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        v = next;
    }
    v
}

/// Finds `w` in `[0, w_top]` with `int_{w}^{w_top} g = amount`, `g > 0`.
fn invert_increasing_from_top(
    amount: f64,
    w_top: f64,
    integral: impl Fn(f64, f64) -> f64,
    integrand: impl Fn(f64) -> f64,
) -> f64 {
    if amount <= 0.0 {
        return w_top;
    }
    let (mut lo, mut hi) = (0.0, w_top);
    let mut w = (w_top - amount / integrand(w_top).max(1e-300)).clamp(0.0, w_top);
    for _ in 0..100 {
        // positive when w is too small (too much integral above it)
        let r = integral(w, w_top) - amount;
        if r > 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        if r.abs() <= 1e-13 || hi - lo <= 1e-15 * w_top.max(1e-300) {
            break;
        }
        let d = integrand(w);
        let mut next = w + r / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        w = next;
    }
    w
}

fn require_advancing(model: &ReactionModel) -> Result<f64> {
    let integral = model.integral();
    if integral <= 0.0 || model.class() == ReactionClass::Inert {
        return Err(Error::NoSolutionRegime { integral });
    }
    Ok((2.0 * integral).sqrt())
}

/// Peak value `s0` in `(alpha, p_max]` with `F(s0) = gamma^2 / 2`.
fn peak_for_slope(model: &ReactionModel, gamma: f64) -> f64 {
    let target = 0.5 * gamma * gamma;
    let lo = model.positive_interval_start();
    bisect(|s| model.primitive(s) - target, lo, model.p_max(), 1e-15).unwrap_or(model.p_max())
}

/// Evaluates the time map `gamma -> L(gamma) = 2 G(s0)`.
pub fn time_map(model: &ReactionModel, gamma: f64) -> Result<TimeMapSample> {
    let quad = AdaptiveQuadrature::new(QUAD_TOL);
    time_map_with(model, &quad, gamma)
}

fn time_map_with(
    model: &ReactionModel,
    quad: &AdaptiveQuadrature,
    gamma: f64,
) -> Result<TimeMapSample> {
    let gamma_max = require_advancing(model)?;
    if !(gamma > 0.0 && gamma < gamma_max) {
        return Err(Error::Domain(alloc::format!(
            "slope must lie in (0, {gamma_max}), got {gamma}"
        )));
    }
    let s0 = peak_for_slope(model, gamma);
    let f_s0 = model.rate(s0);
    if f_s0 <= SINGULAR_REL_TOL * model.max_abs_f() {
        return Err(Error::SingularTimeMap { s0, f_s0 });
    }
    let bump = Bump::new(model, quad, gamma, s0);
    Ok(TimeMapSample {
        gamma,
        s0,
        length: 2.0 * bump.half_length(),
    })
}

/// Slopes in `(0, gamma_max)`, log-spaced towards both endpoints.
pub fn gamma_samples(gamma_max: f64, n: usize) -> Vec<f64> {
    const Z: f64 = 9.0;
    (0..n)
        .map(|k| {
            let z = -Z + 2.0 * Z * k as f64 / (n - 1) as f64;
            gamma_max * 0.5 * (1.0 + z.tanh())
        })
        .collect()
}

/// Time map evaluated on `gamma_samples`; singular samples are dropped.
pub fn time_map_scan(model: &ReactionModel, n: usize) -> Result<Vec<TimeMapSample>> {
    let gamma_max = require_advancing(model)?;
    let quad = AdaptiveQuadrature::new(QUAD_TOL);
    Ok(gamma_samples(gamma_max, n)
        .into_iter()
        .filter_map(|g| time_map_with(model, &quad, g).ok())
        .collect())
}

/// `L0 = min_gamma L(gamma)`, the smallest interval carrying a non-trivial
/// solution.
pub fn find_l0(model: &ReactionModel) -> Result<CriticalLength> {
    let scan = time_map_scan(model, GAMMA_SAMPLES)?;
    find_l0_from_scan(model, &scan)
}

fn find_l0_from_scan(model: &ReactionModel, scan: &[TimeMapSample]) -> Result<CriticalLength> {
    let (k, best) = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.length.total_cmp(&b.1.length))
        .ok_or_else(|| Error::NotFound("time map has no regular sample".into()))?;
    let mut result = CriticalLength {
        l0: best.length,
        gamma_min: best.gamma,
    };
    if k > 0 && k + 1 < scan.len() {
        let quad = AdaptiveQuadrature::new(QUAD_TOL);
        let (g, l) = golden_section_min(
            |g| {
                time_map_with(model, &quad, g)
                    .map(|s| s.length)
                    .unwrap_or(f64::INFINITY)
            },
            scan[k - 1].gamma,
            scan[k + 1].gamma,
            1e-12 * scan[k + 1].gamma,
        );
        if l < result.l0 {
            result = CriticalLength {
                l0: l,
                gamma_min: g,
            };
        }
    }
    if let Ok(lc) = periodic_length(model) {
        if lc < result.l0 {
            result = CriticalLength {
                l0: lc,
                gamma_min: 0.0,
            };
        }
    }
    Ok(result)
}

/// All single-bump solutions on `(0, L)`, ordered by increasing slope, each
/// sampled at `n` uniform points.
pub fn solve_bvp(model: &ReactionModel, length: f64, n: usize) -> Result<Vec<BvpProfile>> {
    if !(length > 0.0) {
        return Err(Error::Domain(alloc::format!(
            "interval length must be positive, got {length}"
        )));
    }
    if n < 3 {
        return Err(Error::Domain("profile needs at least 3 points".into()));
    }
    if require_advancing(model).is_err() {
        return Ok(Vec::new());
    }
    let mut scan = time_map_scan(model, GAMMA_SAMPLES)?;
    let crit = find_l0_from_scan(model, &scan)?;
    if length < crit.l0 * (1.0 - FOLD_REL_TOL) {
        return Ok(Vec::new());
    }
    let quad = AdaptiveQuadrature::new(QUAD_TOL);
    let mut profiles = Vec::new();
    if crit.gamma_min > 0.0 && (length - crit.l0).abs() <= FOLD_REL_TOL * length {
        let mut p = profile_for_slope(model, &quad, crit.gamma_min, length, n)?;
        p.tangential = true;
        profiles.push(p);
        return Ok(profiles);
    }
    if crit.gamma_min > 0.0 {
        let pos = scan.partition_point(|s| s.gamma < crit.gamma_min);
        scan.insert(
            pos,
            TimeMapSample {
                gamma: crit.gamma_min,
                s0: peak_for_slope(model, crit.gamma_min),
                length: crit.l0,
            },
        );
    }
    let residual = |g: f64| {
        time_map_with(model, &quad, g)
            .map(|s| s.length - length)
            .unwrap_or(f64::INFINITY)
    };
    let mut roots: Vec<f64> = Vec::new();
    for pair in scan.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (ra, rb) = (a.length - length, b.length - length);
        if ra == 0.0 {
            roots.push(a.gamma);
        } else if ra.signum() != rb.signum() && rb != 0.0 {
            if let Some(g) = bisect(residual, a.gamma, b.gamma, 1e-14) {
                roots.push(g);
            }
        }
    }
    if let Some(last) = scan.last() {
        if last.length == length {
            roots.push(last.gamma);
        }
    }
    for g in roots {
        profiles.push(profile_for_slope(model, &quad, g, length, n)?);
    }
    Ok(profiles)
}

fn profile_for_slope(
    model: &ReactionModel,
    quad: &AdaptiveQuadrature,
    gamma: f64,
    length: f64,
    n: usize,
) -> Result<BvpProfile> {
    let s0 = peak_for_slope(model, gamma);
    let bump = Bump::new(model, quad, gamma, s0);
    let half = bump.half_length();
    let xs: Vec<f64> = (0..n).map(|k| length * k as f64 / (n - 1) as f64).collect();
    let us = symmetric_bump(&bump, half, length, &xs);
    Ok(BvpProfile {
        xs,
        us,
        gamma,
        peak: s0,
        energy_const: 0.5 * gamma * gamma,
        tangential: false,
    })
}

/// Samples a bump of half-width `half` rescaled onto `[0, length]`.
fn symmetric_bump(bump: &Bump<'_>, half: f64, length: f64, xs: &[f64]) -> Vec<f64> {
    let scale = 2.0 * half / length;
    let mid = 0.5 * length;
    // distances from the nearer endpoint, inverted in ascending order
    let mut order: Vec<(f64, usize)> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let d = if x <= mid { x } else { length - x };
            ((d * scale).clamp(0.0, half), i)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let targets: Vec<f64> = order.iter().map(|o| o.0).collect();
    let values = bump.invert(&targets);
    let mut us = alloc::vec![0.0; xs.len()];
    for ((_, i), u) in order.into_iter().zip(values) {
        us[i] = u;
    }
    us
}

/// Length `L_c` of the zero-slope solution's first return to zero
/// (bistable class with `F(p_max) > 0`).
pub fn periodic_length(model: &ReactionModel) -> Result<f64> {
    let beta = zero_slope_peak(model)?;
    let quad = AdaptiveQuadrature::new(QUAD_TOL);
    let bump = Bump::new(model, &quad, 0.0, beta);
    Ok(2.0 * bump.half_length())
}

fn zero_slope_peak(model: &ReactionModel) -> Result<f64> {
    if !matches!(model.class(), ReactionClass::Bistable { .. }) {
        return Err(Error::Domain(
            "zero-slope solutions are non-trivial only for the bistable class".into(),
        ));
    }
    model
        .beta()
        .ok_or_else(|| Error::Domain("zero-slope periodic solution needs F(p_max) > 0".into()))
}

/// The zero-slope solution on `[0, periods * L_c]`: `periods` identical bumps
/// touching zero with zero slope.
pub fn periodic_profile(model: &ReactionModel, periods: usize, n: usize) -> Result<BvpProfile> {
    if periods == 0 || n < 3 {
        return Err(Error::Domain(
            "need at least one period and 3 points".into(),
        ));
    }
    let beta = zero_slope_peak(model)?;
    let quad = AdaptiveQuadrature::new(QUAD_TOL);
    let bump = Bump::new(model, &quad, 0.0, beta);
    let half = bump.half_length();
    let period = 2.0 * half;
    let length = period * periods as f64;
    let xs: Vec<f64> = (0..n).map(|k| length * k as f64 / (n - 1) as f64).collect();
    let local: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let r = x - period * (x / period).floor();
            if x >= length {
                0.0
            } else {
                r
            }
        })
        .collect();
    let us = symmetric_bump(&bump, half, period, &local);
    Ok(BvpProfile {
        xs,
        us,
        gamma: 0.0,
        peak: beta,
        energy_const: 0.0,
        tangential: false,
    })
}

/// `max_i | |u'_i|^2 / 2 + F(u_i) - gamma^2 / 2 |` over interior nodes, with
/// centred differences for `u'`.
pub fn energy_residual(model: &ReactionModel, profile: &BvpProfile) -> Result<f64> {
    let n = profile.us.len();
    if n < 3 || profile.xs.len() != n {
        return Err(Error::Domain("profile needs at least 3 points".into()));
    }
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let du = (profile.us[i + 1] - profile.us[i - 1]) / (profile.xs[i + 1] - profile.xs[i - 1]);
        let e = 0.5 * du * du + model.primitive(profile.us[i]) - profile.energy_const;
        worst = worst.max(e.abs());
    }
    Ok(worst)
}

/// `pi / sqrt(K)`: no non-trivial solution exists on shorter intervals.
pub fn poincare_bound(model: &ReactionModel) -> f64 {
    PI / model.sup_ratio_k().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rk4_step;

    fn quad(alpha: f64) -> ReactionModel {
        ReactionModel::bistable_quadratic(alpha).unwrap()
    }

    /// Independent oracle: integrate `u'' = -f(u)` from `u(0) = 0`,
    /// `u'(0) = gamma` with RK4 and locate the first return to zero.
    fn ivp_return_length(model: &ReactionModel, gamma: f64, h: f64) -> f64 {
        let mut rhs = |_x: f64, y: &[f64; 2]| [y[1], -model.rate(y[0])];
        let mut y = [0.0, gamma];
        let mut x = 0.0;
        let mut rising = true;
        loop {
            let next = rk4_step(&mut rhs, x, &y, h);
            if next[0] > 0.0 {
                rising = false;
            }
            if !rising && next[0] <= 0.0 && x > 0.0 {
                // linear interpolation of the crossing
                let t = y[0] / (y[0] - next[0]);
                return x + t * h;
            }
            y = next;
            x += h;
            assert!(x < 1e3, "no return");
        }
    }

    #[test]
    fn time_map_matches_ivp_shooting() {
        let m = quad(0.25);
        let s = time_map(&m, 0.1).unwrap();
        assert!((m.primitive(s.s0) - 0.005).abs() < 1e-14);
        assert!(s.s0 > 0.25 && s.s0 < 1.0);
        let oracle = ivp_return_length(&m, 0.1, 1e-4);
        assert!(
            (s.length - oracle).abs() < 1e-6,
            "{} vs {}",
            s.length,
            oracle
        );
    }

    #[test]
    fn monostable_small_slope_limit() {
        let m = quad(0.0);
        let a = time_map(&m, 1e-4).unwrap().length;
        let b = time_map(&m, 1e-5).unwrap().length;
        // linear extrapolation in gamma
        let extrap = b - (a - b) / 9.0;
        assert!((extrap - PI).abs() < 1e-6, "{a} {b} {extrap}");
    }

    #[test]
    fn time_map_diverges_at_top() {
        let m = quad(0.25);
        let gmax = (2.0 * m.integral()).sqrt();
        let l1 = time_map(&m, gmax * (1.0 - 1e-4)).unwrap().length;
        let l2 = time_map(&m, gmax * (1.0 - 1e-8)).unwrap().length;
        assert!(l2 > l1 + 8.0 && l1 > 15.0, "{l1} {l2}");
    }

    #[test]
    fn time_map_domain_errors() {
        let m = quad(0.25);
        assert!(matches!(time_map(&m, 0.0), Err(Error::Domain(_))));
        assert!(matches!(time_map(&m, 0.3), Err(Error::Domain(_))));
        assert!(matches!(
            time_map(&quad(0.4), 0.1),
            Err(Error::NoSolutionRegime { .. })
        ));
    }

    #[test]
    fn periodic_length_matches_ivp_and_small_slope_limit() {
        let m = quad(0.25);
        let lc = periodic_length(&m).unwrap();
        // from the peak with zero slope down to the tangential touch-down
        // (where u' returns to zero), doubled
        let beta = m.beta().unwrap();
        let mut rhs = |_x: f64, y: &[f64; 2]| [y[1], -m.rate(y[0])];
        let (mut y, mut x, h) = ([beta, 0.0], 0.0, 1e-4);
        loop {
            let next = rk4_step(&mut rhs, x, &y, h);
            if x > 0.0 && next[1] >= 0.0 {
                x += h * y[1] / (y[1] - next[1]);
                break;
            }
            y = next;
            x += h;
        }
        let oracle = 2.0 * x;
        assert!((lc - oracle).abs() < 1e-5, "{lc} vs {oracle}");
        let small = time_map(&m, 1e-7).unwrap().length;
        assert!((small - lc).abs() < 1e-3, "{small} vs {lc}");
        assert!(periodic_length(&quad(0.0)).is_err());
        assert!(periodic_length(&quad(0.4)).is_err());
    }

    #[test]
    fn l0_examples() {
        let mono = find_l0(&quad(0.0)).unwrap();
        assert!((mono.l0 - PI).abs() < 1e-3, "{:?}", mono);

        let m = quad(0.25);
        let crit = find_l0(&m).unwrap();
        assert!(crit.l0 >= poincare_bound(&m) - 1e-6);
        // brute-force grid oracle
        let gmax = (2.0 * m.integral()).sqrt();
        let brute = (1..10_000)
            .filter_map(|k| time_map(&m, gmax * k as f64 / 10_000.0).ok())
            .map(|s| s.length)
            .fold(f64::INFINITY, f64::min);
        assert!(crit.l0 <= brute * (1.0 + 1e-12));
        assert!(
            (crit.l0 - brute).abs() <= 1e-4 * brute,
            "{} vs {brute}",
            crit.l0
        );

        assert!(matches!(
            find_l0(&quad(0.4)),
            Err(Error::NoSolutionRegime { .. })
        ));
    }

    #[test]
    fn solve_bvp_counts() {
        let m = quad(0.25);
        let crit = find_l0(&m).unwrap();
        assert!(solve_bvp(&m, 0.95 * crit.l0, 101).unwrap().is_empty());
        let mono = solve_bvp(&quad(0.0), PI * (1.0 + 1e-6), 101).unwrap();
        assert_eq!(mono.len(), 1);
        assert!(mono[0].peak < 1e-2, "{}", mono[0].peak);
        assert!(solve_bvp(&quad(0.4), 10.0, 101).unwrap().is_empty());
    }

    #[test]
    fn fold_region_has_two_profiles() {
        let m = quad(0.25);
        let crit = find_l0(&m).unwrap();
        let lc = periodic_length(&m).unwrap();
        assert!(crit.gamma_min > 0.0 && crit.l0 < lc);
        let ps = solve_bvp(&m, 0.5 * (crit.l0 + lc), 101).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps[0].gamma < crit.gamma_min && crit.gamma_min < ps[1].gamma);
        assert!(ps[0].peak < ps[1].peak);
        // beyond L_c only the upper branch survives; the zero-slope profile adds a second
        let beyond = solve_bvp(&m, 2.0 * lc, 101).unwrap();
        assert_eq!(beyond.len(), 1);
        let periodic = periodic_profile(&m, 2, 101).unwrap();
        assert!((periodic.peak - beyond[0].peak).abs() > 1e-3);
        // on the fold itself a single tangential profile
        let tangent = solve_bvp(&m, crit.l0, 101).unwrap();
        assert_eq!(tangent.len(), 1);
        assert!(tangent[0].tangential);
    }

    #[test]
    fn profile_shape() {
        let m = quad(0.25);
        let crit = find_l0(&m).unwrap();
        let profiles = solve_bvp(&m, 1.3 * crit.l0, 201).unwrap();
        assert!(!profiles.is_empty());
        for p in &profiles {
            let n = p.us.len();
            assert_eq!(p.us[0], 0.0);
            assert!(p.us[n - 1].abs() < 1e-12);
            for i in 1..n - 1 {
                assert!(p.us[i] > 0.0);
                assert!((p.us[i] - p.us[n - 1 - i]).abs() < 1e-9);
            }
            let peak = p.us.iter().cloned().fold(0.0, f64::max);
            assert!((peak - p.peak).abs() < 1e-9);
            assert!(energy_residual(&m, p).unwrap() < 1e-3);
        }
    }

    #[test]
    fn energy_residual_sensitivity() {
        let m = quad(0.25);
        let crit = find_l0(&m).unwrap();
        let p = solve_bvp(&m, 1.2 * crit.l0, 401).unwrap().remove(0);
        let base = energy_residual(&m, &p).unwrap();
        let mut bad = p.clone();
        bad.us[200] += 0.01;
        assert!(energy_residual(&m, &bad).unwrap() > 10.0 * base);

        let zero = BvpProfile {
            xs: (0..5).map(|i| i as f64).collect(),
            us: alloc::vec![0.0; 5],
            gamma: 0.0,
            peak: 0.0,
            energy_const: 0.0,
            tangential: false,
        };
        assert_eq!(energy_residual(&m, &zero).unwrap(), 0.0);
    }

    #[test]
    fn periodic_profile_touches_zero() {
        let m = quad(0.25);
        let lc = periodic_length(&m).unwrap();
        let p = periodic_profile(&m, 2, 401).unwrap();
        assert!((p.length() - 2.0 * lc).abs() < 1e-9);
        assert!(p.us[200].abs() < 1e-9);
        assert!(energy_residual(&m, &p).unwrap() < 1e-3);
    }
}
