//! Reaction nonlinearity `f(p)`, its primitive `F`, and the scalar constants
//! derived from them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::{bisect, golden_section_min, Polynomial};

const ROOT_REL_TOL: f64 = 1e-12;
const SAMPLES: usize = 10_000;

/// How the nonlinearity was specified.
#[derive(Debug, Clone, PartialEq)]
pub enum ReactionKind {
    /// `f(p) = (1 - p)(p - alpha)`, `alpha` in `[0, 1)`.
    BistableQuadratic { alpha: f64 },
    /// Coefficients of `f` in ascending powers.
    CustomPolynomial { coeffs: Vec<f64> },
    /// `f = 0`; `p_max` is only a pressure scale for the time step.
    Inert,
}

/// Sign class of `f` on `[0, p_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReactionClass {
    /// `f < 0` on `[0, alpha)`, `f > 0` on `(alpha, p_max)`.
    Bistable {
        alpha: f64,
    },
    /// `f(0) = 0`, `f > 0` on `(0, p_max)`.
    Monostable,
    Inert,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionModel {
    kind: ReactionKind,
    class: ReactionClass,
    f: Polynomial,
    df: Polynomial,
    primitive: Polynomial,
    p_max: f64,
    lipschitz_bound: f64,
    max_abs_f: f64,
    sup_f: f64,
}

/// `(1 - sqrt(alpha))^2`, the value of `sup f(p)/p` for the quadratic family.
pub fn quadratic_sup_ratio(alpha: f64) -> f64 {
    let r = 1.0 - alpha.sqrt();
    r * r
}

impl ReactionModel {
    pub fn bistable_quadratic(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidModel(format!(
                "alpha must lie in [0, 1), got {alpha}"
            )));
        }
        let f = Polynomial::new(vec![-alpha, 1.0 + alpha, -1.0]);
        let class = if alpha == 0.0 {
            ReactionClass::Monostable
        } else {
            ReactionClass::Bistable { alpha }
        };
        Ok(Self::assemble(
            ReactionKind::BistableQuadratic { alpha },
            class,
            f,
            1.0,
        ))
    }

    /// Polynomial `f` with coefficients in ascending powers. The sign pattern
    /// must be bistable or monostable with a largest positive root `p_max`
    /// beyond which `f < 0`.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("non-finite coefficient".into()));
        }
        let f = Polynomial::new(coeffs.clone());
        if f.is_zero() {
            return Err(Error::InvalidModel(
                "zero polynomial has no p_max; use ReactionModel::inert".into(),
            ));
        }
        let lead = *f.coeffs().last().unwrap();
        if f.degree() == 0 || lead > 0.0 {
            return Err(Error::InvalidModel(
                "f must become negative for large p (negative leading coefficient)".into(),
            ));
        }
        let roots = positive_roots(&f);
        let p_max = match roots.last() {
            Some(&r) => r,
            None => {
                return Err(Error::InvalidModel("f has no positive root".into()));
            }
        };
        let f0 = f.eval(0.0);
        let class = if f0 == 0.0 {
            ReactionClass::Monostable
        } else if f0 < 0.0 {
            let alpha = roots[0];
            ReactionClass::Bistable { alpha }
        } else {
            return Err(Error::InvalidModel(
                "f(0) > 0 is neither bistable nor monostable".into(),
            ));
        };
        let model = Self::assemble(ReactionKind::CustomPolynomial { coeffs }, class, f, p_max);
        model.check_sign_pattern()?;
        Ok(model)
    }

    /// `f = 0` with a pressure scale used for time-step selection.
    pub fn inert(p_scale: f64) -> Result<Self> {
        if !(p_scale > 0.0 && p_scale.is_finite()) {
            return Err(Error::InvalidModel(
                "pressure scale must be positive".into(),
            ));
        }
        Ok(Self::assemble(
            ReactionKind::Inert,
            ReactionClass::Inert,
            Polynomial::new(Vec::new()),
            p_scale,
        ))
    }

    fn assemble(kind: ReactionKind, class: ReactionClass, f: Polynomial, p_max: f64) -> Self {
        let df = f.derivative();
        let primitive = f.antiderivative();
        let mut lipschitz_bound = 0.0f64;
        let mut max_abs_f = 0.0f64;
        let mut sup_f = f64::NEG_INFINITY;
        for k in 0..=SAMPLES {
            let p = 2.0 * p_max * k as f64 / SAMPLES as f64;
            lipschitz_bound = lipschitz_bound.max(df.eval(p).abs());
            if p <= p_max {
                let v = f.eval(p);
                max_abs_f = max_abs_f.max(v.abs());
                sup_f = sup_f.max(v);
            }
        }
        // derivative is a polynomial, so its maximum can fall between samples
        lipschitz_bound *= 1.0 + 1e-6;
        Self {
            kind,
            class,
            f,
            df,
            primitive,
            p_max,
            lipschitz_bound,
            max_abs_f,
            sup_f,
        }
    }

    fn check_sign_pattern(&self) -> Result<()> {
        let tol = 1e-9 * self.p_max;
        for k in 1..=2 * SAMPLES {
            let p = 2.0 * self.p_max * k as f64 / (2 * SAMPLES) as f64;
            let v = self.f.eval(p);
            let ok = match self.class {
                ReactionClass::Bistable { alpha } => {
                    if p < alpha - tol {
                        v < 0.0
                    } else if p > alpha + tol && p < self.p_max - tol {
                        v > 0.0
                    } else if p > self.p_max + tol {
                        v < 0.0
                    } else {
                        true
                    }
                }
                ReactionClass::Monostable => {
                    if p < self.p_max - tol {
                        v > 0.0
                    } else if p > self.p_max + tol {
                        v < 0.0
                    } else {
                        true
                    }
                }
                ReactionClass::Inert => true,
            };
            if !ok {
                return Err(Error::InvalidModel(format!(
                    "sign pattern of f violated at p = {p} (f = {v:e})"
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &ReactionKind {
        &self.kind
    }

    pub fn class(&self) -> ReactionClass {
        self.class
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Bistable threshold, `0` for the monostable class.
    pub fn alpha(&self) -> f64 {
        match self.class {
            ReactionClass::Bistable { alpha } => alpha,
            _ => 0.0,
        }
    }

    /// Lipschitz constant of `f` on `[0, 2 p_max]`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    /// `max |f|` on `[0, p_max]`.
    pub fn max_abs_f(&self) -> f64 {
        self.max_abs_f
    }

    /// `sup f` on `[0, p_max]`.
    pub fn sup_f(&self) -> f64 {
        self.sup_f
    }

    pub fn polynomial_f(&self) -> &Polynomial {
        &self.f
    }

    pub fn polynomial_primitive(&self) -> &Polynomial {
        &self.primitive
    }

    /// `f(p)` without the domain check.
    #[inline]
    pub fn rate(&self, p: f64) -> f64 {
        self.f.eval(p)
    }

    /// `F(p)` without the domain check.
    #[inline]
    pub fn primitive(&self, p: f64) -> f64 {
        self.primitive.eval(p)
    }

    #[inline]
    pub fn rate_derivative(&self, p: f64) -> f64 {
        self.df.eval(p)
    }

    pub fn eval_f(&self, p: f64) -> Result<f64> {
        check_pressure(p)?;
        Ok(self.rate(p))
    }

    /// `F(p) = int_0^p f`.
    pub fn eval_primitive(&self, p: f64) -> Result<f64> {
        check_pressure(p)?;
        Ok(self.primitive(p))
    }

    /// `F(p_max)`, whose sign separates advancing from receding regimes.
    pub fn integral(&self) -> f64 {
        self.primitive(self.p_max)
    }

    /// `K = sup_{p > 0} f(p) / p`.
    pub fn sup_ratio_k(&self) -> f64 {
        match (&self.kind, self.class) {
            (ReactionKind::BistableQuadratic { alpha }, _) => quadratic_sup_ratio(*alpha),
            (_, ReactionClass::Inert) => 0.0,
            _ => {
                let ratio = |p: f64| self.f.eval(p) / p;
                let h = self.p_max / SAMPLES as f64;
                let mut best_k = 1;
                let mut best = f64::NEG_INFINITY;
                for k in 1..=SAMPLES {
                    let v = ratio(h * k as f64);
                    if v > best {
                        best = v;
                        best_k = k;
                    }
                }
                let lo = h * (best_k as f64 - 1.0);
                let hi = (h * (best_k as f64 + 1.0)).min(self.p_max);
                let (_, neg) = golden_section_min(
                    |p| if p <= 0.0 { f64::INFINITY } else { -ratio(p) },
                    lo,
                    hi,
                    1e-12 * self.p_max,
                );
                let mut k = best.max(-neg);
                if self.class == ReactionClass::Monostable {
                    // f(p)/p -> f'(0) as p -> 0+
                    k = k.max(self.df.eval(0.0));
                }
                k.max(0.0)
            }
        }
    }

    /// `sqrt(2 F(p_max))`, the speed of the limiting sharp-interface wave.
    pub fn limit_speed(&self) -> Result<f64> {
        let integral = self.integral();
        if integral <= 0.0 {
            return Err(Error::NoAdvancingWave { integral });
        }
        Ok((2.0 * integral).sqrt())
    }

    pub fn critical_lengths(&self) -> Result<CriticalLengths> {
        let k = self.sup_ratio_k();
        if k <= 0.0 {
            return Err(Error::UndefinedCriticalLength { k });
        }
        Ok(CriticalLengths {
            l_star: PI / k.sqrt(),
            beta: self.beta(),
        })
    }

    /// Smallest positive root of `F` (bistable class with `F(p_max) > 0`).
    pub fn beta(&self) -> Option<f64> {
        let alpha = match self.class {
            ReactionClass::Bistable { alpha } => alpha,
            _ => return None,
        };
        if self.integral() <= 0.0 {
            return None;
        }
        bisect(|p| self.primitive(p), alpha, self.p_max, ROOT_REL_TOL)
    }

    /// Lower end of the interval adjacent to `p_max` on which `f > 0`.
    pub(crate) fn positive_interval_start(&self) -> f64 {
        self.alpha()
    }
}

/// `L* = pi / sqrt(K)` and the first positive zero `beta` of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLengths {
    pub l_star: f64,
    pub beta: Option<f64>,
}

fn check_pressure(p: f64) -> Result<()> {
    if p >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "pressure must be non-negative, got {p}"
        )))
    }
}

/// Positive simple roots of `f`, ascending, located by sampling up to the
/// Cauchy bound and refined by bisection.
fn positive_roots(f: &Polynomial) -> Vec<f64> {
    let c = f.coeffs();
    let lead = c[c.len() - 1];
    let bound = 1.0
        + c[..c.len() - 1]
            .iter()
            .map(|a| (a / lead).abs())
            .fold(0.0, f64::max);
    let n = 20 * SAMPLES;
    let mut roots = Vec::new();
    let mut prev_p = 0.0;
    let mut prev_v = f.eval(0.0);
    for k in 1..=n {
        let p = bound * k as f64 / n as f64;
        let v = f.eval(p);
        if v == 0.0 {
            roots.push(p);
        } else if prev_v != 0.0 && v.signum() != prev_v.signum() {
            if let Some(r) = bisect(|x| f.eval(x), prev_p, p, ROOT_REL_TOL) {
                roots.push(r);
            }
        }
        prev_p = p;
        prev_v = v;
    }
    roots
}
