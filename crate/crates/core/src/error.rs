use alloc::string::String;

/// Failures surfaced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid reaction model: {0}")]
    InvalidModel(String),
    #[error("no advancing limit wave: F(p_max) = {integral:e} is not positive")]
    NoAdvancingWave { integral: f64 },
    #[error("critical length undefined: sup f(p)/p = {k:e}")]
    UndefinedCriticalLength { k: f64 },
    #[error("no non-trivial elliptic solution exists: F(p_max) = {integral:e}")]
    NoSolutionRegime { integral: f64 },
    #[error("time map is singular at peak {s0}: f(s0) = {f_s0:e}")]
    SingularTimeMap { s0: f64, f_s0: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("time step {dt:e} exceeds the stability ceiling {ceiling:e}")]
    CflViolation { dt: f64, ceiling: f64 },
    #[error("numerical blow-up at t = {t} (cell {cell})")]
    NumericalBlowup { t: f64, cell: usize },
    #[error("support reached the domain boundary at t = {t}")]
    SupportAtBoundary { t: f64 },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("integration stalled at p = {p:e} (step {step:e})")]
    StiffFailure { p: f64, step: f64 },
    #[error("degenerate equilibrium at p_max: -f'(p_max) = {a:e}")]
    DegenerateEquilibrium { a: f64 },
    #[error("no speed bracket: {0}")]
    Bracket(String),
    #[error("shooting predicate is not monotone in c: {0}")]
    NonMonotonePredicate(String),
    #[error("no wave profile: trajectory hits q = 0 at p = {p_star:e}")]
    NoProfile { p_star: f64 },
    #[error("no bounded limit profile: F(p_max) = {integral:e} < 0")]
    NoBoundedSolution { integral: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
