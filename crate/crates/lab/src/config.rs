//! JSON configuration: one document per invocation, unknown keys rejected,
//! every numeric field checked against the solver preconditions.

use std::fs;
use std::path::{Path, PathBuf};

use pmelab_core::ReactionModel;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: at `{field}`: {message}", path.display())]
    Malformed {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Dotted path of the offending field, when known.
    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Read { .. } => None,
            Self::Malformed { field, .. } | Self::Invalid { field, .. } => Some(field),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReactionSpec {
    BistableQuadratic { alpha: f64 },
    /// Coefficients of `f` in ascending powers.
    Polynomial { coeffs: Vec<f64> },
}

impl ReactionSpec {
    pub fn build(&self) -> pmelab_core::Result<ReactionModel> {
        match self {
            Self::BistableQuadratic { alpha } => ReactionModel::bistable_quadratic(*alpha),
            Self::Polynomial { coeffs } => ReactionModel::polynomial(coeffs.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -10.0,
            x_max: 30.0,
            n_cells: 800,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub m: f64,
    pub cfl: f64,
    pub t_end: f64,
    /// Spacing of the snapshot times `dt, 2 dt, ...` up to `t_end`.
    pub snapshot_every: f64,
    pub support_tol: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            m: 32.0,
            cfl: 0.4,
            t_end: 10.0,
            snapshot_every: 1.0,
            support_tol: 1e-8,
        }
    }
}

impl SolverSpec {
    pub fn snapshot_times(&self) -> Vec<f64> {
        snapshot_grid(self.snapshot_every, self.t_end)
    }
}

/// `dt, 2 dt, ...` up to and including `t_end` (within round-off).
pub fn snapshot_grid(dt: f64, t_end: f64) -> Vec<f64> {
    if !(dt > 0.0) {
        return Vec::new();
    }
    let count = (t_end / dt + 1e-9).floor() as usize;
    (1..=count).map(|k| (k as f64 * dt).min(t_end)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    /// `p = pressure` on `(a, b)`, zero elsewhere; `pressure` defaults to
    /// `p_max`.
    Step {
        a: f64,
        b: f64,
        #[serde(default)]
        pressure: Option<f64>,
    },
    /// A single-bump solution of `-u'' = f(u)` on `(a, a + length)`;
    /// `branch` indexes the solutions by increasing slope.
    BvpProfile {
        a: f64,
        length: f64,
        #[serde(default)]
        branch: usize,
    },
}

impl Default for InitialSpec {
    fn default() -> Self {
        Self::Step {
            a: 0.0,
            b: 10.0,
            pressure: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BvpSpec {
    pub length: f64,
    pub n: usize,
}

impl Default for BvpSpec {
    fn default() -> Self {
        Self {
            length: 10.0,
            n: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeMapSpec {
    pub samples: usize,
}

impl Default for TimeMapSpec {
    fn default() -> Self {
        Self { samples: 400 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveSpec {
    pub m: f64,
    /// Speed for `tw-shoot`; `tw-speed` ignores it.
    pub c: f64,
    /// Start offset below `p_max`, relative to `p_max`.
    pub eps: f64,
    pub x_extent: f64,
    pub ell: f64,
}

impl Default for WaveSpec {
    fn default() -> Self {
        Self {
            m: 32.0,
            c: 0.3,
            eps: 1e-6,
            x_extent: 40.0,
            ell: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub m_list: Vec<f64>,
    pub t_end: f64,
    /// Initial pressure `p_max` on `(block[0], block[1])`; the grid comes
    /// from the `grid` section.
    pub block: (f64, f64),
    /// Density level tracked for the front speed.
    pub level: f64,
    pub snapshot_every: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            m_list: vec![8.0, 16.0, 32.0, 64.0, 128.0],
            t_end: 20.0,
            block: (-8.0, 8.0),
            level: 0.5,
            snapshot_every: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdSpec {
    pub m: f64,
    /// Interval lengths as multiples of the elliptic `L0`.
    pub l_factors: Vec<f64>,
    pub dx: f64,
    /// Horizon `T = horizon_factor * L / sqrt(2 F(p_max))`.
    pub horizon_factor: f64,
    pub bisect_steps: usize,
}

impl Default for ThresholdSpec {
    fn default() -> Self {
        Self {
            m: 128.0,
            l_factors: vec![0.8, 1.5],
            dx: 0.15,
            horizon_factor: 2.0,
            bisect_steps: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtinctionSpec {
    pub m_list: Vec<f64>,
    /// Interval length as a multiple of `pi / sqrt(K)`.
    pub length_factor: f64,
    pub t_end: f64,
    pub dx: f64,
    pub snapshot_every: f64,
}

impl Default for ExtinctionSpec {
    fn default() -> Self {
        Self {
            m_list: vec![16.0, 128.0],
            length_factor: 0.5,
            t_end: 5.0,
            dx: 0.02,
            snapshot_every: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RecedingSpec {
    pub m_list: Vec<f64>,
}

impl Default for RecedingSpec {
    fn default() -> Self {
        Self {
            m_list: vec![32.0, 64.0, 128.0, 256.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub reaction: ReactionSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default)]
    pub bvp: BvpSpec,
    #[serde(default)]
    pub timemap: TimeMapSpec,
    #[serde(default)]
    pub waves: WaveSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub threshold: ThresholdSpec,
    #[serde(default)]
    pub extinction: ExtinctionSpec,
    #[serde(default)]
    pub receding: RecedingSpec,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    /// Runs are always deterministic; the key exists so that configs can
    /// state it.
    #[serde(default = "always")]
    pub deterministic: bool,
}

fn default_output_dir() -> String {
    "out".to_string()
}

fn always() -> bool {
    true
}

pub fn parse_config(path: &Path) -> Result<Config, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text).map_err(|e| match e {
        ConfigError::Malformed { field, message, .. } => ConfigError::Malformed {
            path: path.to_path_buf(),
            field,
            message,
        },
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<Config, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => String::new(),
            p => p,
        };
        let inner = e.into_inner();
        let mut message = inner.to_string();
        if let Some(hint) = suggestion(&message) {
            message.push_str(&format!("; did you mean `{hint}`?"));
        }
        ConfigError::Malformed {
            path: PathBuf::new(),
            field,
            message,
        }
    })?;
    config.validate()?;
    Ok(config)
}

/// Closest expected key for serde's "unknown field" message.
fn suggestion(message: &str) -> Option<String> {
    let rest = message.strip_prefix("unknown field `")?;
    let (unknown, rest) = rest.split_once('`')?;
    let expected = rest.split_once("expected")?.1;
    expected
        .split('`')
        .skip(1)
        .step_by(2)
        .map(|cand| (strsim::levenshtein(unknown, cand), cand))
        .filter(|(d, cand)| *d <= 2.max(cand.len() / 3))
        .min()
        .map(|(_, c)| c.to_string())
}

fn check(ok: bool, field: &str, message: impl Into<String>) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, message))
    }
}

fn check_m_list(list: &[f64], field: &str) -> Result<(), ConfigError> {
    check(!list.is_empty(), field, "must not be empty")?;
    check(
        list.iter().all(|&m| m > 1.0 && m.is_finite()),
        field,
        "every exponent must be finite and > 1",
    )?;
    check(
        list.windows(2).all(|w| w[0] < w[1]),
        field,
        "must be strictly ascending",
    )
}

impl Config {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match &self.reaction {
            ReactionSpec::BistableQuadratic { alpha } => check(
                (0.0..1.0).contains(alpha),
                "reaction.alpha",
                format!("must lie in [0, 1), got {alpha}"),
            )?,
            ReactionSpec::Polynomial { coeffs } => {
                check(
                    coeffs.iter().all(|c| c.is_finite()),
                    "reaction.coeffs",
                    "coefficients must be finite",
                )?;
                if let Err(e) = self.reaction.build() {
                    return Err(ConfigError::invalid("reaction.coeffs", e.to_string()));
                }
            }
        }

        let g = &self.grid;
        check(
            g.x_min.is_finite() && g.x_max.is_finite() && g.x_min < g.x_max,
            "grid.x_max",
            "must exceed grid.x_min",
        )?;
        check(g.n_cells >= 8, "grid.n_cells", "must be at least 8")?;

        let s = &self.solver;
        check(s.m > 1.0 && s.m.is_finite(), "solver.m", "must be finite and > 1")?;
        check(
            s.cfl > 0.0 && s.cfl <= 0.5,
            "solver.cfl",
            format!("must lie in (0, 0.5], got {}", s.cfl),
        )?;
        check(
            s.t_end >= 0.0 && s.t_end.is_finite(),
            "solver.t_end",
            "must be finite and non-negative",
        )?;
        check(s.snapshot_every > 0.0, "solver.snapshot_every", "must be positive")?;
        check(s.support_tol >= 0.0, "solver.support_tol", "must be non-negative")?;

        match &self.initial {
            InitialSpec::Step { a, b, pressure } => {
                check(a < b, "initial.b", "must exceed initial.a")?;
                if let Some(p) = pressure {
                    check(*p >= 0.0, "initial.pressure", "must be non-negative")?;
                }
            }
            InitialSpec::BvpProfile { length, .. } => {
                check(*length > 0.0, "initial.length", "must be positive")?
            }
        }

        check(self.bvp.length > 0.0, "bvp.length", "must be positive")?;
        check(self.bvp.n >= 3, "bvp.n", "must be at least 3")?;
        check(self.timemap.samples >= 2, "timemap.samples", "must be at least 2")?;

        let w = &self.waves;
        check(w.m > 1.0 && w.m.is_finite(), "waves.m", "must be finite and > 1")?;
        check(w.c.is_finite(), "waves.c", "must be finite")?;
        check(w.eps > 0.0 && w.eps < 1.0, "waves.eps", "must lie in (0, 1)")?;
        check(w.x_extent > 0.0, "waves.x_extent", "must be positive")?;
        check((0.0..1.0).contains(&w.ell), "waves.ell", "must lie in [0, 1)")?;

        let sw = &self.sweep;
        check_m_list(&sw.m_list, "sweep.m_list")?;
        check(sw.t_end > 0.0, "sweep.t_end", "must be positive")?;
        check(
            g.x_min < sw.block.0 && sw.block.0 < sw.block.1 && sw.block.1 < g.x_max,
            "sweep.block",
            "must be an ascending pair inside the grid",
        )?;
        check(sw.level > 0.0 && sw.level < 1.0, "sweep.level", "must lie in (0, 1)")?;
        check(sw.snapshot_every > 0.0, "sweep.snapshot_every", "must be positive")?;

        let th = &self.threshold;
        check(th.m > 1.0, "threshold.m", "must be > 1")?;
        check(!th.l_factors.is_empty(), "threshold.l_factors", "must not be empty")?;
        check(
            th.l_factors.iter().all(|&l| l > 0.0),
            "threshold.l_factors",
            "must be positive",
        )?;
        check(th.dx > 0.0, "threshold.dx", "must be positive")?;
        check(th.horizon_factor > 0.0, "threshold.horizon_factor", "must be positive")?;

        let ex = &self.extinction;
        check_m_list(&ex.m_list, "extinction.m_list")?;
        check(
            ex.length_factor > 0.0 && ex.length_factor < 0.9,
            "extinction.length_factor",
            "must lie in (0, 0.9)",
        )?;
        check(ex.t_end > 0.0, "extinction.t_end", "must be positive")?;
        check(ex.dx > 0.0, "extinction.dx", "must be positive")?;
        check(ex.snapshot_every > 0.0, "extinction.snapshot_every", "must be positive")?;

        check_m_list(&self.receding.m_list, "receding.m_list")?;
        check(
            self.receding.m_list.len() >= 4,
            "receding.m_list",
            "needs at least 4 exponents",
        )?;

        check(self.deterministic, "deterministic", "runs are always deterministic")?;
        check(!self.output_dir.is_empty(), "output_dir", "must not be empty")?;
        Ok(())
    }

    /// The configuration with every default filled in, as JSON.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"reaction": {"kind": "bistable_quadratic", "alpha": 0.25}}"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.solver.cfl, 0.4);
        assert_eq!(c.solver.support_tol, 1e-8);
        assert_eq!(c.output_dir, "out");
        let echo = c.echo();
        assert_eq!(echo["solver"]["cfl"], 0.4);
        assert_eq!(echo["grid"]["n_cells"], 800);
    }

    #[test]
    fn alpha_out_of_range_names_field() {
        let err = parse_config_str(r#"{"reaction": {"kind": "bistable_quadratic", "alpha": 1.5}}"#)
            .unwrap_err();
        assert_eq!(err.field(), Some("reaction.alpha"));
    }

    #[test]
    fn unknown_key_gets_suggestion() {
        let err = parse_config_str(
            r#"{"reaction": {"kind": "bistable_quadratic", "alpha": 0.25},
                "solver": {"cflx": 0.3}}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cflx"), "{msg}");
        assert!(msg.contains("did you mean `cfl`"), "{msg}");
        assert_eq!(err.field(), Some("solver.cflx"));
    }

    #[test]
    fn unknown_reaction_key_rejected() {
        let err = parse_config_str(
            r#"{"reaction": {"kind": "bistable_quadratic", "alpha": 0.25, "alpah": 1}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::Malformed { .. }), "{err}");
    }

    #[test]
    fn type_errors_carry_path() {
        let err = parse_config_str(
            r#"{"reaction": {"kind": "bistable_quadratic", "alpha": 0.25},
                "grid": {"n_cells": "many"}}"#,
        )
        .unwrap_err();
        assert_eq!(err.field(), Some("grid.n_cells"));
    }

    #[test]
    fn snapshot_grid_includes_end() {
        assert_eq!(snapshot_grid(0.5, 2.0), vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(snapshot_grid(0.1, 0.3).len(), 3);
        assert!(snapshot_grid(1.0, 0.0).is_empty());
    }
}
