//! Declarative experiment configuration: a flat TOML document with a typed
//! schema, validated before any solve. Defaults are documented in the README
//! defaults table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EllipticOperator, SingularityParams};
use crate::solver::{
    BoundaryDatum, EpsSchedule, Grid, MinEpsPolicy, ProblemSpec, SolverBudget,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    #[serde(default)]
    pub estimate: EstimateConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub gamma: f64,
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    /// One of: trace, pucci-plus, pucci-minus, hessian-iota.
    pub operator: String,
    #[serde(default = "default_one")]
    pub lambda: f64,
    #[serde(default = "default_one")]
    pub big_lambda: f64,
    #[serde(default = "default_iota")]
    pub iota: u32,
    /// 1 or 2.
    pub dim: usize,
    /// Points per axis, odd, >= 33.
    pub nodes: usize,
    /// One of: interval, square, disk.
    #[serde(default = "default_domain")]
    pub domain: String,
    #[serde(default)]
    pub origin: [f64; 2],
    /// Side length of the domain.
    #[serde(default = "default_one")]
    pub length: f64,
    pub datum: DatumConfig,
    pub eps0: f64,
    /// Continuation levels: the schedule is eps0 * 2^{-k}, k = 0..=levels.
    #[serde(default)]
    pub levels: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Optional override of the conservative resolution floor 4 h^{1/alpha}:
    /// when set, requires eps >= cells * h instead. Pair with an oracle check.
    #[serde(default)]
    pub relax_floor_cells: Option<f64>,
    #[serde(default = "default_pt_steps")]
    pub pseudo_time_steps: usize,
}

fn default_sigma0() -> f64 {
    0.25
}
fn default_one() -> f64 {
    1.0
}
fn default_iota() -> u32 {
    3
}
fn default_domain() -> String {
    "interval".into()
}
fn default_tol() -> f64 {
    1e-8
}
fn default_pt_steps() -> usize {
    300
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DatumConfig {
    Constant { value: f64 },
    HalfPlanePower { point: [f64; 2], angle: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    /// Estimators to run; empty means all.
    #[serde(default)]
    pub enabled: Vec<String>,
    /// Threshold multiplier: the free boundary is `{u > C1 eps^alpha}`.
    #[serde(default = "default_c1")]
    pub threshold_c1: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Extra random FB centers besides the one nearest the domain center.
    #[serde(default = "default_extra_points")]
    pub extra_fb_points: usize,
}

fn default_c1() -> f64 {
    2.0
}
fn default_seed() -> u64 {
    7
}
fn default_extra_points() -> usize {
    8
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            enabled: Vec::new(),
            threshold_c1: default_c1(),
            seed: default_seed(),
            extra_fb_points: default_extra_points(),
        }
    }
}

pub const ALL_ESTIMATORS: &[&str] = &[
    "growth",
    "gradient-bound",
    "density",
    "l1-harnack",
    "tangential-harnack",
    "neighborhood-volume",
    "boxcount",
    "spherical-mean",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Canonical serialization used for the config hash.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.operator()?;
        for name in &self.estimate.enabled {
            if !ALL_ESTIMATORS.contains(&name.as_str()) {
                return Err(Error::Config(format!(
                    "unknown estimator '{name}'; valid: {ALL_ESTIMATORS:?}"
                )));
            }
        }
        if !(self.estimate.threshold_c1 > 1.0) {
            return Err(Error::Config(format!(
                "threshold_c1 must exceed 1, got {}",
                self.estimate.threshold_c1
            )));
        }
        self.problem_spec()?;
        Ok(())
    }

    pub fn operator(&self) -> Result<EllipticOperator> {
        let p = &self.problem;
        match p.operator.as_str() {
            "trace" => Ok(EllipticOperator::trace()),
            "pucci-plus" | "pucci+" => EllipticOperator::pucci_plus(p.lambda, p.big_lambda),
            "pucci-minus" | "pucci-" => EllipticOperator::pucci_minus(p.lambda, p.big_lambda),
            "hessian-iota" => EllipticOperator::hessian_iota(p.iota),
            other => Err(Error::Config(format!(
                "unknown operator '{other}'; valid: trace, pucci+, pucci-, hessian-iota"
            ))),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        let p = &self.problem;
        let h = p.length / (p.nodes - 1) as f64;
        match (p.dim, p.domain.as_str()) {
            (1, "interval") => Grid::interval(p.nodes, p.origin[0], h),
            (2, "square") => Grid::square(p.nodes, p.origin, h),
            (2, "disk") => Grid::disk(p.nodes, p.origin, h),
            (d, s) => Err(Error::Config(format!("domain '{s}' invalid for dimension {d}"))),
        }
    }

    pub fn datum(&self) -> BoundaryDatum {
        match &self.problem.datum {
            DatumConfig::Constant { value } => BoundaryDatum::Constant { value: *value },
            DatumConfig::HalfPlanePower { point, angle } => BoundaryDatum::HalfPlanePower {
                gamma: self.problem.gamma,
                point: *point,
                angle: *angle,
            },
        }
    }

    /// Builds and validates the full problem spec.
    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let p = &self.problem;
        let params = SingularityParams::new(p.gamma, p.sigma0, p.eps0)?;
        let policy = match p.relax_floor_cells {
            None => MinEpsPolicy::Conservative,
            Some(cells) => {
                if !(cells >= 2.0) {
                    return Err(Error::Config(format!(
                        "relax_floor_cells must be >= 2, got {cells}"
                    )));
                }
                MinEpsPolicy::Linear { cells }
            }
        };
        let mut spec = ProblemSpec::with_policy(
            params,
            self.operator()?,
            self.grid()?,
            self.datum(),
            EpsSchedule { eps0: p.eps0, levels: p.levels },
            policy,
        )?;
        spec.tol = p.tol;
        spec.budget = SolverBudget { pseudo_time_steps: p.pseudo_time_steps, ..Default::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn enabled_estimators(&self) -> Vec<&str> {
        if self.estimate.enabled.is_empty() {
            ALL_ESTIMATORS.to_vec()
        } else {
            self.estimate.enabled.iter().map(|s| s.as_str()).collect()
        }
    }
}
