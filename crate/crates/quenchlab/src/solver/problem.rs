use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{alpha_of, EllipticOperator, Mollifier, SingularityParams};

use super::field::ScalarField;
use super::grid::Grid;

/// Dirichlet datum as a rule on boundary nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryDatum {
    Constant { value: f64 },
    /// `c_*(γ) · ⟨X - point, e(angle)⟩₊^α` — the exact quenching profile of a
    /// (possibly tilted) half-space; `angle = 0` is the 1D profile `c_* (x-p)₊^α`.
    HalfPlanePower { gamma: f64, point: [f64; 2], angle: f64 },
}

impl BoundaryDatum {
    pub fn eval(&self, pos: [f64; 2]) -> f64 {
        match self {
            BoundaryDatum::Constant { value } => *value,
            BoundaryDatum::HalfPlanePower { gamma, point, angle } => {
                let alpha = alpha_of(*gamma);
                let c = power_profile_coefficient(*gamma);
                let e = [angle.cos(), angle.sin()];
                let s = (pos[0] - point[0]) * e[0] + (pos[1] - point[1]) * e[1];
                if s > 0.0 {
                    c * s.powf(alpha)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Leading coefficient `c_*` of the 1D power profile: `c_*^{2-γ} = (2-γ)²/2`.
pub fn power_profile_coefficient(gamma: f64) -> f64 {
    ((2.0 - gamma) * (2.0 - gamma) / 2.0).powf(1.0 / (2.0 - gamma))
}

/// Continuation schedule `ε_k = ε₀ · 2^{-k}`, `k = 0..=levels`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsSchedule {
    pub eps0: f64,
    pub levels: usize,
}

impl EpsSchedule {
    pub fn single(eps: f64) -> Self {
        Self { eps0: eps, levels: 0 }
    }

    pub fn stages(&self) -> Vec<f64> {
        (0..=self.levels).map(|k| self.eps0 * 0.5f64.powi(k as i32)).collect()
    }

    pub fn final_eps(&self) -> f64 {
        self.eps0 * 0.5f64.powi(self.levels as i32)
    }
}

/// Minimum-ε rule guarding the discrete resolution of the transition layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum MinEpsPolicy {
    /// `ε ≥ 4 h^{1/α}`: the transition band `{σ₀ε^α < u < (1+σ₀)ε^α}` spans
    /// several cells in solution units. Default.
    Conservative,
    /// `ε ≥ cells · h`: the band spans `~0.6 · cells` grid cells in distance
    /// units. Admits much smaller ε on fine grids; pair with an oracle check.
    Linear { cells: f64 },
}

impl Default for MinEpsPolicy {
    fn default() -> Self {
        MinEpsPolicy::Conservative
    }
}

impl MinEpsPolicy {
    pub fn floor(&self, h: f64, alpha: f64) -> f64 {
        match self {
            MinEpsPolicy::Conservative => 4.0 * h.powf(1.0 / alpha),
            MinEpsPolicy::Linear { cells } => cells * h,
        }
    }
}

/// Iteration budgets for the minimal-solution selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverBudget {
    /// Monotone pseudo-time steps per descent round.
    pub pseudo_time_steps: usize,
    /// Newton iterations per polish round.
    pub newton_iters: usize,
    /// Descent/polish round pairs before giving up.
    pub rounds: usize,
}

impl Default for SolverBudget {
    fn default() -> Self {
        Self { pseudo_time_steps: 300, newton_iters: 40, rounds: 4 }
    }
}

/// Full input of the regularized Dirichlet problem plus solver controls.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub params: SingularityParams,
    pub mollifier: Mollifier,
    pub operator: EllipticOperator,
    pub grid: Grid,
    pub datum: BoundaryDatum,
    /// Residual sup-norm tolerance.
    pub tol: f64,
    pub budget: SolverBudget,
    pub schedule: EpsSchedule,
    pub min_eps_policy: MinEpsPolicy,
}

impl ProblemSpec {
    pub fn new(
        params: SingularityParams,
        operator: EllipticOperator,
        grid: Grid,
        datum: BoundaryDatum,
        schedule: EpsSchedule,
    ) -> Result<Self> {
        Self::with_policy(params, operator, grid, datum, schedule, MinEpsPolicy::default())
    }

    pub fn with_policy(
        params: SingularityParams,
        operator: EllipticOperator,
        grid: Grid,
        datum: BoundaryDatum,
        schedule: EpsSchedule,
        min_eps_policy: MinEpsPolicy,
    ) -> Result<Self> {
        let spec = Self {
            params,
            mollifier: Mollifier::standard(),
            operator,
            grid,
            datum,
            tol: 1e-8,
            budget: SolverBudget::default(),
            schedule,
            min_eps_policy,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.mollifier.validate()?;
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.schedule.eps0 > 0.0) {
            return Err(Error::InvalidParameter("eps0 must be positive".into()));
        }
        let floor = self.min_eps_policy.floor(self.grid.h(), self.params.alpha());
        let eps_final = self.schedule.final_eps();
        if eps_final < floor * (1.0 - 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "final epsilon {eps_final:.6e} is below the resolution floor {floor:.6e}"
            )));
        }
        for &k in &self.grid.boundary_indices() {
            let (i, j) = self.grid.coords(k);
            let v = self.datum.eval(self.grid.position(i, j));
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "boundary datum must be nonnegative, got {v} at node {k}"
                )));
            }
        }
        Ok(())
    }

    /// Singularity parameters at a particular continuation stage.
    pub fn params_at(&self, eps: f64) -> Result<SingularityParams> {
        self.params.at_epsilon(eps)
    }

    /// Field holding the datum on boundary nodes and `fill` inside.
    pub fn datum_field(&self, fill: f64) -> ScalarField {
        let grid = self.grid.clone();
        let mut f = ScalarField::constant(grid, fill);
        let boundary = self.grid.boundary_indices();
        for &k in &boundary {
            let (i, j) = self.grid.coords(k);
            f.values_mut()[k] = self.datum.eval(self.grid.position(i, j));
        }
        f
    }
}
