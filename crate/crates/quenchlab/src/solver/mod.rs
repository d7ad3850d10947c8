//! Monotone finite-difference discretization on uniform 1D/2D grids and the
//! minimal-solution selector for the regularized problem.

mod field;
mod grid;
mod linear;
mod minimal;
mod problem;
mod scheme;

pub use field::ScalarField;
pub use grid::{DomainShape, Grid, NodeClass};
pub use minimal::{
    continuation_sweep, solve_envelopes, solve_minimal, solve_minimal_with_envelopes, SolveResult,
    StageIterations, SweepResult,
};
pub use problem::{
    power_profile_coefficient, BoundaryDatum, EpsSchedule, MinEpsPolicy, ProblemSpec, SolverBudget,
};
pub use scheme::{discrete_hessian, residual, residual_sup, StencilMatrix};
