//! Numerical laboratory for the singularly perturbed free boundary problem
//!
//! ```text
//!     F(D²u) = β_ε(u)   in Ω,        u = f on ∂Ω,
//! ```
//!
//! where `F` is a uniformly elliptic operator on symmetric matrices and
//! `β_ε(t) = γ t^{γ-1} B_ε(t)` is a smooth regularization of the singular
//! absorption term `γ u^{γ-1} χ_{u>0}`, `0 < γ < 1`.
//!
//! The crate provides:
//!
//! * [`model`] — the scalar ingredients: singularity parameters, the mollified
//!   step `B_ε`, the reaction `β_ε`, and a catalogue of elliptic operators
//!   (trace, Pucci extremal, Hessian family) with ellipticity and
//!   asymptotic-concavity data.
//! * [`solver`] — monotone finite differences on uniform 1D/2D grids, the
//!   sub/supersolution envelope pair, minimal-solution selection by monotone
//!   pseudo-time descent plus Newton polish, and ε-continuation sweeps.
//! * [`radial`] — independent reference profiles: the closed-form 1D power
//!   solution and radial shooting for rotationally invariant operators.
//! * [`barrier`] — the explicit piecewise radial supersolution, amplitude
//!   tuning, and pointwise certification of the supersolution inequality.
//! * [`geometry`] — free boundary extraction and the quantitative estimators:
//!   growth exponents, density ratios, Harnack ratios, neighborhood volumes,
//!   box-counting surface measure, Hausdorff distances, spherical means.
//! * [`harness`] — declarative experiment configs, orchestration with cached
//!   stages, run manifests, and the `quenchlab` command line interface.

pub mod barrier;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod model;
pub mod radial;
pub mod solver;

pub use error::Error;
pub use model::{EllipticOperator, Mollifier, OperatorKind, SingularityParams};
pub use solver::{BoundaryDatum, Grid, ProblemSpec, ScalarField, SolveResult};
