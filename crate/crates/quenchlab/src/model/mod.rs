//! Scalar ingredients of the regularized problem: the singularity parameters
//! (γ, σ₀, ε), the mollified step `B_ε`, the reaction `β_ε`, and the
//! catalogue of uniformly elliptic operators.

mod mollifier;
mod operator;
mod params;
mod reaction;

pub use mollifier::Mollifier;
pub use operator::{
    concavity_certificate_check, eval_operator, operator_derivative, pucci_minus, pucci_plus,
    recession, sym_eigenvalues, ConcavityCertificate, ConcavityReport, EllipticOperator,
    OperatorKind, RecessionOutcome, SymMat,
};
pub use params::{alpha_of, SingularityParams};
pub use reaction::{beta_eps, beta_eps_prime, big_b_eps, zeta_sup_beta};
