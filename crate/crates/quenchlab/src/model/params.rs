use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the singular absorption term and its ε-regularization.
///
/// The reaction is `γ t^{γ-1}` with `0 < γ < 1`; the regularization switches
/// on over the band `[σ₀ ε^α, (1+σ₀) ε^α]`, where `α = 1 + γ/(2-γ)` is the
/// sharp growth exponent and `0 < σ₀ < 1/2` is a technical offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityParams {
    gamma: f64,
    sigma0: f64,
    epsilon: f64,
}

impl SingularityParams {
    pub fn new(gamma: f64, sigma0: f64, epsilon: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0,1), got {gamma}"
            )));
        }
        if !(sigma0 > 0.0 && sigma0 < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must lie in (0,1/2), got {sigma0}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self { gamma, sigma0, epsilon })
    }

    /// Default technical offset σ₀ = 1/4.
    pub fn with_default_sigma0(gamma: f64, epsilon: f64) -> Result<Self> {
        Self::new(gamma, 0.25, epsilon)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Same parameters at a different regularization scale.
    pub fn at_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.gamma, self.sigma0, epsilon)
    }

    /// Sharp growth exponent `α = 1 + γ/(2-γ) = 2/(2-γ)`, always in (1, 2).
    pub fn alpha(&self) -> f64 {
        2.0 / (2.0 - self.gamma)
    }

    /// `ε^α`, the solution-scale of the regularization band.
    pub fn eps_alpha(&self) -> f64 {
        self.epsilon.powf(self.alpha())
    }
}

/// `α(γ)` without constructing params; callers that only know γ.
pub fn alpha_of(gamma: f64) -> f64 {
    2.0 / (2.0 - gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_direct_values() {
        let p = SingularityParams::new(0.5, 0.25, 1.0).unwrap();
        assert!((p.alpha() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_limits() {
        // gamma -> 0+ gives alpha -> 1, gamma -> 1- gives alpha -> 2
        let lo = SingularityParams::new(1e-12, 0.25, 1.0).unwrap();
        assert!((lo.alpha() - 1.0).abs() < 1e-12);
        let hi = SingularityParams::new(1.0 - 1e-12, 0.25, 1.0).unwrap();
        assert!((hi.alpha() - 2.0).abs() < 1e-11);
    }

    #[test]
    fn alpha_stays_in_open_interval() {
        for k in 1..100 {
            let gamma = k as f64 / 100.0;
            let p = SingularityParams::new(gamma, 0.25, 0.1).unwrap();
            assert!(p.alpha() > 1.0 && p.alpha() < 2.0);
        }
    }

    #[test]
    fn exponent_identity_alpha_gamma() {
        // alpha*(gamma-1) = alpha - 2, the identity behind the beta scaling law
        for k in 1..200 {
            let gamma = k as f64 / 200.0;
            let a = alpha_of(gamma);
            assert!(
                (a * (gamma - 1.0) - (a - 2.0)).abs() < 1e-15,
                "identity failed at gamma={gamma}"
            );
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SingularityParams::new(0.0, 0.25, 1.0).is_err());
        assert!(SingularityParams::new(1.0, 0.25, 1.0).is_err());
        assert!(SingularityParams::new(0.5, 0.5, 1.0).is_err());
        assert!(SingularityParams::new(0.5, 0.25, 0.0).is_err());
        assert!(SingularityParams::new(0.5, 0.25, f64::NAN).is_err());
    }
}
