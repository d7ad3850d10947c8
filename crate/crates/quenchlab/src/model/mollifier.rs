use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Compactly supported bump on `[0, 1]` with unit mass, used to mollify the
/// characteristic function inside `B_ε`.
///
/// The standard choice is the polynomial `ρ(s) = 30 s² (1-s)²`, which is
/// symmetric about 1/2, vanishes with its first derivative at both endpoints,
/// and has the closed-form antiderivative `10 s³ - 15 s⁴ + 6 s⁵`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mollifier {
    kind: MollifierKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MollifierKind {
    /// `ρ(s) = 30 s²(1-s)²` on [0,1].
    QuarticBump,
}

impl Default for Mollifier {
    fn default() -> Self {
        Self::standard()
    }
}

impl Mollifier {
    /// The normalized quartic bump.
    pub fn standard() -> Self {
        Self { kind: MollifierKind::QuarticBump }
    }

    /// Density ρ(s); zero outside `[0, 1]`.
    pub fn density(&self, s: f64) -> f64 {
        match self.kind {
            MollifierKind::QuarticBump => {
                if (0.0..=1.0).contains(&s) {
                    let w = s * (1.0 - s);
                    30.0 * w * w
                } else {
                    0.0
                }
            }
        }
    }

    /// Cumulative mass `∫₀^s ρ`, clipped to the support (0 below, 1 above).
    pub fn mass(&self, s: f64) -> f64 {
        match self.kind {
            MollifierKind::QuarticBump => {
                if s <= 0.0 {
                    0.0
                } else if s >= 1.0 {
                    1.0
                } else {
                    let s3 = s * s * s;
                    s3 * (10.0 + s * (-15.0 + 6.0 * s))
                }
            }
        }
    }

    /// Sampled consistency checks: nonnegativity, endpoint vanishing, unit
    /// mass, and agreement of `density` with the derivative of `mass`.
    pub fn validate(&self) -> Result<()> {
        if self.density(0.0) != 0.0 || self.density(1.0) != 0.0 {
            return Err(Error::InvalidParameter(
                "mollifier density must vanish at the endpoints".into(),
            ));
        }
        if (self.mass(1.0) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mollifier mass is {} instead of 1",
                self.mass(1.0)
            )));
        }
        let m = 4096;
        for k in 0..=m {
            let s = k as f64 / m as f64;
            if self.density(s) < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "mollifier density negative at s={s}"
                )));
            }
        }
        let dh = 1e-6;
        for k in 1..m {
            let s = k as f64 / m as f64;
            let fd = (self.mass(s + dh) - self.mass(s - dh)) / (2.0 * dh);
            if (fd - self.density(s)).abs() > 1e-6 {
                return Err(Error::InvalidParameter(format!(
                    "mollifier mass is not an antiderivative of density at s={s}"
                )));
            }
        }
        Ok(())
    }
}
