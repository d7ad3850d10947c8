//! Independent reference profiles for validation: the closed-form 1D power
//! solution of `u'' = γ u^{γ-1}` and radial shooting for rotationally
//! invariant operators, integrated outward from one-term asymptotic data
//! `u ≈ c r^α` (the free boundary condition `u = |∇u| = 0` is degenerate and
//! cannot seed an integrator directly).

use crate::error::{Error, Result};
use crate::model::{alpha_of, EllipticOperator, OperatorKind};
use crate::solver::power_profile_coefficient;

/// Sampled radial reference solution of `F(D²u) = γ u^{γ-1}` with
/// `D²u = diag(u'', u'/r, …, u'/r)`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub gamma: f64,
    pub operator: OperatorKind,
    pub dimension: usize,
    pub alpha: f64,
    /// Leading coefficient of the asymptotic power law at the origin.
    pub c_star: f64,
    /// Rows `(r, u, u')` on a geometric radius grid.
    pub samples: Vec<(f64, f64, f64)>,
}

impl RadialProfile {
    /// Least-squares slope of `log u` against `log r`.
    pub fn loglog_slope(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|(r, u, _)| *r > 0.0 && *u > 0.0)
            .map(|(r, u, _)| (r.ln(), u.ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }
}

/// Closed-form 1D profile: `u = c_* x^α` with `c_*^{2-γ} = (2-γ)²/2`, which
/// satisfies `u'' = γ u^{γ-1}` identically for x > 0.
pub fn exact_power_profile(gamma: f64, r_max: f64, n_samples: usize) -> Result<RadialProfile> {
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must be in (0,1), got {gamma}")));
    }
    let alpha = alpha_of(gamma);
    let c = power_profile_coefficient(gamma);
    let samples = geometric_radii(1e-6 * r_max, r_max, n_samples)
        .into_iter()
        .map(|r| (r, c * r.powf(alpha), c * alpha * r.powf(alpha - 1.0)))
        .collect();
    Ok(RadialProfile {
        gamma,
        operator: OperatorKind::Trace,
        dimension: 1,
        alpha,
        c_star: c,
        samples,
    })
}

fn geometric_radii(r0: f64, r1: f64, n: usize) -> Vec<f64> {
    let q = (r1 / r0).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| r0 * q.powi(k as i32)).collect()
}

/// Solves `F(diag(u'', u'/r,…)) = γ u^{γ-1}` for `u''`, resolving Pucci sign
/// branches pointwise.
fn radial_rhs(op: &EllipticOperator, gamma: f64, dim: usize, r: f64, u: f64, du: f64) -> f64 {
    let reaction = gamma * u.max(1e-300).powf(gamma - 1.0);
    let tangential = (dim - 1) as f64 * du / r;
    match op.kind {
        OperatorKind::Trace => reaction - tangential,
        OperatorKind::PucciPlus => {
            let tang = if du >= 0.0 {
                op.big_lambda() * tangential
            } else {
                op.lambda() * tangential
            };
            let rem = reaction - tang;
            if rem >= 0.0 {
                rem / op.big_lambda()
            } else {
                rem / op.lambda()
            }
        }
        OperatorKind::PucciMinus => {
            let tang = if du >= 0.0 {
                op.lambda() * tangential
            } else {
                op.big_lambda() * tangential
            };
            let rem = reaction - tang;
            if rem >= 0.0 {
                rem / op.lambda()
            } else {
                rem / op.big_lambda()
            }
        }
        OperatorKind::HessianIota { .. } => unreachable!("rejected before integration"),
    }
}

/// Leading coefficient for `u = c r^α`: all radial Hessian eigenvalues are
/// positive, so `F` acts with factor 1 (trace), Λ (Pucci+) or λ (Pucci-),
/// and the balance reads `c^{2-γ} K = γ` with `K ∝ α(α-1) + (N-1)α`.
fn leading_coefficient(op: &EllipticOperator, gamma: f64, dim: usize) -> f64 {
    let alpha = alpha_of(gamma);
    let k_trace = alpha * (alpha - 1.0) + (dim - 1) as f64 * alpha;
    let k = match op.kind {
        OperatorKind::Trace => k_trace,
        OperatorKind::PucciPlus => op.big_lambda() * k_trace,
        OperatorKind::PucciMinus => op.lambda() * k_trace,
        OperatorKind::HessianIota { .. } => k_trace,
    };
    (gamma / k).powf(1.0 / (2.0 - gamma))
}

/// Integrates the radial ODE outward from `r₀ = 10⁻⁶ r_max` with asymptotic
/// initial data, using adaptive Dormand–Prince 5(4) at relative tolerance
/// 1e-10. Only rotationally invariant operators are accepted.
pub fn radial_shoot(
    gamma: f64,
    op: &EllipticOperator,
    dim: usize,
    r_max: f64,
    n_samples: usize,
) -> Result<RadialProfile> {
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must be in (0,1), got {gamma}")));
    }
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidParameter(format!("dimension must be 1..=3, got {dim}")));
    }
    if matches!(op.kind, OperatorKind::HessianIota { .. }) {
        return Err(Error::InvalidParameter(
            "radial shooting requires a rotationally invariant operator".into(),
        ));
    }
    let alpha = alpha_of(gamma);
    let c = leading_coefficient(op, gamma, dim);
    let mut r0 = 1e-6 * r_max;
    let radii_full = geometric_radii(r0, r_max, n_samples);

    // stiffness retry: shrink r0 if the integration fails near the seed
    for _attempt in 0..4 {
        match integrate_profile(op, gamma, dim, alpha, c, &radii_full, r0) {
            Ok(samples) => {
                return Ok(RadialProfile {
                    gamma,
                    operator: op.kind,
                    dimension: dim,
                    alpha,
                    c_star: c,
                    samples,
                })
            }
            Err(_) => {
                r0 *= 0.1;
            }
        }
    }
    Err(Error::RadialIntegration(format!(
        "stiff start not resolved down to r0 = {r0:.3e}"
    )))
}

fn integrate_profile(
    op: &EllipticOperator,
    gamma: f64,
    dim: usize,
    alpha: f64,
    c: f64,
    radii: &[f64],
    r0: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    let mut out = Vec::with_capacity(radii.len());
    let mut r = r0;
    let mut y = [c * r0.powf(alpha), c * alpha * r0.powf(alpha - 1.0)];
    for &target in radii {
        if target <= r {
            out.push((target, c * target.powf(alpha), c * alpha * target.powf(alpha - 1.0)));
            continue;
        }
        dopri5(&mut r, &mut y, target, 1e-10, &|r, y| {
            [y[1], radial_rhs(op, gamma, dim, r, y[0], y[1])]
        })?;
        out.push((target, y[0], y[1]));
    }
    Ok(out)
}

/// Adaptive Dormand–Prince 5(4) step loop from `*r` to `r_end`.
fn dopri5(
    r: &mut f64,
    y: &mut [f64; 2],
    r_end: f64,
    rtol: f64,
    f: &dyn Fn(f64, &[f64; 2]) -> [f64; 2],
) -> Result<()> {
    const A: [[f64; 6]; 6] = [
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const B5: [f64; 7] =
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let atol = 1e-14;
    let mut h = (r_end - *r).min(0.1 * *r).max(1e-14);
    let mut steps = 0usize;
    while *r < r_end {
        if steps > 2_000_000 {
            return Err(Error::RadialIntegration("step budget exhausted".into()));
        }
        steps += 1;
        h = h.min(r_end - *r);
        let mut k = [[0.0f64; 2]; 7];
        k[0] = f(*r, y);
        for s in 0..6 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s + 1] = f(*r + C[s] * h, &ys);
        }
        let mut y5 = *y;
        let mut y4 = *y;
        for (j, kj) in k.iter().enumerate() {
            y5[0] += h * B5[j] * kj[0];
            y5[1] += h * B5[j] * kj[1];
            y4[0] += h * B4[j] * kj[0];
            y4[1] += h * B4[j] * kj[1];
        }
        let sc0 = atol + rtol * y5[0].abs().max(y[0].abs());
        let sc1 = atol + rtol * y5[1].abs().max(y[1].abs());
        let err = (((y5[0] - y4[0]) / sc0).powi(2) + ((y5[1] - y4[1]) / sc1).powi(2)).sqrt()
            / 2.0f64.sqrt();
        if err <= 1.0 {
            *r += h;
            *y = y5;
            if !y[0].is_finite() || !y[1].is_finite() {
                return Err(Error::RadialIntegration("non-finite state".into()));
            }
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= factor;
        if h < 1e-16 * r_end {
            return Err(Error::RadialIntegration("step size underflow".into()));
        }
    }
    Ok(())
}

/// Defect metric for a profile: re-integrates each sample interval from the
/// stored state at high accuracy and reports the worst relative mismatch at
/// the next sample.
pub fn profile_defect(profile: &RadialProfile, op: &EllipticOperator) -> Result<f64> {
    let gamma = profile.gamma;
    let dim = profile.dimension;
    let mut worst = 0.0f64;
    for w in profile.samples.windows(2) {
        let (r_a, u_a, du_a) = w[0];
        let (r_b, u_b, du_b) = w[1];
        let mut r = r_a;
        let mut y = [u_a, du_a];
        dopri5(&mut r, &mut y, r_b, 1e-12, &|r, y| {
            [y[1], radial_rhs(op, gamma, dim, r, y[0], y[1])]
        })?;
        let scale = u_b.abs().max(1e-12);
        worst = worst.max((y[0] - u_b).abs() / scale);
        worst = worst.max((y[1] - du_b).abs() / du_b.abs().max(1e-12));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_profile_satisfies_ode() {
        for gamma in [0.25, 0.5, 0.75] {
            let p = exact_power_profile(gamma, 2.0, 64).unwrap();
            // u'' u^{1-gamma} = gamma at every sample (restatement of the ODE)
            for &(r, u, _) in &p.samples {
                let upp = p.c_star * p.alpha * (p.alpha - 1.0) * r.powf(p.alpha - 2.0);
                assert!((upp * u.powf(1.0 - gamma) - gamma).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn exact_profile_coefficients() {
        let p = exact_power_profile(0.5, 1.0, 16).unwrap();
        assert!((p.alpha - 4.0 / 3.0).abs() < 1e-15);
        assert!((p.c_star - (9.0f64 / 8.0).powf(2.0 / 3.0)).abs() < 1e-15);
        let p = exact_power_profile(0.25, 1.0, 16).unwrap();
        assert!((p.alpha - 8.0 / 7.0).abs() < 1e-15);
        assert!((p.c_star.powf(1.75) - 1.75f64 * 1.75 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn shoot_trace_1d_matches_exact() {
        let gamma = 0.5;
        let op = EllipticOperator::trace();
        let shot = radial_shoot(gamma, &op, 1, 1.0, 96).unwrap();
        let exact = exact_power_profile(gamma, 1.0, 96).unwrap();
        for (a, b) in shot.samples.iter().zip(&exact.samples) {
            assert!((a.0 - b.0).abs() < 1e-12);
            assert!(
                (a.1 - b.1).abs() <= 1e-8 * b.1.abs().max(1e-12),
                "r={}: {} vs {}",
                a.0,
                a.1,
                b.1
            );
        }
    }

    #[test]
    fn shoot_pucci_equal_constants_scales_trace() {
        // lambda = Lambda = L degenerates Pucci+ to L*Trace, i.e. the profile
        // of u'' = (gamma/L) u^{gamma-1}
        let gamma = 0.5;
        let big = 2.0;
        let op = EllipticOperator::pucci_plus(big, big).unwrap();
        let shot = radial_shoot(gamma, &op, 1, 1.0, 48).unwrap();
        let expect_c = (gamma / (big * shot.alpha * (shot.alpha - 1.0))).powf(1.0 / (2.0 - gamma));
        assert!((shot.c_star - expect_c).abs() < 1e-14);
        for &(r, u, _) in &shot.samples {
            let expect = expect_c * r.powf(shot.alpha);
            assert!((u - expect).abs() <= 1e-8 * expect.max(1e-12));
        }
    }

    #[test]
    fn shoot_pucci_2d_recovers_alpha() {
        let gamma = 0.5;
        let op = EllipticOperator::pucci_plus(1.0, 2.0).unwrap();
        let shot = radial_shoot(gamma, &op, 2, 1.0, 64).unwrap();
        let slope = shot.loglog_slope();
        assert!(
            (slope - shot.alpha).abs() < 1e-3,
            "slope {slope} vs alpha {}",
            shot.alpha
        );
    }

    #[test]
    fn profile_defect_small() {
        let op = EllipticOperator::pucci_plus(1.0, 2.0).unwrap();
        for dim in [1usize, 2, 3] {
            let shot = radial_shoot(0.5, &op, dim, 1.0, 48).unwrap();
            let defect = profile_defect(&shot, &op).unwrap();
            assert!(defect < 1e-8, "dim {dim}: defect {defect}");
        }
    }

    #[test]
    fn scaling_closure() {
        // u(s r) = s^alpha u(r) for the shooting output at s in {1/2, 2}
        let gamma = 0.6;
        let op = EllipticOperator::trace();
        let shot = radial_shoot(gamma, &op, 2, 2.0, 257).unwrap();
        let alpha = shot.alpha;
        let interp = |target: f64| -> f64 {
            let mut prev = shot.samples[0];
            for &s in &shot.samples[1..] {
                if s.0 >= target {
                    let t = (target.ln() - prev.0.ln()) / (s.0.ln() - prev.0.ln());
                    return prev.1 * (s.1 / prev.1).powf(t);
                }
                prev = s;
            }
            shot.samples.last().unwrap().1
        };
        for s in [0.5, 2.0] {
            for r in [0.05, 0.2, 0.6] {
                let lhs = interp(s * r) / s.powf(alpha);
                let rhs = interp(r);
                assert!(
                    (lhs - rhs).abs() <= 2e-4 * rhs.abs(),
                    "s={s} r={r}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn nondegenerate_profile_bounds() {
        // u(r)/r^alpha bounded above and below on the sampled range
        let op = EllipticOperator::pucci_minus(1.0, 2.0).unwrap();
        let shot = radial_shoot(0.4, &op, 3, 1.0, 64).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &(r, u, _) in &shot.samples {
            let q = u / r.powf(shot.alpha);
            lo = lo.min(q);
            hi = hi.max(q);
        }
        assert!(lo > 0.0 && hi.is_finite());
        assert!(hi / lo < 10.0, "profile wanders: {lo}..{hi}");
    }

    #[test]
    fn rejects_non_rotationally_invariant() {
        let op = EllipticOperator::hessian_iota(3).unwrap();
        assert!(radial_shoot(0.5, &op, 2, 1.0, 16).is_err());
    }
}
