//! The mollified step `B_ε` and the regularized reaction `β_ε`.

use super::{Mollifier, SingularityParams};

/// `B_ε(t) = ∫₀^{(t - σ₀ ε^α)/ε^α} ρ(s) ds`, a smooth nondecreasing
/// approximation of the characteristic function of `(0, ∞)`: it vanishes for
/// `t ≤ σ₀ ε^α` and equals 1 for `t ≥ (1+σ₀) ε^α`.
pub fn big_b_eps(params: &SingularityParams, mollifier: &Mollifier, t: f64) -> f64 {
    let ea = params.eps_alpha();
    mollifier.mass((t - params.sigma0() * ea) / ea)
}

/// `β_ε(t) = γ t^{γ-1} B_ε(t)`, extended by zero for `t ≤ σ₀ ε^α`
/// (including all t ≤ 0, so transient negative solver iterates are fine).
pub fn beta_eps(params: &SingularityParams, mollifier: &Mollifier, t: f64) -> f64 {
    let ea = params.eps_alpha();
    if t <= params.sigma0() * ea {
        return 0.0;
    }
    let g = params.gamma();
    g * t.powf(g - 1.0) * mollifier.mass((t - params.sigma0() * ea) / ea)
}

/// Derivative `β_ε'(t) = γ(γ-1) t^{γ-2} B_ε(t) + γ t^{γ-1} B_ε'(t)`,
/// zero on the dead zone `t ≤ σ₀ ε^α`. Used by the Newton polish and the
/// pseudo-time CFL bound.
pub fn beta_eps_prime(params: &SingularityParams, mollifier: &Mollifier, t: f64) -> f64 {
    let ea = params.eps_alpha();
    if t <= params.sigma0() * ea {
        return 0.0;
    }
    let g = params.gamma();
    let s = (t - params.sigma0() * ea) / ea;
    let b = mollifier.mass(s);
    let bp = mollifier.density(s) / ea;
    g * (g - 1.0) * t.powf(g - 2.0) * b + g * t.powf(g - 1.0) * bp
}

/// `ζ = sup_t β_ε(t)`, located numerically. The supremum sits in the
/// transition band `(σ₀ ε^α, (1+σ₀) ε^α]` because `β_ε = γ t^{γ-1}` is
/// decreasing beyond it; a dense scan plus golden-section refinement of the
/// best bracket pins it down.
pub fn zeta_sup_beta(params: &SingularityParams, mollifier: &Mollifier) -> f64 {
    let ea = params.eps_alpha();
    let lo = params.sigma0() * ea;
    let hi = (1.0 + params.sigma0()) * ea;
    let m = 4096;
    let mut best_k = 0;
    let mut best = 0.0f64;
    for k in 0..=m {
        let t = lo + (hi - lo) * k as f64 / m as f64;
        let v = beta_eps(params, mollifier, t);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    // golden-section refine inside the bracketing cells
    let step = (hi - lo) / m as f64;
    let mut a = lo + step * (best_k as usize).saturating_sub(1) as f64;
    let mut b = (lo + step * (best_k + 1) as f64).min(hi);
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..80 {
        if beta_eps(params, mollifier, c) > beta_eps(params, mollifier, d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    best.max(beta_eps(params, mollifier, 0.5 * (a + b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::alpha_of;

    fn params(gamma: f64, eps: f64) -> SingularityParams {
        SingularityParams::new(gamma, 0.25, eps).unwrap()
    }

    #[test]
    fn big_b_endpoints() {
        let p = params(0.5, 0.3);
        let m = Mollifier::standard();
        let ea = p.eps_alpha();
        assert_eq!(big_b_eps(&p, &m, p.sigma0() * ea), 0.0);
        // endpoint values up to rounding in forming t itself
        assert!((big_b_eps(&p, &m, (1.0 + p.sigma0()) * ea) - 1.0).abs() < 1e-14);
        assert_eq!(big_b_eps(&p, &m, 2.0 * ea), 1.0);
        // symmetric bump gives half mass at the band midpoint
        assert!((big_b_eps(&p, &m, (p.sigma0() + 0.5) * ea) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn big_b_nondecreasing() {
        let p = params(0.7, 0.13);
        let m = Mollifier::standard();
        let ea = p.eps_alpha();
        let mut prev = -1.0;
        for k in 0..2000 {
            let t = -ea + 3.0 * ea * k as f64 / 2000.0;
            let v = big_b_eps(&p, &m, t);
            assert!(v >= prev - 1e-15);
            assert!((0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn beta_dead_zone_and_bulk() {
        let p = params(0.5, 0.2);
        let m = Mollifier::standard();
        let ea = p.eps_alpha();
        assert_eq!(beta_eps(&p, &m, 0.0), 0.0);
        assert_eq!(beta_eps(&p, &m, -3.0), 0.0);
        assert_eq!(beta_eps(&p, &m, p.sigma0() * ea), 0.0);
        // bulk: B = 1 so beta = gamma t^{gamma-1}, exact up to rounding of B
        for t in [(1.0 + p.sigma0()) * ea, 2.0 * ea, 1.0, 7.5] {
            let expect = p.gamma() * t.powf(p.gamma() - 1.0);
            assert!((beta_eps(&p, &m, t) - expect).abs() <= 1e-14 * expect.abs());
        }
    }

    #[test]
    fn beta_upper_bound() {
        // 0 <= beta_eps(t) <= gamma t^{gamma-1} for t above the dead zone
        let m = Mollifier::standard();
        for &(g, e) in &[(0.25, 0.11), (0.5, 0.37), (0.9, 1.3)] {
            let p = params(g, e);
            let ea = p.eps_alpha();
            for k in 1..=4000 {
                let t = p.sigma0() * ea + 3.0 * ea * k as f64 / 4000.0;
                let v = beta_eps(&p, &m, t);
                assert!(v >= 0.0);
                assert!(v <= g * t.powf(g - 1.0) * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn beta_scaling_identity() {
        // beta_eps(eps^alpha s) = eps^(alpha-2) * beta_1(s), via alpha(gamma-1) = alpha-2
        let m = Mollifier::standard();
        for &(g, e) in &[(0.25, 0.07), (0.5, 0.4), (0.75, 1.9)] {
            let p = params(g, e);
            let p1 = params(g, 1.0);
            let a = alpha_of(g);
            for k in 0..500 {
                let s = -0.2 + 2.5 * k as f64 / 500.0;
                let lhs = beta_eps(&p, &m, p.eps_alpha() * s);
                let rhs = e.powf(a - 2.0) * beta_eps(&p1, &m, s);
                let scale = rhs.abs().max(e.powf(a - 2.0));
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * scale,
                    "scaling failed gamma={g} eps={e} s={s}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn beta_prime_matches_finite_difference() {
        let p = params(0.6, 0.33);
        let m = Mollifier::standard();
        let ea = p.eps_alpha();
        for k in 1..200 {
            let t = p.sigma0() * ea * 1.05 + 2.0 * ea * k as f64 / 200.0;
            let dh = 1e-7 * ea;
            let fd = (beta_eps(&p, &m, t + dh) - beta_eps(&p, &m, t - dh)) / (2.0 * dh);
            let an = beta_eps_prime(&p, &m, t);
            assert!(
                (fd - an).abs() <= 1e-4 * an.abs().max(1.0),
                "t={t}: fd={fd} analytic={an}"
            );
        }
    }

    #[test]
    fn zeta_dominates_samples_and_scales() {
        let m = Mollifier::standard();
        let p = params(0.5, 0.25);
        let z = zeta_sup_beta(&p, &m);
        let ea = p.eps_alpha();
        for k in 0..10_000 {
            let t = 3.0 * ea * k as f64 / 10_000.0;
            assert!(beta_eps(&p, &m, t) <= z * (1.0 + 1e-12));
        }
        // zeta scales like eps^(alpha-2)
        let p2 = params(0.5, 0.125);
        let z2 = zeta_sup_beta(&p2, &m);
        let a = p.alpha();
        let expect = z * (0.125f64 / 0.25).powf(a - 2.0);
        assert!((z2 - expect).abs() < 1e-10 * expect);
    }
}
