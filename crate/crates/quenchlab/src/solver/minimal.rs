//! Minimal-solution selection for the regularized problem: monotone
//! pseudo-time descent from the supersolution envelope (each CFL-compliant
//! step maps discrete supersolutions toward the largest fixed point below the
//! start, mirroring the infimum over supersolutions), then a damped Newton
//! polish on the smooth system. Continuation sweeps halve ε with warm starts;
//! since `β_ε` grows as ε shrinks, each stage's solution is a discrete
//! supersolution of the next stage, so the descent semantics carry over.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    beta_eps, beta_eps_prime, eval_operator, zeta_sup_beta, OperatorKind, SingularityParams,
};

use super::field::ScalarField;
use super::linear::{solve_bicgstab_ssor, solve_cg_ssor, solve_tridiagonal};
use super::problem::ProblemSpec;
use super::scheme::{discrete_hessian, StencilMatrix};

/// Right-hand side of `F(D²u) = source(u)`.
enum Source {
    Constant(f64),
    Beta(SingularityParams),
}

impl Source {
    fn value(&self, spec: &ProblemSpec, t: f64) -> f64 {
        match self {
            Source::Constant(g) => *g,
            Source::Beta(p) => beta_eps(p, &spec.mollifier, t),
        }
    }

    fn prime(&self, spec: &ProblemSpec, t: f64) -> f64 {
        match self {
            Source::Constant(_) => 0.0,
            Source::Beta(p) => beta_eps_prime(p, &spec.mollifier, t),
        }
    }
}

/// Iteration counters accumulated over one stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageIterations {
    pub pseudo_time: usize,
    pub newton: usize,
    pub linear: usize,
    pub cfl_halvings: usize,
}

/// Output of `solve_minimal`.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u: ScalarField,
    pub residual_sup: f64,
    pub iterations: StageIterations,
    pub u_star: ScalarField,
    pub u_upper: ScalarField,
    pub converged: bool,
    /// Newton diverged at least once and pseudo-time carried the stage.
    pub newton_fallback: bool,
    pub eps: f64,
    /// `ζ = sup β_ε` used for the subsolution envelope.
    pub zeta: f64,
}

fn interior_residual(
    spec: &ProblemSpec,
    u: &ScalarField,
    source: &Source,
    out: &mut Vec<f64>,
    interior: &[usize],
) {
    out.clear();
    out.par_extend(interior.par_iter().map(|&k| {
        let (i, j) = u.grid().coords(k);
        let hess = discrete_hessian(u, i, j).expect("interior node");
        eval_operator(&spec.operator, &hess) - source.value(spec, u.values()[k])
    }));
}

fn sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn solve_linear(
    spec: &ProblemSpec,
    mat: &StencilMatrix,
    rhs: &[f64],
) -> Result<(Vec<f64>, usize)> {
    if spec.grid.dim() == 1 {
        let x = solve_tridiagonal(mat, rhs)?;
        return Ok((x, 1));
    }
    // orient to a positive diagonal; CG for the symmetric positive definite
    // bulk regime (trace), MINRES when the transition collar turns the
    // system indefinite, BiCGSTAB for nonsymmetric stencils
    let neg: Vec<f64> = rhs.iter().map(|v| -v).collect();
    let iters = 60 * spec.grid.n_axis();
    if spec.operator.kind == OperatorKind::Trace {
        match solve_cg_ssor(mat, -1.0, &neg, 1e-10, iters) {
            Ok((x, st)) if st.rel_residual <= 1e-7 => return Ok((x, st.iterations)),
            Ok(_) | Err(Error::SolverDiverged(_)) => {}
            Err(e) => return Err(e),
        }
        let (x, st) = solve_minres_ssor(mat, -1.0, &neg, 1e-10, 4 * iters)?;
        if st.rel_residual > 1e-6 {
            return Err(Error::SolverDiverged(format!(
                "MINRES stalled at relative residual {:.3e}",
                st.rel_residual
            )));
        }
        return Ok((x, st.iterations));
    }
    let (x, st) = solve_bicgstab_ssor(mat, -1.0, &neg, 1e-10, 2 * iters)?;
    if st.rel_residual > 1e-6 {
        return Err(Error::SolverDiverged(format!(
            "BiCGSTAB stalled at relative residual {:.3e}",
            st.rel_residual
        )));
    }
    Ok((x, st.iterations))
}

/// Damped Newton on `F(D²u) = source(u)` with fixed boundary values.
/// Returns Ok(converged). `iters` accumulates counters.
fn newton_loop(
    spec: &ProblemSpec,
    u: &mut ScalarField,
    eps: f64,
    source: &Source,
    max_newton: usize,
    iters: &mut StageIterations,
) -> Result<bool> {
    let interior = spec.grid.interior_indices();
    let mut r = Vec::new();
    for _ in 0..max_newton {
        interior_residual(spec, u, source, &mut r, &interior);
        let rn = sup(&r);
        if rn <= spec.tol {
            return Ok(true);
        }
        iters.newton += 1;
        let bp = |t: f64| source.prime(spec, t);
        let mat = StencilMatrix::jacobian(spec, u, eps, &bp)?;
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let (du, lin) = solve_linear(spec, &mat, &rhs)?;
        iters.linear += lin;
        // Armijo-style damping on the residual sup-norm
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let mut trial = u.clone();
            for (row, &k) in interior.iter().enumerate() {
                trial.values_mut()[k] += step * du[row];
            }
            interior_residual(spec, &trial, source, &mut r, &interior);
            let rn_new = sup(&r);
            if rn_new < rn * (1.0 - 0.25 * step) {
                *u = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Ok(false);
        }
    }
    interior_residual(spec, u, source, &mut r, &interior);
    Ok(sup(&r) <= spec.tol)
}

/// Solves the two constant-source Dirichlet problems that bracket the minimal
/// solution: `F(D²u*) = ζ` (subsolution) and `F(D²u°) = 0` (supersolution),
/// both with the datum `f`.
pub fn solve_envelopes(spec: &ProblemSpec, eps: f64) -> Result<(ScalarField, ScalarField)> {
    let params = spec.params_at(eps)?;
    let zeta = zeta_sup_beta(&params, &spec.mollifier);
    let mut iters = StageIterations::default();
    let upper = {
        let mut u = spec.datum_field(mean_boundary(spec));
        let ok = newton_loop(spec, &mut u, eps, &Source::Constant(0.0), 60, &mut iters)?;
        if !ok {
            return Err(Error::SolverDiverged(format!(
                "upper envelope solve stalled after {} Newton steps",
                iters.newton
            )));
        }
        u
    };
    let star = {
        let mut u = upper.clone();
        let ok = newton_loop(spec, &mut u, eps, &Source::Constant(zeta), 60, &mut iters)?;
        if !ok {
            return Err(Error::SolverDiverged("subsolution envelope solve stalled".into()));
        }
        u
    };
    Ok((star, upper))
}

fn mean_boundary(spec: &ProblemSpec) -> f64 {
    let idx = spec.grid.boundary_indices();
    let mut s = 0.0;
    for &k in &idx {
        let (i, j) = spec.grid.coords(k);
        s += spec.datum.eval(spec.grid.position(i, j));
    }
    s / idx.len() as f64
}

/// CFL-compliant pseudo-time step for the monotone update
/// `u ← u + τ (F(D²_h u) - β_ε(u))`.
fn cfl_tau(spec: &ProblemSpec, params: &SingularityParams) -> f64 {
    let h2 = spec.grid.h() * spec.grid.h();
    let lip = spec.operator.eigen_lipschitz();
    let ea = params.eps_alpha();
    let lo = params.sigma0() * ea;
    let hi = (1.0 + params.sigma0()) * ea;
    let mut bp_max = 0.0f64;
    for k in 0..=2048 {
        let t = lo + (hi - lo) * k as f64 / 2048.0;
        bp_max = bp_max.max(beta_eps_prime(params, &spec.mollifier, t));
    }
    0.9 / (lip * 2.0 * spec.grid.dim() as f64 / h2 + bp_max)
}

/// Minimal-solution selector. Starts from `init` (warm start) or the upper
/// envelope, descends by monotone pseudo-time, polishes with damped Newton;
/// on Newton divergence falls back to further descent rounds.
pub fn solve_minimal(
    spec: &ProblemSpec,
    eps: f64,
    init: Option<&ScalarField>,
) -> Result<SolveResult> {
    solve_minimal_with_envelopes(spec, eps, init, None)
}

/// As `solve_minimal`, but reusing precomputed envelopes (the upper envelope
/// does not depend on ε; continuation sweeps share it across stages).
pub fn solve_minimal_with_envelopes(
    spec: &ProblemSpec,
    eps: f64,
    init: Option<&ScalarField>,
    envelopes: Option<(ScalarField, ScalarField)>,
) -> Result<SolveResult> {
    let params = spec.params_at(eps)?;
    let zeta = zeta_sup_beta(&params, &spec.mollifier);
    let (u_star, u_upper) = match envelopes {
        Some(pair) => pair,
        None => solve_envelopes(spec, eps)?,
    };
    let mut u = match init {
        Some(w) => {
            let mut w = w.clone();
            // boundary nodes always hold the datum exactly
            for &k in &spec.grid.boundary_indices() {
                let (i, j) = spec.grid.coords(k);
                w.values_mut()[k] = spec.datum.eval(spec.grid.position(i, j));
            }
            w
        }
        None => u_upper.clone(),
    };

    let source = Source::Beta(params);
    let interior = spec.grid.interior_indices();
    let mut tau = cfl_tau(spec, &params);
    let mut iters = StageIterations::default();
    let mut r = Vec::new();
    let mut newton_fallback = false;
    let slack = 1e-12 * u.sup_norm().max(1.0);
    // warm starts sit inside the attraction basin already; a short descent
    // round keeps the from-above semantics without the full budget
    let pt_budget = if init.is_some() {
        spec.budget.pseudo_time_steps.min(40)
    } else {
        spec.budget.pseudo_time_steps
    };

    let mut converged = false;
    for round in 0..spec.budget.rounds {
        // monotone descent; hands over to Newton once the residual has
        // dropped well below its round-entry level
        let mut step_count = 0;
        let mut entry_rn = f64::INFINITY;
        while step_count < pt_budget {
            interior_residual(spec, &u, &source, &mut r, &interior);
            let rn = sup(&r);
            if rn <= spec.tol {
                converged = true;
                break;
            }
            if entry_rn.is_infinite() {
                entry_rn = rn;
            } else if rn <= 1e-3 * entry_rn {
                break;
            }
            // candidate step; CFL failure shows up as an increase somewhere
            let worst_up = r.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
            if worst_up * tau > slack {
                // non-monotone step ahead: halve tau and retry
                iters.cfl_halvings += 1;
                tau *= 0.5;
                if iters.cfl_halvings > 60 {
                    return Err(Error::SolverDiverged(
                        "CFL halving exhausted; iterate is not a discrete supersolution".into(),
                    ));
                }
                continue;
            }
            for (row, &k) in interior.iter().enumerate() {
                u.values_mut()[k] += tau * r[row];
            }
            iters.pseudo_time += 1;
            step_count += 1;
        }
        if converged {
            break;
        }
        // Newton polish
        match newton_loop(spec, &mut u, eps, &source, spec.budget.newton_iters, &mut iters)? {
            true => {
                converged = true;
                break;
            }
            false => {
                newton_fallback = true;
                if round + 1 == spec.budget.rounds {
                    break;
                }
            }
        }
    }

    interior_residual(spec, &u, &source, &mut r, &interior);
    let residual_sup = sup(&r);
    let converged = converged && residual_sup <= spec.tol;
    Ok(SolveResult {
        u,
        residual_sup,
        iterations: iters,
        u_star,
        u_upper,
        converged,
        newton_fallback,
        eps,
        zeta,
    })
}

/// Result of a continuation sweep over the ε-schedule.
#[derive(Debug)]
pub struct SweepResult {
    pub stages: Vec<SolveResult>,
    /// Sup-norm differences between consecutive stage solutions.
    pub sup_diffs: Vec<f64>,
    /// Failure that aborted the sweep, if any; completed stages are kept.
    pub aborted: Option<(usize, Error)>,
}

impl SweepResult {
    pub fn final_solution(&self) -> Option<&SolveResult> {
        self.stages.last()
    }
}

/// Solves the schedule `ε_k = ε₀ 2^{-k}` sequentially with warm starts and
/// Cauchy monitoring of consecutive solutions. The upper envelope is solved
/// once and shared (it does not depend on ε); for the trace operator the
/// subsolution envelope rescales linearly with ζ.
pub fn continuation_sweep(spec: &ProblemSpec) -> SweepResult {
    let mut stages: Vec<SolveResult> = Vec::new();
    let mut sup_diffs = Vec::new();
    let mut base: Option<(ScalarField, ScalarField, f64)> = None;
    for (k, eps) in spec.schedule.stages().into_iter().enumerate() {
        let envelopes = match (&base, spec.operator.kind) {
            (Some((star0, upper, zeta0)), OperatorKind::Trace) => {
                match spec.params_at(eps) {
                    Ok(params) => {
                        let zeta_k = zeta_sup_beta(&params, &spec.mollifier);
                        let scale = zeta_k / zeta0;
                        let mut star = upper.clone();
                        for (s, (&u0, &s0)) in star
                            .values_mut()
                            .iter_mut()
                            .zip(upper.values().iter().zip(star0.values()))
                        {
                            *s = u0 + scale * (s0 - u0);
                        }
                        Some((star, upper.clone()))
                    }
                    Err(e) => {
                        return SweepResult { stages, sup_diffs, aborted: Some((k, e)) };
                    }
                }
            }
            _ => None,
        };
        let warm = stages.last().map(|s| &s.u);
        match solve_minimal_with_envelopes(spec, eps, warm, envelopes) {
            Ok(res) => {
                if let Some(prev) = stages.last() {
                    sup_diffs.push(res.u.sup_distance(&prev.u).expect("same grid"));
                }
                if base.is_none() {
                    base = Some((res.u_star.clone(), res.u_upper.clone(), res.zeta));
                }
                stages.push(res);
            }
            Err(e) => {
                return SweepResult {
                    stages,
                    sup_diffs,
                    aborted: Some((k, e)),
                };
            }
        }
    }
    SweepResult { stages, sup_diffs, aborted: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EllipticOperator;
    use crate::solver::grid::Grid;
    use crate::solver::problem::{
        power_profile_coefficient, BoundaryDatum, EpsSchedule, MinEpsPolicy,
    };

    fn spec_with(
        operator: EllipticOperator,
        grid: Grid,
        datum: BoundaryDatum,
        gamma: f64,
        schedule: EpsSchedule,
    ) -> ProblemSpec {
        let params = SingularityParams::new(gamma, 0.25, schedule.eps0).unwrap();
        ProblemSpec::with_policy(
            params,
            operator,
            grid,
            datum,
            schedule,
            MinEpsPolicy::Linear { cells: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn zero_datum_gives_zero_solution() {
        let spec = spec_with(
            EllipticOperator::trace(),
            Grid::interval(65, 0.0, 1.0 / 64.0).unwrap(),
            BoundaryDatum::Constant { value: 0.0 },
            0.5,
            EpsSchedule::single(0.3),
        );
        let res = solve_minimal(&spec, 0.3, None).unwrap();
        assert!(res.converged);
        assert!(res.u.sup_norm() <= 1e-10);
        assert!(res.u_upper.sup_norm() <= 1e-10);
    }

    #[test]
    fn envelopes_match_closed_form_1d() {
        // f = 0, trace: u_upper = 0, u_star = zeta x(x-1)/2 (exact on the grid
        // because the discrete second difference is exact on quadratics)
        let spec = spec_with(
            EllipticOperator::trace(),
            Grid::interval(65, 0.0, 1.0 / 64.0).unwrap(),
            BoundaryDatum::Constant { value: 0.0 },
            0.5,
            EpsSchedule::single(0.4),
        );
        let params = spec.params_at(0.4).unwrap();
        let zeta = zeta_sup_beta(&params, &spec.mollifier);
        let (star, upper) = solve_envelopes(&spec, 0.4).unwrap();
        assert!(upper.sup_norm() <= 1e-10);
        for i in 0..65 {
            let x = i as f64 / 64.0;
            let exact = 0.5 * zeta * x * (x - 1.0);
            assert!(
                (star.values()[i] - exact).abs() <= 1e-8 * zeta.max(1.0),
                "i={i}: {} vs {exact}",
                star.values()[i]
            );
            assert!(star.values()[i] <= upper.values()[i] + 1e-10);
        }
    }

    #[test]
    fn constant_datum_upper_envelope_is_constant() {
        // constants solve F(D²u) = 0 for any F with F(0) = 0
        let spec = spec_with(
            EllipticOperator::pucci_plus(1.0, 2.0).unwrap(),
            Grid::square(33, [0.0, 0.0], 1.0 / 32.0).unwrap(),
            BoundaryDatum::Constant { value: 3.0 },
            0.5,
            EpsSchedule::single(0.6),
        );
        let (_, upper) = solve_envelopes(&spec, 0.6).unwrap();
        for &v in upper.values() {
            assert!((v - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn large_constant_datum_no_free_boundary() {
        // lower barrier M - zeta*diam²/2 stays above eps^alpha => u > eps^alpha
        let eps = 0.5;
        let gamma = 0.5;
        let grid = Grid::square(33, [0.0, 0.0], 1.0 / 32.0).unwrap();
        let params = SingularityParams::new(gamma, 0.25, eps).unwrap();
        let zeta = zeta_sup_beta(&params, &crate::model::Mollifier::standard());
        let m = zeta * 2.0 / 2.0 + params.eps_alpha() + 1.0;
        let spec = spec_with(
            EllipticOperator::trace(),
            grid,
            BoundaryDatum::Constant { value: m },
            gamma,
            EpsSchedule::single(eps),
        );
        let res = solve_minimal(&spec, eps, None).unwrap();
        assert!(res.converged, "residual {}", res.residual_sup);
        assert!(res.residual_sup <= spec.tol);
        let ea = params.eps_alpha();
        assert!(res.u.min_value() > ea, "min {} vs eps^alpha {ea}", res.u.min_value());
    }

    #[test]
    fn oracle_profile_1d_small_grid() {
        // f(0)=0, f(1)=c_*: solution approaches c_* x^alpha as eps shrinks
        let gamma = 0.5;
        let n = 257;
        let h = 1.0 / (n - 1) as f64;
        let alpha = 2.0 / (2.0 - gamma);
        let floor = 4.0 * h.powf(1.0 / alpha);
        let schedule = EpsSchedule { eps0: floor * 8.0, levels: 3 };
        let spec = spec_with(
            EllipticOperator::trace(),
            Grid::interval(n, 0.0, h).unwrap(),
            BoundaryDatum::HalfPlanePower { gamma, point: [0.0, 0.0], angle: 0.0 },
            gamma,
            schedule,
        );
        let sweep = continuation_sweep(&spec);
        assert!(sweep.aborted.is_none());
        let last = sweep.final_solution().unwrap();
        assert!(last.converged);
        let c = power_profile_coefficient(gamma);
        let exact = ScalarField::from_fn(spec.grid.clone(), |p| c * p[0].powf(alpha));
        let err = last.u.sup_distance(&exact).unwrap() / exact.sup_norm();
        assert!(err < 0.05, "relative error {err}");
        // sandwich: u_star - tol <= u <= u_upper + tol
        for i in 0..n {
            assert!(last.u.values()[i] >= last.u_star.values()[i] - 1e-6);
            assert!(last.u.values()[i] <= last.u_upper.values()[i] + 1e-6);
        }
    }

    #[test]
    fn sweep_zero_datum_all_stages_zero() {
        let spec = spec_with(
            EllipticOperator::trace(),
            Grid::interval(65, 0.0, 1.0 / 64.0).unwrap(),
            BoundaryDatum::Constant { value: 0.0 },
            0.5,
            EpsSchedule { eps0: 0.4, levels: 3 },
        );
        let sweep = continuation_sweep(&spec);
        assert!(sweep.aborted.is_none());
        assert_eq!(sweep.stages.len(), 4);
        for s in &sweep.stages {
            assert!(s.u.sup_norm() <= 1e-10);
        }
        for d in &sweep.sup_diffs {
            assert!(*d <= 1e-10);
        }
    }

    #[test]
    fn single_entry_schedule_equals_solve_minimal() {
        let spec = spec_with(
            EllipticOperator::trace(),
            Grid::interval(65, 0.0, 1.0 / 64.0).unwrap(),
            BoundaryDatum::HalfPlanePower { gamma: 0.5, point: [0.0, 0.0], angle: 0.0 },
            0.5,
            EpsSchedule::single(0.35),
        );
        let direct = solve_minimal(&spec, 0.35, None).unwrap();
        let sweep = continuation_sweep(&spec);
        assert_eq!(sweep.stages.len(), 1);
        let d = sweep.stages[0].u.sup_distance(&direct.u).unwrap();
        assert!(d <= 1e-12);
    }

    #[test]
    fn pseudo_time_descent_is_monotone_from_upper() {
        // run a few raw descent steps from the upper envelope and check
        // nodewise nonincrease directly
        let spec = spec_with(
            EllipticOperator::trace(),
            Grid::interval(65, 0.0, 1.0 / 64.0).unwrap(),
            BoundaryDatum::HalfPlanePower { gamma: 0.5, point: [0.0, 0.0], angle: 0.0 },
            0.5,
            EpsSchedule::single(0.3),
        );
        let params = spec.params_at(0.3).unwrap();
        let (_, upper) = solve_envelopes(&spec, 0.3).unwrap();
        let tau = cfl_tau(&spec, &params);
        let source = Source::Beta(params);
        let interior = spec.grid.interior_indices();
        let mut u = upper;
        let mut r = Vec::new();
        for _ in 0..200 {
            interior_residual(&spec, &u, &source, &mut r, &interior);
            let prev = u.clone();
            for (row, &k) in interior.iter().enumerate() {
                u.values_mut()[k] += tau * r[row];
            }
            for k in 0..u.values().len() {
                assert!(u.values()[k] <= prev.values()[k] + 1e-12);
            }
        }
    }

    #[test]
    fn comparison_of_discrete_solutions() {
        // ordered boundary data give ordered solutions of F(D²u) = g
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let a: f64 = rng.gen_range(0.0..0.5);
            let b: f64 = a + rng.gen_range(0.0..0.5);
            let g: f64 = rng.gen_range(0.0..2.0);
            for op in [
                EllipticOperator::trace(),
                EllipticOperator::pucci_plus(0.5, 2.0).unwrap(),
            ] {
                let spec = spec_with(
                    op,
                    Grid::square(33, [0.0, 0.0], 1.0 / 32.0).unwrap(),
                    BoundaryDatum::Constant { value: a },
                    0.5,
                    EpsSchedule::single(1.0),
                );
                let mut lo = spec.datum_field(a);
                let mut it = StageIterations::default();
                assert!(newton_loop(&spec, &mut lo, 1.0, &Source::Constant(g), 60, &mut it)
                    .unwrap());
                let mut spec_hi = spec.clone();
                spec_hi.datum = BoundaryDatum::Constant { value: b };
                let mut hi = spec_hi.datum_field(b);
                assert!(newton_loop(&spec_hi, &mut hi, 1.0, &Source::Constant(g), 60, &mut it)
                    .unwrap());
                for k in 0..lo.values().len() {
                    assert!(
                        lo.values()[k] <= hi.values()[k] + 1e-8,
                        "comparison violated at node {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn grid_refinement_reduces_oracle_error() {
        let gamma = 0.5;
        let alpha = 2.0 / (2.0 - gamma);
        let c = power_profile_coefficient(gamma);
        let mut errors = Vec::new();
        for n in [129usize, 257, 513] {
            let h = 1.0 / (n - 1) as f64;
            let floor = 4.0 * h.powf(1.0 / alpha);
            let spec = spec_with(
                EllipticOperator::trace(),
                Grid::interval(n, 0.0, h).unwrap(),
                BoundaryDatum::HalfPlanePower { gamma, point: [0.0, 0.0], angle: 0.0 },
                gamma,
                EpsSchedule { eps0: floor * 4.0, levels: 2 },
            );
            let sweep = continuation_sweep(&spec);
            assert!(sweep.aborted.is_none());
            let last = sweep.final_solution().unwrap();
            let exact = ScalarField::from_fn(spec.grid.clone(), |p| c * p[0].powf(alpha));
            errors.push(last.u.sup_distance(&exact).unwrap());
        }
        assert!(
            errors[1] < errors[0] && errors[2] < errors[1],
            "errors not decreasing: {errors:?}"
        );
    }
}
