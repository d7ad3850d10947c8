// Rough timing probe for 2D sweeps at acceptance-suite scales.
use std::time::Instant;

use quenchlab::model::SingularityParams;
use quenchlab::solver::{
    continuation_sweep, BoundaryDatum, EpsSchedule, Grid, MinEpsPolicy, ProblemSpec,
};
use quenchlab::EllipticOperator;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(257);
    let gamma: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.5);
    let levels: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(4);
    let cells: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(4.0);
    let h = 1.0 / (n - 1) as f64;
    let alpha = 2.0 / (2.0 - gamma);
    let floor = (cells * h).max(0.0);
    let eps0 = floor * 2f64.powi(levels as i32);
    println!("n={n} gamma={gamma} eps_final={floor:.5} eps0={eps0:.5} alpha={alpha:.4}");
    let params = SingularityParams::new(gamma, 0.25, eps0).unwrap();
    let spec = ProblemSpec::with_policy(
        params,
        EllipticOperator::trace(),
        Grid::square(n, [0.0, 0.0], h).unwrap(),
        BoundaryDatum::HalfPlanePower { gamma, point: [0.22, 0.18], angle: 0.5 },
        EpsSchedule { eps0, levels },
        MinEpsPolicy::Linear { cells },
    )
    .unwrap();
    let t = Instant::now();
    let sweep = continuation_sweep(&spec);
    println!(
        "sweep took {:.1}s, aborted={:?}",
        t.elapsed().as_secs_f64(),
        sweep.aborted.as_ref().map(|a| (a.0, a.1.to_string()))
    );
    for (k, s) in sweep.stages.iter().enumerate() {
        println!(
            "  k={k} eps={:.5} resid={:.2e} conv={} pt={} newton={} lin={} fallback={}",
            s.eps,
            s.residual_sup,
            s.converged,
            s.iterations.pseudo_time,
            s.iterations.newton,
            s.iterations.linear,
            s.newton_fallback
        );
    }
    // compare to the tilted half-plane oracle
    if let Some(last) = sweep.final_solution() {
        let c = quenchlab::solver::power_profile_coefficient(gamma);
        let exact = quenchlab::solver::ScalarField::from_fn(spec.grid.clone(), |p| {
            let s = (p[0] - 0.22) * 0.5f64.cos() + (p[1] - 0.18) * 0.5f64.sin();
            if s > 0.0 {
                c * s.powf(alpha)
            } else {
                0.0
            }
        });
        let err = last.u.sup_distance(&exact).unwrap() / exact.sup_norm();
        println!("relative sup error vs tilted oracle: {err:.4}");
    }
}
