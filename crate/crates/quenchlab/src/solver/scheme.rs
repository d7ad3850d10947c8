//! Second-order differences on the uniform grid and the discrete residual
//! `F(D²_h u) - β_ε(u)`. The mixed derivative uses the diagonal stencil pair,
//! exact on quadratics; scheme monotonicity is enforced at runtime by the
//! pseudo-time CFL test rather than proven per operator.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    beta_eps, eval_operator, operator_derivative, EllipticOperator, Mollifier, SingularityParams,
    SymMat,
};

use super::field::ScalarField;
use super::grid::{Grid, NodeClass};
use super::problem::ProblemSpec;

/// Discrete Hessian at an interior node: centered second differences on the
/// axes; in 2D the mixed term combines the two diagonal second differences,
/// `(u_NE + u_SW - u_NW - u_SE) / (4h²)`.
pub fn discrete_hessian(u: &ScalarField, i: usize, j: usize) -> Result<SymMat> {
    let grid = u.grid();
    let n = grid.n_axis();
    if grid.classify(i, j) != NodeClass::Interior || i == 0 || i + 1 >= n {
        return Err(Error::Grid(format!("node ({i},{j}) is not interior")));
    }
    let h2 = grid.h() * grid.h();
    match grid.dim() {
        1 => {
            let d = (u.at(i - 1, 0) - 2.0 * u.at(i, 0) + u.at(i + 1, 0)) / h2;
            Ok(SymMat::scalar(d))
        }
        _ => {
            if j == 0 || j + 1 >= n {
                return Err(Error::Grid(format!("node ({i},{j}) is not interior")));
            }
            let c = u.at(i, j);
            let xx = (u.at(i + 1, j) - 2.0 * c + u.at(i - 1, j)) / h2;
            let yy = (u.at(i, j + 1) - 2.0 * c + u.at(i, j - 1)) / h2;
            let xy = (u.at(i + 1, j + 1) + u.at(i - 1, j - 1)
                - u.at(i - 1, j + 1)
                - u.at(i + 1, j - 1))
                / (4.0 * h2);
            Ok(SymMat::sym2(xx, xy, yy))
        }
    }
}

/// Residual field `F(D²_h u) - β_ε(u)` on interior nodes (zero on boundary
/// nodes). Zero residual characterizes a discrete solution.
pub fn residual(spec: &ProblemSpec, u: &ScalarField, eps: f64) -> Result<ScalarField> {
    let params = spec.params_at(eps)?;
    let mut out = vec![0.0; u.grid().node_count()];
    let interior = u.grid().interior_indices();
    let chunks: Vec<(usize, f64)> = interior
        .par_iter()
        .map(|&k| {
            let (i, j) = u.grid().coords(k);
            (k, residual_at(&spec.operator, &params, &spec.mollifier, u, i, j))
        })
        .collect();
    for (k, v) in chunks {
        out[k] = v;
    }
    ScalarField::new(u.grid().clone(), out)
}

#[inline]
pub(crate) fn residual_at(
    op: &EllipticOperator,
    params: &SingularityParams,
    mollifier: &Mollifier,
    u: &ScalarField,
    i: usize,
    j: usize,
) -> f64 {
    let h = discrete_hessian(u, i, j).expect("residual_at on non-interior node");
    eval_operator(op, &h) - beta_eps(params, mollifier, u.at(i, j))
}

/// Sup-norm of the residual over interior nodes.
pub fn residual_sup(spec: &ProblemSpec, u: &ScalarField, eps: f64) -> Result<f64> {
    Ok(residual(spec, u, eps)?.sup_norm())
}

/// Nine-point stencil matrix over the interior unknowns: the Newton
/// linearization of the residual. Row order follows `grid.interior_indices()`.
pub struct StencilMatrix {
    grid: Grid,
    pub interior: Vec<usize>,
    /// node index -> row number, or usize::MAX for boundary nodes
    row_of: Vec<usize>,
    /// per row: [C, E, W, N, S, NE, NW, SE, SW]
    pub coeff: Vec<[f64; 9]>,
}

impl StencilMatrix {
    /// Assembles `J = DF(D²_h u) ∘ D²_h - diag(β_ε'(u))`.
    pub fn jacobian(
        spec: &ProblemSpec,
        u: &ScalarField,
        eps: f64,
        beta_prime: &(dyn Fn(f64) -> f64 + Sync),
    ) -> Result<Self> {
        let _ = eps;
        let grid = u.grid().clone();
        let interior = grid.interior_indices();
        let mut row_of = vec![usize::MAX; grid.node_count()];
        for (r, &k) in interior.iter().enumerate() {
            row_of[k] = r;
        }
        let h2 = grid.h() * grid.h();
        let coeff: Vec<[f64; 9]> = interior
            .par_iter()
            .map(|&k| {
                let (i, j) = grid.coords(k);
                let hess = discrete_hessian(u, i, j).expect("interior node");
                let a = operator_derivative(&spec.operator, &hess);
                let bp = beta_prime(u.values()[k]);
                match grid.dim() {
                    1 => {
                        let axx = a.get(0, 0);
                        [-2.0 * axx / h2 - bp, axx / h2, axx / h2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
                    }
                    _ => {
                        let (axx, ayy, axy) = (a.get(0, 0), a.get(1, 1), a.get(0, 1));
                        [
                            -2.0 * (axx + ayy) / h2 - bp,
                            axx / h2,
                            axx / h2,
                            ayy / h2,
                            ayy / h2,
                            axy / (2.0 * h2),
                            -axy / (2.0 * h2),
                            -axy / (2.0 * h2),
                            axy / (2.0 * h2),
                        ]
                    }
                }
            })
            .collect();
        Ok(Self { grid, interior, row_of, coeff })
    }

    pub fn rows(&self) -> usize {
        self.interior.len()
    }

    /// `y = J x` over interior unknowns; boundary increments are zero.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.grid.n_axis();
        let dim = self.grid.dim();
        let row_of = &self.row_of;
        let interior = &self.interior;
        let coeff = &self.coeff;
        let fetch = |node: usize, x: &[f64]| -> f64 {
            let r = row_of[node];
            if r == usize::MAX {
                0.0
            } else {
                x[r]
            }
        };
        y.par_iter_mut().enumerate().for_each(|(r, yr)| {
            let k = interior[r];
            let c = &coeff[r];
            let mut acc = c[0] * x[r];
            if dim == 1 {
                acc += c[1] * fetch(k + 1, x) + c[2] * fetch(k - 1, x);
            } else {
                acc += c[1] * fetch(k + 1, x)
                    + c[2] * fetch(k - 1, x)
                    + c[3] * fetch(k + n, x)
                    + c[4] * fetch(k - n, x)
                    + c[5] * fetch(k + n + 1, x)
                    + c[6] * fetch(k + n - 1, x)
                    + c[7] * fetch(k - n + 1, x)
                    + c[8] * fetch(k - n - 1, x);
            }
            *yr = acc;
        });
    }

    pub fn diag(&self) -> Vec<f64> {
        self.coeff.iter().map(|c| c[0]).collect()
    }

    /// Neighbor rows and weights of row r, excluding the diagonal.
    pub(crate) fn neighbors(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let k = self.interior[r];
        let n = self.grid.n_axis();
        let dim = self.grid.dim();
        let c = &self.coeff[r];
        let idx: [(i64, f64); 8] = if dim == 1 {
            [
                (1, c[1]),
                (-1, c[2]),
                (0, 0.0),
                (0, 0.0),
                (0, 0.0),
                (0, 0.0),
                (0, 0.0),
                (0, 0.0),
            ]
        } else {
            let n = n as i64;
            [
                (1, c[1]),
                (-1, c[2]),
                (n, c[3]),
                (-n, c[4]),
                (n + 1, c[5]),
                (n - 1, c[6]),
                (-n + 1, c[7]),
                (-n - 1, c[8]),
            ]
        };
        idx.into_iter().filter_map(move |(off, w)| {
            if w == 0.0 {
                return None;
            }
            let node = (k as i64 + off) as usize;
            let row = self.row_of[node];
            if row == usize::MAX {
                None
            } else {
                Some((row, w))
            }
        })
    }
}
