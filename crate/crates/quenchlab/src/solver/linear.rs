//! Linear solvers for the Newton systems: direct tridiagonal in 1D, and
//! SSOR-preconditioned Krylov iterations in 2D. The negated trace Jacobian
//! is symmetric and usually positive definite, where CG applies; near the
//! transition collar the reaction slope `β'` can push negative spectrum into
//! the system, in which case BiCGSTAB takes over. Reductions are summed
//! sequentially so results do not depend on the worker count.

use crate::error::{Error, Result};

use super::scheme::StencilMatrix;

pub struct LinearStats {
    pub iterations: usize,
    pub rel_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Thomas algorithm on the 1D three-point stencil. Solves `J x = b`.
pub fn solve_tridiagonal(mat: &StencilMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let m = mat.rows();
    let mut cp = vec![0.0; m];
    let mut dp = vec![0.0; m];
    let c = &mat.coeff;
    let mut den = c[0][0];
    if den.abs() < 1e-300 {
        return Err(Error::SolverDiverged("tridiagonal pivot underflow".into()));
    }
    cp[0] = c[0][1] / den;
    dp[0] = b[0] / den;
    for r in 1..m {
        den = c[r][0] - c[r][2] * cp[r - 1];
        if den.abs() < 1e-300 {
            return Err(Error::SolverDiverged("tridiagonal pivot underflow".into()));
        }
        cp[r] = c[r][1] / den;
        dp[r] = (b[r] - c[r][2] * dp[r - 1]) / den;
    }
    let mut x = dp;
    for r in (0..m - 1).rev() {
        let next = x[r + 1];
        x[r] -= cp[r] * next;
    }
    Ok(x)
}

/// SSOR preconditioner for `A = sign * J` on the 9-point stencil; requires a
/// positive diagonal.
pub struct Ssor<'a> {
    mat: &'a StencilMatrix,
    sign: f64,
    diag: Vec<f64>,
    omega: f64,
}

impl<'a> Ssor<'a> {
    pub fn new(mat: &'a StencilMatrix, sign: f64, omega: f64) -> Result<Self> {
        let diag: Vec<f64> = mat.coeff.iter().map(|c| sign * c[0]).collect();
        if diag.iter().any(|&d| d <= 0.0) {
            return Err(Error::SolverDiverged(
                "SSOR requires a positive diagonal after orientation".into(),
            ));
        }
        Ok(Self { mat, sign, diag, omega })
    }

    /// z ≈ A⁻¹ r via one forward and one backward sweep (scalar factors drop
    /// out of the Krylov iterations).
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let m = self.mat.rows();
        for i in 0..m {
            let mut s = r[i];
            for (j, w) in self.mat.neighbors(i) {
                if j < i {
                    s -= self.sign * w * z[j];
                }
            }
            z[i] = s * self.omega / self.diag[i];
        }
        for i in 0..m {
            z[i] *= self.diag[i];
        }
        for i in (0..m).rev() {
            let mut s = z[i];
            for (j, w) in self.mat.neighbors(i) {
                if j > i {
                    s -= self.sign * w * z[j];
                }
            }
            z[i] = s * self.omega / self.diag[i];
        }
    }
}

/// Preconditioned CG on `A x = b` with `A = sign * J` assumed SPD. Errors
/// with `NonPositiveCurvature` semantics when the assumption fails.
pub fn solve_cg_ssor(
    mat: &StencilMatrix,
    sign: f64,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, LinearStats)> {
    let m = mat.rows();
    let ssor = Ssor::new(mat, sign, 1.9)?;
    let bnorm = norm(b).max(1e-300);
    let mut x = vec![0.0; m];
    let mut ax = vec![0.0; m];
    let mut r = b.to_vec();
    let mut z = vec![0.0; m];
    ssor.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    for it in 0..max_iter {
        let rn = norm(&r);
        if rn <= rel_tol * bnorm {
            break;
        }
        iterations = it + 1;
        mat.matvec(&p, &mut ax);
        let ap: Vec<f64> = ax.iter().map(|v| sign * v).collect();
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::SolverDiverged(format!(
                "CG detected non-positive curvature ({pap:.3e}); system not SPD"
            )));
        }
        let alpha = rz / pap;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        ssor.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = norm(&r) / bnorm;
    Ok((x, LinearStats { iterations, rel_residual: rel }))
}

/// Preconditioned MINRES on `A x = b` with `A = sign * J` symmetric, possibly
/// indefinite. The SSOR factorization `(D/ω+L) D⁻¹ (D/ω+L)ᵀ` is SPD whenever
/// the oriented diagonal is positive, which is all MINRES needs.
pub fn solve_minres_ssor(
    mat: &StencilMatrix,
    sign: f64,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, LinearStats)> {
    let m = mat.rows();
    let ssor = Ssor::new(mat, sign, 1.5)?;
    let bnorm = norm(b).max(1e-300);
    let mut x = vec![0.0; m];

    // Paige–Saunders recurrence with an SPD preconditioner; the Lanczos
    // vectors live in pairs (v, z = M⁻¹v)
    let mut v_old = vec![0.0; m];
    let mut v = b.to_vec();
    let mut z = vec![0.0; m];
    ssor.apply(&v, &mut z);
    let gamma_init = dot(&z, &v);
    if !(gamma_init > 0.0) {
        return Err(Error::SolverDiverged("MINRES preconditioner not SPD".into()));
    }
    let mut gamma_old = 1.0f64;
    let mut gamma = gamma_init.sqrt();
    let eta0 = gamma;
    let mut eta = gamma;
    let (mut s_old, mut s_cur) = (0.0f64, 0.0f64);
    let (mut c_old, mut c_cur) = (1.0f64, 1.0f64);
    let mut w = vec![0.0; m];
    let mut w_old = vec![0.0; m];
    let mut az = vec![0.0; m];
    let mut iterations = 0;
    for it in 0..max_iter {
        if eta.abs() <= rel_tol * eta0 {
            break;
        }
        iterations = it + 1;
        let zk: Vec<f64> = z.iter().map(|zi| zi / gamma).collect();
        mat.matvec(&zk, &mut az);
        if sign < 0.0 {
            for a in az.iter_mut() {
                *a = -*a;
            }
        }
        let delta = dot(&zk, &az);
        let v_next: Vec<f64> = (0..m)
            .map(|i| az[i] - (delta / gamma) * v[i] - (gamma / gamma_old) * v_old[i])
            .collect();
        let mut z_next = vec![0.0; m];
        ssor.apply(&v_next, &mut z_next);
        let g2 = dot(&z_next, &v_next);
        if g2 < 0.0 {
            return Err(Error::SolverDiverged("MINRES lost preconditioner definiteness".into()));
        }
        let gamma_next = g2.sqrt().max(1e-300);
        let a0 = c_cur * delta - c_old * s_cur * gamma;
        let a1 = (a0 * a0 + gamma_next * gamma_next).sqrt();
        let a2 = s_cur * delta + c_old * c_cur * gamma;
        let a3 = s_old * gamma;
        let c_next = a0 / a1;
        let s_next = gamma_next / a1;
        let w_next: Vec<f64> =
            (0..m).map(|i| (zk[i] - a3 * w_old[i] - a2 * w[i]) / a1).collect();
        for i in 0..m {
            x[i] += c_next * eta * w_next[i];
        }
        eta = -s_next * eta;
        gamma_old = gamma;
        gamma = gamma_next;
        v_old = v;
        v = v_next;
        z = z_next;
        c_old = c_cur;
        c_cur = c_next;
        s_old = s_cur;
        s_cur = s_next;
        w_old = w;
        w = w_next;
    }
    // true residual for the caller's quality check
    mat.matvec(&x, &mut az);
    let rel = (0..m)
        .map(|i| (b[i] - sign * az[i]).powi(2))
        .sum::<f64>()
        .sqrt()
        / bnorm;
    Ok((x, LinearStats { iterations, rel_residual: rel }))
}

/// Preconditioned BiCGSTAB on `A x = b` with `A = sign * J`; handles the
/// mildly indefinite and nonsymmetric cases.
pub fn solve_bicgstab_ssor(
    mat: &StencilMatrix,
    sign: f64,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, LinearStats)> {
    let m = mat.rows();
    let ssor = Ssor::new(mat, sign, 1.5)?;
    let bnorm = norm(b).max(1e-300);
    let mut x = vec![0.0; m];
    let mut av = vec![0.0; m];
    let mut r = b.to_vec();
    let r0 = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; m];
    let mut p = vec![0.0; m];
    let mut phat = vec![0.0; m];
    let mut shat = vec![0.0; m];
    let mut iterations = 0;
    for it in 0..max_iter {
        if norm(&r) <= rel_tol * bnorm {
            break;
        }
        iterations = it + 1;
        let rho_new = dot(&r0, &r);
        if rho_new.abs() < 1e-280 {
            return Err(Error::SolverDiverged("BiCGSTAB breakdown (rho)".into()));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..m {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        ssor.apply(&p, &mut phat);
        mat.matvec(&phat, &mut av);
        for i in 0..m {
            v[i] = sign * av[i];
        }
        let r0v = dot(&r0, &v);
        if r0v.abs() < 1e-280 {
            return Err(Error::SolverDiverged("BiCGSTAB breakdown (r0·v)".into()));
        }
        alpha = rho / r0v;
        let s: Vec<f64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm(&s) <= rel_tol * bnorm {
            for i in 0..m {
                x[i] += alpha * phat[i];
            }
            r = s;
            break;
        }
        ssor.apply(&s, &mut shat);
        mat.matvec(&shat, &mut av);
        let t: Vec<f64> = av.iter().map(|v| sign * v).collect();
        let tt = dot(&t, &t);
        if tt < 1e-280 {
            return Err(Error::SolverDiverged("BiCGSTAB breakdown (t)".into()));
        }
        omega = dot(&t, &s) / tt;
        for i in 0..m {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        if omega.abs() < 1e-280 {
            return Err(Error::SolverDiverged("BiCGSTAB breakdown (omega)".into()));
        }
    }
    let rel = norm(&r) / bnorm;
    if !rel.is_finite() {
        return Err(Error::SolverDiverged("BiCGSTAB produced non-finite residual".into()));
    }
    Ok((x, LinearStats { iterations, rel_residual: rel }))
}
