//! Uniformly elliptic operators on small symmetric matrices: the trace, the
//! Pucci extremal pair, and the Hessian family `F_ι(M) = Σ (1+λ_j^ι)^{1/ι}`.
//!
//! Operators carry their ellipticity constants (λ, Λ) and, when available, an
//! asymptotic-concavity certificate: a positive definite `f` and a constant
//! `C_F ≥ 0` with `⟨f, M⟩ - F(M) ≥ -C_F` for all symmetric `M`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense symmetric matrix of size 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat {
    n: usize,
    a: [[f64; 3]; 3],
}

impl SymMat {
    /// Builds from row data, rejecting non-symmetric input.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if !(1..=3).contains(&n) || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "symmetric matrix size must be 1..=3, got {n}"
            )));
        }
        let mut a = [[0.0; 3]; 3];
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                a[i][j] = rows[i][j];
                scale = scale.max(rows[i][j].abs());
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let defect = (a[i][j] - a[j][i]).abs();
                if defect > 1e-12 * scale.max(1.0) {
                    return Err(Error::NotSymmetric { i, j, defect });
                }
            }
        }
        Ok(Self { n, a })
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "diagonal size must be 1..=3, got {n}"
            )));
        }
        let mut a = [[0.0; 3]; 3];
        for (i, &e) in entries.iter().enumerate() {
            a[i][i] = e;
        }
        Ok(Self { n, a })
    }

    /// 2×2 from the three independent entries.
    pub fn sym2(xx: f64, xy: f64, yy: f64) -> Self {
        let mut a = [[0.0; 3]; 3];
        a[0][0] = xx;
        a[0][1] = xy;
        a[1][0] = xy;
        a[1][1] = yy;
        Self { n: 2, a }
    }

    pub fn scalar(v: f64) -> Self {
        let mut a = [[0.0; 3]; 3];
        a[0][0] = v;
        Self { n: 1, a }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::diag(&vec![1.0; n][..])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                out.a[i][j] *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidParameter("size mismatch in SymMat::add".into()));
        }
        let mut out = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                out.a[i][j] += other.a[i][j];
            }
        }
        Ok(out)
    }

    /// Frobenius inner product `Σ_ij a_ij b_ij`.
    pub fn inner(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.a[i][j] * other.a[i][j];
            }
        }
        s
    }
}

/// Eigenvalues of a symmetric matrix: closed form for n ≤ 2, cyclic Jacobi
/// for n = 3. Returned in the first `n` slots, unordered.
pub fn sym_eigenvalues(m: &SymMat) -> [f64; 3] {
    match m.n {
        1 => [m.a[0][0], 0.0, 0.0],
        2 => {
            let (a, b, c) = (m.a[0][0], m.a[0][1], m.a[1][1]);
            let mid = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            [mid - rad, mid + rad, 0.0]
        }
        _ => jacobi3(m).0,
    }
}

/// Cyclic Jacobi for 3×3: returns (eigenvalues, eigenvector columns).
fn jacobi3(m: &SymMat) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut a = m.a;
    let mut v = [[0.0; 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = {
        let mut s = 0.0f64;
        for row in &a {
            for x in row {
                s = s.max(x.abs());
            }
        }
        s.max(1e-300)
    };
    for _sweep in 0..64 {
        let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() <= 1e-300 {
                continue;
            }
            let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // rotate rows/cols p, q
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}

/// Which member of the catalogue an operator is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Trace,
    PucciPlus,
    PucciMinus,
    /// `F_ι(M) = Σ_j (1 + λ_j^ι)^{1/ι}`, ι an odd natural number.
    HessianIota { iota: u32 },
}

/// Asymptotic-concavity data: `⟨f, M⟩ - F(M) ≥ -c_f` on Sym(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityCertificate {
    pub f: SymMat,
    pub c_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticOperator {
    pub kind: OperatorKind,
    lambda: f64,
    big_lambda: f64,
    concavity: Option<ConcavityCertificate>,
}

impl EllipticOperator {
    pub fn new(kind: OperatorKind, lambda: f64, big_lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(big_lambda >= lambda && big_lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Lambda must be >= lambda, got {big_lambda} < {lambda}"
            )));
        }
        if let OperatorKind::HessianIota { iota } = kind {
            if iota % 2 == 0 || iota == 0 {
                return Err(Error::InvalidParameter(format!(
                    "iota must be an odd natural number, got {iota}"
                )));
            }
        }
        Ok(Self { kind, lambda, big_lambda, concavity: None })
    }

    /// The Laplacian, ellipticity (1, 1), concave with `C_F = 0`.
    pub fn trace() -> Self {
        let mut op = Self::new(OperatorKind::Trace, 1.0, 1.0).unwrap();
        op.concavity = Some(ConcavityCertificate { f: SymMat::identity(3).unwrap(), c_f: 0.0 });
        op
    }

    pub fn pucci_plus(lambda: f64, big_lambda: f64) -> Result<Self> {
        Self::new(OperatorKind::PucciPlus, lambda, big_lambda)
    }

    pub fn pucci_minus(lambda: f64, big_lambda: f64) -> Result<Self> {
        Self::new(OperatorKind::PucciMinus, lambda, big_lambda)
    }

    /// Hessian family member. The stored (1, 1) are the constants of its
    /// recession operator (the Laplacian); `F_ι` itself degenerates at the
    /// origin, where `f_ι'(0) = 0` for ι ≥ 3.
    pub fn hessian_iota(iota: u32) -> Result<Self> {
        Self::new(OperatorKind::HessianIota { iota }, 1.0, 1.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn big_lambda(&self) -> f64 {
        self.big_lambda
    }

    pub fn concavity(&self) -> Option<&ConcavityCertificate> {
        self.concavity.as_ref()
    }

    pub fn with_concavity(mut self, f: SymMat, c_f: f64) -> Result<Self> {
        if c_f < 0.0 {
            return Err(Error::InvalidParameter("C_F must be nonnegative".into()));
        }
        let eigs = sym_eigenvalues(&f);
        if eigs[..f.n].iter().any(|&e| e <= 0.0) {
            return Err(Error::InvalidParameter(
                "concavity matrix f must be positive definite".into(),
            ));
        }
        self.concavity = Some(ConcavityCertificate { f, c_f });
        Ok(self)
    }

    /// Lipschitz bound on the eigenvalue map: `|F(M) - F(M')| ≤ L Σ|λ_i - λ_i'|`
    /// with `L = Λ` for the catalogue (used by the solver's CFL bound).
    pub fn eigen_lipschitz(&self) -> f64 {
        self.big_lambda.max(1.0)
    }
}

/// Signed ι-th root, ι odd: `x^{1/ι}` extended oddly to x < 0.
fn signed_root(x: f64, iota: u32) -> f64 {
    if x >= 0.0 {
        x.powf(1.0 / iota as f64)
    } else {
        -(-x).powf(1.0 / iota as f64)
    }
}

/// Per-eigenvalue profile f(λ) with `F(M) = Σ_j f(λ_j)` for the catalogue.
fn eigen_profile(op: &EllipticOperator, lam: f64) -> f64 {
    match op.kind {
        OperatorKind::Trace => lam,
        OperatorKind::PucciPlus => {
            if lam >= 0.0 {
                op.big_lambda * lam
            } else {
                op.lambda * lam
            }
        }
        OperatorKind::PucciMinus => {
            if lam >= 0.0 {
                op.lambda * lam
            } else {
                op.big_lambda * lam
            }
        }
        OperatorKind::HessianIota { iota } => signed_root(1.0 + lam.powi(iota as i32), iota),
    }
}

/// Derivative of the per-eigenvalue profile (an element of the generalized
/// gradient at kinks; Pucci takes the upper branch at 0).
fn eigen_profile_prime(op: &EllipticOperator, lam: f64) -> f64 {
    match op.kind {
        OperatorKind::Trace => 1.0,
        OperatorKind::PucciPlus => {
            if lam >= 0.0 {
                op.big_lambda
            } else {
                op.lambda
            }
        }
        OperatorKind::PucciMinus => {
            if lam >= 0.0 {
                op.lambda
            } else {
                op.big_lambda
            }
        }
        OperatorKind::HessianIota { iota } => {
            let y = signed_root(1.0 + lam.powi(iota as i32), iota);
            if y.abs() < 1e-12 {
                1e12
            } else {
                (lam / y).powi(iota as i32 - 1)
            }
        }
    }
}

/// Evaluates `F(M)` through the eigenvalues of `M`.
pub fn eval_operator(op: &EllipticOperator, m: &SymMat) -> f64 {
    let eigs = sym_eigenvalues(m);
    eigs[..m.n].iter().map(|&l| eigen_profile(op, l)).sum()
}

/// `DF(M)` as a symmetric matrix: `Q diag(f'(λ_j)) Qᵀ`. Feeds the solver's
/// Newton linearization.
pub fn operator_derivative(op: &EllipticOperator, m: &SymMat) -> SymMat {
    match m.n {
        1 => SymMat::scalar(eigen_profile_prime(op, m.a[0][0])),
        2 => {
            let (a, b, c) = (m.a[0][0], m.a[0][1], m.a[1][1]);
            let mid = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            let (l1, l2) = (mid - rad, mid + rad);
            let (f1, f2) = (eigen_profile_prime(op, l1), eigen_profile_prime(op, l2));
            if rad < 1e-14 * (a.abs() + c.abs() + 1.0) {
                return SymMat::sym2(f1, 0.0, f1);
            }
            // eigenvector for l1: (b, l1 - a) unless degenerate in that slot
            let (mut vx, mut vy) = (b, l1 - a);
            if vx.abs() + vy.abs() < 1e-300 {
                vx = l1 - c;
                vy = b;
            }
            let nrm = (vx * vx + vy * vy).sqrt();
            let (vx, vy) = (vx / nrm, vy / nrm);
            // P1 = v vᵀ, P2 = I - P1
            let dxx = f1 * vx * vx + f2 * vy * vy;
            let dxy = f1 * vx * vy - f2 * vx * vy;
            let dyy = f1 * vy * vy + f2 * vx * vx;
            SymMat::sym2(dxx, dxy, dyy)
        }
        _ => {
            let (eigs, v) = jacobi3(m);
            let mut out = [[0.0; 3]; 3];
            for (k, &lk) in eigs.iter().enumerate() {
                let fk = eigen_profile_prime(op, lk);
                for i in 0..3 {
                    for j in 0..3 {
                        out[i][j] += fk * v[i][k] * v[j][k];
                    }
                }
            }
            SymMat { n: 3, a: out }
        }
    }
}

/// Pucci maximal operator `M⁺(M) = Λ Σλ⁺ - λ Σλ⁻`.
pub fn pucci_plus(m: &SymMat, lambda: f64, big_lambda: f64) -> f64 {
    let eigs = sym_eigenvalues(m);
    eigs[..m.n]
        .iter()
        .map(|&l| if l >= 0.0 { big_lambda * l } else { lambda * l })
        .sum()
}

/// Pucci minimal operator `M⁻(M) = λ Σλ⁺ - Λ Σλ⁻`.
pub fn pucci_minus(m: &SymMat, lambda: f64, big_lambda: f64) -> f64 {
    let eigs = sym_eigenvalues(m);
    eigs[..m.n]
        .iter()
        .map(|&l| if l >= 0.0 { lambda * l } else { big_lambda * l })
        .sum()
}

/// Outcome of extrapolating `μ F(μ⁻¹ M)` along a decreasing μ-sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RecessionOutcome {
    pub value: f64,
    /// `μ F(μ⁻¹M)` per sequence entry, for inspection.
    pub samples: Vec<f64>,
    /// Magnitude of the last extrapolation increment.
    pub last_increment: f64,
}

/// Recession operator `F⋆(M) = lim_{μ→0} μ F(μ⁻¹ M)`, computed by evaluating
/// along `mu_sequence` and accelerating with Aitken Δ² (the error is
/// geometric in μ for the catalogue). Fails if the accelerated tail still
/// moves by more than `tol`.
pub fn recession(
    op: &EllipticOperator,
    m: &SymMat,
    mu_sequence: &[f64],
    tol: f64,
) -> Result<RecessionOutcome> {
    if mu_sequence.len() < 3 {
        return Err(Error::InvalidParameter(
            "recession needs at least 3 values of mu".into(),
        ));
    }
    if mu_sequence.windows(2).any(|w| w[1] >= w[0]) || mu_sequence.iter().any(|&mu| mu <= 0.0) {
        return Err(Error::InvalidParameter(
            "mu_sequence must be positive and strictly decreasing".into(),
        ));
    }
    let samples: Vec<f64> = mu_sequence
        .iter()
        .map(|&mu| mu * eval_operator(op, &m.scaled(1.0 / mu)))
        .collect();
    // Aitken acceleration; exact homogeneity makes consecutive samples equal,
    // in which case the raw value already is the limit.
    let mut accel = Vec::new();
    for w in samples.windows(3) {
        let denom = w[2] - 2.0 * w[1] + w[0];
        if denom.abs() < 1e-14 * (w[2].abs().max(1.0)) {
            accel.push(w[2]);
        } else {
            accel.push(w[0] - (w[1] - w[0]) * (w[1] - w[0]) / denom);
        }
    }
    let value = *accel.last().unwrap();
    let last_increment = if accel.len() >= 2 {
        (value - accel[accel.len() - 2]).abs()
    } else {
        (samples[samples.len() - 1] - samples[samples.len() - 2]).abs()
    };
    if last_increment > tol * value.abs().max(1.0) {
        return Err(Error::RecessionDiverged { increment: last_increment, tol });
    }
    Ok(RecessionOutcome { value, samples, last_increment })
}

/// Result of sampling the asymptotic-concavity defect `⟨f, M⟩ - F(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityReport {
    pub min_defect: f64,
    pub worst_sample: usize,
    pub c_f: f64,
    pub passes: bool,
}

/// Checks `⟨f, M⟩ - F(M) ≥ -C_F` over the given samples.
pub fn concavity_certificate_check(
    op: &EllipticOperator,
    samples: &[SymMat],
) -> Result<ConcavityReport> {
    let cert = op.concavity().ok_or(Error::MissingConcavityCertificate)?;
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no concavity samples given".into()));
    }
    let mut min_defect = f64::INFINITY;
    let mut worst = 0;
    for (k, m) in samples.iter().enumerate() {
        // restrict f to the sample's dimension
        let mut rows = [[0.0; 3]; 3];
        for i in 0..m.n {
            for j in 0..m.n {
                rows[i][j] = cert.f.a[i][j];
            }
        }
        let f_restricted = SymMat { n: m.n, a: rows };
        let defect = f_restricted.inner(m) - eval_operator(op, m);
        if defect < min_defect {
            min_defect = defect;
            worst = k;
        }
    }
    let tol = 1e-9;
    Ok(ConcavityReport {
        min_defect,
        worst_sample: worst,
        c_f: cert.c_f,
        passes: min_defect >= -cert.c_f - tol,
    })
}
