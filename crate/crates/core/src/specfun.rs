//! Orthogonal-polynomial and combinatorial primitives on `[-1, 1]`.
//!
//! Jacobi polynomials `P_ℓ^{(α,β)}` use the classical normalisation
//! `P_ℓ^{(α,β)}(1) = binom(ℓ+α, ℓ)`. The generalised Legendre polynomials
//! `P_ℓ^{(d)}` of the sphere `S^d` are the Gegenbauer polynomials with index
//! `(d-1)/2`, rescaled so that `P_ℓ^{(d)}(1) = 1`; they are orthogonal for the
//! weight `(1-t²)^{d/2-1}`.
//!
//! Everything is evaluated by ascending three-term recurrences (or the matching
//! Clenshaw sum), which is stable on `[-1, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Parameter pair `(α, β)` of a Jacobi family, both `> -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    alpha: f64,
    beta: f64,
}

impl JacobiIndex {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::Domain(format!(
                "Jacobi indices must exceed -1, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// The symmetric index `α = β = d/2 - 1` attached to `S^d`.
    pub fn sphere(d: usize) -> Self {
        let a = d as f64 / 2.0 - 1.0;
        Self { alpha: a, beta: a }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The index with `α` and `β` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

fn check_unit_interval(t: f64) -> Result<()> {
    if t.is_nan() || t.abs() > 1.0 {
        return Err(Error::Domain(format!("argument {t} outside [-1, 1]")));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("sphere dimension must be >= 2, got {d}")));
    }
    Ok(())
}

/// Fills `out` with `P_0^{(α,β)}(t), …, P_L^{(α,β)}(t)`.
///
/// No range check on `t`; callers validate.
pub fn jacobi_all(idx: JacobiIndex, degree: usize, t: f64, out: &mut Vec<f64>) {
    let (a, b) = (idx.alpha, idx.beta);
    out.clear();
    out.push(1.0);
    if degree == 0 {
        return;
    }
    out.push((a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0);
    for n in 2..=degree {
        let n = n as f64;
        let s = 2.0 * n + a + b;
        let c1 = 2.0 * n * (n + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * t + a * a - b * b);
        let c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let len = out.len();
        let next = (c2 * out[len - 1] - c3 * out[len - 2]) / c1;
        out.push(next);
    }
}

/// Jacobi polynomial `P_ℓ^{(α,β)}(t)` for `|t| ≤ 1`.
pub fn jacobi_eval(idx: JacobiIndex, ell: usize, t: f64) -> Result<f64> {
    check_unit_interval(t)?;
    let mut buf = Vec::with_capacity(ell + 1);
    jacobi_all(idx, ell, t, &mut buf);
    Ok(buf[ell])
}

/// Recurrence coefficients `(a_n, b_n)` of the normalised zonal polynomials:
/// `P_{n+1}(t) = a_n t P_n(t) - b_n P_{n-1}(t)`.
#[inline]
pub(crate) fn zonal_recurrence(d: usize, n: usize) -> (f64, f64) {
    let n = n as f64;
    let dm1 = d as f64 - 1.0;
    let den = n + dm1;
    ((2.0 * n + dm1) / den, n / den)
}

/// Fills `out` with `P_0^{(d)}(t), …, P_L^{(d)}(t)`.
///
/// No range check on `t`; callers validate.
pub fn legendre_d_all(d: usize, degree: usize, t: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if degree == 0 {
        return;
    }
    out.push(t);
    for n in 1..degree {
        let (a, b) = zonal_recurrence(d, n);
        let next = a * t * out[n] - b * out[n - 1];
        out.push(next);
    }
}

/// Generalised Legendre polynomial `P_ℓ^{(d)}(t)`, normalised by `P_ℓ^{(d)}(1) = 1`.
///
/// Equals `ℓ!/(d/2)_ℓ · P_ℓ^{(d/2-1, d/2-1)}(t)`.
pub fn legendre_d_eval(d: usize, ell: usize, t: f64) -> Result<f64> {
    check_dim(d)?;
    check_unit_interval(t)?;
    let mut buf = Vec::with_capacity(ell + 1);
    legendre_d_all(d, ell, t, &mut buf);
    Ok(buf[ell])
}

/// Derivative `(P_ℓ^{(d)})'(t) = λ_ℓ / d · P_{ℓ-1}^{(d+2)}(t)`.
///
/// Follows from the Jacobi derivative relation
/// `(P_n^{(α,β)})' = (n+α+β+1)/2 · P_{n-1}^{(α+1,β+1)}`.
pub fn legendre_d_derivative(d: usize, ell: usize, t: f64) -> Result<f64> {
    check_dim(d)?;
    check_unit_interval(t)?;
    if ell == 0 {
        return Ok(0.0);
    }
    let scale = eigenvalue_f64(d, ell) / d as f64;
    Ok(scale * legendre_d_eval(d + 2, ell - 1, t)?)
}

/// Clenshaw summation of `Σ_{ℓ=0}^{L} c_ℓ P_ℓ^{(d)}(t)`.
pub fn clenshaw(d: usize, coeffs: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0; // b_{k+1}
    let mut b2 = 0.0; // b_{k+2}
    for k in (0..coeffs.len()).rev() {
        let (a_k, _) = zonal_recurrence(d, k);
        let (_, b_next) = zonal_recurrence(d, k + 1);
        let bk = coeffs[k] + a_k * t * b1 - b_next * b2;
        b2 = b1;
        b1 = bk;
    }
    // a_0 = 1 and P_1 = t, so the sum collapses to b_0.
    b1
}

const LANES: usize = 8;

/// Clenshaw summation with the recurrence tabulated once, for many arguments.
#[derive(Debug, Clone)]
pub(crate) struct ClenshawPlan {
    coeffs: Vec<f64>,
    a: Vec<f64>,
    b_next: Vec<f64>,
}

impl ClenshawPlan {
    pub(crate) fn new(d: usize, coeffs: Vec<f64>) -> Self {
        let n = coeffs.len();
        let a = (0..n).map(|k| zonal_recurrence(d, k).0).collect();
        let b_next = (0..n).map(|k| zonal_recurrence(d, k + 1).1).collect();
        Self { coeffs, a, b_next }
    }

    #[inline]
    pub(crate) fn eval(&self, t: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for k in (0..self.coeffs.len()).rev() {
            let bk = self.coeffs[k] + self.a[k] * t * b1 - self.b_next[k] * b2;
            b2 = b1;
            b1 = bk;
        }
        b1
    }

    #[inline]
    fn eval_lanes(&self, t: &[f64; LANES]) -> [f64; LANES] {
        let mut b1 = [0.0; LANES];
        let mut b2 = [0.0; LANES];
        for k in (0..self.coeffs.len()).rev() {
            let (c, a, b) = (self.coeffs[k], self.a[k], self.b_next[k]);
            for l in 0..LANES {
                let bk = c + a * t[l] * b1[l] - b * b2[l];
                b2[l] = b1[l];
                b1[l] = bk;
            }
        }
        b1
    }

    /// `out[j] = S(ts[j])`.
    pub(crate) fn eval_into(&self, ts: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let mut chunks = ts.chunks_exact(LANES);
        for tc in &mut chunks {
            out.extend_from_slice(&self.eval_lanes(tc.try_into().expect("chunk of LANES")));
        }
        out.extend(chunks.remainder().iter().map(|&t| self.eval(t)));
    }

    /// `Σ_j w_j S(t_j)`, summed in a fixed order.
    pub(crate) fn weighted_sum(&self, ts: &[f64], ws: &[f64]) -> f64 {
        let mut acc = 0.0;
        let mut chunks = ts.chunks_exact(LANES);
        let mut wchunks = ws.chunks_exact(LANES);
        for (tc, wc) in (&mut chunks).zip(&mut wchunks) {
            let v = self.eval_lanes(tc.try_into().expect("chunk of LANES"));
            acc += v.iter().zip(wc).map(|(x, w)| x * w).sum::<f64>();
        }
        for (&t, &w) in chunks.remainder().iter().zip(wchunks.remainder()) {
            acc += w * self.eval(t);
        }
        acc
    }
}

/// Dimension `Z(d, ℓ)` of the degree-`ℓ` spherical harmonics on `S^d`, exactly.
///
/// Panics on `u128` overflow, which only happens far outside practical ranges.
pub fn dim_harmonics(d: usize, ell: usize) -> u128 {
    assert!(d >= 1, "dimension must be positive");
    if ell == 0 {
        return 1;
    }
    // Z = (2ℓ+d-1) (ℓ+d-2)! / ((d-1)! ℓ!) = (2ℓ+d-1)/(d-1) · binom(ℓ+d-2, d-2)
    if d == 1 {
        return 2;
    }
    let k = (d - 2) as u128;
    let n = (ell + d - 2) as u128;
    let mut binom: u128 = 1;
    for i in 1..=k {
        // binom(n-k+i, i) stays integral at every step
        binom = binom
            .checked_mul(n - k + i)
            .expect("dim_harmonics overflow")
            / i;
    }
    let num = binom
        .checked_mul((2 * ell + d - 1) as u128)
        .expect("dim_harmonics overflow");
    num / (d as u128 - 1)
}

/// `Z(d, ℓ)` in floating point via a short product, accurate to a few ulps.
pub fn dim_harmonics_f64(d: usize, ell: usize) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let l = ell as f64;
    let mut binom = 1.0;
    for j in 1..=(d - 2) {
        binom *= (l + j as f64) / j as f64;
    }
    (2.0 * l + d as f64 - 1.0) / (d as f64 - 1.0) * binom
}

/// Laplace–Beltrami eigenvalue `λ_ℓ = ℓ(ℓ + d - 1)`.
pub fn eigenvalue(d: usize, ell: usize) -> u64 {
    (ell as u64) * (ell as u64 + d as u64 - 1)
}

pub fn eigenvalue_f64(d: usize, ell: usize) -> f64 {
    let l = ell as f64;
    l * (l + d as f64 - 1.0)
}

/// `ln (a)_n` for `a > 0`.
pub fn ln_pochhammer(a: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        ln_gamma(a + n as f64) - ln_gamma(a)
    }
}

/// Pochhammer symbol `(a)_n`, via log-gamma for `a > 0`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else if a == 0.0 {
        0.0
    } else if a > 0.0 {
        ln_pochhammer(a, n).exp()
    } else {
        (0..n).map(|i| a + i as f64).product()
    }
}

/// `(a)_n / (b)_n` as a running product; never overflows for `a, b > 0`.
pub fn pochhammer_ratio(a: f64, b: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a + i as f64) / (b + i as f64))
}

/// `Γ((d+1)/2) / (√π Γ(d/2))`: turns `∫ f(t)(1-t²)^{d/2-1} dt` into a
/// normalised surface integral of the zonal function `f(⟨x, y⟩)`.
pub fn sphere_constant(d: usize) -> f64 {
    let d = d as f64;
    (ln_gamma((d + 1.0) / 2.0) - ln_gamma(d / 2.0)).exp() / PI.sqrt()
}

/// Total mass `∫_{-1}^{1} (1-t²)^{d/2-1} dt`.
pub fn weight_mass(d: usize) -> f64 {
    1.0 / sphere_constant(d)
}

/// Gauss rule for the weight `(1-t²)^{d/2-1}` on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule1D {
    pub d: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadratureRule1D {
    /// `Σ w_i f(t_i)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `n`-point Gauss rule for `(1-t²)^{d/2-1}` by the Golub–Welsch eigenproblem.
pub fn gauss_quadrature(d: usize, n: usize) -> Result<QuadratureRule1D> {
    check_dim(d)?;
    if n == 0 {
        return Err(Error::InvalidArgument("quadrature needs n >= 1".into()));
    }
    let df = d as f64;
    // Monic Gegenbauer recurrence: β_k = k(k+d-2) / ((2k+d-1)(2k+d-3)).
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * (k + df - 2.0) / ((2.0 * k + df - 1.0) * (2.0 * k + df - 3.0))).sqrt()
        })
        .collect();
    let jac = DMatrix::from_fn(n, n, |r, c| {
        if r == c + 1 {
            offdiag[c]
        } else if c == r + 1 {
            offdiag[r]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(jac, f64::EPSILON, 10_000).ok_or(Error::EigenSolve)?;
    let mass = weight_mass(d);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // the spectrum is symmetric about zero; mirror to remove round-off asymmetry
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    if pairs.iter().any(|p| !(p.1 > 0.0) || !p.0.is_finite()) {
        return Err(Error::EigenSolve);
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule1D {
        d,
        nodes,
        weights,
        exact_degree: 2 * n - 1,
    })
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub(crate) fn gauss_legendre_on(rule: &QuadratureRule1D, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(move |(&x, &w)| (mid + half * x, half * w))
}

/// One row of an [`IdentityReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub params: String,
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub tol: f64,
    pub passed: bool,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }
}

pub const DEFAULT_IDENTITY_TOL: f64 = 1e-10;

/// The 21-point grid `-1, -0.9, …, 1`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect()
}

/// Scaled residual `|lhs - rhs| / max(1, scale)`; NaN/inf map to infinity.
fn residual(lhs: f64, rhs: f64, scale: f64) -> f64 {
    let r = (lhs - rhs).abs() / scale.abs().max(1.0);
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

struct Acc {
    identity: &'static str,
    params: String,
    worst: f64,
}

impl Acc {
    fn new(identity: &'static str, params: String) -> Self {
        Self {
            identity,
            params,
            worst: 0.0,
        }
    }

    fn push(&mut self, r: f64) {
        // NaN must register as a failure
        if r.is_nan() || r > self.worst {
            self.worst = if r.is_nan() { f64::INFINITY } else { r };
        }
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            identity: self.identity,
            params: self.params,
            max_residual: self.worst,
        }
    }
}

/// Numerically checks the Jacobi/Gegenbauer identities used by the error
/// analysis, for degrees `ℓ ≤ l_max`, shifts `k, L ≤ 3`, and every `t` in
/// `t_grid`.
///
/// Residuals are `|lhs - rhs| / max(1, scale)`, where `scale` is the sum of
/// absolute values of the terms that were added (or the magnitude of a single
/// evaluation). This is the attainable floating-point accuracy of each side.
pub fn verify_identities(d: usize, l_max: usize, t_grid: &[f64], tol: f64) -> Result<IdentityReport> {
    check_dim(d)?;
    if l_max < 1 {
        return Err(Error::InvalidArgument("l_max must be >= 1".into()));
    }
    for &t in t_grid {
        check_unit_interval(t)?;
    }
    let h = d as f64 / 2.0 - 1.0;
    let mut checks = Vec::new();
    let mut buf_a = Vec::new();
    let mut buf_b = Vec::new();

    // Normalisation at t = 1 and reflection symmetry, for (α, β) = (h+k, h+L).
    for k in 0..=3 {
        for big_l in 0..=3 {
            let idx = JacobiIndex::new(h + k as f64, h + big_l as f64)?;
            let mut max_acc = Acc::new("jacobi-max", format!("alpha={},beta={}", idx.alpha, idx.beta));
            jacobi_all(idx, l_max, 1.0, &mut buf_a);
            for (ell, &p) in buf_a.iter().enumerate() {
                let rhs = pochhammer_ratio(1.0 + idx.alpha, 1.0, ell);
                max_acc.push(residual(p, rhs, rhs));
            }
            checks.push(max_acc.finish());

            let mut minus_acc = Acc::new("jacobi-minus", format!("alpha={},beta={}", idx.alpha, idx.beta));
            for &t in t_grid {
                jacobi_all(idx, l_max, -t, &mut buf_a);
                jacobi_all(idx.swapped(), l_max, t, &mut buf_b);
                for ell in 0..=l_max {
                    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = sign * buf_b[ell];
                    minus_acc.push(residual(buf_a[ell], rhs, buf_a[ell].abs().max(rhs.abs())));
                }
            }
            checks.push(minus_acc.finish());

            let mut cd_acc = Acc::new("christoffel-darboux", format!("alpha={},beta={}", idx.alpha, idx.beta));
            let raised = JacobiIndex::new(idx.alpha + 1.0, idx.beta)?;
            for &t in t_grid {
                jacobi_all(idx, l_max, t, &mut buf_a);
                jacobi_all(raised, l_max, t, &mut buf_b);
                cd_acc.push(christoffel_darboux_residual(idx, &buf_a, &buf_b));
            }
            checks.push(cd_acc.finish());
        }
    }

    // Summed zonal kernel: Σ Z(d,r) P_r^{(d)} = Σ (...) P_r^{(h,h)} = (d)_ℓ/(d/2)_ℓ P_ℓ^{(d/2, d/2-1)}.
    {
        let mut acc = Acc::new("christoffel-darboux-zonal", format!("d={d}"));
        let sym = JacobiIndex::sphere(d);
        let raised = JacobiIndex::new(h + 1.0, h)?;
        let mut buf_z = Vec::new();
        let df = d as f64;
        for &t in t_grid {
            legendre_d_all(d, l_max, t, &mut buf_z);
            jacobi_all(sym, l_max, t, &mut buf_a);
            jacobi_all(raised, l_max, t, &mut buf_b);
            let (mut zsum, mut zabs) = (0.0, 0.0);
            let (mut jsum, mut jabs) = (0.0, 0.0);
            for ell in 0..=l_max {
                let r = ell as f64;
                let zt = dim_harmonics_f64(d, ell) * buf_z[ell];
                zsum += zt;
                zabs += zt.abs();
                let jt = (2.0 * r + df - 1.0) / (df - 1.0) * pochhammer_ratio(df - 1.0, df / 2.0, ell) * buf_a[ell];
                jsum += jt;
                jabs += jt.abs();
                let rhs = pochhammer_ratio(df, df / 2.0, ell) * buf_b[ell];
                let scale = zabs.max(jabs).max(rhs.abs());
                acc.push(residual(zsum, rhs, scale));
                acc.push(residual(jsum, rhs, scale));
            }
        }
        checks.push(acc.finish());
    }

    // Shifted family: α = d/2 - 1 + k, β = d/2 - 1.
    for k in 0..=3 {
        let mut acc = Acc::new("christoffel-darboux-shifted", format!("d={d},k={k}"));
        let idx = JacobiIndex::new(h + k as f64, h)?;
        let raised = JacobiIndex::new(h + k as f64 + 1.0, h)?;
        let df = d as f64;
        let kf = k as f64;
        for &t in t_grid {
            jacobi_all(idx, l_max, t, &mut buf_a);
            jacobi_all(raised, l_max, t, &mut buf_b);
            let (mut sum, mut abs) = (0.0, 0.0);
            for ell in 0..=l_max {
                let r = ell as f64;
                let term = (2.0 * r + df - 1.0 + kf) / (df - 1.0 + kf)
                    * pochhammer_ratio(df - 1.0 + kf, df / 2.0, ell)
                    * buf_a[ell];
                sum += term;
                abs += term.abs();
                let rhs = pochhammer_ratio(df + kf, df / 2.0, ell) * buf_b[ell];
                acc.push(residual(sum, rhs, abs.max(rhs.abs())));
            }
        }
        checks.push(acc.finish());
    }

    // Integrals: ∫ P_ℓ^{(α+L, α)}(t) (1-t²)^α dt with α = d/2 - 1, and the
    // normalised sphere integral of P_ℓ^{(d/2+L, d/2-1)}.
    let rule = gauss_quadrature(d, l_max + 2)?;
    let cst = sphere_constant(d);
    for big_l in 0..=3 {
        let lf = big_l as f64;
        let idx = JacobiIndex::new(h + lf, h)?;
        let mut acc = Acc::new("weighted-jacobi-integral", format!("d={d},L={big_l}"));
        let vals = tabulate(&rule, idx, l_max);
        for ell in 0..=l_max {
            let (q, scale) = weighted_sum(&rule, &vals, ell);
            let rhs = integral_closed_form(h, big_l, ell);
            acc.push(residual(q, rhs, scale.max(rhs.abs())));
        }
        checks.push(acc.finish());

        let idx = JacobiIndex::new(h + 1.0 + lf, h)?;
        let mut acc = Acc::new("sphere-jacobi-integral", format!("d={d},L={big_l}"));
        let vals = tabulate(&rule, idx, l_max);
        for ell in 0..=l_max {
            let (q, scale) = weighted_sum(&rule, &vals, ell);
            let rhs = sphere_integral_closed_form(d, big_l, ell);
            acc.push(residual(cst * q, rhs, (cst * scale).max(rhs.abs())));
        }
        checks.push(acc.finish());
    }

    let passed = checks.iter().all(|c| c.max_residual <= tol);
    Ok(IdentityReport { checks, tol, passed })
}

fn christoffel_darboux_residual(idx: JacobiIndex, vals: &[f64], raised: &[f64]) -> f64 {
    let (a, b) = (idx.alpha, idx.beta);
    let s = a + b + 1.0;
    let mut worst: f64 = 0.0;
    let (mut sum, mut abs) = (0.0, 0.0);
    for (n, &p) in vals.iter().enumerate() {
        let term = (2.0 * n as f64 + s) / s * pochhammer_ratio(s, b + 1.0, n) * p;
        sum += term;
        abs += term.abs();
        let rhs = pochhammer_ratio(a + b + 2.0, b + 1.0, n) * raised[n];
        let r = residual(sum, rhs, abs.max(rhs.abs()));
        if r.is_nan() || r > worst {
            worst = if r.is_nan() { f64::INFINITY } else { r };
        }
    }
    worst
}

fn tabulate(rule: &QuadratureRule1D, idx: JacobiIndex, l_max: usize) -> Vec<Vec<f64>> {
    rule.nodes
        .iter()
        .map(|&t| {
            let mut v = Vec::with_capacity(l_max + 1);
            jacobi_all(idx, l_max, t, &mut v);
            v
        })
        .collect()
}

fn weighted_sum(rule: &QuadratureRule1D, vals: &[Vec<f64>], ell: usize) -> (f64, f64) {
    rule.weights
        .iter()
        .zip(vals)
        .fold((0.0, 0.0), |(s, a), (&w, v)| (s + w * v[ell], a + (w * v[ell]).abs()))
}

/// `2^{2α+1} (L)_ℓ/ℓ! · Γ(α+1)Γ(α+ℓ+1)/Γ(2α+ℓ+2)`.
pub fn integral_closed_form(alpha: f64, big_l: usize, ell: usize) -> f64 {
    if big_l == 0 && ell > 0 {
        return 0.0;
    }
    let lf = big_l as f64;
    let el = ell as f64;
    let ln_poch_over_fact = if ell == 0 { 0.0 } else { ln_pochhammer(lf, ell) - ln_gamma(el + 1.0) };
    ((2.0 * alpha + 1.0) * std::f64::consts::LN_2 + ln_poch_over_fact + ln_gamma(alpha + 1.0) + ln_gamma(alpha + el + 1.0)
        - ln_gamma(2.0 * alpha + el + 2.0))
        .exp()
}

/// `2^{d-1} Γ((d+1)/2)/√π · (L+1)_ℓ/ℓ! · Γ(d/2+ℓ)/Γ(d+ℓ)`.
pub fn sphere_integral_closed_form(d: usize, big_l: usize, ell: usize) -> f64 {
    let df = d as f64;
    let el = ell as f64;
    let lf = big_l as f64;
    ((df - 1.0) * std::f64::consts::LN_2 + ln_gamma((df + 1.0) / 2.0) - 0.5 * PI.ln() + ln_pochhammer(lf + 1.0, ell)
        - ln_gamma(el + 1.0)
        + ln_gamma(df / 2.0 + el)
        - ln_gamma(df + el))
        .exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_examples() {
        let idx = JacobiIndex::new(1.0, 0.0).unwrap();
        assert_eq!(jacobi_eval(idx, 0, 0.3).unwrap(), 1.0);
        assert_relative_eq!(jacobi_eval(idx, 2, 1.0).unwrap(), 3.0, epsilon = 1e-14);
        // (α+1) + (α+β+2)(t-1)/2 at t = 0
        assert_relative_eq!(jacobi_eval(idx, 1, 0.0).unwrap(), 0.5, epsilon = 1e-15);
        let swapped = JacobiIndex::new(0.0, 1.0).unwrap();
        assert_relative_eq!(
            jacobi_eval(swapped, 3, 0.5).unwrap(),
            -jacobi_eval(idx, 3, -0.5).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn jacobi_domain_errors() {
        assert!(JacobiIndex::new(-1.0, 0.0).is_err());
        assert!(JacobiIndex::new(0.0, -1.5).is_err());
        let idx = JacobiIndex::new(0.0, 0.0).unwrap();
        assert!(matches!(jacobi_eval(idx, 2, 1.01), Err(Error::Domain(_))));
        assert!(jacobi_eval(idx, 2, f64::NAN).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_relative_eq!(legendre_d_eval(5, 7, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(legendre_d_eval(3, 1, 0.3).unwrap(), 0.3, epsilon = 1e-15);
        assert_relative_eq!(legendre_d_eval(2, 2, 0.0).unwrap(), -0.5, epsilon = 1e-15);
        assert!(legendre_d_eval(1, 2, 0.0).is_err());
        assert!(legendre_d_eval(2, 2, -1.5).is_err());
    }

    #[test]
    fn legendre_matches_scaled_jacobi() {
        for d in 2..=6 {
            let idx = JacobiIndex::sphere(d);
            for ell in 0..=30 {
                let scale = pochhammer_ratio(1.0, d as f64 / 2.0, ell);
                for &t in &[-1.0, -0.73, 0.0, 0.41, 0.99, 1.0] {
                    let direct = legendre_d_eval(d, ell, t).unwrap();
                    let via = scale * jacobi_eval(idx, ell, t).unwrap();
                    assert!((direct - via).abs() < 1e-12, "d={d} ell={ell} t={t}");
                }
            }
        }
    }

    #[test]
    fn legendre_bounded_by_one() {
        for d in 2..=5 {
            for i in 0..=20 {
                let t = -1.0 + 0.1 * i as f64;
                let mut v = Vec::new();
                legendre_d_all(d, 60, t.clamp(-1.0, 1.0), &mut v);
                assert!(v.iter().all(|p| p.abs() <= 1.0 + 1e-12), "d={d} t={t}");
            }
        }
    }

    #[test]
    fn dim_harmonics_examples() {
        assert_eq!(dim_harmonics(7, 0), 1);
        assert_eq!(dim_harmonics(2, 5), 11);
        assert_eq!(dim_harmonics(3, 2), 9);
        for d in 2..=8 {
            for ell in 0..200 {
                let exact = dim_harmonics(d, ell) as f64;
                assert_relative_eq!(dim_harmonics_f64(d, ell), exact, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn dim_harmonics_matches_gamma_formula() {
        for d in 2..=6 {
            for ell in 1..60 {
                let (df, l) = (d as f64, ell as f64);
                let lg = (2.0 * l + df - 1.0) * (ln_gamma(l + df - 1.0) - ln_gamma(df) - ln_gamma(l + 1.0)).exp();
                assert_relative_eq!(dim_harmonics(d, ell) as f64, lg, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(4, 0), 0);
        assert_eq!(eigenvalue(2, 1), 2);
        assert_eq!(eigenvalue(4, 3), 18);
    }

    #[test]
    fn gauss_masses() {
        for n in [1, 2, 5, 17] {
            let r = gauss_quadrature(2, n).unwrap();
            assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
            let r = gauss_quadrature(3, n).unwrap();
            assert_relative_eq!(r.weights.iter().sum::<f64>(), PI / 2.0, epsilon = 1e-14);
        }
        let r = gauss_quadrature(2, 2).unwrap();
        assert_relative_eq!(r.integrate(|t| t * t), 2.0 / 3.0, epsilon = 1e-14);
        assert!(gauss_quadrature(2, 0).is_err());
    }

    #[test]
    fn gauss_rule_shape_and_exactness() {
        for d in 2..=5 {
            let n = 12;
            let r = gauss_quadrature(d, n).unwrap();
            assert_eq!(r.exact_degree, 2 * n - 1);
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.iter().all(|&t| t > -1.0 && t < 1.0));
            // even moments of (1-t²)^{h}: B((k+1)/2, h+1)
            let h = d as f64 / 2.0 - 1.0;
            for k in 0..=r.exact_degree {
                let q = r.integrate(|t| t.powi(k as i32));
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    let a = (k as f64 + 1.0) / 2.0;
                    (ln_gamma(a) + ln_gamma(h + 1.0) - ln_gamma(a + h + 1.0)).exp()
                };
                assert!((q - exact).abs() <= 1e-12 * exact.abs().max(1e-2), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn orthogonality_under_gauss_rule() {
        for d in 2..=5 {
            let r = gauss_quadrature(d, 32).unwrap();
            let vals: Vec<Vec<f64>> = r
                .nodes
                .iter()
                .map(|&t| {
                    let mut v = Vec::new();
                    legendre_d_all(d, 30, t, &mut v);
                    v
                })
                .collect();
            for l in 0..=30 {
                for m in 0..l {
                    let s: f64 = r.weights.iter().zip(&vals).map(|(w, v)| w * v[l] * v[m]).sum();
                    assert!(s.abs() < 1e-12, "d={d} l={l} m={m} s={s}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for d in 2..=4 {
            for ell in 0..=12 {
                for &t in &[-0.8, -0.1, 0.35, 0.9] {
                    let h = 1e-6;
                    let fd = (legendre_d_eval(d, ell, t + h).unwrap() - legendre_d_eval(d, ell, t - h).unwrap()) / (2.0 * h);
                    let an = legendre_d_derivative(d, ell, t).unwrap();
                    assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "d={d} ell={ell}");
                }
            }
        }
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        for d in 2..=5 {
            let coeffs: Vec<f64> = (0..=200).map(|l| 1.0 / (1.0 + l as f64).powf(1.3)).collect();
            for &t in &[-1.0, -0.5, 0.2, 0.77, 1.0] {
                let mut v = Vec::new();
                legendre_d_all(d, 200, t, &mut v);
                let direct: f64 = coeffs.iter().zip(&v).map(|(c, p)| c * p).sum();
                let cl = clenshaw(d, &coeffs, t);
                assert!((cl - direct).abs() <= 1e-10 * direct.abs().max(1.0), "d={d} t={t}");
            }
        }
    }

    #[test]
    fn identity_examples() {
        let grid = default_t_grid();
        let rep = verify_identities(2, 10, &grid, DEFAULT_IDENTITY_TOL).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
        let zonal = rep.checks.iter().find(|c| c.identity == "christoffel-darboux-zonal").unwrap();
        assert!(zonal.max_residual < 1e-10);

        // degree-0 polynomial identities hold exactly
        let rep0 = verify_identities(2, 1, &[0.7], 0.0);
        assert!(rep0.is_ok());

        // closed form for the weighted integral, d = 2 (α = 0), L = 1, ℓ = 4
        let rule = gauss_quadrature(2, 10).unwrap();
        let idx = JacobiIndex::new(1.0, 0.0).unwrap();
        let q = rule.integrate(|t| jacobi_eval(idx, 4, t).unwrap());
        let closed = integral_closed_form(0.0, 1, 4);
        assert!((q - closed).abs() < 1e-12, "{q} vs {closed}");
    }

    #[test]
    fn identity_rejects_bad_grid() {
        assert!(verify_identities(2, 5, &[1.5], 1e-10).is_err());
        assert!(verify_identities(2, 0, &[0.0], 1e-10).is_err());
    }

    #[test]
    fn clenshaw_plan_matches_scalar() {
        let coeffs: Vec<f64> = (0..80).map(|l| 1.0 / (1.0 + l as f64).powi(2)).collect();
        for d in [2, 3, 5] {
            let plan = ClenshawPlan::new(d, coeffs.clone());
            let ts: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
            let ws: Vec<f64> = (0..21).map(|i| 0.5 + i as f64).collect();
            let mut direct = 0.0;
            for (&t, &w) in ts.iter().zip(&ws) {
                assert_eq!(plan.eval(t), clenshaw(d, &coeffs, t));
                direct += w * clenshaw(d, &coeffs, t);
            }
            assert!((plan.weighted_sum(&ts, &ws) - direct).abs() < 1e-12 * direct.abs());
        }
    }
}
