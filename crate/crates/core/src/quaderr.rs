//! Worst-case errors of cubature rules, Gram moments and design checks.
//!
//! For a rule `Q[X, ω]` and a zonal reproducing kernel `K = Σ c_ℓ P_ℓ^{(d)}`,
//! the squared worst-case error is `Σ_{i,j} ω_i ω_j K̃(⟨x_i, x_j⟩)`, where `K̃`
//! drops the constant term. Grouping by degree gives `Σ_ℓ (c_ℓ / Z(d, ℓ)) m_ℓ`
//! with the Gram moments `m_ℓ = Σ_{i,j} ω_i ω_j Z(d, ℓ) P_ℓ^{(d)}(⟨x_i, x_j⟩)`,
//! which are nonnegative because zonal Legendre polynomials are positive
//! definite. Both groupings are implemented and serve as each other's check.

use std::fmt;

use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::kernel::{build_coeffs, kernel_value_unchecked, kernel_weighted_sum, CoeffTable, SpaceKind, SpaceSpec};
use crate::pointset::PointSet;
use crate::reduce::{row_sum, row_sum_vec, tree_sum};
use crate::specfun::{dim_harmonics_f64, eigenvalue_f64, legendre_d_all, legendre_d_eval};

/// How a [`WceReport`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcePath {
    PairwiseKernel,
    PerDegreeMoments,
    HeatOracle,
}

impl fmt::Display for WcePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WcePath::PairwiseKernel => "pairwise-kernel",
            WcePath::PerDegreeMoments => "per-degree-moments",
            WcePath::HeatOracle => "heat-oracle",
        })
    }
}

/// Truncated squared worst-case error with an enclosure of the true value:
/// `wce² ∈ [value_sq - tail_bound_sq, value_sq + tail_bound_sq]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WceReport {
    pub space: SpaceSpec,
    pub value: f64,
    pub value_sq: f64,
    /// Truncation degree.
    pub degree: usize,
    pub tail_bound_sq: f64,
    pub path: WcePath,
}

impl WceReport {
    fn new(space: SpaceSpec, value_sq: f64, degree: usize, tail_bound_sq: f64, path: WcePath) -> Self {
        Self {
            space,
            value: value_sq.max(0.0).sqrt(),
            value_sq,
            degree,
            tail_bound_sq,
            path,
        }
    }

    /// Upper bound on the true worst-case error.
    pub fn upper(&self) -> f64 {
        (self.value_sq + self.tail_bound_sq).max(0.0).sqrt()
    }
}

/// `m_ℓ` for a single degree.
pub fn gram_moment(x: &PointSet, ell: usize) -> f64 {
    let n = x.len();
    let d = x.d();
    let w = x.weights();
    let s = row_sum(n, |i| {
        let mut acc = w[i] * w[i];
        for j in i + 1..n {
            // inner() is clamped to [-1, 1]
            acc += 2.0 * w[i] * w[j] * legendre_d_eval(d, ell, x.inner(i, j)).unwrap_or(f64::NAN);
        }
        acc
    });
    dim_harmonics_f64(d, ell) * s
}

/// `m_0, …, m_L` in one pass over the pairs.
pub fn gram_moments(x: &PointSet, degree: usize) -> Vec<f64> {
    let n = x.len();
    let d = x.d();
    let w = x.weights();
    let raw = row_sum_vec(n, degree + 1, |i, acc| {
        let mut buf = Vec::with_capacity(degree + 1);
        for a in acc.iter_mut() {
            *a += w[i] * w[i];
        }
        for j in i + 1..n {
            legendre_d_all(d, degree, x.inner(i, j), &mut buf);
            let f = 2.0 * w[i] * w[j];
            for (a, p) in acc.iter_mut().zip(&buf) {
                *a += f * p;
            }
        }
    });
    raw.into_iter()
        .enumerate()
        .map(|(l, g)| dim_harmonics_f64(d, l) * g)
        .collect()
}

fn gram_factor(x: &PointSet) -> f64 {
    let a = x.abs_weight_sum();
    a * a
}

fn check_dims(x: &PointSet, space: &SpaceSpec) -> Result<()> {
    if x.d() != space.d() {
        return Err(Error::InvalidArgument(format!(
            "point set lives on S^{} but the space is on S^{}",
            x.d(),
            space.d()
        )));
    }
    Ok(())
}

/// Pairwise-kernel worst-case error with a prepared constant-free table.
pub fn wce_with_table(x: &PointSet, table: &CoeffTable) -> WceReport {
    let n = x.len();
    let w = x.weights();
    let diag = kernel_value_unchecked(table, 1.0);
    let value_sq = row_sum(n, |i| {
        let ts: Vec<f64> = (i + 1..n).map(|j| x.inner(i, j)).collect();
        w[i] * w[i] * diag + 2.0 * w[i] * kernel_weighted_sum(table, &ts, &w[i + 1..])
    });
    WceReport::new(
        *table.space(),
        value_sq,
        table.degree(),
        gram_factor(x) * table.tail_at_one(),
        WcePath::PairwiseKernel,
    )
}

/// Worst-case error by pairwise evaluation of the truncated kernel `K̃_L`.
pub fn wce(x: &PointSet, space: &SpaceSpec, degree: usize) -> Result<WceReport> {
    check_dims(x, space)?;
    let table = build_coeffs(space, degree, false)?;
    Ok(wce_with_table(x, &table))
}

/// Per-degree terms `c_ℓ m_ℓ / Z(d, ℓ)` for `ℓ = 1..=L`; entry 0 is zero.
pub fn degree_terms(table: &CoeffTable, moments: &[f64]) -> Vec<f64> {
    let d = table.space().d();
    let mut terms = vec![0.0; table.degree() + 1];
    for l in 1..=table.degree() {
        terms[l] = table.coeffs()[l] * moments[l] / dim_harmonics_f64(d, l);
    }
    terms
}

/// Worst-case error from precomputed Gram moments (`moments.len() > L`).
pub fn wce_from_moments(x: &PointSet, table: &CoeffTable, moments: &[f64]) -> WceReport {
    let terms = degree_terms(table, moments);
    WceReport::new(
        *table.space(),
        tree_sum(&terms),
        table.degree(),
        gram_factor(x) * table.tail_at_one(),
        WcePath::PerDegreeMoments,
    )
}

/// Worst-case error through the Gram moments, degree by degree.
pub fn wce_moments(x: &PointSet, space: &SpaceSpec, degree: usize) -> Result<WceReport> {
    check_dims(x, space)?;
    let table = build_coeffs(space, degree, false)?;
    let moments = gram_moments(x, degree);
    Ok(wce_from_moments(x, &table, &moments))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub t: usize,
    /// `m_1, …, m_t`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub is_design: bool,
}

/// Checks whether the rule integrates all polynomials of degree `≤ t` exactly,
/// i.e. whether `m_1 = … = m_t = 0`. Default `tol` is `1e-10 · N`.
pub fn validate_design(x: &PointSet, t: usize, tol: Option<f64>) -> Result<DesignReport> {
    if t < 1 {
        return Err(Error::InvalidArgument("design strength t must be >= 1".into()));
    }
    let tol = tol.unwrap_or(1e-10 * x.len() as f64);
    let m = gram_moments(x, t);
    let residuals = m[1..].to_vec();
    let max_residual = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(DesignReport {
        t,
        residuals,
        max_residual,
        tol,
        is_design: max_residual <= tol,
    })
}

/// A certified lower bound on the squared worst-case error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub ell_star: usize,
    pub bound_sq: f64,
}

/// Largest single degree term `c_ℓ m_ℓ / Z(d, ℓ)`; every term is nonnegative for
/// positive weights, so the maximum is below the full sum.
pub fn certificate_from_moments(x: &PointSet, table: &CoeffTable, moments: &[f64]) -> Result<Certificate> {
    if let Some((index, &value)) = x.weights().iter().enumerate().find(|(_, &w)| w < 0.0) {
        return Err(Error::SignedWeights { index, value });
    }
    let terms = degree_terms(table, moments);
    let mut best = Certificate { ell_star: 1, bound_sq: 0.0 };
    for (l, &v) in terms.iter().enumerate().skip(1) {
        if v > best.bound_sq {
            best = Certificate { ell_star: l, bound_sq: v };
        }
    }
    Ok(best)
}

pub fn lower_certificate(x: &PointSet, space: &SpaceSpec, degree: usize) -> Result<Certificate> {
    check_dims(x, space)?;
    let table = build_coeffs(space, degree, false)?;
    let moments = gram_moments(x, degree);
    certificate_from_moments(x, &table, &moments)
}

/// Discretisation settings of the Laplace-domain oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatQuadrature {
    /// Gauss–Legendre nodes per geometric panel.
    pub nodes_per_panel: usize,
    /// Maximum number of panel-count doublings.
    pub max_doublings: usize,
    /// Relative target for each truncated-domain remainder.
    pub remainder_target: f64,
    /// Relative change that stops the doubling.
    pub convergence: f64,
}

impl Default for HeatQuadrature {
    fn default() -> Self {
        Self {
            nodes_per_panel: 24,
            max_doublings: 8,
            remainder_target: 1e-8,
            convergence: 1e-9,
        }
    }
}

/// Sobolev worst-case error via the heat kernel:
/// `wce² = Γ(s)^{-1} ∫_0^∞ e^{-t} t^{s-1} h(t) dt`, with
/// `h(t) = Σ_{ℓ=1}^{L} e^{-λ_ℓ t} m_ℓ`.
///
/// The integral is cut to `[t_min, t_max]`; both cut remainders are bounded
/// (`h(0) t_min^s / Γ(s+1)` and `h(t_max) Q(s, t_max)`, `h` being decreasing)
/// and added to `tail_bound_sq` together with the degree-truncation tail.
pub fn wce_heat_oracle(x: &PointSet, space: &SpaceSpec, l_heat: usize, quad: &HeatQuadrature) -> Result<WceReport> {
    check_dims(x, space)?;
    let s = match space.kind() {
        SpaceKind::Sobolev { s } => s,
        SpaceKind::LogSobolev { .. } => {
            return Err(Error::InvalidArgument("heat oracle supports Sobolev spaces only".into()))
        }
    };
    if l_heat < 1 {
        return Err(Error::InvalidArgument("L_heat must be >= 1".into()));
    }
    let table = build_coeffs(space, l_heat, false)?;
    let d = x.d();
    let moments = gram_moments(x, l_heat);
    let lam: Vec<f64> = (1..=l_heat).map(|l| eigenvalue_f64(d, l)).collect();
    let m = &moments[1..];
    let h = |t: f64| -> f64 { lam.iter().zip(m).map(|(l, mm)| mm * (-l * t).exp()).sum() };
    let h_abs = |t: f64| -> f64 { lam.iter().zip(m).map(|(l, mm)| mm.abs() * (-l * t).exp()).sum() };
    let tail = gram_factor(x) * table.tail_at_one();

    let h0 = h_abs(0.0);
    if h0 == 0.0 {
        return Ok(WceReport::new(*space, 0.0, l_heat, tail, WcePath::HeatOracle));
    }
    let gs = gamma(s);
    let gs1 = gamma(s + 1.0);
    let integrand = |t: f64| (-t).exp() * t.powf(s - 1.0) * h(t) / gs;
    let gl = crate::specfun::gauss_quadrature(2, quad.nodes_per_panel)?;

    let mut t_min = 1e-2 / (1.0 + lam[l_heat - 1]);
    let mut t_max: f64 = 40.0;
    for _ in 0..64 {
        let value = integrate_geometric(&integrand, &gl, t_min, t_max, quad)?;
        let r_lo = h0 * t_min.powf(s) / gs1;
        let r_hi = h_abs(t_max) * gamma_ur(s, t_max);
        let target = quad.remainder_target * value.abs();
        let lo_ok = r_lo <= target;
        let hi_ok = r_hi <= target;
        if lo_ok && hi_ok {
            return Ok(WceReport::new(*space, value, l_heat, tail + r_lo + r_hi, WcePath::HeatOracle));
        }
        if !lo_ok {
            t_min *= 1e-2;
        }
        if !hi_ok {
            t_max *= 2.0;
        }
        if t_min < 1e-280 || t_max > 1e6 {
            break;
        }
    }
    Err(Error::HeatRemainder(format!(
        "could not bound the truncated Laplace integral for {space} at L = {l_heat}"
    )))
}

fn integrate_geometric<F: Fn(f64) -> f64>(
    f: &F,
    gl: &crate::specfun::QuadratureRule1D,
    t_min: f64,
    t_max: f64,
    quad: &HeatQuadrature,
) -> Result<f64> {
    let base = (t_max / t_min).log2().ceil().max(1.0) as usize;
    let mut prev = f64::NAN;
    for k in 0..=quad.max_doublings {
        let panels = base << k;
        let ratio = (t_max / t_min).powf(1.0 / panels as f64);
        let parts: Vec<f64> = (0..panels)
            .map(|p| {
                let a = t_min * ratio.powi(p as i32);
                let b = if p + 1 == panels { t_max } else { a * ratio };
                crate::specfun::gauss_legendre_on(gl, a, b).map(|(t, w)| w * f(t)).sum()
            })
            .collect();
        let value = tree_sum(&parts);
        if k > 0 && (value - prev).abs() <= quad.convergence * value.abs() {
            return Ok(value);
        }
        prev = value;
    }
    Err(Error::Quadrature(format!(
        "Laplace integral did not settle after {} doublings",
        quad.max_doublings
    )))
}
