//! Bump-function lower bounds on the worst-case error of arbitrary rules.
//!
//! Caps of radius `β` that contain no node carry a scaled bump supported in the
//! annulus `β/2 ≤ θ ≤ β` around their centre. The sum `f_N` of these bumps
//! vanishes at every node, so `wce ≥ I(f_N) / ‖f_N‖`. The norm is assembled
//! from Funk–Hecke coefficients up to degree `L` plus a certified remainder.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::kernel::{weight, SpaceKind, SpaceSpec};
use crate::pointset::{dot, greedy_packing, Packing, PointSet};
use crate::reduce::{row_sum, row_sum_vec};
use crate::specfun::{
    dim_harmonics_f64, eigenvalue_f64, gauss_legendre_on, gauss_quadrature, legendre_d_all, ClenshawPlan,
    QuadratureRule1D,
};

/// Nodes per Gauss–Legendre panel in the angular quadratures.
const PANEL_NODES: usize = 32;
/// Coefficients must agree to this (relative to `max |â_ℓ|`) under node doubling.
const COEFF_TOL: f64 = 1e-10;
/// Upper limit for the automatic degree search.
pub const MAX_AUTO_DEGREE: usize = 32_000;
/// Default bound on `remainder / norm²`.
pub const DEFAULT_REMAINDER_TOL: f64 = 1e-9;
/// A node at inner product `≥ cos β - CAP_SLACK` counts as inside a cap.
const CAP_SLACK: f64 = 1e-12;

/// `Φ(u) = exp(1 - 1/(1-u²))` on `|u| < 1`, zero elsewhere.
pub fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Affine map sending `[cos β, cos(β/2)]` onto `[-1, 1]`: `(u0 + slope·t)`.
fn bump_map(beta: f64) -> (f64, f64) {
    let lo = beta.cos();
    let hi = (0.5 * beta).cos();
    // hi - lo = 2 sin(3β/4) sin(β/4)
    let den = 2.0 * (0.75 * beta).sin() * (0.25 * beta).sin();
    (-(hi + lo) / den, 2.0 / den)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= PI / 2.0) {
        return Err(Error::Domain(format!("cap radius {beta} outside (0, π/2]")));
    }
    Ok(())
}

/// `Φ_N(t) = Φ((2t - cos(β/2) - cos β) / (2 sin(3β/4) sin(β/4)))`.
pub fn bump_scaled(beta: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    let (u0, slope) = bump_map(beta);
    Ok(bump(u0 + slope * t))
}

fn normaliser(d: usize) -> f64 {
    let df = d as f64;
    (ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0)).exp() / PI.sqrt()
}

/// Composite angular rule on `[β/2, β]`: `(θ, weight)` pairs.
fn angular_nodes(beta: f64, quad_n: usize, gl: &QuadratureRule1D) -> Vec<(f64, f64)> {
    let panels = quad_n.div_ceil(PANEL_NODES).max(1);
    let width = 0.5 * beta / panels as f64;
    (0..panels)
        .flat_map(|p| {
            let a = 0.5 * beta + p as f64 * width;
            gauss_legendre_on(gl, a, a + width).collect::<Vec<_>>()
        })
        .collect()
}

fn coeffs_once(beta: f64, d: usize, degree: usize, quad_n: usize, gl: &QuadratureRule1D) -> Vec<f64> {
    let (u0, slope) = bump_map(beta);
    let cd = normaliser(d);
    // t = cos θ, dt (1-t²)^{d/2-1} = sin^{d-1}θ dθ
    let nodes: Vec<(f64, f64)> = angular_nodes(beta, quad_n, gl)
        .into_iter()
        .map(|(th, w)| {
            let t = th.cos();
            (t, cd * w * th.sin().powi(d as i32 - 1) * bump(u0 + slope * t))
        })
        .collect();
    row_sum_vec(nodes.len(), degree + 1, |i, acc| {
        let (t, f) = nodes[i];
        let mut p = Vec::with_capacity(degree + 1);
        legendre_d_all(d, degree, t, &mut p);
        for (a, pl) in acc.iter_mut().zip(&p) {
            *a += f * pl;
        }
    })
}

/// Default node count for [`funk_hecke_coeffs`]: resolves both the bump and the
/// oscillation of `P_L` across the annulus.
pub fn default_quad_nodes(beta: f64, degree: usize) -> usize {
    let panels = 32 + (degree as f64 * beta / 16.0).ceil() as usize;
    (PANEL_NODES * panels).max((degree + 21).div_ceil(2)).next_multiple_of(PANEL_NODES)
}

/// Funk–Hecke coefficients `â_0, …, â_L` of `Φ_N`, so that
/// `Φ_N(⟨x, y⟩) = Σ_ℓ â_ℓ Z(d, ℓ) P_ℓ^{(d)}(⟨x, y⟩)`.
///
/// Each coefficient is computed with `quad_n` and `2 quad_n` nodes; the finer
/// result is returned if the two agree to `1e-10 · max |â_ℓ|`.
pub fn funk_hecke_coeffs(beta: f64, d: usize, degree: usize, quad_n: usize) -> Result<Vec<f64>> {
    check_beta(beta)?;
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
    }
    if 2 * quad_n < degree + 21 {
        return Err(Error::InvalidArgument(format!(
            "quad_n = {quad_n} too small for degree {degree}"
        )));
    }
    let gl = gauss_quadrature(2, PANEL_NODES)?;
    let coarse = coeffs_once(beta, d, degree, quad_n, &gl);
    let fine = coeffs_once(beta, d, degree, 2 * quad_n, &gl);
    let scale = fine.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let diff = coarse
        .iter()
        .zip(&fine)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if diff > COEFF_TOL * scale {
        return Err(Error::Quadrature(format!(
            "Funk–Hecke coefficients moved by {diff:.3e} (scale {scale:.3e}) under node doubling"
        )));
    }
    Ok(fine)
}

/// Truncated Taylor series `Σ_j c_j h^j`.
type Jet = Vec<f64>;

fn jet_recip(a: &[f64]) -> Jet {
    let mut r = vec![0.0; a.len()];
    r[0] = 1.0 / a[0];
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|i| a[i] * r[k - i]).sum();
        r[k] = -s * r[0];
    }
    r
}

fn jet_exp(a: &[f64]) -> Jet {
    let mut e = vec![0.0; a.len()];
    e[0] = a[0].exp();
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|i| i as f64 * a[i] * e[k - i]).sum();
        e[k] = s / k as f64;
    }
    e
}

/// Taylor jet of order `n` of `Φ(u0 + slope·t)` at `t0`.
fn bump_jet(u0: f64, slope: f64, t0: f64, n: usize) -> Jet {
    let u = u0 + slope * t0;
    let mut q = vec![0.0; n + 1];
    if u.abs() >= 1.0 {
        return q;
    }
    // 1 - u(t0+h)² = (1-u²) - 2u·slope·h - slope²h²
    q[0] = 1.0 - u * u;
    if n >= 1 {
        q[1] = -2.0 * u * slope;
    }
    if n >= 2 {
        q[2] = -slope * slope;
    }
    let r = jet_recip(&q);
    let lead = 1.0 - r[0];
    if lead.exp() == 0.0 {
        return vec![0.0; n + 1];
    }
    let arg: Jet = std::iter::once(lead).chain(r[1..].iter().map(|x| -x)).collect();
    jet_exp(&arg)
}

/// Zonal Laplace–Beltrami operator `(1-t²) g'' - d t g'` on a jet at `t0`;
/// the result has order two less.
fn jet_laplacian(g: &[f64], d: usize, t0: f64) -> Jet {
    let n = g.len() - 1;
    let df = d as f64;
    let g1 = |j: usize| (j + 1) as f64 * g[j + 1];
    let g2 = |j: usize| ((j + 2) * (j + 1)) as f64 * g[j + 2];
    (0..=n - 2)
        .map(|j| {
            let mut v = (1.0 - t0 * t0) * g2(j) - df * t0 * g1(j);
            if j >= 1 {
                v += -2.0 * t0 * g2(j - 1) - df * g1(j - 1);
            }
            if j >= 2 {
                v -= g2(j - 2);
            }
            v
        })
        .collect()
}

fn laplacian_power_once(beta: f64, d: usize, k: usize, quad_n: usize, gl: &QuadratureRule1D) -> f64 {
    let (u0, slope) = bump_map(beta);
    let nodes = angular_nodes(beta, quad_n, gl);
    let vals: Vec<f64> = nodes
        .iter()
        .map(|&(th, w)| {
            let t = th.cos();
            let mut jet = bump_jet(u0, slope, t, 2 * k);
            for _ in 0..k {
                jet = jet_laplacian(&jet, d, t);
            }
            w * th.sin().powi(d as i32 - 1) * jet[0] * jet[0]
        })
        .collect();
    normaliser(d) * crate::reduce::tree_sum(&vals)
}

/// `‖Δ^k Φ_N(⟨·, y⟩)‖²` in `L²` of the normalised surface measure, with a
/// node-doubling check at relative `1e-10`.
pub fn laplacian_power_norm_sq(beta: f64, d: usize, k: usize, quad_n: usize) -> Result<f64> {
    check_beta(beta)?;
    let gl = gauss_quadrature(2, PANEL_NODES)?;
    let coarse = laplacian_power_once(beta, d, k, quad_n, &gl);
    let fine = laplacian_power_once(beta, d, k, 2 * quad_n, &gl);
    if !fine.is_finite() || (coarse - fine).abs() > COEFF_TOL * fine.abs() {
        return Err(Error::Quadrature(format!(
            "‖Δ^{k} Φ_N‖² unsettled: {coarse:.6e} vs {fine:.6e}"
        )));
    }
    Ok(fine)
}

/// Starting truncation degree when none is given. For the rougher spaces the
/// coefficient remainder is then a fraction of a percent of the norm,
/// independently of `β`; smoother spaces double it as needed.
pub fn witness_degree(beta: f64) -> usize {
    (300.0 / beta).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessOptions {
    /// Fail when the degree remainder exceeds this fraction of `norm²`.
    pub remainder_tol: f64,
    /// Candidate pool size per cap in the greedy packing.
    pub candidates_per_cap: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self {
            remainder_tol: DEFAULT_REMAINDER_TOL,
            candidates_per_cap: 10,
        }
    }
}

/// A certified lower bound `witness = integral / norm ≤ wce`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoolingWitness {
    /// Node-free caps actually used.
    pub packing: Packing,
    pub beta: f64,
    /// `â_0, …, â_L`.
    pub coeffs: Vec<f64>,
    pub integral: f64,
    /// Upper bound on `‖f_N‖`, remainder included.
    pub norm: f64,
    /// Certified bound on the degrees above `L` in `norm²`.
    pub remainder_sq: f64,
    /// Power of the Laplacian used for the remainder.
    pub laplacian_power: usize,
    pub witness: f64,
    /// Largest `f_N(x_i)` over the nodes.
    pub max_node_value: f64,
    pub valid: bool,
}

impl FoolingWitness {
    pub fn kept(&self) -> usize {
        self.packing.centers.len()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Greedy packing of `2M` caps with the occupied ones removed.
pub fn free_caps(x: &PointSet, m: usize, seed: u64, candidates_per_cap: usize) -> Result<Packing> {
    let total = 2 * m;
    let packing = greedy_packing(x.d(), total, candidates_per_cap * total, seed)?;
    let cut = packing.beta.cos() - CAP_SLACK;
    let centers: Vec<Vec<f64>> = packing
        .centers
        .into_iter()
        .filter(|y| x.points().all(|p| dot(p, y) < cut))
        .collect();
    if centers.is_empty() {
        return Err(Error::NoFreeCap);
    }
    Ok(Packing {
        d: packing.d,
        centers,
        beta: packing.beta,
    })
}

/// Witness with truncation degree `L` and default options.
pub fn build_witness(x: &PointSet, space: &SpaceSpec, m: usize, degree: usize, seed: u64) -> Result<FoolingWitness> {
    build_witness_with(x, space, m, Some(degree), seed, &WitnessOptions::default())
}

/// Witness; `degree = None` picks [`witness_degree`] of the achieved `β`.
pub fn build_witness_with(
    x: &PointSet,
    space: &SpaceSpec,
    m: usize,
    degree: Option<usize>,
    seed: u64,
    opts: &WitnessOptions,
) -> Result<FoolingWitness> {
    if x.d() != space.d() {
        return Err(Error::InvalidArgument(format!(
            "point set lives on S^{} but the space is on S^{}",
            x.d(),
            space.d()
        )));
    }
    if m < 1 {
        return Err(Error::InvalidArgument("M must be >= 1".into()));
    }
    let packing = free_caps(x, m, seed, opts.candidates_per_cap)?;
    let beta = packing.beta.min(PI / 2.0);
    let caps = Packing { beta, ..packing };
    if let Some(degree) = degree {
        return witness_on_caps(x, space, caps, degree, opts);
    }
    // Automatic degree: double until the remainder fits the budget.
    let mut degree = witness_degree(beta);
    loop {
        match witness_on_caps(x, space, caps.clone(), degree, opts) {
            Err(Error::InsufficientDecay { .. }) if 2 * degree <= MAX_AUTO_DEGREE => degree *= 2,
            r => return r,
        }
    }
}

/// Witness for a given set of node-free caps.
pub fn witness_on_caps(
    x: &PointSet,
    space: &SpaceSpec,
    caps: Packing,
    degree: usize,
    opts: &WitnessOptions,
) -> Result<FoolingWitness> {
    let d = space.d();
    let beta = caps.beta;
    if degree < 1 {
        return Err(Error::InvalidArgument("truncation degree must be >= 1".into()));
    }
    let quad_n = default_quad_nodes(beta, degree);
    let coeffs = funk_hecke_coeffs(beta, d, degree, quad_n)?;
    let kept = caps.centers.len();
    let kf = kept as f64;

    // ‖f_N‖² = Σ_ℓ â_ℓ² w_ℓ Z_ℓ Σ_{i,j} P_ℓ(⟨y_i, y_j⟩)
    let b: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(l, a)| a * a * weight(space, l) * dim_harmonics_f64(d, l))
        .collect();
    let diag: f64 = b.iter().sum();
    let plan = ClenshawPlan::new(d, b);
    let y = &caps.centers;
    let ones = vec![1.0; kept];
    let truncated = row_sum(kept, |i| {
        let ts: Vec<f64> = (i + 1..kept).map(|j| dot(&y[i], &y[j]).clamp(-1.0, 1.0)).collect();
        diag + 2.0 * plan.weighted_sum(&ts, &ones[i + 1..])
    });

    // Degrees above L: w_ℓ ≤ (w_{L+1}/λ_{L+1}^{2k}) λ_ℓ^{2k}, and the bumps have
    // disjoint supports, so Σ_{ℓ>L} λ^{2k} â² Z G_ℓ ≤ ‖Δ^k f_N‖² = K ‖Δ^k Φ_N‖².
    let k_min = match space.kind() {
        SpaceKind::LogSobolev { gamma } => ((d as f64 / 2.0 + 2.0 * gamma) / 2.0).ceil() as usize,
        SpaceKind::Sobolev { s } => (s / 2.0).ceil() as usize,
    }
    .max(1);
    let lam = eigenvalue_f64(d, degree + 1);
    let w_next = weight(space, degree + 1);
    let mut best: Option<(f64, usize)> = None;
    for k in k_min..=k_min + 6 {
        let Ok(dk) = laplacian_power_norm_sq(beta, d, k, quad_n) else {
            continue;
        };
        let r = kf * dk * (w_next.ln() - 2.0 * k as f64 * lam.ln()).exp();
        if r.is_finite() && best.is_none_or(|(b, _)| r < b) {
            best = Some((r, k));
        }
    }
    let (remainder_sq, laplacian_power) =
        best.ok_or_else(|| Error::Quadrature("no Laplacian power could be integrated".into()))?;
    if remainder_sq > opts.remainder_tol * truncated {
        return Err(Error::InsufficientDecay {
            remainder: remainder_sq,
            limit: opts.remainder_tol * truncated,
        });
    }
    let norm_sq = truncated + remainder_sq;
    let norm = norm_sq.sqrt();
    let integral = kf * coeffs[0];

    let (u0, slope) = bump_map(beta);
    let max_node_value = x
        .points()
        .map(|p| y.iter().map(|c| bump(u0 + slope * dot(p, c))).sum::<f64>())
        .fold(0.0, f64::max);
    let separated = kept < 2 || caps.min_center_angle() >= 2.0 * beta - 1e-12;
    let cut = beta.cos() - CAP_SLACK;
    let empty = y.iter().all(|c| x.points().all(|p| dot(p, c) < cut));
    let witness = integral / norm;
    Ok(FoolingWitness {
        packing: caps,
        beta,
        coeffs,
        integral,
        norm,
        remainder_sq,
        laplacian_power,
        witness,
        max_node_value,
        valid: separated && empty && max_node_value <= 1e-12 && witness >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{random_uniform, spiral_points};
    use crate::quaderr::wce;
    use approx::assert_relative_eq;

    #[test]
    fn bump_examples() {
        for &beta in &[0.1, 0.5, PI / 2.0] {
            let mid = 0.5 * ((0.5 * beta).cos() + beta.cos());
            assert_relative_eq!(bump_scaled(beta, mid).unwrap(), 1.0, epsilon = 1e-12);
            assert_eq!(bump_scaled(beta, beta.cos()).unwrap(), 0.0);
            assert_eq!(bump_scaled(beta, (0.5 * beta).cos()).unwrap(), 0.0);
            assert_eq!(bump_scaled(beta, 1.0).unwrap(), 0.0);
        }
        let beta = PI / 2.0;
        let (lo, hi) = (beta.cos(), (0.5 * beta).cos());
        let t = 0.5 * (lo + hi) + 0.25 * (hi - lo);
        assert_relative_eq!(bump_scaled(beta, t).unwrap(), (-1.0f64 / 3.0).exp(), epsilon = 1e-12);
        assert!(bump_scaled(0.0, 0.5).is_err());
        assert!(bump_scaled(1.6, 0.5).is_err());
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(0.0), 1.0);
    }

    #[test]
    fn jets_match_finite_differences() {
        let beta = 0.5;
        let (u0, slope) = bump_map(beta);
        let t0 = 0.5 * ((0.5 * beta).cos() + beta.cos()) + 0.01;
        let jet = bump_jet(u0, slope, t0, 4);
        let g = |t: f64| bump(u0 + slope * t);
        let h = 1e-4;
        assert_relative_eq!(jet[0], g(t0), max_relative = 1e-14);
        let d1 = (g(t0 + h) - g(t0 - h)) / (2.0 * h);
        assert_relative_eq!(jet[1], d1, max_relative = 1e-5);
        let d2 = (g(t0 + h) - 2.0 * g(t0) + g(t0 - h)) / (h * h);
        assert_relative_eq!(jet[2], d2 / 2.0, max_relative = 1e-4);
        let lap = jet_laplacian(&jet, 2, t0);
        assert_relative_eq!(lap[0], (1.0 - t0 * t0) * d2 - 2.0 * t0 * d1, max_relative = 1e-4);
    }

    #[test]
    fn coefficients_reconstruct_the_bump() {
        // the series converges like exp(-c sqrt(ℓβ)): at L = 400 the sup error
        // is still about 1e-3, so the 1e-6 level needs L = 2000
        let beta = 0.5;
        let degree = 2000;
        let a = funk_hecke_coeffs(beta, 2, degree, default_quad_nodes(beta, degree)).unwrap();
        assert!(a[0] > 0.0);
        let b: Vec<f64> = a.iter().enumerate().map(|(l, x)| x * dim_harmonics_f64(2, l)).collect();
        let mut err = 0.0f64;
        for i in 0..=400 {
            let t = -1.0 + i as f64 / 200.0;
            err = err.max((crate::specfun::clenshaw(2, &b, t) - bump_scaled(beta, t).unwrap()).abs());
        }
        assert!(err < 1e-6, "sup error {err:e}");
    }

    #[test]
    fn coefficient_mass_and_decay() {
        for d in [2, 3, 4] {
            let beta: f64 = 0.7;
            // â_0 = c_d ∫ Φ_N (1-t²)^{d/2-1} dt, by an independent t-quadrature
            let gl = gauss_quadrature(2, 64).unwrap();
            let (lo, hi) = (beta.cos(), (0.5 * beta).cos());
            let mass: f64 = (0..64)
                .map(|p| {
                    let a = lo + (hi - lo) * p as f64 / 64.0;
                    gauss_legendre_on(&gl, a, a + (hi - lo) / 64.0)
                        .map(|(t, w)| w * bump_scaled(beta, t).unwrap() * (1.0 - t * t).powf(d as f64 / 2.0 - 1.0))
                        .sum::<f64>()
                })
                .sum::<f64>()
                * normaliser(d);
            let a = funk_hecke_coeffs(beta, d, 3000, default_quad_nodes(beta, 3000)).unwrap();
            assert_relative_eq!(a[0], mass, max_relative = 1e-10);
            assert!(a[2990..].iter().all(|x| x.abs() <= 1e-12), "d={d}");
        }
    }

    #[test]
    fn laplacian_norms_match_parseval() {
        let beta = 0.8;
        let degree = 2500;
        for d in [2, 3] {
            let a = funk_hecke_coeffs(beta, d, degree, default_quad_nodes(beta, degree)).unwrap();
            for k in 0..=1 {
                let spectral: f64 = a
                    .iter()
                    .enumerate()
                    .map(|(l, x)| eigenvalue_f64(d, l).powi(2 * k as i32) * x * x * dim_harmonics_f64(d, l))
                    .sum();
                let direct = laplacian_power_norm_sq(beta, d, k, 2048).unwrap();
                assert_relative_eq!(direct, spectral, max_relative = 1e-6);
            }
        }
        // 40-digit symbolic differentiation and adaptive quadrature, d = 2
        let reference = [3875.581_827_934_568, 2_543_151_731_408.315];
        for (k, r) in reference.iter().enumerate() {
            let direct = laplacian_power_norm_sq(beta, 2, k + 1, 2048).unwrap();
            assert_relative_eq!(direct, *r, max_relative = 1e-10);
        }
    }

    #[test]
    fn single_node_witness_is_positive_and_sound() {
        let x = crate::pointset::load_pointset("0 0 1\n".as_bytes(), 2).unwrap();
        let sp = SpaceSpec::log_sobolev(2, 1.0).unwrap();
        let opts = WitnessOptions {
            remainder_tol: 1e-2,
            ..Default::default()
        };
        let w = build_witness_with(&x, &sp, 8, None, 3, &opts).unwrap();
        assert!(w.valid);
        assert!(w.witness > 0.0);
        assert!(w.kept() >= 8);
        let r = wce(&x, &sp, 4000).unwrap();
        assert!(w.witness <= r.value + r.tail_bound_sq.sqrt());
    }

    #[test]
    fn witness_sound_on_random_rules() {
        for (seed, gamma) in [(1u64, 0.75), (2, 1.0), (3, 1.0)] {
            let x = random_uniform(2, 16 << seed, seed).unwrap();
            let sp = SpaceSpec::log_sobolev(2, gamma).unwrap();
            let opts = WitnessOptions {
                remainder_tol: 1e-2,
                ..Default::default()
            };
            let w = build_witness_with(&x, &sp, x.len(), None, seed, &opts).unwrap();
            assert!(w.valid && w.witness > 0.0);
            assert!(w.kept() >= x.len());
            let r = wce(&x, &sp, 3000).unwrap();
            assert!(w.witness <= r.value + r.tail_bound_sq.sqrt(), "{} {}", w.witness, r.value);
        }
        let x = spiral_points(32).unwrap();
        let sp = SpaceSpec::sobolev(2, 1.5).unwrap();
        let w = build_witness_with(&x, &sp, 32, None, 9, &WitnessOptions { remainder_tol: 1e-2, ..Default::default() })
            .unwrap();
        let r = wce(&x, &sp, 3000).unwrap();
        assert!(w.witness <= r.value + r.tail_bound_sq.sqrt());
    }

    #[test]
    fn doubling_the_degree_barely_moves_the_witness() {
        let x = random_uniform(2, 8, 5).unwrap();
        let sp = SpaceSpec::log_sobolev(2, 1.0).unwrap();
        let opts = WitnessOptions {
            remainder_tol: 1e-1,
            ..Default::default()
        };
        let caps = free_caps(&x, 8, 5, 10).unwrap();
        let l = witness_degree(caps.beta);
        let a = witness_on_caps(&x, &sp, caps.clone(), l, &opts).unwrap();
        let b = witness_on_caps(&x, &sp, caps, 2 * l, &opts).unwrap();
        assert!(b.witness >= a.witness);
        assert!(b.witness <= a.witness * (1.0 + 1e-2));
    }

    #[test]
    fn strict_default_reports_insufficient_decay() {
        let x = random_uniform(2, 8, 5).unwrap();
        let sp = SpaceSpec::log_sobolev(2, 1.0).unwrap();
        let caps = free_caps(&x, 8, 5, 10).unwrap();
        let r = witness_on_caps(&x, &sp, caps, 50, &WitnessOptions::default());
        assert!(matches!(r, Err(Error::InsufficientDecay { .. })));
    }

    #[test]
    fn automatic_degree_grows_for_smooth_spaces() {
        let x = random_uniform(3, 12, 47).unwrap();
        let sp = SpaceSpec::sobolev(3, 3.0).unwrap();
        let opts = WitnessOptions {
            remainder_tol: 1e-2,
            ..Default::default()
        };
        let w = build_witness_with(&x, &sp, 12, None, 1, &opts).unwrap();
        assert!(w.valid);
        assert!(w.degree() > witness_degree(w.beta));
        assert!(w.remainder_sq <= 1e-2 * (w.norm * w.norm - w.remainder_sq));
        assert!(w.witness <= wce(&x, &sp, 3000).unwrap().upper());
    }
}
