//! Weight sequences and truncated reproducing kernels for `H^s(S^d)` and the
//! log-weighted space `H^{(d/2, γ)}(S^d)`.
//!
//! A kernel is a zonal series `K(t) = Σ_ℓ c_ℓ P_ℓ^{(d)}(t)` with
//! `c_ℓ = Z(d, ℓ) / w_ℓ`. Tables are truncated at degree `L` and carry a
//! certified bound on the discarded tail at `t = 1`, which bounds the tail for
//! every `t` because `|P_ℓ^{(d)}| ≤ 1`.

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::specfun::{dim_harmonics_f64, eigenvalue_f64, ClenshawPlan};

/// Smoothness family of the function space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    /// `w_ℓ = (1 + λ_ℓ)^s`, needs `s > d/2`.
    Sobolev { s: f64 },
    /// `w_ℓ = (1 + λ_ℓ)^{d/2} (ln(3 + λ_ℓ))^{2γ}`, needs `γ > 1/2`.
    LogSobolev { gamma: f64 },
}

/// A function space on `S^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec {
    d: usize,
    kind: SpaceKind,
}

impl SpaceSpec {
    pub fn new(d: usize, kind: SpaceKind) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {d}")));
        }
        match kind {
            SpaceKind::Sobolev { s } if !(s > d as f64 / 2.0) || !s.is_finite() => Err(Error::InvalidArgument(
                format!("Sobolev smoothness must exceed d/2 = {}, got {s}", d as f64 / 2.0),
            )),
            SpaceKind::LogSobolev { gamma } if !(gamma > 0.5) || !gamma.is_finite() => {
                Err(Error::InvalidArgument(format!("log exponent must exceed 1/2, got {gamma}")))
            }
            _ => Ok(Self { d, kind }),
        }
    }

    pub fn sobolev(d: usize, s: f64) -> Result<Self> {
        Self::new(d, SpaceKind::Sobolev { s })
    }

    pub fn log_sobolev(d: usize, gamma: f64) -> Result<Self> {
        Self::new(d, SpaceKind::LogSobolev { gamma })
    }

    /// Parses `log:<gamma>` or `sob:<s>` for a given dimension.
    pub fn parse(d: usize, text: &str) -> Result<Self> {
        let kind: SpaceKind = text.parse()?;
        Self::new(d, kind)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, value) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("space must be log:<gamma> or sob:<s>, got {s:?}")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad space parameter {value:?}")))?;
        match tag.trim() {
            "log" => Ok(SpaceKind::LogSobolev { gamma: v }),
            "sob" => Ok(SpaceKind::Sobolev { s: v }),
            other => Err(Error::InvalidArgument(format!("unknown space kind {other:?}"))),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Sobolev { s } => write!(f, "sob:{s}"),
            SpaceKind::LogSobolev { gamma } => write!(f, "log:{gamma}"),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

/// Weight `w_ℓ` of the space norm.
pub fn weight(space: &SpaceSpec, ell: usize) -> f64 {
    let lam = eigenvalue_f64(space.d, ell);
    match space.kind {
        SpaceKind::Sobolev { s } => (1.0 + lam).powf(s),
        SpaceKind::LogSobolev { gamma } => {
            (1.0 + lam).powf(space.d as f64 / 2.0) * (3.0 + lam).ln().powf(2.0 * gamma)
        }
    }
}

/// `c_ℓ = Z(d, ℓ) / w_ℓ`.
pub fn kernel_coefficient(space: &SpaceSpec, ell: usize) -> f64 {
    dim_harmonics_f64(space.d, ell) / weight(space, ell)
}

/// Truncated kernel coefficients `c_0..=c_L` with a certified tail bound.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    space: SpaceSpec,
    degree: usize,
    coeffs: Vec<f64>,
    include_constant: bool,
    tail_at_one: f64,
    value_plan: ClenshawPlan,
    /// `K'(t)` in the `P^{(d+2)}` basis.
    deriv_plan: ClenshawPlan,
}

impl CoeffTable {
    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// Truncation degree `L`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn include_constant(&self) -> bool {
        self.include_constant
    }

    /// Upper bound on `Σ_{ℓ > L} c_ℓ`.
    pub fn tail_at_one(&self) -> f64 {
        self.tail_at_one
    }

    /// `Σ_{ℓ ≤ L} c_ℓ`, the truncated kernel at `t = 1`.
    pub fn sum_at_one(&self) -> f64 {
        self.coeffs.iter().sum()
    }
}

/// Builds the coefficient table of `K` (`include_constant`) or of `K̃ = K - c_0`.
pub fn build_coeffs(space: &SpaceSpec, degree: usize, include_constant: bool) -> Result<CoeffTable> {
    if degree < 1 {
        return Err(Error::InvalidArgument("truncation degree must be >= 1".into()));
    }
    let d = space.d;
    let mut coeffs: Vec<f64> = (0..=degree).map(|l| kernel_coefficient(space, l)).collect();
    if !include_constant {
        coeffs[0] = 0.0;
    }
    let tail = if degree >= 3 {
        tail_at_one(space, degree)?
    } else {
        tail_at_one(space, 3)? + ((degree + 1)..=3).map(|l| kernel_coefficient(space, l)).sum::<f64>()
    };
    let df = d as f64;
    let deriv = (0..degree).map(|k| coeffs[k + 1] * eigenvalue_f64(d, k + 1) / df).collect();
    Ok(CoeffTable {
        space: *space,
        degree,
        value_plan: ClenshawPlan::new(d, coeffs.clone()),
        deriv_plan: ClenshawPlan::new(d + 2, deriv),
        coeffs,
        include_constant,
        tail_at_one: tail,
    })
}

/// A truncated kernel value with a bound on the truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// `Σ_{ℓ ≤ L} c_ℓ P_ℓ^{(d)}(t)` by Clenshaw summation.
pub fn kernel_eval(tab: &CoeffTable, t: f64) -> Result<KernelValue> {
    if t.is_nan() || t.abs() > 1.0 {
        return Err(Error::Domain(format!("kernel argument {t} outside [-1, 1]")));
    }
    Ok(KernelValue {
        value: kernel_value_unchecked(tab, t),
        tail_bound: tab.tail_at_one,
    })
}

#[inline]
pub(crate) fn kernel_value_unchecked(tab: &CoeffTable, t: f64) -> f64 {
    tab.value_plan.eval(t)
}

/// `Σ_j w_j K_L(t_j)`.
pub(crate) fn kernel_weighted_sum(tab: &CoeffTable, ts: &[f64], ws: &[f64]) -> f64 {
    tab.value_plan.weighted_sum(ts, ws)
}

/// `d/dt Σ_{ℓ ≤ L} c_ℓ P_ℓ^{(d)}(t)`.
pub fn kernel_derivative(tab: &CoeffTable, t: f64) -> f64 {
    tab.deriv_plan.eval(t)
}

/// Majorant profile `f(u)` with `Σ_{ℓ>L} f(ℓ) ≤ ∫_L^∞ f`, its integral, and
/// the limit of `c_ℓ / f(ℓ)`.
struct Majorant {
    profile: Box<dyn Fn(f64) -> f64>,
    integral_from: Box<dyn Fn(f64) -> f64>,
    limit_ratio: f64,
}

fn majorant(space: &SpaceSpec) -> Majorant {
    let df = space.d as f64;
    let z_lead = (2.0f64.ln() - ln_gamma(df)).exp(); // Z(d, ℓ) ~ 2 ℓ^{d-1} / Γ(d)
    match space.kind {
        SpaceKind::Sobolev { s } => {
            let p = df - 1.0 - 2.0 * s;
            Majorant {
                profile: Box::new(move |u| u.powf(p)),
                integral_from: Box::new(move |l| l.powf(p + 1.0) / (2.0 * s - df)),
                limit_ratio: z_lead,
            }
        }
        SpaceKind::LogSobolev { gamma } => {
            let g2 = 2.0 * gamma;
            Majorant {
                profile: Box::new(move |u| 1.0 / (u * u.ln().powf(g2))),
                integral_from: Box::new(move |l| l.ln().powf(1.0 - g2) / (g2 - 1.0)),
                // ln(3 + λ_ℓ) ~ 2 ln ℓ
                limit_ratio: z_lead * 2.0f64.powf(-g2),
            }
        }
    }
}

/// Upper bound on `Σ_{ℓ > L} c_ℓ`.
///
/// Uses `c_ℓ ≤ A f(ℓ)` with a decreasing profile `f` and the integral test.
/// `A` is the maximum of `c_ℓ / f(ℓ)` over `ℓ ∈ (L, 16L]` and of its limit as
/// `ℓ → ∞`; the ratio must be monotone on `[8L, 16L]`, otherwise the scan is
/// not trusted and an error is returned.
pub fn tail_at_one(space: &SpaceSpec, degree: usize) -> Result<f64> {
    if degree < 3 {
        return Err(Error::InvalidArgument("tail bound needs L >= 3".into()));
    }
    let m = majorant(space);
    let ratio = |l: usize| kernel_coefficient(space, l) / (m.profile)(l as f64);
    let hi = 16 * degree;
    let mid = 8 * degree;
    let mut amax: f64 = 0.0;
    let (mut up, mut down) = (true, true);
    let mut prev = f64::NAN;
    for l in (degree + 1)..=hi {
        let r = ratio(l);
        if !r.is_finite() {
            return Err(Error::TailUnsound(format!("non-finite coefficient ratio at degree {l}")));
        }
        amax = amax.max(r);
        if l > mid {
            let slack = 1e-13 * prev.abs();
            up &= r >= prev - slack;
            down &= r <= prev + slack;
        }
        prev = r;
    }
    if !(up || down) {
        return Err(Error::TailUnsound(format!(
            "coefficient ratio not monotone on [{mid}, {hi}] for {space}"
        )));
    }
    let a = amax.max(m.limit_ratio);
    let bound = a * (m.integral_from)(degree as f64);
    if !(bound.is_finite() && bound >= 0.0) {
        return Err(Error::TailUnsound(format!("tail bound {bound} is not finite")));
    }
    Ok(bound)
}
