//! Point configurations on `S^d`: loading, generation and geometric diagnostics.
//!
//! Point files are plain text. Lines starting with `#` are comments, every
//! other non-blank line holds `d+1` coordinates optionally followed by a
//! weight, separated by spaces or tabs. Without a weight column the rule is
//! equal-weight.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::reduce::par_map;

const LOAD_TOL: f64 = 1e-9;

/// `N` unit vectors in `R^{d+1}` with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from raw vectors, normalising each to unit length.
    /// Weights default to `1/N`.
    pub fn from_vectors(d: usize, points: &[Vec<f64>], weights: Option<Vec<f64>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {d}")));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("point set must not be empty".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * (d + 1));
        for (i, p) in points.iter().enumerate() {
            if p.len() != d + 1 {
                return Err(Error::InvalidArgument(format!("point {i} has {} coordinates, expected {}", p.len(), d + 1)));
            }
            let n = norm(p);
            if !(n > 0.0) || !n.is_finite() {
                return Err(Error::InvalidArgument(format!("point {i} cannot be normalised")));
            }
            coords.extend(p.iter().map(|x| x / n));
        }
        let n = points.len();
        let weights = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidArgument("weight count does not match point count".into()));
                }
                let sum: f64 = w.iter().sum();
                if !((sum - 1.0).abs() <= 1e-12) {
                    return Err(Error::WeightSum { sum });
                }
                w
            }
            None => vec![1.0 / n as f64; n],
        };
        Ok(Self { d, coords, weights })
    }

    pub(crate) fn from_unit_coords(d: usize, coords: Vec<f64>) -> Self {
        let n = coords.len() / (d + 1);
        Self {
            d,
            coords,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient dimension `d + 1`.
    pub fn dim(&self) -> usize {
        self.d + 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let m = self.d + 1;
        &self.coords[i * m..(i + 1) * m]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d + 1)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn has_equal_weights(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().all(|&w| w == w0)
    }

    /// `Σ |ω_i|`.
    pub fn abs_weight_sum(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// `⟨x_i, x_j⟩`, clamped to `[-1, 1]`.
    #[inline]
    pub fn inner(&self, i: usize, j: usize) -> f64 {
        dot(self.point(i), self.point(j)).clamp(-1.0, 1.0)
    }

    /// Applies a linear map given as a row-major `(d+1)×(d+1)` matrix.
    pub fn transformed(&self, matrix: &[f64]) -> Self {
        let m = self.d + 1;
        assert_eq!(matrix.len(), m * m);
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.points() {
            for r in 0..m {
                coords.push(dot(&matrix[r * m..(r + 1) * m], p));
            }
        }
        Self {
            d: self.d,
            coords,
            weights: self.weights.clone(),
        }
    }

    /// Writes the point file format, weights included.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# d={} N={}", self.d, self.len())?;
        for (p, w) in self.points().zip(&self.weights) {
            let mut line = String::new();
            for x in p {
                line.push_str(&format!("{x} "));
            }
            line.push_str(&format!("{w}"));
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Parses a point file for `S^d`.
pub fn load_pointset<R: BufRead>(source: R, d: usize) -> Result<PointSet> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {d}")));
    }
    let m = d + 1;
    let mut coords = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut has_weights: Option<bool> = None;
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        let trimmed = line.trim_matches(|c| c == ' ' || c == '\t');
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split([' ', '\t']).filter(|f| !f.is_empty()).collect();
        let weighted = match fields.len() {
            n if n == m => false,
            n if n == m + 1 => true,
            n => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {m} or {} fields, found {n}", m + 1),
                })
            }
        };
        match has_weights {
            None => has_weights = Some(weighted),
            Some(w) if w != weighted => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "weight column present on some lines only".into(),
                })
            }
            _ => {}
        }
        let mut vals = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 = parse_decimal(f).ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("not a decimal number: {f:?}"),
            })?;
            vals.push(v);
        }
        let n = norm(&vals[..m]);
        if !((n - 1.0).abs() <= LOAD_TOL) {
            return Err(Error::Norm { line: lineno, norm: n });
        }
        coords.extend(vals[..m].iter().map(|x| x / n));
        if weighted {
            weights.push(vals[m]);
        }
    }
    let count = coords.len() / m;
    if count == 0 {
        return Err(Error::Parse {
            line: 0,
            msg: "no data lines".into(),
        });
    }
    if has_weights != Some(true) {
        weights = vec![1.0 / count as f64; count];
    }
    let sum: f64 = weights.iter().sum();
    if !((sum - 1.0).abs() <= LOAD_TOL) {
        return Err(Error::WeightSum { sum });
    }
    weights.iter_mut().for_each(|w| *w /= sum);
    Ok(PointSet { d, coords, weights })
}

fn parse_decimal(s: &str) -> Option<f64> {
    let ok = s
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
    if !ok {
        return None;
    }
    s.parse().ok().filter(|v: &f64| v.is_finite())
}

fn gaussian_unit(rng: &mut ChaCha8Rng, m: usize, out: &mut Vec<f64>) {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-300 {
            out.extend(v.iter().map(|x| x / n));
            return;
        }
    }
}

/// `N` independent uniform points (normalised Gaussians), equal weights.
pub fn random_uniform(d: usize, n: usize, seed: u64) -> Result<PointSet> {
    if d < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!("need d >= 2 and N >= 1, got d={d} N={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(n * (d + 1));
    for _ in 0..n {
        gaussian_unit(&mut rng, d + 1, &mut coords);
    }
    Ok(PointSet::from_unit_coords(d, coords))
}

/// Generalised spiral points on `S^2`.
///
/// `z_i = 1 - (2i-1)/N`, `φ_i = φ_{i-1} + 3.6/√(N(1-z_i²))` mod 2π, `φ_1 = 0`.
pub fn spiral_points(n: usize) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("spiral needs N >= 2, got {n}")));
    }
    let nf = n as f64;
    let mut coords = Vec::with_capacity(3 * n);
    let mut phi: f64 = 0.0;
    for i in 1..=n {
        let z = 1.0 - (2.0 * i as f64 - 1.0) / nf;
        let r2 = 1.0 - z * z;
        if i > 1 {
            phi = (phi + 3.6 / (nf * r2).sqrt()).rem_euclid(2.0 * PI);
        }
        let r = r2.sqrt();
        coords.extend([r * phi.cos(), r * phi.sin(), z]);
    }
    Ok(PointSet::from_unit_coords(2, coords))
}

/// Normalised area of a cap of angular radius `phi` on `S^d`.
pub fn cap_area(d: usize, phi: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {d}")));
    }
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::Domain(format!("cap radius {phi} outside [0, π]")));
    }
    // ∫_{cos φ}^1 (1-t²)^{d/2-1} dt normalised = ½ I_{sin²φ}(d/2, 1/2) for φ ≤ π/2
    let half = |p: f64| {
        let s = p.sin();
        0.5 * beta_reg(d as f64 / 2.0, 0.5, (s * s).min(1.0))
    };
    Ok(if phi <= PI / 2.0 { half(phi) } else { 1.0 - half(PI - phi) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    pub min_distance: f64,
    pub min_angle: f64,
    /// `min_distance · N^{1/d}`.
    pub separation_constant: f64,
}

/// Exact minimum pairwise Euclidean distance.
pub fn separation(x: &PointSet) -> Result<SeparationReport> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidArgument("separation needs N >= 2".into()));
    }
    let row_min = par_map(n, |i| {
        let pi = x.point(i);
        (i + 1..n)
            .map(|j| {
                let pj = x.point(j);
                pi.iter().zip(pj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    });
    let min_sq = row_min.into_iter().fold(f64::INFINITY, f64::min);
    let min_distance = min_sq.sqrt().min(2.0);
    Ok(SeparationReport {
        min_distance,
        min_angle: 2.0 * (min_distance / 2.0).asin(),
        separation_constant: min_distance * (n as f64).powf(1.0 / x.d as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyRReport {
    pub t: usize,
    pub c1: f64,
    /// Largest `Σ_{x_j ∈ cap} |ω_j| / |cap|` over the probe centres; a lower
    /// estimate of the supremum over the whole sphere.
    pub max_ratio: f64,
}

/// The rule's nodes followed by `10 N` seeded uniform points.
pub fn default_probes(x: &PointSet, seed: u64) -> Result<Vec<Vec<f64>>> {
    let extra = random_uniform(x.d, 10 * x.len(), seed)?;
    Ok(x.points().chain(extra.points()).map(|p| p.to_vec()).collect())
}

/// Measures quadrature regularity on caps of radius `c1 / t`.
pub fn property_r(x: &PointSet, t: usize, c1: f64, probes: &[Vec<f64>]) -> Result<PropertyRReport> {
    if t < 1 {
        return Err(Error::InvalidArgument("t must be >= 1".into()));
    }
    if !(c1 > 0.0 && c1 <= PI / 2.0) {
        return Err(Error::InvalidArgument(format!("c1 must lie in (0, π/2], got {c1}")));
    }
    if probes.is_empty() {
        return Err(Error::InvalidArgument("probe list is empty".into()));
    }
    let phi = (c1 / t as f64).min(PI);
    let area = cap_area(x.d, phi)?;
    let cos_phi = phi.cos();
    let masses = par_map(probes.len(), |k| {
        let c = &probes[k];
        x.points()
            .zip(x.weights())
            .filter(|(p, _)| phi >= PI || dot(p, c) >= cos_phi)
            .map(|(_, w)| w.abs())
            .sum::<f64>()
    });
    let max_mass = masses.into_iter().fold(0.0, f64::max);
    Ok(PropertyRReport {
        t,
        c1,
        max_ratio: max_mass / area,
    })
}

/// Caps of common angular radius `beta` around `centers`, with pairwise
/// centre angles at least `2 beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub d: usize,
    pub centers: Vec<Vec<f64>>,
    pub beta: f64,
}

impl Packing {
    /// Smallest pairwise angle between centres.
    pub fn min_center_angle(&self) -> f64 {
        min_pair_angle(&self.centers)
    }
}

fn min_pair_angle(centers: &[Vec<f64>]) -> f64 {
    let m = centers.len();
    let row_max = par_map(m, |i| {
        (i + 1..m)
            .map(|j| dot(&centers[i], &centers[j]))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    let max_dot = row_max.into_iter().fold(f64::NEG_INFINITY, f64::max);
    max_dot.clamp(-1.0, 1.0).acos()
}

/// Farthest-point greedy packing of `M` caps from a seeded candidate pool.
pub fn greedy_packing(d: usize, m: usize, candidate_count: usize, seed: u64) -> Result<Packing> {
    if m < 2 {
        return Err(Error::InvalidArgument("packing needs M >= 2".into()));
    }
    if candidate_count < 10 * m {
        return Err(Error::InvalidArgument(format!(
            "candidate pool {candidate_count} smaller than 10·M = {}",
            10 * m
        )));
    }
    let pool = random_uniform(d, candidate_count, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let first = rng.random_range(0..candidate_count);
    // largest inner product with any chosen centre = smallest angular distance
    let mut nearest = vec![f64::NEG_INFINITY; candidate_count];
    let mut chosen = vec![first];
    let mut last = first;
    while chosen.len() < m {
        let lp = pool.point(last).to_vec();
        let dots = par_map(candidate_count, |k| dot(pool.point(k), &lp));
        let mut best = usize::MAX;
        let mut best_val = f64::INFINITY;
        for (k, dk) in dots.into_iter().enumerate() {
            if dk > nearest[k] {
                nearest[k] = dk;
            }
            if nearest[k] < best_val {
                best_val = nearest[k];
                best = k;
            }
        }
        chosen.push(best);
        last = best;
    }
    let centers: Vec<Vec<f64>> = chosen.iter().map(|&k| pool.point(k).to_vec()).collect();
    let beta = 0.5 * min_pair_angle(&centers);
    Ok(Packing { d, centers, beta })
}

/// Random orthogonal matrix (row-major) from Gram–Schmidt on Gaussian columns.
pub fn random_rotation(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for r in &rows {
            let c = dot(&v, r);
            v.iter_mut().zip(r).for_each(|(a, b)| *a -= c * b);
        }
        let n = norm(&v);
        if n > 1e-8 {
            rows.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    rows.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn load(text: &str, d: usize) -> Result<PointSet> {
        load_pointset(text.as_bytes(), d)
    }

    #[test]
    fn load_examples() {
        let x = load("0 0 1\n0 0 -1\n", 2).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.weights(), &[0.5, 0.5]);
        assert_eq!(x.point(1), &[0.0, 0.0, -1.0]);

        match load("0 0 0.5\n", 2) {
            Err(Error::Norm { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match load("0 0 1 0.7\n0 0 -1 0.4\n", 2) {
            Err(Error::WeightSum { sum }) => assert_relative_eq!(sum, 1.1, epsilon = 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn load_grammar() {
        let x = load("# header\r\n1\t0  0 0.25\r\n\r\n0 1 0 0.75\r\n", 2).unwrap();
        assert_eq!(x.weights(), &[0.25, 0.75]);
        match load("1 0 0\nfoo 0 0\n", 2) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match load("1 0\n", 2) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(load("1 0 0 1\n0 1 0\n", 2), Err(Error::Parse { line: 2, .. })));
        assert!(load("# nothing\n", 2).is_err());
        assert!(load("inf 0 0\n", 2).is_err());
        // near-unit vectors are renormalised
        let x = load("1.0000000001 0 0\n", 2).unwrap();
        assert_eq!(x.point(0)[0], 1.0);
    }

    #[test]
    fn write_then_load_roundtrip() {
        let x = random_uniform(3, 17, 5).unwrap();
        let mut buf = Vec::new();
        x.write_to(&mut buf).unwrap();
        let y = load_pointset(buf.as_slice(), 3).unwrap();
        assert_eq!(x.len(), y.len());
        for (a, b) in x.coords().iter().zip(y.coords()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn random_uniform_properties() {
        let a = random_uniform(2, 50, 9).unwrap();
        let b = random_uniform(2, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_uniform(2, 50, 10).unwrap());
        assert!(a.points().all(|p| (norm(p) - 1.0).abs() < 1e-12));
        let big = random_uniform(2, 10_000, 1).unwrap();
        let mut mean = [0.0; 3];
        for p in big.points() {
            for k in 0..3 {
                mean[k] += p[k] / 10_000.0;
            }
        }
        assert!(norm(&mean) < 0.05);
    }

    #[test]
    fn spiral_properties() {
        let x = spiral_points(2).unwrap();
        assert_relative_eq!(x.point(0)[2], 0.5);
        assert_relative_eq!(x.point(1)[2], -0.5);
        for n in [100, 400, 1600] {
            let x = spiral_points(n).unwrap();
            assert!(x.points().all(|p| (norm(p) - 1.0).abs() < 1e-12));
            let rep = separation(&x).unwrap();
            assert!(rep.separation_constant >= 1.0, "N={n}: {}", rep.separation_constant);
        }
        assert!(spiral_points(1).is_err());
    }

    #[test]
    fn cap_area_examples() {
        for d in 2..=5 {
            assert_relative_eq!(cap_area(d, PI).unwrap(), 1.0, epsilon = 1e-14);
            assert_relative_eq!(cap_area(d, PI / 2.0).unwrap(), 0.5, epsilon = 1e-14);
            assert_eq!(cap_area(d, 0.0).unwrap(), 0.0);
        }
        assert_relative_eq!(cap_area(2, PI / 3.0).unwrap(), 0.25, epsilon = 1e-14);
        assert!(cap_area(2, -0.1).is_err());
        assert!(cap_area(2, 3.2).is_err());
    }

    #[test]
    fn cap_area_matches_quadrature_and_asymptotics() {
        use crate::specfun::{gauss_quadrature, gauss_legendre_on, sphere_constant};
        let gl = gauss_quadrature(2, 40).unwrap();
        for d in 2..=5 {
            let h = d as f64 / 2.0 - 1.0;
            let mut prev = 0.0;
            for i in 1..40 {
                let phi = PI * i as f64 / 40.0;
                // smooth in θ: ∫_0^φ sin^{d-1}θ dθ
                let quad: f64 = gauss_legendre_on(&gl, 0.0, phi)
                    .map(|(th, w)| w * th.sin().powf(2.0 * h + 1.0))
                    .sum::<f64>()
                    * sphere_constant(d);
                let a = cap_area(d, phi).unwrap();
                assert!((a - quad).abs() < 1e-10, "d={d} phi={phi}");
                assert!(a > prev);
                prev = a;
            }
            for &phi in &[1e-3, 1e-2, 1e-1] {
                let r = cap_area(d, phi).unwrap() / (1.0 - f64::cos(phi)).powf(d as f64 / 2.0);
                assert!((1.0 / 3.0..=3.0).contains(&r), "d={d} phi={phi} r={r}");
            }
        }
    }

    #[test]
    fn separation_examples() {
        let x = load("0 0 1\n0 0 -1\n", 2).unwrap();
        assert_relative_eq!(separation(&x).unwrap().min_distance, 2.0);
        let sq = load("1 0 0\n0 1 0\n-1 0 0\n0 -1 0\n", 2).unwrap();
        let rep = separation(&sq).unwrap();
        assert_relative_eq!(rep.min_distance, 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(rep.min_angle, PI / 2.0, epsilon = 1e-14);
        let dup = load("1 0 0\n1 0 0\n0 1 0\n", 2).unwrap();
        let rep = separation(&dup).unwrap();
        assert_eq!(rep.min_distance, 0.0);
        assert_eq!(rep.separation_constant, 0.0);
        assert!(separation(&load("1 0 0\n", 2).unwrap()).is_err());
    }

    #[test]
    fn property_r_examples() {
        let x = random_uniform(2, 30, 3).unwrap();
        let probes = default_probes(&x, 4).unwrap();
        assert_eq!(probes.len(), 330);
        // whole-sphere cap via an oversized c1/t is clamped to π
        let whole = property_r(&x, 1, PI / 2.0, &probes).unwrap();
        assert!(whole.max_ratio > 0.0);

        let single = load("0 0 1\n", 2).unwrap();
        let rep = property_r(&single, 1, 1.0, &[vec![0.0, 0.0, 1.0]]).unwrap();
        assert_relative_eq!(rep.max_ratio, 1.0 / cap_area(2, 1.0).unwrap(), epsilon = 1e-14);

        let sp = spiral_points(400).unwrap();
        let probes = default_probes(&sp, 11).unwrap();
        let rep = property_r(&sp, 20, 1.0, &probes).unwrap();
        assert!(rep.max_ratio < 10.0, "{}", rep.max_ratio);

        assert!(property_r(&sp, 0, 1.0, &probes).is_err());
        assert!(property_r(&sp, 1, 2.0, &probes).is_err());
        assert!(property_r(&sp, 1, 1.0, &[]).is_err());
    }

    #[test]
    fn rotation_invariance_of_diagnostics() {
        let x = random_uniform(3, 40, 8).unwrap();
        let rot = random_rotation(4, 99);
        let y = x.transformed(&rot);
        let (a, b) = (separation(&x).unwrap(), separation(&y).unwrap());
        assert!((a.min_distance - b.min_distance).abs() < 1e-9);
        let probes = default_probes(&x, 1).unwrap();
        let rprobes: Vec<Vec<f64>> = probes
            .iter()
            .map(|p| (0..4).map(|r| dot(&rot[r * 4..(r + 1) * 4], p)).collect())
            .collect();
        let pa = property_r(&x, 3, 1.0, &probes).unwrap();
        let pb = property_r(&y, 3, 1.0, &rprobes).unwrap();
        assert!((pa.max_ratio - pb.max_ratio).abs() < 1e-9);
    }

    #[test]
    fn greedy_packing_examples() {
        let p = greedy_packing(2, 2, 2000, 1).unwrap();
        assert!(p.beta > PI / 2.0 - 0.1, "{}", p.beta);
        let p = greedy_packing(2, 6, 20_000, 2).unwrap();
        assert!((p.beta - PI / 4.0).abs() < 0.1 * PI / 4.0, "{}", p.beta);
        assert!(p.min_center_angle() >= 2.0 * p.beta);
        assert!(greedy_packing(2, 1, 100, 0).is_err());
        assert!(greedy_packing(2, 10, 50, 0).is_err());
    }

    #[test]
    fn greedy_packing_scaling() {
        for d in [2usize, 3] {
            let vals: Vec<f64> = [16usize, 64, 256]
                .iter()
                .map(|&m| greedy_packing(d, m, 20 * m, 7).unwrap().beta * (m as f64).powf(1.0 / d as f64))
                .collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(0.0, f64::max);
            assert!(lo > 0.3 && hi < 2.0, "d={d} {vals:?}");
        }
    }
}
