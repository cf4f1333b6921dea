//! Order-fixed parallel reductions.
//!
//! Work is split into blocks whose boundaries depend only on the problem size,
//! and block partials are combined by a fixed pairwise tree, so results are
//! bit-identical for any thread count.

use rayon::prelude::*;

pub(crate) const BLOCK: usize = 8;

fn blocks(n: usize) -> usize {
    n.div_ceil(BLOCK)
}

pub(crate) fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

fn tree_sum_vec(mut parts: Vec<Vec<f64>>, len: usize) -> Vec<f64> {
    if parts.is_empty() {
        return vec![0.0; len];
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap()
}

/// `Σ_{i<n} row(i)`.
pub(crate) fn row_sum<F>(n: usize, row: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partials: Vec<f64> = (0..blocks(n))
        .into_par_iter()
        .map(|b| (b * BLOCK..((b + 1) * BLOCK).min(n)).map(&row).sum())
        .collect();
    tree_sum(&partials)
}

/// Element-wise `Σ_{i<n} row_i`, where `row(i, acc)` adds row `i` into `acc`.
pub(crate) fn row_sum_vec<F>(n: usize, len: usize, row: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let partials: Vec<Vec<f64>> = (0..blocks(n))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; len];
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                row(i, &mut acc);
            }
            acc
        })
        .collect();
    tree_sum_vec(partials, len)
}

/// Parallel map over `0..n` preserving order.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}
