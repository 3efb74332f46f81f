//! Discrete convolution sums and the weighted-norm estimate toolkit.
//!
//! Sequences are indexed from 1 mathematically; slices are 0-based, so
//! `a[k-1]` holds `a_k`. Entries beyond the slice length are zero, which
//! makes the truncated sums exact for the Galerkin system.

use crate::{Error, Result};

/// Finite Cauchy-product part `Σ_{k=1}^{n-1} a_{n-k} b_k`.
///
/// Empty for `n = 1`; out-of-range entries are zero.
pub fn conv_cauchy(a: &[f64], b: &[f64], n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("conv_cauchy requires n >= 1".into()));
    }
    let mut sum = 0.0;
    for k in 1..n {
        let ai = get(a, n - k);
        let bi = get(b, k);
        sum += ai * bi;
    }
    Ok(sum)
}

/// Weighted left tail `Σ_{l=1}^{L} a_{l+n} · l · b_l`.
pub fn conv_tail_left(a: &[f64], b: &[f64], n: usize, l_max: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("conv_tail_left requires n >= 1".into()));
    }
    let mut sum = 0.0;
    for l in 1..=l_max {
        sum += get(a, l + n) * l as f64 * get(b, l);
    }
    Ok(sum)
}

/// Weighted right tail `Σ_{l=1}^{L} a_l · (l+n) · b_{l+n}`.
pub fn conv_tail_right(a: &[f64], b: &[f64], n: usize, l_max: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("conv_tail_right requires n >= 1".into()));
    }
    let mut sum = 0.0;
    for l in 1..=l_max {
        sum += get(a, l) * (l + n) as f64 * get(b, l + n);
    }
    Ok(sum)
}

/// Partial-sum constant `c(s, β) = (Σ_{n=1}^{K} n^{2(β−s)})^{1/2}` of the
/// weighted l¹-by-l² bound `Σ n^β |a_n| <= c (Σ n^{2s} |a_n|²)^{1/2}`.
///
/// Monotone increasing in `K` and convergent since `s > β + 1/2`.
pub fn weighted_l1_bound_constant(s: f64, beta: f64, n_terms: usize) -> Result<f64> {
    if !(s > beta + 0.5) {
        return Err(Error::DivergentSeries { s, beta });
    }
    let mut sum = 0.0;
    for n in 1..=n_terms {
        sum += (n as f64).powf(2.0 * (beta - s));
    }
    Ok(sum.sqrt())
}

/// Constants of the three convolution estimates, assembled as in the proofs:
/// display 1 uses `c(s, 0)`; displays 2 and 3 use `c(s, s − 1/2 − ε)` with
/// `ε = min(2s − 3/2, s − 1/2)/2`, display 3 carrying the extra `2^{1−s}`.
/// Valid for `s ∈ (3/4, 1)`; partial sums taken at `n_terms`.
pub fn convolution_bound_constants(s: f64, n_terms: usize) -> Result<[f64; 3]> {
    if !(s > 0.75 && s < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "convolution_bound_constants requires s in (3/4, 1), got {s}"
        )));
    }
    let eps = 0.5 * (2.0 * s - 1.5).min(s - 0.5);
    let c1 = weighted_l1_bound_constant(s, 0.0, n_terms)?;
    let c23 = weighted_l1_bound_constant(s, s - 0.5 - eps, n_terms)?;
    Ok([c1, c23, 2f64.powf(1.0 - s) * c23])
}

/// l¹ norm of a finite sequence.
pub fn l1_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// l² norm of a finite sequence.
pub fn l2_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[inline]
fn get(a: &[f64], idx1: usize) -> f64 {
    if idx1 >= 1 && idx1 <= a.len() {
        a[idx1 - 1]
    } else {
        0.0
    }
}
