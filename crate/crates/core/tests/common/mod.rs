//! Shared test oracles, kept independent of the library's implementation
#![allow(dead_code)] // each test target uses a different subset
//! paths: an exact-rational Bessel power series, a recursive subset
//! enumerator, and direct-formula bound evaluations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Power-series oracle `J_n(x) = sum_m (-1)^m (x/2)^{n+2m} / (m! (n+m)!)`,
/// evaluated in exact rational arithmetic (f64 inputs are dyadic rationals)
/// and rounded once at the end. The f64 series loses ~11 digits near x = 30
/// through cancellation; exact arithmetic does not.
pub fn bessel_series_oracle(n: usize, x: f64) -> f64 {
    let half = BigRational::from_float(x / 2.0).expect("finite argument");
    let mut term = BigRational::from_integer(BigInt::from(1));
    for k in 1..=n {
        term = term * &half / BigInt::from(k);
    }
    let q = &half * &half;
    let mut sum = term.clone();
    // side-channel f64 magnitude estimate for termination
    let mut mag = (x / 2.0).powi(n as i32)
        / (1..=n).map(|k| k as f64).product::<f64>().max(1.0);
    let mut m = 1usize;
    loop {
        term = -(term * &q) / BigInt::from(m * (m + n));
        sum += &term;
        mag *= (x / 2.0) * (x / 2.0) / (m * (m + n)) as f64;
        if mag < 1e-40 || m > 400 {
            break;
        }
        m += 1;
    }
    sum.to_f64().expect("series value fits f64")
}

/// All k-subsets of `items` in lexicographic order, by simple recursion.
pub fn enumerate_subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn recurse<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for idx in start..items.len() {
            cur.push(items[idx]);
            recurse(items, k, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    recurse(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Pascal-triangle binomial oracle.
pub fn pascal_binomial(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64];
        for w in row.windows(2) {
            next.push(w[0] + w[1]);
        }
        next.push(1);
        row = next;
    }
    if k < row.len() {
        row[k]
    } else {
        0
    }
}

/// Embedded covariance diagonals built straight from the definition: for
/// every subset of active positions, `p0 * g_sq + sigma2` on active modes
/// and `sigma2` elsewhere.
pub fn embedded_diagonals(gain_sq: &[f64], sigma2: f64, p0: f64, i: usize) -> Vec<Vec<f64>> {
    let n = gain_sq.len();
    let positions: Vec<usize> = (0..n).collect();
    enumerate_subsets(&positions, i)
        .into_iter()
        .map(|subset| {
            (0..n)
                .map(|p| {
                    if subset.contains(&p) {
                        p0 * gain_sq[p] + sigma2
                    } else {
                        sigma2
                    }
                })
                .collect()
        })
        .collect()
}

/// Direct KL divergence in nats between diagonal zero-mean complex
/// Gaussians.
pub fn diag_kl_nats(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&sa, &sb)| (sb / sa).ln() + sa / sb - 1.0)
        .sum()
}

/// Direct evaluation of the KL-based upper bound: signal information plus
/// the average of `-log2[(1/K) sum_j exp(-D(k,j))]` over k.
pub fn c_upper_kl_oracle(gain_sq: &[f64], sigma2: f64, p0: f64, i: usize) -> f64 {
    let diags = embedded_diagonals(gain_sq, sigma2, p0, i);
    let k = diags.len() as f64;
    let signal: f64 = diags
        .iter()
        .map(|d| {
            d.iter()
                .map(|&v| (v / sigma2).log2())
                .sum::<f64>()
        })
        .sum::<f64>()
        / k;
    let index: f64 = diags
        .iter()
        .map(|dk| {
            let inner: f64 = diags
                .iter()
                .map(|dj| (-diag_kl_nats(dk, dj)).exp())
                .sum();
            -(inner / k).log2()
        })
        .sum::<f64>()
        / k;
    signal + index
}

/// Direct evaluation of the Jensen lower bound in the embedded mode space,
/// without log-domain safeguards (fine for the small test sizes).
pub fn c_lower_oracle(gain_sq: &[f64], sigma2: f64, p0: f64, i: usize) -> f64 {
    use std::f64::consts::{E, PI};
    let n = gain_sq.len();
    let diags = embedded_diagonals(gain_sq, sigma2, p0, i);
    let k = diags.len() as f64;
    let pair_term: f64 = diags
        .iter()
        .map(|dk| {
            let inner: f64 = diags
                .iter()
                .map(|dj| {
                    let det: f64 = dk.iter().zip(dj).map(|(&a, &b)| a + b).product();
                    1.0 / (PI.powi(n as i32) * det)
                })
                .sum();
            inner.log2()
        })
        .sum();
    k.log2() - n as f64 * sigma2.log2() - n as f64 * (PI * E).log2() - pair_term / k
}
