//! Achievable spectrum-efficiency machinery: per-combination covariances,
//! signal information, Gaussian KL divergence, the mixture-entropy upper
//! bound, the Jensen lower bound, the KL-based and simplified upper bounds,
//! and a Monte Carlo mutual-information estimator.
//!
//! Covariances for different combinations live on different mode subsets, so
//! every cross-combination quantity is evaluated in the common
//! `N_t`-dimensional mode space: each `Sigma_{y,k}` is embedded as a full
//! diagonal with `P0*|h_l|^2 + sigma_l^2` on active modes and `sigma_l^2` on
//! inactive ones, and the dimension constants (`pi^I`, `I*log2(pi e)`,
//! `I*log2 e`) become `N_t`-dimensional accordingly. KL divergences are
//! computed in nats internally (the mixture bound exponentiates them) and
//! converted to bits at the interface.

use std::f64::consts::{E, LN_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::channel::{ChannelGains, NoiseProfile};
use crate::error::{Error, Result};
use crate::modes::{all_combinations, binomial, ModeCombination};

/// Compensated (Kahan) accumulator; fixed iteration order keeps reductions
/// bit-stable across thread counts.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// The `K` diagonal received-signal covariances feeding every bound.
#[derive(Debug, Clone)]
pub struct CovarianceSet {
    n_t: usize,
    i: usize,
    k: u64,
    /// Per-mode noise variances in alphabet order.
    sigma2: Vec<f64>,
    /// K x N_t embedded diagonals of `Sigma_{y,k}`.
    embedded: Vec<Vec<f64>>,
    /// K x I active-mode positions within the alphabet, ascending.
    active: Vec<Vec<usize>>,
    combinations: Vec<ModeCombination>,
}

impl CovarianceSet {
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of hopped modes `I`.
    pub fn hop_count(&self) -> usize {
        self.i
    }

    /// Number of combinations `K = C(n_t, I)`.
    pub fn combination_count(&self) -> u64 {
        self.k
    }

    pub fn combination(&self, rank: u64) -> Result<&ModeCombination> {
        self.combinations
            .get(rank as usize)
            .ok_or(Error::RankOutOfRange { rank, k: self.k })
    }

    /// Length-`I` diagonal of `Sigma_{y,k}` restricted to the active modes.
    pub fn diag(&self, rank: u64) -> Result<Vec<f64>> {
        self.check(rank)?;
        let row = &self.embedded[rank as usize];
        Ok(self.active[rank as usize].iter().map(|&p| row[p]).collect())
    }

    /// Length-`I` diagonal of the companion noise covariance `Sigma_{w,k}`.
    pub fn noise_diag(&self, rank: u64) -> Result<Vec<f64>> {
        self.check(rank)?;
        Ok(self.active[rank as usize].iter().map(|&p| self.sigma2[p]).collect())
    }

    fn check(&self, rank: u64) -> Result<()> {
        if rank >= self.k {
            return Err(Error::RankOutOfRange { rank, k: self.k });
        }
        Ok(())
    }

    /// Per-combination `sum_l ln(diag_l)` over the embedded diagonal.
    fn ln_dets(&self) -> Vec<f64> {
        self.embedded
            .iter()
            .map(|row| row.iter().map(|v| v.ln()).sum())
            .collect()
    }

    /// Per-combination element-wise inverse of the embedded diagonal.
    fn inverses(&self) -> Vec<Vec<f64>> {
        self.embedded
            .iter()
            .map(|row| row.iter().map(|v| 1.0 / v).collect())
            .collect()
    }
}

/// Assemble the `K` diagonal covariances `Sigma_{y,k}` for hop count `i`.
pub fn build_covariances(
    gains: &ChannelGains,
    noise: &NoiseProfile,
    i: usize,
) -> Result<CovarianceSet> {
    let n_t = gains.n_t();
    if i == 0 || i > n_t {
        return Err(Error::Config(format!("need 1 <= i <= n_t, got i={i}, n_t={n_t}")));
    }
    if gains.alphabet() != noise.alphabet() {
        return Err(Error::AlphabetMismatch(
            "gains and noise cover different mode alphabets".into(),
        ));
    }
    let alphabet = gains.alphabet();
    let sigma2: Vec<f64> = alphabet
        .iter()
        .map(|&l| noise.sigma2(l))
        .collect::<Result<_>>()?;
    let gain_sq: Vec<f64> = alphabet
        .iter()
        .map(|&l| Ok(gains.gain(l)?.norm_sqr()))
        .collect::<Result<_>>()?;
    let combinations = all_combinations(n_t, i)?;
    let mut embedded = Vec::with_capacity(combinations.len());
    let mut active = Vec::with_capacity(combinations.len());
    for c in &combinations {
        let positions = c.positions(n_t)?;
        let mut row = sigma2.clone();
        for &p in &positions {
            row[p] += noise.p0 * gain_sq[p];
        }
        embedded.push(row);
        active.push(positions);
    }
    Ok(CovarianceSet {
        n_t,
        i,
        k: combinations.len() as u64,
        sigma2,
        embedded,
        active,
        combinations,
    })
}

/// Signal information `(1/K) sum_k sum_i log2(1 + P0 * gamma_{i,k})` in
/// bits/s/Hz.
pub fn signal_information(cov: &CovarianceSet) -> f64 {
    let mut acc = Kahan::default();
    for (row, positions) in cov.embedded.iter().zip(&cov.active) {
        for &p in positions {
            acc.add((row[p] / cov.sigma2[p]).log2());
        }
    }
    acc.value() / cov.k as f64
}

/// KL divergence in nats between the embedded diagonal Gaussians of ranks
/// `k` and `j`.
fn gaussian_kl_nats(k: u64, j: u64, cov: &CovarianceSet) -> Result<f64> {
    cov.check(k)?;
    cov.check(j)?;
    let a = &cov.embedded[k as usize];
    let b = &cov.embedded[j as usize];
    let mut acc = Kahan::default();
    for (&sa, &sb) in a.iter().zip(b) {
        acc.add((sb / sa).ln() + sa / sb - 1.0);
    }
    Ok(acc.value())
}

/// KL divergence `D[f(y_k) || f(y_j)]` in bits; always >= 0, zero iff the
/// diagonals are identical.
pub fn gaussian_kl(k: u64, j: u64, cov: &CovarianceSet) -> Result<f64> {
    Ok(gaussian_kl_nats(k, j, cov)? / LN_2)
}

/// Mixture-matching upper bound on `D[f(y_k) || f(y)]` in bits:
/// `-log2[(1/K) sum_j exp(-D_nats(k, j))]`. Lies in `[0, log2 K]`.
pub fn kl_mixture_upper(k: u64, cov: &CovarianceSet) -> Result<f64> {
    cov.check(k)?;
    let ln_dets = cov.ln_dets();
    let inverses = cov.inverses();
    Ok(kl_mixture_upper_inner(k as usize, cov, &ln_dets, &inverses))
}

/// Shared kernel: mixture term for rank `k` given precomputed per-combination
/// log-determinants and inverse diagonals.
fn kl_mixture_upper_inner(
    k: usize,
    cov: &CovarianceSet,
    ln_dets: &[f64],
    inverses: &[Vec<f64>],
) -> f64 {
    let row = &cov.embedded[k];
    let n = cov.n_t as f64;
    let mut acc = Kahan::default();
    for j in 0..cov.k as usize {
        // D_nats(k, j) = (ln|S_j| - ln|S_k|) + Tr(S_j^{-1} S_k) - N_t
        let inv_j = &inverses[j];
        let mut trace = 0.0;
        for (&s, &inv) in row.iter().zip(inv_j) {
            trace += s * inv;
        }
        let d = (ln_dets[j] - ln_dets[k]) + trace - n;
        acc.add((-d).exp());
    }
    -(acc.value() / cov.k as f64).ln() / LN_2
}

/// Jensen lower bound `C_low` on the achievable SE in bits/s/Hz.
///
/// The pairwise inner sums are accumulated through a shifted log-sum-exp so
/// that `|Sigma_k + Sigma_j|` never under- or overflows.
pub fn c_lower(cov: &CovarianceSet) -> f64 {
    let n = cov.n_t as f64;
    let kf = cov.k as f64;
    let rows: Vec<&Vec<f64>> = cov.embedded.iter().collect();
    // ln of the k-th inner sum: ln sum_j pi^{-N} / |S_k + S_j|
    let per_k: Vec<f64> = (0..cov.k as usize)
        .into_par_iter()
        .map(|k| {
            let row_k = rows[k];
            let mut terms = Vec::with_capacity(cov.k as usize);
            for row_j in &rows {
                let mut ln_det_sum = Kahan::default();
                for (&a, &b) in row_k.iter().zip(row_j.iter()) {
                    ln_det_sum.add((a + b).ln());
                }
                terms.push(-n * PI.ln() - ln_det_sum.value());
            }
            log_sum_exp(&terms)
        })
        .collect();
    let mut pair_acc = Kahan::default();
    for v in per_k {
        pair_acc.add(v);
    }
    let mut noise_acc = Kahan::default();
    for &s in &cov.sigma2 {
        noise_acc.add(s.log2());
    }
    (kf).log2() - noise_acc.value() - n * (PI * E).log2() - pair_acc.value() / (kf * LN_2)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|&t| (t - m).exp()).sum();
    m + sum.ln()
}

/// KL-based upper bound `C_up` in bits/s/Hz: signal information plus the
/// average mixture term over all `K` combinations (`K^2` ordered KL pairs).
///
/// The outer loop parallelizes over `k`; each per-`k` term is reduced in a
/// fixed order and the final sum is sequential, so the result is
/// bit-identical for any thread count.
pub fn c_upper_kl(cov: &CovarianceSet) -> f64 {
    let ln_dets = cov.ln_dets();
    let inverses = cov.inverses();
    let per_k: Vec<f64> = (0..cov.k as usize)
        .into_par_iter()
        .map(|k| kl_mixture_upper_inner(k, cov, &ln_dets, &inverses))
        .collect();
    let mut acc = Kahan::default();
    for v in per_k {
        acc.add(v);
    }
    signal_information(cov) + acc.value() / cov.k as f64
}

/// Simplified upper bound `C_up(I) = (I/N_t) sum_l log2(1 + P0*gamma_l) +
/// log2 C(N_t, I)` in bits/s/Hz.
pub fn c_upper_simplified(gains: &ChannelGains, noise: &NoiseProfile, i: usize) -> Result<f64> {
    let n_t = gains.n_t();
    if i == 0 || i > n_t {
        return Err(Error::Config(format!("need 1 <= i <= n_t, got i={i}, n_t={n_t}")));
    }
    let snrs = crate::channel::mode_snrs(gains, noise)?;
    let mut acc = Kahan::default();
    for gamma in snrs.values() {
        acc.add((1.0 + noise.p0 * gamma).log2());
    }
    let k = binomial(n_t as u64, i as u64)?;
    Ok(i as f64 / n_t as f64 * acc.value() + (k as f64).log2())
}

/// Closed-form lower/upper SE bound triple for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeBounds {
    pub c_low: f64,
    pub c_up_kl: f64,
    pub c_up_simplified: f64,
}

/// Evaluate all three bounds for one `(gains, noise, i)` operating point.
pub fn se_bounds(gains: &ChannelGains, noise: &NoiseProfile, i: usize) -> Result<SeBounds> {
    let cov = build_covariances(gains, noise, i)?;
    let bounds = SeBounds {
        c_low: c_lower(&cov),
        c_up_kl: c_upper_kl(&cov),
        c_up_simplified: c_upper_simplified(gains, noise, i)?,
    };
    if !(bounds.c_low.is_finite() && bounds.c_up_kl.is_finite() && bounds.c_up_simplified.is_finite())
    {
        return Err(Error::Numerical(format!("non-finite SE bounds: {bounds:?}")));
    }
    Ok(bounds)
}

/// Monte Carlo mutual-information estimate with its standard error,
/// bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: usize,
}

/// Estimate the mutual information by sampling the Gaussian mixture.
///
/// Draws `k` uniform over `K` and `y ~ CN(0, Sigma_{y,k})` in the embedded
/// mode space, estimates the mixture entropy `H(y) = -E[log2 f(y)]` in the
/// log domain, subtracts the closed-form conditional entropy given the
/// active index, and adds the closed-form signal information. The standard
/// error covers the sampled entropy term only.
pub fn monte_carlo_mutual_info(
    cov: &CovarianceSet,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_samples < 10_000 {
        return Err(Error::Config(format!(
            "monte carlo needs at least 10^4 samples, got {n_samples}"
        )));
    }
    let kf = cov.k as f64;
    let n = cov.n_t;
    let ln_dets = cov.ln_dets();
    let inverses = cov.inverses();
    let std_devs: Vec<Vec<f64>> = cov
        .embedded
        .iter()
        .map(|row| row.iter().map(|&v| v.sqrt()).collect())
        .collect();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = Kahan::default();
    let mut sum_sq = Kahan::default();
    let mut re = vec![0.0f64; n];
    let mut im = vec![0.0f64; n];
    for _ in 0..n_samples {
        let k = rng.gen_range(0..cov.k) as usize;
        for l in 0..n {
            let (a, b) = gaussian_pair(&mut rng);
            let s = std_devs[k][l] * std::f64::consts::FRAC_1_SQRT_2;
            re[l] = s * a;
            im[l] = s * b;
        }
        // ln f(y) = -N ln pi - ln K + LSE_j[-ln|S_j| - sum_l |y_l|^2 / S_{j,l}]
        let mut max_term = f64::NEG_INFINITY;
        let mut terms = vec![0.0f64; cov.k as usize];
        for (j, inv_j) in inverses.iter().enumerate() {
            let mut quad = 0.0;
            for l in 0..n {
                quad += (re[l] * re[l] + im[l] * im[l]) * inv_j[l];
            }
            let t = -ln_dets[j] - quad;
            terms[j] = t;
            max_term = max_term.max(t);
        }
        let lse: f64 = terms.iter().map(|&t| (t - max_term).exp()).sum::<f64>().ln() + max_term;
        let ln_f = -(n as f64) * PI.ln() - kf.ln() + lse;
        let bits = -ln_f / LN_2; // per-sample -log2 f(y)
        sum.add(bits);
        sum_sq.add(bits * bits);
    }
    let nf = n_samples as f64;
    let h_y = sum.value() / nf;
    let var = (sum_sq.value() / nf - h_y * h_y).max(0.0) / (nf - 1.0);
    // H(y | X) = (1/K) sum_k log2|S_k| + N log2(pi e), embedded dimensions
    let mut cond = Kahan::default();
    for &ld in &ln_dets {
        cond.add(ld / LN_2);
    }
    let h_y_given_x = cond.value() / kf + n as f64 * (PI * E).log2();
    Ok(McEstimate {
        mean: signal_information(cov) + h_y - h_y_given_x,
        std_err: var.sqrt(),
        n_samples,
    })
}

/// One pair of independent standard normal draws (Box-Muller).
fn gaussian_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * PI * u2;
    (r * theta.cos(), r * theta.sin())
}
