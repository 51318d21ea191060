//! Optimal hopped-mode-count search.
//!
//! The simplified upper bound `C_up(I)` extends to a smooth function of the
//! hop count whose derivative, through the digamma recurrence, reduces to
//! harmonic numbers:
//!
//! ```text
//! f'(I) = s - (H_I - H_{N_t - I}) / ln 2,
//! s = (1/N_t) sum_l log2(1 + P0 * gamma_l)
//! ```
//!
//! `f'` is strictly decreasing in `I`, so there is at most one sign change
//! `I_0` with `f'(I_0) >= 0 > f'(I_0 + 1)`, and the discrete maximizer is one
//! of `{I_0, I_0 + 1}`. When `f'` never changes sign (high-SNR regime) the
//! profile is scanned directly.

use crate::bounds::c_upper_simplified;
use crate::channel::{mode_snrs, ChannelGains, NoiseProfile};
use crate::error::Result;

/// Harmonic number `H_n = sum_{i=1}^{n} 1/i`; `H_0 = 0`.
///
/// Realizes the digamma value `Q(n+1) = H_n - zeta` up to the shared
/// Euler-Mascheroni offset, which cancels in every difference used here.
pub fn harmonic(n: u64) -> f64 {
    // summed smallest-term-first to limit rounding drift for large n
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Derivative of the continuous hop-count relaxation at integer `i`.
///
/// `signal_term` is `(1/N_t) sum_l log2(1 + P0 * gamma_l)`.
pub fn f_prime(n_t: usize, i: usize, signal_term: f64) -> f64 {
    debug_assert!(i >= 1 && i < n_t);
    signal_term - (harmonic(i as u64) - harmonic((n_t - i) as u64)) / std::f64::consts::LN_2
}

/// Result of the hop-count search.
#[derive(Debug, Clone, PartialEq)]
pub struct HopCountSearchResult {
    /// Sign-change point `I_0` with `f'(I_0) >= 0 > f'(I_0 + 1)`, when one
    /// exists inside `1..n_t-1`.
    pub i0: Option<usize>,
    /// SE-maximizing hop count.
    pub i_star: usize,
    /// Maximum SE `C*` in bits/s/Hz.
    pub c_star: f64,
    /// Derivative trace `f'(I)` for `I = 1..n_t-1`.
    pub f_prime: Vec<(usize, f64)>,
    /// Simplified upper bound profile `C_up(I)` for `I = 1..n_t`.
    pub c_up_profile: Vec<(usize, f64)>,
}

/// Locate the SE-maximizing hop count for the given channel.
///
/// Uses the derivative sign change when it exists; the full profile is
/// always evaluated and cross-checked, and is the fallback in the monotone
/// high-SNR case.
pub fn find_optimal_hops(
    gains: &ChannelGains,
    noise: &NoiseProfile,
) -> Result<HopCountSearchResult> {
    let n_t = gains.n_t();
    let snrs = mode_snrs(gains, noise)?;
    let signal_term: f64 = snrs
        .values()
        .map(|g| (1.0 + noise.p0 * g).log2())
        .sum::<f64>()
        / n_t as f64;

    let derivative: Vec<(usize, f64)> = (1..n_t)
        .map(|i| (i, f_prime(n_t, i, signal_term)))
        .collect();
    let profile: Vec<(usize, f64)> = (1..=n_t)
        .map(|i| Ok((i, c_upper_simplified(gains, noise, i)?)))
        .collect::<Result<_>>()?;

    let i0 = derivative
        .windows(2)
        .find(|w| w[0].1 >= 0.0 && w[1].1 < 0.0)
        .map(|w| w[0].0);

    let profile_argmax = profile
        .iter()
        .copied()
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite SE profile"))
        .expect("non-empty profile");

    let (i_star, c_star) = match i0 {
        Some(i0) => {
            let a = profile[i0 - 1];
            let b = profile[i0];
            if a.1 >= b.1 {
                a
            } else {
                b
            }
        }
        None => profile_argmax,
    };

    Ok(HopCountSearchResult {
        i0,
        i_star,
        c_star,
        f_prime: derivative,
        c_up_profile: profile,
    })
}

/// Re-score candidate hop counts with the full KL-based upper bound.
pub fn rescore_with_kl(
    gains: &ChannelGains,
    noise: &NoiseProfile,
    candidates: &[usize],
) -> Result<Vec<(usize, f64)>> {
    candidates
        .iter()
        .map(|&i| {
            let cov = crate::bounds::build_covariances(gains, noise, i)?;
            Ok((i, crate::bounds::c_upper_kl(&cov)))
        })
        .collect()
}
