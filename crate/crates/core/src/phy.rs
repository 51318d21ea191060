//! Mode-domain signal chain: element-array synthesis, channel application,
//! DFT decomposition, and active-mode selection.
//!
//! Synthesis follows the raw element sum `x_n = sum_i s_i exp(j*2*pi*n*l_i/N)`;
//! decomposition applies the matched `1/N`-scaled inverse, so a noiseless
//! loopback through the diagonal channel returns exactly `h_l * s_l` on the
//! active bins. Noise is generated directly in the mode domain with the
//! per-mode variances of the [`NoiseProfile`], which keeps the mode-domain
//! noise statistics identical to what the bound machinery assumes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::channel::{mode_alphabet, ChannelGains, NoiseProfile};
use crate::error::{Error, Result};
use crate::modes::ModeCombination;

/// Complex symbols carried on one mode combination.
#[derive(Debug, Clone)]
pub struct ModeSymbols {
    pub combination: ModeCombination,
    /// One symbol per active mode, aligned with the combination order.
    pub symbols: Vec<Complex64>,
}

impl ModeSymbols {
    pub fn new(combination: ModeCombination, symbols: Vec<Complex64>) -> Result<Self> {
        if symbols.len() != combination.len() {
            return Err(Error::LengthMismatch {
                expected: combination.len(),
                got: symbols.len(),
            });
        }
        Ok(Self { combination, symbols })
    }
}

/// Per-element transmit samples, one per transmit element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSignals {
    pub samples: Vec<Complex64>,
}

fn phase(n: usize, l: i64, n_elems: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * n as f64 * l as f64 / n_elems as f64)
}

/// Element-array synthesis: `x_n = sum_i s_i exp(j*2*pi*n*l_i/n_t)`.
pub fn synthesize(sym: &ModeSymbols, n_t: usize) -> Result<ElementSignals> {
    sym.combination.positions(n_t)?; // validates the combination against n_t
    let samples = (0..n_t)
        .map(|n| {
            sym.combination
                .modes()
                .iter()
                .zip(&sym.symbols)
                .map(|(&l, &s)| s * phase(n, l, n_t))
                .sum()
        })
        .collect();
    Ok(ElementSignals { samples })
}

/// DFT decomposition into mode bins: `bin_l = (1/n_r) sum_n r_n exp(-j*2*pi*n*l/n_r)`.
pub fn decompose(received: &[Complex64], n_r: usize) -> Result<BTreeMap<i64, Complex64>> {
    if received.len() != n_r {
        return Err(Error::LengthMismatch { expected: n_r, got: received.len() });
    }
    let scale = 1.0 / n_r as f64;
    Ok(mode_alphabet(n_r)
        .into_iter()
        .map(|l| {
            let bin: Complex64 = received
                .iter()
                .enumerate()
                .map(|(n, &r)| r * phase(n, l, n_r).conj())
                .sum();
            (l, bin * scale)
        })
        .collect())
}

/// Apply the mode-diagonal channel plus circularly-symmetric complex Gaussian
/// noise. Noise draws are reproducible from `rng_seed`; with all noise
/// variances effectively zero the channel is deterministic.
pub fn apply_channel(
    x: &ElementSignals,
    gains: &ChannelGains,
    noise: &NoiseProfile,
    rng_seed: u64,
) -> Result<Vec<Complex64>> {
    let n_t = gains.n_t();
    let n_r = gains.geometry().n_r;
    if n_r != n_t {
        return Err(Error::InvalidGeometry(format!(
            "mode-diagonal channel requires n_r == n_t, got n_r={n_r}, n_t={n_t}"
        )));
    }
    if gains.alphabet() != noise.alphabet() {
        return Err(Error::AlphabetMismatch(
            "gains and noise cover different mode alphabets".into(),
        ));
    }
    let mode_bins = decompose(&x.samples, n_t)?;
    let mut rng = ChaCha12Rng::seed_from_u64(rng_seed);
    let mut filtered = BTreeMap::new();
    for (l, bin) in mode_bins {
        let h = gains.gain(l)?;
        let sigma2 = noise.sigma2(l)?;
        let w = complex_gaussian(&mut rng, sigma2);
        filtered.insert(l, h * bin + w);
    }
    // Back to the element domain through the raw synthesis sum.
    Ok((0..n_t)
        .map(|n| filtered.iter().map(|(&l, &m)| m * phase(n, l, n_t)).sum())
        .collect())
}

/// One draw of CN(0, sigma2) via Box-Muller.
fn complex_gaussian<R: Rng>(rng: &mut R, sigma2: f64) -> Complex64 {
    if sigma2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    let radius = (sigma2 * -u1.ln()).sqrt();
    Complex64::from_polar(radius, 2.0 * PI * u2)
}

/// Filter the decomposed bins down to the active combination, in combination
/// order.
pub fn select_modes(
    decomposed: &BTreeMap<i64, Complex64>,
    c: &ModeCombination,
) -> Result<Vec<Complex64>> {
    c.modes()
        .iter()
        .map(|&l| decomposed.get(&l).copied().ok_or(Error::ModeOutOfAlphabet(l)))
        .collect()
}

/// The unitary DFT matrix `F_u[n][l] = exp(-j*2*pi*n*l/n) / sqrt(n)` over the
/// canonical mode alphabet, row-major by element index.
pub fn unitary_dft(n: usize) -> Vec<Vec<Complex64>> {
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|row| {
            mode_alphabet(n)
                .into_iter()
                .map(|l| phase(row, l, n).conj() * scale)
                .collect()
        })
        .collect()
}
