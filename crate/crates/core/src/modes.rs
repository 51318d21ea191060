//! Index-modulation combinatorics: I-of-N_t mode combinations, the
//! combinadic rank/unrank bijection, bit mapping, and PN-driven hop patterns.

use crate::channel::mode_alphabet;
use crate::error::{Error, Result};

/// Exact binomial coefficient `C(n, k)` for `n <= 64`.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n || n > 64 {
        return Err(Error::BinomialRange { n, k });
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k as u128 {
        result = result * (n as u128 - k as u128 + i) / i;
    }
    u64::try_from(result).map_err(|_| Error::BinomialRange { n, k })
}

/// A sorted set of `I` distinct active OAM modes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeCombination {
    modes: Vec<i64>,
}

impl ModeCombination {
    /// Build from a strictly ascending mode list.
    pub fn new(modes: Vec<i64>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::MalformedCombination("empty combination".into()));
        }
        if modes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedCombination(format!(
                "modes must be strictly ascending, got {modes:?}"
            )));
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    /// Number of active modes `I`.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one mode
    }

    pub fn contains(&self, l: i64) -> bool {
        self.modes.binary_search(&l).is_ok()
    }

    /// Zero-based positions of the active modes within the canonical alphabet
    /// of `n_t`, ascending.
    pub fn positions(&self, n_t: usize) -> Result<Vec<usize>> {
        let alphabet = mode_alphabet(n_t);
        self.modes
            .iter()
            .map(|&l| {
                alphabet
                    .binary_search(&l)
                    .map_err(|_| Error::ModeOutOfAlphabet(l))
            })
            .collect()
    }
}

/// Combinadic (lexicographic) rank of a combination within the
/// `C(n_t, I)`-element space over the canonical alphabet.
pub fn rank(c: &ModeCombination, n_t: usize) -> Result<u64> {
    let positions = c.positions(n_t)?;
    let i = positions.len();
    let mut r: u64 = 0;
    for (slot, &p) in positions.iter().enumerate() {
        let start = if slot == 0 { 0 } else { positions[slot - 1] + 1 };
        for q in start..p {
            r += binomial((n_t - q - 1) as u64, (i - slot - 1) as u64)?;
        }
    }
    Ok(r)
}

/// Inverse of [`rank`]: the `r`-th combination of `i` modes in lexicographic
/// order over the canonical alphabet of `n_t`.
pub fn unrank(r: u64, n_t: usize, i: usize) -> Result<ModeCombination> {
    if i == 0 || i > n_t {
        return Err(Error::MalformedCombination(format!(
            "need 1 <= i <= n_t, got i={i}, n_t={n_t}"
        )));
    }
    let k = binomial(n_t as u64, i as u64)?;
    if r >= k {
        return Err(Error::RankOutOfRange { rank: r, k });
    }
    let alphabet = mode_alphabet(n_t);
    let mut remaining = r;
    let mut modes = Vec::with_capacity(i);
    let mut next = 0usize;
    for slot in 0..i {
        let mut p = next;
        loop {
            let below = binomial((n_t - p - 1) as u64, (i - slot - 1) as u64)?;
            if below <= remaining {
                remaining -= below;
                p += 1;
            } else {
                modes.push(alphabet[p]);
                next = p + 1;
                break;
            }
        }
    }
    ModeCombination::new(modes)
}

/// All `C(n_t, i)` combinations in rank order.
pub fn all_combinations(n_t: usize, i: usize) -> Result<Vec<ModeCombination>> {
    let k = binomial(n_t as u64, i as u64)?;
    (0..k).map(|r| unrank(r, n_t, i)).collect()
}

/// Map an index bit-string (MSB first, length exactly `floor(log2 K)`) to a
/// combination. Truncates the combination space to the largest addressable
/// power of two.
pub fn bits_to_combination(bits: &[bool], n_t: usize, i: usize) -> Result<ModeCombination> {
    let k = binomial(n_t as u64, i as u64)?;
    let expected = 63 - k.leading_zeros() as usize; // floor(log2 K), K >= 1
    if bits.len() != expected {
        return Err(Error::BitLength { got: bits.len(), expected });
    }
    let r = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    unrank(r, n_t, i)
}

/// Pseudo-noise generator driving the hop pattern.
///
/// xorshift64* with the fixed update
///
/// ```text
/// x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
/// ```
///
/// A zero seed (invalid for xorshift) is remapped to a fixed nonzero
/// constant, so every 64-bit seed is accepted.
#[derive(Debug, Clone)]
pub struct PnGenerator {
    state: u64,
}

impl PnGenerator {
    const ZERO_SEED_SUBSTITUTE: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { Self::ZERO_SEED_SUBSTITUTE } else { seed };
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform draw in `[0, bound)` by rejection sampling; no modulo bias.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        if bound == 1 {
            return 0;
        }
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// A PN-driven sequence of combination ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopPattern {
    pub seed: u64,
    pub n_t: usize,
    pub i: usize,
    pub hops: Vec<u64>,
}

impl HopPattern {
    /// CSV serialization: header plus `hop_index,rank,mode_1,...,mode_I` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("hop_index,rank");
        for m in 1..=self.i {
            out.push_str(&format!(",mode_{m}"));
        }
        out.push('\n');
        for (idx, &r) in self.hops.iter().enumerate() {
            let c = unrank(r, self.n_t, self.i)?;
            out.push_str(&format!("{idx},{r}"));
            for l in c.modes() {
                out.push_str(&format!(",{l}"));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Generate `n_hops` combination ranks, each uniform over `[0, K)`,
/// reproducible from the seed.
pub fn generate_hop_pattern(seed: u64, n_hops: usize, n_t: usize, i: usize) -> Result<HopPattern> {
    if n_hops == 0 {
        return Err(Error::Config("n_hops must be >= 1".into()));
    }
    let k = binomial(n_t as u64, i as u64)?;
    if k == 0 {
        return Err(Error::MalformedCombination(format!("i={i} > n_t={n_t}")));
    }
    let mut png = PnGenerator::new(seed);
    let hops = (0..n_hops).map(|_| png.next_below(k)).collect();
    Ok(HopPattern { seed, n_t, i, hops })
}
