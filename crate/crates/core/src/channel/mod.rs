//! Line-of-sight UCA channel: per-mode complex gains and SNRs.
//!
//! The transmit and receive arrays are uniform circular arrays facing each
//! other on a common axis. In the mode domain the channel is diagonal, with
//! per-mode gain
//!
//! ```text
//! h_l = beta * lambda * N_t * j^{-l} * exp(-j*(2*pi/lambda)*s) / (4*pi*s)
//!       * exp(j*phi*l) * J_l(2*pi*R1*R2 / (lambda*s)),     s = sqrt(D^2 + R1^2 + R2^2)
//! ```

mod bessel;

pub use bessel::{bessel_j, MAX_ARGUMENT, MAX_ORDER};

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wavelength in meters for a carrier frequency in Hz.
pub fn wavelength_from_carrier(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_hz
}

/// Canonical OAM-mode alphabet for an `n_t`-element transmit UCA:
/// `{-floor(n_t/2)+1, ..., ceil(n_t/2)}`, ascending.
pub fn mode_alphabet(n_t: usize) -> Vec<i64> {
    let lo = -((n_t / 2) as i64) + 1;
    let hi = ((n_t + 1) / 2) as i64;
    (lo..=hi).collect()
}

/// Physical description of the UCA transceiver pair.
#[derive(Debug, Clone, PartialEq)]
pub struct UcaGeometry {
    /// Transmit element count.
    pub n_t: usize,
    /// Receive element count. The diagonal mode-domain decomposition needs
    /// `n_r == n_t`; the channel gain itself only involves `n_t`.
    pub n_r: usize,
    /// Transmit UCA radius, meters.
    pub r1: f64,
    /// Receive UCA radius, meters.
    pub r2: f64,
    /// Axial transmitter-to-receiver distance, meters.
    pub d: f64,
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    /// Aggregate antenna/attenuation constant.
    pub beta: Complex64,
    /// Azimuth phase offset, radians; enters as `exp(j*phi*l)`.
    pub phi: f64,
}

impl UcaGeometry {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_t: usize,
        n_r: usize,
        r1: f64,
        r2: f64,
        d: f64,
        wavelength: f64,
        beta: Complex64,
        phi: f64,
    ) -> Result<Self> {
        if n_t < 2 || n_r < 2 {
            return Err(Error::InvalidGeometry(format!(
                "element counts must be >= 2, got n_t={n_t}, n_r={n_r}"
            )));
        }
        for (name, v) in [("r1", r1), ("r2", r2), ("d", d), ("wavelength", wavelength)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidGeometry(format!("{name} must be > 0, got {v}")));
            }
        }
        if !beta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidGeometry("beta and phi must be finite".into()));
        }
        Ok(Self { n_t, n_r, r1, r2, d, wavelength, beta, phi })
    }

    /// Canonical mode alphabet derived from `n_t`.
    pub fn alphabet(&self) -> Vec<i64> {
        mode_alphabet(self.n_t)
    }

    /// Slant distance `sqrt(D^2 + R1^2 + R2^2)`.
    fn slant(&self) -> f64 {
        (self.d * self.d + self.r1 * self.r1 + self.r2 * self.r2).sqrt()
    }

    /// Bessel argument `2*pi*R1*R2 / (lambda * slant)`.
    pub fn bessel_argument(&self) -> f64 {
        2.0 * PI * self.r1 * self.r2 / (self.wavelength * self.slant())
    }
}

/// `j^{-l}` for integer `l`, exact on the unit circle.
fn j_pow_neg(l: i64) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Complex line-of-sight gain `h_l` for one mode.
pub fn channel_gain(geom: &UcaGeometry, l: i64) -> Result<Complex64> {
    if !geom.alphabet().contains(&l) {
        return Err(Error::ModeOutOfAlphabet(l));
    }
    let s = geom.slant();
    let amplitude = geom.beta * geom.wavelength * geom.n_t as f64 / (4.0 * PI * s);
    let propagation = Complex64::from_polar(1.0, -2.0 * PI / geom.wavelength * s);
    let azimuth = Complex64::from_polar(1.0, geom.phi * l as f64);
    let bessel = bessel_j(l, geom.bessel_argument())?;
    Ok(amplitude * j_pow_neg(l) * propagation * azimuth * bessel)
}

/// Per-mode complex channel gains over the canonical alphabet.
#[derive(Debug, Clone)]
pub struct ChannelGains {
    gains: BTreeMap<i64, Complex64>,
    geometry: UcaGeometry,
}

impl ChannelGains {
    /// Evaluate the gain for every mode of the alphabet.
    pub fn compute(geom: &UcaGeometry) -> Result<Self> {
        let mut gains = BTreeMap::new();
        for l in geom.alphabet() {
            gains.insert(l, channel_gain(geom, l)?);
        }
        Ok(Self { gains, geometry: geom.clone() })
    }

    /// Like [`ChannelGains::compute`], then rescaled so that the mean squared
    /// magnitude over the alphabet is 1. Makes sweep shapes independent of
    /// `beta` and the absolute link budget.
    pub fn compute_normalized(geom: &UcaGeometry) -> Result<Self> {
        let mut out = Self::compute(geom)?;
        let mean_sq: f64 =
            out.gains.values().map(|h| h.norm_sqr()).sum::<f64>() / geom.n_t as f64;
        if mean_sq <= 0.0 {
            return Err(Error::Numerical(
                "cannot normalize: all channel gains are zero".into(),
            ));
        }
        let scale = mean_sq.sqrt().recip();
        for h in out.gains.values_mut() {
            *h *= scale;
        }
        Ok(out)
    }

    /// Build from an explicit mode -> gain map. The map must cover exactly the
    /// canonical alphabet of `geom`.
    pub fn from_gains(geom: &UcaGeometry, gains: BTreeMap<i64, Complex64>) -> Result<Self> {
        let alphabet = geom.alphabet();
        if gains.len() != alphabet.len() || alphabet.iter().any(|l| !gains.contains_key(l)) {
            return Err(Error::AlphabetMismatch(format!(
                "gain map does not cover the alphabet of n_t={}",
                geom.n_t
            )));
        }
        Ok(Self { gains, geometry: geom.clone() })
    }

    pub fn geometry(&self) -> &UcaGeometry {
        &self.geometry
    }

    pub fn gain(&self, l: i64) -> Result<Complex64> {
        self.gains.get(&l).copied().ok_or(Error::ModeOutOfAlphabet(l))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.gains.iter().map(|(&l, &h)| (l, h))
    }

    pub fn alphabet(&self) -> Vec<i64> {
        self.gains.keys().copied().collect()
    }

    pub fn n_t(&self) -> usize {
        self.geometry.n_t
    }
}

/// Per-mode noise variances and the common per-active-mode transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile {
    sigma2: BTreeMap<i64, f64>,
    /// Transmit power per active mode, watts.
    pub p0: f64,
}

impl NoiseProfile {
    /// Common noise variance across every mode of the alphabet.
    pub fn uniform(n_t: usize, sigma2: f64, p0: f64) -> Result<Self> {
        let map = mode_alphabet(n_t).into_iter().map(|l| (l, sigma2)).collect();
        Self::from_map(map, p0)
    }

    pub fn from_map(sigma2: BTreeMap<i64, f64>, p0: f64) -> Result<Self> {
        if sigma2.is_empty() || sigma2.values().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::Config("noise variances must all be > 0".into()));
        }
        if !(p0.is_finite() && p0 >= 0.0) {
            return Err(Error::Config(format!("p0 must be >= 0, got {p0}")));
        }
        Ok(Self { sigma2, p0 })
    }

    pub fn sigma2(&self, l: i64) -> Result<f64> {
        self.sigma2.get(&l).copied().ok_or(Error::ModeOutOfAlphabet(l))
    }

    pub fn alphabet(&self) -> Vec<i64> {
        self.sigma2.keys().copied().collect()
    }
}

/// Per-mode SNRs `gamma_l = |h_l|^2 / sigma_l^2`.
pub fn mode_snrs(gains: &ChannelGains, noise: &NoiseProfile) -> Result<BTreeMap<i64, f64>> {
    if gains.alphabet() != noise.alphabet() {
        return Err(Error::AlphabetMismatch(
            "gains and noise cover different mode alphabets".into(),
        ));
    }
    gains
        .iter()
        .map(|(l, h)| Ok((l, h.norm_sqr() / noise.sigma2(l)?)))
        .collect()
}
