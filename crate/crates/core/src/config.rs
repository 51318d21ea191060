//! Experiment configuration: defaults, flat key-value file parsing, and
//! resolution into channel objects.
//!
//! The file format is one `key = value` pair per line, `#` starts a comment,
//! lists are comma-separated. Every key can be overridden by a command-line
//! flag; flags win.

use num_complex::Complex64;

use crate::channel::{
    wavelength_from_carrier, ChannelGains, NoiseProfile, UcaGeometry,
};
use crate::error::{Error, Result};

/// Full description of one experiment run.
///
/// Defaults mirror the evaluation setup: 60 GHz carrier, 3 m link distance,
/// 1 W per active mode. The radii are not dictated by that setup; the
/// 0.05 m defaults put the Bessel argument in a non-degenerate regime.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub i: usize,
    pub r1: f64,
    pub r2: f64,
    pub d: f64,
    /// Exactly one of `carrier_hz` / `wavelength` may be set; with neither,
    /// the 60 GHz default applies.
    pub carrier_hz: Option<f64>,
    pub wavelength: Option<f64>,
    pub beta_re: f64,
    pub beta_im: f64,
    pub phi: f64,
    pub p0: f64,
    /// Channel-SNR sweep points in dB; SNR is defined as `P0 / sigma^2`.
    pub snr_db: Vec<f64>,
    /// Hop counts for multi-`I` sweeps.
    pub i_values: Vec<usize>,
    /// Transmit-array sizes for multi-`N_t` sweeps.
    pub n_t_values: Vec<usize>,
    /// Normalize gains to unit mean square (default); `--raw-channel`
    /// switches to the unnormalized physical gains.
    pub normalize: bool,
    pub mc_samples: usize,
    pub n_hops: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_t: 16,
            n_r: 16,
            i: 3,
            r1: 0.05,
            r2: 0.05,
            d: 3.0,
            carrier_hz: None,
            wavelength: None,
            beta_re: 1.0,
            beta_im: 0.0,
            phi: 0.0,
            p0: 1.0,
            snr_db: (-10..=20).step_by(2).map(f64::from).collect(),
            i_values: vec![4, 6, 9, 12, 16],
            n_t_values: vec![4, 8, 12, 16],
            normalize: true,
            mc_samples: 100_000,
            n_hops: 20,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    /// Parse the flat key-value text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", line_no + 1))
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", line_no + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value for {key}: {v:?}")))
        }
        fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
            v.split(',').map(|p| num(key, p.trim())).collect()
        }
        match key {
            "n_t" => self.n_t = num(key, value)?,
            "n_r" => self.n_r = num(key, value)?,
            "i" => self.i = num(key, value)?,
            "r1" => self.r1 = num(key, value)?,
            "r2" => self.r2 = num(key, value)?,
            "d" => self.d = num(key, value)?,
            "carrier_hz" => self.carrier_hz = Some(num(key, value)?),
            "wavelength" => self.wavelength = Some(num(key, value)?),
            "beta_re" => self.beta_re = num(key, value)?,
            "beta_im" => self.beta_im = num(key, value)?,
            "phi" => self.phi = num(key, value)?,
            "p0" => self.p0 = num(key, value)?,
            "snr_db" => self.snr_db = list(key, value)?,
            "i_values" => self.i_values = list(key, value)?,
            "n_t_values" => self.n_t_values = list(key, value)?,
            "normalize" => self.normalize = num(key, value)?,
            "mc_samples" => self.mc_samples = num(key, value)?,
            "n_hops" => self.n_hops = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.carrier_hz.is_some() && self.wavelength.is_some() {
            return Err(Error::Config(
                "give exactly one of carrier_hz / wavelength, not both".into(),
            ));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("snr_db must be non-empty".into()));
        }
        if self.snr_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("snr_db values must be finite".into()));
        }
        if self.i_values.is_empty() || self.n_t_values.is_empty() {
            return Err(Error::Config("i_values and n_t_values must be non-empty".into()));
        }
        if self.i == 0 || self.i > self.n_t {
            return Err(Error::Config(format!(
                "need 1 <= i <= n_t, got i={}, n_t={}",
                self.i, self.n_t
            )));
        }
        if !(self.p0.is_finite() && self.p0 >= 0.0) {
            return Err(Error::Config(format!("p0 must be >= 0, got {}", self.p0)));
        }
        Ok(())
    }

    /// Serialize back to the flat key-value format; `parse` of the output
    /// reproduces the config exactly.
    pub fn to_text(&self) -> String {
        fn join<T: std::fmt::Display>(items: &[T]) -> String {
            items
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        let mut out = String::new();
        out.push_str(&format!("n_t = {}\n", self.n_t));
        out.push_str(&format!("n_r = {}\n", self.n_r));
        out.push_str(&format!("i = {}\n", self.i));
        out.push_str(&format!("r1 = {}\n", self.r1));
        out.push_str(&format!("r2 = {}\n", self.r2));
        out.push_str(&format!("d = {}\n", self.d));
        if let Some(c) = self.carrier_hz {
            out.push_str(&format!("carrier_hz = {c}\n"));
        }
        if let Some(w) = self.wavelength {
            out.push_str(&format!("wavelength = {w}\n"));
        }
        out.push_str(&format!("beta_re = {}\n", self.beta_re));
        out.push_str(&format!("beta_im = {}\n", self.beta_im));
        out.push_str(&format!("phi = {}\n", self.phi));
        out.push_str(&format!("p0 = {}\n", self.p0));
        out.push_str(&format!("snr_db = {}\n", join(&self.snr_db)));
        out.push_str(&format!("i_values = {}\n", join(&self.i_values)));
        out.push_str(&format!("n_t_values = {}\n", join(&self.n_t_values)));
        out.push_str(&format!("normalize = {}\n", self.normalize));
        out.push_str(&format!("mc_samples = {}\n", self.mc_samples));
        out.push_str(&format!("n_hops = {}\n", self.n_hops));
        out.push_str(&format!("seed = {}\n", self.seed));
        out
    }

    /// Resolved carrier wavelength in meters.
    pub fn resolved_wavelength(&self) -> f64 {
        match (self.carrier_hz, self.wavelength) {
            (_, Some(w)) => w,
            (Some(c), None) => wavelength_from_carrier(c),
            (None, None) => wavelength_from_carrier(60.0e9),
        }
    }

    /// Geometry for a given array size (the sweep commands vary `n_t`).
    pub fn geometry_for(&self, n_t: usize) -> Result<UcaGeometry> {
        UcaGeometry::new(
            n_t,
            n_t,
            self.r1,
            self.r2,
            self.d,
            self.resolved_wavelength(),
            Complex64::new(self.beta_re, self.beta_im),
            self.phi,
        )
    }

    pub fn geometry(&self) -> Result<UcaGeometry> {
        if self.n_r != self.n_t {
            return Err(Error::Config(format!(
                "n_r must equal n_t for the diagonal mode channel, got n_r={}, n_t={}",
                self.n_r, self.n_t
            )));
        }
        self.geometry_for(self.n_t)
    }

    /// Channel gains honoring the normalization flag.
    pub fn gains_for(&self, n_t: usize) -> Result<ChannelGains> {
        let geom = self.geometry_for(n_t)?;
        if self.normalize {
            ChannelGains::compute_normalized(&geom)
        } else {
            ChannelGains::compute(&geom)
        }
    }

    /// Noise profile realizing one channel-SNR point: `sigma^2 = P0 / snr`.
    ///
    /// With `p0 = 0` the SNR axis is meaningless; a unit noise floor is used
    /// so the zero-power limit stays well defined.
    pub fn noise_for(&self, n_t: usize, snr_db: f64) -> Result<NoiseProfile> {
        let snr = 10f64.powf(snr_db / 10.0);
        let sigma2 = if self.p0 > 0.0 { self.p0 / snr } else { 1.0 };
        NoiseProfile::uniform(n_t, sigma2, self.p0)
    }
}
