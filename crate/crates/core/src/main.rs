//! `oam-hopsim` command-line entry point.
//!
//! Exit codes: 0 success, 2 config error, 3 guard refusal, 4 numerical or
//! runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oam_hopsim::commands;
use oam_hopsim::config::ExperimentConfig;
use oam_hopsim::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "oam-hopsim",
    about = "Mode-hopping OAM index-modulation link simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-mode channel gains and SNRs as CSV
    ChannelGains(CommonArgs),
    /// SE bounds vs channel SNR as CSV
    SweepSnr(CommonArgs),
    /// Simplified SE bound vs hop count as CSV
    SweepHops(CommonArgs),
    /// Optimal hopped-mode-count search report
    OptimalHops {
        #[command(flatten)]
        common: CommonArgs,
        /// Also score the winning candidates with the KL-based bound
        #[arg(long)]
        rescore_kl: bool,
    },
    /// Monte Carlo mutual-information validation as CSV
    Simulate(CommonArgs),
    /// PN-driven hop pattern as CSV
    HopPattern(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key-value config file; flags below override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Proceed past the K > 20000 combination guard
    #[arg(long)]
    force: bool,
    /// Use unnormalized physical channel gains
    #[arg(long)]
    raw_channel: bool,

    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_t: Option<usize>,
    #[arg(long)]
    n_r: Option<usize>,
    #[arg(long, short = 'i')]
    i: Option<usize>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long)]
    distance: Option<f64>,
    #[arg(long)]
    carrier_hz: Option<f64>,
    #[arg(long)]
    wavelength: Option<f64>,
    #[arg(long)]
    beta_re: Option<f64>,
    #[arg(long)]
    beta_im: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    p0: Option<f64>,
    /// Comma-separated SNR points in dB
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Comma-separated hop counts for sweeps
    #[arg(long)]
    i_values: Option<String>,
    /// Comma-separated array sizes for sweeps
    #[arg(long)]
    n_t_values: Option<String>,
    #[arg(long)]
    mc_samples: Option<usize>,
    #[arg(long)]
    n_hops: Option<usize>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        fn parse_list<T: std::str::FromStr>(name: &str, raw: &str) -> Result<Vec<T>> {
            raw.split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid --{name} entry {p:?}")))
                })
                .collect()
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.n_t {
            cfg.n_t = v;
            if self.n_r.is_none() {
                cfg.n_r = v;
            }
        }
        if let Some(v) = self.n_r {
            cfg.n_r = v;
        }
        if let Some(v) = self.i {
            cfg.i = v;
        }
        if let Some(v) = self.r1 {
            cfg.r1 = v;
        }
        if let Some(v) = self.r2 {
            cfg.r2 = v;
        }
        if let Some(v) = self.distance {
            cfg.d = v;
        }
        if let Some(v) = self.carrier_hz {
            cfg.carrier_hz = Some(v);
            cfg.wavelength = None;
        }
        if let Some(v) = self.wavelength {
            cfg.wavelength = Some(v);
            cfg.carrier_hz = None;
        }
        if self.carrier_hz.is_some() && self.wavelength.is_some() {
            return Err(Error::Config(
                "give exactly one of --carrier-hz / --wavelength".into(),
            ));
        }
        if let Some(v) = self.beta_re {
            cfg.beta_re = v;
        }
        if let Some(v) = self.beta_im {
            cfg.beta_im = v;
        }
        if let Some(v) = self.phi {
            cfg.phi = v;
        }
        if let Some(v) = self.p0 {
            cfg.p0 = v;
        }
        if let Some(raw) = &self.snr_db {
            cfg.snr_db = parse_list("snr-db", raw)?;
        }
        if let Some(raw) = &self.i_values {
            cfg.i_values = parse_list("i-values", raw)?;
        }
        if let Some(raw) = &self.n_t_values {
            cfg.n_t_values = parse_list("n-t-values", raw)?;
        }
        if let Some(v) = self.mc_samples {
            cfg.mc_samples = v;
        }
        if let Some(v) = self.n_hops {
            cfg.n_hops = v;
        }
        if self.raw_channel {
            cfg.normalize = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    let (common, output) = match &cli.command {
        Command::ChannelGains(c) => (c, commands::cmd_channel_gains(&c.resolve()?)?),
        Command::SweepSnr(c) => (c, commands::cmd_sweep_snr(&c.resolve()?, c.force)?),
        Command::SweepHops(c) => (c, commands::cmd_sweep_hops(&c.resolve()?)?),
        Command::OptimalHops { common, rescore_kl } => (
            common,
            commands::cmd_optimal_hops(&common.resolve()?, *rescore_kl)?,
        ),
        Command::Simulate(c) => (c, commands::cmd_simulate(&c.resolve()?, c.force)?),
        Command::HopPattern(c) => (c, commands::cmd_hop_pattern(&c.resolve()?)?),
    };
    common.emit(&output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
