//! CLI command implementations. Each command renders deterministic CSV (or a
//! plain-text report) for a resolved [`ExperimentConfig`].

use rayon::prelude::*;

use crate::bounds::{
    build_covariances, c_upper_simplified, monte_carlo_mutual_info, se_bounds,
};
use crate::channel::mode_snrs;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::modes::{binomial, generate_hop_pattern};
use crate::optimizer::find_optimal_hops;

/// Above this combination count the pairwise bounds are refused without
/// `--force` (the K^2 loops grow quadratically).
pub const COMBINATION_GUARD: u64 = 20_000;

/// 12 significant digits, '.' decimal separator.
fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

fn guard_k(n_t: usize, i: usize, force: bool) -> Result<u64> {
    let k = binomial(n_t as u64, i as u64)?;
    if k > COMBINATION_GUARD && !force {
        return Err(Error::CombinationGuard { k, limit: COMBINATION_GUARD });
    }
    Ok(k)
}

/// `channel-gains`: rows `l, re_h, im_h, abs_h, gamma` for the configured
/// geometry at the first SNR point.
pub fn cmd_channel_gains(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let gains = cfg.gains_for(cfg.n_t)?;
    let noise = cfg.noise_for(cfg.n_t, cfg.snr_db[0])?;
    let snrs = mode_snrs(&gains, &noise)?;
    let mut out = String::from("l,re_h,im_h,abs_h,gamma\n");
    for (l, h) in gains.iter() {
        out.push_str(&format!(
            "{l},{},{},{},{}\n",
            fmt(h.re),
            fmt(h.im),
            fmt(h.norm()),
            fmt(snrs[&l])
        ));
    }
    Ok(out)
}

/// `sweep-snr`: rows `snr_db, n_t, i, c_low, c_up_kl, c_up_simplified` over
/// the cartesian product of the configured SNR, `n_t`, and `i` lists.
pub fn cmd_sweep_snr(cfg: &ExperimentConfig, force: bool) -> Result<String> {
    cfg.validate()?;
    let mut points = Vec::new();
    for &n_t in &cfg.n_t_values {
        for &i in &cfg.i_values {
            if i > n_t {
                continue;
            }
            guard_k(n_t, i, force)?;
            for &snr_db in &cfg.snr_db {
                points.push((snr_db, n_t, i));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Config("no (n_t, i) pair with i <= n_t".into()));
    }
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(snr_db, n_t, i)| {
            let gains = cfg.gains_for(n_t)?;
            let noise = cfg.noise_for(n_t, snr_db)?;
            let b = se_bounds(&gains, &noise, i)?;
            Ok(format!(
                "{snr_db},{n_t},{i},{},{},{}",
                fmt(b.c_low),
                fmt(b.c_up_kl),
                fmt(b.c_up_simplified)
            ))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("snr_db,n_t,i,c_low,c_up_kl,c_up_simplified\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// `sweep-hops`: rows `snr_db, i, c_up_simplified, argmax_i` over every SNR
/// point and `I = 1..=n_t`.
pub fn cmd_sweep_hops(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let n_t = cfg.n_t;
    let gains = cfg.gains_for(n_t)?;
    let per_snr: Vec<(f64, Vec<f64>, usize)> = cfg
        .snr_db
        .par_iter()
        .map(|&snr_db| {
            let noise = cfg.noise_for(n_t, snr_db)?;
            let profile: Vec<f64> = (1..=n_t)
                .map(|i| c_upper_simplified(&gains, &noise, i))
                .collect::<Result<_>>()?;
            let argmax = profile
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite SE"))
                .map(|(idx, _)| idx + 1)
                .expect("non-empty profile");
            Ok((snr_db, profile, argmax))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("snr_db,i,c_up_simplified,argmax_i\n");
    for (snr_db, profile, argmax) in per_snr {
        for (idx, v) in profile.iter().enumerate() {
            out.push_str(&format!("{snr_db},{},{},{argmax}\n", idx + 1, fmt(*v)));
        }
    }
    Ok(out)
}

/// `optimal-hops`: plain-text report with the derivative trace and the
/// sign-change search result at each SNR point. With `rescore_kl`, the winning candidates
/// are also scored under the full KL-based bound.
pub fn cmd_optimal_hops(cfg: &ExperimentConfig, rescore_kl: bool) -> Result<String> {
    cfg.validate()?;
    let gains = cfg.gains_for(cfg.n_t)?;
    let mut out = String::new();
    for &snr_db in &cfg.snr_db {
        let noise = cfg.noise_for(cfg.n_t, snr_db)?;
        let r = find_optimal_hops(&gains, &noise)?;
        out.push_str(&format!("snr_db = {snr_db}\n"));
        match r.i0 {
            Some(i0) => out.push_str(&format!("  I0 = {i0}\n")),
            None => out.push_str("  I0 = none (monotone profile)\n"),
        }
        out.push_str(&format!("  i_star = {}\n", r.i_star));
        out.push_str(&format!("  c_star = {} bits/s/Hz\n", fmt(r.c_star)));
        out.push_str("  f_prime:");
        for (i, fp) in &r.f_prime {
            out.push_str(&format!(" ({i}, {})", fmt(*fp)));
        }
        out.push('\n');
        if rescore_kl {
            let candidates: Vec<usize> = match r.i0 {
                Some(i0) if i0 + 1 <= cfg.n_t => vec![i0, i0 + 1],
                _ => vec![r.i_star],
            };
            for (i, c) in crate::optimizer::rescore_with_kl(&gains, &noise, &candidates)? {
                out.push_str(&format!("  c_up_kl({i}) = {}\n", fmt(c)));
            }
        }
    }
    Ok(out)
}

/// `simulate`: rows `snr_db, n_t, i, mi_estimate, std_err, c_low, c_up_kl`,
/// with the sandwich property enforced per row.
pub fn cmd_simulate(cfg: &ExperimentConfig, force: bool) -> Result<String> {
    cfg.validate()?;
    guard_k(cfg.n_t, cfg.i, force)?;
    let gains = cfg.gains_for(cfg.n_t)?;
    let rows: Vec<String> = cfg
        .snr_db
        .par_iter()
        .enumerate()
        .map(|(idx, &snr_db)| {
            let noise = cfg.noise_for(cfg.n_t, snr_db)?;
            let cov = build_covariances(&gains, &noise, cfg.i)?;
            let est = monte_carlo_mutual_info(
                &cov,
                cfg.mc_samples,
                cfg.seed.wrapping_add(idx as u64),
            )?;
            let low = crate::bounds::c_lower(&cov);
            let up = crate::bounds::c_upper_kl(&cov);
            if est.mean < low - 3.0 * est.std_err || est.mean > up + 3.0 * est.std_err {
                return Err(Error::Numerical(format!(
                    "sandwich violated at snr_db={snr_db}: \
                     c_low={low}, mi={}, c_up_kl={up}, std_err={}",
                    est.mean, est.std_err
                )));
            }
            Ok(format!(
                "{snr_db},{},{},{},{},{},{}",
                cfg.n_t,
                cfg.i,
                fmt(est.mean),
                fmt(est.std_err),
                fmt(low),
                fmt(up)
            ))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("snr_db,n_t,i,mi_estimate,std_err,c_low,c_up_kl\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// `hop-pattern`: the PN-driven hop pattern CSV.
pub fn cmd_hop_pattern(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    generate_hop_pattern(cfg.seed, cfg.n_hops, cfg.n_t, cfg.i)?.to_csv()
}
