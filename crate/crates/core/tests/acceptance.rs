//! Acceptance suite. Each test covers one release criterion and prints a
//! single PASS/FAIL line (visible with `--nocapture` or on failure).

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use oam_hopsim::bounds::{
    build_covariances, c_lower, c_upper_kl, c_upper_simplified, kl_mixture_upper,
    monte_carlo_mutual_info,
};
use oam_hopsim::channel::{bessel_j, mode_alphabet, ChannelGains, NoiseProfile, UcaGeometry};
use oam_hopsim::config::ExperimentConfig;
use oam_hopsim::modes::{binomial, unrank};
use oam_hopsim::optimizer::find_optimal_hops;
use oam_hopsim::phy::{apply_channel, decompose, select_modes, synthesize, unitary_dft, ModeSymbols};

use common::bessel_series_oracle;

fn report(name: &str, pass: bool) {
    println!("acceptance [{name}]: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion failed: {name}");
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state >> 12;
    *state ^= *state << 25;
    *state ^= *state >> 27;
    state.wrapping_mul(0x2545_F491_4F6C_DD1D)
}

fn uniform(state: &mut u64) -> f64 {
    xorshift(state) as f64 / u64::MAX as f64
}

fn flat_gains(n_t: usize) -> ChannelGains {
    let geom = UcaGeometry::new(
        n_t,
        n_t,
        0.05,
        0.05,
        3.0,
        oam_hopsim::channel::wavelength_from_carrier(60.0e9),
        Complex64::new(1.0, 0.0),
        0.0,
    )
    .unwrap();
    let map: BTreeMap<i64, Complex64> = mode_alphabet(n_t)
        .into_iter()
        .map(|l| (l, Complex64::new(1.0, 0.0)))
        .collect();
    ChannelGains::from_gains(&geom, map).unwrap()
}

fn random_gains(n_t: usize, state: &mut u64) -> ChannelGains {
    let geom = UcaGeometry::new(
        n_t,
        n_t,
        0.05,
        0.05,
        3.0,
        oam_hopsim::channel::wavelength_from_carrier(60.0e9),
        Complex64::new(1.0, 0.0),
        0.0,
    )
    .unwrap();
    let map: BTreeMap<i64, Complex64> = mode_alphabet(n_t)
        .into_iter()
        .map(|l| {
            let mag = (0.05 + 3.0 * uniform(state)).sqrt();
            let phase = 2.0 * std::f64::consts::PI * uniform(state);
            (l, Complex64::from_polar(mag, phase))
        })
        .collect();
    ChannelGains::from_gains(&geom, map).unwrap()
}

#[test]
fn criterion_01_sandwich_validation() {
    let start = Instant::now();
    let mut ok = true;
    for (n_t, i) in [(4usize, 2usize), (6, 3)] {
        let cfg = ExperimentConfig {
            n_t,
            n_r: n_t,
            i,
            ..ExperimentConfig::default()
        };
        let gains = cfg.gains_for(n_t).unwrap();
        for snr_db in [-6.0, 0.0, 6.0] {
            let noise = cfg.noise_for(n_t, snr_db).unwrap();
            let cov = build_covariances(&gains, &noise, i).unwrap();
            let low = c_lower(&cov);
            let up = c_upper_kl(&cov);
            let mc = monte_carlo_mutual_info(&cov, 1_000_000, 7).unwrap();
            let within = low - 3.0 * mc.std_err <= mc.mean && mc.mean <= up + 3.0 * mc.std_err;
            if !within {
                eprintln!(
                    "sandwich violated: n_t={n_t} i={i} snr={snr_db} \
                     low={low} mi={} (se {}) up={up}",
                    mc.mean, mc.std_err
                );
                ok = false;
            }
        }
    }
    let in_time = start.elapsed().as_secs_f64() < 120.0;
    report("sandwich validation, MC between bounds", ok && in_time);
}

#[test]
fn criterion_02_bound_ordering() {
    let start = Instant::now();
    let mut state = 0xface_b00c_1234_5678u64;
    let mut ok = true;
    for _ in 0..50 {
        let n_t = 4 + (uniform(&mut state) * 7.0) as usize; // 4..10
        let i = 1 + (uniform(&mut state) * (n_t as f64 - 1.0)) as usize;
        let gains = random_gains(n_t, &mut state);
        let sigma2 = 0.05 + 3.0 * uniform(&mut state);
        let noise = NoiseProfile::uniform(n_t, sigma2, 1.0).unwrap();
        let cov = build_covariances(&gains, &noise, i).unwrap();
        let kl = c_upper_kl(&cov);
        let simplified = c_upper_simplified(&gains, &noise, i).unwrap();
        if kl > simplified + 1e-9 {
            eprintln!("ordering violated: n_t={n_t} i={i} kl={kl} simplified={simplified}");
            ok = false;
        }
    }
    let in_time = start.elapsed().as_secs_f64() < 60.0;
    report("bound ordering kl <= simplified", ok && in_time);
}

#[test]
fn criterion_03_index_information_cap() {
    // Same configuration distribution as criterion 2, checking the averaged
    // mixture bound against [0, log2 K]; identical covariances (zero power)
    // give exactly zero.
    let mut state = 0xface_b00c_1234_5678u64;
    let mut ok = true;
    for _ in 0..50 {
        let n_t = 4 + (uniform(&mut state) * 7.0) as usize;
        let i = 1 + (uniform(&mut state) * (n_t as f64 - 1.0)) as usize;
        let gains = random_gains(n_t, &mut state);
        let sigma2 = 0.05 + 3.0 * uniform(&mut state);
        let noise = NoiseProfile::uniform(n_t, sigma2, 1.0).unwrap();
        let cov = build_covariances(&gains, &noise, i).unwrap();
        let k = cov.combination_count();
        let cap = (k as f64).log2();
        let avg: f64 = (0..k)
            .map(|r| kl_mixture_upper(r, &cov).unwrap())
            .sum::<f64>()
            / k as f64;
        if !(-1e-12..=cap + 1e-12).contains(&avg) {
            eprintln!("cap violated: n_t={n_t} i={i} avg={avg} cap={cap}");
            ok = false;
        }
    }
    // identical covariances: zero transmit power collapses every class
    let gains = flat_gains(6);
    let noise = NoiseProfile::uniform(6, 1.0, 0.0).unwrap();
    let cov = build_covariances(&gains, &noise, 3).unwrap();
    for r in 0..cov.combination_count() {
        if kl_mixture_upper(r, &cov).unwrap().abs() > 1e-12 {
            ok = false;
        }
    }
    report("index information within [0, log2 K]", ok);
}

#[test]
fn criterion_04_hop_search_equals_brute_force() {
    let start = Instant::now();
    let mut state = 0xdead_beef_0bad_cafeu64;
    let mut ok = true;
    for _ in 0..100 {
        let n_t = 16;
        let gains = random_gains(n_t, &mut state);
        let sigma2 = 0.2 + 30.0 * uniform(&mut state);
        let noise = NoiseProfile::uniform(n_t, sigma2, 1.0).unwrap();
        let r = find_optimal_hops(&gains, &noise).unwrap();
        let brute = r
            .c_up_profile
            .iter()
            .copied()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if r.i_star != brute.0 || (r.c_star - brute.1).abs() > 1e-12 {
            ok = false;
        }
        if let Some(i0) = r.i0 {
            if r.i_star != i0 && r.i_star != i0 + 1 {
                ok = false;
            }
        }
        for &(i, fp) in &r.f_prime {
            if i <= 8 && fp <= 0.0 {
                eprintln!("f'({i}) = {fp} not positive");
                ok = false;
            }
        }
    }
    let in_time = start.elapsed().as_secs_f64() < 10.0;
    report("hop-count search equals brute force", ok && in_time);
}

#[test]
fn criterion_05_zero_power_limit() {
    let gains = flat_gains(16);
    let noise = NoiseProfile::uniform(16, 1.0, 0.0).unwrap();
    let r = find_optimal_hops(&gains, &noise).unwrap();
    let expected = (binomial(16, 8).unwrap() as f64).log2(); // log2 12870
    let ok = r.i_star == 8 && (r.c_star - expected).abs() <= 1e-9;
    report("zero-power optimum at 8 hops, log2 12870", ok);
}

#[test]
fn criterion_06_capacity_grows_with_array_size() {
    let i = 3usize;
    let mut ok = true;
    for snr_db in [-10.0, -4.0, 0.0, 6.0, 12.0, 20.0] {
        let snr = 10f64.powf(snr_db / 10.0);
        let values: Vec<f64> = [4usize, 8, 12, 16]
            .iter()
            .map(|&n_t| {
                let gains = flat_gains(n_t);
                let noise = NoiseProfile::uniform(n_t, 1.0 / snr, 1.0).unwrap();
                c_upper_simplified(&gains, &noise, i).unwrap()
            })
            .collect();
        let gaps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        if !(gaps[0] > 0.0 && gaps[1] > 0.0 && gaps[2] > 0.0) {
            ok = false;
        }
        if !(gaps[0] > gaps[1] && gaps[1] > gaps[2]) {
            ok = false;
        }
        // with unit-magnitude gains the 4 -> 8 gap is purely the index part
        let expected_gap = (binomial(8, 3).unwrap() as f64 / binomial(4, 3).unwrap() as f64).log2();
        if (gaps[0] - expected_gap).abs() > 1e-12 {
            eprintln!("snr={snr_db}: gap {} != log2 14 {}", gaps[0], expected_gap);
            ok = false;
        }
    }
    report("capacity grows with array size, shrinking gaps", ok);
}

#[test]
fn criterion_07_hop_count_crossover_in_snr() {
    let n_t = 16;
    let gains = flat_gains(n_t);
    // best partial-hopping bound minus full multiplexing, across the sweep
    let mut deltas = Vec::new();
    let mut snr_db = -20.0;
    while snr_db <= 40.0 {
        let snr = 10f64.powf(snr_db / 10.0);
        let noise = NoiseProfile::uniform(n_t, 1.0 / snr, 1.0).unwrap();
        let best_partial = (1..n_t)
            .map(|i| c_upper_simplified(&gains, &noise, i).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        let full = c_upper_simplified(&gains, &noise, n_t).unwrap();
        deltas.push((snr_db, best_partial - full));
        snr_db += 1.0;
    }
    let low_side = deltas.first().map(|d| d.1 > 0.0).unwrap_or(false);
    let high_side = deltas.last().map(|d| d.1 < 0.0).unwrap_or(false);
    let crossover = deltas
        .windows(2)
        .find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)
        .map(|w| w[1].0);
    let ok = low_side && high_side && crossover.is_some();
    if let Some(snr) = crossover {
        println!("full multiplexing takes over near {snr} dB");
    }
    report("hop-count crossover detected in sweep", ok);
}

#[test]
fn criterion_08_round_trip_and_unitarity() {
    let n_t = 16;
    let cfg = ExperimentConfig::default();
    let gains = cfg.gains_for(n_t).unwrap();
    // effectively noiseless: the profile requires strictly positive variance
    let noise = NoiseProfile::uniform(n_t, f64::MIN_POSITIVE, 1.0).unwrap();
    let mut state = 0x0123_4567_89ab_cdefu64;
    let mut ok = true;
    for draw in 0..1000 {
        let i = 1 + (uniform(&mut state) * (n_t as f64)) as usize;
        let i = i.min(n_t);
        let k = binomial(n_t as u64, i as u64).unwrap();
        let combo = unrank(xorshift(&mut state) % k, n_t, i).unwrap();
        let symbols: Vec<Complex64> = (0..i)
            .map(|_| {
                Complex64::new(2.0 * uniform(&mut state) - 1.0, 2.0 * uniform(&mut state) - 1.0)
            })
            .collect();
        let sym = ModeSymbols::new(combo.clone(), symbols.clone()).unwrap();
        let x = synthesize(&sym, n_t).unwrap();
        let y = apply_channel(&x, &gains, &noise, draw).unwrap();
        let bins = decompose(&y, n_t).unwrap();
        let recovered = select_modes(&bins, &combo).unwrap();
        for (idx, &l) in combo.modes().iter().enumerate() {
            let expected = gains.gain(l).unwrap() * symbols[idx];
            if (recovered[idx] - expected).norm() > 1e-10 {
                ok = false;
            }
        }
        // inactive bins must stay empty in the noiseless channel
        for (&l, &bin) in &bins {
            if !combo.contains(l) && bin.norm() > 1e-10 {
                ok = false;
            }
        }
    }
    // DFT unitarity: max |(F^H F - I)[a][b]|
    let f = unitary_dft(n_t);
    let mut residual = 0.0f64;
    for a in 0..n_t {
        for b in 0..n_t {
            let dot: Complex64 = (0..n_t).map(|n| f[n][a].conj() * f[n][b]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            residual = residual.max((dot - Complex64::new(target, 0.0)).norm());
        }
    }
    if residual > 1e-12 {
        ok = false;
    }
    report("noiseless round trip and DFT unitarity", ok);
}

#[test]
fn criterion_09_bessel_accuracy() {
    let mut ok = true;
    for n in 0..=16usize {
        let mut x = 0.125;
        while x <= 30.0 {
            let expected = bessel_series_oracle(n, x);
            let got = bessel_j(n as i64, x).unwrap();
            if (got - expected).abs() > 1e-10 {
                eprintln!("bessel off: n={n} x={x} got={got} expected={expected}");
                ok = false;
            }
            x += 0.125;
        }
    }
    // three-term recurrence residual across the same range
    let mut x = 0.5;
    while x <= 30.0 {
        for n in 1..=15i64 {
            let lo = bessel_j(n - 1, x).unwrap();
            let hi = bessel_j(n + 1, x).unwrap();
            let mid = bessel_j(n, x).unwrap();
            if (lo + hi - (2.0 * n as f64 / x) * mid).abs() > 1e-8 {
                ok = false;
            }
        }
        x += 0.5;
    }
    report("bessel matches series oracle", ok);
}

#[test]
fn criterion_10_large_alphabet_performance() {
    let n_t = 16;
    let i = 9;
    let cfg = ExperimentConfig::default();
    let gains = cfg.gains_for(n_t).unwrap();
    let noise = cfg.noise_for(n_t, 0.0).unwrap();
    let cov = build_covariances(&gains, &noise, i).unwrap();
    assert_eq!(cov.combination_count(), 11440);

    let start = Instant::now();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| (c_upper_kl(&cov), c_lower(&cov)));
    let elapsed = start.elapsed().as_secs_f64();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| (c_upper_kl(&cov), c_lower(&cov)));

    let identical = four.0.to_bits() == one.0.to_bits() && four.1.to_bits() == one.1.to_bits();
    let ok = elapsed < 120.0 && identical && four.0.is_finite() && four.1 <= four.0;
    println!("K=11440 bound evaluation took {elapsed:.1}s");
    report("large-alphabet bounds fast and thread-stable", ok);
}
