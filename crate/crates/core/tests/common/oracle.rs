//! Brute-force reference implementations and random instance builders.
//!
//! Everything here is written directly from the metric definitions with
//! plain loops and shares no code path with the library beyond pattern
//! evaluation.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use xband_core::beampattern::Beampattern;
use xband_core::channel::{BandChannel, Ray};

pub fn wrap(mut x: f64) -> f64 {
    while x > 180.0 {
        x -= 360.0;
    }
    while x <= -180.0 {
        x += 360.0;
    }
    x
}

/// `B(α_k) = Σ_p P_p G(α_k − Ω_p)` with a plain double loop.
pub fn filter(channel: &BandChannel<f64>, pattern: &Beampattern<f64>, step: f64) -> Vec<f64> {
    let k = (360.0 / step).round() as usize;
    let mut out = vec![0.0; k];
    for (i, slot) in out.iter_mut().enumerate() {
        let alpha = i as f64 * step;
        let mut acc = 0.0;
        for r in channel.rays() {
            acc += r.power() * 10f64.powf(pattern.gain_db(wrap(alpha - r.aoa_deg())) / 10.0);
        }
        *slot = acc;
    }
    out
}

/// Half the L1 distance between the two unit-mass densities.
pub fn total_variation(a: &[f64], b: &[f64], step: f64) -> f64 {
    let mut sa = 0.0;
    let mut sb = 0.0;
    for i in 0..a.len() {
        sa += a[i];
        sb += b[i];
    }
    let (sa, sb) = (sa * step, sb * step);
    let mut d = 0.0;
    for i in 0..a.len() {
        d += (a[i] / sa - b[i] / sb).abs() * step;
    }
    0.5 * d
}

fn index(angle: f64, step: f64) -> usize {
    (angle / step).round() as usize
}

pub fn power_ratio_db(low: &[f64], high: &[f64], b_high: &[f64], step: f64) -> f64 {
    let mut num = 0.0;
    for a in low {
        num += b_high[index(*a, step)];
    }
    let mut den = 0.0;
    for a in high {
        den += b_high[index(*a, step)];
    }
    10.0 * (num / den).log10()
}

pub fn false_directions(low: &[f64], high: &[f64], b_high: &[f64], step: f64, delta_p_db: f64) -> usize {
    let mut best = f64::MIN;
    for a in high {
        best = best.max(b_high[index(*a, step)]);
    }
    let mut n = 0;
    for a in low {
        if 10.0 * (b_high[index(*a, step)] / best).log10() < delta_p_db {
            n += 1;
        }
    }
    n
}

/// Circular local maxima by expanding every index into its plateau.
pub fn select_m1(values: &[f64], step: f64, delta_th_db: f64) -> Vec<f64> {
    let n = values.len();
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let mut picked = Vec::new();
    for k in 0..n {
        let v = values[k];
        // walk left and right over equal values
        let mut left = 0;
        while left < n && values[(k + n - left - 1) % n] == v {
            left += 1;
        }
        if left >= n {
            // whole circle is one plateau
            if k == 0 {
                picked.push(0.0);
            }
            continue;
        }
        let mut right = 0;
        while values[(k + right + 1) % n] == v {
            right += 1;
        }
        let start = (k + n - left) % n;
        let len = left + right + 1;
        let l_nb = values[(start + n - 1) % n];
        let r_nb = values[(start + len) % n];
        let centre = (start + (len - 1) / 2) % n;
        if l_nb < v && r_nb < v && k == centre && 10.0 * (v / max).log10() >= -delta_th_db {
            picked.push(k as f64 * step);
        }
    }
    picked
}

pub fn random_channel(rng: &mut ChaCha8Rng, max_rays: usize, freq: f64) -> BandChannel<f64> {
    let l = rng.gen_range(1..=max_rays);
    let on_grid = rng.gen_bool(0.3);
    let rays = (0..l)
        .map(|_| {
            let p = 10f64.powf(rng.gen_range(-40.0..0.0) / 10.0);
            let aoa = if on_grid {
                rng.gen_range(0..360) as f64
            } else {
                rng.gen_range(0.0..360.0)
            };
            Ray::new(p, rng.gen_range(0.0..200e-9), aoa).unwrap()
        })
        .collect();
    BandChannel::new("r", freq, rays).unwrap()
}

pub fn random_pattern(rng: &mut ChaCha8Rng) -> Beampattern<f64> {
    match rng.gen_range(0..3) {
        0 => Beampattern::gpp3(rng.gen_range(5.0..60.0), rng.gen_range(15.0..40.0)).unwrap(),
        1 => Beampattern::ula(rng.gen_range(2..12), rng.gen_range(0.3..0.7), -60.0).unwrap(),
        _ => Beampattern::gpp3(10.0, 30.0).unwrap(),
    }
}

/// Random subset of grid angles, never empty.
pub fn random_angles(rng: &mut ChaCha8Rng, n_grid: usize, step: f64) -> Vec<f64> {
    let count = rng.gen_range(1..=6);
    let mut idx: Vec<usize> = (0..count).map(|_| rng.gen_range(0..n_grid)).collect();
    idx.sort_unstable();
    idx.dedup();
    idx.into_iter().map(|k| k as f64 * step).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
