//! Synthetic two-band link generator.
//!
//! Each link shares a few dominant paths between the bands, perturbed
//! independently per band, and adds weak band-exclusive paths. It is a
//! stand-in for site-specific ray tracing, not a propagation model.
//!
//! # Random stream
//!
//! Link `i` draws from ChaCha20 keyed with the little-endian `seed` in the
//! first 8 bytes of a zero 32-byte key, on stream `i`, so links are
//! independent of each other and of how many are generated. Variates are
//! derived from raw `u64` words:
//!
//! * uniform `u = (w >> 11) · 2⁻⁵³` in `[0, 1)`
//! * exponential with mean `s`: `−s · ln(1 − u)`
//! * standard normal (Box–Muller, cosine branch): `sqrt(−2 ln(1 − u₁)) · cos(2π u₂)`
//!
//! Draw order per link: for each shared path (AoA `360u`, delay, nothing
//! else); for each shared path the low-band (angle, power) normals; the same
//! for the high band; then each low-only path (AoA, delay, deficit
//! `U[10, 30]` dB) and each high-only path likewise. Normals are drawn even
//! when their jitter is zero.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::channel::{BandChannel, LinkPair, Ray};
use crate::error::{Error, Result};
use crate::scalar::from_db;

pub const GENERATOR_ID: &str = "chacha20/stream-per-link/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub n_shared_paths: usize,
    pub n_low_only_paths: usize,
    pub n_high_only_paths: usize,
    /// Power step between consecutive shared paths, dB.
    pub shared_power_decay_db: f64,
    /// Std-dev of the per-band AoA perturbation of shared paths, deg.
    pub angle_jitter_deg: f64,
    /// Std-dev of the per-band power perturbation of shared paths, dB.
    pub power_jitter_db: f64,
    /// Mean of the exponential delay draw, ns.
    pub delay_spread_ns: f64,
    pub low_freq_ghz: f64,
    pub high_freq_ghz: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_shared_paths: 4,
            n_low_only_paths: 6,
            n_high_only_paths: 1,
            shared_power_decay_db: 3.0,
            angle_jitter_deg: 2.0,
            power_jitter_db: 2.0,
            delay_spread_ns: 30.0,
            low_freq_ghz: 4.0,
            high_freq_ghz: 86.0,
            seed: 1,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_shared_paths + self.n_low_only_paths == 0 || self.n_shared_paths + self.n_high_only_paths == 0 {
            return Err(Error::invalid("each band needs at least one path"));
        }
        for (name, v) in [
            ("angle_jitter_deg", self.angle_jitter_deg),
            ("power_jitter_db", self.power_jitter_db),
            ("shared_power_decay_db", self.shared_power_decay_db),
            ("delay_spread_ns", self.delay_spread_ns),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and >= 0")));
            }
        }
        if !(self.low_freq_ghz > 0.0 && self.high_freq_ghz.is_finite() && self.low_freq_ghz <= self.high_freq_ghz) {
            return Err(Error::invalid("need 0 < low_freq_ghz <= high_freq_ghz"));
        }
        Ok(())
    }
}

struct Draws(ChaCha20Rng);

impl Draws {
    fn for_link(seed: u64, link_index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(link_index);
        Draws(rng)
    }

    fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn exponential(&mut self, mean: f64) -> f64 {
        -mean * (1.0 - self.uniform()).ln()
    }

    fn normal(&mut self) -> f64 {
        let r = (-2.0 * (1.0 - self.uniform()).ln()).sqrt();
        r * (2.0 * std::f64::consts::PI * self.uniform()).cos()
    }
}

struct PathDraw {
    aoa_deg: f64,
    delay_ns: f64,
    power_db: f64,
}

impl PathDraw {
    fn ray(&self) -> Result<Ray<f64>> {
        Ray::new(from_db(self.power_db), self.delay_ns * 1e-9, self.aoa_deg)
    }
}

pub fn link_id(link_index: u64) -> String {
    format!("link-{link_index:06}")
}

/// Generates link `link_index`; the same `(config, link_index)` always gives
/// the same pair.
pub fn generate_link(config: &GenConfig, link_index: u64) -> Result<LinkPair<f64>> {
    config.validate()?;
    let mut d = Draws::for_link(config.seed, link_index);
    let shared: Vec<PathDraw> = (0..config.n_shared_paths)
        .map(|i| PathDraw {
            aoa_deg: 360.0 * d.uniform(),
            delay_ns: d.exponential(config.delay_spread_ns),
            power_db: -config.shared_power_decay_db * i as f64,
        })
        .collect();

    let perturbed = |d: &mut Draws| -> Vec<PathDraw> {
        shared
            .iter()
            .map(|p| {
                let da = config.angle_jitter_deg * d.normal();
                let dp = config.power_jitter_db * d.normal();
                PathDraw {
                    aoa_deg: p.aoa_deg + da,
                    delay_ns: p.delay_ns,
                    power_db: p.power_db + dp,
                }
            })
            .collect()
    };
    let mut low = perturbed(&mut d);
    let mut high = perturbed(&mut d);

    // exclusive paths sit 10-30 dB below the strongest shared base power (0 dB)
    let exclusive = |d: &mut Draws, n: usize| -> Vec<PathDraw> {
        (0..n)
            .map(|_| PathDraw {
                aoa_deg: 360.0 * d.uniform(),
                delay_ns: d.exponential(config.delay_spread_ns),
                power_db: -(10.0 + 20.0 * d.uniform()),
            })
            .collect()
    };
    low.extend(exclusive(&mut d, config.n_low_only_paths));
    high.extend(exclusive(&mut d, config.n_high_only_paths));

    let id = link_id(link_index);
    let to_channel = |paths: &[PathDraw], f: f64| -> Result<BandChannel<f64>> {
        let rays = paths.iter().map(PathDraw::ray).collect::<Result<Vec<_>>>()?;
        BandChannel::new(id.clone(), f, rays)
    };
    LinkPair::new(
        to_channel(&low, config.low_freq_ghz)?,
        to_channel(&high, config.high_freq_ghz)?,
    )
}

/// Links `0..n_links`.
pub fn generate_dataset(config: &GenConfig, n_links: usize) -> Result<Vec<LinkPair<f64>>> {
    if n_links == 0 {
        return Err(Error::invalid("n_links must be at least 1"));
    }
    (0..n_links as u64).map(|i| generate_link(config, i)).collect()
}

/// Dataset-file metadata describing how a synthetic dataset was produced.
pub fn generation_metadata(config: &GenConfig, n_links: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("generator".into(), json!(GENERATOR_ID));
    m.insert(
        "gen_config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    m.insert("n_links".into(), json!(n_links));
    m
}
