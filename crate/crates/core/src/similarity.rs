//! Best-beam-direction selection per band and the cross-band direction metrics.
//!
//! Directions are picked on each band's filtered PAS, either as thresholded
//! local maxima (M1) or by a correlation-gated greedy pass over all
//! sufficiently strong grid angles (M2). The low-band set is then scored on
//! the high-band spectrum: `R` compares the high-band power collected along
//! the low-band directions against the high band's own directions, and `N_f`
//! counts low-band directions that fall more than `|Δ_P|` below the best
//! high-band direction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::Serialize;

use crate::beampattern::Beampattern;
use crate::channel::{BandChannel, LinkPair};
use crate::error::{Error, Result};
use crate::io::num::{sig12, sig12_vec};
use crate::pas::{filter_pas, AngularGrid, FilteredPas};
use crate::psp::{psp, PspResult};
use crate::scalar::{to_db, wrap_deg, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    M1,
    M2,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::M1 => "m1",
            Method::M2 => "m2",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1" => Ok(Method::M1),
            "m2" => Ok(Method::M2),
            other => Err(Error::invalid(format!("unknown selection method `{other}`"))),
        }
    }
}

/// Selected beam pointing angles for one band, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet<T> {
    angles: Vec<T>,
    band: Band,
    method: Method,
    threshold_db: T,
}

impl<T: Scalar> DirectionSet<T> {
    /// Builds a set from explicit angles (degrees). Duplicates and empty sets
    /// are rejected.
    pub fn new(mut angles: Vec<T>, band: Band, method: Method, threshold_db: T) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("direction set must not be empty"));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("direction angles must be finite"));
        }
        angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if angles.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("direction set contains duplicates"));
        }
        Ok(DirectionSet {
            angles,
            band,
            method,
            threshold_db,
        })
    }

    fn from_indices(
        mut indices: Vec<usize>,
        grid: &AngularGrid<T>,
        band: Band,
        method: Method,
        threshold_db: T,
    ) -> Self {
        indices.sort_unstable();
        indices.dedup();
        DirectionSet {
            angles: indices.into_iter().map(|k| grid.angle(k)).collect(),
            band,
            method,
            threshold_db,
        }
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn threshold_db(&self) -> T {
        self.threshold_db
    }

    fn with_band(mut self, band: Band) -> Self {
        self.band = band;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityConfig<T> {
    /// Selection range below the strongest direction, dB (> 0).
    pub delta_th_db: T,
    /// False-direction threshold relative to the best high-band direction, dB (< 0).
    pub delta_p_db: T,
    pub method: Method,
    /// M2 acceptance gate on normalized CFR correlation, in (0, 1).
    pub m2_correlation_threshold: T,
    pub m2_frequency_points: usize,
    pub m2_bandwidth_ghz: T,
    /// Also compute PSP with the same per-band patterns.
    pub compute_psp: bool,
}

impl<T: Scalar> Default for SimilarityConfig<T> {
    fn default() -> Self {
        SimilarityConfig {
            delta_th_db: T::lit(10.0),
            delta_p_db: T::lit(-30.0),
            method: Method::M1,
            m2_correlation_threshold: T::lit(0.7),
            m2_frequency_points: 101,
            m2_bandwidth_ghz: T::lit(2.0),
            compute_psp: false,
        }
    }
}

impl<T: Scalar> SimilarityConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_th_db.is_finite() && self.delta_th_db > T::zero()) {
            return Err(Error::invalid(format!(
                "delta_th_db must be positive, got {}",
                self.delta_th_db
            )));
        }
        if !(self.delta_p_db.is_finite() && self.delta_p_db < T::zero()) {
            return Err(Error::invalid(format!(
                "delta_p_db must be negative, got {}",
                self.delta_p_db
            )));
        }
        let c = self.m2_correlation_threshold;
        if !(c > T::zero() && c < T::one()) {
            return Err(Error::invalid(format!(
                "M2 correlation threshold must lie in (0, 1), got {c}"
            )));
        }
        if self.m2_frequency_points < 2 {
            return Err(Error::invalid("M2 needs at least two frequency points"));
        }
        if !(self.m2_bandwidth_ghz.is_finite() && self.m2_bandwidth_ghz > T::zero()) {
            return Err(Error::invalid("M2 bandwidth must be positive"));
        }
        Ok(())
    }
}

/// Per-link outcome of the direction-based comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SimilarityReport<T> {
    pub link_id: String,
    pub method: Method,
    /// `10·lg R`.
    #[serde(serialize_with = "sig12")]
    pub power_ratio_db: T,
    pub n_false: usize,
    pub card_low: usize,
    pub card_high: usize,
    #[serde(serialize_with = "sig12_vec")]
    pub directions_low_deg: Vec<T>,
    #[serde(serialize_with = "sig12_vec")]
    pub directions_high_deg: Vec<T>,
    #[serde(serialize_with = "crate::io::num::opt_psp")]
    pub psp: Option<PspResult<T>>,
}

/// Thresholded circular local maxima of `B(α)`.
///
/// A maximal run of equal values whose two circular neighbours are strictly
/// smaller yields one direction, at the run's centre (the earlier of the two
/// central indices for even runs). A spectrum constant around the whole
/// circle yields `{0°}`.
pub fn select_m1<T: Scalar>(pas: &FilteredPas<T>, delta_th_db: T) -> Result<DirectionSet<T>> {
    if !(delta_th_db.is_finite() && delta_th_db > T::zero()) {
        return Err(Error::invalid(format!(
            "delta_th_db must be positive, got {delta_th_db}"
        )));
    }
    let values = pas.values();
    let n = values.len();
    let max = pas.max();
    let Some(start) = (0..n).find(|&i| values[i] != values[(i + n - 1) % n]) else {
        return Ok(DirectionSet::from_indices(
            vec![0],
            pas.grid(),
            Band::Low,
            Method::M1,
            delta_th_db,
        ));
    };

    let mut picked = Vec::new();
    let mut pos = start;
    let mut covered = 0;
    while covered < n {
        let v = values[pos];
        let mut len = 1;
        while values[(pos + len) % n] == v {
            len += 1;
        }
        let left = values[(pos + n - 1) % n];
        let right = values[(pos + len) % n];
        if left < v && right < v && to_db(v / max) >= -delta_th_db {
            picked.push((pos + (len - 1) / 2) % n);
        }
        covered += len;
        pos = (pos + len) % n;
    }
    Ok(DirectionSet::from_indices(
        picked,
        pas.grid(),
        Band::Low,
        Method::M1,
        delta_th_db,
    ))
}

/// Per-ray phasors `exp(−j 2π f_m τ_p)` over the band around the carrier.
fn ray_phasors<T: Scalar>(channel: &BandChannel<T>, freq_points: usize, bandwidth_ghz: T) -> Vec<Vec<Complex<T>>> {
    let fc = channel.frequency_ghz();
    let half = bandwidth_ghz / T::lit(2.0);
    let df = bandwidth_ghz / T::from_usize_lossy(freq_points - 1);
    let two_pi = T::lit(2.0) * T::PI();
    channel
        .rays()
        .iter()
        .map(|r| {
            (0..freq_points)
                .map(|m| {
                    let f_hz = (fc - half + T::from_usize_lossy(m) * df) * T::lit(1e9);
                    Complex::from_polar(T::one(), -two_pi * f_hz * r.delay())
                })
                .collect()
        })
        .collect()
}

fn steered_cfr<T: Scalar>(
    channel: &BandChannel<T>,
    phasors: &[Vec<Complex<T>>],
    pattern: &Beampattern<T>,
    steer_deg: T,
) -> Vec<Complex<T>> {
    let m = phasors.first().map_or(0, Vec::len);
    let mut h = vec![Complex::new(T::zero(), T::zero()); m];
    for (ray, ph) in channel.rays().iter().zip(phasors) {
        let amp = (ray.power() * pattern.gain_at(wrap_deg(steer_deg - ray.aoa_deg()))).sqrt();
        for (acc, p) in h.iter_mut().zip(ph) {
            *acc = *acc + *p * amp;
        }
    }
    h
}

/// Channel frequency response seen through `pattern` steered to `steer_deg`:
/// `H(f_m) = Σ_p sqrt(P_p·G(steer − Ω_p)) · exp(−j 2π f_m τ_p)` with
/// `freq_points` samples spanning `f_c ± bandwidth/2`.
pub fn beam_cfr<T: Scalar>(
    channel: &BandChannel<T>,
    pattern: &Beampattern<T>,
    steer_deg: T,
    freq_points: usize,
    bandwidth_ghz: T,
) -> Result<Vec<Complex<T>>> {
    if freq_points < 2 {
        return Err(Error::invalid("beam_cfr needs at least two frequency points"));
    }
    if !(bandwidth_ghz.is_finite() && bandwidth_ghz > T::zero()) {
        return Err(Error::invalid("bandwidth must be positive"));
    }
    let phasors = ray_phasors(channel, freq_points, bandwidth_ghz);
    Ok(steered_cfr(channel, &phasors, pattern, steer_deg))
}

/// `|⟨a, b⟩| / (‖a‖·‖b‖)`; zero-energy responses count as fully correlated.
pub fn cfr_correlation<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let inner = a
        .iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
    let na = a.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
    let nb = b.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
    let denom = na * nb;
    if denom <= T::zero() {
        return T::one();
    }
    inner.norm() / denom
}

/// Correlation-gated greedy selection.
///
/// Every grid angle within `delta_th_db` of the maximum of `B(α)` is a
/// candidate. Candidates are visited by decreasing `B(α)` (smaller angle first
/// on ties) and accepted when the normalized correlation of their steered CFR
/// with every already accepted direction's CFR is below
/// `m2_correlation_threshold`.
pub fn select_m2<T: Scalar>(
    channel: &BandChannel<T>,
    pattern: &Beampattern<T>,
    grid: &AngularGrid<T>,
    config: &SimilarityConfig<T>,
) -> Result<DirectionSet<T>> {
    config.validate()?;
    let pas = filter_pas(channel, pattern, grid);
    Ok(select_m2_on(&pas, channel, pattern, config))
}

fn select_m2_on<T: Scalar>(
    pas: &FilteredPas<T>,
    channel: &BandChannel<T>,
    pattern: &Beampattern<T>,
    config: &SimilarityConfig<T>,
) -> DirectionSet<T> {
    let values = pas.values();
    let max = pas.max();
    let mut candidates: Vec<usize> = (0..values.len())
        .filter(|&k| to_db(values[k] / max) >= -config.delta_th_db)
        .collect();
    // stable sort keeps ascending index order among equal values
    candidates.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite"));

    let phasors = ray_phasors(channel, config.m2_frequency_points, config.m2_bandwidth_ghz);
    let mut accepted: Vec<(usize, Vec<Complex<T>>)> = Vec::new();
    for k in candidates {
        let h = steered_cfr(channel, &phasors, pattern, pas.grid().angle(k));
        if accepted
            .iter()
            .all(|(_, other)| cfr_correlation(&h, other) < config.m2_correlation_threshold)
        {
            accepted.push((k, h));
        }
    }
    let indices = accepted.into_iter().map(|(k, _)| k).collect();
    DirectionSet::from_indices(indices, pas.grid(), Band::Low, Method::M2, config.delta_th_db)
}

fn values_on<T: Scalar>(set: &DirectionSet<T>, pas: &FilteredPas<T>) -> Result<Vec<T>> {
    set.angles.iter().map(|&a| pas.value_at(a)).collect()
}

/// `10·lg( Σ_{a_low} B_U / Σ_{a_high} B_U )`.
pub fn power_ratio<T: Scalar>(
    a_low: &DirectionSet<T>,
    a_high: &DirectionSet<T>,
    pas_high: &FilteredPas<T>,
) -> Result<T> {
    let num: T = values_on(a_low, pas_high)?.into_iter().sum();
    let den: T = values_on(a_high, pas_high)?.into_iter().sum();
    Ok(to_db(num / den))
}

/// Number of low-band directions whose high-band power is more than
/// `|delta_p_db|` below the strongest high-band direction.
pub fn false_directions<T: Scalar>(
    a_low: &DirectionSet<T>,
    a_high: &DirectionSet<T>,
    pas_high: &FilteredPas<T>,
    delta_p_db: T,
) -> Result<usize> {
    if !(delta_p_db.is_finite() && delta_p_db < T::zero()) {
        return Err(Error::invalid(format!("delta_p_db must be negative, got {delta_p_db}")));
    }
    let best = values_on(a_high, pas_high)?.into_iter().fold(T::neg_infinity(), T::max);
    let low = values_on(a_low, pas_high)?;
    Ok(low.into_iter().filter(|&v| to_db(v / best) < delta_p_db).count())
}

fn select<T: Scalar>(
    pas: &FilteredPas<T>,
    channel: &BandChannel<T>,
    pattern: &Beampattern<T>,
    config: &SimilarityConfig<T>,
) -> Result<DirectionSet<T>> {
    match config.method {
        Method::M1 => select_m1(pas, config.delta_th_db),
        Method::M2 => Ok(select_m2_on(pas, channel, pattern, config)),
    }
}

/// Full per-link pipeline: filter both bands, select directions, score.
pub fn analyze_pair<T: Scalar>(
    pair: &LinkPair<T>,
    pattern_low: &Beampattern<T>,
    pattern_high: &Beampattern<T>,
    grid: &AngularGrid<T>,
    config: &SimilarityConfig<T>,
) -> Result<SimilarityReport<T>> {
    config.validate()?;
    let pas_low = filter_pas(pair.low(), pattern_low, grid);
    let pas_high = filter_pas(pair.high(), pattern_high, grid);
    let a_low = select(&pas_low, pair.low(), pattern_low, config)?.with_band(Band::Low);
    let a_high = select(&pas_high, pair.high(), pattern_high, config)?.with_band(Band::High);
    let power_ratio_db = power_ratio(&a_low, &a_high, &pas_high)?;
    let n_false = false_directions(&a_low, &a_high, &pas_high, config.delta_p_db)?;
    let psp = if config.compute_psp {
        Some(psp(&pas_low.normalize(), &pas_high.normalize())?)
    } else {
        None
    };
    Ok(SimilarityReport {
        link_id: pair.link_id().to_owned(),
        method: config.method,
        power_ratio_db,
        n_false,
        card_low: a_low.len(),
        card_high: a_high.len(),
        directions_low_deg: a_low.angles,
        directions_high_deg: a_high.angles,
        psp,
    })
}
