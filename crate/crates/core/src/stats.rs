//! Dataset-level runs and empirical distributions of the per-link metrics.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::beampattern::Beampattern;
use crate::channel::LinkPair;
use crate::error::{Error, Result};
use crate::io::num::{sig12, sig12_map, sig12_pairs};
use crate::pas::AngularGrid;
use crate::psp::{psp_pair, PspResult};
use crate::scalar::Scalar;
use crate::similarity::{analyze_pair, SimilarityConfig, SimilarityReport};

/// Levels reported in [`BatchReport::percentiles`].
pub const PERCENTILE_LEVELS: [u32; 3] = [10, 50, 90];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkFailure {
    pub link_id: String,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NfFractions {
    #[serde(serialize_with = "sig12")]
    pub p_zero: f64,
    #[serde(serialize_with = "sig12")]
    pub p_at_most_one: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct BatchReport<T> {
    pub n_links: usize,
    pub n_failed: usize,
    /// Step CDF of `10·lg R` as `(value_db, cumulative_probability)`.
    #[serde(serialize_with = "sig12_pairs")]
    pub r_cdf: Vec<(f64, f64)>,
    /// Lower empirical quantiles of the power loss `−10·lg R`, keyed by percent.
    #[serde(serialize_with = "sig12_map")]
    pub percentiles: BTreeMap<u32, f64>,
    #[serde(serialize_with = "sig12_map")]
    pub nf_pdf: BTreeMap<usize, f64>,
    pub nf_fractions: NfFractions,
    #[serde(serialize_with = "sig12_map")]
    pub card_low_pdf: BTreeMap<usize, f64>,
    #[serde(serialize_with = "sig12_map")]
    pub card_high_pdf: BTreeMap<usize, f64>,
    pub failures: Vec<LinkFailure>,
    pub per_link: Vec<SimilarityReport<T>>,
}

impl<T: Scalar> BatchReport<T> {
    pub fn power_ratios_db(&self) -> Vec<f64> {
        self.per_link.iter().map(|r| r.power_ratio_db.as_f64()).collect()
    }

    /// Fraction of links with more than one false direction.
    pub fn p_nf_above_one(&self) -> f64 {
        self.nf_pdf.range(2..).fold(0.0, |acc, (_, p)| acc + p)
    }
}

/// Step CDF over the distinct sorted samples: the `i`-th sorted sample has
/// probability `i/n`, duplicates keep the highest.
pub fn empirical_cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::Empty("empirical_cdf needs at least one sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::invalid("empirical_cdf samples must not be NaN"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let n = xs.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *x => last.1 = p,
            _ => out.push((*x, p)),
        }
    }
    Ok(out)
}

/// Lower empirical quantile: the smallest value whose cumulative probability
/// reaches `level_percent / 100`.
pub fn percentile(cdf: &[(f64, f64)], level_percent: f64) -> Result<f64> {
    let last = cdf.last().ok_or(Error::Empty("percentile of an empty CDF"))?;
    if !(level_percent > 0.0 && level_percent <= 100.0) {
        return Err(Error::invalid(format!(
            "percentile level must lie in (0, 100], got {level_percent}"
        )));
    }
    let level = level_percent / 100.0;
    Ok(cdf.iter().find(|(_, p)| *p >= level).unwrap_or(last).0)
}

pub fn percentiles(cdf: &[(f64, f64)], levels: &[u32]) -> Result<BTreeMap<u32, f64>> {
    levels
        .iter()
        .map(|&l| percentile(cdf, l as f64).map(|v| (l, v)))
        .collect()
}

/// Relative frequency of each integer value.
pub fn count_pdf(counts: &[usize]) -> BTreeMap<usize, f64> {
    let mut hist = BTreeMap::new();
    for &c in counts {
        *hist.entry(c).or_insert(0usize) += 1;
    }
    let n = counts.len() as f64;
    hist.into_iter().map(|(k, c)| (k, c as f64 / n)).collect()
}

fn sorted_by_link_id<T: Scalar>(dataset: &[LinkPair<T>]) -> Result<Vec<&LinkPair<T>>> {
    let mut links: Vec<&LinkPair<T>> = dataset.iter().collect();
    links.sort_by(|a, b| a.link_id().cmp(b.link_id()));
    if let Some(w) = links.windows(2).find(|w| w[0].link_id() == w[1].link_id()) {
        return Err(Error::invalid(format!("duplicate link id `{}`", w[0].link_id())));
    }
    Ok(links)
}

/// Runs [`analyze_pair`] on every link (in parallel) and aggregates.
///
/// Links are processed and reported in `link_id` order, so the result does
/// not depend on input order or scheduling. A link whose analysis fails is
/// listed in `failures` and left out of the distributions.
pub fn analyze_dataset<T: Scalar>(
    dataset: &[LinkPair<T>],
    pattern_low: &Beampattern<T>,
    pattern_high: &Beampattern<T>,
    grid: &AngularGrid<T>,
    config: &SimilarityConfig<T>,
) -> Result<BatchReport<T>> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset has no links"));
    }
    config.validate()?;
    let links = sorted_by_link_id(dataset)?;
    let results: Vec<Result<SimilarityReport<T>>> = links
        .par_iter()
        .map(|pair| analyze_pair(pair, pattern_low, pattern_high, grid, config))
        .collect();

    let mut per_link = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (pair, res) in links.iter().zip(results) {
        match res {
            Ok(r) => per_link.push(r),
            Err(e) => failures.push(LinkFailure {
                link_id: pair.link_id().to_owned(),
                error: e.to_string(),
            }),
        }
    }
    if per_link.is_empty() {
        return Err(Error::Empty("every link failed"));
    }

    let r_db: Vec<f64> = per_link.iter().map(|r| r.power_ratio_db.as_f64()).collect();
    let loss_db: Vec<f64> = r_db.iter().map(|r| 0.0 - r).collect();
    let nf: Vec<usize> = per_link.iter().map(|r| r.n_false).collect();
    let card_low: Vec<usize> = per_link.iter().map(|r| r.card_low).collect();
    let card_high: Vec<usize> = per_link.iter().map(|r| r.card_high).collect();

    let nf_pdf = count_pdf(&nf);
    let nf_fractions = NfFractions {
        p_zero: nf_pdf.get(&0).copied().unwrap_or(0.0),
        p_at_most_one: nf_pdf.range(..=1).fold(0.0, |acc, (_, p)| acc + p),
    };
    Ok(BatchReport {
        n_links: dataset.len(),
        n_failed: failures.len(),
        r_cdf: empirical_cdf(&r_db)?,
        percentiles: percentiles(&empirical_cdf(&loss_db)?, &PERCENTILE_LEVELS)?,
        nf_pdf,
        nf_fractions,
        card_low_pdf: count_pdf(&card_low),
        card_high_pdf: count_pdf(&card_high),
        failures,
        per_link,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct LinkPsp<T> {
    pub link_id: String,
    #[serde(flatten, serialize_with = "crate::io::num::psp_result")]
    pub psp: PspResult<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PspBatch<T> {
    pub n_links: usize,
    /// Step CDF of the PSP percentage.
    #[serde(serialize_with = "sig12_pairs")]
    pub psp_cdf: Vec<(f64, f64)>,
    pub failures: Vec<LinkFailure>,
    pub per_link: Vec<LinkPsp<T>>,
}

/// PSP of every link, in `link_id` order, plus its empirical CDF.
pub fn psp_dataset<T: Scalar>(
    dataset: &[LinkPair<T>],
    pattern_low: &Beampattern<T>,
    pattern_high: &Beampattern<T>,
    grid: &AngularGrid<T>,
) -> Result<PspBatch<T>> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset has no links"));
    }
    let links = sorted_by_link_id(dataset)?;
    let results: Vec<_> = links
        .par_iter()
        .map(|pair| psp_pair(pair, pattern_low, pattern_high, grid))
        .collect();
    let mut per_link = Vec::new();
    let mut failures = Vec::new();
    for (pair, res) in links.iter().zip(results) {
        match res {
            Ok(psp) => per_link.push(LinkPsp {
                link_id: pair.link_id().to_owned(),
                psp,
            }),
            Err(e) => failures.push(LinkFailure {
                link_id: pair.link_id().to_owned(),
                error: e.to_string(),
            }),
        }
    }
    let values: Vec<f64> = per_link.iter().map(|l| l.psp.psp_percent.as_f64()).collect();
    Ok(PspBatch {
        n_links: dataset.len(),
        psp_cdf: empirical_cdf(&values)?,
        failures,
        per_link,
    })
}
