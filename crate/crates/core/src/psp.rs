//! Total-variation distance between unit-mass spectra and the PAS similarity
//! percentage derived from it.

use crate::beampattern::Beampattern;
use crate::channel::LinkPair;
use crate::error::Result;
use crate::pas::{filter_pas, AngularGrid, NormalizedPas};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PspResult<T> {
    /// Total-variation distance in `[0, 1]`.
    pub d_tv: T,
    /// `(1 − d_tv) · 100`.
    pub psp_percent: T,
}

impl<T: Scalar> PspResult<T> {
    pub fn from_distance(d_tv: T) -> Self {
        PspResult {
            d_tv,
            psp_percent: (T::one() - d_tv) * T::lit(100.0),
        }
    }
}

/// `½ Σ |a_k − b_k| · step`, clamped into `[0, 1]` against rounding.
pub fn total_variation<T: Scalar>(a: &NormalizedPas<T>, b: &NormalizedPas<T>) -> Result<T> {
    a.grid().check_same(b.grid())?;
    let sum = a
        .density()
        .iter()
        .zip(b.density())
        .fold(T::zero(), |acc, (x, y)| acc + (*x - *y).abs());
    let d = sum * a.grid().step_deg() / T::lit(2.0);
    Ok(d.max(T::zero()).min(T::one()))
}

pub fn psp<T: Scalar>(a: &NormalizedPas<T>, b: &NormalizedPas<T>) -> Result<PspResult<T>> {
    total_variation(a, b).map(PspResult::from_distance)
}

/// Filters, normalizes and compares both bands of a link.
pub fn psp_pair<T: Scalar>(
    pair: &LinkPair<T>,
    pattern_low: &Beampattern<T>,
    pattern_high: &Beampattern<T>,
    grid: &AngularGrid<T>,
) -> Result<PspResult<T>> {
    let low = filter_pas(pair.low(), pattern_low, grid).normalize();
    let high = filter_pas(pair.high(), pattern_high, grid).normalize();
    psp(&low, &high)
}
