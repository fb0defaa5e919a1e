//! Beam-filtered power angular spectra on a circular grid.
//!
//! `B(α) = Σ_p P_p · G(α − Ω_p)` is evaluated exactly per ray at each grid
//! angle; rays are never binned onto the grid. Normalization divides by the
//! Riemann sum `Σ B(α_k) · step`, so the result is a density in 1/deg.

use crate::beampattern::Beampattern;
use crate::channel::BandChannel;
use crate::error::{Error, Result};
use crate::scalar::{wrap_deg, Scalar};

/// Uniform grid `{0, step, …, 360 − step}` degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularGrid<T> {
    step_deg: T,
    len: usize,
}

impl<T: Scalar> AngularGrid<T> {
    pub fn new(step_deg: T) -> Result<Self> {
        if !(step_deg > T::zero() && step_deg <= T::lit(10.0)) {
            return Err(Error::invalid(format!(
                "grid step must lie in (0, 10] deg, got {step_deg}"
            )));
        }
        let count = T::lit(360.0) / step_deg;
        let rounded = count.round();
        if (count - rounded).abs() > T::lit(1e-6) {
            return Err(Error::invalid(format!("grid step {step_deg} does not divide 360")));
        }
        Ok(AngularGrid {
            step_deg,
            len: rounded.to_usize().expect("positive"),
        })
    }

    pub fn step_deg(&self) -> T {
        self.step_deg
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn angle(&self, index: usize) -> T {
        T::from_usize_lossy(index) * self.step_deg
    }

    pub fn angles(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(move |k| self.angle(k))
    }

    /// Index of a grid angle. Angles off the grid by more than a millionth of
    /// a step are rejected.
    pub fn index_of(&self, angle_deg: T) -> Result<usize> {
        let full = T::lit(360.0);
        let a = angle_deg % full;
        let a = if a < T::zero() { a + full } else { a };
        let pos = a / self.step_deg;
        let k = pos.round();
        if (pos - k).abs() > T::lit(1e-6) {
            return Err(Error::NotOnGrid(angle_deg.as_f64()));
        }
        Ok(k.to_usize().expect("non-negative") % self.len)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.len != other.len || self.step_deg != other.step_deg {
            return Err(Error::GridMismatch(self.step_deg.as_f64(), other.step_deg.as_f64()));
        }
        Ok(())
    }
}

impl Default for AngularGrid<f64> {
    fn default() -> Self {
        AngularGrid::new(1.0).expect("1 deg divides 360")
    }
}

/// Received power versus steering angle, linear.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredPas<T> {
    grid: AngularGrid<T>,
    values: Vec<T>,
    source_frequency_ghz: T,
}

impl<T: Scalar> FilteredPas<T> {
    /// Wraps precomputed values. All values must be positive and finite.
    pub fn from_values(grid: AngularGrid<T>, values: Vec<T>, source_frequency_ghz: T) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "expected {} values for the grid, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > T::zero())) {
            return Err(Error::invalid("filtered PAS values must be positive and finite"));
        }
        Ok(FilteredPas {
            grid,
            values,
            source_frequency_ghz,
        })
    }

    pub fn grid(&self) -> &AngularGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn source_frequency_ghz(&self) -> T {
        self.source_frequency_ghz
    }

    pub fn value_at(&self, angle_deg: T) -> Result<T> {
        Ok(self.values[self.grid.index_of(angle_deg)?])
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Smallest index holding the maximum value.
    pub fn argmax(&self) -> usize {
        let max = self.max();
        self.values.iter().position(|&v| v == max).expect("non-empty grid")
    }

    /// Pointwise sum of two spectra on the same grid.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect();
        Ok(FilteredPas {
            grid: self.grid,
            values,
            source_frequency_ghz: self.source_frequency_ghz,
        })
    }

    pub fn normalize(&self) -> NormalizedPas<T> {
        normalize_pas(self)
    }
}

/// Unit-mass version of a [`FilteredPas`]: `Σ density · step = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPas<T> {
    grid: AngularGrid<T>,
    density: Vec<T>,
}

impl<T: Scalar> NormalizedPas<T> {
    pub fn grid(&self) -> &AngularGrid<T> {
        &self.grid
    }

    /// Probability density per degree at each grid angle.
    pub fn density(&self) -> &[T] {
        &self.density
    }

    pub fn total_mass(&self) -> T {
        self.density.iter().copied().sum::<T>() * self.grid.step_deg
    }
}

/// Beam-filters `channel` with `pattern` at every grid angle.
///
/// Per grid point the rays are summed in channel order, so the result is
/// bit-reproducible.
pub fn filter_pas<T: Scalar>(
    channel: &BandChannel<T>,
    pattern: &Beampattern<T>,
    grid: &AngularGrid<T>,
) -> FilteredPas<T> {
    let values = grid
        .angles()
        .map(|alpha| {
            channel.rays().iter().fold(T::zero(), |acc, r| {
                acc + r.power() * pattern.gain_at(wrap_deg(alpha - r.aoa_deg()))
            })
        })
        .collect();
    FilteredPas {
        grid: *grid,
        values,
        source_frequency_ghz: channel.frequency_ghz(),
    }
}

pub fn normalize_pas<T: Scalar>(pas: &FilteredPas<T>) -> NormalizedPas<T> {
    let mass = pas.values.iter().copied().sum::<T>() * pas.grid.step_deg;
    NormalizedPas {
        grid: pas.grid,
        density: pas.values.iter().map(|&v| v / mass).collect(),
    }
}
