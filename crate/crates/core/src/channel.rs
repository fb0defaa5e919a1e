//! Discrete multipath channel types.
//!
//! A [`BandChannel`] is the power-angle-delay profile of one link at one
//! carrier frequency: a list of rays, each with linear power, delay and
//! azimuth angle of arrival. Powers are kept linear and angles in degrees.

use crate::error::{Error, Result};
use crate::scalar::{normalize_deg, to_db, Scalar};

/// One multipath component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray<T> {
    power: T,
    delay: T,
    aoa_deg: T,
    aod_deg: Option<T>,
}

impl<T: Scalar> Ray<T> {
    /// `power` is linear, `delay` in seconds, angles in degrees (normalized
    /// into `[0, 360)`).
    pub fn new(power: T, delay: T, aoa_deg: T) -> Result<Self> {
        if !(power.is_finite() && power > T::zero()) {
            return Err(Error::invalid(format!(
                "ray power must be positive and finite, got {power}"
            )));
        }
        if !(delay.is_finite() && delay >= T::zero()) {
            return Err(Error::invalid(format!("ray delay must be non-negative, got {delay}")));
        }
        if !aoa_deg.is_finite() {
            return Err(Error::invalid("ray AoA must be finite"));
        }
        Ok(Ray {
            power,
            delay,
            aoa_deg: normalize_deg(aoa_deg),
            aod_deg: None,
        })
    }

    /// Attaches an angle of departure. It is carried through I/O but no
    /// metric reads it.
    pub fn with_aod(mut self, aod_deg: T) -> Result<Self> {
        if !aod_deg.is_finite() {
            return Err(Error::invalid("ray AoD must be finite"));
        }
        self.aod_deg = Some(normalize_deg(aod_deg));
        Ok(self)
    }

    pub fn power(&self) -> T {
        self.power
    }

    pub fn delay(&self) -> T {
        self.delay
    }

    pub fn aoa_deg(&self) -> T {
        self.aoa_deg
    }

    pub fn aod_deg(&self) -> Option<T> {
        self.aod_deg
    }

    pub(crate) fn with_power_unchecked(mut self, power: T) -> Self {
        self.power = power;
        self
    }
}

/// The discrete PADP of one link at one carrier frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct BandChannel<T> {
    frequency_ghz: T,
    rays: Vec<Ray<T>>,
    link_id: String,
}

impl<T: Scalar> BandChannel<T> {
    pub fn new(link_id: impl Into<String>, frequency_ghz: T, rays: Vec<Ray<T>>) -> Result<Self> {
        if !(frequency_ghz.is_finite() && frequency_ghz > T::zero()) {
            return Err(Error::invalid(format!(
                "carrier frequency must be positive, got {frequency_ghz}"
            )));
        }
        if rays.is_empty() {
            return Err(Error::invalid("a channel needs at least one ray"));
        }
        Ok(BandChannel {
            frequency_ghz,
            rays,
            link_id: link_id.into(),
        })
    }

    pub fn frequency_ghz(&self) -> T {
        self.frequency_ghz
    }

    pub fn rays(&self) -> &[Ray<T>] {
        &self.rays
    }

    pub fn link_id(&self) -> &str {
        &self.link_id
    }

    /// Sum of all ray powers.
    pub fn total_gain(&self) -> T {
        self.rays.iter().map(|r| r.power).sum()
    }

    /// Strongest ray power.
    pub fn max_power(&self) -> T {
        self.rays.iter().map(|r| r.power).fold(T::neg_infinity(), T::max)
    }

    /// Keeps the rays within `range_db` of the strongest one, in their
    /// original order.
    pub fn cull_dynamic_range(&self, range_db: T) -> Result<Self> {
        if !(range_db.is_finite() && range_db > T::zero()) {
            return Err(Error::invalid(format!(
                "dynamic range must be positive, got {range_db}"
            )));
        }
        let max = self.max_power();
        let rays: Vec<_> = self
            .rays
            .iter()
            .copied()
            .filter(|r| to_db(r.power / max) >= -range_db)
            .collect();
        Ok(BandChannel {
            frequency_ghz: self.frequency_ghz,
            rays,
            link_id: self.link_id.clone(),
        })
    }

    /// Same rays with every power multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        if !(factor.is_finite() && factor > T::zero()) {
            return Err(Error::invalid("power scale factor must be positive"));
        }
        let rays = self
            .rays
            .iter()
            .map(|r| r.with_power_unchecked(r.power * factor))
            .collect();
        BandChannel::new(self.link_id.clone(), self.frequency_ghz, rays)
    }

    /// Same rays with every AoA rotated by `delta_deg`.
    pub fn rotated(&self, delta_deg: T) -> Self {
        let rays = self
            .rays
            .iter()
            .map(|r| Ray {
                aoa_deg: normalize_deg(r.aoa_deg + delta_deg),
                ..*r
            })
            .collect();
        BandChannel {
            frequency_ghz: self.frequency_ghz,
            rays,
            link_id: self.link_id.clone(),
        }
    }

    /// Concatenates the ray lists of two channels at the same frequency.
    pub fn merged(&self, other: &Self) -> Result<Self> {
        if self.frequency_ghz != other.frequency_ghz {
            return Err(Error::invalid("cannot merge channels at different frequencies"));
        }
        let mut rays = self.rays.clone();
        rays.extend_from_slice(&other.rays);
        BandChannel::new(self.link_id.clone(), self.frequency_ghz, rays)
    }
}

/// Co-located low- and high-band channels of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkPair<T> {
    low: BandChannel<T>,
    high: BandChannel<T>,
}

impl<T: Scalar> LinkPair<T> {
    /// Equal frequencies are accepted (self-comparison).
    pub fn new(low: BandChannel<T>, high: BandChannel<T>) -> Result<Self> {
        if low.frequency_ghz > high.frequency_ghz {
            return Err(Error::invalid(format!(
                "low band {} GHz is above high band {} GHz",
                low.frequency_ghz, high.frequency_ghz
            )));
        }
        if low.link_id != high.link_id {
            return Err(Error::invalid(format!(
                "link ids differ: `{}` vs `{}`",
                low.link_id, high.link_id
            )));
        }
        Ok(LinkPair { low, high })
    }

    pub fn low(&self) -> &BandChannel<T> {
        &self.low
    }

    pub fn high(&self) -> &BandChannel<T> {
        &self.high
    }

    pub fn link_id(&self) -> &str {
        &self.low.link_id
    }
}
