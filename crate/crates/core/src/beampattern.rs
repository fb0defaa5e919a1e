//! Azimuth gain patterns used as angular filters.
//!
//! Every pattern is normalized to a 0 dB peak at boresight (offset 0) and is
//! evaluated on offsets wrapped into `(-180, 180]` degrees.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from_db, wrap_deg, Scalar};

/// Deepest gain an array-factor null is reported with. Exact nulls would
/// otherwise give `-inf` dB and zero filtered power.
pub const ULA_NULL_FLOOR_DB: f64 = -300.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Beampattern<T> {
    /// Parabolic main lobe clipped at `-a_max_db`: `-min(12 (θ/θ3dB)², A_max)`.
    Gpp3 { hpbw_deg: T, a_max_db: T },
    /// Boresight uniform linear array of isotropic elements; the back half
    /// plane is held at `backplane_floor_db`.
    Ula {
        n_elements: usize,
        spacing_wavelengths: T,
        backplane_floor_db: T,
    },
    /// Samples `(offset_deg, gain_db)` sorted by offset, interpolated
    /// linearly in dB around the circle.
    Tabulated { samples: Vec<(T, T)> },
}

impl<T: Scalar> Beampattern<T> {
    pub fn gpp3(hpbw_deg: T, a_max_db: T) -> Result<Self> {
        if !(hpbw_deg > T::zero() && hpbw_deg <= T::lit(180.0)) {
            return Err(Error::invalid(format!("HPBW must lie in (0, 180] deg, got {hpbw_deg}")));
        }
        if !(a_max_db.is_finite() && a_max_db > T::zero()) {
            return Err(Error::invalid(format!("A_max must be positive, got {a_max_db}")));
        }
        Ok(Beampattern::Gpp3 { hpbw_deg, a_max_db })
    }

    pub fn ula(n_elements: usize, spacing_wavelengths: T, backplane_floor_db: T) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::invalid(format!(
                "ULA needs at least 2 elements, got {n_elements}"
            )));
        }
        if !(spacing_wavelengths.is_finite() && spacing_wavelengths > T::zero()) {
            return Err(Error::invalid("ULA element spacing must be positive"));
        }
        if !(backplane_floor_db.is_finite() && backplane_floor_db < T::zero()) {
            return Err(Error::invalid("ULA backplane floor must be below 0 dB"));
        }
        Ok(Beampattern::Ula {
            n_elements,
            spacing_wavelengths,
            backplane_floor_db,
        })
    }

    /// Builds a tabulated pattern. Offsets are wrapped into `(-180, 180]` and
    /// sorted; gains are shifted so the peak is 0 dB, and the peak must be at
    /// boresight.
    pub fn tabulated(samples: Vec<(T, T)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("tabulated pattern needs at least two samples"));
        }
        if samples.iter().any(|(o, g)| !o.is_finite() || !g.is_finite()) {
            return Err(Error::invalid("tabulated pattern samples must be finite"));
        }
        let mut samples: Vec<(T, T)> = samples.into_iter().map(|(o, g)| (wrap_deg(o), g)).collect();
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("tabulated pattern has duplicate offsets"));
        }
        let peak = samples.iter().map(|s| s.1).fold(T::neg_infinity(), T::max);
        for s in samples.iter_mut() {
            s.1 = s.1 - peak;
        }
        let pattern = Beampattern::Tabulated { samples };
        if pattern.gain_db(T::zero()).abs() > T::lit(1e-9) {
            return Err(Error::invalid("tabulated pattern peak is not at offset 0"));
        }
        Ok(pattern)
    }

    /// Gain in dB at `offset_deg` from boresight.
    pub fn gain_db(&self, offset_deg: T) -> T {
        let theta = wrap_deg(offset_deg);
        match self {
            Beampattern::Gpp3 { hpbw_deg, a_max_db } => {
                let x = theta / *hpbw_deg;
                -(T::lit(12.0) * x * x).min(*a_max_db)
            }
            Beampattern::Ula {
                n_elements,
                spacing_wavelengths,
                backplane_floor_db,
            } => {
                if theta.abs() > T::lit(90.0) {
                    *backplane_floor_db
                } else {
                    ula_power_db(*n_elements, *spacing_wavelengths, theta)
                }
            }
            Beampattern::Tabulated { samples } => interpolate_circular(samples, theta),
        }
    }

    /// Linear gain `10^(gain_db/10)` at `offset_deg`.
    pub fn gain_at(&self, offset_deg: T) -> T {
        from_db(self.gain_db(offset_deg))
    }

    /// Full half-power beamwidth of the boresight lobe in degrees.
    ///
    /// Each side is scanned outward from 0 in 0.05° steps to the first sample
    /// at or below -3 dB, then the crossing is refined by bisection.
    pub fn hpbw(&self) -> Result<T> {
        let right = self.half_power_offset(T::one())?;
        let left = self.half_power_offset(-T::one())?;
        Ok(right + left)
    }

    fn half_power_offset(&self, sign: T) -> Result<T> {
        let minus3 = T::lit(-3.0);
        let scan = T::lit(0.05);
        let steps = 3600;
        let below = |x: T| self.gain_db(sign * x) <= minus3;
        let mut lo = T::zero();
        let mut hi = None;
        for k in 1..=steps {
            let x = T::from_usize_lossy(k) * scan;
            if below(x) {
                hi = Some(x);
                break;
            }
            lo = x;
        }
        let mut hi = hi.ok_or(Error::NoCrossing)?;
        // 0.05 / 2^20 is far below the 0.01 deg resolution we report to
        for _ in 0..20 {
            let mid = (lo + hi) / T::lit(2.0);
            if below(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((lo + hi) / T::lit(2.0))
    }

    /// Samples the pattern at `k·step` for every `k` with `k·step` in
    /// `(-180, 180]`.
    pub fn tabulate(&self, step_deg: T) -> Result<Vec<(T, T)>> {
        if !(step_deg > T::zero() && step_deg <= T::lit(180.0)) {
            return Err(Error::invalid("tabulation step must lie in (0, 180] deg"));
        }
        let half = T::lit(180.0);
        let n = (half / step_deg + T::lit(1e-9)).floor().to_i64().unwrap_or(0);
        let mut out = Vec::with_capacity(2 * n as usize + 1);
        for k in -n..=n {
            let offset = T::from_i64(k).expect("fits") * step_deg;
            if offset > -half && offset <= half {
                out.push((offset, self.gain_db(offset)));
            }
        }
        Ok(out)
    }

    /// Peak-to-minimum gain ratio in dB, for the kinds where it is closed form.
    pub fn dynamic_range_db(&self) -> Option<T> {
        match self {
            Beampattern::Gpp3 { a_max_db, .. } => Some(*a_max_db),
            Beampattern::Ula { .. } => None,
            Beampattern::Tabulated { samples } => Some(-samples.iter().map(|s| s.1).fold(T::infinity(), T::min)),
        }
    }
}

/// `|AF(θ)|² / N²` in dB with `AF(θ) = Σ exp(j 2π d n sin θ)`.
fn ula_power_db<T: Scalar>(n: usize, spacing: T, theta_deg: T) -> T {
    let psi = T::lit(2.0) * T::PI() * spacing * theta_deg.to_radians().sin();
    let af: Complex<T> = (0..n)
        .map(|k| Complex::from_polar(T::one(), psi * T::from_usize_lossy(k)))
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z);
    let nn = T::from_usize_lossy(n);
    let power = af.norm_sqr() / (nn * nn);
    let floor = T::lit(ULA_NULL_FLOOR_DB);
    let db = T::lit(10.0) * power.log10();
    // the sum is exact at boresight only up to rounding
    if theta_deg == T::zero() {
        T::zero()
    } else {
        db.max(floor).min(T::zero())
    }
}

fn interpolate_circular<T: Scalar>(samples: &[(T, T)], theta: T) -> T {
    let full = T::lit(360.0);
    let idx = samples.partition_point(|s| s.0 <= theta);
    let (a, b) = match idx {
        0 => {
            let last = samples[samples.len() - 1];
            ((last.0 - full, last.1), samples[0])
        }
        i if i == samples.len() => {
            let first = samples[0];
            (samples[i - 1], (first.0 + full, first.1))
        }
        i => (samples[i - 1], samples[i]),
    };
    if theta == a.0 {
        return a.1;
    }
    let t = (theta - a.0) / (b.0 - a.0);
    a.1 + t * (b.1 - a.1)
}
