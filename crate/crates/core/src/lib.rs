//! Cross-band spatial channel similarity.
//!
//! Given discrete multipath channels observed at two carrier frequencies on the
//! same link, this crate filters each power angular spectrum (PAS) with an
//! azimuth beampattern, and compares the bands with two metrics:
//!
//! * the PAS similarity percentage (PSP), one minus the total-variation
//!   distance between the unit-mass filtered spectra, and
//! * the beam-direction metrics: the high-band power ratio `R` obtained when
//!   steering along low-band directions instead of the high band's own, and
//!   the number of low-band directions that are useless at the high band.
//!
//! Numerics are generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the file formats and the
//! CLI use.

pub mod beampattern;
pub mod channel;
pub mod error;
pub mod io;
pub mod pas;
pub mod psp;
pub mod scalar;
pub mod similarity;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Ray = channel::Ray<f64>;
pub type BandChannel = channel::BandChannel<f64>;
pub type LinkPair = channel::LinkPair<f64>;
pub type Beampattern = beampattern::Beampattern<f64>;
pub type AngularGrid = pas::AngularGrid<f64>;
pub type FilteredPas = pas::FilteredPas<f64>;
pub type NormalizedPas = pas::NormalizedPas<f64>;
pub type PspResult = psp::PspResult<f64>;
pub type DirectionSet = similarity::DirectionSet<f64>;
pub type SimilarityConfig = similarity::SimilarityConfig<f64>;
pub type SimilarityReport = similarity::SimilarityReport<f64>;

pub type Ray32 = channel::Ray<f32>;
pub type BandChannel32 = channel::BandChannel<f32>;
pub type LinkPair32 = channel::LinkPair<f32>;
pub type Beampattern32 = beampattern::Beampattern<f32>;
pub type AngularGrid32 = pas::AngularGrid<f32>;
pub type FilteredPas32 = pas::FilteredPas<f32>;
pub type NormalizedPas32 = pas::NormalizedPas<f32>;
