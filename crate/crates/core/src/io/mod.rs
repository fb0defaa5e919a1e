//! File formats: datasets (JSON canonical, CSV mirror), pattern tables,
//! report and curve exports.
//!
//! At every file boundary powers are in dB, delays in ns and angles in
//! degrees. Report JSON keys come out in struct declaration order and reals
//! are rounded to 12 significant digits, so identical runs are byte-identical.

pub mod dataset;
pub mod export;
pub mod num;
pub mod pattern;

pub use dataset::{load_dataset, read_dataset_file, write_dataset, DatasetFile, LoadedDataset, SkippedLink};
pub use export::{to_json_string, write_batch_outputs, write_json, write_psp_outputs};
pub use pattern::{parse_pattern_spec, read_pattern_csv, write_pattern_csv};
