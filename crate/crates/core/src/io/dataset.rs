//! Multi-band link datasets.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "metadata": { ... },
//!   "links": [
//!     { "link_id": "l1",
//!       "bands": [ { "freq_ghz": 4.0,
//!                    "paths": [ { "power_db": -80.1, "delay_ns": 12.5, "aoa_deg": 301.0 } ] } ] }
//!   ]
//! }
//! ```
//!
//! The CSV mirror holds one path per row with the header
//! `link_id,freq_ghz,power_db,delay_ns,aoa_deg[,aod_deg]`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::channel::{BandChannel, LinkPair, Ray};
use crate::error::{Error, Result};
use crate::scalar::{from_db, to_db};

pub const SCHEMA_VERSION: &str = "1.0";

/// Band frequencies closer than this are the same band.
pub const FREQ_MATCH_GHZ: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub schema_version: String,
    #[serde(default)]
    pub metadata: Map<String, Value>,
    pub links: Vec<LinkRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    pub link_id: String,
    pub bands: Vec<BandRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandRecord {
    pub freq_ghz: f64,
    pub paths: Vec<PathRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathRecord {
    pub power_db: f64,
    pub delay_ns: f64,
    pub aoa_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aod_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CsvRow {
    link_id: String,
    freq_ghz: f64,
    power_db: f64,
    delay_ns: f64,
    aoa_deg: f64,
    #[serde(default)]
    aod_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLink {
    pub link_id: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub pairs: Vec<LinkPair<f64>>,
    /// Links lacking one of the requested bands.
    pub skipped: Vec<SkippedLink>,
    pub metadata: Map<String, Value>,
}

impl PathRecord {
    fn from_ray(ray: &Ray<f64>) -> Self {
        PathRecord {
            power_db: to_db(ray.power()),
            delay_ns: ray.delay() * 1e9,
            aoa_deg: ray.aoa_deg(),
            aod_deg: ray.aod_deg(),
        }
    }
}

impl BandRecord {
    fn from_channel(channel: &BandChannel<f64>) -> Self {
        BandRecord {
            freq_ghz: channel.frequency_ghz(),
            paths: channel.rays().iter().map(PathRecord::from_ray).collect(),
        }
    }
}

impl DatasetFile {
    /// Serializable form of a list of link pairs. An equal-frequency pair
    /// is stored as a single band.
    pub fn from_pairs(pairs: &[LinkPair<f64>], metadata: Map<String, Value>) -> Self {
        let links = pairs
            .iter()
            .map(|pair| {
                let mut bands = vec![BandRecord::from_channel(pair.low())];
                if pair.high().frequency_ghz() != pair.low().frequency_ghz() {
                    bands.push(BandRecord::from_channel(pair.high()));
                }
                LinkRecord {
                    link_id: pair.link_id().to_owned(),
                    bands,
                }
            })
            .collect();
        DatasetFile {
            schema_version: SCHEMA_VERSION.to_owned(),
            metadata,
            links,
        }
    }

    /// Checks every field; the error names the offending JSON path.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version.trim().is_empty() {
            return Err(Error::validation("schema_version", "must not be empty"));
        }
        let mut seen = HashSet::new();
        for (i, link) in self.links.iter().enumerate() {
            let at = format!("links[{i}]");
            if !seen.insert(link.link_id.as_str()) {
                return Err(Error::validation(
                    format!("{at}.link_id"),
                    format!("duplicate link id `{}`", link.link_id),
                ));
            }
            if link.bands.is_empty() {
                return Err(Error::validation(format!("{at}.bands"), "no bands"));
            }
            for (j, band) in link.bands.iter().enumerate() {
                let at = format!("{at}.bands[{j}]");
                if !(band.freq_ghz.is_finite() && band.freq_ghz > 0.0) {
                    return Err(Error::validation(format!("{at}.freq_ghz"), "must be positive"));
                }
                if link.bands[..j]
                    .iter()
                    .any(|b| (b.freq_ghz - band.freq_ghz).abs() <= FREQ_MATCH_GHZ)
                {
                    return Err(Error::validation(format!("{at}.freq_ghz"), "duplicate band frequency"));
                }
                if band.paths.is_empty() {
                    return Err(Error::validation(format!("{at}.paths"), "no paths"));
                }
                for (k, p) in band.paths.iter().enumerate() {
                    let at = format!("{at}.paths[{k}]");
                    if !p.power_db.is_finite() {
                        return Err(Error::validation(format!("{at}.power_db"), "must be finite"));
                    }
                    if !(p.delay_ns.is_finite() && p.delay_ns >= 0.0) {
                        return Err(Error::validation(format!("{at}.delay_ns"), "must be >= 0"));
                    }
                    if !(0.0..360.0).contains(&p.aoa_deg) {
                        return Err(Error::validation(format!("{at}.aoa_deg"), "must lie in [0, 360)"));
                    }
                    if let Some(aod) = p.aod_deg {
                        if !(0.0..360.0).contains(&aod) {
                            return Err(Error::validation(format!("{at}.aod_deg"), "must lie in [0, 360)"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs the two requested bands of every link. Links missing either
    /// band are reported in [`LoadedDataset::skipped`].
    pub fn to_pairs(&self, low_freq_ghz: f64, high_freq_ghz: f64) -> Result<LoadedDataset> {
        self.validate()?;
        if low_freq_ghz > high_freq_ghz {
            return Err(Error::invalid(format!(
                "low band {low_freq_ghz} GHz is above high band {high_freq_ghz} GHz"
            )));
        }
        let mut pairs = Vec::new();
        let mut skipped = Vec::new();
        for link in &self.links {
            let find = |f: f64| link.bands.iter().find(|b| (b.freq_ghz - f).abs() <= FREQ_MATCH_GHZ);
            match (find(low_freq_ghz), find(high_freq_ghz)) {
                (Some(lo), Some(hi)) => {
                    let low = band_channel(&link.link_id, lo)?;
                    let high = band_channel(&link.link_id, hi)?;
                    pairs.push(LinkPair::new(low, high)?);
                }
                (lo, _) => {
                    let missing = if lo.is_none() { low_freq_ghz } else { high_freq_ghz };
                    skipped.push(SkippedLink {
                        link_id: link.link_id.clone(),
                        reason: format!("no band at {missing} GHz"),
                    });
                }
            }
        }
        Ok(LoadedDataset {
            pairs,
            skipped,
            metadata: self.metadata.clone(),
        })
    }

    fn from_csv_rows(rows: Vec<CsvRow>) -> Self {
        let mut links: Vec<LinkRecord> = Vec::new();
        for row in rows {
            let li = match links.iter().position(|l| l.link_id == row.link_id) {
                Some(i) => i,
                None => {
                    links.push(LinkRecord {
                        link_id: row.link_id.clone(),
                        bands: Vec::new(),
                    });
                    links.len() - 1
                }
            };
            let bands = &mut links[li].bands;
            let bi = match bands
                .iter()
                .position(|b| (b.freq_ghz - row.freq_ghz).abs() <= FREQ_MATCH_GHZ)
            {
                Some(i) => i,
                None => {
                    bands.push(BandRecord {
                        freq_ghz: row.freq_ghz,
                        paths: Vec::new(),
                    });
                    bands.len() - 1
                }
            };
            bands[bi].paths.push(PathRecord {
                power_db: row.power_db,
                delay_ns: row.delay_ns,
                aoa_deg: row.aoa_deg,
                aod_deg: row.aod_deg,
            });
        }
        DatasetFile {
            schema_version: SCHEMA_VERSION.to_owned(),
            metadata: Map::new(),
            links,
        }
    }
}

fn band_channel(link_id: &str, band: &BandRecord) -> Result<BandChannel<f64>> {
    let rays = band
        .paths
        .iter()
        .map(|p| {
            let ray = Ray::new(from_db(p.power_db), p.delay_ns * 1e-9, p.aoa_deg)?;
            match p.aod_deg {
                Some(aod) => ray.with_aod(aod),
                None => Ok(ray),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    BandChannel::new(link_id, band.freq_ghz, rays)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Reads a dataset, choosing the CSV reader for `.csv` files and JSON otherwise.
pub fn read_dataset_file(path: impl AsRef<Path>) -> Result<DatasetFile> {
    let path = path.as_ref();
    let file = open(path)?;
    let dataset = if is_csv(path) {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let rows = reader
            .deserialize()
            .collect::<std::result::Result<Vec<CsvRow>, _>>()
            .map_err(|source| Error::Csv {
                path: path.to_owned(),
                source,
            })?;
        DatasetFile::from_csv_rows(rows)
    } else {
        serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })?
    };
    dataset.validate().map_err(|e| match e {
        Error::Validation { path: field, reason } => Error::Validation {
            path: format!("{}: {field}", path.display()),
            reason,
        },
        other => other,
    })?;
    Ok(dataset)
}

/// Loads `path` and pairs the bands at `low_freq_ghz` and `high_freq_ghz`.
pub fn load_dataset(path: impl AsRef<Path>, low_freq_ghz: f64, high_freq_ghz: f64) -> Result<LoadedDataset> {
    read_dataset_file(path)?.to_pairs(low_freq_ghz, high_freq_ghz)
}

/// Writes the dataset as pretty JSON, or as path rows when `path` ends in `.csv`.
/// Reals are written at full precision.
pub fn write_dataset(path: impl AsRef<Path>, dataset: &DatasetFile) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    if is_csv(path) {
        let mut w = csv::Writer::from_writer(file);
        let csv_err = |source| Error::Csv {
            path: path.to_owned(),
            source,
        };
        for link in &dataset.links {
            for band in &link.bands {
                for p in &band.paths {
                    w.serialize(CsvRow {
                        link_id: link.link_id.clone(),
                        freq_ghz: band.freq_ghz,
                        power_db: p.power_db,
                        delay_ns: p.delay_ns,
                        aoa_deg: p.aoa_deg,
                        aod_deg: p.aod_deg,
                    })
                    .map_err(csv_err)?;
                }
            }
        }
        w.flush().map_err(io_err)?;
    } else {
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, dataset).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })?;
        w.write_all(b"\n").map_err(io_err)?;
        w.flush().map_err(io_err)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DatasetFile {
        serde_json::from_str(
            r#"{
              "schema_version": "1.0",
              "metadata": {"source": "unit"},
              "links": [
                {"link_id": "a", "bands": [
                  {"freq_ghz": 4.0, "paths": [{"power_db": -60.0, "delay_ns": 10.0, "aoa_deg": 30.0, "aod_deg": 200.0}]},
                  {"freq_ghz": 86.0, "paths": [{"power_db": -80.0, "delay_ns": 10.0, "aoa_deg": 31.0}]}
                ]},
                {"link_id": "b", "bands": [
                  {"freq_ghz": 4.0, "paths": [{"power_db": -70.0, "delay_ns": 0.0, "aoa_deg": 0.0}]}
                ]}
              ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn pairs_requested_bands_and_skips_incomplete_links() {
        let loaded = sample().to_pairs(4.0, 86.0).unwrap();
        assert_eq!(loaded.pairs.len(), 1);
        assert_eq!(loaded.skipped.len(), 1);
        assert_eq!(loaded.skipped[0].link_id, "b");
        let pair = &loaded.pairs[0];
        assert!((pair.low().rays()[0].power() - 1e-6).abs() < 1e-20);
        assert!((pair.low().rays()[0].delay() - 1e-8).abs() < 1e-22);
        assert_eq!(pair.low().rays()[0].aod_deg(), Some(200.0));
        assert_eq!(pair.high().frequency_ghz(), 86.0);
    }

    #[test]
    fn self_pair_uses_one_band_twice() {
        let loaded = sample().to_pairs(4.0, 4.0).unwrap();
        assert_eq!(loaded.pairs.len(), 2);
        assert!(loaded.skipped.is_empty());
        assert_eq!(loaded.pairs[0].low(), loaded.pairs[0].high());
    }

    #[test]
    fn frequency_match_tolerance() {
        let loaded = sample().to_pairs(4.0 + 5e-7, 86.0 - 5e-7).unwrap();
        assert_eq!(loaded.pairs.len(), 1);
        let loaded = sample().to_pairs(4.0, 86.01).unwrap();
        assert_eq!(loaded.pairs.len(), 0);
    }

    #[test]
    fn validation_names_the_field() {
        let mut d = sample();
        d.links[0].bands[1].paths[0].aoa_deg = 360.0;
        match d.validate() {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "links[0].bands[1].paths[0].aoa_deg"),
            other => panic!("unexpected {other:?}"),
        }
        let mut d = sample();
        d.links[1].bands[0].paths[0].delay_ns = -1.0;
        assert!(d.validate().is_err());
        let mut d = sample();
        d.links[1].link_id = "a".into();
        assert!(d.validate().is_err());
        let mut d = sample();
        d.links[0].bands[0].paths[0].power_db = f64::INFINITY;
        assert!(d.validate().is_err());
        let mut d = sample();
        d.links[0].bands[0].paths.clear();
        assert!(d.validate().is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        std::fs::write(
            &p,
            "{\n  \"schema_version\": \"1.0\",\n  \"links\": [ {\"link_id\": 3} ]\n}",
        )
        .unwrap();
        let err = read_dataset_file(&p).unwrap_err();
        assert!(matches!(err, Error::Json { .. }));
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(read_dataset_file("/nonexistent/x.json").unwrap_err().is_io());
    }
}
