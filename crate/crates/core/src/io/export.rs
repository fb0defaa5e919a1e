//! Report and curve writers.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::num::fmt_real;
use crate::pas::{FilteredPas, NormalizedPas};
use crate::scalar::Scalar;
use crate::stats::{BatchReport, PspBatch};

/// Pretty JSON followed by a newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    write_text(path.as_ref(), &to_json_string(value))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn curve_csv<X: std::fmt::Display>(header: [&str; 2], rows: impl IntoIterator<Item = (X, f64)>) -> String {
    let mut s = format!("{},{}\n", header[0], header[1]);
    for (x, y) in rows {
        s.push_str(&format!("{x},{}\n", fmt_real(y)));
    }
    s
}

fn pdf_csv(header: &str, pdf: &BTreeMap<usize, f64>) -> String {
    curve_csv([header, "probability"], pdf.iter().map(|(k, p)| (*k, *p)))
}

/// Writes `batch_report.json`, `r_cdf.csv`, `nf_pdf.csv`, `card_low_pdf.csv`,
/// `card_high_pdf.csv` and `percentiles.csv` into `dir` (created if needed).
pub fn write_batch_outputs<T: Scalar>(dir: impl AsRef<Path>, report: &BatchReport<T>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    write_json(dir.join("batch_report.json"), report)?;
    write_text(
        &dir.join("r_cdf.csv"),
        &curve_csv(
            ["power_ratio_db", "cumulative_probability"],
            report.r_cdf.iter().map(|(x, p)| (fmt_real(*x), *p)),
        ),
    )?;
    write_text(&dir.join("nf_pdf.csv"), &pdf_csv("n_false", &report.nf_pdf))?;
    write_text(
        &dir.join("card_low_pdf.csv"),
        &pdf_csv("card_low", &report.card_low_pdf),
    )?;
    write_text(
        &dir.join("card_high_pdf.csv"),
        &pdf_csv("card_high", &report.card_high_pdf),
    )?;
    write_text(
        &dir.join("percentiles.csv"),
        &curve_csv(
            ["percent", "power_loss_db"],
            report.percentiles.iter().map(|(l, v)| (*l, *v)),
        ),
    )?;
    Ok(())
}

/// Writes `psp_report.json` and `psp_cdf.csv` into `dir` (created if needed).
pub fn write_psp_outputs<T: Scalar>(dir: impl AsRef<Path>, report: &PspBatch<T>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    write_json(dir.join("psp_report.json"), report)?;
    write_text(
        &dir.join("psp_cdf.csv"),
        &curve_csv(
            ["psp_percent", "cumulative_probability"],
            report.psp_cdf.iter().map(|(x, p)| (fmt_real(*x), *p)),
        ),
    )
}

/// `angle_deg,value` rows for a filtered spectrum.
pub fn write_filtered_pas_csv<T: Scalar, W: Write>(out: W, pas: &FilteredPas<T>) -> Result<()> {
    let grid = pas.grid();
    let rows = pas
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| (fmt_real(grid.angle(k).as_f64()), v.as_f64()));
    write_all(out, &curve_csv(["angle_deg", "value"], rows))
}

/// `angle_deg,density` rows for a unit-mass spectrum.
pub fn write_normalized_pas_csv<T: Scalar, W: Write>(out: W, pas: &NormalizedPas<T>) -> Result<()> {
    let grid = pas.grid();
    let rows = pas
        .density()
        .iter()
        .enumerate()
        .map(|(k, v)| (fmt_real(grid.angle(k).as_f64()), v.as_f64()));
    write_all(out, &curve_csv(["angle_deg", "density"], rows))
}

fn write_all<W: Write>(out: W, text: &str) -> Result<()> {
    let mut w = BufWriter::new(out);
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io {
            path: "<output>".into(),
            source,
        })
}

/// Convenience for writing a spectrum straight to a file path.
pub fn write_filtered_pas_file<T: Scalar>(path: impl AsRef<Path>, pas: &FilteredPas<T>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    write_filtered_pas_csv(file, pas)
}
