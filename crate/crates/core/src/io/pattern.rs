//! Pattern spec strings and two-column pattern tables.
//!
//! Spec grammar:
//!
//! * `gpp3:hpbw=<deg>[,amax=<dB>]` (default `amax=30`)
//! * `ula:n=<elements>[,spacing=<wavelengths>][,floor=<dB>]` (defaults 0.5, -60)
//! * `file:<path>` for a CSV table with header `offset_deg,gain_db`

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::beampattern::Beampattern;
use crate::error::{Error, Result};
use crate::io::num::fmt_real;

fn spec_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::PatternSpec {
        spec: spec.to_owned(),
        reason: reason.into(),
    }
}

fn parse_params<'a>(spec: &str, body: &'a str, allowed: &[&str]) -> Result<Vec<(&'a str, f64)>> {
    let mut out: Vec<(&str, f64)> = Vec::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| spec_err(spec, format!("expected key=value, got `{item}`")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(spec_err(spec, format!("unknown key `{k}`")));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(spec_err(spec, format!("key `{k}` given twice")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| spec_err(spec, format!("`{k}` is not a number")))?;
        out.push((k, v));
    }
    Ok(out)
}

fn get(params: &[(&str, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

pub fn parse_pattern_spec(spec: &str) -> Result<Beampattern<f64>> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| spec_err(spec, "expected `<kind>:<params>`"))?;
    let wrap = |e: Error| match e {
        Error::InvalidParameter(reason) => spec_err(spec, reason),
        other => other,
    };
    match kind.trim() {
        "gpp3" => {
            let p = parse_params(spec, body, &["hpbw", "amax"])?;
            let hpbw = get(&p, "hpbw").ok_or_else(|| spec_err(spec, "missing `hpbw`"))?;
            Beampattern::gpp3(hpbw, get(&p, "amax").unwrap_or(30.0)).map_err(wrap)
        }
        "ula" => {
            let p = parse_params(spec, body, &["n", "spacing", "floor"])?;
            let n = get(&p, "n").ok_or_else(|| spec_err(spec, "missing `n`"))?;
            if n.fract() != 0.0 || n < 0.0 {
                return Err(spec_err(spec, "`n` must be a whole number"));
            }
            Beampattern::ula(
                n as usize,
                get(&p, "spacing").unwrap_or(0.5),
                get(&p, "floor").unwrap_or(-60.0),
            )
            .map_err(wrap)
        }
        "file" => read_pattern_csv(body.trim()),
        other => Err(spec_err(spec, format!("unknown pattern kind `{other}`"))),
    }
}

/// Reads an `offset_deg,gain_db` table into a tabulated pattern.
pub fn read_pattern_csv(path: impl AsRef<Path>) -> Result<Beampattern<f64>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let samples = reader
        .deserialize::<(f64, f64)>()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|source| Error::Csv {
            path: path.to_owned(),
            source,
        })?;
    Beampattern::tabulated(samples).map_err(|e| match e {
        Error::InvalidParameter(reason) => Error::validation(path.display().to_string(), reason),
        other => other,
    })
}

/// Writes `pattern` sampled at `step_deg` over `(-180, 180]`.
pub fn write_pattern_csv<W: Write>(out: W, pattern: &Beampattern<f64>, step_deg: f64) -> Result<()> {
    let table = pattern.tabulate(step_deg)?;
    let mut w = csv::Writer::from_writer(out);
    let to_err = |source| Error::Csv {
        path: "<pattern>".into(),
        source,
    };
    w.write_record(["offset_deg", "gain_db"]).map_err(to_err)?;
    for (offset, gain) in table {
        w.write_record([fmt_real(offset), fmt_real(gain)]).map_err(to_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<pattern>".into(),
        source,
    })?;
    Ok(())
}
