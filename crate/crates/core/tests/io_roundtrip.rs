use std::fs;

use xband_core::beampattern::Beampattern;
use xband_core::io::{
    load_dataset, parse_pattern_spec, read_pattern_csv, write_batch_outputs, write_dataset, write_pattern_csv,
    DatasetFile,
};
use xband_core::pas::AngularGrid;
use xband_core::similarity::SimilarityConfig;
use xband_core::stats::analyze_dataset;
use xband_core::synth::{generate_dataset, generation_metadata, GenConfig};
use xband_core::Error;

fn generated(n: usize) -> (GenConfig, DatasetFile) {
    let cfg = GenConfig::default();
    let pairs = generate_dataset(&cfg, n).unwrap();
    let file = DatasetFile::from_pairs(&pairs, generation_metadata(&cfg, n));
    (cfg, file)
}

#[test]
fn json_round_trip_preserves_channels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let cfg = GenConfig::default();
    let pairs = generate_dataset(&cfg, 25).unwrap();
    write_dataset(&path, &DatasetFile::from_pairs(&pairs, generation_metadata(&cfg, 25))).unwrap();
    let loaded = load_dataset(&path, 4.0, 86.0).unwrap();
    assert!(loaded.skipped.is_empty());
    assert_eq!(loaded.pairs.len(), pairs.len());
    assert_eq!(loaded.metadata["gen_config"]["seed"], 1);
    for (a, b) in pairs.iter().zip(&loaded.pairs) {
        assert_eq!(a.link_id(), b.link_id());
        for (ca, cb) in [(a.low(), b.low()), (a.high(), b.high())] {
            assert_eq!(ca.rays().len(), cb.rays().len());
            for (ra, rb) in ca.rays().iter().zip(cb.rays()) {
                assert!((ra.power() - rb.power()).abs() <= 1e-12 * ra.power());
                assert!((ra.delay() - rb.delay()).abs() <= 1e-12 * ra.delay().max(1e-12));
                assert_eq!(ra.aoa_deg(), rb.aoa_deg());
            }
        }
    }
}

#[test]
fn csv_and_json_load_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (_, file) = generated(12);
    let json = dir.path().join("d.json");
    let csv = dir.path().join("d.csv");
    write_dataset(&json, &file).unwrap();
    write_dataset(&csv, &file).unwrap();
    let a = load_dataset(&json, 4.0, 86.0).unwrap();
    let b = load_dataset(&csv, 4.0, 86.0).unwrap();
    assert_eq!(a.pairs, b.pairs);
}

#[test]
fn link_without_high_band_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    fs::write(
        &path,
        r#"{"schema_version":"1.0","links":[
            {"link_id":"a","bands":[
                {"freq_ghz":4,"paths":[{"power_db":0,"delay_ns":0,"aoa_deg":10}]},
                {"freq_ghz":86,"paths":[{"power_db":-3,"delay_ns":5,"aoa_deg":12}]}]},
            {"link_id":"b","bands":[
                {"freq_ghz":4,"paths":[{"power_db":0,"delay_ns":0,"aoa_deg":10}]},
                {"freq_ghz":28,"paths":[{"power_db":0,"delay_ns":0,"aoa_deg":10}]}]}]}"#,
    )
    .unwrap();
    let loaded = load_dataset(&path, 4.0, 86.0).unwrap();
    assert_eq!(loaded.pairs.len(), 1);
    assert_eq!(loaded.skipped.len(), 1);
    assert_eq!(loaded.skipped[0].link_id, "b");
}

#[test]
fn malformed_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    fs::write(
        &path,
        r#"{"schema_version":"1.0","links":[{"link_id":"a","bands":[
            {"freq_ghz":4,"paths":[{"power_db":0,"delay_ns":-1,"aoa_deg":10}]}]}]}"#,
    )
    .unwrap();
    let err = load_dataset(&path, 4.0, 86.0).unwrap_err();
    assert!(matches!(err, Error::Validation { .. }));
    assert!(err.to_string().contains("links[0].bands[0].paths[0].delay_ns"), "{err}");
}

#[test]
fn pattern_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let ula = parse_pattern_spec("ula:n=8,spacing=0.5,floor=-60").unwrap();
    write_pattern_csv(fs::File::create(&path).unwrap(), &ula, 0.5).unwrap();
    let back = read_pattern_csv(&path).unwrap();
    for k in -360..=360 {
        let x = k as f64 * 0.5;
        assert!((back.gain_db(x) - ula.gain_db(x)).abs() < 1e-9, "{x}");
    }
    let spec = format!("file:{}", path.display());
    assert!(matches!(
        parse_pattern_spec(&spec).unwrap(),
        Beampattern::Tabulated { .. }
    ));
}

#[test]
fn batch_outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = generate_dataset(&GenConfig::default(), 20).unwrap();
    let p = parse_pattern_spec("gpp3:hpbw=10").unwrap();
    let grid = AngularGrid::new(1.0).unwrap();
    let report = analyze_dataset(&pairs, &p, &p, &grid, &SimilarityConfig::default()).unwrap();
    write_batch_outputs(dir.path(), &report).unwrap();
    for name in [
        "batch_report.json",
        "r_cdf.csv",
        "nf_pdf.csv",
        "card_low_pdf.csv",
        "card_high_pdf.csv",
        "percentiles.csv",
    ] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("batch_report.json")).unwrap()).unwrap();
    assert_eq!(json["n_links"], 20);
    assert_eq!(json["per_link"].as_array().unwrap().len(), 20);
    let pct = fs::read_to_string(dir.path().join("percentiles.csv")).unwrap();
    assert!(pct.starts_with("percent,power_loss_db\n10,"));
}
