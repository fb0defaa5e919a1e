//! `xband` command-line front end.
//!
//! Exit status: 0 success, 2 usage or bad parameter, 3 I/O failure,
//! 4 malformed or invalid input file, 5 analysis failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xband_core::io::{
    load_dataset, parse_pattern_spec, to_json_string, write_batch_outputs, write_dataset, write_pattern_csv,
    write_psp_outputs, DatasetFile, LoadedDataset,
};
use xband_core::similarity::{analyze_pair, Method};
use xband_core::stats::{analyze_dataset, psp_dataset};
use xband_core::synth::{generate_dataset, generation_metadata, GenConfig};
use xband_core::{AngularGrid, Beampattern, Error, SimilarityConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_ANALYSIS: u8 = 5;

#[derive(Parser)]
#[command(name = "xband", version, about = "Cross-band beam direction similarity analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic multi-band dataset.
    Generate {
        /// JSON generator config; omitted fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n_links: usize,
        /// Output path; `.csv` selects the CSV layout.
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze one link and print its report as JSON.
    Analyze {
        #[command(flatten)]
        common: AnalysisArgs,
        #[arg(long)]
        link: String,
    },
    /// Analyze every link and write the report and distribution CSVs.
    Batch {
        #[command(flatten)]
        common: AnalysisArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-link PAS similarity under 3GPP patterns of equal beamwidth.
    Psp {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        hpbw_deg: f64,
        #[arg(long, default_value_t = 30.0)]
        amax_db: f64,
        #[arg(long, default_value_t = 1.0)]
        grid_step_deg: f64,
        /// Output directory; the report goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a beampattern as `offset_deg,gain_db` rows.
    Pattern {
        /// `gpp3:hpbw=10,amax=30`, `ula:n=8,spacing=0.5,floor=-60` or `file:<path>`.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        step_deg: f64,
    },
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    low_ghz: f64,
    #[arg(long)]
    high_ghz: f64,
}

#[derive(Args)]
struct AnalysisArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    pattern_low: String,
    #[arg(long)]
    pattern_high: String,
    #[arg(long, default_value = "m1")]
    method: Method,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    delta_th_db: f64,
    #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
    delta_p_db: f64,
    #[arg(long, default_value_t = 1.0)]
    grid_step_deg: f64,
    /// Also report the PAS similarity percentage.
    #[arg(long)]
    psp: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_) | Error::PatternSpec { .. } => EXIT_USAGE,
            Error::Io { .. } => EXIT_IO,
            Error::Csv { source, .. } if source.is_io_error() => EXIT_IO,
            Error::Json { source, .. } if source.is_io() => EXIT_IO,
            Error::Validation { .. } | Error::Json { .. } | Error::Csv { .. } => EXIT_INVALID,
            _ => EXIT_ANALYSIS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

struct Setup {
    loaded: LoadedDataset,
    pattern_low: Beampattern,
    pattern_high: Beampattern,
    grid: AngularGrid,
    config: SimilarityConfig,
}

impl AnalysisArgs {
    fn setup(&self) -> CliResult<Setup> {
        let config = SimilarityConfig {
            delta_th_db: self.delta_th_db,
            delta_p_db: self.delta_p_db,
            method: self.method,
            compute_psp: self.psp,
            ..Default::default()
        };
        config.validate()?;
        Ok(Setup {
            pattern_low: parse_pattern_spec(&self.pattern_low)?,
            pattern_high: parse_pattern_spec(&self.pattern_high)?,
            grid: AngularGrid::new(self.grid_step_deg)?,
            loaded: self.data.load()?,
            config,
        })
    }
}

impl DataArgs {
    fn load(&self) -> CliResult<LoadedDataset> {
        let loaded = load_dataset(&self.data, self.low_ghz, self.high_ghz)?;
        for s in &loaded.skipped {
            eprintln!("warning: skipping link {}: {}", s.link_id, s.reason);
        }
        Ok(loaded)
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|source| {
        Error::Io {
            path: path.to_owned(),
            source,
        }
        .into()
    })
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate { config, n_links, out } => {
            let cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    serde_json::from_str::<GenConfig>(&text).map_err(|source| Error::Json { path, source })?
                }
                None => GenConfig::default(),
            };
            let pairs = generate_dataset(&cfg, n_links)?;
            write_dataset(
                &out,
                &DatasetFile::from_pairs(&pairs, generation_metadata(&cfg, n_links)),
            )?;
        }
        Command::Analyze { common, link } => {
            let s = common.setup()?;
            let Some(pair) = s.loaded.pairs.iter().find(|p| p.link_id() == link) else {
                return Err(Failure {
                    code: EXIT_INVALID,
                    message: format!(
                        "link `{link}` not found with bands {} and {} GHz",
                        common.data.low_ghz, common.data.high_ghz
                    ),
                });
            };
            let report = analyze_pair(pair, &s.pattern_low, &s.pattern_high, &s.grid, &s.config)?;
            print!("{}", to_json_string(&report));
        }
        Command::Batch { common, out } => {
            let s = common.setup()?;
            let report = analyze_dataset(&s.loaded.pairs, &s.pattern_low, &s.pattern_high, &s.grid, &s.config)?;
            for f in &report.failures {
                eprintln!("warning: link {} failed: {}", f.link_id, f.error);
            }
            write_batch_outputs(&out, &report)?;
        }
        Command::Psp {
            data,
            hpbw_deg,
            amax_db,
            grid_step_deg,
            out,
        } => {
            let pattern = Beampattern::gpp3(hpbw_deg, amax_db)?;
            let grid = AngularGrid::new(grid_step_deg)?;
            let loaded = data.load()?;
            let report = psp_dataset(&loaded.pairs, &pattern, &pattern, &grid)?;
            match out {
                Some(dir) => write_psp_outputs(dir, &report)?,
                None => print!("{}", to_json_string(&report)),
            }
        }
        Command::Pattern { spec, out, step_deg } => {
            let pattern = parse_pattern_spec(&spec)?;
            let mut buf = Vec::new();
            write_pattern_csv(&mut buf, &pattern, step_deg)?;
            write_file(&out, &String::from_utf8(buf).expect("csv is utf-8"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
