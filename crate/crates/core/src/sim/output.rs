use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{SweepResult, RNG_NAME};
use crate::error::{Error, Result};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const PER_CRC_FILE: &str = "et_by_crc_index.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

const ACCOUNTING: &str = "e_tot = e_e + e_w + e_d. e_d counts frames that reached the end of \
     decoding with no path eligible for output (check-and-keep only). epsilon = e_e / e_tot \
     treats them like undetected errors, i.e. e_tot = e_e + (e_w + e_d); \
     epsilon_with_e_d = (e_e + e_d) / e_tot counts them as early stops instead.";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    pub summary: PathBuf,
    pub per_crc: PathBuf,
    pub manifest: PathBuf,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    code: &'a str,
    variant: &'a str,
    #[serde(rename = "L")]
    list_size: usize,
    snr_db: f64,
    snr_kind: &'a str,
    frames: u64,
    e_tot: u64,
    e_e: u64,
    e_w: u64,
    e_d: u64,
    bler: f64,
    epsilon: f64,
    seed: u64,
    epsilon_with_e_d: f64,
}

#[derive(Serialize)]
struct PerCrcRow<'a> {
    variant: &'a str,
    #[serde(rename = "L")]
    list_size: usize,
    snr_db: f64,
    crc_index: usize,
    e_e_i: u64,
    epsilon_i: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    rng: &'static str,
    frame_stream: &'static str,
    accounting: &'static str,
    files: [&'static str; 2],
    config: &'a super::RunConfig,
    points: &'a [super::PointResult],
}

/// Writes the summary CSV, the per-CRC-index CSV and the JSON manifest
/// into `dir`, creating it if needed.
pub fn write_outputs(result: &SweepResult, dir: &Path) -> Result<OutputFiles> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let files = OutputFiles {
        summary: dir.join(SUMMARY_FILE),
        per_crc: dir.join(PER_CRC_FILE),
        manifest: dir.join(MANIFEST_FILE),
    };
    let cfg = &result.config;

    let mut summary = csv_writer(&files.summary)?;
    let mut per_crc = csv_writer(&files.per_crc)?;
    for point in &result.points {
        let s = &point.stats;
        let variant = point.decoder.variant.name();
        let list_size = point.decoder.list_size;
        summary
            .serialize(SummaryRow {
                code: &cfg.code.name,
                variant,
                list_size,
                snr_db: point.snr_db,
                snr_kind: cfg.snr_kind.name(),
                frames: s.frames,
                e_tot: s.e_tot,
                e_e: s.e_e,
                e_w: s.e_w,
                e_d: s.e_d,
                bler: s.bler(),
                epsilon: s.epsilon(),
                seed: cfg.seed,
                epsilon_with_e_d: s.epsilon_merged(),
            })
            .map_err(|e| csv_error(&files.summary, e))?;
        for (i, (&count, eps)) in s.et_by_crc_index.iter().zip(s.epsilon_i()).enumerate() {
            per_crc
                .serialize(PerCrcRow {
                    variant,
                    list_size,
                    snr_db: point.snr_db,
                    crc_index: i + 1,
                    e_e_i: count,
                    epsilon_i: eps,
                })
                .map_err(|e| csv_error(&files.per_crc, e))?;
        }
    }
    summary.flush().map_err(|e| io_error(&files.summary, e))?;
    per_crc.flush().map_err(|e| io_error(&files.per_crc, e))?;

    let manifest = Manifest {
        tool: "nrpolar",
        version: env!("CARGO_PKG_VERSION"),
        rng: RNG_NAME,
        frame_stream:
            "key = seed (LE u64) || SNR point index (LE u64) || zeros, stream = frame index",
        accounting: ACCOUNTING,
        files: [SUMMARY_FILE, PER_CRC_FILE],
        config: cfg,
        points: &result.points,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Config(format!("manifest: {e}")))?;
    fs::write(&files.manifest, json + "\n").map_err(|e| io_error(&files.manifest, e))?;
    Ok(files)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}
