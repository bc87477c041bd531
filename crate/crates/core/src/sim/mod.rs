//! Seeded Monte-Carlo sweeps over the AWGN channel.
//!
//! Every frame is decoded by all configured decoders on the same LLRs.
//! Frame `f` at SNR point `s` draws its message and noise from a ChaCha8
//! stream keyed by `(seed, s)` with stream id `f`, so a frame's content
//! depends only on those three numbers. Frames are decoded in parallel
//! batches and folded back in frame order; a point stops at the first
//! frame where every decoder has seen `min_frame_errors` errors, or at
//! `max_frames`. The result does not depend on the number of workers.

mod config;
mod output;
mod stats;

pub use config::{
    parse_decoders, snr_range, CodeSpec, DecoderSpec, RateBasis, ReliabilitySource, RunConfig,
    DEFAULT_MAX_FRAMES, DEFAULT_MIN_FRAME_ERRORS,
};
pub use output::{write_outputs, OutputFiles, MANIFEST_FILE, PER_CRC_FILE, SUMMARY_FILE};
pub use stats::{FrameResult, SnrPointStats};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{llr, modulate, transmit, ChannelParams};
use crate::error::{Error, Result};
use crate::list::{ListDecoder, Variant};
use crate::polar::CodeConfig;

/// Name of the per-frame generator, recorded in run manifests.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.9)";

/// Frames handed to the worker pool per round, per worker.
const BATCH_PER_WORKER: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub decoder: DecoderSpec,
    pub snr_db: f64,
    pub stats: SnrPointStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: RunConfig,
    /// One entry per (SNR, decoder), SNR-major in configuration order.
    pub points: Vec<PointResult>,
}

impl SweepResult {
    pub fn point(&self, decoder: DecoderSpec, snr_db: f64) -> Option<&PointResult> {
        self.points
            .iter()
            .find(|p| p.decoder == decoder && p.snr_db == snr_db)
    }
}

/// Generator for frame `frame` at SNR point `snr_index`.
pub fn frame_rng(seed: u64, snr_index: usize, frame: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(snr_index as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(frame);
    rng
}

/// Draws a message, encodes it and passes it through the channel.
/// Returns `(message, channel LLRs)`.
pub fn generate_frame<R: Rng>(
    code: &CodeConfig,
    params: &ChannelParams,
    rng: &mut R,
) -> (Vec<u8>, Vec<f64>) {
    let message: Vec<u8> = (0..code.a()).map(|_| rng.random_range(0..2u8)).collect();
    let x = code.encode(&message).expect("message length matches code");
    let y = transmit(&modulate(&x), params, rng);
    (message, llr(&y, params))
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult> {
    run_sweep_with(cfg, |_| {})
}

/// Runs the sweep, calling `on_point` as each (SNR, decoder) point
/// completes.
pub fn run_sweep_with(
    cfg: &RunConfig,
    mut on_point: impl FnMut(&PointResult),
) -> Result<SweepResult> {
    let code = cfg.validate()?;
    let pool = match cfg.threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let mut points = Vec::with_capacity(cfg.snr_db.len() * cfg.decoders.len());
    for (s, &snr_db) in cfg.snr_db.iter().enumerate() {
        let params = ChannelParams::new(snr_db, cfg.snr_kind, cfg.rate(&code))?;
        let stats = match &pool {
            Some(pool) => pool.install(|| run_point(cfg, &code, &params, s)),
            None => run_point(cfg, &code, &params, s),
        }?;
        for (decoder, stats) in cfg.decoders.iter().zip(stats) {
            check_point(decoder, &stats)?;
            let point = PointResult {
                decoder: *decoder,
                snr_db,
                stats,
            };
            on_point(&point);
            points.push(point);
        }
    }
    Ok(SweepResult {
        config: cfg.clone(),
        points,
    })
}

fn run_point(
    cfg: &RunConfig,
    code: &CodeConfig,
    params: &ChannelParams,
    snr_index: usize,
) -> Result<Vec<SnrPointStats>> {
    let decoder_cfgs = cfg
        .decoders
        .iter()
        .map(DecoderSpec::decoder_config)
        .collect::<Result<Vec<_>>>()?;
    let mut stats = vec![SnrPointStats::new(code.p()); decoder_cfgs.len()];
    let batch = BATCH_PER_WORKER * rayon::current_num_threads() as u64;
    let mut next = 0;
    while next < cfg.max_frames {
        let end = (next + batch).min(cfg.max_frames);
        let results: Vec<Vec<FrameResult>> = (next..end)
            .into_par_iter()
            .map_init(
                || {
                    decoder_cfgs
                        .iter()
                        .map(|&d| ListDecoder::new(code, d).expect("validated"))
                        .collect::<Vec<_>>()
                },
                |decoders, frame| {
                    let mut rng = frame_rng(cfg.seed, snr_index, frame);
                    let (message, llr) = generate_frame(code, params, &mut rng);
                    decoders
                        .iter_mut()
                        .map(|d| {
                            let out = d.decode(&llr).expect("LLR length matches code");
                            FrameResult::classify(&out, &message)
                        })
                        .collect()
                },
            )
            .collect();
        for frame in results {
            for (s, r) in stats.iter_mut().zip(frame) {
                s.record(r);
            }
            if stats.iter().all(|s| s.e_tot >= cfg.min_frame_errors) {
                return Ok(stats);
            }
        }
        next = end;
    }
    Ok(stats)
}

fn check_point(decoder: &DecoderSpec, stats: &SnrPointStats) -> Result<()> {
    if !stats.is_consistent() {
        return Err(Error::Invariant(format!(
            "{decoder}: inconsistent error accounting {stats:?}"
        )));
    }
    if decoder.variant == Variant::Cs && stats.e_e > 0 {
        return Err(Error::Invariant(format!(
            "{decoder}: check-and-select terminated early {} times",
            stats.e_e
        )));
    }
    Ok(())
}
