use serde::Serialize;

use crate::list::{DecodeOutcome, DecodeStatus};

/// What happened to one frame at one decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameResult {
    Success,
    /// Decoder returned a message that differs from the transmitted one.
    Undetected,
    /// Stopped at the given 1-based CRC bit.
    EarlyTerminated(usize),
    /// Reached the end but no path was eligible for output.
    Detected,
}

impl FrameResult {
    pub fn classify(outcome: &DecodeOutcome, sent: &[u8]) -> Self {
        match outcome.status {
            DecodeStatus::Ok if outcome.message.as_deref() == Some(sent) => FrameResult::Success,
            DecodeStatus::Ok => FrameResult::Undetected,
            DecodeStatus::EarlyTerminated => {
                FrameResult::EarlyTerminated(outcome.et_crc_index.expect("stop index recorded"))
            }
            DecodeStatus::NoValidPath => FrameResult::Detected,
        }
    }

    pub fn is_error(self) -> bool {
        self != FrameResult::Success
    }
}

/// Error counts for one decoder at one SNR point.
///
/// `e_tot = e_e + e_w + e_d`, where `e_d` counts frames that reached the
/// end without any path eligible for output. [`epsilon`](Self::epsilon)
/// treats those like undetected errors; [`epsilon_merged`](Self::epsilon_merged)
/// counts them as early stops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnrPointStats {
    pub frames: u64,
    pub e_tot: u64,
    pub e_e: u64,
    pub e_w: u64,
    pub e_d: u64,
    /// `et_by_crc_index[i - 1]` counts stops at the `i`-th CRC bit.
    pub et_by_crc_index: Vec<u64>,
}

impl SnrPointStats {
    pub fn new(crc_len: usize) -> Self {
        Self {
            frames: 0,
            e_tot: 0,
            e_e: 0,
            e_w: 0,
            e_d: 0,
            et_by_crc_index: vec![0; crc_len],
        }
    }

    pub fn record(&mut self, result: FrameResult) {
        self.frames += 1;
        match result {
            FrameResult::Success => return,
            FrameResult::Undetected => self.e_w += 1,
            FrameResult::Detected => self.e_d += 1,
            FrameResult::EarlyTerminated(i) => {
                self.e_e += 1;
                self.et_by_crc_index[i - 1] += 1;
            }
        }
        self.e_tot += 1;
    }

    pub fn successes(&self) -> u64 {
        self.frames - self.e_tot
    }

    pub fn bler(&self) -> f64 {
        ratio(self.e_tot, self.frames)
    }

    /// Share of failed frames that were stopped early.
    pub fn epsilon(&self) -> f64 {
        ratio(self.e_e, self.e_tot)
    }

    /// Early-termination share with detected failures counted as stops.
    pub fn epsilon_merged(&self) -> f64 {
        ratio(self.e_e + self.e_d, self.e_tot)
    }

    /// `E_e(i) / E_tot` for `i = 1..=P`.
    pub fn epsilon_i(&self) -> Vec<f64> {
        self.et_by_crc_index
            .iter()
            .map(|&e| ratio(e, self.e_tot))
            .collect()
    }

    /// Binomial standard deviation of the BLER estimate.
    pub fn bler_std(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        let p = self.bler();
        (p * (1.0 - p) / self.frames as f64).sqrt()
    }

    /// Internal accounting holds.
    pub fn is_consistent(&self) -> bool {
        self.e_tot == self.e_e + self.e_w + self.e_d
            && self.et_by_crc_index.iter().sum::<u64>() == self.e_e
            && self.e_tot <= self.frames
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}
