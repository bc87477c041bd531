//! BPSK over AWGN with seedable noise.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which signal-to-noise ratio the dB figure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SnrKind {
    #[default]
    #[serde(rename = "EsN0", alias = "esn0")]
    EsN0,
    #[serde(rename = "EbN0", alias = "ebn0")]
    EbN0,
}

impl SnrKind {
    pub fn name(self) -> &'static str {
        match self {
            SnrKind::EsN0 => "EsN0",
            SnrKind::EbN0 => "EbN0",
        }
    }
}

impl std::str::FromStr for SnrKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "esn0" | "es" => Ok(SnrKind::EsN0),
            "ebn0" | "eb" => Ok(SnrKind::EbN0),
            other => Err(Error::Config(format!("unknown SNR kind {other:?}"))),
        }
    }
}

/// Noise level of one channel use. Symbols have unit energy and `sigma2`
/// is the noise variance per real dimension, `N0 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    pub snr_db: f64,
    pub kind: SnrKind,
    /// Code rate used to turn Eb/N0 into Es/N0; ignored for Es/N0.
    pub rate: f64,
    sigma2: f64,
}

impl ChannelParams {
    pub fn new(snr_db: f64, kind: SnrKind, rate: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::Config(format!("SNR {snr_db} is not finite")));
        }
        let es_n0 = match kind {
            SnrKind::EsN0 => 10f64.powf(snr_db / 10.0),
            SnrKind::EbN0 => {
                if !(rate > 0.0 && rate <= 1.0) {
                    return Err(Error::Config(format!("code rate {rate} outside (0, 1]")));
                }
                rate * 10f64.powf(snr_db / 10.0)
            }
        };
        let sigma2 = 1.0 / (2.0 * es_n0);
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Config(format!(
                "SNR {snr_db} dB gives noise variance {sigma2}"
            )));
        }
        Ok(Self {
            snr_db,
            kind,
            rate,
            sigma2,
        })
    }

    pub fn es_n0(snr_db: f64) -> Result<Self> {
        Self::new(snr_db, SnrKind::EsN0, 1.0)
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// BPSK mapping `0 -> +1`, `1 -> -1`.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Adds i.i.d. Gaussian noise of variance `sigma2` to every symbol.
pub fn transmit<R: Rng + ?Sized>(symbols: &[f64], params: &ChannelParams, rng: &mut R) -> Vec<f64> {
    let sigma = params.sigma2.sqrt();
    symbols
        .iter()
        .map(|&s| {
            let n: f64 = StandardNormal.sample(rng);
            s + sigma * n
        })
        .collect()
}

/// Channel LLRs `2 y / sigma2`; positive favours bit 0.
pub fn llr(received: &[f64], params: &ChannelParams) -> Vec<f64> {
    let scale = 2.0 / params.sigma2;
    received.iter().map(|&y| scale * y).collect()
}
