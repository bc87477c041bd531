use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::SnrKind;
use crate::crc::CrcSpec;
use crate::error::{Error, Result};
use crate::list::{DecoderConfig, Selection, Variant};
use crate::polar::{CodeConfig, ReliabilitySequence};

/// Where the sub-channel ordering comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReliabilitySource {
    /// The 5G NR sequence.
    Nr,
    /// Bhattacharyya-parameter construction at a design SNR.
    Bhattacharyya { design_snr_db: f64 },
    /// Text file, see [`ReliabilitySequence::parse`].
    File { path: PathBuf },
}

/// Code rate used to convert Eb/N0 into Es/N0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateBasis {
    /// `A / N`, message bits only.
    MessageOverN,
    /// `K / N`, CRC bits included.
    InfoOverN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    /// Label written into every output row.
    pub name: String,
    pub n: usize,
    pub a: usize,
    /// CRC polynomial; `None` gives an uncoded-CRC code.
    #[serde(default = "default_crc")]
    pub crc: Option<CrcSpec>,
    #[serde(default = "default_reliability")]
    pub reliability: ReliabilitySource,
}

fn default_crc() -> Option<CrcSpec> {
    Some(CrcSpec::nr_crc24c())
}

fn default_reliability() -> ReliabilitySource {
    ReliabilitySource::Nr
}

impl CodeSpec {
    pub fn nr(name: &str, n: usize, a: usize) -> Self {
        Self {
            name: name.into(),
            n,
            a,
            crc: default_crc(),
            reliability: ReliabilitySource::Nr,
        }
    }

    /// Built-in codes: `pbch` (512, 32+24), `pdcch_a` (512, 140+24) and
    /// `pdcch_b` (256, 128+24).
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "pbch" => Ok(Self::nr("pbch", 512, 32)),
            "pdcch_a" => Ok(Self::nr("pdcch_a", 512, 140)),
            "pdcch_b" => Ok(Self::nr("pdcch_b", 256, 128)),
            other => Err(Error::Config(format!(
                "unknown preset {other:?} (expected pbch, pdcch_a or pdcch_b)"
            ))),
        }
    }

    pub const PRESETS: [&'static str; 3] = ["pbch", "pdcch_a", "pdcch_b"];

    pub fn build(&self) -> Result<CodeConfig> {
        let owned;
        let seq = match &self.reliability {
            ReliabilitySource::Nr => ReliabilitySequence::nr_standard(),
            ReliabilitySource::Bhattacharyya { design_snr_db } => {
                owned = ReliabilitySequence::bhattacharyya(self.n, *design_snr_db)?;
                &owned
            }
            ReliabilitySource::File { path } => {
                owned = ReliabilitySequence::parse(&read_text(path)?)?;
                &owned
            }
        };
        CodeConfig::new(self.n, self.a, self.crc.clone(), seq)
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// One decoder in a sweep, written `variant:L` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderSpec {
    pub variant: Variant,
    pub list_size: usize,
    /// Overrides the variant's default selection rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<Selection>,
}

impl DecoderSpec {
    pub fn new(variant: Variant, list_size: usize) -> Self {
        Self {
            variant,
            list_size,
            selection: None,
        }
    }

    pub fn decoder_config(&self) -> Result<DecoderConfig> {
        let cfg = DecoderConfig::new(self.variant, self.list_size)?;
        Ok(match self.selection {
            Some(s) => cfg.with_selection(s),
            None => cfg,
        })
    }
}

impl fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.variant, self.list_size)
    }
}

impl FromStr for DecoderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (v, l) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("decoder {s:?} is not of the form variant:L")))?;
        let list_size = l
            .trim()
            .parse()
            .map_err(|e| Error::Config(format!("list size in {s:?}: {e}")))?;
        Ok(Self::new(v.trim().parse()?, list_size))
    }
}

/// Parses a comma-separated decoder list such as `ck:8,cr:8,cs:8`.
pub fn parse_decoders(s: &str) -> Result<Vec<DecoderSpec>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Inclusive SNR range; `stop` is reached when it lies on the step grid.
pub fn snr_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::Config(format!(
            "bad SNR range {start}:{stop}:{step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    // round to keep printed values free of accumulation noise
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub code: CodeSpec,
    pub decoders: Vec<DecoderSpec>,
    pub snr_db: Vec<f64>,
    #[serde(default = "default_snr_kind")]
    pub snr_kind: SnrKind,
    #[serde(default = "default_rate_basis")]
    pub rate_basis: RateBasis,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; `None` uses rayon's default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_snr_kind() -> SnrKind {
    SnrKind::EsN0
}

fn default_rate_basis() -> RateBasis {
    RateBasis::MessageOverN
}

pub const DEFAULT_MAX_FRAMES: u64 = 1_000_000;
pub const DEFAULT_MIN_FRAME_ERRORS: u64 = 100;

fn default_max_frames() -> u64 {
    DEFAULT_MAX_FRAMES
}

fn default_min_frame_errors() -> u64 {
    DEFAULT_MIN_FRAME_ERRORS
}

impl RunConfig {
    pub fn new(code: CodeSpec, decoders: Vec<DecoderSpec>, snr_db: Vec<f64>) -> Self {
        Self {
            code,
            decoders,
            snr_db,
            snr_kind: default_snr_kind(),
            rate_basis: default_rate_basis(),
            max_frames: DEFAULT_MAX_FRAMES,
            min_frame_errors: DEFAULT_MIN_FRAME_ERRORS,
            seed: 0,
            threads: None,
            out_dir: None,
        }
    }

    /// Loads a TOML or JSON file, chosen by extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks everything that can be checked without simulating and
    /// returns the built code.
    pub fn validate(&self) -> Result<CodeConfig> {
        if self.min_frame_errors == 0 {
            return Err(Error::Config("min_frame_errors must be at least 1".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be at least 1".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::Config("no decoders configured".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("empty SNR grid".into()));
        }
        if let Some(bad) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR {bad} is not finite")));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        let code = self.code.build()?;
        for d in &self.decoders {
            d.decoder_config()?.validate(&code)?;
        }
        Ok(code)
    }

    /// Rate used for Eb/N0 conversion.
    pub fn rate(&self, code: &CodeConfig) -> f64 {
        let num = match self.rate_basis {
            RateBasis::MessageOverN => code.a(),
            RateBasis::InfoOverN => code.k(),
        };
        num as f64 / code.n() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        let pbch = CodeSpec::preset("pbch").unwrap().build().unwrap();
        assert_eq!((pbch.n(), pbch.k()), (512, 56));
        let a = CodeSpec::preset("pdcch_a").unwrap().build().unwrap();
        assert_eq!((a.n(), a.k(), a.distributed_count()), (512, 164, 7));
        let b = CodeSpec::preset("pdcch_b").unwrap().build().unwrap();
        assert_eq!((b.n(), b.k(), b.distributed_count()), (256, 152, 7));
        assert!(CodeSpec::preset("pusch").is_err());
    }

    #[test]
    fn decoder_lists() {
        let d = parse_decoders("ck:8, cr:8,CS:32").unwrap();
        assert_eq!(d[0], DecoderSpec::new(Variant::Ck, 8));
        assert_eq!(d[2], DecoderSpec::new(Variant::Cs, 32));
        assert_eq!(d[1].to_string(), "cr:8");
        assert!(parse_decoders("ck8").is_err());
        assert!(parse_decoders("ck:x").is_err());
        assert!(parse_decoders("zz:4").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(snr_range(-1.0, 0.0, 0.5).unwrap(), vec![-1.0, -0.5, 0.0]);
        assert_eq!(snr_range(0.0, 0.3, 0.1).unwrap().len(), 4);
        assert_eq!(snr_range(1.0, 1.0, 0.25).unwrap(), vec![1.0]);
        assert!(snr_range(1.0, 0.0, 0.5).is_err());
        assert!(snr_range(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn validation_rejects_before_simulating() {
        let mut cfg = RunConfig::new(
            CodeSpec::preset("pbch").unwrap(),
            vec![DecoderSpec::new(Variant::Ck, 8)],
            vec![0.0],
        );
        assert!(cfg.validate().is_ok());
        cfg.min_frame_errors = 0;
        assert!(cfg.validate().is_err());
        cfg.min_frame_errors = 1;
        cfg.code.a = 160;
        assert!(cfg.validate().is_err());
        cfg.code.a = 32;
        cfg.decoders[0].list_size = 3;
        assert!(cfg.validate().is_err());
        cfg.decoders[0].list_size = 4;
        cfg.code.crc = None;
        assert!(cfg.validate().is_err());
        cfg.decoders[0].variant = Variant::Plain;
        assert!(cfg.validate().is_ok());
        cfg.snr_db = vec![f64::NAN];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn toml_round_trip_and_defaults() {
        let text = r#"
            decoders = [{ variant = "ck", list_size = 8 }, { variant = "cr", list_size = 8 }]
            snr_db = [-8.0, -7.5]
            seed = 7

            [code]
            name = "pbch"
            n = 512
            a = 32
        "#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert_eq!(cfg.code, CodeSpec::preset("pbch").unwrap());
        assert_eq!(cfg.snr_kind, SnrKind::EsN0);
        assert_eq!(cfg.max_frames, DEFAULT_MAX_FRAMES);
        assert_eq!(cfg.min_frame_errors, DEFAULT_MIN_FRAME_ERRORS);
        let back = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&json).unwrap(), cfg);
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn eb_n0_rate_basis() {
        let mut cfg = RunConfig::new(CodeSpec::preset("pbch").unwrap(), vec![], vec![]);
        let code = cfg.code.build().unwrap();
        assert_eq!(cfg.rate(&code), 32.0 / 512.0);
        cfg.rate_basis = RateBasis::InfoOverN;
        assert_eq!(cfg.rate(&code), 56.0 / 512.0);
    }
}
