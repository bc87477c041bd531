//! Distributed-CRC-aided polar codes as used for 5G NR downlink control
//! and broadcast channels.
//!
//! The encoder chain is CRC encoding, input-bit interleaving, sub-channel
//! allocation and the polar transform. Decoding is available as plain
//! successive cancellation ([`sc_decode`]) and as list decoding
//! ([`ListDecoder`]) in four flavours: plain SCL and the check-and-keep,
//! check-and-remove and check-and-select variants that exploit the
//! distributed CRC bits. The [`sim`] module runs seeded Monte-Carlo sweeps
//! over an AWGN channel.

pub mod channel;
pub mod crc;
pub mod error;
pub mod interleaver;
pub mod list;
pub mod polar;
pub mod selftest;
pub mod sim;

pub use channel::{llr, modulate, transmit, ChannelParams, SnrKind};
pub use crc::{crc_encode, crc_oracle_remainder, CrcMatrix, CrcSpec, CrcTracker};
pub use error::{Error, Result};
pub use interleaver::{CrcPosition, Interleaver, MotherSequence};
pub use list::{
    pm_update, scl_decode, DecodeOutcome, DecodeStatus, DecodeTrace, DecoderConfig, ListDecoder,
    Selection, Variant,
};
pub use polar::{
    polar_transform, sc_decode, BitRole, CodeConfig, CodeSummary, ReliabilitySequence,
};
