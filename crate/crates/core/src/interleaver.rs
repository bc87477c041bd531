//! The 5G NR input-bit interleaver that distributes CRC bits among the
//! message bits.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest interleaver size supported by the mother sequence.
pub const K_IL_MAX: usize = 164;

const MOTHER_SEQUENCE_DATA: &str = include_str!("../data/pi_il_max.txt");

/// The length-164 mother sequence from which every interleaver is cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotherSequence {
    entries: Vec<usize>,
}

impl MotherSequence {
    /// Parses whitespace-separated integers, ignoring `#` comment lines.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Config(format!("interleaver entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != K_IL_MAX {
            return Err(Error::Length {
                expected: K_IL_MAX,
                actual: entries.len(),
            });
        }
        let mut seen = [false; K_IL_MAX];
        for &e in &entries {
            if e >= K_IL_MAX || std::mem::replace(&mut seen[e], true) {
                return Err(Error::Config(format!(
                    "interleaver entry {e} out of range or repeated"
                )));
            }
        }
        Ok(Self { entries })
    }

    /// The embedded standard table.
    pub fn standard() -> &'static MotherSequence {
        static SEQ: OnceLock<MotherSequence> = OnceLock::new();
        SEQ.get_or_init(|| {
            MotherSequence::parse(MOTHER_SEQUENCE_DATA).expect("embedded mother sequence is valid")
        })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// A CRC bit located in the interleaved stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrcPosition {
    /// Position in the interleaved stream `c'`.
    pub stream_pos: usize,
    /// CRC bit index `p` in `0..P`.
    pub crc_index: usize,
}

/// Interleaver of size `K` with `c'_j = c_{pi(j)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interleaver {
    k: usize,
    offset: usize,
    pi: Vec<usize>,
    pi_inv: Vec<usize>,
}

impl Interleaver {
    /// Cuts a size-`k` interleaver from the standard mother sequence;
    /// `crc_len` is only used to validate `k > crc_len` (`k = 0` is
    /// accepted for codes without CRC).
    pub fn build(k: usize, crc_len: usize) -> Result<Self> {
        Self::build_from(MotherSequence::standard(), k, crc_len)
    }

    pub fn build_from(mother: &MotherSequence, k: usize, crc_len: usize) -> Result<Self> {
        let degenerate = k == 0 && crc_len == 0;
        if k > K_IL_MAX || (k <= crc_len && !degenerate) {
            return Err(Error::InterleaverSize {
                k,
                min: crc_len + 1,
            });
        }
        let offset = K_IL_MAX - k;
        let pi: Vec<usize> = mother
            .entries()
            .iter()
            .filter(|&&e| e >= offset)
            .map(|&e| e - offset)
            .collect();
        let mut pi_inv = vec![0; k];
        for (j, &src) in pi.iter().enumerate() {
            pi_inv[src] = j;
        }
        Ok(Self {
            k,
            offset,
            pi,
            pi_inv,
        })
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// `h = 164 - K`.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn pi_inv(&self) -> &[usize] {
        &self.pi_inv
    }

    pub fn interleave<T: Copy>(&self, c: &[T]) -> Result<Vec<T>> {
        self.check_len(c.len())?;
        Ok(self.pi.iter().map(|&src| c[src]).collect())
    }

    pub fn deinterleave<T: Copy>(&self, interleaved: &[T]) -> Result<Vec<T>> {
        self.check_len(interleaved.len())?;
        Ok(self.pi_inv.iter().map(|&j| interleaved[j]).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.k {
            return Err(Error::Length {
                expected: self.k,
                actual: len,
            });
        }
        Ok(())
    }

    /// CRC bits of a message of length `message_len`, in stream order.
    pub fn crc_positions(&self, message_len: usize) -> Vec<CrcPosition> {
        self.pi
            .iter()
            .enumerate()
            .filter(|(_, &src)| src >= message_len)
            .map(|(j, &src)| CrcPosition {
                stream_pos: j,
                crc_index: src - message_len,
            })
            .collect()
    }

    /// Number of CRC bits followed by at least one message bit.
    pub fn distributed_count(&self, message_len: usize) -> usize {
        let Some(last_message) = self.pi.iter().rposition(|&src| src < message_len) else {
            return 0;
        };
        self.pi[..last_message]
            .iter()
            .filter(|&&src| src >= message_len)
            .count()
    }
}
