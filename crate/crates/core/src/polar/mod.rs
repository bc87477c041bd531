//! Polar code construction, encoding and SC decoding.

mod kernels;
mod reliability;
mod sc;
mod transform;

pub use kernels::{combine_psums, f_kernel, g_kernel};
pub use reliability::ReliabilitySequence;
pub use sc::{sc_decode, sc_decode_with_psums};
pub use transform::{polar_transform, polar_transform_in_place};

use serde::Serialize;

use crate::crc::{crc_encode, CrcMatrix, CrcSpec};
use crate::error::{Error, Result};
use crate::interleaver::{Interleaver, K_IL_MAX};

/// What a sub-channel carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BitRole {
    Frozen,
    /// Message bit `a[index]`.
    Message {
        index: usize,
    },
    /// CRC bit `index` (0-based), the `order`-th CRC bit met while
    /// decoding (1-based).
    Crc {
        index: usize,
        order: usize,
    },
}

/// Static description of one distributed-CRC-aided polar code.
#[derive(Debug, Clone)]
pub struct CodeConfig {
    n: usize,
    a: usize,
    crc: Option<(CrcSpec, CrcMatrix)>,
    info_set: Vec<usize>,
    frozen_set: Vec<usize>,
    frozen_mask: Vec<bool>,
    q_set: Vec<usize>,
    interleaver: Interleaver,
    channel_to_stream: Vec<Option<usize>>,
    roles: Vec<BitRole>,
    distributed: usize,
}

impl CodeConfig {
    /// Builds an `(N, A + P)` code: the `K = A + P` most reliable
    /// sub-channels carry the interleaved CRC-encoded message, the
    /// interleaved bit at stream position `j` going to the `j`-th smallest
    /// information index.
    pub fn new(
        n: usize,
        a: usize,
        crc: Option<CrcSpec>,
        reliability: &ReliabilitySequence,
    ) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::BlockLength(n));
        }
        let p = crc.as_ref().map_or(0, CrcSpec::degree);
        let k = a + p;
        if k > n {
            return Err(Error::RateAboveOne { k, n });
        }
        if k > K_IL_MAX {
            return Err(Error::InterleaverSize { k, min: p + 1 });
        }
        let crc = match crc {
            Some(spec) => {
                let matrix = CrcMatrix::build(&spec, a)?;
                Some((spec, matrix))
            }
            None => None,
        };
        let interleaver = Interleaver::build(k, p)?;
        let reliability = reliability.for_block_length(n)?;
        let info_set = reliability.most_reliable(k);

        let mut frozen_mask = vec![true; n];
        let mut channel_to_stream = vec![None; n];
        let mut roles = vec![BitRole::Frozen; n];
        for (j, &ch) in info_set.iter().enumerate() {
            frozen_mask[ch] = false;
            channel_to_stream[ch] = Some(j);
        }
        let frozen_set = (0..n).filter(|&i| frozen_mask[i]).collect();

        let crc_positions = interleaver.crc_positions(a);
        let mut q_set = Vec::with_capacity(p);
        for (order, pos) in crc_positions.iter().enumerate() {
            let ch = info_set[pos.stream_pos];
            q_set.push(ch);
            roles[ch] = BitRole::Crc {
                index: pos.crc_index,
                order: order + 1,
            };
        }
        for (j, &ch) in info_set.iter().enumerate() {
            let src = interleaver.pi()[j];
            if src < a {
                roles[ch] = BitRole::Message { index: src };
            }
        }
        let distributed = interleaver.distributed_count(a);

        Ok(Self {
            n,
            a,
            crc,
            info_set,
            frozen_set,
            frozen_mask,
            q_set,
            interleaver,
            channel_to_stream,
            roles,
            distributed,
        })
    }

    /// 5G NR code with the 24-bit DCI CRC and the standard sequence.
    pub fn nr(n: usize, a: usize) -> Result<Self> {
        Self::new(
            n,
            a,
            Some(CrcSpec::nr_crc24c()),
            ReliabilitySequence::nr_standard(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Information plus CRC bits.
    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    /// Message bits.
    pub fn a(&self) -> usize {
        self.a
    }

    /// CRC bits.
    pub fn p(&self) -> usize {
        self.crc.as_ref().map_or(0, |(s, _)| s.degree())
    }

    pub fn crc_spec(&self) -> Option<&CrcSpec> {
        self.crc.as_ref().map(|(s, _)| s)
    }

    pub fn crc_matrix(&self) -> Option<&CrcMatrix> {
        self.crc.as_ref().map(|(_, m)| m)
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen_set
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    /// Sub-channels carrying CRC bits, ascending.
    pub fn q_set(&self) -> &[usize] {
        &self.q_set
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    pub fn channel_to_stream(&self) -> &[Option<usize>] {
        &self.channel_to_stream
    }

    pub fn roles(&self) -> &[BitRole] {
        &self.roles
    }

    #[inline]
    pub fn role(&self, channel: usize) -> BitRole {
        self.roles[channel]
    }

    /// CRC bits followed by at least one message bit.
    pub fn distributed_count(&self) -> usize {
        self.distributed
    }

    /// `c = [a | a C]`, or `a` itself for a code without CRC.
    pub fn crc_encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.a {
            return Err(Error::Length {
                expected: self.a,
                actual: message.len(),
            });
        }
        match self.crc_matrix() {
            Some(m) => crc_encode(message, m),
            None => Ok(message.to_vec()),
        }
    }

    /// Places the interleaved CRC-encoded message on the information set.
    pub fn assemble_u(&self, message: &[u8]) -> Result<Vec<u8>> {
        let c = self.crc_encode(message)?;
        let stream = self.interleaver.interleave(&c)?;
        let mut u = vec![0u8; self.n];
        for (&ch, &bit) in self.info_set.iter().zip(&stream) {
            u[ch] = bit;
        }
        Ok(u)
    }

    /// Full encoder: message to codeword.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        let mut x = self.assemble_u(message)?;
        polar_transform_in_place(&mut x)?;
        Ok(x)
    }

    /// Reads the message back from interleaved stream bits.
    pub fn message_from_stream(&self, stream: &[u8]) -> Result<Vec<u8>> {
        let mut c = self.interleaver.deinterleave(stream)?;
        c.truncate(self.a);
        Ok(c)
    }

    /// Reads the message back from a full input vector `u`.
    pub fn message_from_u(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.n {
            return Err(Error::Length {
                expected: self.n,
                actual: u.len(),
            });
        }
        let stream: Vec<u8> = self.info_set.iter().map(|&ch| u[ch]).collect();
        self.message_from_stream(&stream)
    }

    /// Serializable snapshot for inspection.
    pub fn summary(&self) -> CodeSummary {
        CodeSummary {
            n: self.n,
            k: self.k(),
            a: self.a,
            p: self.p(),
            crc_exponents: self.crc_spec().map(CrcSpec::exponents),
            info_set: self.info_set.clone(),
            frozen_set: self.frozen_set.clone(),
            q_set: self.q_set.clone(),
            distributed_crc_bits: self.distributed,
            pi: self.interleaver.pi().to_vec(),
            pi_inv: self.interleaver.pi_inv().to_vec(),
            crc_positions: self
                .interleaver
                .crc_positions(self.a)
                .iter()
                .map(|c| (c.stream_pos, c.crc_index))
                .collect(),
        }
    }
}

/// JSON-friendly view of a [`CodeConfig`].
#[derive(Debug, Clone, Serialize)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub a: usize,
    pub p: usize,
    pub crc_exponents: Option<Vec<usize>>,
    pub info_set: Vec<usize>,
    pub frozen_set: Vec<usize>,
    pub q_set: Vec<usize>,
    pub distributed_crc_bits: usize,
    pub pi: Vec<usize>,
    pub pi_inv: Vec<usize>,
    /// `(stream position, CRC bit index)` pairs in stream order.
    pub crc_positions: Vec<(usize, usize)>,
}
