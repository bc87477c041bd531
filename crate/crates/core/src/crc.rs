//! CRC generator polynomials, the generator-matrix encoder and a per-path
//! parity tracker.
//!
//! Bit conventions: message bit `a[0]` is the highest-degree term of the
//! dividend, and CRC bit `p` (0-based) is the coefficient of `x^(P-1-p)` in
//! the remainder. Matrix rows are stored as `u64` words where CRC bit `p`
//! lives at bit position `P-1-p`, so degrees up to 64 are supported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of the 24-bit CRC polynomial used for 5G NR downlink control.
pub const NR_CRC24C_EXPONENTS: [usize; 13] = [24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0];

/// A CRC generator polynomial `g(x) = sum g_k x^k` of degree `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CrcSpecRepr", into = "CrcSpecRepr")]
pub struct CrcSpec {
    coeffs: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct CrcSpecRepr {
    exponents: Vec<usize>,
}

impl TryFrom<CrcSpecRepr> for CrcSpec {
    type Error = Error;

    fn try_from(repr: CrcSpecRepr) -> Result<Self> {
        CrcSpec::from_exponents(&repr.exponents)
    }
}

impl From<CrcSpec> for CrcSpecRepr {
    fn from(spec: CrcSpec) -> Self {
        CrcSpecRepr {
            exponents: spec.exponents(),
        }
    }
}

impl CrcSpec {
    /// Builds a polynomial from coefficients, `coeffs[k] = g_k`.
    pub fn from_coeffs(coeffs: Vec<u8>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Polynomial("degree must be at least 1".into()));
        }
        if coeffs.iter().any(|&c| c > 1) {
            return Err(Error::Polynomial("coefficients must be 0 or 1".into()));
        }
        if coeffs[0] != 1 || coeffs[coeffs.len() - 1] != 1 {
            return Err(Error::Polynomial(
                "leading and trailing coefficients must be 1".into(),
            ));
        }
        let degree = coeffs.len() - 1;
        if degree > 64 {
            return Err(Error::CrcDegree(degree));
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial from the exponents of its nonzero terms, e.g.
    /// `[3, 1, 0]` for `x^3 + x + 1`. Order does not matter.
    pub fn from_exponents(exponents: &[usize]) -> Result<Self> {
        let degree = *exponents
            .iter()
            .max()
            .ok_or_else(|| Error::Polynomial("empty exponent list".into()))?;
        if degree > 64 {
            return Err(Error::CrcDegree(degree));
        }
        let mut coeffs = vec![0u8; degree + 1];
        for &e in exponents {
            if coeffs[e] == 1 {
                return Err(Error::Polynomial(format!("exponent {e} repeated")));
            }
            coeffs[e] = 1;
        }
        Self::from_coeffs(coeffs)
    }

    /// The 24-bit 5G NR DCI polynomial.
    pub fn nr_crc24c() -> Self {
        Self::from_exponents(&NR_CRC24C_EXPONENTS).expect("constant polynomial is well formed")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Exponents of the nonzero terms, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .rev()
            .filter(|&k| self.coeffs[k] == 1)
            .collect()
    }

    /// `g(x) - x^P` packed with `g_k` at bit `k`.
    fn low_word(&self) -> u64 {
        (0..self.degree()).fold(0u64, |w, k| w | (u64::from(self.coeffs[k]) << k))
    }
}

fn degree_mask(p: usize) -> u64 {
    if p == 64 {
        u64::MAX
    } else {
        (1u64 << p) - 1
    }
}

/// The `A x P` CRC generator matrix: `c = [a | a C]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrcMatrix {
    degree: usize,
    rows: Vec<u64>,
}

impl CrcMatrix {
    /// Builds the matrix bottom-up: the last row holds `g_(P-1) .. g_0`,
    /// and each earlier row is the next one shifted by one column with
    /// the polynomial folded back in whenever a bit leaves column 1.
    pub fn build(spec: &CrcSpec, message_len: usize) -> Result<Self> {
        if message_len == 0 {
            return Err(Error::EmptyMessage);
        }
        let p = spec.degree();
        let mask = degree_mask(p);
        let low = spec.low_word();
        let msb = 1u64 << (p - 1);

        let mut rows = vec![0u64; message_len];
        rows[message_len - 1] = low;
        for k in (0..message_len - 1).rev() {
            let next = rows[k + 1];
            let carry = next & msb != 0;
            let mut row = (next << 1) & mask;
            if carry {
                row ^= low;
            }
            rows[k] = row;
        }
        Ok(Self { degree: p, rows })
    }

    pub fn message_len(&self) -> usize {
        self.rows.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Row `k` packed as a word (CRC bit `p` at position `P-1-p`).
    #[inline]
    pub fn row_word(&self, k: usize) -> u64 {
        self.rows[k]
    }

    /// Entry `C(k, p)` with 0-based row and CRC-bit index.
    pub fn entry(&self, k: usize, p: usize) -> u8 {
        ((self.rows[k] >> (self.degree - 1 - p)) & 1) as u8
    }

    /// Row `k` as a bit vector over CRC bits `0..P`.
    pub fn row_bits(&self, k: usize) -> Vec<u8> {
        (0..self.degree).map(|p| self.entry(k, p)).collect()
    }

    /// `a C` packed as a word.
    pub fn parity_word(&self, a: &[u8]) -> Result<u64> {
        if a.len() != self.rows.len() {
            return Err(Error::Length {
                expected: self.rows.len(),
                actual: a.len(),
            });
        }
        Ok(a.iter()
            .zip(&self.rows)
            .filter(|(&bit, _)| bit & 1 == 1)
            .fold(0u64, |acc, (_, &row)| acc ^ row))
    }

    /// Unpacks a parity word into `P` bits, CRC bit 0 first.
    pub fn unpack(&self, word: u64) -> Vec<u8> {
        (0..self.degree)
            .map(|p| ((word >> (self.degree - 1 - p)) & 1) as u8)
            .collect()
    }
}

/// Systematic CRC encoding `c = [a | a C]`.
pub fn crc_encode(a: &[u8], matrix: &CrcMatrix) -> Result<Vec<u8>> {
    let parity = matrix.parity_word(a)?;
    let mut c = Vec::with_capacity(a.len() + matrix.degree());
    c.extend_from_slice(a);
    c.extend(matrix.unpack(parity));
    Ok(c)
}

/// Remainder of `a(x) x^P` modulo `g(x)` by bitwise long division.
///
/// Works directly on the polynomial coefficients and never touches
/// [`CrcMatrix`], so it can serve as an independent check of it.
pub fn crc_oracle_remainder(a: &[u8], spec: &CrcSpec) -> Vec<u8> {
    let p = spec.degree();
    // divisor from highest to lowest degree: g_P .. g_0
    let divisor: Vec<u8> = spec.coeffs().iter().rev().copied().collect();
    let mut work: Vec<u8> = a.iter().map(|b| b & 1).collect();
    work.extend(std::iter::repeat_n(0, p));
    for i in 0..a.len() {
        if work[i] == 1 {
            for (w, d) in work[i..=i + p].iter_mut().zip(&divisor) {
                *w ^= d;
            }
        }
    }
    work[a.len()..].to_vec()
}

/// Running parity of the message bits decided so far.
///
/// Absorbing message bit `k` with value 1 XORs row `k` of the generator
/// matrix into the accumulator, so the order of absorption is irrelevant
/// and a distributed CRC bit can be checked as soon as all the message
/// bits it depends on are known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrcTracker {
    accumulator: u64,
    consumed: usize,
    seen: Vec<u64>,
}

impl CrcTracker {
    pub fn new(message_len: usize) -> Self {
        Self {
            accumulator: 0,
            consumed: 0,
            seen: vec![0; message_len.div_ceil(64)],
        }
    }

    pub fn absorb(&mut self, matrix: &CrcMatrix, index: usize, value: u8) -> Result<()> {
        let len = matrix.message_len();
        if index >= len || index / 64 >= self.seen.len() {
            return Err(Error::BitIndex { index, len });
        }
        let (word, bit) = (index / 64, 1u64 << (index % 64));
        if self.seen[word] & bit != 0 {
            return Err(Error::DuplicateBit(index));
        }
        self.seen[word] |= bit;
        self.consumed += 1;
        if value & 1 == 1 {
            self.accumulator ^= matrix.row_word(index);
        }
        Ok(())
    }

    /// Parity currently expected for CRC bit `p`.
    pub fn expected(&self, matrix: &CrcMatrix, p: usize) -> u8 {
        ((self.accumulator >> (matrix.degree() - 1 - p)) & 1) as u8
    }

    pub fn accumulator(&self) -> u64 {
        self.accumulator
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn parity_bits(&self, matrix: &CrcMatrix) -> Vec<u8> {
        matrix.unpack(self.accumulator)
    }
}
