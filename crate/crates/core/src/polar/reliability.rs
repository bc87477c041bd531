//! Sub-channel reliability orderings.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const NR_SEQUENCE_DATA: &str = include_str!("../../data/nr_reliability_1024.txt");

/// Sub-channel indices `0..N` sorted from least to most reliable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilitySequence {
    ascending: Vec<usize>,
}

impl ReliabilitySequence {
    /// Wraps an ordering given least-reliable first.
    pub fn from_ascending(ascending: Vec<usize>) -> Result<Self> {
        let n = ascending.len();
        if !n.is_power_of_two() {
            return Err(Error::Reliability(format!(
                "length {n} is not a power of two"
            )));
        }
        let mut seen = vec![false; n];
        for &i in &ascending {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Reliability(format!(
                    "index {i} out of range or repeated"
                )));
            }
        }
        Ok(Self { ascending })
    }

    /// Parses a text file of integers. A header line `# order: ascending`
    /// (most reliable last) or `# order: descending` (most reliable first)
    /// is required; other `#` lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut descending = None;
        let mut values = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(order) = comment.trim().strip_prefix("order:") {
                    descending = match order.trim() {
                        "ascending" => Some(false),
                        "descending" => Some(true),
                        other => {
                            return Err(Error::Reliability(format!("unknown order {other:?}")))
                        }
                    };
                }
                continue;
            }
            for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                values.push(
                    tok.parse::<usize>()
                        .map_err(|e| Error::Reliability(format!("{tok:?}: {e}")))?,
                );
            }
        }
        let descending =
            descending.ok_or_else(|| Error::Reliability("missing '# order:' header".into()))?;
        if descending {
            values.reverse();
        }
        Self::from_ascending(values)
    }

    /// The 5G NR sequence for `N_max = 1024`.
    pub fn nr_standard() -> &'static ReliabilitySequence {
        static SEQ: OnceLock<ReliabilitySequence> = OnceLock::new();
        SEQ.get_or_init(|| {
            ReliabilitySequence::parse(NR_SEQUENCE_DATA).expect("embedded sequence is valid")
        })
    }

    /// Bhattacharyya-parameter construction for a BPSK/AWGN design point
    /// given as Es/N0 in dB.
    pub fn bhattacharyya(n: usize, design_snr_db: f64) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::BlockLength(n));
        }
        // work with ln Z to survive high design SNR
        let mut ln_z = vec![-(10f64.powf(design_snr_db / 10.0))];
        while ln_z.len() < n {
            let worse = ln_z.iter().map(|&l| {
                // ln(2z - z^2) = ln z + ln(2 - z)
                l + (2.0 - l.exp()).ln()
            });
            let better = ln_z.iter().map(|&l| 2.0 * l);
            ln_z = worse.chain(better).collect();
        }
        let mut order: Vec<usize> = (0..n).collect();
        // larger Z is less reliable; ties keep the lower index less reliable
        order.sort_by(|&a, &b| ln_z[b].total_cmp(&ln_z[a]).then(a.cmp(&b)));
        Self::from_ascending(order)
    }

    pub fn len(&self) -> usize {
        self.ascending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ascending.is_empty()
    }

    pub fn ascending(&self) -> &[usize] {
        &self.ascending
    }

    /// Nested sub-sequence for a shorter block length.
    pub fn for_block_length(&self, n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::BlockLength(n));
        }
        if n > self.len() {
            return Err(Error::Reliability(format!(
                "sequence of length {} cannot serve N = {n}",
                self.len()
            )));
        }
        Ok(Self {
            ascending: self.ascending.iter().copied().filter(|&i| i < n).collect(),
        })
    }

    /// The `k` most reliable indices, sorted ascending by index.
    pub fn most_reliable(&self, k: usize) -> Vec<usize> {
        let mut set = self.ascending[self.len() - k..].to_vec();
        set.sort_unstable();
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_sequence_is_permutation() {
        let seq = ReliabilitySequence::nr_standard();
        assert_eq!(seq.len(), 1024);
        assert_eq!(&seq.ascending()[..8], &[0, 1, 2, 4, 8, 16, 32, 3]);
        assert_eq!(seq.ascending()[1023], 1023);
    }

    #[test]
    fn nested_for_eight() {
        let seq = ReliabilitySequence::nr_standard()
            .for_block_length(8)
            .unwrap();
        assert_eq!(seq.ascending(), &[0, 1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(seq.most_reliable(4), vec![3, 5, 6, 7]);
    }

    #[test]
    fn parse_orders() {
        let asc = ReliabilitySequence::parse("# order: ascending\n0 1 2 3").unwrap();
        let desc = ReliabilitySequence::parse("# order: descending\n3, 2, 1, 0").unwrap();
        assert_eq!(asc, desc);
        assert!(ReliabilitySequence::parse("0 1 2 3").is_err());
        assert!(ReliabilitySequence::parse("# order: sideways\n0 1").is_err());
        assert!(ReliabilitySequence::parse("# order: ascending\n0 1 2").is_err());
        assert!(ReliabilitySequence::parse("# order: ascending\n0 1 1 3").is_err());
    }

    #[test]
    fn bhattacharyya_small() {
        let seq = ReliabilitySequence::bhattacharyya(8, 0.0).unwrap();
        assert_eq!(seq.ascending()[0], 0);
        assert_eq!(seq.ascending()[7], 7);
        assert_eq!(seq.most_reliable(4), vec![3, 5, 6, 7]);
        assert!(ReliabilitySequence::bhattacharyya(12, 0.0).is_err());
    }

    #[test]
    fn bhattacharyya_high_design_snr_is_finite() {
        let seq = ReliabilitySequence::bhattacharyya(1024, 20.0).unwrap();
        assert_eq!(seq.len(), 1024);
        assert_eq!(seq.ascending()[1023], 1023);
    }
}
