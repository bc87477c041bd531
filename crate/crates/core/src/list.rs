//! Successive-cancellation list decoding with distributed-CRC handling.
//!
//! The decoder walks the SC tree once for all live paths. Every path owns
//! one LLR array and two partial-sum arrays (left/right child output) per
//! tree stage; arrays are reference counted and shared between a path and
//! its clones until one of them overwrites the stage. Each write replaces a
//! whole stage array, so a shared array never needs to be copied: the
//! writer just takes a fresh one.
//!
//! Paths are kept in a deterministic list order. When paths are extended
//! at an information bit the children of the `r`-th path are listed as
//! `(r, 0), (r, 1)`, and pruning keeps the `L` best children ordered by
//! `(metric, list position)`. Final selection also breaks ties by list
//! position.

use serde::{Deserialize, Serialize};

use crate::crc::CrcMatrix;
use crate::error::{Error, Result};
use crate::polar::{f_kernel, g_kernel, BitRole, CodeConfig};

/// How distributed CRC bits are used during list decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Plain SCL; CRC bits are treated as ordinary information bits.
    Plain,
    /// Check-and-keep: stop when no path passes a check, otherwise keep all.
    Ck,
    /// Check-and-remove: drop paths failing a check; stop when none is left.
    Cr,
    /// Check-and-select: CRC bits are dynamic frozen bits.
    Cs,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Ck => "ck",
            Variant::Cr => "cr",
            Variant::Cs => "cs",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "scl" => Ok(Variant::Plain),
            "ck" => Ok(Variant::Ck),
            "cr" => Ok(Variant::Cr),
            "cs" => Ok(Variant::Cs),
            other => Err(Error::Decoder(format!("unknown variant {other:?}"))),
        }
    }
}

/// Rule for picking the output among the final paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    LowestPm,
    /// Lowest metric among paths that passed every CRC check.
    LowestPmValidCrc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub list_size: usize,
    pub variant: Variant,
    pub selection: Selection,
}

impl DecoderConfig {
    /// Decoder with the variant's natural selection rule: CK picks among
    /// CRC-valid paths, the others take the lowest metric.
    pub fn new(variant: Variant, list_size: usize) -> Result<Self> {
        if list_size == 0 || !list_size.is_power_of_two() {
            return Err(Error::Decoder(format!(
                "list size {list_size} is not a power of two"
            )));
        }
        let selection = match variant {
            Variant::Ck => Selection::LowestPmValidCrc,
            _ => Selection::LowestPm,
        };
        Ok(Self {
            list_size,
            variant,
            selection,
        })
    }

    pub fn with_selection(mut self, selection: Selection) -> Self {
        self.selection = selection;
        self
    }

    pub fn validate(&self, cfg: &CodeConfig) -> Result<()> {
        if self.list_size == 0 || !self.list_size.is_power_of_two() {
            return Err(Error::Decoder(format!(
                "list size {} is not a power of two",
                self.list_size
            )));
        }
        let needs_crc =
            self.variant != Variant::Plain || self.selection == Selection::LowestPmValidCrc;
        if needs_crc && cfg.crc_matrix().is_none() {
            return Err(Error::Decoder(format!(
                "{} decoding needs a code with CRC bits",
                self.variant
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeStatus {
    Ok,
    EarlyTerminated,
    NoValidPath,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeOutcome {
    /// Decoded message (deinterleaved, CRC removed), absent on failure.
    pub message: Option<Vec<u8>>,
    pub status: DecodeStatus,
    /// 1-based decode-order index of the CRC bit that stopped decoding.
    pub et_crc_index: Option<usize>,
    /// Metric of the selected path, or the best metric when none was
    /// selected.
    pub final_pm: f64,
    pub survivor_count: usize,
}

/// One distributed CRC check as seen by the decoder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEvent {
    /// 1-based decode-order index of the CRC bit.
    pub order: usize,
    pub channel: usize,
    /// Live paths when the check ran.
    pub live_before: usize,
    /// Paths whose decided bit matched their running parity.
    pub valid: usize,
    pub live_after: usize,
    /// Every surviving path's decided CRC bit matches its parity.
    pub survivors_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinalPath {
    pub pm: f64,
    pub crc_ok: bool,
    /// Decided information bits in interleaved stream order.
    pub stream_bits: Vec<u8>,
}

/// Optional per-frame record for debugging and invariant checks.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DecodeTrace {
    pub checks: Vec<CheckEvent>,
    pub max_live: usize,
    /// Live list size after each leaf.
    pub live_per_leaf: Vec<usize>,
    /// `(parent metric, child metric)` for every path extension.
    pub pm_steps: Vec<(f64, f64)>,
    pub final_paths: Vec<FinalPath>,
}

/// Path-metric update: add `|alpha|` when the decision disagrees with the
/// sign of the LLR.
#[inline]
pub fn pm_update(pm: f64, alpha: f64, bit: u8) -> f64 {
    if (alpha < 0.0) != (bit & 1 == 1) {
        pm + alpha.abs()
    } else {
        pm
    }
}

/// Check-and-keep at a CRC bit: every path survives unless none is valid.
/// Returns the survivors' list positions, or `None` to stop decoding.
pub fn check_and_keep(valid: &[bool]) -> Option<Vec<usize>> {
    if valid.iter().any(|&v| v) {
        Some((0..valid.len()).collect())
    } else {
        None
    }
}

/// Check-and-remove at a CRC bit: only valid paths survive.
pub fn check_and_remove(valid: &[bool]) -> Option<Vec<usize>> {
    let kept: Vec<usize> = (0..valid.len()).filter(|&i| valid[i]).collect();
    if kept.is_empty() {
        None
    } else {
        Some(kept)
    }
}

/// Check-and-select at a CRC bit: the bit is forced to the parity expected
/// by the path; returns `(bit, new metric)`.
pub fn check_and_select(pm: f64, alpha: f64, expected: u8) -> (u8, f64) {
    (expected, pm_update(pm, alpha, expected))
}

/// Picks the output among `(metric, crc_ok)` pairs in list order.
pub fn select_path(paths: &[(f64, bool)], selection: Selection) -> Option<usize> {
    paths
        .iter()
        .enumerate()
        .filter(|(_, &(_, ok))| selection == Selection::LowestPm || ok)
        .min_by(|(ia, (pa, _)), (ib, (pb, _))| pa.total_cmp(pb).then(ia.cmp(ib)))
        .map(|(i, _)| i)
}

/// Reference counts and free list for one pool of stage arrays.
#[derive(Debug, Clone)]
struct Refs {
    count: Vec<u32>,
    free: Vec<usize>,
}

impl Refs {
    fn new(cap: usize) -> Self {
        Self {
            count: vec![0; cap],
            free: (0..cap).rev().collect(),
        }
    }

    fn reset(&mut self) {
        let cap = self.count.len();
        self.count.iter_mut().for_each(|c| *c = 0);
        self.free.clear();
        self.free.extend((0..cap).rev());
    }

    fn alloc(&mut self) -> usize {
        let i = self.free.pop().expect("stage pool exhausted");
        self.count[i] = 1;
        i
    }

    fn retain(&mut self, i: usize) {
        self.count[i] += 1;
    }

    fn release(&mut self, i: usize) {
        self.count[i] -= 1;
        if self.count[i] == 0 {
            self.free.push(i);
        }
    }

    /// Index this path may overwrite.
    fn unique(&mut self, i: usize) -> usize {
        if self.count[i] == 1 {
            i
        } else {
            self.count[i] -= 1;
            self.alloc()
        }
    }
}

#[derive(Debug, Clone)]
struct PathState {
    alpha: Vec<usize>,
    beta_l: Vec<usize>,
    beta_r: Vec<usize>,
    pm: f64,
    parity: u64,
    crc_ok: bool,
    bits: Vec<u8>,
}

/// Reusable SCL working memory bound to one code and decoder setting.
#[derive(Debug, Clone)]
pub struct ListDecoder<'a> {
    cfg: &'a CodeConfig,
    dec: DecoderConfig,
    stages: usize,
    alpha: Vec<Vec<f64>>,
    beta_l: Vec<Vec<u8>>,
    beta_r: Vec<Vec<u8>>,
    alpha_refs: Vec<Refs>,
    beta_l_refs: Vec<Refs>,
    beta_r_refs: Vec<Refs>,
    paths: Vec<PathState>,
    free_slots: Vec<usize>,
    active: Vec<usize>,
    // scratch
    leaf_llr: Vec<f64>,
    candidates: Vec<(f64, usize)>,
    kept: Vec<bool>,
    next_active: Vec<usize>,
    valid: Vec<bool>,
}

impl<'a> ListDecoder<'a> {
    pub fn new(cfg: &'a CodeConfig, dec: DecoderConfig) -> Result<Self> {
        dec.validate(cfg)?;
        let cap = dec.list_size;
        let stages = cfg.n().trailing_zeros() as usize;
        let k = cfg.k();
        let blank = PathState {
            alpha: vec![0; stages],
            beta_l: vec![0; stages],
            beta_r: vec![0; stages],
            pm: 0.0,
            parity: 0,
            crc_ok: true,
            bits: vec![0; k],
        };
        Ok(Self {
            cfg,
            dec,
            stages,
            alpha: (0..stages).map(|t| vec![0.0; cap << t]).collect(),
            beta_l: (0..stages).map(|t| vec![0; cap << t]).collect(),
            beta_r: (0..stages).map(|t| vec![0; cap << t]).collect(),
            alpha_refs: (0..stages).map(|_| Refs::new(cap)).collect(),
            beta_l_refs: (0..stages).map(|_| Refs::new(cap)).collect(),
            beta_r_refs: (0..stages).map(|_| Refs::new(cap)).collect(),
            paths: vec![blank; cap],
            free_slots: Vec::with_capacity(cap),
            active: Vec::with_capacity(cap),
            leaf_llr: vec![0.0; cap],
            candidates: Vec::with_capacity(2 * cap),
            kept: Vec::with_capacity(2 * cap),
            next_active: Vec::with_capacity(cap),
            valid: Vec::with_capacity(cap),
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.dec
    }

    pub fn decode(&mut self, llr: &[f64]) -> Result<DecodeOutcome> {
        self.run(llr, None)
    }

    pub fn decode_traced(&mut self, llr: &[f64], trace: &mut DecodeTrace) -> Result<DecodeOutcome> {
        *trace = DecodeTrace::default();
        self.run(llr, Some(trace))
    }

    fn reset(&mut self) {
        for refs in self
            .alpha_refs
            .iter_mut()
            .chain(self.beta_l_refs.iter_mut())
            .chain(self.beta_r_refs.iter_mut())
        {
            refs.reset();
        }
        self.free_slots.clear();
        self.free_slots.extend((1..self.dec.list_size).rev());
        self.active.clear();
        self.active.push(0);
        let root = &mut self.paths[0];
        for t in 0..self.stages {
            root.alpha[t] = self.alpha_refs[t].alloc();
            root.beta_l[t] = self.beta_l_refs[t].alloc();
            root.beta_r[t] = self.beta_r_refs[t].alloc();
        }
        root.pm = 0.0;
        root.parity = 0;
        root.crc_ok = true;
    }

    fn run(&mut self, llr: &[f64], mut trace: Option<&mut DecodeTrace>) -> Result<DecodeOutcome> {
        let n = self.cfg.n();
        if llr.len() != n {
            return Err(Error::Length {
                expected: n,
                actual: llr.len(),
            });
        }
        self.reset();
        let cfg = self.cfg;
        let matrix = cfg.crc_matrix();
        let variant = self.dec.variant;
        if let Some(t) = trace.as_deref_mut() {
            t.max_live = 1;
        }

        for leaf in 0..n {
            for r in 0..self.active.len() {
                let slot = self.active[r];
                self.leaf_llr[r] = self.compute_leaf_llr(slot, leaf, llr);
            }
            match cfg.role(leaf) {
                BitRole::Frozen => {
                    for r in 0..self.active.len() {
                        let slot = self.active[r];
                        let path = &mut self.paths[slot];
                        let pm = pm_update(path.pm, self.leaf_llr[r], 0);
                        if let Some(t) = trace.as_deref_mut() {
                            t.pm_steps.push((path.pm, pm));
                        }
                        path.pm = pm;
                        self.write_leaf(slot, leaf, 0);
                    }
                }
                BitRole::Crc { index, order } if variant == Variant::Cs => {
                    let matrix = matrix.expect("validated");
                    let stream_pos = cfg.channel_to_stream()[leaf].expect("information bit");
                    for r in 0..self.active.len() {
                        let slot = self.active[r];
                        let path = &mut self.paths[slot];
                        let expected = parity_bit(matrix, path.parity, index);
                        let (bit, pm) = check_and_select(path.pm, self.leaf_llr[r], expected);
                        if let Some(t) = trace.as_deref_mut() {
                            t.pm_steps.push((path.pm, pm));
                        }
                        path.pm = pm;
                        path.bits[stream_pos] = bit;
                        self.write_leaf(slot, leaf, bit);
                    }
                    if let Some(t) = trace.as_deref_mut() {
                        let live = self.active.len();
                        t.checks.push(CheckEvent {
                            order,
                            channel: leaf,
                            live_before: live,
                            valid: live,
                            live_after: live,
                            survivors_consistent: true,
                        });
                    }
                }
                role => {
                    let stream_pos = cfg.channel_to_stream()[leaf].expect("information bit");
                    self.extend_and_prune(stream_pos, trace.as_deref_mut());
                    if let Some(t) = trace.as_deref_mut() {
                        t.max_live = t.max_live.max(self.active.len());
                    }
                    match role {
                        BitRole::Message { index } => {
                            if let Some(matrix) = matrix {
                                let row = matrix.row_word(index);
                                for &slot in &self.active {
                                    let path = &mut self.paths[slot];
                                    if path.bits[stream_pos] == 1 {
                                        path.parity ^= row;
                                    }
                                }
                            }
                        }
                        BitRole::Crc { index, order } => {
                            let matrix = matrix.expect("CRC role implies a CRC");
                            if let Some(stop) = self.check_crc(
                                matrix,
                                leaf,
                                stream_pos,
                                index,
                                order,
                                trace.as_deref_mut(),
                            ) {
                                return Ok(stop);
                            }
                        }
                        BitRole::Frozen => unreachable!(),
                    }
                    for r in 0..self.active.len() {
                        let slot = self.active[r];
                        let bit = self.paths[slot].bits[stream_pos];
                        self.write_leaf(slot, leaf, bit);
                    }
                }
            }
            if let Some(t) = trace.as_deref_mut() {
                t.live_per_leaf.push(self.active.len());
            }
        }
        Ok(self.finish(trace))
    }

    /// Runs the CRC check for the live list; returns an outcome when
    /// decoding has to stop.
    fn check_crc(
        &mut self,
        matrix: &CrcMatrix,
        leaf: usize,
        stream_pos: usize,
        index: usize,
        order: usize,
        trace: Option<&mut DecodeTrace>,
    ) -> Option<DecodeOutcome> {
        self.valid.clear();
        for &slot in &self.active {
            let path = &self.paths[slot];
            self.valid
                .push(path.bits[stream_pos] == parity_bit(matrix, path.parity, index));
        }
        let live_before = self.active.len();
        let valid_count = self.valid.iter().filter(|&&v| v).count();
        for (r, &slot) in self.active.iter().enumerate() {
            self.paths[slot].crc_ok &= self.valid[r];
        }
        let survivors = match self.dec.variant {
            Variant::Ck => check_and_keep(&self.valid),
            Variant::Cr => check_and_remove(&self.valid),
            Variant::Plain | Variant::Cs => Some((0..live_before).collect()),
        };
        let Some(survivors) = survivors else {
            if let Some(t) = trace {
                t.checks.push(CheckEvent {
                    order,
                    channel: leaf,
                    live_before,
                    valid: 0,
                    live_after: 0,
                    survivors_consistent: true,
                });
            }
            let best = self
                .active
                .iter()
                .map(|&s| self.paths[s].pm)
                .fold(f64::INFINITY, f64::min);
            return Some(DecodeOutcome {
                message: None,
                status: DecodeStatus::EarlyTerminated,
                et_crc_index: Some(order),
                final_pm: best,
                survivor_count: 0,
            });
        };
        if survivors.len() < live_before {
            self.next_active.clear();
            let mut keep = survivors.iter().peekable();
            for r in 0..live_before {
                let slot = self.active[r];
                if keep.peek() == Some(&&r) {
                    keep.next();
                    self.next_active.push(slot);
                } else {
                    self.kill(slot);
                }
            }
            std::mem::swap(&mut self.active, &mut self.next_active);
        }
        if let Some(t) = trace {
            let consistent = self.active.iter().all(|&slot| {
                let p = &self.paths[slot];
                p.bits[stream_pos] == parity_bit(matrix, p.parity, index)
            });
            t.checks.push(CheckEvent {
                order,
                channel: leaf,
                live_before,
                valid: valid_count,
                live_after: self.active.len(),
                survivors_consistent: consistent,
            });
        }
        None
    }

    fn finish(&mut self, trace: Option<&mut DecodeTrace>) -> DecodeOutcome {
        let summary: Vec<(f64, bool)> = self
            .active
            .iter()
            .map(|&s| (self.paths[s].pm, self.paths[s].crc_ok))
            .collect();
        if let Some(t) = trace {
            t.final_paths = self
                .active
                .iter()
                .map(|&s| FinalPath {
                    pm: self.paths[s].pm,
                    crc_ok: self.paths[s].crc_ok,
                    stream_bits: self.paths[s].bits.clone(),
                })
                .collect();
        }
        let survivor_count = self.active.len();
        match select_path(&summary, self.dec.selection) {
            Some(r) => {
                let path = &self.paths[self.active[r]];
                let message = self
                    .cfg
                    .message_from_stream(&path.bits)
                    .expect("stream length matches interleaver");
                DecodeOutcome {
                    message: Some(message),
                    status: DecodeStatus::Ok,
                    et_crc_index: None,
                    final_pm: path.pm,
                    survivor_count,
                }
            }
            None => DecodeOutcome {
                message: None,
                status: DecodeStatus::NoValidPath,
                et_crc_index: None,
                final_pm: summary.iter().map(|s| s.0).fold(f64::INFINITY, f64::min),
                survivor_count,
            },
        }
    }

    /// Duplicates every live path on both bit values and keeps the best
    /// `min(2 * live, L)` children.
    fn extend_and_prune(&mut self, stream_pos: usize, mut trace: Option<&mut DecodeTrace>) {
        let live = self.active.len();
        self.candidates.clear();
        for r in 0..live {
            let pm = self.paths[self.active[r]].pm;
            let alpha = self.leaf_llr[r];
            self.candidates.push((pm_update(pm, alpha, 0), 2 * r));
            self.candidates.push((pm_update(pm, alpha, 1), 2 * r + 1));
        }
        let keep = (2 * live).min(self.dec.list_size);
        self.kept.clear();
        self.kept.resize(2 * live, false);
        if keep == 2 * live {
            self.kept.iter_mut().for_each(|k| *k = true);
        } else {
            self.candidates
                .sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(_, c) in &self.candidates[..keep] {
                self.kept[c] = true;
            }
            // restore candidate-index order for metric lookup
            self.candidates.sort_unstable_by_key(|c| c.1);
        }

        // release dropped paths first so clones find free slots
        for r in 0..live {
            if !self.kept[2 * r] && !self.kept[2 * r + 1] {
                self.kill(self.active[r]);
            }
        }
        self.next_active.clear();
        for r in 0..live {
            let slot = self.active[r];
            let parent_pm = self.paths[slot].pm;
            let (keep0, keep1) = (self.kept[2 * r], self.kept[2 * r + 1]);
            let child1 = match (keep0, keep1) {
                (false, false) => continue,
                (true, true) => Some(self.clone_path(slot)),
                (false, true) => Some(slot),
                (true, false) => None,
            };
            if keep0 {
                let path = &mut self.paths[slot];
                path.pm = self.candidates[2 * r].0;
                path.bits[stream_pos] = 0;
                self.next_active.push(slot);
                if let Some(t) = trace.as_deref_mut() {
                    t.pm_steps.push((parent_pm, path.pm));
                }
            }
            if let Some(s1) = child1 {
                let path = &mut self.paths[s1];
                path.pm = self.candidates[2 * r + 1].0;
                path.bits[stream_pos] = 1;
                self.next_active.push(s1);
                if let Some(t) = trace.as_deref_mut() {
                    t.pm_steps.push((parent_pm, path.pm));
                }
            }
        }
        std::mem::swap(&mut self.active, &mut self.next_active);
    }

    fn clone_path(&mut self, src: usize) -> usize {
        let dst = self.free_slots.pop().expect("path slots exhausted");
        for t in 0..self.stages {
            self.alpha_refs[t].retain(self.paths[src].alpha[t]);
            self.beta_l_refs[t].retain(self.paths[src].beta_l[t]);
            self.beta_r_refs[t].retain(self.paths[src].beta_r[t]);
        }
        let (a, b) = if src < dst {
            let (lo, hi) = self.paths.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.paths.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        b.alpha.copy_from_slice(&a.alpha);
        b.beta_l.copy_from_slice(&a.beta_l);
        b.beta_r.copy_from_slice(&a.beta_r);
        b.pm = a.pm;
        b.parity = a.parity;
        b.crc_ok = a.crc_ok;
        b.bits.copy_from_slice(&a.bits);
        dst
    }

    fn kill(&mut self, slot: usize) {
        for t in 0..self.stages {
            self.alpha_refs[t].release(self.paths[slot].alpha[t]);
            self.beta_l_refs[t].release(self.paths[slot].beta_l[t]);
            self.beta_r_refs[t].release(self.paths[slot].beta_r[t]);
        }
        self.free_slots.push(slot);
    }

    /// Brings the path's LLRs down to the leaf and returns the leaf LLR.
    fn compute_leaf_llr(&mut self, slot: usize, leaf: usize, channel: &[f64]) -> f64 {
        if self.stages == 0 {
            return channel[0];
        }
        // stages at and below `top` belong to nodes first visited at this leaf
        let top = if leaf == 0 {
            self.stages - 1
        } else {
            leaf.trailing_zeros() as usize
        };
        for t in (0..=top).rev() {
            let len = 1usize << t;
            let dst_idx = self.alpha_refs[t].unique(self.paths[slot].alpha[t]);
            self.paths[slot].alpha[t] = dst_idx;
            let path = &self.paths[slot];
            let (lower, upper) = self.alpha.split_at_mut(t + 1);
            let dst = &mut lower[t][dst_idx * len..(dst_idx + 1) * len];
            let src: &[f64] = if t + 1 == self.stages {
                channel
            } else {
                let s = path.alpha[t + 1];
                &upper[0][s * 2 * len..(s + 1) * 2 * len]
            };
            let (a, b) = src.split_at(len);
            if leaf != 0 && t == top {
                let bi = path.beta_l[t];
                let bl = &self.beta_l[t][bi * len..(bi + 1) * len];
                for j in 0..len {
                    dst[j] = g_kernel(a[j], b[j], bl[j]);
                }
            } else {
                for j in 0..len {
                    dst[j] = f_kernel(a[j], b[j]);
                }
            }
        }
        self.alpha[0][self.paths[slot].alpha[0]]
    }

    /// Stores the leaf decision and folds finished subtrees into their
    /// parents' partial sums.
    fn write_leaf(&mut self, slot: usize, leaf: usize, bit: u8) {
        if self.stages == 0 {
            return;
        }
        if leaf & 1 == 0 {
            let i = self.beta_l_refs[0].unique(self.paths[slot].beta_l[0]);
            self.paths[slot].beta_l[0] = i;
            self.beta_l[0][i] = bit;
            return;
        }
        let i = self.beta_r_refs[0].unique(self.paths[slot].beta_r[0]);
        self.paths[slot].beta_r[0] = i;
        self.beta_r[0][i] = bit;

        // node at stage t is a right child while bit t of the leaf is set
        let mut t = 0;
        while t + 1 < self.stages && (leaf >> t) & 1 == 1 {
            let len = 1usize << t;
            let parent_is_right = (leaf >> (t + 1)) & 1 == 1;
            let dst_idx = if parent_is_right {
                let i = self.beta_r_refs[t + 1].unique(self.paths[slot].beta_r[t + 1]);
                self.paths[slot].beta_r[t + 1] = i;
                i
            } else {
                let i = self.beta_l_refs[t + 1].unique(self.paths[slot].beta_l[t + 1]);
                self.paths[slot].beta_l[t + 1] = i;
                i
            };
            let path = &self.paths[slot];
            let (li, ri) = (path.beta_l[t], path.beta_r[t]);
            let (lo_l, hi_l) = self.beta_l.split_at_mut(t + 1);
            let (lo_r, hi_r) = self.beta_r.split_at_mut(t + 1);
            let left = &lo_l[t][li * len..(li + 1) * len];
            let right = &lo_r[t][ri * len..(ri + 1) * len];
            let dst = if parent_is_right {
                &mut hi_r[0][dst_idx * 2 * len..(dst_idx + 1) * 2 * len]
            } else {
                &mut hi_l[0][dst_idx * 2 * len..(dst_idx + 1) * 2 * len]
            };
            let (d_lo, d_hi) = dst.split_at_mut(len);
            for j in 0..len {
                d_lo[j] = left[j] ^ right[j];
            }
            d_hi.copy_from_slice(right);
            t += 1;
        }
    }
}

#[inline]
fn parity_bit(matrix: &CrcMatrix, parity: u64, index: usize) -> u8 {
    ((parity >> (matrix.degree() - 1 - index)) & 1) as u8
}

/// One-shot convenience wrapper around [`ListDecoder`].
pub fn scl_decode(cfg: &CodeConfig, dec: DecoderConfig, llr: &[f64]) -> Result<DecodeOutcome> {
    ListDecoder::new(cfg, dec)?.decode(llr)
}
