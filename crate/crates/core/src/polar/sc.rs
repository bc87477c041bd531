use super::kernels::{combine_psums, f_kernel, g_kernel};
use super::CodeConfig;
use crate::error::{Error, Result};

/// Successive-cancellation decoding of `u` from channel LLRs.
pub fn sc_decode(cfg: &CodeConfig, llr: &[f64]) -> Result<Vec<u8>> {
    sc_decode_with_psums(cfg, llr).map(|(u, _)| u)
}

/// As [`sc_decode`], also returning the partial sums at the root, which
/// equal the re-encoded codeword.
pub fn sc_decode_with_psums(cfg: &CodeConfig, llr: &[f64]) -> Result<(Vec<u8>, Vec<u8>)> {
    if llr.len() != cfg.n() {
        return Err(Error::Length {
            expected: cfg.n(),
            actual: llr.len(),
        });
    }
    let mut u = vec![0u8; cfg.n()];
    let root = descend(llr, 0, cfg.frozen_mask(), &mut u);
    Ok((u, root))
}

fn descend(alpha: &[f64], first_leaf: usize, frozen: &[bool], u: &mut [u8]) -> Vec<u8> {
    if alpha.len() == 1 {
        let bit = u8::from(!frozen[first_leaf] && alpha[0] < 0.0);
        u[first_leaf] = bit;
        return vec![bit];
    }
    let half = alpha.len() / 2;
    let (a, b) = alpha.split_at(half);
    let left_llr: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| f_kernel(x, y)).collect();
    let beta_l = descend(&left_llr, first_leaf, frozen, u);
    let right_llr: Vec<f64> = a
        .iter()
        .zip(b)
        .zip(&beta_l)
        .map(|((&x, &y), &bl)| g_kernel(x, y, bl))
        .collect();
    let beta_r = descend(&right_llr, first_leaf + half, frozen, u);
    combine_psums(&beta_l, &beta_r).expect("sibling lengths match")
}
