//! Min-sum update rules of the SC decoding tree.

use crate::error::{Error, Result};

/// Check-node update: `sgn(a) sgn(b) min(|a|, |b|)`.
#[inline]
pub fn f_kernel(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Variable-node update: `b + (1 - 2 beta) a`.
#[inline]
pub fn g_kernel(a: f64, b: f64, beta_left: u8) -> f64 {
    if beta_left & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Joins the partial sums of two sibling nodes: `[l ^ r, r]`.
pub fn combine_psums(left: &[u8], right: &[u8]) -> Result<Vec<u8>> {
    if left.len() != right.len() {
        return Err(Error::Length {
            expected: left.len(),
            actual: right.len(),
        });
    }
    let mut out = Vec::with_capacity(2 * left.len());
    out.extend(left.iter().zip(right).map(|(l, r)| l ^ r));
    out.extend_from_slice(right);
    Ok(out)
}
