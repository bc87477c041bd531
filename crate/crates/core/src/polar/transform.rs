use crate::error::{Error, Result};

/// `x = u G_N` with `G_N` the n-fold Kronecker power of `[[1, 0], [1, 1]]`,
/// computed in place with `N log N` XORs.
pub fn polar_transform_in_place(bits: &mut [u8]) -> Result<()> {
    let n = bits.len();
    if !n.is_power_of_two() {
        return Err(Error::BlockLength(n));
    }
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l ^= h;
            }
        }
        half *= 2;
    }
    Ok(())
}

pub fn polar_transform(u: &[u8]) -> Result<Vec<u8>> {
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x)?;
    Ok(x)
}
