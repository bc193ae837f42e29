//! Systematic encoder for the lifted base graph 2.
//!
//! The four core parity blocks (columns 10..13) follow from the
//! double-diagonal structure of rows 0..3; every extension row then adds one
//! parity block as the sum of its other connections.

use crate::error::{check_len, Error, Result};

use super::basegraph::{bg2_for, BaseMatrix, BG2_COLS, BG2_INFO_COLS};
use super::params::LdpcParams;

/// `dst[r] ^= src[(r + shift) % z]`, i.e. adds the circulant image of `src`.
#[inline]
pub(crate) fn xor_rotated(dst: &mut [u8], src: &[u8], shift: usize) {
    let z = dst.len();
    let s = shift % z;
    let (head, tail) = dst.split_at_mut(z - s);
    for (d, x) in head.iter_mut().zip(&src[s..]) {
        *d ^= x;
    }
    for (d, x) in tail.iter_mut().zip(&src[..s]) {
        *d ^= x;
    }
}

struct CoreShifts {
    /// Shift of column 10 in rows 0 and 3.
    outer: usize,
    /// Shift of column 10 in row 2.
    middle: usize,
}

fn core_shifts(m: &BaseMatrix, z: usize) -> Result<CoreShifts> {
    let get = |row, col| {
        m.shift(row, col)
            .ok_or_else(|| Error::BaseGraphData(format!("core entry ({row},{col}) missing")))
    };
    let outer = get(0, 10)? % z;
    let middle = get(2, 10)? % z;
    if get(3, 10)? % z != outer {
        return Err(Error::BaseGraphData("core rows 0 and 3 disagree on column 10".into()));
    }
    Ok(CoreShifts { outer, middle })
}

/// Encodes `msg` (k bits, fillers set to zero) into the full, unpunctured
/// codeword of `52 * z_c` bits.
pub fn ldpc_encode_full(msg: &[u8], params: &LdpcParams) -> Result<Vec<u8>> {
    check_len(params.k, msg.len())?;
    let z = params.z_c;
    let m = bg2_for(z)?;
    let core = core_shifts(m, z)?;

    let mut cw = vec![0u8; BG2_COLS * z];
    cw[..params.k].copy_from_slice(msg);

    // Row sums over the systematic columns for the four core rows.
    let mut lambda = vec![vec![0u8; z]; 4];
    for (i, acc) in lambda.iter_mut().enumerate() {
        for e in m.rows[i].iter().filter(|e| e.col < BG2_INFO_COLS) {
            xor_rotated(acc, &cw[e.col * z..(e.col + 1) * z], e.shift);
        }
    }

    // Summing the core rows cancels p1..p3 and leaves P^middle * p0.
    let mut sum = vec![0u8; z];
    for l in &lambda {
        for (s, x) in sum.iter_mut().zip(l) {
            *s ^= x;
        }
    }
    let p0_start = BG2_INFO_COLS * z;
    {
        let p0 = &mut cw[p0_start..p0_start + z];
        // p0[r] = sum[(r - middle) mod z]
        xor_rotated(p0, &sum, z - core.middle);
    }
    let p0: Vec<u8> = cw[p0_start..p0_start + z].to_vec();

    let mut p1 = lambda[0].clone();
    xor_rotated(&mut p1, &p0, core.outer);
    let mut p2 = lambda[1].clone();
    for (d, x) in p2.iter_mut().zip(&p1) {
        *d ^= x;
    }
    let mut p3 = lambda[3].clone();
    xor_rotated(&mut p3, &p0, core.outer);
    for (j, p) in [p1, p2, p3].iter().enumerate() {
        let start = (BG2_INFO_COLS + 1 + j) * z;
        cw[start..start + z].copy_from_slice(p);
    }

    // Extension rows: parity column 10 + i is the sum of the row's other blocks.
    let mut acc = vec![0u8; z];
    for (i, row) in m.rows.iter().enumerate().skip(4) {
        acc.fill(0);
        let parity_col = BG2_INFO_COLS + i;
        for e in row.iter().filter(|e| e.col != parity_col) {
            xor_rotated(&mut acc, &cw[e.col * z..(e.col + 1) * z], e.shift);
        }
        cw[parity_col * z..(parity_col + 1) * z].copy_from_slice(&acc);
    }
    Ok(cw)
}

/// Encodes `msg` and drops the first `2 * z_c` systematic bits, returning the
/// `n`-bit circular buffer contents.
pub fn ldpc_encode(msg: &[u8], params: &LdpcParams) -> Result<Vec<u8>> {
    let mut cw = ldpc_encode_full(msg, params)?;
    cw.drain(..params.punctured());
    Ok(cw)
}
