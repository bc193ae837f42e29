//! Circular-buffer rate matching (redundancy version 0) and its soft inverse.

use crate::error::{Error, Result};

use super::params::LdpcParams;

/// Pinned LLR for filler bits, known to be zero.
pub const FILLER_LLR: f32 = 1.0e3;

/// Soft values for the `n` circular-buffer positions. Positive means bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CodewordLlr {
    pub llr: Vec<f32>,
}

/// Buffer positions read by rate matching, starting at 0 and wrapping,
/// with filler positions skipped.
pub fn buffer_positions(params: &LdpcParams) -> impl Iterator<Item = usize> {
    let fillers = params.buffer_filler_range();
    (0..params.n).filter(move |j| !fillers.contains(j)).cycle()
}

/// Selects `e` bits from the circular buffer `codeword`.
pub fn rate_match(codeword: &[u8], e: usize, params: &LdpcParams) -> Result<Vec<u8>> {
    if e == 0 {
        return Err(Error::InvalidArgument("rate matching output length must be positive".into()));
    }
    crate::error::check_len(params.n, codeword.len())?;
    Ok(buffer_positions(params).take(e).map(|j| codeword[j]).collect())
}

/// Accumulates received LLRs back onto their circular-buffer positions.
///
/// Repeated positions are soft-combined by summation; fillers are pinned to
/// [`FILLER_LLR`]; positions never transmitted stay at zero.
pub fn de_rate_match(llrs: &[f32], params: &LdpcParams) -> Result<CodewordLlr> {
    if llrs.is_empty() {
        return Err(Error::InvalidArgument("no LLRs to de-rate-match".into()));
    }
    let mut out = vec![0.0f32; params.n];
    de_rate_match_into(llrs, params, &mut out);
    Ok(CodewordLlr { llr: out })
}

pub(crate) fn de_rate_match_into(llrs: &[f32], params: &LdpcParams, out: &mut [f32]) {
    out.fill(0.0);
    let fillers = params.buffer_filler_range();
    let mut pos = 0usize;
    for &l in llrs {
        if pos == fillers.start && !fillers.is_empty() {
            pos = fillers.end;
        }
        if pos >= params.n {
            pos = 0;
            if fillers.start == 0 && !fillers.is_empty() {
                pos = fillers.end;
            }
        }
        out[pos] += l;
        pos += 1;
    }
    out[fillers].fill(FILLER_LLR);
}
