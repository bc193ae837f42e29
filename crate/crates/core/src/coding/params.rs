use crate::error::{Error, Result};

use super::basegraph::{lifting_sizes, BG2_COLS, BG2_INFO_COLS};

/// Largest code block base graph 2 accepts without segmentation.
pub const MAX_BG2_BLOCK: usize = 3840;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseGraph {
    Bg2,
}

/// Code parameters of one transport block (single code block, base graph 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LdpcParams {
    pub base_graph: BaseGraph,
    pub z_c: usize,
    pub k_b: usize,
    /// Payload plus CRC bits carried by the code block.
    pub b: usize,
    /// Systematic bits including fillers, `10 * z_c`.
    pub k: usize,
    /// Circular buffer length after puncturing `2 * z_c` systematic bits.
    pub n: usize,
    pub filler_count: usize,
}

impl LdpcParams {
    /// Length of the unpunctured codeword, `52 * z_c`.
    pub fn full_len(&self) -> usize {
        BG2_COLS * self.z_c
    }

    pub fn punctured(&self) -> usize {
        2 * self.z_c
    }

    /// Filler positions `[start, end)` in codeword coordinates.
    pub fn filler_range(&self) -> std::ops::Range<usize> {
        self.b..self.k
    }

    /// Filler positions `[start, end)` in circular-buffer coordinates.
    pub fn buffer_filler_range(&self) -> std::ops::Range<usize> {
        let p = self.punctured();
        self.b.saturating_sub(p)..self.k.saturating_sub(p)
    }

    /// Buffer positions that carry a transmittable bit.
    pub fn buffer_payload_len(&self) -> usize {
        self.n - self.buffer_filler_range().len()
    }
}

/// Picks `K_b` and the lifting size for a `b`-bit block on base graph 2.
pub fn ldpc_params_select(b: usize) -> Result<LdpcParams> {
    if b == 0 {
        return Err(Error::InvalidArgument("code block must carry at least one bit".into()));
    }
    if b > MAX_BG2_BLOCK {
        return Err(Error::SegmentationRequired(b));
    }
    let k_b = if b > 640 {
        10
    } else if b > 560 {
        9
    } else if b > 192 {
        8
    } else {
        6
    };
    let z_c = *lifting_sizes()
        .iter()
        .find(|&&z| k_b * z >= b)
        .expect("b <= 3840 always fits the largest lifting size");
    let k = BG2_INFO_COLS * z_c;
    Ok(LdpcParams {
        base_graph: BaseGraph::Bg2,
        z_c,
        k_b,
        b,
        k,
        n: (BG2_COLS - 2) * z_c,
        filler_count: k - b,
    })
}
