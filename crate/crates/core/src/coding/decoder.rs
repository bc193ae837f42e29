//! Layered normalized min-sum decoding over the lifted base graph 2.
//!
//! Each base-matrix row is one layer of `z_c` independent checks. Check
//! messages are kept per edge; variable posteriors are updated in place after
//! every layer. Decoding stops as soon as the hard decision satisfies every
//! parity check.

use crate::error::{check_len, Result};

use super::basegraph::{bg2_for, BG2_COLS, BG2_INFO_COLS};
use super::crc::crc16_check;
use super::params::LdpcParams;
use super::ratematch::{CodewordLlr, FILLER_LLR};

pub const DEFAULT_MAX_ITERATIONS: usize = 6;

/// Normalization applied to the check-node minimum.
pub const MIN_SUM_SCALE: f32 = 0.75;

const SIGN_BIT: u32 = 0x8000_0000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Decoded bits. From the LDPC stage these are the `b` code-block bits
    /// (payload and CRC); after transport-block decoding, the payload only.
    pub bits: Vec<u8>,
    pub iterations_used: usize,
    pub parity_satisfied: bool,
    pub crc_ok: bool,
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    col: usize,
    shift: usize,
}

/// Reusable min-sum decoder. Scratch buffers grow to the largest lifting
/// size seen and are reused across calls; keep one per worker.
#[derive(Debug, Default)]
pub struct MinSumDecoder {
    posterior: Vec<f32>,
    check_msgs: Vec<f32>,
    q: Vec<f32>,
    min1: Vec<f32>,
    min2: Vec<f32>,
    min_idx: Vec<u8>,
    sign: Vec<u32>,
    hard: Vec<u8>,
    parity: Vec<u8>,
    layers: Vec<Vec<Edge>>,
    layers_key: (usize, usize),
}

impl MinSumDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the layer edge lists. Systematic columns made up entirely of
    /// fillers carry no information and are left out of the graph.
    fn prepare(&mut self, z: usize, b: usize) -> Result<()> {
        let first_filler_col = b.div_ceil(z).min(BG2_INFO_COLS);
        if self.layers_key != (z, first_filler_col) {
            let m = bg2_for(z)?;
            self.layers = m
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .filter(|e| e.col < first_filler_col || e.col >= BG2_INFO_COLS)
                        .map(|e| Edge { col: e.col, shift: e.shift % z })
                        .collect()
                })
                .collect();
            self.layers_key = (z, first_filler_col);
        }
        let edges: usize = self.layers.iter().map(Vec::len).sum();
        let max_deg = self.layers.iter().map(Vec::len).max().unwrap_or(0);
        self.posterior.resize(BG2_COLS * z, 0.0);
        self.check_msgs.clear();
        self.check_msgs.resize(edges * z, 0.0);
        self.q.resize(max_deg * z, 0.0);
        self.min1.resize(z, 0.0);
        self.min2.resize(z, 0.0);
        self.min_idx.resize(z, 0);
        self.sign.resize(z, 0);
        self.hard.resize(BG2_COLS * z, 0);
        self.parity.resize(z, 0);
        Ok(())
    }

    /// Decodes one code block. `max_iter` is clamped to at least one.
    pub fn decode(&mut self, cw: &CodewordLlr, params: &LdpcParams, max_iter: usize) -> Result<DecodeOutcome> {
        check_len(params.n, cw.llr.len())?;
        let z = params.z_c;
        self.prepare(z, params.b)?;
        let punct = params.punctured();
        self.posterior[..punct].fill(0.0);
        self.posterior[punct..].copy_from_slice(&cw.llr);
        let fillers = params.filler_range();
        self.posterior[fillers.clone()].fill(FILLER_LLR);
        // Only fillers sharing a column with information bits get updated.
        let in_graph = fillers.start..fillers.end.min(fillers.start.div_ceil(z) * z);

        let max_iter = max_iter.max(1);
        let mut iterations = 0;
        let mut satisfied = false;
        while iterations < max_iter {
            iterations += 1;
            self.iterate(z, &in_graph);
            if self.parity_ok(z) {
                satisfied = true;
                break;
            }
        }

        let bits = self.hard[..params.b].to_vec();
        let crc_ok = crc16_check(&bits);
        Ok(DecodeOutcome {
            bits,
            iterations_used: iterations,
            parity_satisfied: satisfied,
            crc_ok,
        })
    }

    fn iterate(&mut self, z: usize, fillers: &std::ops::Range<usize>) {
        let mut msg_base = 0;
        for layer in &self.layers {
            let min1 = &mut self.min1[..z];
            let min2 = &mut self.min2[..z];
            let min_idx = &mut self.min_idx[..z];
            let sign = &mut self.sign[..z];
            min1.fill(f32::INFINITY);
            min2.fill(f32::INFINITY);
            min_idx.fill(0);
            sign.fill(0);

            // Variable-to-check messages, gathered through the circulant shift.
            for (e, edge) in layer.iter().enumerate() {
                let var = &self.posterior[edge.col * z..(edge.col + 1) * z];
                let msgs = &self.check_msgs[msg_base + e * z..msg_base + (e + 1) * z];
                let q = &mut self.q[e * z..(e + 1) * z];
                let s = edge.shift;
                let (q_lo, q_hi) = q.split_at_mut(z - s);
                let (m_lo, m_hi) = msgs.split_at(z - s);
                for ((q, v), m) in q_lo.iter_mut().zip(&var[s..]).zip(m_lo) {
                    *q = v - m;
                }
                for ((q, v), m) in q_hi.iter_mut().zip(&var[..s]).zip(m_hi) {
                    *q = v - m;
                }
                let tag = e as u8;
                let q = &q[..z];
                let (min1, min2, min_idx, sign) = (&mut min1[..z], &mut min2[..z], &mut min_idx[..z], &mut sign[..z]);
                for r in 0..z {
                    let v = q[r];
                    let mag = v.abs();
                    sign[r] ^= v.to_bits() & SIGN_BIT;
                    let below = mag < min1[r];
                    min2[r] = if below { min1[r] } else { min2[r].min(mag) };
                    min_idx[r] = if below { tag } else { min_idx[r] };
                    min1[r] = if below { mag } else { min1[r] };
                }
            }

            // Check-to-variable messages and posterior update.
            for (e, edge) in layer.iter().enumerate() {
                let q = &self.q[e * z..(e + 1) * z];
                let msgs = &mut self.check_msgs[msg_base + e * z..msg_base + (e + 1) * z];
                let tag = e as u8;
                let (q, msgs) = (&q[..z], &mut msgs[..z]);
                let (min1, min2, min_idx, sign) = (&min1[..z], &min2[..z], &min_idx[..z], &sign[..z]);
                for r in 0..z {
                    // A check left with one edge pins it like a filler.
                    let mag = if min_idx[r] == tag { min2[r] } else { min1[r] }.min(FILLER_LLR);
                    let neg = (sign[r] ^ q[r].to_bits()) & SIGN_BIT;
                    msgs[r] = f32::from_bits((MIN_SUM_SCALE * mag).to_bits() | neg);
                }
                let var = &mut self.posterior[edge.col * z..(edge.col + 1) * z];
                let s = edge.shift;
                let (q_lo, q_hi) = q.split_at(z - s);
                let (m_lo, m_hi) = msgs.split_at(z - s);
                let (v_head, v_tail) = var.split_at_mut(s);
                for ((v, q), m) in v_tail.iter_mut().zip(q_lo).zip(m_lo) {
                    *v = q + m;
                }
                for ((v, q), m) in v_head.iter_mut().zip(q_hi).zip(m_hi) {
                    *v = q + m;
                }
            }
            msg_base += layer.len() * z;

            // Fillers are known zeros and never move.
            if !fillers.is_empty() {
                self.posterior[fillers.clone()].fill(FILLER_LLR);
            }
        }
    }

    fn parity_ok(&mut self, z: usize) -> bool {
        for (h, &l) in self.hard.iter_mut().zip(&self.posterior) {
            *h = (l < 0.0) as u8;
        }
        for layer in &self.layers {
            self.parity.fill(0);
            for edge in layer {
                let bits = &self.hard[edge.col * z..(edge.col + 1) * z];
                super::encoder::xor_rotated(&mut self.parity, bits, edge.shift);
            }
            if self.parity.iter().any(|&p| p != 0) {
                return false;
            }
        }
        true
    }
}

/// Decodes one code block with a fresh decoder.
pub fn ldpc_decode_minsum(cw: &CodewordLlr, params: &LdpcParams, max_iter: usize) -> Result<DecodeOutcome> {
    MinSumDecoder::new().decode(cw, params, max_iter)
}
