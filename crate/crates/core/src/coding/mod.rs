//! Transport-block channel coding: CRC16, base graph 2 LDPC, rate matching
//! and layered min-sum decoding.

pub mod basegraph;
pub mod crc;
pub mod decoder;
pub mod encoder;
pub mod params;
pub mod ratematch;

pub use crc::{crc16_attach, crc16_check, CRC_LEN};
pub use decoder::{ldpc_decode_minsum, DecodeOutcome, MinSumDecoder, DEFAULT_MAX_ITERATIONS};
pub use encoder::{ldpc_encode, ldpc_encode_full};
pub use params::{ldpc_params_select, BaseGraph, LdpcParams};
pub use ratematch::{de_rate_match, rate_match, CodewordLlr, FILLER_LLR};

use crate::error::{check_len, Result};
use crate::numerology::tbs_lookup;

/// Payload bits of one mini-slot; its length matches the configured MCS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportBlock {
    pub mcs: usize,
    pub payload: Vec<u8>,
}

impl TransportBlock {
    pub fn new(mcs: usize, payload: Vec<u8>) -> Result<Self> {
        let (tbs, _) = tbs_lookup(mcs)?;
        check_len(tbs, payload.len())?;
        Ok(Self { mcs, payload })
    }
}

/// Code parameters for a transport block of the given MCS.
pub fn params_for_mcs(mcs: usize) -> Result<LdpcParams> {
    let (tbs, _) = tbs_lookup(mcs)?;
    ldpc_params_select(tbs + CRC_LEN)
}

/// CRC attachment, filler insertion and LDPC encoding. Returns the `n`-bit
/// circular buffer.
pub fn tb_encode(tb: &TransportBlock) -> Result<(Vec<u8>, LdpcParams)> {
    let mut msg = crc16_attach(&tb.payload)?;
    let params = ldpc_params_select(msg.len())?;
    msg.resize(params.k, 0);
    Ok((ldpc_encode(&msg, &params)?, params))
}

/// Full transmit coding chain: encode then rate match to `e` bits.
pub fn tb_encode_rate_matched(tb: &TransportBlock, e: usize) -> Result<Vec<u8>> {
    let (cw, params) = tb_encode(tb)?;
    rate_match(&cw, e, &params)
}

/// De-rate-match, decode and check the CRC of one transport block.
pub fn tb_decode(llrs: &[f32], mcs: usize) -> Result<DecodeOutcome> {
    tb_decode_with(&mut MinSumDecoder::new(), llrs, mcs, DEFAULT_MAX_ITERATIONS)
}

/// [`tb_decode`] reusing a worker-owned decoder.
pub fn tb_decode_with(
    decoder: &mut MinSumDecoder,
    llrs: &[f32],
    mcs: usize,
    max_iter: usize,
) -> Result<DecodeOutcome> {
    let params = params_for_mcs(mcs)?;
    let soft = de_rate_match(llrs, &params)?;
    let mut out = decoder.decode(&soft, &params, max_iter)?;
    out.bits.truncate(params.b - CRC_LEN);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tb(mcs: usize, rng: &mut impl Rng) -> TransportBlock {
        let (tbs, _) = tbs_lookup(mcs).unwrap();
        TransportBlock::new(mcs, (0..tbs).map(|_| rng.random_range(0..2)).collect()).unwrap()
    }

    fn bipolar(bits: &[u8], mag: f32) -> Vec<f32> {
        bits.iter().map(|&b| if b == 0 { mag } else { -mag }).collect()
    }

    #[test]
    fn loopback_every_mcs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for mcs in 0..=14 {
            let tb = random_tb(mcs, &mut rng);
            let tx = tb_encode_rate_matched(&tb, 1700).unwrap();
            let out = tb_decode(&bipolar(&tx, 2.0), mcs).unwrap();
            assert!(out.crc_ok);
            assert_eq!(out.bits, tb.payload);
        }
    }

    #[test]
    fn corrects_a_confident_wrong_llr() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let tb = random_tb(0, &mut rng);
        let tx = tb_encode_rate_matched(&tb, 1700).unwrap();
        let mut llrs = bipolar(&tx, 3.0);
        llrs[100] = -llrs[100] * 2.0;
        let out = tb_decode(&llrs, 0).unwrap();
        assert!(out.crc_ok);
        assert_eq!(out.bits, tb.payload);
    }

    #[test]
    fn noise_rarely_passes_crc() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut passes = 0;
        for _ in 0..200 {
            let llrs: Vec<f32> = (0..1700).map(|_| rng.random_range(-5.0..5.0)).collect();
            if tb_decode(&llrs, 14).unwrap().crc_ok {
                passes += 1;
            }
        }
        assert_eq!(passes, 0);
    }

    #[test]
    fn wrong_payload_length_rejected() {
        assert!(TransportBlock::new(0, vec![0; 47]).is_err());
        assert!(TransportBlock::new(15, vec![0; 48]).is_err());
    }
}
