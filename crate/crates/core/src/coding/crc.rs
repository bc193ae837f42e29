//! CRC16 with generator polynomial x^16 + x^12 + x^5 + 1, zero initial state,
//! MSB first, no output reflection.

use crate::error::{Error, Result};

pub const CRC_LEN: usize = 16;

const POLY: u16 = 0x1021;

/// CRC16 remainder of `bits` (one bit per byte, 0 or 1).
pub fn crc16(bits: &[u8]) -> u16 {
    let mut reg: u16 = 0;
    for &b in bits {
        let feedback = ((reg >> 15) as u8 ^ (b & 1)) != 0;
        reg <<= 1;
        if feedback {
            reg ^= POLY;
        }
    }
    reg
}

/// Appends the 16 CRC bits to `payload`.
pub fn crc16_attach(payload: &[u8]) -> Result<Vec<u8>> {
    if payload.is_empty() {
        return Err(Error::InvalidArgument("cannot attach CRC to an empty payload".into()));
    }
    let crc = crc16(payload);
    let mut out = Vec::with_capacity(payload.len() + CRC_LEN);
    out.extend_from_slice(payload);
    out.extend((0..CRC_LEN).rev().map(|i| ((crc >> i) & 1) as u8));
    Ok(out)
}

/// True if the trailing 16 bits of `block` are the CRC of the rest.
pub fn crc16_check(block: &[u8]) -> bool {
    // Dividing the whole block (payload followed by its remainder) leaves zero.
    block.len() > CRC_LEN && crc16(block) == 0
}
