//! IQ frame wire format.
//!
//! ```text
//! offset size field
//!  0     4    magic "URLP"
//!  4     1    version (1)
//!  5     1    kind: 1 IQ, 2 CONTROL, 3 END
//!  6     2    flags (0)
//!  8     4    seq
//! 12     4    slot
//! 16     4    sample_count
//! 20     8    timestamp_ns
//! ```
//!
//! All fields are little-endian. The payload is `sample_count` 8-byte words;
//! for IQ frames each word is one sample as `f32` I then `f32` Q.

use num_complex::Complex64;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"URLP";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 28;
pub const WORD_LEN: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    BadVersion(u8),
    #[error("unknown frame kind {0}")]
    BadKind(u8),
    #[error("truncated frame: {0} bytes, header needs 28")]
    Truncated(usize),
    #[error("frame length {actual} does not match header ({expected} bytes)")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("payload of {0} bytes is not a whole number of 8-byte words")]
    UnalignedPayload(usize),
    #[error("CONTROL payload must be 3 words, got {0}")]
    BadControl(usize),
}

impl FrameError {
    pub fn code(&self) -> &'static str {
        match self {
            FrameError::BadMagic(_) => "frame_bad_magic",
            FrameError::BadVersion(_) => "frame_bad_version",
            FrameError::BadKind(_) => "frame_bad_kind",
            FrameError::Truncated(_) => "frame_truncated",
            FrameError::LengthMismatch { .. } => "frame_length_mismatch",
            FrameError::UnalignedPayload(_) => "frame_unaligned_payload",
            FrameError::BadControl(_) => "frame_bad_control",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum FrameKind {
    Iq = 1,
    Control = 2,
    End = 3,
}

impl TryFrom<u8> for FrameKind {
    type Error = FrameError;

    fn try_from(v: u8) -> Result<Self, FrameError> {
        match v {
            1 => Ok(FrameKind::Iq),
            2 => Ok(FrameKind::Control),
            3 => Ok(FrameKind::End),
            other => Err(FrameError::BadKind(other)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IqFrame {
    pub kind: FrameKind,
    pub flags: u16,
    pub seq: u32,
    pub slot: u32,
    pub timestamp_ns: u64,
    /// Raw payload, a multiple of 8 bytes.
    pub payload: Vec<u8>,
}

impl IqFrame {
    pub fn sample_count(&self) -> usize {
        self.payload.len() / WORD_LEN
    }

    pub fn iq(seq: u32, slot: u32, timestamp_ns: u64, samples: &[Complex64]) -> Self {
        let mut payload = Vec::with_capacity(samples.len() * WORD_LEN);
        for s in samples {
            payload.extend_from_slice(&(s.re as f32).to_le_bytes());
            payload.extend_from_slice(&(s.im as f32).to_le_bytes());
        }
        Self { kind: FrameKind::Iq, flags: 0, seq, slot, timestamp_ns, payload }
    }

    pub fn control(seq: u32, timestamp_ns: u64, ctrl: &ControlSideband) -> Self {
        Self {
            kind: FrameKind::Control,
            flags: 0,
            seq,
            slot: ctrl.slot,
            timestamp_ns,
            payload: ctrl.to_bytes().to_vec(),
        }
    }

    pub fn end(seq: u32, timestamp_ns: u64) -> Self {
        Self { kind: FrameKind::End, flags: 0, seq, slot: 0, timestamp_ns, payload: Vec::new() }
    }

    /// Payload words as complex samples (f32 widened to f64).
    pub fn samples(&self) -> Vec<Complex64> {
        self.payload
            .chunks_exact(WORD_LEN)
            .map(|w| {
                let i = f32::from_le_bytes(w[0..4].try_into().unwrap());
                let q = f32::from_le_bytes(w[4..8].try_into().unwrap());
                Complex64::new(i as f64, q as f64)
            })
            .collect()
    }
}

/// Per-slot control information carried in a CONTROL frame ahead of the IQ
/// frame of the same slot.
///
/// ```text
/// offset size field
///  0     1    mcs
///  1     1    reserved (0)
///  2     2    tbs_bits
///  4     4    slot
///  8     2    rnti
/// 10     2    cell_id
/// 12     4    reserved (0)
/// 16     8    t_start_ns
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ControlSideband {
    pub mcs: u8,
    pub tbs_bits: u16,
    pub slot: u32,
    pub rnti: u16,
    pub cell_id: u16,
    /// Monotonic time at which the eNB started processing this slot.
    pub t_start_ns: u64,
}

impl ControlSideband {
    pub const LEN: usize = 3 * WORD_LEN;

    pub fn to_bytes(&self) -> [u8; Self::LEN] {
        let mut b = [0u8; Self::LEN];
        b[0] = self.mcs;
        b[2..4].copy_from_slice(&self.tbs_bits.to_le_bytes());
        b[4..8].copy_from_slice(&self.slot.to_le_bytes());
        b[8..10].copy_from_slice(&self.rnti.to_le_bytes());
        b[10..12].copy_from_slice(&self.cell_id.to_le_bytes());
        b[16..24].copy_from_slice(&self.t_start_ns.to_le_bytes());
        b
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self, FrameError> {
        if b.len() != Self::LEN {
            return Err(FrameError::BadControl(b.len() / WORD_LEN));
        }
        Ok(Self {
            mcs: b[0],
            tbs_bits: u16::from_le_bytes([b[2], b[3]]),
            slot: u32::from_le_bytes(b[4..8].try_into().unwrap()),
            rnti: u16::from_le_bytes([b[8], b[9]]),
            cell_id: u16::from_le_bytes([b[10], b[11]]),
            t_start_ns: u64::from_le_bytes(b[16..24].try_into().unwrap()),
        })
    }
}

pub fn encode_frame(frame: &IqFrame) -> Result<Vec<u8>, FrameError> {
    if !frame.payload.len().is_multiple_of(WORD_LEN) {
        return Err(FrameError::UnalignedPayload(frame.payload.len()));
    }
    let count = u32::try_from(frame.sample_count()).map_err(|_| FrameError::UnalignedPayload(frame.payload.len()))?;
    let mut out = Vec::with_capacity(HEADER_LEN + frame.payload.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(frame.kind as u8);
    out.extend_from_slice(&frame.flags.to_le_bytes());
    out.extend_from_slice(&frame.seq.to_le_bytes());
    out.extend_from_slice(&frame.slot.to_le_bytes());
    out.extend_from_slice(&count.to_le_bytes());
    out.extend_from_slice(&frame.timestamp_ns.to_le_bytes());
    out.extend_from_slice(&frame.payload);
    Ok(out)
}

/// Overwrites the timestamp of an encoded frame, so it can be stamped right
/// before it goes on the wire.
pub fn stamp_frame(bytes: &mut [u8], timestamp_ns: u64) -> Result<(), FrameError> {
    if bytes.len() < HEADER_LEN {
        return Err(FrameError::Truncated(bytes.len()));
    }
    bytes[20..28].copy_from_slice(&timestamp_ns.to_le_bytes());
    Ok(())
}

pub fn decode_frame(bytes: &[u8]) -> Result<IqFrame, FrameError> {
    if bytes.len() < HEADER_LEN {
        return Err(FrameError::Truncated(bytes.len()));
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if magic != MAGIC {
        return Err(FrameError::BadMagic(magic));
    }
    if bytes[4] != VERSION {
        return Err(FrameError::BadVersion(bytes[4]));
    }
    let kind = FrameKind::try_from(bytes[5])?;
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let count = u32_at(16) as usize;
    let expected = HEADER_LEN + count * WORD_LEN;
    if bytes.len() != expected {
        return Err(FrameError::LengthMismatch { expected, actual: bytes.len() });
    }
    Ok(IqFrame {
        kind,
        flags: u16::from_le_bytes([bytes[6], bytes[7]]),
        seq: u32_at(8),
        slot: u32_at(12),
        timestamp_ns: u64::from_le_bytes(bytes[20..HEADER_LEN].try_into().unwrap()),
        payload: bytes[HEADER_LEN..].to_vec(),
    })
}
