//! Link-level simulator and two-process emulator for a mini-slot URLLC
//! downlink physical layer.
//!
//! The transmit chain runs CRC attachment, LDPC (base graph 2) encoding, rate
//! matching, scrambling, QPSK mapping, resource-grid mapping and OFDM. The
//! receive chain runs OFDM demodulation, pilot-based channel estimation,
//! maximal-ratio combining, soft demapping, de-rate-matching and layered
//! min-sum decoding. On top of both chains sit a Monte-Carlo BLER harness, a
//! latency profiler and a datagram transport for running the base station and
//! the terminal as separate processes.

pub mod channel;
pub mod clock;
pub mod coding;
pub mod error;
pub mod grid;
pub mod harness;
pub mod link;
pub mod modem;
pub mod numerology;
pub mod receiver;
pub mod transport;

pub use error::{Error, Result};
pub use num_complex::Complex64;
