//! Bit scrambling, QPSK mapping and soft demapping, and OFDM between the
//! resource grid and time-domain samples.

pub mod gold;
pub mod ofdm;
pub mod qpsk;
pub mod scramble;

pub use gold::gold_sequence;
pub use ofdm::{ofdm_demodulate, ofdm_modulate, IqSamples, OfdmModem};
pub use qpsk::{qpsk_llr, qpsk_modulate};
pub use scramble::{scramble, ScramblingConfig};
