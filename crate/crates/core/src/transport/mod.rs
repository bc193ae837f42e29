//! IQ frame transport for running the eNB and the UE as separate processes.
//!
//! Each mini-slot travels as a CONTROL frame followed by an IQ frame with
//! the next sequence number; an END frame closes the stream.

pub mod enb;
pub mod frame;
pub mod socket;
pub mod ue;

pub use enb::{run_enb, EnbConfig, EnbSummary};
pub use frame::{decode_frame, encode_frame, stamp_frame, ControlSideband, FrameError, FrameKind, IqFrame, HEADER_LEN};
pub use socket::{loopback, FrameRx, FrameTx, LoopbackRx, LoopbackTx, UdpRx, UdpTx};
pub use ue::{run_ue, SlotRecord, UeConfig, UeReport};

/// Scrambling and pilots use the mini-slot counter modulo this.
pub const SLOTS_PER_FRAME: u64 = 10;
