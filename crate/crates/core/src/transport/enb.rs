use rand::Rng;

use crate::channel::worker_rng;
use crate::clock::{now_ns, spin_until, wait_until};
use crate::coding::TransportBlock;
use crate::error::{Error, Result};
use crate::harness::latency::timed_transmit;
use crate::link::{LinkIds, TxChain};
use crate::numerology::{tbs_lookup, MiniSlotConfig, OfdmConfig};

use super::frame::{encode_frame, stamp_frame, ControlSideband, IqFrame};
use super::socket::FrameTx;
use super::SLOTS_PER_FRAME;

#[derive(Debug, Clone, PartialEq)]
pub struct EnbConfig {
    pub mcs: usize,
    pub slots: u64,
    pub platform: MiniSlotConfig,
    pub ofdm: OfdmConfig,
    pub ids: LinkIds,
    pub seed: u64,
    /// Mini-slot period on the wire; 0 sends back to back.
    pub period_ns: u64,
    /// Extra hold between stamping an IQ frame and sending it.
    pub delay_ns: u64,
}

impl Default for EnbConfig {
    fn default() -> Self {
        Self {
            mcs: 0,
            slots: 1,
            platform: MiniSlotConfig::default(),
            ofdm: OfdmConfig::default(),
            ids: LinkIds::default(),
            seed: 1,
            period_ns: 1_000_000,
            delay_ns: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnbSummary {
    pub slots_sent: u64,
    pub frames_sent: u64,
    pub last_seq: u32,
}

/// Transmits `cfg.slots` mini-slots as CONTROL + IQ frame pairs, then END.
pub fn run_enb<T: FrameTx>(link: &mut T, cfg: &EnbConfig) -> Result<EnbSummary> {
    let (tbs, _) = tbs_lookup(cfg.mcs)?;
    let mut tx = TxChain::new(cfg.ofdm, cfg.ids)?;
    let mut rng = worker_rng(cfg.seed, 0, cfg.mcs as u64);
    let mut seq = 0u32;
    let mut frames = 0u64;
    let mut send = |link: &mut T, bytes: &[u8], slot: u64| -> Result<()> {
        link.send(bytes).map_err(|e| slot_context(e, slot))?;
        frames += 1;
        Ok(())
    };
    let epoch = now_ns();
    for i in 0..cfg.slots {
        if cfg.period_ns > 0 {
            wait_until(epoch + i * cfg.period_ns);
        }
        let slot = (i % SLOTS_PER_FRAME) as u32;
        let tb = TransportBlock::new(cfg.mcs, (0..tbs).map(|_| rng.random_range(0..2u8)).collect())?;
        let t_start = now_ns();
        let (samples, _, _) = timed_transmit(&mut tx, &tb, slot, &cfg.platform, &cfg.ofdm, t_start)?;
        let ctrl = ControlSideband {
            mcs: cfg.mcs as u8,
            tbs_bits: tbs as u16,
            slot: i as u32,
            rnti: cfg.ids.rnti,
            cell_id: cfg.ids.cell_id,
            t_start_ns: t_start,
        };
        send(link, &encode_frame(&IqFrame::control(seq, now_ns(), &ctrl))?, i)?;
        seq = seq.wrapping_add(1);
        let mut bytes = encode_frame(&IqFrame::iq(seq, i as u32, 0, &samples))?;
        let stamp = now_ns();
        stamp_frame(&mut bytes, stamp)?;
        if cfg.delay_ns > 0 {
            spin_until(stamp + cfg.delay_ns);
        }
        send(link, &bytes, i)?;
        seq = seq.wrapping_add(1);
    }
    send(link, &encode_frame(&IqFrame::end(seq, now_ns()))?, cfg.slots)?;
    Ok(EnbSummary { slots_sent: cfg.slots, frames_sent: frames, last_seq: seq })
}

fn slot_context(e: Error, slot: u64) -> Error {
    match e {
        Error::Io { context, message } => Error::Io { context: format!("slot {slot}: {context}"), message },
        other => other,
    }
}
