use crate::channel::{add_awgn, worker_rng, SnrSpec};
use crate::clock::now_ns;
use crate::coding::DecodeOutcome;
use crate::error::{Error, Result};
use crate::harness::latency::{timed_receive, LatencyReport};
use crate::link::{LinkIds, RxChain};
use crate::numerology::{mcs_entry, OfdmConfig};

use super::frame::{decode_frame, ControlSideband, FrameKind};
use super::socket::FrameRx;
use super::SLOTS_PER_FRAME;

#[derive(Debug, Clone, PartialEq)]
pub struct UeConfig {
    pub ofdm: OfdmConfig,
    /// Es/N0 of time-domain noise added on reception; infinite adds none.
    pub snr: SnrSpec,
    pub seed: u64,
}

impl Default for UeConfig {
    fn default() -> Self {
        Self { ofdm: OfdmConfig::default(), snr: SnrSpec::noiseless(), seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub slot: u32,
    pub outcome: DecodeOutcome,
    pub latency: LatencyReport,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct UeReport {
    pub slots: Vec<SlotRecord>,
    pub crc_pass: u64,
    pub crc_fail: u64,
    /// Datagrams that failed to parse.
    pub frame_errors: u64,
    /// Sequence numbers skipped over.
    pub seq_gaps: u64,
    /// Frames at or behind the last accepted sequence number, dropped.
    pub out_of_order: u64,
    /// IQ frames without a matching CONTROL frame, skipped.
    pub missing_control: u64,
    pub end_received: bool,
}

/// Receives mini-slots until an END frame arrives or the link times out.
pub fn run_ue<R: FrameRx>(link: &mut R, cfg: &UeConfig) -> Result<UeReport> {
    let mut report = UeReport::default();
    let mut chains: Vec<((u16, u16), RxChain)> = Vec::new();
    let mut rng = worker_rng(cfg.seed, 1, 0);
    let noise_var = cfg.snr.noise_var();
    let mut last_seq: Option<u32> = None;
    let mut pending: Option<ControlSideband> = None;
    let mut run = 0u64;
    loop {
        let bytes = match link.recv() {
            Ok(b) => b,
            Err(Error::Timeout(_)) if report.slots.is_empty() && report.frame_errors == 0 => {
                return Err(Error::Timeout("no frames from the eNB".into()))
            }
            Err(Error::Timeout(_)) => break,
            Err(e) => return Err(e),
        };
        let t_rx = now_ns();
        let frame = match decode_frame(&bytes) {
            Ok(f) => f,
            Err(_) => {
                report.frame_errors += 1;
                continue;
            }
        };
        if let Some(last) = last_seq {
            if frame.seq <= last {
                report.out_of_order += 1;
                continue;
            }
            report.seq_gaps += (frame.seq - last - 1) as u64;
        }
        last_seq = Some(frame.seq);
        match frame.kind {
            FrameKind::End => {
                report.end_received = true;
                break;
            }
            FrameKind::Control => match ControlSideband::from_bytes(&frame.payload) {
                Ok(c) => pending = Some(c),
                Err(_) => report.frame_errors += 1,
            },
            FrameKind::Iq => {
                let Some(ctrl) = pending.take().filter(|c| c.slot == frame.slot) else {
                    report.missing_control += 1;
                    continue;
                };
                if !control_consistent(&ctrl) {
                    report.frame_errors += 1;
                    continue;
                }
                let mcs = ctrl.mcs as usize;
                let key = (ctrl.rnti, ctrl.cell_id);
                let idx = match chains.iter().position(|(k, _)| *k == key) {
                    Some(i) => i,
                    None => {
                        let ids = LinkIds { rnti: ctrl.rnti, cell_id: ctrl.cell_id };
                        chains.push((key, RxChain::new(cfg.ofdm, ids)?));
                        chains.len() - 1
                    }
                };
                let mut samples = frame.samples();
                add_awgn(&mut samples, noise_var, &mut rng);
                let slot = frame.slot % SLOTS_PER_FRAME as u32;
                let (outcome, stages, t_end) = timed_receive(&mut chains[idx].1, &samples, noise_var, mcs, slot, t_rx)?;
                if outcome.crc_ok {
                    report.crc_pass += 1;
                } else {
                    report.crc_fail += 1;
                }
                let latency = LatencyReport {
                    mcs,
                    run,
                    t_start_ns: ctrl.t_start_ns,
                    t_enb_done_ns: frame.timestamp_ns,
                    t_rx_ns: t_rx,
                    t_end_ns: t_end,
                    enb_stages: None,
                    ue_stages: stages,
                    crc_ok: outcome.crc_ok,
                    iterations: outcome.iterations_used,
                };
                run += 1;
                report.slots.push(SlotRecord { slot: frame.slot, outcome, latency });
            }
        }
    }
    Ok(report)
}

fn control_consistent(ctrl: &ControlSideband) -> bool {
    mcs_entry(ctrl.mcs as usize).is_ok_and(|e| e.tbs == ctrl.tbs_bits as usize)
}
