//! Downlink latency profiler.
//!
//! Every timestamp comes from [`now_ns`], the host-wide monotonic clock, so
//! the decomposition `t_proc_enb + t_tx + t_proc_ue = t_end - t_start` holds
//! exactly even when the two ends run in different processes. Stage
//! boundaries are contiguous, so stage durations add up to their component.

use std::time::Duration;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{worker_rng, SimRng};
use crate::clock::now_ns;
use crate::coding::{DecodeOutcome, TransportBlock};
use crate::error::{Error, Result};
use crate::link::{LinkIds, RxChain, TxChain};
use crate::numerology::{tbs_lookup, MiniSlotConfig, OfdmConfig};
use crate::transport::frame::{decode_frame, encode_frame, IqFrame};
use crate::transport::socket::{FrameRx, FrameTx, UdpRx, UdpTx};

use super::stats::median;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnbStages {
    pub encode: u64,
    pub rate_match: u64,
    /// Scrambling, QPSK and resource mapping.
    pub modulate: u64,
    pub ofdm: u64,
}

impl EnbStages {
    pub fn total(&self) -> u64 {
        self.encode + self.rate_match + self.modulate + self.ofdm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UeStages {
    pub ofdm: u64,
    pub estimate: u64,
    /// MRC, soft demapping and descrambling.
    pub demodulate: u64,
    /// De-rate-matching, LDPC decoding and CRC check.
    pub decode: u64,
}

impl UeStages {
    pub fn total(&self) -> u64 {
        self.ofdm + self.estimate + self.demodulate + self.decode
    }
}

/// Timestamps of one mini-slot through the link.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencyReport {
    pub mcs: usize,
    pub run: u64,
    pub t_start_ns: u64,
    /// End of eNB processing: last transmit sample produced.
    pub t_enb_done_ns: u64,
    /// Samples available in the UE context.
    pub t_rx_ns: u64,
    /// CRC checked.
    pub t_end_ns: u64,
    /// `None` when the eNB ran in another process.
    pub enb_stages: Option<EnbStages>,
    pub ue_stages: UeStages,
    pub crc_ok: bool,
    pub iterations: usize,
}

impl LatencyReport {
    pub fn t_proc_enb(&self) -> u64 {
        self.t_enb_done_ns.saturating_sub(self.t_start_ns)
    }

    pub fn t_tx(&self) -> u64 {
        self.t_rx_ns.saturating_sub(self.t_enb_done_ns)
    }

    pub fn t_proc_ue(&self) -> u64 {
        self.t_end_ns.saturating_sub(self.t_rx_ns)
    }

    pub fn t_sum(&self) -> u64 {
        self.t_end_ns.saturating_sub(self.t_start_ns)
    }
}

/// Medians over the runs that passed CRC.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencySummary {
    pub mcs: usize,
    pub runs: usize,
    pub failures: usize,
    pub median_t_proc_enb_ns: u64,
    pub median_t_tx_ns: u64,
    pub median_t_proc_ue_ns: u64,
    pub median_t_sum_ns: u64,
    pub median_decode_ns: u64,
}

pub fn summarize(mcs: usize, reports: &[LatencyReport]) -> LatencySummary {
    let ok: Vec<&LatencyReport> = reports.iter().filter(|r| r.crc_ok).collect();
    let med = |f: &dyn Fn(&LatencyReport) -> u64| median(&ok.iter().map(|r| f(r)).collect::<Vec<_>>()).unwrap_or(0);
    LatencySummary {
        mcs,
        runs: reports.len(),
        failures: reports.len() - ok.len(),
        median_t_proc_enb_ns: med(&|r| r.t_proc_enb()),
        median_t_tx_ns: med(&|r| r.t_tx()),
        median_t_proc_ue_ns: med(&|r| r.t_proc_ue()),
        median_t_sum_ns: med(&|r| r.t_sum()),
        median_decode_ns: med(&|r| r.ue_stages.decode),
    }
}

/// Runs the transmit chain from `t_start`, padding to the transmission unit
/// of `platform`. Returns the samples, stage durations and completion time.
pub fn timed_transmit(
    tx: &mut TxChain,
    tb: &TransportBlock,
    slot: u32,
    platform: &MiniSlotConfig,
    ofdm: &OfdmConfig,
    t_start: u64,
) -> Result<(Vec<Complex64>, EnbStages, u64)> {
    let (cw, params) = tx.encode(tb)?;
    let t1 = now_ns();
    let bits = tx.rate_match(&cw, &params)?;
    let t2 = now_ns();
    let grid = tx.modulate(&bits, slot)?;
    let t3 = now_ns();
    let mut samples = Vec::with_capacity(platform.samples_per_minislot(ofdm));
    tx.ofdm(&grid, &mut samples)?;
    samples.resize(platform.samples_per_minislot(ofdm), Complex64::default());
    let t4 = now_ns();
    let stages = EnbStages { encode: t1 - t_start, rate_match: t2 - t1, modulate: t3 - t2, ofdm: t4 - t3 };
    Ok((samples, stages, t4))
}

/// Runs the single-antenna receive chain from `t_rx`. Returns the outcome,
/// stage durations and `t_end`.
pub fn timed_receive(
    rx: &mut RxChain,
    samples: &[Complex64],
    noise_var: f64,
    mcs: usize,
    slot: u32,
    t_rx: u64,
) -> Result<(DecodeOutcome, UeStages, u64)> {
    let grid = rx.ofdm(samples)?;
    let t1 = now_ns();
    let est = rx.estimate(&grid, slot)?;
    let t2 = now_ns();
    let llrs = rx.demodulate(&[&grid], &[&est], noise_var, slot)?;
    let t3 = now_ns();
    let out = rx.decode(&llrs, mcs)?;
    let t_end = now_ns();
    let stages = UeStages { ofdm: t1 - t_rx, estimate: t2 - t1, demodulate: t3 - t2, decode: t_end - t3 };
    Ok((out, stages, t_end))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportMode {
    /// Ownership of the sample buffer moves to the receive chain in-thread.
    InProcess,
    /// Samples cross a localhost UDP socket to a receiver thread.
    Socket,
}

impl std::str::FromStr for TransportMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inproc" => Ok(TransportMode::InProcess),
            "socket" => Ok(TransportMode::Socket),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?} (inproc|socket)"))),
        }
    }
}

fn random_tb(mcs: usize, tbs: usize, rng: &mut SimRng) -> Result<TransportBlock> {
    TransportBlock::new(mcs, (0..tbs).map(|_| rng.random_range(0..2u8)).collect())
}

/// Profiles `runs` noiseless mini-slots at one MCS. One untimed warm-up
/// slot precedes the measured runs.
pub fn run_latency(
    mcs: usize,
    runs: usize,
    platform: MiniSlotConfig,
    mode: TransportMode,
    seed: u64,
) -> Result<(Vec<LatencyReport>, LatencySummary)> {
    let (tbs, _) = tbs_lookup(mcs)?;
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let ofdm = OfdmConfig::default();
    let ids = LinkIds::default();
    let mut rng = worker_rng(seed, 0, mcs as u64);
    let mut tx = TxChain::new(ofdm, ids)?;
    let reports = match mode {
        TransportMode::InProcess => {
            let mut rx = RxChain::new(ofdm, ids)?;
            let mut reports = Vec::with_capacity(runs);
            for run in 0..=runs as u64 {
                let r = inproc_run(mcs, tbs, run, &platform, &ofdm, &mut tx, &mut rx, &mut rng)?;
                if run > 0 {
                    reports.push(LatencyReport { run: run - 1, ..r });
                }
            }
            reports
        }
        TransportMode::Socket => socket_runs(mcs, tbs, runs, &platform, &ofdm, ids, &mut tx, &mut rng)?,
    };
    let summary = summarize(mcs, &reports);
    Ok((reports, summary))
}

/// In-process runs over several MCS, one run of each per round, so slow
/// drift in machine speed hits every MCS alike. Each MCS draws the same
/// transport blocks as [`run_latency`] with the same seed.
pub fn run_latency_interleaved(
    mcs_list: &[usize],
    runs: usize,
    platform: MiniSlotConfig,
    seed: u64,
) -> Result<Vec<(Vec<LatencyReport>, LatencySummary)>> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let tbs = mcs_list.iter().map(|&m| tbs_lookup(m).map(|t| t.0)).collect::<Result<Vec<_>>>()?;
    let ofdm = OfdmConfig::default();
    let ids = LinkIds::default();
    let mut tx = TxChain::new(ofdm, ids)?;
    let mut rx = RxChain::new(ofdm, ids)?;
    let mut rngs: Vec<_> = mcs_list.iter().map(|&m| worker_rng(seed, 0, m as u64)).collect();
    let mut reports: Vec<Vec<LatencyReport>> = mcs_list.iter().map(|_| Vec::with_capacity(runs)).collect();
    for run in 0..=runs as u64 {
        for (i, &mcs) in mcs_list.iter().enumerate() {
            let r = inproc_run(mcs, tbs[i], run, &platform, &ofdm, &mut tx, &mut rx, &mut rngs[i])?;
            if run > 0 {
                reports[i].push(LatencyReport { run: run - 1, ..r });
            }
        }
    }
    Ok(mcs_list
        .iter()
        .zip(reports)
        .map(|(&mcs, r)| {
            let summary = summarize(mcs, &r);
            (r, summary)
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn inproc_run(
    mcs: usize,
    tbs: usize,
    run: u64,
    platform: &MiniSlotConfig,
    ofdm: &OfdmConfig,
    tx: &mut TxChain,
    rx: &mut RxChain,
    rng: &mut SimRng,
) -> Result<LatencyReport> {
    let slot = (run % 10) as u32;
    let tb = random_tb(mcs, tbs, rng)?;
    let t_start = now_ns();
    let (samples, enb, t_done) = timed_transmit(tx, &tb, slot, platform, ofdm, t_start)?;
    let t_rx = now_ns();
    let (out, ue, t_end) = timed_receive(rx, &samples, 0.0, mcs, slot, t_rx)?;
    Ok(report(mcs, run, t_start, t_done, t_rx, t_end, Some(enb), ue, &out, &tb))
}

#[allow(clippy::too_many_arguments)]
fn report(
    mcs: usize,
    run: u64,
    t_start: u64,
    t_done: u64,
    t_rx: u64,
    t_end: u64,
    enb: Option<EnbStages>,
    ue: UeStages,
    out: &DecodeOutcome,
    tb: &TransportBlock,
) -> LatencyReport {
    LatencyReport {
        mcs,
        run,
        t_start_ns: t_start,
        t_enb_done_ns: t_done,
        t_rx_ns: t_rx,
        t_end_ns: t_end,
        enb_stages: enb,
        ue_stages: ue,
        crc_ok: out.crc_ok && out.bits == tb.payload,
        iterations: out.iterations_used,
    }
}

#[allow(clippy::too_many_arguments)]
fn socket_runs(
    mcs: usize,
    tbs: usize,
    runs: usize,
    platform: &MiniSlotConfig,
    ofdm: &OfdmConfig,
    ids: LinkIds,
    tx: &mut TxChain,
    rng: &mut SimRng,
) -> Result<Vec<LatencyReport>> {
    let mut sock_rx = UdpRx::bind("127.0.0.1:0", Duration::from_secs(5))?;
    let mut sock_tx = UdpTx::connect(sock_rx.local_addr()?)?;
    let mut rx = RxChain::new(*ofdm, ids)?;
    let (done_tx, done_rx) = std::sync::mpsc::channel();
    let ue = std::thread::spawn(move || -> Result<()> {
        for _ in 0..=runs {
            let bytes = sock_rx.recv()?;
            let t_rx = now_ns();
            let frame = decode_frame(&bytes)?;
            let (out, stages, t_end) = timed_receive(&mut rx, &frame.samples(), 0.0, mcs, frame.slot % 10, t_rx)?;
            if done_tx.send((t_rx, out, stages, t_end)).is_err() {
                break;
            }
        }
        Ok(())
    });

    let mut reports = Vec::with_capacity(runs);
    let mut result = Ok(());
    for run in 0..=runs as u64 {
        let slot = (run % 10) as u32;
        let step = (|| -> Result<()> {
            let tb = random_tb(mcs, tbs, rng)?;
            let t_start = now_ns();
            let (samples, enb, t_done) = timed_transmit(tx, &tb, slot, platform, ofdm, t_start)?;
            sock_tx.send(&encode_frame(&IqFrame::iq(run as u32, slot, t_done, &samples))?)?;
            let (t_rx, out, ue_stages, t_end) = done_rx
                .recv()
                .map_err(|_| Error::Io { context: "latency receiver".into(), message: "thread stopped".into() })?;
            if run > 0 {
                reports.push(report(mcs, run - 1, t_start, t_done, t_rx, t_end, Some(enb), ue_stages, &out, &tb));
            }
            Ok(())
        })();
        if step.is_err() {
            result = step;
            break;
        }
    }
    drop(done_rx);
    let thread_result = ue.join().expect("latency receiver panicked");
    result?;
    thread_result?;
    Ok(reports)
}
