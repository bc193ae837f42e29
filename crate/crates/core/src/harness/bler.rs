//! Monte-Carlo block error rate sweeps.
//!
//! Trial `t` of an SNR point runs on worker `t % workers` (with two workers
//! this is the odd/even mini-slot split). Each worker draws from its own RNG
//! stream, so its `j`-th trial is fully determined by `(seed, worker, point)`.
//! Workers advance in fixed-size rounds and results are consumed in trial
//! order, which makes the stopping point, and hence the output, independent
//! of thread scheduling.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{apply_channel, draw_channel, worker_rng, ChannelModel, SimRng, SnrSpec};
use crate::coding::{TransportBlock, DEFAULT_MAX_ITERATIONS};
use crate::error::{Error, Result};
use crate::link::{LinkIds, RxChain, TxChain};
use crate::numerology::{tbs_lookup, OfdmConfig};

use super::stats::wilson_ci;

/// Trials each worker runs per round.
const ROUND: u64 = 32;

/// Slots cycle through a 10-slot frame for scrambling and pilots.
const SLOTS_PER_FRAME: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// The receiver is handed the true channel.
    Genie,
    /// Pilot-based least-squares estimate with linear interpolation.
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_blocks: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_errors: 100, max_blocks: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlerConfig {
    pub model: ChannelModel,
    pub n_rx: usize,
    pub estimator: Estimator,
    pub stop: StopRule,
    pub seed: u64,
    pub workers: usize,
    pub max_iterations: usize,
    pub ofdm: OfdmConfig,
    pub ids: LinkIds,
}

impl Default for BlerConfig {
    fn default() -> Self {
        Self {
            model: ChannelModel::Awgn,
            n_rx: 1,
            estimator: Estimator::Genie,
            stop: StopRule::default(),
            seed: 1,
            workers: 2,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            ofdm: OfdmConfig::default(),
            ids: LinkIds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlerResult {
    pub mcs: usize,
    pub snr_db: f64,
    pub blocks: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub avg_iterations: f64,
    pub ci95: (f64, f64),
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct Trial {
    error: bool,
    iterations: usize,
}

struct Worker {
    rng: SimRng,
    tx: TxChain,
    rx: RxChain,
    done: u64,
}

impl Worker {
    fn run(&mut self, mcs: usize, tbs: usize, snr: SnrSpec, cfg: &BlerConfig, trial: u64) -> Result<Trial> {
        let payload: Vec<u8> = (0..tbs).map(|_| self.rng.random_range(0..2u8)).collect();
        let tb = TransportBlock::new(mcs, payload)?;
        let slot = (trial % SLOTS_PER_FRAME) as u32;
        let grid = self.tx.build_grid(&tb, slot)?;
        let mut ch = draw_channel(cfg.model, cfg.n_rx, grid.n_sc(), cfg.ofdm.fft_size, &mut self.rng)?;
        let rx_grids = apply_channel(&grid, &mut ch, snr, &mut self.rng)?;
        let llrs = match cfg.estimator {
            Estimator::Genie => {
                let est: Vec<&[Complex64]> = (0..ch.n_rx()).map(|a| ch.response(a)).collect();
                self.rx.demodulate(&rx_grids, &est, ch.noise_var, slot)?
            }
            Estimator::LeastSquares => {
                let est = rx_grids.iter().map(|g| self.rx.estimate(g, slot)).collect::<Result<Vec<_>>>()?;
                self.rx.demodulate(&rx_grids, &est, ch.noise_var, slot)?
            }
        };
        let out = self.rx.decode(&llrs, mcs)?;
        Ok(Trial {
            error: !out.crc_ok || out.bits != tb.payload,
            iterations: out.iterations_used,
        })
    }

    /// Runs this worker's trials with global index below `limit`, at most `ROUND` of them.
    #[allow(clippy::too_many_arguments)]
    fn round(
        &mut self,
        index: u64,
        workers: u64,
        limit: u64,
        mcs: usize,
        tbs: usize,
        snr: SnrSpec,
        cfg: &BlerConfig,
    ) -> Result<Vec<Trial>> {
        let mut out = Vec::with_capacity(ROUND as usize);
        for _ in 0..ROUND {
            let t = self.done * workers + index;
            if t >= limit {
                break;
            }
            out.push(self.run(mcs, tbs, snr, cfg, t)?);
            self.done += 1;
        }
        Ok(out)
    }
}

/// Sweeps `snr_points` (Es/N0 in dB, `f64::INFINITY` for noiseless) at one MCS.
pub fn run_bler(mcs: usize, snr_points: &[f64], cfg: &BlerConfig) -> Result<Vec<BlerResult>> {
    let (tbs, _) = tbs_lookup(mcs)?;
    if snr_points.is_empty() {
        return Err(Error::InvalidArgument("empty SNR list".into()));
    }
    if cfg.workers == 0 {
        return Err(Error::InvalidArgument("at least one worker is required".into()));
    }
    if !(1..=2).contains(&cfg.n_rx) {
        return Err(Error::InvalidArgument(format!("{} receive antennas unsupported", cfg.n_rx)));
    }
    if cfg.stop.min_errors == 0 || cfg.stop.max_blocks == 0 {
        return Err(Error::InvalidArgument("stop rule limits must be positive".into()));
    }
    snr_points
        .iter()
        .enumerate()
        .map(|(i, &snr_db)| run_point(mcs, tbs, snr_db, i as u64, cfg))
        .collect()
}

fn run_point(mcs: usize, tbs: usize, snr_db: f64, point: u64, cfg: &BlerConfig) -> Result<BlerResult> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(format!("invalid SNR {snr_db}")));
    }
    let snr = if snr_db.is_infinite() { SnrSpec::noiseless() } else { SnrSpec::db(snr_db) };
    let n_workers = cfg.workers as u64;
    let stream = ((mcs as u64) << 32) | point;
    let mut workers = (0..n_workers)
        .map(|w| {
            Ok(Worker {
                rng: worker_rng(cfg.seed, w, stream),
                tx: TxChain::new(cfg.ofdm, cfg.ids)?,
                rx: {
                    let mut rx = RxChain::new(cfg.ofdm, cfg.ids)?;
                    rx.max_iterations = cfg.max_iterations;
                    rx
                },
                done: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (mut blocks, mut errors, mut iterations) = (0u64, 0u64, 0u64);
    'rounds: loop {
        let batches: Vec<Vec<Trial>> = if workers.len() == 1 {
            vec![workers[0].round(0, 1, cfg.stop.max_blocks, mcs, tbs, snr, cfg)?]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = workers
                    .iter_mut()
                    .enumerate()
                    .map(|(w, worker)| {
                        s.spawn(move || worker.round(w as u64, n_workers, cfg.stop.max_blocks, mcs, tbs, snr, cfg))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("BLER worker panicked")).collect::<Result<Vec<_>>>()
            })?
        };
        let depth = batches.iter().map(Vec::len).max().unwrap_or(0);
        if depth == 0 {
            break;
        }
        for j in 0..depth {
            for batch in &batches {
                let Some(trial) = batch.get(j) else { continue };
                blocks += 1;
                iterations += trial.iterations as u64;
                errors += trial.error as u64;
                if errors >= cfg.stop.min_errors || blocks >= cfg.stop.max_blocks {
                    break 'rounds;
                }
            }
        }
    }

    let bler = if blocks == 0 { 0.0 } else { errors as f64 / blocks as f64 };
    Ok(BlerResult {
        mcs,
        snr_db,
        blocks,
        block_errors: errors,
        bler,
        avg_iterations: if blocks == 0 { 0.0 } else { iterations as f64 / blocks as f64 },
        ci95: wilson_ci(errors, blocks),
        seed: cfg.seed,
    })
}

/// SNR at which `target` BLER is crossed, by log-BLER linear interpolation
/// between the bracketing points. Expects results sorted by SNR.
pub fn snr_at_bler(results: &[BlerResult], target: f64) -> Option<f64> {
    for w in results.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.bler >= target && b.bler < target {
            if b.bler <= 0.0 {
                return Some(b.snr_db);
            }
            let (la, lb, lt) = (a.bler.ln(), b.bler.ln(), target.ln());
            return Some(a.snr_db + (lt - la) / (lb - la) * (b.snr_db - a.snr_db));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(workers: usize) -> BlerConfig {
        BlerConfig {
            stop: StopRule { min_errors: 10, max_blocks: 200 },
            workers,
            seed: 42,
            ..BlerConfig::default()
        }
    }

    #[test]
    fn noiseless_is_error_free() {
        let cfg = BlerConfig { stop: StopRule { min_errors: 1, max_blocks: 50 }, ..quick(2) };
        let r = run_bler(14, &[f64::INFINITY], &cfg).unwrap();
        assert_eq!(r[0].blocks, 50);
        assert_eq!(r[0].block_errors, 0);
        assert!(r[0].avg_iterations <= 2.0);
        assert_eq!(r[0].ci95.0, 0.0);
    }

    #[test]
    fn saturates_at_very_low_snr() {
        let r = run_bler(14, &[-20.0], &quick(1)).unwrap();
        assert!(r[0].bler >= 0.99);
        assert_eq!(r[0].block_errors, 10);
        assert_eq!(r[0].blocks, 10);
    }

    #[test]
    fn deterministic_for_fixed_seed_and_workers() {
        let snr = [0.0, 1.0];
        for workers in [1, 2, 3] {
            let a = run_bler(3, &snr, &quick(workers)).unwrap();
            let b = run_bler(3, &snr, &quick(workers)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn stops_exactly_at_error_target() {
        let r = run_bler(8, &[-1.0], &quick(2)).unwrap();
        assert!(r[0].block_errors == 10 || r[0].blocks == 200);
        assert!(r[0].ci95.0 <= r[0].bler && r[0].bler <= r[0].ci95.1);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_bler(15, &[0.0], &quick(1)).is_err());
        assert!(run_bler(0, &[], &quick(1)).is_err());
        assert!(run_bler(0, &[0.0], &quick(0)).is_err());
        assert!(run_bler(0, &[f64::NAN], &quick(1)).is_err());
        assert!(run_bler(0, &[0.0], &BlerConfig { n_rx: 3, ..quick(1) }).is_err());
    }

    #[test]
    fn crossing_interpolation() {
        let mk = |snr_db: f64, bler: f64| BlerResult {
            mcs: 0,
            snr_db,
            blocks: 1,
            block_errors: 0,
            bler,
            avg_iterations: 0.0,
            ci95: (0.0, 1.0),
            seed: 0,
        };
        let r = [mk(0.0, 1e-1), mk(1.0, 1e-3)];
        assert!((snr_at_bler(&r, 1e-2).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(snr_at_bler(&r, 1e-4), None);
    }
}
