//! End-to-end transmit and receive chains for one mini-slot.
//!
//! TX: CRC + LDPC encode, rate match to the PDSCH capacity, scramble, QPSK,
//! resource mapping, OFDM. RX mirrors it. Each stage is a separate method so
//! the latency profiler can timestamp the boundaries.

use num_complex::Complex64;

use crate::coding::{
    rate_match, tb_decode_with, tb_encode, DecodeOutcome, LdpcParams, MinSumDecoder, TransportBlock,
    DEFAULT_MAX_ITERATIONS,
};
use crate::error::{check_len, Error, Result};
use crate::grid::{build_minislot_map, map_grid, GridMap, ResourceGrid, DATA_SYMBOLS};
use crate::modem::ofdm::OfdmModem;
use crate::modem::qpsk::qpsk_modulate;
use crate::modem::scramble::{descramble_llrs, scramble, ScramblingConfig};
use crate::numerology::OfdmConfig;
use crate::receiver::{demod_metrics, estimate_channel};

/// Identifiers shared by both ends of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkIds {
    pub rnti: u16,
    pub cell_id: u16,
}

impl Default for LinkIds {
    fn default() -> Self {
        Self { rnti: 0x1234, cell_id: 1 }
    }
}

impl LinkIds {
    pub fn scrambling(&self, slot: u32) -> ScramblingConfig {
        ScramblingConfig { rnti: self.rnti, cell_id: self.cell_id, slot }
    }
}

/// Time-domain length of the 4 data symbols.
pub fn data_samples(cfg: &OfdmConfig) -> usize {
    (0..DATA_SYMBOLS).map(|l| cfg.symbol_len(l)).sum()
}

#[derive(Debug)]
pub struct TxChain {
    map: GridMap,
    modem: OfdmModem,
    ids: LinkIds,
}

impl TxChain {
    pub fn new(cfg: OfdmConfig, ids: LinkIds) -> Result<Self> {
        Ok(Self { map: build_minislot_map(cfg.n_rb)?, modem: OfdmModem::new(cfg)?, ids })
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn ids(&self) -> LinkIds {
        self.ids
    }

    pub fn encode(&self, tb: &TransportBlock) -> Result<(Vec<u8>, LdpcParams)> {
        tb_encode(tb)
    }

    pub fn rate_match(&self, codeword: &[u8], params: &LdpcParams) -> Result<Vec<u8>> {
        rate_match(codeword, self.map.pdsch_bits(), params)
    }

    /// Scrambling, QPSK and resource mapping.
    pub fn modulate(&self, bits: &[u8], slot: u32) -> Result<ResourceGrid> {
        check_len(self.map.pdsch_bits(), bits.len())?;
        let syms = qpsk_modulate(&scramble(bits, &self.ids.scrambling(slot)))?;
        map_grid(&syms, &self.map, slot, self.ids.cell_id)
    }

    /// Appends the CP-prefixed samples of the 4 data symbols to `out`.
    pub fn ofdm(&mut self, grid: &ResourceGrid, out: &mut Vec<Complex64>) -> Result<()> {
        check_len(self.map.n_sc(), grid.n_sc())?;
        for l in 0..DATA_SYMBOLS {
            self.modem.modulate_into(grid.symbol(l), l, out)?;
        }
        Ok(())
    }

    /// Everything up to the resource grid.
    pub fn build_grid(&self, tb: &TransportBlock, slot: u32) -> Result<ResourceGrid> {
        let (cw, params) = self.encode(tb)?;
        let bits = self.rate_match(&cw, &params)?;
        self.modulate(&bits, slot)
    }

    pub fn transmit(&mut self, tb: &TransportBlock, slot: u32) -> Result<Vec<Complex64>> {
        let grid = self.build_grid(tb, slot)?;
        let mut out = Vec::with_capacity(data_samples(self.modem.config()));
        self.ofdm(&grid, &mut out)?;
        Ok(out)
    }
}

#[derive(Debug)]
pub struct RxChain {
    map: GridMap,
    modem: OfdmModem,
    decoder: MinSumDecoder,
    ids: LinkIds,
    pub max_iterations: usize,
}

impl RxChain {
    pub fn new(cfg: OfdmConfig, ids: LinkIds) -> Result<Self> {
        Ok(Self {
            map: build_minislot_map(cfg.n_rb)?,
            modem: OfdmModem::new(cfg)?,
            decoder: MinSumDecoder::new(),
            ids,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        })
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    /// Demodulates the 4 data symbols at the start of `samples`; anything
    /// after them (idle symbols of a transmission unit) is ignored.
    pub fn ofdm(&mut self, samples: &[Complex64]) -> Result<ResourceGrid> {
        let cfg = *self.modem.config();
        let needed = data_samples(&cfg);
        if samples.len() < needed {
            return Err(Error::LengthMismatch { expected: needed, actual: samples.len() });
        }
        let n_sc = self.map.n_sc();
        let mut grid = ResourceGrid::zeros(n_sc);
        let mut start = 0;
        for l in 0..DATA_SYMBOLS {
            let len = cfg.symbol_len(l);
            self.modem.demodulate_into(&samples[start..start + len], l, grid.symbol_mut(l))?;
            start += len;
        }
        Ok(grid)
    }

    pub fn estimate(&self, grid: &ResourceGrid, slot: u32) -> Result<Vec<Complex64>> {
        estimate_channel(grid, &self.map, slot, self.ids.cell_id)
    }

    /// MRC soft bits, descrambled. A non-positive `noise_var` (noiseless
    /// link) demaps with unit variance.
    pub fn demodulate<G, E>(&self, grids: &[G], est: &[E], noise_var: f64, slot: u32) -> Result<Vec<f32>>
    where
        G: AsRef<ResourceGrid>,
        E: AsRef<[Complex64]>,
    {
        let nv = if noise_var > 0.0 { noise_var } else { 1.0 };
        let mut llrs = demod_metrics(grids, est, &self.map, nv)?;
        descramble_llrs(&mut llrs, &self.ids.scrambling(slot));
        Ok(llrs)
    }

    /// De-rate-match, LDPC decode and CRC check.
    pub fn decode(&mut self, llrs: &[f32], mcs: usize) -> Result<DecodeOutcome> {
        tb_decode_with(&mut self.decoder, llrs, mcs, self.max_iterations)
    }

    /// Full chain from per-antenna time-domain samples.
    pub fn receive<S: AsRef<[Complex64]>>(
        &mut self,
        antennas: &[S],
        noise_var: f64,
        mcs: usize,
        slot: u32,
    ) -> Result<DecodeOutcome> {
        let grids = antennas.iter().map(|s| self.ofdm(s.as_ref())).collect::<Result<Vec<_>>>()?;
        let est = grids.iter().map(|g| self.estimate(g, slot)).collect::<Result<Vec<_>>>()?;
        let llrs = self.demodulate(&grids, &est, noise_var, slot)?;
        self.decode(&llrs, mcs)
    }
}
