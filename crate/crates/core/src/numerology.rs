//! OFDM and mini-slot constants, and the MCS/TBS table.
//!
//! Everything here is immutable after construction and can be shared freely
//! between workers.

use crate::error::{Error, Result};

/// Transport block sizes (bits) for MCS 0..=14 on a 4-symbol mini-slot, QPSK.
pub const URLLC_TBS: [usize; 15] = [
    48, 64, 72, 104, 128, 160, 192, 256, 320, 432, 504, 640, 768, 888, 984,
];

/// Modulation order used by every MCS entry (QPSK).
pub const QPSK_ORDER: usize = 2;

/// Number of transmission layers (single antenna port).
pub const LAYERS: usize = 1;

/// Highest supported MCS index.
pub const MAX_MCS: usize = 14;

pub const SUBCARRIERS_PER_RB: usize = 12;

/// OFDM numerology. Only the 15 kHz / 512-point configuration is supported;
/// the number of resource blocks may vary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmConfig {
    pub subcarrier_spacing_hz: f64,
    pub fft_size: usize,
    pub n_rb: usize,
    pub sample_rate_hz: f64,
    pub cp_first: usize,
    pub cp_other: usize,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self {
            subcarrier_spacing_hz: 15_000.0,
            fft_size: 512,
            n_rb: 25,
            sample_rate_hz: 7_680_000.0,
            cp_first: 40,
            cp_other: 36,
        }
    }
}

impl OfdmConfig {
    /// Default numerology with `n_rb` resource blocks.
    pub fn with_n_rb(n_rb: usize) -> Result<Self> {
        let cfg = Self {
            n_rb,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rb == 0 || self.occupied_subcarriers() >= self.fft_size {
            return Err(Error::InvalidArgument(format!(
                "{} RBs do not fit a {}-point FFT",
                self.n_rb, self.fft_size
            )));
        }
        if self.cp_first == 0 || self.cp_other == 0 {
            return Err(Error::InvalidArgument("cyclic prefix must be positive".into()));
        }
        let expected_rate = self.fft_size as f64 * self.subcarrier_spacing_hz;
        if (self.sample_rate_hz - expected_rate).abs() > 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "sample rate {} Hz does not match fft_size x spacing = {} Hz",
                self.sample_rate_hz, expected_rate
            )));
        }
        Ok(())
    }

    pub fn occupied_subcarriers(&self) -> usize {
        self.n_rb * SUBCARRIERS_PER_RB
    }

    /// Cyclic prefix length of symbol `l` within a mini-slot.
    pub fn cp_len(&self, symbol_index: usize) -> usize {
        if symbol_index == 0 {
            self.cp_first
        } else {
            self.cp_other
        }
    }

    /// Samples in symbol `l` including its cyclic prefix.
    pub fn symbol_len(&self, symbol_index: usize) -> usize {
        self.fft_size + self.cp_len(symbol_index)
    }

    /// Samples of a 14-symbol transmission unit (two 7-symbol halves, each
    /// led by a long cyclic prefix). 7680 at the default numerology, i.e. 1 ms.
    pub fn unit_samples(&self, tx_unit_symbols: usize) -> usize {
        (0..tx_unit_symbols).map(|l| self.symbol_len(l % 7)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Platform {
    /// Only the four data symbols exist per mini-slot.
    Simulation,
    /// Each mini-slot travels in a 14-symbol unit whose last ten symbols idle.
    AirEmulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiniSlotConfig {
    pub data_symbols: usize,
    pub tx_unit_symbols: usize,
    pub platform: Platform,
}

impl MiniSlotConfig {
    pub const DATA_SYMBOLS: usize = 4;
    pub const TX_UNIT_SYMBOLS: usize = 14;

    pub fn new(platform: Platform) -> Self {
        Self {
            data_symbols: Self::DATA_SYMBOLS,
            tx_unit_symbols: Self::TX_UNIT_SYMBOLS,
            platform,
        }
    }

    /// Number of time-domain samples that carry one mini-slot on this platform.
    pub fn samples_per_minislot(&self, ofdm: &OfdmConfig) -> usize {
        match self.platform {
            Platform::Simulation => (0..self.data_symbols).map(|l| ofdm.symbol_len(l)).sum(),
            Platform::AirEmulation => ofdm.unit_samples(self.tx_unit_symbols),
        }
    }
}

impl Default for MiniSlotConfig {
    fn default() -> Self {
        Self::new(Platform::Simulation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub index: usize,
    pub modulation_order: usize,
    pub tbs: usize,
    pub layers: usize,
}

impl McsEntry {
    /// Effective code rate `(tbs + 16) / E` for a resource budget of `coded_bits`.
    pub fn code_rate(&self, coded_bits: usize) -> f64 {
        (self.tbs + crate::coding::CRC_LEN) as f64 / coded_bits as f64
    }
}

/// Transport block size and modulation order for `mcs`.
pub fn tbs_lookup(mcs: usize) -> Result<(usize, usize)> {
    URLLC_TBS
        .get(mcs)
        .map(|&tbs| (tbs, QPSK_ORDER))
        .ok_or(Error::McsOutOfRange(mcs))
}

pub fn mcs_entry(mcs: usize) -> Result<McsEntry> {
    let (tbs, modulation_order) = tbs_lookup(mcs)?;
    Ok(McsEntry {
        index: mcs,
        modulation_order,
        tbs,
        layers: LAYERS,
    })
}

pub fn mcs_table() -> Vec<McsEntry> {
    (0..=MAX_MCS).map(|m| mcs_entry(m).expect("index in range")).collect()
}

/// Information bits `N_RE * R * Q_m * v`, without any quantization.
pub fn n_info(n_re: usize, rate: f64, q_m: usize, layers: usize) -> Result<f64> {
    if n_re == 0 || q_m == 0 || layers == 0 {
        return Err(Error::InvalidArgument(
            "n_info inputs must be positive".into(),
        ));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "code rate {rate} outside (0, 1]"
        )));
    }
    Ok(n_re as f64 * rate * q_m as f64 * layers as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tbs_examples() {
        assert_eq!(tbs_lookup(0).unwrap(), (48, 2));
        assert_eq!(tbs_lookup(9).unwrap(), (432, 2));
        assert_eq!(tbs_lookup(14).unwrap(), (984, 2));
        assert_eq!(tbs_lookup(15), Err(Error::McsOutOfRange(15)));
    }

    #[test]
    fn tbs_strictly_increasing_and_qpsk() {
        let table = mcs_table();
        assert_eq!(table.len(), 15);
        for w in table.windows(2) {
            assert!(w[0].tbs < w[1].tbs);
        }
        assert!(table.iter().all(|e| e.modulation_order == 2 && e.layers == 1));
    }

    #[test]
    fn code_rate_below_one_at_default_bandwidth() {
        for e in mcs_table() {
            assert!(e.tbs + 16 <= 1700);
            assert!(e.code_rate(1700) < 1.0);
        }
    }

    #[test]
    fn n_info_examples() {
        assert_eq!(n_info(100, 0.5, 2, 1).unwrap(), 100.0);
        assert_eq!(n_info(850, 1.0, 2, 1).unwrap(), 1700.0);
        assert!((n_info(850, 0.1172, 2, 1).unwrap() - 199.24).abs() < 1e-9);
        assert!(n_info(0, 0.5, 2, 1).is_err());
        assert!(n_info(100, 0.0, 2, 1).is_err());
        assert!(n_info(100, 1.5, 2, 1).is_err());
    }

    #[test]
    fn ofdm_defaults() {
        let cfg = OfdmConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.occupied_subcarriers(), 300);
        assert_eq!(cfg.unit_samples(14), 7680);
        let slot = MiniSlotConfig::new(Platform::Simulation);
        assert_eq!(slot.samples_per_minislot(&cfg), 4 * 512 + 40 + 3 * 36);
        let air = MiniSlotConfig::new(Platform::AirEmulation);
        assert_eq!(air.samples_per_minislot(&cfg), 7680);
        assert!(OfdmConfig::with_n_rb(43).is_err());
        assert!(OfdmConfig::with_n_rb(0).is_err());
    }
}
