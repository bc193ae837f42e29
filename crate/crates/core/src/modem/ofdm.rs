//! OFDM modulation with a unitary 512-point transform.
//!
//! Occupied subcarrier `k` (0..12*n_rb) maps to FFT bin `N - half + k` for the
//! lower half and `1 + k - half` for the upper half; the DC bin stays empty.
//! Transforms are scaled by `1/sqrt(N)` so that the power of a grid symbol
//! equals the power of its time-domain samples.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, Error, Result};
use crate::numerology::OfdmConfig;

/// Time-domain baseband samples.
#[derive(Debug, Clone, PartialEq)]
pub struct IqSamples {
    pub samples: Vec<Complex64>,
    pub sample_rate_hz: f64,
}

/// FFT bin carrying occupied subcarrier `k`.
pub fn subcarrier_bin(k: usize, occupied: usize, fft_size: usize) -> usize {
    let half = occupied / 2;
    if k < half {
        fft_size - half + k
    } else {
        1 + k - half
    }
}

/// OFDM modulator/demodulator with cached transform plans.
pub struct OfdmModem {
    cfg: OfdmConfig,
    ifft: Arc<dyn Fft<f64>>,
    fft: Arc<dyn Fft<f64>>,
    bins: Vec<usize>,
    scale: f64,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for OfdmModem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OfdmModem").field("cfg", &self.cfg).finish()
    }
}

impl OfdmModem {
    pub fn new(cfg: OfdmConfig) -> Result<Self> {
        cfg.validate()?;
        let mut planner = FftPlanner::new();
        let ifft = planner.plan_fft_inverse(cfg.fft_size);
        let fft = planner.plan_fft_forward(cfg.fft_size);
        let scratch_len = ifft.get_inplace_scratch_len().max(fft.get_inplace_scratch_len());
        let occupied = cfg.occupied_subcarriers();
        Ok(Self {
            bins: (0..occupied).map(|k| subcarrier_bin(k, occupied, cfg.fft_size)).collect(),
            scale: 1.0 / (cfg.fft_size as f64).sqrt(),
            buf: vec![Complex64::default(); cfg.fft_size],
            scratch: vec![Complex64::default(); scratch_len],
            cfg,
            ifft,
            fft,
        })
    }

    pub fn config(&self) -> &OfdmConfig {
        &self.cfg
    }

    /// Appends the CP-prefixed samples of one symbol to `out`.
    pub fn modulate_into(&mut self, grid_symbol: &[Complex64], symbol_index: usize, out: &mut Vec<Complex64>) -> Result<()> {
        check_len(self.bins.len(), grid_symbol.len())?;
        self.buf.fill(Complex64::default());
        for (&bin, &x) in self.bins.iter().zip(grid_symbol) {
            self.buf[bin] = x;
        }
        self.ifft.process_with_scratch(&mut self.buf, &mut self.scratch);
        let n = self.cfg.fft_size;
        let cp = self.cfg.cp_len(symbol_index);
        out.reserve(n + cp);
        out.extend(self.buf[n - cp..].iter().map(|x| x * self.scale));
        out.extend(self.buf.iter().map(|x| x * self.scale));
        Ok(())
    }

    pub fn modulate(&mut self, grid_symbol: &[Complex64], symbol_index: usize) -> Result<IqSamples> {
        let mut samples = Vec::new();
        self.modulate_into(grid_symbol, symbol_index, &mut samples)?;
        Ok(IqSamples {
            samples,
            sample_rate_hz: self.cfg.sample_rate_hz,
        })
    }

    /// Strips the CP, transforms, and writes the occupied bins to `out`.
    pub fn demodulate_into(&mut self, samples: &[Complex64], symbol_index: usize, out: &mut [Complex64]) -> Result<()> {
        let cp = self.cfg.cp_len(symbol_index);
        check_len(self.cfg.fft_size + cp, samples.len())?;
        check_len(self.bins.len(), out.len())?;
        self.buf.copy_from_slice(&samples[cp..]);
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (o, &bin) in out.iter_mut().zip(&self.bins) {
            *o = self.buf[bin] * self.scale;
        }
        Ok(())
    }

    pub fn demodulate(&mut self, samples: &IqSamples, symbol_index: usize) -> Result<Vec<Complex64>> {
        if samples.sample_rate_hz != self.cfg.sample_rate_hz {
            return Err(Error::InvalidArgument(format!(
                "sample rate {} Hz does not match {} Hz",
                samples.sample_rate_hz, self.cfg.sample_rate_hz
            )));
        }
        let mut out = vec![Complex64::default(); self.bins.len()];
        self.demodulate_into(&samples.samples, symbol_index, &mut out)?;
        Ok(out)
    }
}

/// One-shot modulation of a single grid symbol.
pub fn ofdm_modulate(grid_symbol: &[Complex64], cfg: &OfdmConfig, symbol_index: usize) -> Result<IqSamples> {
    OfdmModem::new(*cfg)?.modulate(grid_symbol, symbol_index)
}

/// One-shot demodulation of a single CP-prefixed symbol.
pub fn ofdm_demodulate(samples: &IqSamples, cfg: &OfdmConfig, symbol_index: usize) -> Result<Vec<Complex64>> {
    OfdmModem::new(*cfg)?.demodulate(samples, symbol_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_symbol(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    }

    fn power(x: &[Complex64]) -> f64 {
        x.iter().map(|v| v.norm_sqr()).sum()
    }

    #[test]
    fn bins_skip_dc() {
        let bins: Vec<usize> = (0..300).map(|k| subcarrier_bin(k, 300, 512)).collect();
        assert_eq!(bins[0], 362);
        assert_eq!(bins[149], 511);
        assert_eq!(bins[150], 1);
        assert_eq!(bins[299], 150);
        assert!(!bins.contains(&0));
    }

    #[test]
    fn round_trip_and_parseval() {
        let cfg = OfdmConfig::default();
        let mut modem = OfdmModem::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for l in 0..4 {
            let g = random_symbol(300, &mut rng);
            let iq = modem.modulate(&g, l).unwrap();
            assert_eq!(iq.samples.len(), 512 + cfg.cp_len(l));
            let body = &iq.samples[cfg.cp_len(l)..];
            assert!((power(body) - power(&g)).abs() < 1e-9 * power(&g));
            let back = modem.demodulate(&iq, l).unwrap();
            let err: f64 = back.iter().zip(&g).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / 300.0;
            assert!(err.sqrt() < 1e-9);
        }
    }

    #[test]
    fn single_tone_constant_modulus() {
        let cfg = OfdmConfig::default();
        let mut g = vec![Complex64::default(); 300];
        g[17] = Complex64::new(1.0, 0.0);
        let iq = ofdm_modulate(&g, &cfg, 1).unwrap();
        let expected = 1.0 / 512f64.sqrt();
        assert!(iq.samples.iter().all(|x| (x.norm() - expected).abs() < 1e-12));
    }

    #[test]
    fn noise_power_preserved() {
        let cfg = OfdmConfig::default();
        let mut modem = OfdmModem::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mut p_in, mut p_out) = (0.0, 0.0);
        for _ in 0..400 {
            let s = random_symbol(512 + 36, &mut rng);
            let iq = IqSamples { samples: s, sample_rate_hz: cfg.sample_rate_hz };
            let out = modem.demodulate(&iq, 1).unwrap();
            p_in += power(&iq.samples[36..]) / 512.0;
            p_out += power(&out) / 300.0;
        }
        assert!((p_out / p_in - 1.0).abs() < 0.01, "ratio {}", p_out / p_in);
    }

    #[test]
    fn cyclic_shift_is_phase_ramp() {
        let cfg = OfdmConfig::default();
        let mut modem = OfdmModem::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_symbol(300, &mut rng);
        let iq = modem.modulate(&g, 1).unwrap();
        // Start the FFT window 5 samples early, inside the CP.
        let d = 5;
        let shifted = IqSamples {
            samples: std::iter::repeat(Complex64::default())
                .take(d)
                .chain(iq.samples[..iq.samples.len() - d].iter().copied())
                .collect(),
            sample_rate_hz: cfg.sample_rate_hz,
        };
        let out = modem.demodulate(&shifted, 1).unwrap();
        for k in 0..300 {
            assert!((out[k].norm() - g[k].norm()).abs() < 1e-9);
            let bin = subcarrier_bin(k, 300, 512) as f64;
            let ramp = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * bin * d as f64 / 512.0);
            assert!((out[k] - g[k] * ramp).norm() < 1e-9);
        }
    }

    #[test]
    fn wrong_lengths() {
        let cfg = OfdmConfig::default();
        assert!(ofdm_modulate(&[Complex64::default(); 10], &cfg, 0).is_err());
        let iq = IqSamples { samples: vec![Complex64::default(); 500], sample_rate_hz: cfg.sample_rate_hz };
        assert!(ofdm_demodulate(&iq, &cfg, 0).is_err());
    }
}
