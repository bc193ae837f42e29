//! AWGN and block-fading Rayleigh channels with one or two receive antennas.
//!
//! Channels act on the resource grid, one complex gain per RE. Over a
//! 4-symbol mini-slot the fading models are block-constant, which makes this
//! equivalent to time-domain convolution followed by OFDM demodulation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_len, Error, Result};
use crate::grid::{ResourceGrid, DATA_SYMBOLS};
use crate::modem::ofdm::subcarrier_bin;

/// Generator used by every stochastic component. Seeded explicitly so that
/// runs can be replayed bit for bit.
pub type SimRng = ChaCha8Rng;

/// Generator for `worker` derived from a base seed: `base_seed ^ worker`,
/// on ChaCha stream `stream` (one stream per sweep point).
pub fn worker_rng(base_seed: u64, worker: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(base_seed ^ worker);
    rng.set_stream(stream);
    rng
}

/// Es/N0 per RE per receive antenna. `+inf` disables noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec {
    pub es_n0_db: f64,
}

impl SnrSpec {
    pub fn db(es_n0_db: f64) -> Self {
        Self { es_n0_db }
    }

    pub fn noiseless() -> Self {
        Self {
            es_n0_db: f64::INFINITY,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.es_n0_db == f64::INFINITY
    }

    /// Noise variance per RE for a unit-energy constellation.
    pub fn noise_var(&self) -> f64 {
        10f64.powf(-self.es_n0_db / 10.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    Awgn,
    RayleighFlatBlock,
    /// Tapped delay line with this many sample-spaced taps.
    RayleighSelectiveBlock(usize),
}

impl std::fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChannelModel::Awgn => write!(f, "awgn"),
            ChannelModel::RayleighFlatBlock => write!(f, "rayleigh-flat"),
            ChannelModel::RayleighSelectiveBlock(l) => write!(f, "rayleigh-fs:{l}"),
        }
    }
}

impl std::str::FromStr for ChannelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "awgn" => Ok(ChannelModel::Awgn),
            "rayleigh-flat" => Ok(ChannelModel::RayleighFlatBlock),
            _ => {
                let taps = s
                    .strip_prefix("rayleigh-fs:")
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown channel model {s:?}")))?;
                if taps == 0 {
                    return Err(Error::InvalidArgument("tap count must be at least 1".into()));
                }
                Ok(ChannelModel::RayleighSelectiveBlock(taps))
            }
        }
    }
}

/// Per-antenna frequency response over the mini-slot and the noise variance
/// the receiver is told about.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n_sc: usize,
    /// `h[a][l * n_sc + k]`.
    h: Vec<Vec<Complex64>>,
    pub noise_var: f64,
}

impl ChannelRealization {
    /// Builds a realization from explicit responses, each `4 * n_sc` long.
    pub fn from_responses(n_sc: usize, h: Vec<Vec<Complex64>>) -> Result<Self> {
        if h.is_empty() || h.len() > 2 {
            return Err(Error::InvalidArgument(format!("{} receive antennas unsupported", h.len())));
        }
        for a in &h {
            check_len(DATA_SYMBOLS * n_sc, a.len())?;
        }
        Ok(Self { n_sc, h, noise_var: 0.0 })
    }

    /// Same response on every RE of each antenna.
    pub fn flat(n_sc: usize, gains: &[Complex64]) -> Result<Self> {
        Self::from_responses(n_sc, gains.iter().map(|&g| vec![g; DATA_SYMBOLS * n_sc]).collect())
    }

    pub fn n_rx(&self) -> usize {
        self.h.len()
    }

    pub fn n_sc(&self) -> usize {
        self.n_sc
    }

    pub fn response(&self, antenna: usize) -> &[Complex64] {
        &self.h[antenna]
    }

    pub fn at(&self, antenna: usize, symbol: usize, sc: usize) -> Complex64 {
        self.h[antenna][symbol * self.n_sc + sc]
    }
}

fn complex_gaussian(rng: &mut impl Rng, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Normalized power-delay profile `exp(-l)` over `taps` taps.
pub fn tap_powers(taps: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..taps).map(|l| (-(l as f64)).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Draws one channel realization for a mini-slot of `n_sc` subcarriers.
pub fn draw_channel(
    model: ChannelModel,
    n_rx: usize,
    n_sc: usize,
    fft_size: usize,
    rng: &mut impl Rng,
) -> Result<ChannelRealization> {
    if !(1..=2).contains(&n_rx) {
        return Err(Error::InvalidArgument(format!("{n_rx} receive antennas unsupported")));
    }
    match model {
        ChannelModel::Awgn => ChannelRealization::flat(n_sc, &vec![Complex64::new(1.0, 0.0); n_rx]),
        ChannelModel::RayleighFlatBlock => {
            let gains: Vec<Complex64> = (0..n_rx).map(|_| complex_gaussian(rng, 1.0)).collect();
            ChannelRealization::flat(n_sc, &gains)
        }
        ChannelModel::RayleighSelectiveBlock(taps) => {
            if taps == 0 {
                return Err(Error::InvalidArgument("tap count must be at least 1".into()));
            }
            let powers = tap_powers(taps);
            let bins: Vec<usize> = (0..n_sc).map(|k| subcarrier_bin(k, n_sc, fft_size)).collect();
            let h = (0..n_rx)
                .map(|_| {
                    let g: Vec<Complex64> = powers.iter().map(|&p| complex_gaussian(rng, p)).collect();
                    let freq: Vec<Complex64> = bins
                        .iter()
                        .map(|&bin| {
                            g.iter()
                                .enumerate()
                                .map(|(l, &gl)| {
                                    let phase = -2.0 * std::f64::consts::PI * (l * bin) as f64 / fft_size as f64;
                                    gl * Complex64::from_polar(1.0, phase)
                                })
                                .sum()
                        })
                        .collect();
                    freq.repeat(DATA_SYMBOLS)
                })
                .collect();
            ChannelRealization::from_responses(n_sc, h)
        }
    }
}

/// `Y[a] = H[a] * X + N[a]`, with independent noise per antenna and RE.
/// Records the noise variance in `ch`.
pub fn apply_channel(
    grid: &ResourceGrid,
    ch: &mut ChannelRealization,
    snr: SnrSpec,
    rng: &mut impl Rng,
) -> Result<Vec<ResourceGrid>> {
    check_len(ch.n_sc, grid.n_sc())?;
    let noise_var = if snr.is_noiseless() { 0.0 } else { snr.noise_var() };
    ch.noise_var = noise_var;
    ch.h.iter()
        .map(|h| {
            let data = grid
                .as_slice()
                .iter()
                .zip(h)
                .map(|(&x, &g)| {
                    let y = g * x;
                    if noise_var > 0.0 {
                        y + complex_gaussian(rng, noise_var)
                    } else {
                        y
                    }
                })
                .collect();
            ResourceGrid::from_vec(grid.n_sc(), data)
        })
        .collect()
}

/// Adds complex white noise of variance `noise_var` to time-domain samples.
pub fn add_awgn(samples: &mut [Complex64], noise_var: f64, rng: &mut impl Rng) {
    if noise_var > 0.0 {
        for s in samples {
            *s += complex_gaussian(rng, noise_var);
        }
    }
}
