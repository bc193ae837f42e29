//! Pilot-based channel estimation and maximal-ratio combining.
//!
//! Estimation runs in three steps: least-squares estimates at the pilot REs
//! of symbols 0 and 3, linear interpolation across frequency on those two
//! symbols, then linear interpolation in time for symbols 1 and 2.

use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::grid::{rs_sequence, GridMap, ResourceGrid, DATA_SYMBOLS};
use crate::modem::qpsk::qpsk_llr;

/// `h = y / x` per pilot.
pub fn ls_estimate(rx_rs: &[Complex64], known_rs: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(known_rs.len(), rx_rs.len())?;
    rx_rs
        .iter()
        .zip(known_rs)
        .map(|(&y, &x)| {
            if x.norm_sqr() == 0.0 {
                Err(Error::InvalidArgument("zero-valued pilot".into()))
            } else {
                Ok(y / x)
            }
        })
        .collect()
}

/// Linear interpolation between pilots, linear extrapolation past the
/// outermost ones from their nearest pair.
pub fn interpolate_freq(pilots: &[Complex64], positions: &[usize], n_sc: usize) -> Result<Vec<Complex64>> {
    check_len(positions.len(), pilots.len())?;
    if pilots.len() < 2 {
        return Err(Error::InvalidArgument("frequency interpolation needs at least two pilots".into()));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("pilot positions must be strictly increasing".into()));
    }
    let mut out = Vec::with_capacity(n_sc);
    let mut seg = 0;
    for k in 0..n_sc {
        while seg + 2 < positions.len() && k > positions[seg + 1] {
            seg += 1;
        }
        let (p0, p1) = (positions[seg] as f64, positions[seg + 1] as f64);
        let t = (k as f64 - p0) / (p1 - p0);
        out.push(pilots[seg] + (pilots[seg + 1] - pilots[seg]) * t);
    }
    Ok(out)
}

/// Symbols 1 and 2 from symbols 0 and 3, linear in symbol index.
pub fn interpolate_time(h0: &[Complex64], h3: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    check_len(h0.len(), h3.len())?;
    let h1 = h0.iter().zip(h3).map(|(&a, &b)| (2.0 * a + b) / 3.0).collect();
    let h2 = h0.iter().zip(h3).map(|(&a, &b)| (a + 2.0 * b) / 3.0).collect();
    Ok((h1, h2))
}

/// Full estimate over the mini-slot for one antenna, symbol-major like the grid.
pub fn estimate_channel(rx: &ResourceGrid, map: &GridMap, slot: u32, cell_id: u16) -> Result<Vec<Complex64>> {
    check_len(map.n_sc(), rx.n_sc())?;
    let n_sc = map.n_sc();
    let mut per_symbol = Vec::with_capacity(2);
    for symbol in [0usize, 3] {
        let pos = map.rs_subcarriers(symbol)?;
        let known = rs_sequence(slot, symbol, cell_id, pos.len())?;
        let rx_rs: Vec<Complex64> = pos.iter().map(|&k| rx.get(symbol, k)).collect();
        let ls = ls_estimate(&rx_rs, &known)?;
        per_symbol.push(interpolate_freq(&ls, pos, n_sc)?);
    }
    let (h1, h2) = interpolate_time(&per_symbol[0], &per_symbol[1])?;
    let mut out = Vec::with_capacity(DATA_SYMBOLS * n_sc);
    out.extend_from_slice(&per_symbol[0]);
    out.extend(h1);
    out.extend(h2);
    out.extend_from_slice(&per_symbol[1]);
    Ok(out)
}

/// Soft bits for every PDSCH RE in demapping order (`2 * |PDSCH|` values).
///
/// Per RE the antennas are combined as `z = sum_a conj(h_a) y_a`, then
/// demapped with `noise_var`.
pub fn demod_metrics<G, E>(rx_grids: &[G], est: &[E], map: &GridMap, noise_var: f64) -> Result<Vec<f32>>
where
    G: AsRef<ResourceGrid>,
    E: AsRef<[Complex64]>,
{
    if rx_grids.is_empty() {
        return Err(Error::InvalidArgument("no receive antennas".into()));
    }
    check_len(rx_grids.len(), est.len())?;
    for (g, h) in rx_grids.iter().zip(est) {
        check_len(map.n_sc(), g.as_ref().n_sc())?;
        check_len(DATA_SYMBOLS * map.n_sc(), h.as_ref().len())?;
    }
    let mut llrs = Vec::with_capacity(map.pdsch_bits());
    for &idx in map.pdsch_indices() {
        let z: Complex64 = rx_grids
            .iter()
            .zip(est)
            .map(|(g, h)| h.as_ref()[idx].conj() * g.as_ref().as_slice()[idx])
            .sum();
        let (l0, l1) = qpsk_llr(z, noise_var)?;
        llrs.push(l0 as f32);
        llrs.push(l1 as f32);
    }
    Ok(llrs)
}

impl AsRef<ResourceGrid> for ResourceGrid {
    fn as_ref(&self) -> &ResourceGrid {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, ChannelRealization, SimRng, SnrSpec};
    use crate::grid::{build_minislot_map, map_grid};
    use crate::modem::qpsk::qpsk_modulate;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ls_examples() {
        let x = vec![c(0.6, 0.8), c(-1.0, 0.0), c(0.0, 1.0)];
        let y: Vec<Complex64> = x.iter().map(|v| v * 2.0).collect();
        assert!(ls_estimate(&y, &x).unwrap().iter().all(|h| (h - 2.0).norm() < 1e-12));
        let h = c(0.3, -1.2);
        let y: Vec<Complex64> = x.iter().map(|v| v * h).collect();
        assert!(ls_estimate(&y, &x).unwrap().iter().all(|e| (e - h).norm() < 1e-12));
        assert!(ls_estimate(&[c(1.0, 0.0)], &[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn ls_noise_statistics() {
        let mut rng = SimRng::seed_from_u64(7);
        let h = c(0.8, -0.4);
        let snr = SnrSpec::db(5.0);
        let (mut sum, mut sq, mut n) = (Complex64::default(), 0.0, 0usize);
        for _ in 0..10_000 {
            let x = rs_sequence(0, 0, 0, 2).unwrap();
            let mut grid = ResourceGrid::zeros(12);
            grid.symbol_mut(0)[0] = x[0];
            let mut ch = ChannelRealization::flat(12, &[h]).unwrap();
            let y = apply_channel(&grid, &mut ch, snr, &mut rng).unwrap();
            let est = ls_estimate(&[y[0].get(0, 0)], &x[..1]).unwrap()[0];
            sum += est;
            sq += (est - h).norm_sqr();
            n += 1;
        }
        let mean = sum / n as f64;
        assert!((mean - h).norm() < 0.02, "mean {mean}");
        let var = sq / n as f64;
        assert!((var / snr.noise_var() - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn freq_interpolation() {
        let ones = interpolate_freq(&[c(1.0, 0.0), c(1.0, 0.0)], &[0, 6], 7).unwrap();
        assert!(ones.iter().all(|v| (v - 1.0).norm() < 1e-12));
        let ramp = interpolate_freq(&[c(0.0, 0.0), c(6.0, 0.0)], &[0, 6], 9).unwrap();
        for (k, v) in ramp.iter().enumerate() {
            assert!((v - k as f64).norm() < 1e-12);
        }
        // Pilots at 3, 9, 15 of the affine function 2 + 0.5k; subcarriers 0..2 extrapolated.
        let f = |k: f64| c(2.0 + 0.5 * k, -k);
        let est = interpolate_freq(&[f(3.0), f(9.0), f(15.0)], &[3, 9, 15], 18).unwrap();
        for (k, v) in est.iter().enumerate() {
            assert!((v - f(k as f64)).norm() < 1e-12, "k={k}");
        }
        assert!(interpolate_freq(&[c(1.0, 0.0)], &[0], 4).is_err());
        assert!(interpolate_freq(&[c(1.0, 0.0), c(1.0, 0.0)], &[6, 0], 4).is_err());
    }

    #[test]
    fn time_interpolation() {
        let (h1, h2) = interpolate_time(&[c(1.0, 0.0)], &[c(4.0, 0.0)]).unwrap();
        assert!((h1[0] - 2.0).norm() < 1e-12 && (h2[0] - 3.0).norm() < 1e-12);
        let h = c(0.2, 0.9);
        let (h1, h2) = interpolate_time(&[h], &[h]).unwrap();
        assert!((h1[0] - h).norm() < 1e-12 && (h2[0] - h).norm() < 1e-12);
        assert!(interpolate_time(&[h], &[]).is_err());
    }

    #[test]
    fn exact_for_affine_block_channel() {
        let mut rng = SimRng::seed_from_u64(8);
        let map = build_minislot_map(25).unwrap();
        let n_sc = map.n_sc();
        for _ in 0..10 {
            let a = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let b = c(rng.random_range(-0.01..0.01), rng.random_range(-0.01..0.01));
            let resp: Vec<Complex64> = (0..n_sc).map(|k| a + b * k as f64).collect();
            let mut ch = ChannelRealization::from_responses(n_sc, vec![resp.repeat(4)]).unwrap();
            let bits: Vec<u8> = (0..1700).map(|_| rng.random_range(0..2)).collect();
            let grid = map_grid(&qpsk_modulate(&bits).unwrap(), &map, 2, 9).unwrap();
            let y = apply_channel(&grid, &mut ch, SnrSpec::noiseless(), &mut rng).unwrap();
            let est = estimate_channel(&y[0], &map, 2, 9).unwrap();
            for &idx in map.pdsch_indices() {
                assert!((est[idx] - ch.response(0)[idx]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn mrc_metrics() {
        let map = build_minislot_map(25).unwrap();
        let bits: Vec<u8> = (0..1700).map(|i| ((i * 5) % 7 < 3) as u8).collect();
        let grid = map_grid(&qpsk_modulate(&bits).unwrap(), &map, 0, 0).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 1200];
        let single = demod_metrics(&[grid.clone()], &[ones.clone()], &map, 0.5).unwrap();
        assert_eq!(single.len(), 1700);
        for (l, &b) in single.iter().zip(&bits) {
            assert!((l.abs() - 4.0).abs() < 1e-5);
            assert_eq!((*l < 0.0) as u8, b);
        }
        let dual = demod_metrics(&[grid.clone(), grid.clone()], &[ones.clone(), ones.clone()], &map, 0.5).unwrap();
        for (d, s) in dual.iter().zip(&single) {
            assert!((d - 2.0 * s).abs() < 1e-4);
        }
        assert!(demod_metrics(&[grid.clone()], &[ones.clone(), ones], &map, 0.5).is_err());
        assert!(demod_metrics::<ResourceGrid, Vec<Complex64>>(&[], &[], &map, 0.5).is_err());
    }

    #[test]
    fn mrc_gain_dominates_each_branch() {
        let mut rng = SimRng::seed_from_u64(10);
        for _ in 0..1000 {
            let h: Vec<Complex64> = (0..2).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
            let combined: f64 = h.iter().map(|x| x.norm_sqr()).sum();
            let best = h.iter().map(|x| x.norm_sqr()).fold(0.0, f64::max);
            assert!(combined >= best);
        }
    }
}
