use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};

/// Maps bit pairs `(b0, b1)` to `((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)`.
pub fn qpsk_modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "QPSK needs an even number of bits, got {}",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(2)
        .map(|p| {
            Complex64::new(
                (1.0 - 2.0 * p[0] as f64) * FRAC_1_SQRT_2,
                (1.0 - 2.0 * p[1] as f64) * FRAC_1_SQRT_2,
            )
        })
        .collect())
}

/// Soft bits of one QPSK symbol from its matched-filter output `z = h* y`
/// (summed over antennas). Positive means bit 0.
pub fn qpsk_llr(z: Complex64, noise_var: f64) -> Result<(f64, f64)> {
    if !(noise_var > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise variance must be positive, got {noise_var}"
        )));
    }
    let scale = 2.0 * SQRT_2 / noise_var;
    Ok((scale * z.re, scale * z.im))
}
