use super::gold::GoldSequence;

/// Identifiers that seed the PDSCH scrambling sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScramblingConfig {
    pub rnti: u16,
    /// Physical cell id, 0..=503.
    pub cell_id: u16,
    pub slot: u32,
}

impl Default for ScramblingConfig {
    fn default() -> Self {
        Self {
            rnti: 0x1234,
            cell_id: 0,
            slot: 0,
        }
    }
}

impl ScramblingConfig {
    /// `(rnti * 2^14 + slot * 2^9 + cell_id) mod 2^31`.
    pub fn c_init(&self) -> u32 {
        let v = ((self.rnti as u64) << 14) + ((self.slot as u64) << 9) + self.cell_id as u64;
        (v % (1u64 << 31)) as u32
    }
}

/// XORs `bits` with the scrambling sequence. Applying it twice is the identity.
pub fn scramble(bits: &[u8], cfg: &ScramblingConfig) -> Vec<u8> {
    bits.iter()
        .zip(GoldSequence::new(cfg.c_init()))
        .map(|(b, c)| b ^ c)
        .collect()
}

/// Descrambles soft values in place: flips the sign where the sequence is 1.
pub fn descramble_llrs(llrs: &mut [f32], cfg: &ScramblingConfig) {
    for (l, c) in llrs.iter_mut().zip(GoldSequence::new(cfg.c_init())) {
        if c == 1 {
            *l = -*l;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::gold::gold_sequence;
    use proptest::prelude::*;

    #[test]
    fn zero_input_gives_sequence() {
        let cfg = ScramblingConfig::default();
        assert_eq!(scramble(&[0; 200], &cfg), gold_sequence(cfg.c_init(), 200));
    }

    #[test]
    fn slots_differ() {
        let a = scramble(&[0; 100], &ScramblingConfig { slot: 0, ..Default::default() });
        let b = scramble(&[0; 100], &ScramblingConfig { slot: 1, ..Default::default() });
        assert_ne!(a, b);
    }

    #[test]
    fn soft_descramble_matches_hard() {
        let cfg = ScramblingConfig { slot: 3, ..Default::default() };
        let bits: Vec<u8> = (0..64).map(|i| (i % 3 == 0) as u8).collect();
        let tx = scramble(&bits, &cfg);
        let mut llrs: Vec<f32> = tx.iter().map(|&b| 1.0 - 2.0 * b as f32).collect();
        descramble_llrs(&mut llrs, &cfg);
        let back: Vec<u8> = llrs.iter().map(|&l| (l < 0.0) as u8).collect();
        assert_eq!(back, bits);
    }

    proptest! {
        #[test]
        fn involution(bits in proptest::collection::vec(0u8..2, 0..500), rnti: u16, slot in 0u32..20, cell in 0u16..504) {
            let cfg = ScramblingConfig { rnti, cell_id: cell, slot };
            prop_assert_eq!(scramble(&scramble(&bits, &cfg), &cfg), bits);
        }
    }
}
