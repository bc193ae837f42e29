//! Length-31 Gold sequence generator.

/// Output offset of the generator.
pub const NC: usize = 1600;

const MASK31: u32 = 0x7fff_ffff;

/// Iterator over `c(n)` for a given `c_init` (only the low 31 bits are used).
#[derive(Debug, Clone)]
pub struct GoldSequence {
    x1: u32,
    x2: u32,
}

impl GoldSequence {
    pub fn new(c_init: u32) -> Self {
        let mut g = Self {
            x1: 1,
            x2: c_init & MASK31,
        };
        for _ in 0..NC {
            g.step();
        }
        g
    }

    #[inline]
    fn step(&mut self) {
        // Bit i of each register holds x(n + i).
        let f1 = (self.x1 ^ (self.x1 >> 3)) & 1;
        let f2 = (self.x2 ^ (self.x2 >> 1) ^ (self.x2 >> 2) ^ (self.x2 >> 3)) & 1;
        self.x1 = (self.x1 >> 1) | (f1 << 30);
        self.x2 = (self.x2 >> 1) | (f2 << 30);
    }
}

impl Iterator for GoldSequence {
    type Item = u8;

    #[inline]
    fn next(&mut self) -> Option<u8> {
        let c = ((self.x1 ^ self.x2) & 1) as u8;
        self.step();
        Some(c)
    }
}

/// First `len` bits of the Gold sequence seeded with `c_init`.
pub fn gold_sequence(c_init: u32, len: usize) -> Vec<u8> {
    GoldSequence::new(c_init).take(len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct transcription of the two shift-register recurrences.
    fn lfsr_oracle(c_init: u32, len: usize) -> Vec<u8> {
        let total = NC + len + 31;
        let mut x1 = vec![0u8; total];
        let mut x2 = vec![0u8; total];
        x1[0] = 1;
        for i in 0..31 {
            x2[i] = ((c_init >> i) & 1) as u8;
        }
        for n in 0..total - 31 {
            x1[n + 31] = (x1[n + 3] + x1[n]) % 2;
            x2[n + 31] = (x2[n + 3] + x2[n + 2] + x2[n + 1] + x2[n]) % 2;
        }
        (0..len).map(|n| (x1[n + NC] + x2[n + NC]) % 2).collect()
    }

    #[test]
    fn matches_oracle() {
        for c_init in [0u32, 1, 0x1234_5678 & MASK31, MASK31, 500] {
            assert_eq!(gold_sequence(c_init, 300), lfsr_oracle(c_init, 300), "c_init={c_init}");
        }
    }

    #[test]
    fn c_init_one_first_bits() {
        // Frozen from the oracle above.
        let frozen = lfsr_oracle(1, 8);
        assert_eq!(gold_sequence(1, 8), frozen);
    }

    #[test]
    fn zero_seed_is_shifted_x1() {
        let c = gold_sequence(0, 64);
        let mut x1 = vec![0u8; NC + 64 + 31];
        x1[0] = 1;
        for n in 0..NC + 64 {
            x1[n + 31] = x1[n + 3] ^ x1[n];
        }
        assert_eq!(c, x1[NC..NC + 64].to_vec());
    }

    #[test]
    fn deterministic() {
        assert_eq!(gold_sequence(77, 100), gold_sequence(77, 100));
        assert_ne!(gold_sequence(77, 100), gold_sequence(78, 100));
    }
}
