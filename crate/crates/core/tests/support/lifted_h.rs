//! Parity-check matrix of base graph 2 lifted straight from the data file,
//! without going through the library's parser or encoder.

const BG2_TEXT: &str = include_str!("../../data/bg2.txt");

/// Lifting-set index of `z`: `z = a * 2^j` for the set's base value `a`.
fn set_of(z: usize) -> usize {
    const BASES: [usize; 8] = [2, 3, 5, 7, 9, 11, 13, 15];
    let mut odd = z;
    while odd.is_multiple_of(2) && !BASES.contains(&odd) {
        odd /= 2;
    }
    BASES.iter().position(|&a| a == odd).unwrap_or_else(|| panic!("{z} is not a lifting size"))
}

/// Each parity check as the list of codeword positions it covers.
pub struct LiftedH {
    pub z: usize,
    pub checks: Vec<Vec<usize>>,
}

impl LiftedH {
    pub fn new(z: usize) -> Self {
        let wanted = format!("[set {}]", set_of(z));
        let rows: Vec<Vec<(usize, usize)>> = BG2_TEXT
            .lines()
            .skip_while(|l| l.trim() != wanted)
            .skip(1)
            .take_while(|l| !l.starts_with('['))
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|pair| {
                        let (c, s) = pair.split_once(':').unwrap();
                        (c.parse().unwrap(), s.parse().unwrap())
                    })
                    .collect()
            })
            .collect();
        assert_eq!(rows.len(), 42);
        let mut checks = Vec::with_capacity(42 * z);
        for row in &rows {
            for r in 0..z {
                checks.push(row.iter().map(|&(c, s)| c * z + (r + s) % z).collect());
            }
        }
        Self { z, checks }
    }

    pub fn columns(&self) -> usize {
        52 * self.z
    }

    /// Number of unsatisfied checks for a full `52 z` codeword.
    pub fn unsatisfied(&self, cw: &[u8]) -> usize {
        assert_eq!(cw.len(), self.columns());
        self.checks.iter().filter(|c| c.iter().fold(0u8, |acc, &i| acc ^ cw[i]) != 0).count()
    }
}
