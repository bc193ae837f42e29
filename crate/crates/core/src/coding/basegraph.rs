//! Base graph 2 of the 5G NR LDPC code and its lifting sizes.
//!
//! The shift table lives in `data/bg2.txt`: one `[set N]` section per
//! lifting-size set index, and within a section one line per base-matrix row
//! listing the nonzero entries as `col:shift` pairs. The file is embedded at
//! compile time and parsed once.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const BG2_ROWS: usize = 42;
pub const BG2_COLS: usize = 52;
/// Systematic columns of base graph 2 (K = 10 * Zc).
pub const BG2_INFO_COLS: usize = 10;
pub const SET_COUNT: usize = 8;

/// Raw text of the shift table.
pub const BG2_TABLE: &str = include_str!("../../data/bg2.txt");

const SET_GENERATORS: [usize; SET_COUNT] = [2, 3, 5, 7, 9, 11, 13, 15];
const MAX_LIFTING: usize = 384;

/// All 51 lifting sizes, ascending.
pub fn lifting_sizes() -> &'static [usize] {
    static SIZES: OnceLock<Vec<usize>> = OnceLock::new();
    SIZES.get_or_init(|| {
        let mut v: Vec<usize> = SET_GENERATORS
            .iter()
            .flat_map(|&a| (0..8).map(move |j| a << j))
            .filter(|&z| z <= MAX_LIFTING)
            .collect();
        v.sort_unstable();
        v
    })
}

/// Set index `iLS` of a lifting size: the odd generator `a` with `z = a * 2^j`.
pub fn set_index(z: usize) -> Option<usize> {
    if z == 0 || z > MAX_LIFTING {
        return None;
    }
    let odd = z >> z.trailing_zeros();
    match odd {
        1 => Some(0), // powers of two belong to a = 2
        _ => SET_GENERATORS.iter().position(|&a| a == odd),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseEntry {
    pub col: usize,
    pub shift: usize,
}

/// Base matrix for one set index: `rows[i]` holds the nonzero entries of row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMatrix {
    pub set: usize,
    pub rows: Vec<Vec<BaseEntry>>,
}

impl BaseMatrix {
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Shift of entry (row, col), if present.
    pub fn shift(&self, row: usize, col: usize) -> Option<usize> {
        self.rows[row].iter().find(|e| e.col == col).map(|e| e.shift)
    }
}

/// Parses the shift-table text into one base matrix per set index.
pub fn parse_base_graph(text: &str) -> Result<Vec<BaseMatrix>> {
    let mut sets: Vec<BaseMatrix> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("[set ") {
            let idx: usize = rest
                .trim_end_matches(']')
                .trim()
                .parse()
                .map_err(|_| Error::BaseGraphData(format!("line {}: bad section header", lineno + 1)))?;
            if idx != sets.len() {
                return Err(Error::BaseGraphData(format!(
                    "line {}: expected set {}, found {idx}",
                    lineno + 1,
                    sets.len()
                )));
            }
            sets.push(BaseMatrix { set: idx, rows: Vec::new() });
            continue;
        }
        let current = sets
            .last_mut()
            .ok_or_else(|| Error::BaseGraphData(format!("line {}: row before any section", lineno + 1)))?;
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let (c, s) = tok
                .split_once(':')
                .ok_or_else(|| Error::BaseGraphData(format!("line {}: bad entry {tok:?}", lineno + 1)))?;
            let col: usize = c
                .parse()
                .map_err(|_| Error::BaseGraphData(format!("line {}: bad column {c:?}", lineno + 1)))?;
            let shift: usize = s
                .parse()
                .map_err(|_| Error::BaseGraphData(format!("line {}: bad shift {s:?}", lineno + 1)))?;
            if col >= BG2_COLS {
                return Err(Error::BaseGraphData(format!("line {}: column {col} out of range", lineno + 1)));
            }
            row.push(BaseEntry { col, shift });
        }
        current.rows.push(row);
    }
    if sets.len() != SET_COUNT {
        return Err(Error::BaseGraphData(format!("expected {SET_COUNT} sets, found {}", sets.len())));
    }
    for m in &sets {
        if m.rows.len() != BG2_ROWS {
            return Err(Error::BaseGraphData(format!(
                "set {}: expected {BG2_ROWS} rows, found {}",
                m.set,
                m.rows.len()
            )));
        }
    }
    Ok(sets)
}

/// Base graph 2 for every set index, parsed from the embedded table.
pub fn bg2() -> &'static [BaseMatrix] {
    static BG2: OnceLock<Vec<BaseMatrix>> = OnceLock::new();
    BG2.get_or_init(|| parse_base_graph(BG2_TABLE).expect("embedded BG2 table is valid"))
}

/// Base matrix to lift with `z`.
pub fn bg2_for(z: usize) -> Result<&'static BaseMatrix> {
    let set = set_index(z)
        .filter(|_| lifting_sizes().binary_search(&z).is_ok())
        .ok_or_else(|| Error::InvalidArgument(format!("{z} is not a standard lifting size")))?;
    Ok(&bg2()[set])
}
