//! Mini-slot resource map, reference signals and PDSCH (de)mapping.
//!
//! Layout of one resource block over the four data symbols:
//!
//! ```text
//! sc   symb0 symb1 symb2 symb3
//! 0    R     D     D     D
//! 1-2  C     D     D     D
//! 3    C     D     D     R
//! 4-5  C     D     D     D
//! 6    R     D     D     D
//! 7-8  C     D     D     D
//! 9    C     D     D     R
//! 10-11 C    D     D     D
//! ```
//!
//! R = reference signal, C = control, D = PDSCH. Symbol 0 is reserved for
//! control; its contents are placeholders because control information
//! travels out of band.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{check_len, Error, Result};
use crate::modem::gold::GoldSequence;
use crate::numerology::SUBCARRIERS_PER_RB;

pub const DATA_SYMBOLS: usize = 4;
/// Pilot spacing in subcarriers.
pub const RS_SPACING: usize = 6;
/// First pilot subcarrier on symbols 0 and 3.
pub const RS_OFFSET_SYMB0: usize = 0;
pub const RS_OFFSET_SYMB3: usize = 3;
/// Resource blocks holding one PCFICH REG each.
pub const PCFICH_RBS: [usize; 4] = [0, 6, 12, 18];
pub const REG_SIZE: usize = 4;

/// Seed of the placeholder control symbols.
const CONTROL_FILL_SEED: u32 = 0x5a5a;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReClass {
    Rs,
    Control,
    Pdsch,
}

/// Four consecutive control REs on symbol 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reg {
    pub rb: usize,
    pub subcarriers: [usize; REG_SIZE],
}

/// Classification of every RE of a mini-slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    n_rb: usize,
    classes: Vec<ReClass>,
    pdsch: Vec<usize>,
    rs: [Vec<usize>; 2],
    pcfich: Vec<Reg>,
}

impl GridMap {
    pub fn n_rb(&self) -> usize {
        self.n_rb
    }

    pub fn n_sc(&self) -> usize {
        self.n_rb * SUBCARRIERS_PER_RB
    }

    pub fn class(&self, symbol: usize, sc: usize) -> ReClass {
        self.classes[symbol * self.n_sc() + sc]
    }

    pub fn count(&self, class: ReClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn pdsch_count(&self) -> usize {
        self.pdsch.len()
    }

    /// Coded bits the PDSCH can carry with QPSK.
    pub fn pdsch_bits(&self) -> usize {
        2 * self.pdsch.len()
    }

    /// Flat indices (`symbol * n_sc + sc`) of PDSCH REs in mapping order.
    pub fn pdsch_indices(&self) -> &[usize] {
        &self.pdsch
    }

    /// Pilot subcarriers of symbol 0 or 3, ascending.
    pub fn rs_subcarriers(&self, symbol: usize) -> Result<&[usize]> {
        match symbol {
            0 => Ok(&self.rs[0]),
            3 => Ok(&self.rs[1]),
            _ => Err(Error::InvalidArgument(format!("symbol {symbol} carries no reference signal"))),
        }
    }

    /// PCFICH REGs; empty when the bandwidth is below 19 RBs.
    pub fn pcfich(&self) -> &[Reg] {
        &self.pcfich
    }

    pub fn is_pcfich(&self, symbol: usize, sc: usize) -> bool {
        symbol == 0 && self.pcfich.iter().any(|r| r.subcarriers.contains(&sc))
    }

    /// One RB of the map as text, one row per subcarrier.
    pub fn render_rb(&self, rb: usize) -> String {
        let mut s = String::from("sc  | s0 s1 s2 s3\n----+------------\n");
        for k in 0..SUBCARRIERS_PER_RB {
            let sc = rb * SUBCARRIERS_PER_RB + k;
            s.push_str(&format!("{k:>3} |"));
            for l in 0..DATA_SYMBOLS {
                let c = match self.class(l, sc) {
                    ReClass::Rs => 'R',
                    ReClass::Control if self.is_pcfich(l, sc) => 'P',
                    ReClass::Control => 'C',
                    ReClass::Pdsch => 'D',
                };
                s.push_str(&format!("  {c}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Classifies every RE of a 4-symbol mini-slot over `n_rb` resource blocks.
pub fn build_minislot_map(n_rb: usize) -> Result<GridMap> {
    if n_rb == 0 {
        return Err(Error::InvalidArgument("at least one resource block is required".into()));
    }
    let n_sc = n_rb * SUBCARRIERS_PER_RB;
    let mut classes = Vec::with_capacity(DATA_SYMBOLS * n_sc);
    for l in 0..DATA_SYMBOLS {
        for k in 0..n_sc {
            classes.push(match l {
                0 if k % RS_SPACING == RS_OFFSET_SYMB0 => ReClass::Rs,
                0 => ReClass::Control,
                3 if k % RS_SPACING == RS_OFFSET_SYMB3 => ReClass::Rs,
                _ => ReClass::Pdsch,
            });
        }
    }
    let pdsch = (0..classes.len()).filter(|&i| classes[i] == ReClass::Pdsch).collect();
    let rs_on = |l: usize| (0..n_sc).filter(|&k| classes[l * n_sc + k] == ReClass::Rs).collect();
    let rs = [rs_on(0), rs_on(3)];
    let pcfich = pcfich_regs(n_rb).unwrap_or_default();
    Ok(GridMap {
        n_rb,
        classes,
        pdsch,
        rs,
        pcfich,
    })
}

/// PCFICH REGs: the first four non-RS subcarriers of RBs 0, 6, 12 and 18 on symbol 0.
pub fn pcfich_regs(n_rb: usize) -> Result<Vec<Reg>> {
    if n_rb <= *PCFICH_RBS.last().unwrap() {
        return Err(Error::BandwidthTooSmall(n_rb));
    }
    Ok(PCFICH_RBS
        .iter()
        .map(|&rb| {
            let base = rb * SUBCARRIERS_PER_RB;
            let mut free = (base..base + SUBCARRIERS_PER_RB).filter(|k| k % RS_SPACING != RS_OFFSET_SYMB0);
            let mut subcarriers = [0; REG_SIZE];
            for s in subcarriers.iter_mut() {
                *s = free.next().expect("an RB has ten non-RS subcarriers");
            }
            Reg { rb, subcarriers }
        })
        .collect())
}

fn qpsk_from_bits(c0: u8, c1: u8) -> Complex64 {
    Complex64::new(
        (1.0 - 2.0 * c0 as f64) * FRAC_1_SQRT_2,
        (1.0 - 2.0 * c1 as f64) * FRAC_1_SQRT_2,
    )
}

fn qpsk_sequence(c_init: u32, len: usize) -> Vec<Complex64> {
    let mut g = GoldSequence::new(c_init);
    (0..len)
        .map(|_| {
            let c0 = g.next().unwrap();
            let c1 = g.next().unwrap();
            qpsk_from_bits(c0, c1)
        })
        .collect()
}

/// Seed of the pilot sequence for `symbol` of `slot`.
pub fn rs_c_init(slot: u32, symbol: usize, cell_id: u16) -> u32 {
    let a = 7 * (slot as u64 + 1) + symbol as u64 + 1;
    let v = ((a * (2 * cell_id as u64 + 1)) << 10) + 2 * cell_id as u64;
    (v % (1u64 << 31)) as u32
}

/// Pilot symbols of symbol 0 or 3, one per pilot RE in frequency order.
pub fn rs_sequence(slot: u32, symbol: usize, cell_id: u16, count: usize) -> Result<Vec<Complex64>> {
    if symbol != 0 && symbol != 3 {
        return Err(Error::InvalidArgument(format!("symbol {symbol} carries no reference signal")));
    }
    Ok(qpsk_sequence(rs_c_init(slot, symbol, cell_id), count))
}

/// Complex values over the mini-slot, symbol-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid {
    n_sc: usize,
    data: Vec<Complex64>,
}

impl ResourceGrid {
    pub fn zeros(n_sc: usize) -> Self {
        Self {
            n_sc,
            data: vec![Complex64::default(); DATA_SYMBOLS * n_sc],
        }
    }

    pub fn from_vec(n_sc: usize, data: Vec<Complex64>) -> Result<Self> {
        check_len(DATA_SYMBOLS * n_sc, data.len())?;
        Ok(Self { n_sc, data })
    }

    pub fn n_sc(&self) -> usize {
        self.n_sc
    }

    pub fn symbol(&self, l: usize) -> &[Complex64] {
        &self.data[l * self.n_sc..(l + 1) * self.n_sc]
    }

    pub fn symbol_mut(&mut self, l: usize) -> &mut [Complex64] {
        &mut self.data[l * self.n_sc..(l + 1) * self.n_sc]
    }

    pub fn get(&self, l: usize, k: usize) -> Complex64 {
        self.data[l * self.n_sc + k]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn power(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }
}

/// Places PDSCH symbols, pilots and placeholder control symbols on a grid.
pub fn map_grid(pdsch_syms: &[Complex64], map: &GridMap, slot: u32, cell_id: u16) -> Result<ResourceGrid> {
    check_len(map.pdsch_count(), pdsch_syms.len())?;
    let n_sc = map.n_sc();
    let mut grid = ResourceGrid::zeros(n_sc);
    let data = grid.as_mut_slice();
    for (&idx, &s) in map.pdsch_indices().iter().zip(pdsch_syms) {
        data[idx] = s;
    }
    for (slot_idx, symbol) in [(0usize, 0usize), (1, 3)] {
        let pos = &map.rs[slot_idx];
        let seq = rs_sequence(slot, symbol, cell_id, pos.len())?;
        for (&k, v) in pos.iter().zip(seq) {
            data[symbol * n_sc + k] = v;
        }
    }
    let control: Vec<usize> = (0..n_sc).filter(|&k| map.class(0, k) == ReClass::Control).collect();
    let fill = qpsk_sequence(CONTROL_FILL_SEED ^ cell_id as u32, control.len());
    for (&k, v) in control.iter().zip(fill) {
        data[k] = v;
    }
    Ok(grid)
}

/// Extracts PDSCH symbols in mapping order.
pub fn demap_pdsch(grid: &ResourceGrid, map: &GridMap) -> Result<Vec<Complex64>> {
    check_len(map.n_sc(), grid.n_sc())?;
    Ok(map.pdsch_indices().iter().map(|&i| grid.as_slice()[i]).collect())
}
