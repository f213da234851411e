//! Classical Arnol'd cat map on the unit torus, vertical strip partitions
//! and cylinder-set measures estimated on a midpoint lattice.

use rayon::prelude::*;

use crate::error::{CatError, Result};
use crate::io::{fmt_sig, CsvTable};
use crate::numerics::{entropy_term, shannon_entropy};
use crate::word::{enumerate_words, word_count, Sector, Word};

/// Default lattice resolution for [`word_measures`].
pub const DEFAULT_GRID: usize = 2048;

/// Largest histogram (number of words) [`word_measures`] will allocate.
pub const MAX_TABLE_WORDS: usize = 1 << 24;

/// A point of the unit torus, both coordinates in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: wrap_unit(x),
            y: wrap_unit(y),
        }
    }
}

fn wrap_unit(v: f64) -> f64 {
    let w = v.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// One step of (x, y) → (x + y, x + 2y) mod 1.
pub fn cat_step(pt: TorusPoint) -> TorusPoint {
    TorusPoint::new(pt.x + pt.y, pt.x + 2.0 * pt.y)
}

/// Partition of the torus into `2^p` vertical strips
/// `l/2^p ≤ x < (l+1)/2^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StripPartition {
    p: u32,
}

impl StripPartition {
    pub fn new(p: u32) -> Result<Self> {
        if p == 0 || p > 16 {
            return Err(CatError::InvalidParams(format!(
                "partition exponent p={p} must lie in 1..=16"
            )));
        }
        Ok(Self { p })
    }

    pub fn exponent(&self) -> u32 {
        self.p
    }

    pub fn cells(&self) -> usize {
        1 << self.p
    }

    pub fn cell_of(&self, pt: TorusPoint) -> usize {
        ((pt.x * self.cells() as f64) as usize).min(self.cells() - 1)
    }
}

/// Cylinder-set probabilities μ(σ) for all words of one length, indexed by
/// lexicographic rank. Zero-measure words are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable {
    partition: StripPartition,
    len: usize,
    grid: usize,
    counts: Vec<u64>,
}

impl MeasureTable {
    pub fn partition(&self) -> StripPartition {
        self.partition
    }

    pub fn alphabet(&self) -> usize {
        self.partition.cells()
    }

    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn total_points(&self) -> u64 {
        (self.grid as u64) * (self.grid as u64)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn measure_at(&self, index: usize) -> f64 {
        self.counts[index] as f64 / self.total_points() as f64
    }

    pub fn measure(&self, w: &Word) -> f64 {
        self.measure_at(w.index(self.alphabet()))
    }

    /// All measures in lexicographic word order.
    pub fn measures(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.measure_at(i)).collect()
    }

    /// Measures of the words in `sector`, lexicographic order.
    pub fn sector_measures(&self, sector: Sector) -> Vec<f64> {
        enumerate_words(self.alphabet(), self.len, Some(sector))
            .into_iter()
            .map(|i| self.measure_at(i))
            .collect()
    }

    pub fn sector_probability(&self, sector: Sector) -> f64 {
        self.sector_measures(sector).iter().sum()
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["word", "measure"]);
        for i in 0..self.counts.len() {
            let w = Word::from_index(i, self.alphabet(), self.len);
            t.push(vec![w.to_string(), fmt_sig(self.measure_at(i))]);
        }
        t
    }
}

/// Estimates μ(σ) for all words of length `n` over the `2^p` strips.
///
/// The G×G lattice of cell midpoints ((i+½)/G, (j+½)/G) is iterated n−1
/// times; the symbol at each time is the strip index. Points live on the
/// 1/(2G) lattice and the map has integer entries, so the iteration is done
/// exactly in integers.
pub fn word_measures(p: u32, n: usize, grid: usize) -> Result<MeasureTable> {
    let partition = StripPartition::new(p)?;
    let cells = partition.cells();
    if n == 0 {
        return Err(CatError::InvalidParams("word length must be ≥ 1".into()));
    }
    if !grid.is_power_of_two() || grid > 1 << 20 {
        return Err(CatError::InvalidParams(format!(
            "grid resolution {grid} must be a power of two ≤ 2^20"
        )));
    }
    if grid < cells {
        return Err(CatError::ResolutionTooCoarse { grid, cells });
    }
    let words = word_count(cells, n)
        .filter(|&w| w <= MAX_TABLE_WORDS)
        .ok_or(CatError::BudgetExceeded {
            what: "classical word table",
            needed: (cells as f64).powi(n as i32) as u64,
            limit: MAX_TABLE_WORDS as u64,
        })?;

    let modulus = 2 * grid as u64;
    let mask = modulus - 1;
    // strip index = a·2^p / 2G
    let shift = modulus.trailing_zeros() - p;

    let counts = (0..grid as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; words],
            |mut hist, i| {
                for j in 0..grid as u64 {
                    let (mut a, mut b) = (2 * i + 1, 2 * j + 1);
                    let mut code = 0usize;
                    for t in 0..n {
                        code = code * cells + (a >> shift) as usize;
                        if t + 1 < n {
                            let a2 = (a + b) & mask;
                            b = (a + 2 * b) & mask;
                            a = a2;
                        }
                    }
                    hist[code] += 1;
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; words],
            |mut acc, h| {
                acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
                acc
            },
        );

    Ok(MeasureTable {
        partition,
        len: n,
        grid,
        counts,
    })
}

/// Shannon entropy −Σ μ log μ of the table, plus per-sector sub-sums.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalEntropy {
    pub total: f64,
    /// `sectors[first * L + last]` is the partial sum over that sector.
    pub sectors: Vec<f64>,
}

impl ClassicalEntropy {
    pub fn sector(&self, s: Sector) -> f64 {
        let l = (self.sectors.len() as f64).sqrt() as usize;
        self.sectors[s.first * l + s.last]
    }
}

pub fn classical_entropy(mt: &MeasureTable) -> ClassicalEntropy {
    let l = mt.alphabet();
    let n = mt.word_len();
    let mut sectors = vec![0.0; l * l];
    let mut total = 0.0;
    for i in 0..mt.len() {
        let term = entropy_term(mt.measure_at(i)).expect("measures are nonnegative");
        let w = Word::from_index(i, l, n);
        sectors[w.first() * l + w.last()] += term;
        total += term;
    }
    ClassicalEntropy { total, sectors }
}

/// −Σ μ log μ restricted to one sector, no renormalisation.
pub fn sector_entropy(mt: &MeasureTable, sector: Sector) -> f64 {
    shannon_entropy(&mt.sector_measures(sector)).expect("measures are nonnegative")
}
