use std::fmt;

use crate::error::{CatError, Result};

/// A finite symbol sequence σ₀σ₁…σ_{n−1} over the alphabet `0..alphabet`.
///
/// Words of a fixed length are ordered lexicographically, σ₀ most
/// significant; [`Word::index`] is that rank and is the row/column index
/// of every word-indexed table or matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<usize>,
}

impl Word {
    pub fn new(symbols: Vec<usize>, alphabet: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(CatError::InvalidParams("a word needs at least one symbol".into()));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(CatError::SymbolOutOfRange {
                symbol: bad,
                alphabet,
            });
        }
        Ok(Self { symbols })
    }

    /// Word of length `len` with lexicographic rank `index`.
    pub fn from_index(mut index: usize, alphabet: usize, len: usize) -> Self {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = index % alphabet;
            index /= alphabet;
        }
        debug_assert_eq!(index, 0, "rank out of range for word length");
        Self { symbols }
    }

    pub fn index(&self, alphabet: usize) -> usize {
        self.symbols.iter().fold(0, |acc, &s| acc * alphabet + s)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn first(&self) -> usize {
        self.symbols[0]
    }

    pub fn last(&self) -> usize {
        self.symbols[self.symbols.len() - 1]
    }
}

/// Digit string for alphabets of at most ten letters ("0120"), dot
/// separated otherwise ("0.11.3").
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.symbols.iter().any(|&s| s > 9);
        for (i, s) in self.symbols.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Fixed first and last symbol of a word: one diagonal block of a
/// decoherence matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Sector {
    pub first: usize,
    pub last: usize,
}

impl Sector {
    pub fn new(first: usize, last: usize) -> Self {
        Self { first, last }
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.first() == self.first && w.last() == self.last
    }
}

/// Number of words of length `len` over `alphabet` letters, or `None` on
/// overflow.
pub fn word_count(alphabet: usize, len: usize) -> Option<usize> {
    alphabet.checked_pow(u32::try_from(len).ok()?)
}

/// Lexicographic ranks of the words of length `len`, optionally restricted
/// to a sector.
pub fn enumerate_words(alphabet: usize, len: usize, sector: Option<Sector>) -> Vec<usize> {
    let total = word_count(alphabet, len).expect("word count overflow");
    match sector {
        None => (0..total).collect(),
        Some(s) if len == 1 => {
            if s.first == s.last {
                vec![s.first]
            } else {
                Vec::new()
            }
        }
        Some(s) => {
            let inner = total / (alphabet * alphabet);
            let base = s.first * (total / alphabet);
            (0..inner).map(|m| base + m * alphabet + s.last).collect()
        }
    }
}
