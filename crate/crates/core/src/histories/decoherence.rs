use rayon::prelude::*;

use crate::error::{CatError, Result};
use crate::io::{fmt_sig, CsvTable};
use crate::numerics::{eigvalsh, ComplexMatrix, Spectrum, C64, CLAMP_WINDOW};
use crate::operator::{ProjectorFamily, UnitaryOperator};
use crate::word::{enumerate_words, word_count, Sector, Word};

use super::Budget;

/// Branches whose Frobenius norm falls below this are dropped as zero.
pub const PRUNE_NORM: f64 = 1e-14;

/// `P_σ = P_{σ_{n−1}} U ⋯ P_{σ_1} U P_{σ_0}` for one word.
#[derive(Clone, Debug)]
pub struct WordOperator {
    pub word: Word,
    pub operator: ComplexMatrix,
}

/// Builds the history operator of `w` as a dense matrix.
pub fn word_operator(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    w: &Word,
) -> Result<WordOperator> {
    check_symbols(w, proj.len())?;
    let dense = u.to_dense();
    let mut op = proj.to_dense(w.first());
    for &s in &w.symbols()[1..] {
        op = dense.matmul(&op);
        let keep = proj.block(s);
        for k in 0..op.rows() {
            if !keep.contains(&k) {
                op.row_mut(k).fill(C64::default());
            }
        }
    }
    Ok(WordOperator {
        word: w.clone(),
        operator: op,
    })
}

fn check_symbols(w: &Word, alphabet: usize) -> Result<()> {
    match w.symbols().iter().find(|&&s| s >= alphabet) {
        Some(&symbol) => Err(CatError::SymbolOutOfRange { symbol, alphabet }),
        None => Ok(()),
    }
}

/// Decoherence matrix `D_{θ,σ}(n) = Tr(P_θ† P_σ)/dim` over words of length
/// `n`, rows and columns in lexicographic word order (restricted to a
/// sector if one is set).
#[derive(Clone, Debug)]
pub struct DecoherenceMatrix {
    n: usize,
    alphabet: usize,
    sector: Option<Sector>,
    words: Vec<usize>,
    entries: ComplexMatrix,
    dim_hilbert: usize,
}

impl DecoherenceMatrix {
    pub fn word_len(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    pub fn dim_hilbert(&self) -> usize {
        self.dim_hilbert
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    /// Lexicographic ranks of the row/column words.
    pub fn word_ranks(&self) -> &[usize] {
        &self.words
    }

    pub fn word(&self, i: usize) -> Word {
        Word::from_index(self.words[i], self.alphabet, self.n)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, theta: usize, sigma: usize) -> C64 {
        self.entries[(theta, sigma)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Diagonal entries `D_{σ,σ}` (real).
    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    /// `Σ_{σ≠θ} |D_{σ,θ}|`.
    pub fn offdiag_mass(&self) -> f64 {
        self.entries.offdiagonal_abs_sum()
    }

    /// Eigenvalues. `D` is block diagonal in (first, last) symbol, so the
    /// spectrum is assembled from the blocks.
    pub fn spectrum(&self) -> Result<Spectrum> {
        if self.words.is_empty() {
            return Ok(Spectrum::new(Vec::new()));
        }
        let mut groups: Vec<((usize, usize), Vec<usize>)> = Vec::new();
        for (i, &rank) in self.words.iter().enumerate() {
            let w = Word::from_index(rank, self.alphabet, self.n);
            let key = (w.first(), w.last());
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(i),
                None => groups.push((key, vec![i])),
            }
        }
        let mut values = Vec::with_capacity(self.words.len());
        for (_, idx) in groups {
            let block = ComplexMatrix::from_fn(idx.len(), idx.len(), |a, b| {
                self.entries[(idx[a], idx[b])]
            });
            values.extend_from_slice(eigvalsh(&block)?.values());
        }
        Ok(Spectrum::new(values))
    }

    /// Sub-matrix of one sector, in the same word order.
    pub fn restrict(&self, sector: Sector) -> DecoherenceMatrix {
        let idx: Vec<usize> = (0..self.words.len())
            .filter(|&i| sector.contains(&self.word(i)))
            .collect();
        DecoherenceMatrix {
            n: self.n,
            alphabet: self.alphabet,
            sector: Some(sector),
            words: idx.iter().map(|&i| self.words[i]).collect(),
            entries: ComplexMatrix::from_fn(idx.len(), idx.len(), |a, b| {
                self.entries[(idx[a], idx[b])]
            }),
            dim_hilbert: self.dim_hilbert,
        }
    }

    /// Hermiticity, positivity and trace checks. A full matrix must have
    /// unit trace; a sector block only needs a trace in `[0, 1]`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let herm = self.entries.hermiticity_defect();
        if herm > tol {
            return Err(CatError::InvariantViolation(format!(
                "decoherence matrix not Hermitian (defect {herm:e})"
            )));
        }
        let tr = self.trace();
        let trace_ok = match self.sector {
            None => (tr - 1.0).abs() <= tol,
            Some(_) => (-tol..=1.0 + tol).contains(&tr),
        };
        if !trace_ok {
            return Err(CatError::InvariantViolation(format!(
                "decoherence matrix trace {tr} out of range"
            )));
        }
        let spec = self.spectrum()?;
        if let Some(&min) = spec.values().last() {
            if min < -CLAMP_WINDOW.max(tol) {
                return Err(CatError::InvariantViolation(format!(
                    "decoherence matrix has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(())
    }

    /// Columns `theta,sigma,re,im,abs`, words rendered as digit strings.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["theta", "sigma", "re", "im", "abs"]);
        let labels: Vec<String> = (0..self.len()).map(|i| self.word(i).to_string()).collect();
        for a in 0..self.len() {
            for b in 0..self.len() {
                let z = self.entries[(a, b)];
                t.push(vec![
                    labels[a].clone(),
                    labels[b].clone(),
                    fmt_sig(z.re),
                    fmt_sig(z.im),
                    fmt_sig(z.norm()),
                ]);
            }
        }
        t
    }
}

/// `U` cut into blocks `U[rows of P_l, cols of P_m]`.
struct BlockedUnitary {
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl BlockedUnitary {
    fn new(u: &ComplexMatrix, proj: &ProjectorFamily) -> Self {
        let blocks = proj
            .blocks()
            .iter()
            .map(|rows| {
                proj.blocks()
                    .iter()
                    .map(|cols| {
                        ComplexMatrix::from_fn(rows.len(), cols.len(), |a, b| {
                            u[(rows.start + a, cols.start + b)]
                        })
                    })
                    .collect()
            })
            .collect();
        Self { blocks }
    }
}

/// One leaf of the word tree: the `(last block) × (first block)` piece of
/// `P_σ`; every other entry of `P_σ` vanishes. `None` marks a pruned branch.
struct Branch {
    rank: usize,
    first: usize,
    last: usize,
    block: Option<ComplexMatrix>,
}

fn frobenius_sqr(m: &ComplexMatrix) -> f64 {
    m.as_row_major().iter().map(|z| z.norm_sqr()).sum()
}

/// Propagates the word tree down to depth `n` and returns the leaves in
/// lexicographic order.
fn grow_word_tree(
    u: &ComplexMatrix,
    proj: &ProjectorFamily,
    n: usize,
    sector: Option<Sector>,
) -> Vec<Branch> {
    let alphabet = proj.len();
    let blocked = BlockedUnitary::new(u, proj);
    let firsts: Vec<usize> = match sector {
        Some(s) => vec![s.first],
        None => (0..alphabet).collect(),
    };
    let mut level: Vec<Branch> = firsts
        .into_iter()
        .map(|a| Branch {
            rank: a,
            first: a,
            last: a,
            block: Some(ComplexMatrix::identity(proj.rank(a))),
        })
        .collect();
    let blocked = &blocked;
    for depth in 1..n {
        let final_step = depth + 1 == n;
        let symbols: Vec<usize> = match sector {
            Some(s) if final_step => vec![s.last],
            _ => (0..alphabet).collect(),
        };
        level = level
            .par_iter()
            .flat_map_iter(|br| {
                symbols.iter().map(move |&l| {
                    let block = br.block.as_ref().and_then(|m| {
                        let next = blocked.blocks[l][br.last].matmul(m);
                        (frobenius_sqr(&next) >= PRUNE_NORM * PRUNE_NORM).then_some(next)
                    });
                    Branch {
                        rank: br.rank * alphabet + l,
                        first: br.first,
                        last: l,
                        block,
                    }
                })
            })
            .collect();
    }
    if let (Some(s), 1) = (sector, n) {
        level.retain(|b| b.last == s.last);
    }
    level
}

fn check_budget(proj: &ProjectorFamily, n: usize, sector: Option<Sector>, budget: &Budget) -> Result<usize> {
    let alphabet = proj.len();
    let words = match sector {
        Some(_) if n >= 2 => word_count(alphabet, n - 2),
        Some(_) => Some(1),
        None => word_count(alphabet, n),
    }
    .ok_or(CatError::BudgetExceeded {
        what: "history words",
        needed: u64::MAX,
        limit: budget.max_words as u64,
    })?;
    if words > budget.max_words {
        return Err(CatError::BudgetExceeded {
            what: "history words",
            needed: words as u64,
            limit: budget.max_words as u64,
        });
    }
    let block = proj.blocks().iter().map(|b| b.len()).max().unwrap_or(0) as u64;
    // leaves of the last two levels plus the Gram matrix
    let bytes = 16 * (2 * words as u64 * block * block + (words as u64).pow(2));
    if bytes > budget.max_bytes {
        return Err(CatError::BudgetExceeded {
            what: "history memory (bytes)",
            needed: bytes,
            limit: budget.max_bytes,
        });
    }
    Ok(words)
}

/// Decoherence matrix of the (optionally sector-restricted) words of length
/// `n`, with `ρ = I/dim`.
pub fn decoherence_matrix(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    n: usize,
    sector: Option<Sector>,
    budget: &Budget,
) -> Result<DecoherenceMatrix> {
    validate_request(u, proj, n, sector)?;
    check_budget(proj, n, sector, budget)?;
    let dense = u.to_dense();
    let leaves = grow_word_tree(&dense, proj, n, sector);
    let dim = proj.dim();
    let inv_dim = 1.0 / dim as f64;
    let m = leaves.len();
    let rows: Vec<Vec<C64>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let la = &leaves[a];
            (0..m)
                .map(|b| {
                    let lb = &leaves[b];
                    if la.first != lb.first || la.last != lb.last {
                        return C64::default();
                    }
                    match (&la.block, &lb.block) {
                        (Some(x), Some(y)) => {
                            x.as_row_major()
                                .iter()
                                .zip(y.as_row_major())
                                .map(|(p, q)| p.conj() * q)
                                .sum::<C64>()
                                * inv_dim
                        }
                        _ => C64::default(),
                    }
                })
                .collect()
        })
        .collect();
    let mut entries = ComplexMatrix::zeros(m, m);
    for (a, row) in rows.into_iter().enumerate() {
        entries.row_mut(a).copy_from_slice(&row);
    }
    // exact Hermitian symmetry: keep the upper triangle
    for a in 0..m {
        entries[(a, a)] = C64::new(entries[(a, a)].re, 0.0);
        for b in 0..a {
            entries[(a, b)] = entries[(b, a)].conj();
        }
    }
    let words = leaves.iter().map(|b| b.rank).collect();
    Ok(DecoherenceMatrix {
        n,
        alphabet: proj.len(),
        sector,
        words,
        entries,
        dim_hilbert: dim,
    })
}

pub(crate) fn validate_request(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    n: usize,
    sector: Option<Sector>,
) -> Result<()> {
    if n == 0 {
        return Err(CatError::InvalidParams("word length must be ≥ 1".into()));
    }
    if u.dim() != proj.dim() {
        return Err(CatError::ShapeMismatch(format!(
            "operator dimension {} differs from projector dimension {}",
            u.dim(),
            proj.dim()
        )));
    }
    if let Some(s) = sector {
        for symbol in [s.first, s.last] {
            if symbol >= proj.len() {
                return Err(CatError::SymbolOutOfRange {
                    symbol,
                    alphabet: proj.len(),
                });
            }
        }
    }
    Ok(())
}

/// Only the diagonal `D_{σ,σ} = ‖P_σ‖²_F/dim`, computed depth-first so the
/// memory stays proportional to `n`.
pub fn decoherence_diagonal(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    n: usize,
    sector: Option<Sector>,
    max_words: usize,
) -> Result<Vec<f64>> {
    validate_request(u, proj, n, sector)?;
    let alphabet = proj.len();
    let ranks = enumerate_words_checked(alphabet, n, sector, max_words)?;
    let dense = u.to_dense();
    let blocked = BlockedUnitary::new(&dense, proj);
    let inv_dim = 1.0 / proj.dim() as f64;
    let firsts: Vec<usize> = match sector {
        Some(s) => vec![s.first],
        None => (0..alphabet).collect(),
    };
    let mut out = vec![0.0; ranks.len()];
    let per_first: Vec<Vec<(usize, f64)>> = firsts
        .par_iter()
        .map(|&a| {
            let mut acc = Vec::new();
            let start = ComplexMatrix::identity(proj.rank(a));
            descend(&blocked, &start, a, a, 1, n, sector, alphabet, &mut acc);
            acc.into_iter().map(|(r, v)| (r, v * inv_dim)).collect()
        })
        .collect();
    let pos = |rank: usize| ranks.binary_search(&rank).expect("rank enumerated");
    for (rank, v) in per_first.into_iter().flatten() {
        out[pos(rank)] = v;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    blocked: &BlockedUnitary,
    m: &ComplexMatrix,
    rank: usize,
    last: usize,
    depth: usize,
    n: usize,
    sector: Option<Sector>,
    alphabet: usize,
    acc: &mut Vec<(usize, f64)>,
) {
    if depth == n {
        if sector.is_none_or(|s| s.last == last) {
            acc.push((rank, frobenius_sqr(m)));
        }
        return;
    }
    let final_step = depth + 1 == n;
    for l in 0..alphabet {
        if final_step && sector.is_some_and(|s| s.last != l) {
            continue;
        }
        let next = blocked.blocks[l][last].matmul(m);
        let child = rank * alphabet + l;
        if frobenius_sqr(&next) < PRUNE_NORM * PRUNE_NORM {
            // pruned subtree contributes zeros, which are already in place
            continue;
        }
        descend(blocked, &next, child, l, depth + 1, n, sector, alphabet, acc);
    }
}

fn enumerate_words_checked(
    alphabet: usize,
    n: usize,
    sector: Option<Sector>,
    max_words: usize,
) -> Result<Vec<usize>> {
    let count = word_count(alphabet, n).unwrap_or(usize::MAX);
    let count = match sector {
        Some(_) if n >= 2 => count / (alphabet * alphabet),
        _ => count,
    };
    if count > max_words {
        return Err(CatError::BudgetExceeded {
            what: "diagonal history words",
            needed: count as u64,
            limit: max_words as u64,
        });
    }
    Ok(enumerate_words(alphabet, n, sector))
}

/// `Σ_σ P_σ† P_σ`, which equals the identity for any unitary `U`.
pub fn resolution_of_identity(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    n: usize,
) -> Result<ComplexMatrix> {
    let dim = proj.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for rank in 0..word_count(proj.len(), n).expect("small word count") {
        let w = Word::from_index(rank, proj.len(), n);
        let op = word_operator(u, proj, &w)?.operator;
        let g = op.adjoint().matmul(&op);
        acc = ComplexMatrix::from_fn(dim, dim, |k, l| acc[(k, l)] + g[(k, l)]);
    }
    Ok(acc)
}
