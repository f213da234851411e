//! The `dim² × dim²` matrix Ω(n) sharing the nonzero spectrum of D(n).
//!
//! Writing `A` for the matrix whose columns are `vec(P_σ)`, one has
//! `D = A†A/dim` and `Ω = AA†/dim = Σ_σ vec(P_σ) vec(P_σ)†/dim`; the two
//! share their nonzero eigenvalues. Since `P_{σl} = P_l U P_σ`,
//! `Ω(n+1) = Σ_l M_l Ω(n) M_l†` with `M_l vec(X) = vec(P_l U X)`.

use faer::{Accum, MatMut, MatRef, Par};

use crate::error::{CatError, Result};
use crate::numerics::{eigvalsh, ComplexMatrix, Spectrum, C64, ONE};
use crate::operator::{ProjectorFamily, UnitaryOperator};
use crate::word::Sector;

use super::decoherence::validate_request;
use super::Budget;

#[derive(Clone, Debug)]
pub struct OmegaMatrix {
    n: usize,
    dim_hilbert: usize,
    alphabet: usize,
    sector: Option<Sector>,
    entries: ComplexMatrix,
}

impl OmegaMatrix {
    pub fn word_len(&self) -> usize {
        self.n
    }

    pub fn dim_hilbert(&self) -> usize {
        self.dim_hilbert
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eigvalsh(&self.entries)
    }
}

/// Iterates Ω(1), Ω(2), … for a fixed operator and projector family.
///
/// With a sector, Ω(1) is built from `P_first` alone; [`OmegaSequence::at`]
/// then keeps only `P_last` in the final step.
pub struct OmegaSequence {
    u: ComplexMatrix,
    block_of: Vec<usize>,
    alphabet: usize,
    sector: Option<Sector>,
    n: usize,
    /// Ω before the last-symbol restriction, i.e. summed over all last
    /// symbols.
    current: ComplexMatrix,
}

impl OmegaSequence {
    pub fn new(
        u: &UnitaryOperator,
        proj: &ProjectorFamily,
        sector: Option<Sector>,
        budget: &Budget,
    ) -> Result<Self> {
        validate_request(u, proj, 1, sector)?;
        let dim = proj.dim();
        if dim > budget.max_omega_dim {
            return Err(CatError::BudgetExceeded {
                what: "omega Hilbert dimension",
                needed: dim as u64,
                limit: budget.max_omega_dim as u64,
            });
        }
        let side = (dim * dim) as u64;
        let bytes = 16 * 3 * side * side;
        if bytes > budget.max_bytes {
            return Err(CatError::BudgetExceeded {
                what: "omega memory (bytes)",
                needed: bytes,
                limit: budget.max_bytes,
            });
        }
        let mut block_of = vec![0; dim];
        for (l, r) in proj.blocks().iter().enumerate() {
            for i in r.clone() {
                block_of[i] = l;
            }
        }
        let allowed = |a: usize| sector.is_none_or(|s| block_of[a] == s.first);
        let inv = C64::new(1.0 / dim as f64, 0.0);
        let side = dim * dim;
        let mut current = ComplexMatrix::zeros(side, side);
        for a in 0..dim {
            for c in 0..dim {
                if block_of[a] == block_of[c] && allowed(a) && allowed(c) {
                    current[(a * dim + a, c * dim + c)] = inv;
                }
            }
        }
        Ok(Self {
            u: u.to_dense(),
            block_of,
            alphabet: proj.len(),
            sector,
            n: 1,
            current,
        })
    }

    pub fn word_len(&self) -> usize {
        self.n
    }

    /// Advances from Ω(n) to Ω(n+1).
    pub fn step(&mut self) {
        let dim = self.u.rows();
        // Ω' = mask ⊙ (U⊗I) Ω (U⊗I)†, computed as ((U⊗I)((U⊗I)Ω)†)†
        let t = left_apply(&self.u, &self.current, dim);
        let t = left_apply(&self.u, &t.adjoint(), dim).adjoint();
        let side = dim * dim;
        let mut next = t;
        for row in 0..side {
            let a = row / dim;
            let r = next.row_mut(row);
            for (col, z) in r.iter_mut().enumerate() {
                if self.block_of[a] != self.block_of[col / dim] {
                    *z = C64::default();
                }
            }
        }
        hermitize(&mut next);
        self.current = next;
        self.n += 1;
    }

    /// Ω at the current word length, with the sector's last symbol applied.
    pub fn at(&self) -> OmegaMatrix {
        let entries = match self.sector {
            None => self.current.clone(),
            Some(s) if self.n == 1 && s.first != s.last => {
                ComplexMatrix::zeros(self.current.rows(), self.current.cols())
            }
            Some(s) => {
                let dim = self.u.rows();
                let mut m = self.current.clone();
                for row in 0..m.rows() {
                    let keep_row = self.block_of[row / dim] == s.last;
                    for (col, z) in m.row_mut(row).iter_mut().enumerate() {
                        if !keep_row || self.block_of[col / dim] != s.last {
                            *z = C64::default();
                        }
                    }
                }
                m
            }
        };
        OmegaMatrix {
            n: self.n,
            dim_hilbert: self.u.rows(),
            alphabet: self.alphabet,
            sector: self.sector,
            entries,
        }
    }
}

/// `(U ⊗ I_dim) · X` for a `dim² × dim²` matrix `X`: in row-major storage
/// `X` is a `dim × dim³` matrix and the product is a single GEMM.
fn left_apply(u: &ComplexMatrix, x: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    let wide = dim * dim * dim;
    let rhs = MatRef::from_row_major_slice(x.as_row_major(), dim, wide);
    let mut out = vec![C64::default(); dim * wide];
    {
        let dst = MatMut::from_row_major_slice_mut(&mut out, dim, wide);
        faer::linalg::matmul::matmul(dst, Accum::Replace, u.view(), rhs, ONE, Par::Seq);
    }
    ComplexMatrix::from_row_major(x.rows(), x.cols(), out)
}

fn hermitize(m: &mut ComplexMatrix) {
    let n = m.rows();
    for a in 0..n {
        m[(a, a)] = C64::new(m[(a, a)].re, 0.0);
        for b in (a + 1)..n {
            let avg = (m[(a, b)] + m[(b, a)].conj()) * 0.5;
            m[(a, b)] = avg;
            m[(b, a)] = avg.conj();
        }
    }
}

/// Ω(n) for words of length `n`.
pub fn omega_recursion(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    n: usize,
    sector: Option<Sector>,
    budget: &Budget,
) -> Result<OmegaMatrix> {
    if n == 0 {
        return Err(CatError::InvalidParams("word length must be ≥ 1".into()));
    }
    let mut seq = OmegaSequence::new(u, proj, sector, budget)?;
    for _ in 1..n {
        seq.step();
    }
    Ok(seq.at())
}
