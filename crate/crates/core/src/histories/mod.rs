//! Consistent-histories machinery: history operators, decoherence matrices,
//! the Ω recursion and the entropies built from them.
//!
//! Two routes to the AF entropy exist. The word tree builds `D(n)` itself
//! (needed for diagonals, off-diagonal mass and sector plots) but its size
//! grows like `L^n`. The Ω recursion works at fixed size `dim² × dim²` for
//! any `n` but only yields the spectrum. [`af_entropy`] picks between them.

mod decoherence;
mod entropy;
mod omega;

use serde::{Deserialize, Serialize};

pub use decoherence::{
    decoherence_diagonal, decoherence_matrix, resolution_of_identity, word_operator,
    DecoherenceMatrix, WordOperator, PRUNE_NORM,
};
pub use entropy::{
    af_bound, cumulative_profile, entropies, partial_entropy_profile, source_words,
    EntropyRecord, EntropySource, PartialEntropyProfile,
};
pub use omega::{omega_recursion, OmegaMatrix, OmegaSequence};

use crate::error::Result;
use crate::numerics::spectral_entropy;
use crate::operator::{ProjectorFamily, UnitaryOperator};
use crate::word::Sector;

/// Resource limits for history computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest number of words in one decoherence matrix.
    pub max_words: usize,
    /// Largest number of words for diagonal-only computations (`S_diag`,
    /// classical tables in long sweeps).
    pub max_diagonal_words: usize,
    /// Largest Hilbert dimension for the Ω route (Ω has side `dim²`).
    pub max_omega_dim: usize,
    /// Memory ceiling in bytes.
    pub max_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_words: 4096,
            max_diagonal_words: 1 << 16,
            max_omega_dim: 64,
            max_bytes: 8 << 30,
        }
    }
}

impl Budget {
    pub fn with_memory_mb(mut self, mb: u64) -> Self {
        self.max_bytes = mb << 20;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AfMethod {
    Omega,
    WordTree,
}

/// AF entropy `−Tr D log D`, through Ω when `dim ≤ max_omega_dim` and
/// through the word tree otherwise.
pub fn af_entropy(
    u: &UnitaryOperator,
    proj: &ProjectorFamily,
    n: usize,
    sector: Option<Sector>,
    budget: &Budget,
) -> Result<(AfMethod, f64)> {
    if proj.dim() <= budget.max_omega_dim {
        let om = omega_recursion(u, proj, n, sector, budget)?;
        Ok((AfMethod::Omega, spectral_entropy(&om.spectrum()?)?))
    } else {
        let d = decoherence_matrix(u, proj, n, sector, budget)?;
        Ok((AfMethod::WordTree, spectral_entropy(&d.spectrum()?)?))
    }
}

#[cfg(test)]
mod tests;
