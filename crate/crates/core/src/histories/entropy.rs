use serde::Serialize;

use crate::classical::MeasureTable;
use crate::error::{CatError, Result};
use crate::numerics::{entropy_term, shannon_entropy, spectral_entropy, Spectrum};
use crate::word::{enumerate_words, Sector};

use super::decoherence::DecoherenceMatrix;
use super::omega::OmegaMatrix;

/// Something that yields the Alicki–Fannes spectrum of a set of histories,
/// and possibly its diagonal.
pub trait EntropySource {
    fn word_len(&self) -> usize;
    fn alphabet(&self) -> usize;
    fn dim_hilbert(&self) -> usize;
    fn sector(&self) -> Option<Sector>;
    fn af_spectrum(&self) -> Result<Spectrum>;
    /// `D_{σ,σ}` in lexicographic word order, if available.
    fn diagonal(&self) -> Option<Vec<f64>>;
    fn offdiag_mass(&self) -> Option<f64>;
}

impl EntropySource for DecoherenceMatrix {
    fn word_len(&self) -> usize {
        DecoherenceMatrix::word_len(self)
    }
    fn alphabet(&self) -> usize {
        DecoherenceMatrix::alphabet(self)
    }
    fn dim_hilbert(&self) -> usize {
        DecoherenceMatrix::dim_hilbert(self)
    }
    fn sector(&self) -> Option<Sector> {
        DecoherenceMatrix::sector(self)
    }
    fn af_spectrum(&self) -> Result<Spectrum> {
        self.spectrum()
    }
    fn diagonal(&self) -> Option<Vec<f64>> {
        Some(DecoherenceMatrix::diagonal(self))
    }
    fn offdiag_mass(&self) -> Option<f64> {
        Some(DecoherenceMatrix::offdiag_mass(self))
    }
}

impl EntropySource for OmegaMatrix {
    fn word_len(&self) -> usize {
        OmegaMatrix::word_len(self)
    }
    fn alphabet(&self) -> usize {
        OmegaMatrix::alphabet(self)
    }
    fn dim_hilbert(&self) -> usize {
        OmegaMatrix::dim_hilbert(self)
    }
    fn sector(&self) -> Option<Sector> {
        OmegaMatrix::sector(self)
    }
    fn af_spectrum(&self) -> Result<Spectrum> {
        self.spectrum()
    }
    fn diagonal(&self) -> Option<Vec<f64>> {
        None
    }
    fn offdiag_mass(&self) -> Option<f64> {
        None
    }
}

/// One experiment row. Entropies in nats.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRecord {
    pub n: usize,
    pub s_af: f64,
    pub s_diag: Option<f64>,
    pub s_cl: Option<f64>,
    pub d_symb: Option<f64>,
    pub offdiag_mass: Option<f64>,
    /// `2 log dim`.
    pub bound: f64,
}

/// `2 log dim`, the ceiling on the AF entropy.
pub fn af_bound(dim_hilbert: usize) -> f64 {
    2.0 * (dim_hilbert as f64).ln()
}

fn classical_slice(src: &impl EntropySource, mt: &MeasureTable) -> Result<Vec<f64>> {
    if mt.alphabet() != src.alphabet() || mt.word_len() != src.word_len() {
        return Err(CatError::ShapeMismatch(format!(
            "classical table (L={}, n={}) does not match histories (L={}, n={})",
            mt.alphabet(),
            mt.word_len(),
            src.alphabet(),
            src.word_len()
        )));
    }
    Ok(match src.sector() {
        Some(s) => mt.sector_measures(s),
        None => mt.measures(),
    })
}

/// AF, diagonal and classical entropies plus symbolic distance and
/// off-diagonal mass. For a sector source every quantity is restricted to
/// that sector and left unnormalised.
pub fn entropies(
    src: &impl EntropySource,
    classical: Option<&MeasureTable>,
) -> Result<EntropyRecord> {
    let s_af = spectral_entropy(&src.af_spectrum()?)?;
    let diag = src.diagonal();
    let s_diag = diag.as_deref().map(shannon_entropy).transpose()?;
    let mu = classical.map(|mt| classical_slice(src, mt)).transpose()?;
    let s_cl = mu.as_deref().map(shannon_entropy).transpose()?;
    let d_symb = match (&diag, &mu) {
        (Some(d), Some(m)) => {
            debug_assert_eq!(d.len(), m.len());
            Some(d.iter().zip(m).map(|(a, b)| (a - b).abs()).sum())
        }
        _ => None,
    };
    Ok(EntropyRecord {
        n: src.word_len(),
        s_af,
        s_diag,
        s_cl,
        d_symb,
        offdiag_mass: src.offdiag_mass(),
        bound: af_bound(src.dim_hilbert()),
    })
}

/// Cumulative sums `S_i = Σ_{j ≤ i} s_j` of the terms `s_j = −ζ_j log ζ_j`
/// sorted in descending order.
pub fn cumulative_profile(weights: &[f64]) -> Result<Vec<f64>> {
    let mut terms = weights
        .iter()
        .map(|&w| entropy_term(w))
        .collect::<Result<Vec<f64>>>()?;
    terms.sort_by(|a, b| b.partial_cmp(a).expect("finite entropy terms"));
    let mut acc = 0.0;
    Ok(terms
        .into_iter()
        .map(|t| {
            acc += t;
            acc
        })
        .collect())
}

/// Integrated partial entropies of one history set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialEntropyProfile {
    pub af: Vec<f64>,
    pub diag: Option<Vec<f64>>,
    pub classical: Option<Vec<f64>>,
}

pub fn partial_entropy_profile(
    src: &impl EntropySource,
    classical: Option<&MeasureTable>,
) -> Result<PartialEntropyProfile> {
    let af = cumulative_profile(src.af_spectrum()?.values())?;
    let diag = src.diagonal().map(|d| cumulative_profile(&d)).transpose()?;
    let classical = classical
        .map(|mt| classical_slice(src, mt).and_then(|m| cumulative_profile(&m)))
        .transpose()?;
    Ok(PartialEntropyProfile {
        af,
        diag,
        classical,
    })
}

/// Word ranks (lexicographic) covered by a source.
pub fn source_words(src: &impl EntropySource) -> Vec<usize> {
    enumerate_words(src.alphabet(), src.word_len(), src.sector())
}
