//! Dense complex linear algebra, the unitary DFT, Hermitian eigensolver and
//! Shannon/Von Neumann entropy of a spectrum.

mod dft;
mod matrix;
mod spectral;

pub use dft::{dft, Dft, DftDirection, NAIVE_MAX};
pub use matrix::{ComplexMatrix, ComplexVector, C64, ONE, ZERO};
pub use spectral::{
    eigh, eigvalsh, entropy_term, shannon_entropy, spectral_entropy, Spectrum, CLAMP_WINDOW,
    HERMITIAN_TOL,
};
