//! Numerical laboratory for the quantized Arnol'd cat map.
//!
//! The crate covers the classical cat map and its cylinder-set entropies,
//! the single-particle quantum cat `U = K·U⁰` on `C^N`, the consistent
//! histories decoherence matrix with its Alicki–Fannes, diagonal and
//! classical entropies, and the multiparticle cat, where a heavy particle
//! collides with light ones and decoheres. [`harness`] runs declarative
//! experiments and writes CSV series; the `catlab` binary is a thin CLI on
//! top of it.

pub mod classical;
pub mod error;
pub mod harness;
pub mod histories;
pub mod io;
pub mod multiparticle;
pub mod numerics;
pub mod operator;
pub mod quantum;
pub mod word;

pub use error::{CatError, Result};
