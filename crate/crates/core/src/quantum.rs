//! The single-particle quantized cat on `C^N`, `N = 2^q`.
//!
//! Units are fixed by L = T = h = 1, so the mass equals `N`. The period
//! propagator is `U = K·U⁰`: free rotation followed by the kick.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{CatError, Result};
use crate::numerics::{ComplexMatrix, DftDirection, C64};
use crate::operator::{MatrixFreeOperator, ProjectorFamily, Stage, UnitaryOperator};

/// Largest mass exponent accepted by [`CatParams`].
pub const MAX_Q: u32 = 20;

/// Which kernel to use for the free rotation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeRotation {
    /// `U⁰ = F⁻¹ · diag(e^{−iπk²/N}) · F` in the position basis, where `F`
    /// is the position→momentum DFT. `K·U⁰` then has kernel
    /// `e^{iπ(2k² − 2kl + l²)/N}/√N` up to a global phase, the quantization
    /// of (x, y) → (x + y, x + 2y).
    #[default]
    PositionRepresentation,
    /// The literal kernel `U⁰_kl = e^{−iπl²/N} e^{2πikl/N}/√N`, i.e.
    /// `F · diag(e^{−iπl²/N})` with a single transform. Combined with the
    /// kick it quantizes the elliptic map (x, y) → (x − y, 2x − y), so it is
    /// kept for comparison only.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    /// Mass exponent, `N = 2^q`.
    pub q: u32,
    /// Partition exponent, `L = 2^p` strips.
    pub p: u32,
    /// Lattice shift in `[0, 1/N)`; the single-particle operators do not
    /// depend on it.
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub free_rotation: FreeRotation,
}

impl CatParams {
    pub fn new(q: u32, p: u32) -> Result<Self> {
        let params = Self {
            q,
            p,
            s: 0.0,
            free_rotation: FreeRotation::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_free_rotation(mut self, fr: FreeRotation) -> Self {
        self.free_rotation = fr;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 1 || self.q > MAX_Q {
            return Err(CatError::InvalidParams(format!(
                "q={} must lie in 1..={MAX_Q}",
                self.q
            )));
        }
        if self.p < 1 || self.p > self.q {
            return Err(CatError::InvalidParams(format!(
                "p={} must satisfy 1 ≤ p ≤ q={}",
                self.p, self.q
            )));
        }
        if !(0.0..1.0 / self.dim() as f64).contains(&self.s) {
            return Err(CatError::InvalidParams(format!(
                "lattice shift s={} must lie in [0, 1/N)",
                self.s
            )));
        }
        Ok(())
    }

    /// Hilbert-space dimension `N = 2^q`.
    pub fn dim(&self) -> usize {
        1 << self.q
    }

    /// Number of strips `L = 2^p`.
    pub fn alphabet(&self) -> usize {
        1 << self.p
    }

    /// Rank of each projector, `Q = 2^{q−p}` (one when `p = q`).
    pub fn block(&self) -> usize {
        1 << (self.q - self.p)
    }

    /// Position of lattice site `j`: `X_j = j/N + s`.
    pub fn lattice_point(&self, j: usize) -> f64 {
        j as f64 / self.dim() as f64 + self.s
    }
}

/// `e^{iπ·sign·m²/n}` with `m²` reduced mod `2n` before scaling.
fn quadratic_phase(m: usize, n: usize, sign: f64) -> C64 {
    let r = ((m as u128 * m as u128) % (2 * n as u128)) as f64;
    C64::from_polar(1.0, sign * PI * r / n as f64)
}

/// `e^{2πi·sign·m/n}` with `m` reduced mod `n`.
fn linear_phase(m: usize, n: usize, sign: f64) -> C64 {
    C64::from_polar(1.0, sign * 2.0 * PI * (m % n) as f64 / n as f64)
}

/// Kinetic phases `e^{−iπk²/n}` over the momentum lattice.
pub fn momentum_phases(n: usize) -> Vec<C64> {
    (0..n).map(|k| quadratic_phase(k, n, -1.0)).collect()
}

/// Kick phases `e^{iπl²/n}` over the position lattice.
pub fn kick_phases(n: usize) -> Vec<C64> {
    (0..n).map(|l| quadratic_phase(l, n, 1.0)).collect()
}

/// Dense free-rotation matrix on `C^n`.
pub fn free_rotation_matrix(n: usize, convention: FreeRotation) -> ComplexMatrix {
    let norm = 1.0 / (n as f64).sqrt();
    match convention {
        FreeRotation::AsPrinted => ComplexMatrix::from_fn(n, n, |k, l| {
            quadratic_phase(l, n, -1.0) * linear_phase(k * l, n, 1.0) * norm
        }),
        FreeRotation::PositionRepresentation => {
            let phases = momentum_phases(n);
            let inv_n = 1.0 / n as f64;
            ComplexMatrix::from_fn(n, n, |k, l| {
                // Σ_m e^{−2πi km/n} e^{−iπm²/n} e^{2πi ml/n} / n
                let shift = (l + n - k % n) % n;
                phases
                    .iter()
                    .enumerate()
                    .map(|(m, ph)| ph * linear_phase(m * shift, n, 1.0))
                    .sum::<C64>()
                    * inv_n
            })
        }
    }
}

/// Stages of the free rotation acting on one tensor axis of length `len`
/// with `inner` trailing states, inside a space of dimension `dim`.
pub fn free_rotation_stages(
    len: usize,
    inner: usize,
    dim: usize,
    convention: FreeRotation,
) -> Vec<Stage> {
    let phases = momentum_phases(len);
    let expanded: Vec<C64> = (0..dim).map(|i| phases[(i / inner) % len]).collect();
    match convention {
        FreeRotation::PositionRepresentation => vec![
            Stage::axis_dft(len, inner, DftDirection::Forward),
            Stage::Diagonal(expanded),
            Stage::axis_dft(len, inner, DftDirection::Inverse),
        ],
        // columns of the printed kernel are momentum labels: phase first,
        // then the e^{+2πikl/N} sum
        FreeRotation::AsPrinted => vec![
            Stage::Diagonal(expanded),
            Stage::axis_dft(len, inner, DftDirection::Forward),
        ],
    }
}

/// Free rotation `U⁰` as a dense operator.
pub fn build_u0(params: &CatParams) -> UnitaryOperator {
    UnitaryOperator::Dense(free_rotation_matrix(params.dim(), params.free_rotation))
}

/// Free rotation `U⁰` as DFT and phase stages.
pub fn build_u0_matrix_free(params: &CatParams) -> UnitaryOperator {
    let n = params.dim();
    UnitaryOperator::MatrixFree(MatrixFreeOperator::new(
        n,
        free_rotation_stages(n, 1, n, params.free_rotation),
    ))
}

/// Kick `K = diag(e^{iπl²/N})`. Normalised to be unitary.
pub fn build_kick(params: &CatParams) -> UnitaryOperator {
    UnitaryOperator::Dense(ComplexMatrix::from_diagonal(&kick_phases(params.dim())))
}

/// `U = K·U⁰`, dense.
pub fn build_cat_unitary(params: &CatParams) -> UnitaryOperator {
    let n = params.dim();
    let kick = kick_phases(n);
    let mut u = free_rotation_matrix(n, params.free_rotation);
    for (k, ph) in kick.iter().enumerate() {
        u.row_mut(k).iter_mut().for_each(|z| *z *= ph);
    }
    UnitaryOperator::Dense(u)
}

/// `U = K·U⁰` as a product of stages.
pub fn build_cat_unitary_matrix_free(params: &CatParams) -> UnitaryOperator {
    let n = params.dim();
    let mut stages = free_rotation_stages(n, 1, n, params.free_rotation);
    stages.push(Stage::Diagonal(kick_phases(n)));
    UnitaryOperator::MatrixFree(MatrixFreeOperator::new(n, stages))
}

/// The `2^p` position-strip projectors, `P_l` spanning `|lQ>…|(l+1)Q − 1>`.
pub fn build_projectors(params: &CatParams) -> ProjectorFamily {
    ProjectorFamily::uniform(params.dim(), params.alphabet()).expect("Q·L = N by construction")
}
