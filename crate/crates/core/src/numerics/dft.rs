//! Unitary discrete Fourier transform between the position lattice and the
//! momentum lattice.
//!
//! `Forward` maps position amplitudes ψ(X_j) to momentum amplitudes
//! c_k = N^{-1/2} Σ_j ψ(X_j) e^{+2πi kj/N}; `Inverse` undoes it with the
//! opposite sign. Lengths up to [`NAIVE_MAX`] use a direct sum over an exact
//! twiddle table, longer ones go through rustfft.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftDirection, FftPlanner};

use super::matrix::{ComplexVector, C64};

/// Largest length evaluated with the quadratic kernel.
pub const NAIVE_MAX: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DftDirection {
    /// Kernel e^{+2πi kj/N}: position → momentum.
    Forward,
    /// Kernel e^{−2πi kj/N}: momentum → position.
    Inverse,
}

impl DftDirection {
    fn sign(self) -> f64 {
        match self {
            DftDirection::Forward => 1.0,
            DftDirection::Inverse => -1.0,
        }
    }
}

/// Reusable transform of a fixed length.
#[derive(Clone)]
pub struct Dft {
    len: usize,
    direction: DftDirection,
    kernel: Kernel,
}

#[derive(Clone)]
enum Kernel {
    Naive { twiddles: Vec<C64> },
    Fast(Arc<dyn Fft<f64>>),
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft")
            .field("len", &self.len)
            .field("direction", &self.direction)
            .finish()
    }
}

impl Dft {
    pub fn new(len: usize, direction: DftDirection) -> Self {
        assert!(len >= 1, "transform length must be at least 1");
        let kernel = if len <= NAIVE_MAX {
            let sign = direction.sign();
            let twiddles = (0..len)
                .map(|m| C64::from_polar(1.0, sign * 2.0 * PI * m as f64 / len as f64))
                .collect();
            Kernel::Naive { twiddles }
        } else {
            // rustfft's forward transform carries e^{-2πi kj/N}
            let dir = match direction {
                DftDirection::Forward => FftDirection::Inverse,
                DftDirection::Inverse => FftDirection::Forward,
            };
            Kernel::Fast(FftPlanner::new().plan_fft(len, dir))
        };
        Self {
            len,
            direction,
            kernel,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn direction(&self) -> DftDirection {
        self.direction
    }

    /// Transform `data` in place.
    pub fn process(&self, data: &mut [C64]) {
        assert_eq!(data.len(), self.len, "transform length mismatch");
        let norm = 1.0 / (self.len as f64).sqrt();
        match &self.kernel {
            Kernel::Naive { twiddles } => {
                let n = self.len;
                let out: Vec<C64> = (0..n)
                    .map(|k| {
                        data.iter()
                            .enumerate()
                            .map(|(j, &x)| x * twiddles[(k * j) % n])
                            .sum::<C64>()
                            * norm
                    })
                    .collect();
                data.copy_from_slice(&out);
            }
            Kernel::Fast(plan) => {
                plan.process(data);
                data.iter_mut().for_each(|z| *z *= norm);
            }
        }
    }
}

/// One-shot unitary DFT of `v`.
pub fn dft(v: &ComplexVector, direction: DftDirection) -> ComplexVector {
    let mut out = v.clone();
    Dft::new(v.dim(), direction).process(&mut out);
    out
}
