use faer::Side;

use super::matrix::ComplexMatrix;
use crate::error::{CatError, Result};

/// Tolerance on `max |m − m†|` accepted by [`eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-CLAMP_WINDOW, 0)` are rounding noise and count as zero.
pub const CLAMP_WINDOW: f64 = 1e-10;

/// Real eigenvalues sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `values` descending. NaNs are rejected.
    pub fn new(mut values: Vec<f64>) -> Self {
        assert!(values.iter().all(|x| !x.is_nan()), "NaN in spectrum");
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Eigenvalues strictly above `threshold`, still descending.
    pub fn nonzero(&self, threshold: f64) -> Vec<f64> {
        self.0.iter().copied().filter(|&x| x > threshold).collect()
    }
}

/// Hermitian eigendecomposition: eigenvalues descending, eigenvectors as the
/// matching columns of the returned matrix.
pub fn eigh(m: &ComplexMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    check_hermitian(m)?;
    let evd = m
        .view()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| CatError::NoConvergence)?;
    let n = m.rows();
    let s = evd.S().column_vector();
    let u = evd.U();
    // faer returns ascending order; reverse both
    let values: Vec<f64> = (0..n).rev().map(|i| s[i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |k, l| u[(k, n - 1 - l)]);
    Ok((Spectrum(values), vectors))
}

/// Eigenvalues only.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let values = m
        .view()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| CatError::NoConvergence)?;
    Ok(Spectrum::new(values))
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(CatError::ShapeMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(CatError::NotHermitian {
            defect,
            tolerance: HERMITIAN_TOL,
        });
    }
    Ok(())
}

/// `−Σ λ log λ` in nats, with `0·log 0 = 0`.
pub fn spectral_entropy(s: &Spectrum) -> Result<f64> {
    shannon_entropy(s.values())
}

/// Shannon entropy (nats) of a list of weights; same clamping rules as
/// [`spectral_entropy`]. Order does not matter.
pub fn shannon_entropy(weights: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &w in weights {
        total += entropy_term(w)?;
    }
    Ok(total)
}

/// `−w log w` for a single weight after clamping.
pub fn entropy_term(w: f64) -> Result<f64> {
    if w < -CLAMP_WINDOW {
        return Err(CatError::NegativeEigenvalue { value: w });
    }
    Ok(if w > 0.0 { -w * w.ln() } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::C64;

    #[test]
    fn identity_spectrum() {
        let (s, _) = eigh(&ComplexMatrix::identity(3)).unwrap();
        for &x in s.values() {
            assert!((x - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_spectrum_descending() {
        let m = ComplexMatrix::from_real_rows(&[&[0.3, 0.0], &[0.0, 0.7]]);
        let (s, _) = eigh(&m).unwrap();
        assert!((s.values()[0] - 0.7).abs() < 1e-14);
        assert!((s.values()[1] - 0.3).abs() < 1e-14);
    }

    #[test]
    fn rank_one_projector() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let (s, v) = eigh(&m).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-14);
        assert!(s.values()[1].abs() < 1e-14);
        let top = v.column(0);
        assert!((top[0].norm() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reconstruction() {
        let m = ComplexMatrix::from_fn(5, 5, |k, l| {
            let a = C64::new((k + l) as f64 * 0.1, (k as f64 - l as f64) * 0.3);
            if k == l {
                C64::new(a.re, 0.0)
            } else {
                a
            }
        });
        let (s, v) = eigh(&m).unwrap();
        let lambda: Vec<C64> = s.values().iter().map(|&x| C64::new(x, 0.0)).collect();
        let rebuilt = v
            .matmul(&ComplexMatrix::from_diagonal(&lambda))
            .matmul(&v.adjoint());
        assert!(rebuilt.max_abs_diff(&m) < 1e-9 * m.max_abs());
        assert!(v.unitarity_defect() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(eigh(&m), Err(CatError::NotHermitian { .. })));
    }

    #[test]
    fn entropy_examples() {
        let e = |v: &[f64]| spectral_entropy(&Spectrum::new(v.to_vec())).unwrap();
        assert_eq!(e(&[1.0, 0.0, 0.0]), 0.0);
        assert!((e(&[0.25; 4]) - 4f64.ln()).abs() < 1e-15);
        // −(0.5 ln 0.5 + 0.3 ln 0.3 + 0.2 ln 0.2)
        assert!((e(&[0.5, 0.3, 0.2]) - 1.029_653_014_064_573_7).abs() < 1e-12);
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let s = Spectrum::new(vec![1.0, -5e-11]);
        assert_eq!(spectral_entropy(&s).unwrap(), 0.0);
        let s = Spectrum::new(vec![1.0, -1e-9]);
        assert!(matches!(
            spectral_entropy(&s),
            Err(CatError::NegativeEigenvalue { .. })
        ));
    }
}
