//! Unitary operators in dense or factorized (matrix-free) form.

use std::ops::Range;

use crate::error::{CatError, Result};
use crate::numerics::{ComplexMatrix, ComplexVector, Dft, DftDirection, C64};

/// Unitarity tolerance enforced when a dense operator is constructed.
pub const CONSTRUCTION_UNITARITY_TOL: f64 = 1e-10;

/// One factor of a matrix-free operator.
#[derive(Clone, Debug)]
pub enum Stage {
    /// Multiply entrywise by a phase vector of full dimension.
    Diagonal(Vec<C64>),
    /// Unitary DFT along one tensor axis. The flat index is
    /// `(outer · len + axis) · inner + rest`.
    AxisDft { len: usize, inner: usize, dft: Dft },
}

impl Stage {
    pub fn axis_dft(len: usize, inner: usize, direction: DftDirection) -> Self {
        Stage::AxisDft {
            len,
            inner,
            dft: Dft::new(len, direction),
        }
    }

    fn apply(&self, v: &mut [C64], scratch: &mut Vec<C64>) {
        match self {
            Stage::Diagonal(d) => {
                debug_assert_eq!(d.len(), v.len());
                v.iter_mut().zip(d).for_each(|(x, p)| *x *= p);
            }
            Stage::AxisDft { len, inner, dft } => {
                let block = len * inner;
                debug_assert_eq!(v.len() % block, 0);
                scratch.resize(*len, C64::default());
                for chunk in v.chunks_mut(block) {
                    for r in 0..*inner {
                        for (a, s) in scratch.iter_mut().enumerate() {
                            *s = chunk[a * inner + r];
                        }
                        dft.process(scratch);
                        for (a, s) in scratch.iter().enumerate() {
                            chunk[a * inner + r] = *s;
                        }
                    }
                }
            }
        }
    }
}

/// Product of stages, applied in list order (the first stage acts first).
#[derive(Clone, Debug)]
pub struct MatrixFreeOperator {
    dim: usize,
    stages: Vec<Stage>,
}

impl MatrixFreeOperator {
    pub fn new(dim: usize, stages: Vec<Stage>) -> Self {
        for st in &stages {
            match st {
                Stage::Diagonal(d) => assert_eq!(d.len(), dim, "diagonal stage dimension"),
                Stage::AxisDft { len, inner, .. } => {
                    assert_eq!(dim % (len * inner), 0, "axis does not tile the space")
                }
            }
        }
        Self { dim, stages }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: MatrixFreeOperator) -> Self {
        assert_eq!(self.dim, next.dim);
        self.stages.extend(next.stages);
        self
    }

    pub fn apply_in_place(&self, v: &mut [C64]) {
        assert_eq!(v.len(), self.dim, "operator/vector dimension mismatch");
        let mut scratch = Vec::new();
        for st in &self.stages {
            st.apply(v, &mut scratch);
        }
    }
}

#[derive(Clone, Debug)]
pub enum UnitaryOperator {
    Dense(ComplexMatrix),
    MatrixFree(MatrixFreeOperator),
}

impl UnitaryOperator {
    /// Wraps a dense matrix after checking `‖U†U − I‖∞`.
    pub fn dense(m: ComplexMatrix) -> Result<Self> {
        let defect = m.unitarity_defect();
        if defect > CONSTRUCTION_UNITARITY_TOL {
            return Err(CatError::InvariantViolation(format!(
                "operator is not unitary: ‖U†U − I‖∞ = {defect:e}"
            )));
        }
        Ok(Self::Dense(m))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Dense(m) => m.rows(),
            Self::MatrixFree(op) => op.dim(),
        }
    }

    pub fn apply_in_place(&self, v: &mut [C64]) {
        match self {
            Self::Dense(m) => {
                let out = m.mul_vec(v);
                v.copy_from_slice(&out);
            }
            Self::MatrixFree(op) => op.apply_in_place(v),
        }
    }

    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        let mut out = v.clone();
        self.apply_in_place(&mut out);
        out
    }

    /// Dense matrix of the operator; matrix-free forms are applied to every
    /// basis vector.
    pub fn to_dense(&self) -> ComplexMatrix {
        match self {
            Self::Dense(m) => m.clone(),
            Self::MatrixFree(op) => {
                let n = op.dim();
                let mut m = ComplexMatrix::zeros(n, n);
                for l in 0..n {
                    let col = self.apply(&ComplexVector::basis(n, l));
                    for (k, z) in col.iter().enumerate() {
                        m[(k, l)] = *z;
                    }
                }
                m
            }
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.to_dense().unitarity_defect()
    }
}

/// Orthogonal projectors onto consecutive blocks of basis states; they sum
/// to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorFamily {
    dim: usize,
    blocks: Vec<Range<usize>>,
}

impl ProjectorFamily {
    /// `count` projectors of equal rank `dim / count`.
    pub fn uniform(dim: usize, count: usize) -> Result<Self> {
        if count == 0 || !dim.is_multiple_of(count) {
            return Err(CatError::InvalidParams(format!(
                "{count} equal blocks do not tile dimension {dim}"
            )));
        }
        let size = dim / count;
        Ok(Self {
            dim,
            blocks: (0..count).map(|l| l * size..(l + 1) * size).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of projectors (alphabet size).
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, l: usize) -> Range<usize> {
        self.blocks[l].clone()
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Rank of `P_l`, i.e. its trace.
    pub fn rank(&self, l: usize) -> usize {
        self.blocks[l].len()
    }

    pub fn to_dense(&self, l: usize) -> ComplexMatrix {
        let r = self.block(l);
        ComplexMatrix::from_fn(self.dim, self.dim, |k, m| {
            if k == m && r.contains(&k) {
                C64::new(1.0, 0.0)
            } else {
                C64::default()
            }
        })
    }

    pub fn project_in_place(&self, l: usize, v: &mut [C64]) {
        let r = self.block(l);
        for (i, z) in v.iter_mut().enumerate() {
            if !r.contains(&i) {
                *z = C64::default();
            }
        }
    }
}
