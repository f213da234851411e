//! One heavy cat particle colliding with `I` light free particles.
//!
//! The joint space is `C^N ⊗ (C^ν)^{⊗I}` with `N = 2^q`, `ν = 2^r`; the
//! heavy particle is the most significant tensor factor, so the flat index
//! of `|j₀, j₁, …, j_I>` is `j₀·ν^I + Σ_i j_i·ν^{I−i}`. Light particle `i`
//! sits on the heavy lattice site `(N/ν)·j_i + s_i`; every coincidence with
//! `j₀` costs a phase `e^{−iκ}` per period.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{CatError, Result};
use crate::histories::{decoherence_matrix, Budget, DecoherenceMatrix};
use crate::io::{fmt_sig, CsvTable};
use crate::numerics::{eigvalsh, spectral_entropy, ComplexMatrix, ComplexVector, C64};
use crate::operator::{MatrixFreeOperator, ProjectorFamily, Stage, UnitaryOperator};
use crate::quantum::{free_rotation_matrix, free_rotation_stages, kick_phases, FreeRotation};
use crate::word::Sector;

/// Largest joint dimension built as a dense matrix.
pub const MAX_DENSE_DIM: usize = 1024;

/// Largest joint dimension accepted at all (state vectors only).
pub const MAX_JOINT_DIM: usize = 1 << 24;

/// Order of the three factors inside one period.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorOrder {
    /// `U = K · U⁰ · C(κ)`: collide, rotate freely, kick.
    #[default]
    CollisionFirst,
    /// `U = C(κ) · K · U⁰`.
    CollisionLast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiParams {
    /// Heavy particle, `N = 2^q`.
    pub q: u32,
    /// Light particles, `ν = 2^r`.
    pub r: u32,
    /// Number of light particles.
    #[serde(rename = "i")]
    pub particles: usize,
    /// Collision phase per coincidence and period.
    pub kappa: f64,
    /// Partition exponent of the heavy-particle projectors.
    pub p: u32,
    /// Integer lattice offsets in `[0, N/ν)`; empty means all zero.
    #[serde(default)]
    pub shifts: Vec<usize>,
    /// `false` drops the cat kick (free heavy particle).
    #[serde(default = "default_true")]
    pub kick: bool,
    #[serde(default)]
    pub order: FactorOrder,
    #[serde(default)]
    pub free_rotation: FreeRotation,
}

fn default_true() -> bool {
    true
}

impl MultiParams {
    pub fn new(q: u32, r: u32, particles: usize, kappa: f64, p: u32) -> Result<Self> {
        let params = Self {
            q,
            r,
            particles,
            kappa,
            p,
            shifts: Vec::new(),
            kick: true,
            order: FactorOrder::default(),
            free_rotation: FreeRotation::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_shifts(mut self, shifts: Vec<usize>) -> Result<Self> {
        self.shifts = shifts;
        self.validate()?;
        Ok(self)
    }

    pub fn without_kick(mut self) -> Self {
        self.kick = false;
        self
    }

    pub fn with_order(mut self, order: FactorOrder) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CatError::InvalidParams(m));
        if self.q < 1 || self.q > crate::quantum::MAX_Q {
            return bad(format!("q={} out of range", self.q));
        }
        if self.r > self.q {
            return bad(format!("r={} must not exceed q={}", self.r, self.q));
        }
        if self.p < 1 || self.p > self.q {
            return bad(format!("p={} must satisfy 1 ≤ p ≤ q={}", self.p, self.q));
        }
        if !self.kappa.is_finite() {
            return bad("κ must be finite".into());
        }
        let bits = self.q as u64 + self.r as u64 * self.particles as u64;
        if bits > MAX_JOINT_DIM.trailing_zeros() as u64 {
            return Err(CatError::BudgetExceeded {
                what: "joint Hilbert dimension (log2)",
                needed: bits,
                limit: MAX_JOINT_DIM.trailing_zeros() as u64,
            });
        }
        if !self.shifts.is_empty() {
            if self.shifts.len() != self.particles {
                return bad(format!(
                    "{} shifts given for {} light particles",
                    self.shifts.len(),
                    self.particles
                ));
            }
            let spacing = self.spacing();
            if let Some(s) = self.shifts.iter().find(|&&s| s >= spacing) {
                return bad(format!("shift {s} must lie in [0, N/ν = {spacing})"));
            }
        }
        Ok(())
    }

    pub fn big_dim(&self) -> usize {
        1 << self.q
    }

    pub fn small_dim(&self) -> usize {
        1 << self.r
    }

    /// `ν^I`, the dimension of the environment.
    pub fn env_dim(&self) -> usize {
        1 << (self.r as usize * self.particles)
    }

    /// `N·ν^I`.
    pub fn dim(&self) -> usize {
        self.big_dim() * self.env_dim()
    }

    /// Heavy lattice sites between consecutive light-particle sites, `N/ν`.
    pub fn spacing(&self) -> usize {
        self.big_dim() / self.small_dim()
    }

    /// `m/M = ν/N`.
    pub fn mass_ratio(&self) -> f64 {
        self.small_dim() as f64 / self.big_dim() as f64
    }

    fn shift(&self, i: usize) -> usize {
        self.shifts.get(i).copied().unwrap_or(0)
    }

    /// The AF bound of the joint space, `2 log(N ν^I)`.
    pub fn af_bound(&self) -> f64 {
        2.0 * (self.dim() as f64).ln()
    }
}

/// `|j₀, j₁, …, j_I>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointIndex {
    pub big: usize,
    pub small: Vec<usize>,
}

impl JointIndex {
    pub fn from_flat(flat: usize, params: &MultiParams) -> Self {
        let nu = params.small_dim();
        let env = params.env_dim();
        let mut rest = flat % env;
        let mut small = vec![0; params.particles];
        for slot in small.iter_mut().rev() {
            *slot = rest % nu;
            rest /= nu;
        }
        Self {
            big: flat / env,
            small,
        }
    }

    pub fn flat(&self, params: &MultiParams) -> usize {
        let nu = params.small_dim();
        self.small
            .iter()
            .fold(self.big, |acc, &j| acc * nu + j)
    }
}

/// Number of light particles sitting on the heavy particle's site.
pub fn collision_count(j: &JointIndex, params: &MultiParams) -> usize {
    let spacing = params.spacing();
    j.small
        .iter()
        .enumerate()
        .filter(|&(i, &ji)| j.big == spacing * ji + params.shift(i))
        .count()
}

fn collision_phases(params: &MultiParams) -> Vec<C64> {
    let phase: Vec<C64> = (0..=params.particles)
        .map(|c| C64::from_polar(1.0, -params.kappa * c as f64))
        .collect();
    (0..params.dim())
        .map(|f| phase[collision_count(&JointIndex::from_flat(f, params), params)])
        .collect()
}

fn kick_diagonal(params: &MultiParams) -> Vec<C64> {
    let env = params.env_dim();
    let kick = kick_phases(params.big_dim());
    (0..params.dim()).map(|f| kick[f / env]).collect()
}

/// One-period propagator as a dense matrix; `dim ≤ MAX_DENSE_DIM`.
pub fn build_period_propagator(params: &MultiParams) -> Result<UnitaryOperator> {
    params.validate()?;
    let dim = params.dim();
    if dim > MAX_DENSE_DIM {
        return Err(CatError::BudgetExceeded {
            what: "dense joint dimension",
            needed: dim as u64,
            limit: MAX_DENSE_DIM as u64,
        });
    }
    let small = free_rotation_matrix(params.small_dim(), params.free_rotation);
    let mut u = free_rotation_matrix(params.big_dim(), params.free_rotation);
    for _ in 0..params.particles {
        u = u.kron(&small);
    }
    let ones = vec![C64::new(1.0, 0.0); dim];
    let kick = if params.kick {
        kick_diagonal(params)
    } else {
        ones.clone()
    };
    let coll = collision_phases(params);
    // rows carry the left diagonal factor, columns the right one
    let (left, right) = match params.order {
        FactorOrder::CollisionFirst => (kick, coll),
        FactorOrder::CollisionLast => (
            kick.iter().zip(&coll).map(|(k, c)| k * c).collect(),
            ones,
        ),
    };
    for (k, lk) in left.iter().enumerate() {
        for (z, rl) in u.row_mut(k).iter_mut().zip(&right) {
            *z *= lk * rl;
        }
    }
    Ok(UnitaryOperator::Dense(u))
}

/// One-period propagator as diagonal and per-axis DFT stages; cost
/// `O(dim·log dim)` per application and no dense limit.
pub fn build_period_propagator_matrix_free(params: &MultiParams) -> Result<UnitaryOperator> {
    params.validate()?;
    let dim = params.dim();
    let nu = params.small_dim();
    let mut free = free_rotation_stages(params.big_dim(), params.env_dim(), dim, params.free_rotation);
    for i in 1..=params.particles {
        let inner = 1 << (params.r as usize * (params.particles - i));
        free.extend(free_rotation_stages(nu, inner, dim, params.free_rotation));
    }
    let coll = Stage::Diagonal(collision_phases(params));
    let mut stages = Vec::new();
    if params.order == FactorOrder::CollisionFirst {
        stages.push(coll.clone());
    }
    stages.extend(free);
    if params.kick {
        stages.push(Stage::Diagonal(kick_diagonal(params)));
    }
    if params.order == FactorOrder::CollisionLast {
        stages.push(coll);
    }
    Ok(UnitaryOperator::MatrixFree(MatrixFreeOperator::new(dim, stages)))
}

/// `P_l ⊗ I_env`: heavy-particle strips, contiguous blocks of `Q·ν^I`.
pub fn big_projectors(params: &MultiParams) -> ProjectorFamily {
    ProjectorFamily::uniform(params.dim(), 1 << params.p).expect("2^p divides N·ν^I")
}

/// Heavy-particle density matrix.
#[derive(Clone, Debug)]
pub struct ReducedDensityMatrix {
    matrix: ComplexMatrix,
}

impl ReducedDensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `−Tr ρ̂ log ρ̂`.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        spectral_entropy(&eigvalsh(&self.matrix)?)
    }

    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let herm = self.matrix.hermiticity_defect();
        let tr = self.trace();
        if herm > tol || (tr - 1.0).abs() > tol {
            return Err(CatError::InvariantViolation(format!(
                "reduced density matrix: hermiticity defect {herm:e}, trace {tr}"
            )));
        }
        let spec = eigvalsh(&self.matrix)?;
        if let Some(&min) = spec.values().last() {
            if min < -tol {
                return Err(CatError::NegativeEigenvalue { value: min });
            }
        }
        Ok(())
    }

    /// Heat-map grid, columns `j0p,j0,abs`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["j0p", "j0", "abs"]);
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                t.push(vec![
                    a.to_string(),
                    b.to_string(),
                    fmt_sig(self.matrix[(a, b)].norm()),
                ]);
            }
        }
        t
    }
}

/// `ρ̂_{j₀′,j₀} = Σ_env ρ_{(j₀′,env),(j₀,env)}` for a joint density matrix.
pub fn partial_trace(rho: &ComplexMatrix, params: &MultiParams) -> Result<ReducedDensityMatrix> {
    let dim = params.dim();
    if rho.rows() != dim || rho.cols() != dim {
        return Err(CatError::ShapeMismatch(format!(
            "density matrix is {}×{}, joint space has dimension {dim}",
            rho.rows(),
            rho.cols()
        )));
    }
    let env = params.env_dim();
    let matrix = ComplexMatrix::from_fn(params.big_dim(), params.big_dim(), |a, b| {
        (0..env).map(|e| rho[(a * env + e, b * env + e)]).sum()
    });
    Ok(ReducedDensityMatrix { matrix })
}

/// Reduced matrix of a pure joint state, `A·A†` with `A` the `N × ν^I`
/// reshaping of `ψ`.
pub fn reduce_pure(psi: &[C64], params: &MultiParams) -> Result<ReducedDensityMatrix> {
    if psi.len() != params.dim() {
        return Err(CatError::ShapeMismatch(format!(
            "state has dimension {}, joint space {}",
            psi.len(),
            params.dim()
        )));
    }
    let env = params.env_dim();
    let a = ComplexMatrix::from_row_major(params.big_dim(), env, psi.to_vec());
    Ok(ReducedDensityMatrix {
        matrix: a.matmul(&a.adjoint()),
    })
}

/// Heavy-particle state at `n = 0`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum InitialState {
    /// One Gaussian packet of width `N/16` sites at `X = 1/4` with momentum
    /// `N/16`.
    #[default]
    SinglePacket,
    /// Two Gaussian packets of width `N/16` sites at `X = 1/4` and `3/4`
    /// moving with momentum `N/16`.
    SchrodingerCat,
    /// One Gaussian packet; `center` in `[0, 1)`, `width` and `momentum` in
    /// lattice units.
    Packet {
        center: f64,
        width: f64,
        momentum: f64,
    },
    /// A position eigenstate.
    Site { j: usize },
}

fn packet(n: usize, center: f64, width: f64, momentum: f64) -> Vec<C64> {
    let c = center * n as f64;
    (0..n)
        .map(|j| {
            let mut d = (j as f64 - c).rem_euclid(n as f64);
            if d > n as f64 / 2.0 {
                d -= n as f64;
            }
            let amp = (-d * d / (2.0 * width * width)).exp();
            C64::from_polar(amp, 2.0 * PI * momentum * j as f64 / n as f64)
        })
        .collect()
}

impl InitialState {
    /// Normalised heavy-particle wave function on `C^n`.
    pub fn big_state(&self, n: usize) -> Result<ComplexVector> {
        let w = (n as f64 / 16.0).max(0.5);
        let k = n as f64 / 16.0;
        let v = match *self {
            InitialState::SinglePacket => packet(n, 0.25, w, k),
            InitialState::SchrodingerCat => {
                let a = packet(n, 0.25, w, k);
                let b = packet(n, 0.75, w, k);
                a.iter().zip(&b).map(|(x, y)| x + y).collect()
            }
            InitialState::Packet {
                center,
                width,
                momentum,
            } => {
                if width.is_nan() || width <= 0.0 || !center.is_finite() || !momentum.is_finite() {
                    return Err(CatError::InvalidParams("packet needs width > 0".into()));
                }
                packet(n, center, width, momentum)
            }
            InitialState::Site { j } => {
                if j >= n {
                    return Err(CatError::InvalidParams(format!("site {j} outside 0..{n}")));
                }
                ComplexVector::basis(n, j).into_inner()
            }
        };
        let v = ComplexVector::new(v);
        if v.norm() == 0.0 {
            return Err(CatError::InvalidParams("initial state vanishes".into()));
        }
        Ok(v.normalized())
    }

    /// `ψ_big ⊗ u ⊗ … ⊗ u` with `u` the uniform light-particle state.
    pub fn joint_state(&self, params: &MultiParams) -> Result<ComplexVector> {
        let big = self.big_state(params.big_dim())?;
        let env = params.env_dim();
        let amp = 1.0 / (env as f64).sqrt();
        Ok(ComplexVector::new(
            big.iter()
                .flat_map(|b| std::iter::repeat_n(b * amp, env))
                .collect(),
        ))
    }
}

/// One point of a Von Neumann run.
#[derive(Clone, Debug)]
pub struct VonNeumannPoint {
    pub n: usize,
    pub s_vn: f64,
    pub snapshot: Option<ReducedDensityMatrix>,
}

/// Evolves `initial` for `n_max` periods, recording `S_VN(n)` for
/// `n = 0..=n_max` and `ρ̂` at the periods listed in `snapshots`.
pub fn von_neumann_run(
    params: &MultiParams,
    initial: &InitialState,
    n_max: usize,
    snapshots: &[usize],
) -> Result<Vec<VonNeumannPoint>> {
    let u = build_period_propagator_matrix_free(params)?;
    let mut psi = initial.joint_state(params)?.into_inner();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            u.apply_in_place(&mut psi);
        }
        let rho = reduce_pure(&psi, params)?;
        rho.check_invariants(1e-9)?;
        let s_vn = rho.von_neumann_entropy()?;
        out.push(VonNeumannPoint {
            n,
            s_vn,
            snapshot: snapshots.contains(&n).then_some(rho),
        });
    }
    Ok(out)
}

/// Decoherence matrix of heavy-particle histories, `ρ = I/(N ν^I)`.
pub fn multiparticle_histories(
    params: &MultiParams,
    n: usize,
    sector: Option<Sector>,
    budget: &Budget,
) -> Result<DecoherenceMatrix> {
    let u = build_period_propagator(params)?;
    decoherence_matrix(&u, &big_projectors(params), n, sector, budget)
}
