use serde::{Deserialize, Serialize};

use crate::classical::DEFAULT_GRID;
use crate::error::{CatError, Result};
use crate::histories::Budget;
use crate::multiparticle::{FactorOrder, InitialState, MultiParams};
use crate::quantum::{CatParams, FreeRotation};
use crate::word::{word_count, Sector};

/// An integer parameter: a single value, an explicit list, or an inclusive
/// span `{"from": a, "to": b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntSet {
    One(u32),
    List(Vec<u32>),
    Span { from: u32, to: u32 },
}

impl IntSet {
    pub fn values(&self) -> Vec<u32> {
        match self {
            IntSet::One(v) => vec![*v],
            IntSet::List(v) => v.clone(),
            IntSet::Span { from, to } => (*from..=*to).collect(),
        }
    }
}

/// Collision strength: explicit values or `factor · 2^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaRule {
    One(f64),
    Values(Vec<f64>),
    Scaled { factor: f64 },
}

/// Light-particle bath used by the partial-entropy experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bath {
    pub r: u32,
    pub i: usize,
    /// A single value, or `{"factor": f}` for `f·2^q`.
    pub kappa: KappaRule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    /// Shannon entropy of the classical strip partition and its increments.
    Classical {
        p: u32,
        n: IntSet,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Full-word AF, diagonal and classical entropies versus `n` and `q`.
    SingleCatEntropy {
        q: IntSet,
        p: u32,
        n: IntSet,
        #[serde(default = "default_grid")]
        grid: usize,
        #[serde(default)]
        free_rotation: FreeRotation,
    },
    /// One sector block of `D` with the classical probabilities.
    SectorMatrix {
        q: u32,
        p: u32,
        n: u32,
        sector: Sector,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Sector statistics over a grid of `q` and word lengths.
    MassSweep {
        q: IntSet,
        p: u32,
        n: IntSet,
        sector: Sector,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Multiparticle sector statistics versus the collision strength.
    KappaSweep {
        q: u32,
        r: u32,
        i: usize,
        p: u32,
        n: u32,
        sector: Sector,
        kappa: Vec<f64>,
        #[serde(default = "default_grid")]
        grid: usize,
        #[serde(default)]
        order: FactorOrder,
    },
    /// Reduced density matrix and Von Neumann entropy of the heavy particle.
    VonNeumann {
        q: u32,
        r: u32,
        i: usize,
        kappa: Vec<f64>,
        n_max: usize,
        #[serde(default = "default_true")]
        kick: bool,
        #[serde(default)]
        initial: InitialState,
        #[serde(default)]
        snapshots: Vec<usize>,
        #[serde(default)]
        order: FactorOrder,
    },
    /// Integrated partial entropies of the AF, diagonal and classical
    /// weights.
    PartialEntropy {
        q: IntSet,
        p: u32,
        n: u32,
        #[serde(default)]
        sector: Option<Sector>,
        #[serde(default)]
        bath: Option<Bath>,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Single- versus multiparticle entropies with `κ = factor·2^q`.
    CombinedLimit {
        q: IntSet,
        r: u32,
        i: usize,
        p: u32,
        n: u32,
        kappa: KappaRule,
        #[serde(default)]
        sector: Option<Sector>,
        #[serde(default = "default_grid")]
        grid: usize,
    },
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default = "d_words")]
    pub max_words: usize,
    #[serde(default = "d_diag")]
    pub max_diagonal_words: usize,
    #[serde(default = "d_omega")]
    pub max_omega_dim: usize,
    #[serde(default = "d_mb")]
    pub memory_mb: u64,
}

fn d_words() -> usize {
    Budget::default().max_words
}
fn d_diag() -> usize {
    Budget::default().max_diagonal_words
}
fn d_omega() -> usize {
    Budget::default().max_omega_dim
}
fn d_mb() -> u64 {
    Budget::default().max_bytes >> 20
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            max_words: d_words(),
            max_diagonal_words: d_diag(),
            max_omega_dim: d_omega(),
            memory_mb: d_mb(),
        }
    }
}

impl BudgetConfig {
    pub fn budget(&self) -> Budget {
        Budget {
            max_words: self.max_words,
            max_diagonal_words: self.max_diagonal_words,
            max_omega_dim: self.max_omega_dim,
            max_bytes: self.memory_mb << 20,
        }
    }
}

/// A complete experiment description.
///
/// ```json
/// {
///   "name": "fig3-saturation",
///   "description": "AF entropy saturation",
///   "experiment": { "kind": "single-cat-entropy", "q": {"from": 2, "to": 5}, "p": 2, "n": {"from": 1, "to": 12} }
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Prefix of every output file.
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Figure the experiment is the analogue of, e.g. `"3"`.
    #[serde(default)]
    pub figure: Option<String>,
    #[serde(default)]
    pub budget: BudgetConfig,
    pub experiment: Experiment,
}

fn invalid(msg: impl Into<String>) -> CatError {
    CatError::ConfigInvalid(msg.into())
}

fn nonempty(name: &str, v: &[u32]) -> Result<()> {
    if v.is_empty() {
        return Err(invalid(format!("`{name}` selects no values")));
    }
    Ok(())
}

fn check_grid(grid: usize, p: u32) -> Result<()> {
    if !grid.is_power_of_two() || grid > 1 << 20 || grid < 1 << p {
        return Err(invalid(format!(
            "grid {grid} must be a power of two in [2^p, 2^20]"
        )));
    }
    Ok(())
}

fn check_words(p: u32, n: u32) -> Result<()> {
    if n == 0 {
        return Err(invalid("word length must be ≥ 1"));
    }
    if word_count(1 << p, n as usize).is_none() {
        return Err(invalid(format!("{}^{n} words overflow", 1u64 << p)));
    }
    Ok(())
}

fn check_sector(s: &Sector, p: u32) -> Result<()> {
    let l = 1usize << p;
    if s.first >= l || s.last >= l {
        return Err(invalid(format!(
            "sector ({}, {}) outside alphabet of {l} symbols",
            s.first, s.last
        )));
    }
    Ok(())
}

fn cat(q: u32, p: u32) -> Result<CatParams> {
    CatParams::new(q, p).map_err(|e| invalid(e.to_string()))
}

fn multi(q: u32, r: u32, i: usize, kappa: f64, p: u32) -> Result<MultiParams> {
    MultiParams::new(q, r, i, kappa, p).map_err(|e| invalid(e.to_string()))
}

impl KappaRule {
    pub fn kappa(&self, q: u32) -> Vec<f64> {
        match self {
            KappaRule::One(k) => vec![*k],
            KappaRule::Values(v) => v.clone(),
            KappaRule::Scaled { factor } => vec![factor * (1u64 << q) as f64],
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every parameter against the module preconditions. Nothing is
    /// computed before this passes.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(invalid(format!(
                "name {:?} must be non-empty ASCII letters, digits, '-' or '_'",
                self.name
            )));
        }
        let b = &self.budget;
        if b.max_words == 0 || b.max_diagonal_words == 0 || b.memory_mb == 0 {
            return Err(invalid("budget limits must be positive"));
        }
        match &self.experiment {
            Experiment::Classical { p, n, grid } => {
                let ns = n.values();
                nonempty("n", &ns)?;
                check_grid(*grid, *p)?;
                if !(1..=16).contains(p) {
                    return Err(invalid("p must lie in 1..=16"));
                }
                for &n in &ns {
                    check_words(*p, n)?;
                }
            }
            Experiment::SingleCatEntropy { q, p, n, grid, .. } => {
                let (qs, ns) = (q.values(), n.values());
                nonempty("q", &qs)?;
                nonempty("n", &ns)?;
                check_grid(*grid, *p)?;
                for &q in &qs {
                    cat(q, *p)?;
                }
                for &n in &ns {
                    check_words(*p, n)?;
                }
            }
            Experiment::SectorMatrix {
                q,
                p,
                n,
                sector,
                grid,
            } => {
                cat(*q, *p)?;
                check_words(*p, *n)?;
                check_sector(sector, *p)?;
                check_grid(*grid, *p)?;
            }
            Experiment::MassSweep {
                q,
                p,
                n,
                sector,
                grid,
            } => {
                let (qs, ns) = (q.values(), n.values());
                nonempty("q", &qs)?;
                nonempty("n", &ns)?;
                for &q in &qs {
                    cat(q, *p)?;
                }
                for &n in &ns {
                    check_words(*p, n)?;
                }
                check_sector(sector, *p)?;
                check_grid(*grid, *p)?;
            }
            Experiment::KappaSweep {
                q,
                r,
                i,
                p,
                n,
                sector,
                kappa,
                grid,
                ..
            } => {
                if kappa.is_empty() {
                    return Err(invalid("`kappa` is empty"));
                }
                for &k in kappa {
                    multi(*q, *r, *i, k, *p)?;
                }
                check_words(*p, *n)?;
                check_sector(sector, *p)?;
                check_grid(*grid, *p)?;
            }
            Experiment::VonNeumann {
                q,
                r,
                i,
                kappa,
                initial,
                snapshots,
                n_max,
                ..
            } => {
                if kappa.is_empty() {
                    return Err(invalid("`kappa` is empty"));
                }
                for &k in kappa {
                    multi(*q, *r, *i, k, 1)?;
                }
                initial
                    .big_state(1 << q)
                    .map_err(|e| invalid(e.to_string()))?;
                if let Some(s) = snapshots.iter().find(|&&s| s > *n_max) {
                    return Err(invalid(format!("snapshot {s} beyond n_max = {n_max}")));
                }
            }
            Experiment::PartialEntropy {
                q,
                p,
                n,
                sector,
                bath,
                grid,
            } => {
                let qs = q.values();
                nonempty("q", &qs)?;
                for &q in &qs {
                    cat(q, *p)?;
                    if let Some(b) = bath {
                        match b.kappa.kappa(q)[..] {
                            [k] => {
                                multi(q, b.r, b.i, k, *p)?;
                            }
                            _ => return Err(invalid("bath needs exactly one κ")),
                        }
                    }
                }
                check_words(*p, *n)?;
                if let Some(s) = sector {
                    check_sector(s, *p)?;
                }
                check_grid(*grid, *p)?;
            }
            Experiment::CombinedLimit {
                q,
                r,
                i,
                p,
                n,
                kappa,
                sector,
                grid,
            } => {
                let qs = q.values();
                nonempty("q", &qs)?;
                for &q in &qs {
                    cat(q, *p)?;
                    let ks = kappa.kappa(q);
                    if ks.is_empty() {
                        return Err(invalid("`kappa` is empty"));
                    }
                    for k in ks {
                        multi(q, *r, *i, k, *p)?;
                    }
                }
                check_words(*p, *n)?;
                if let Some(s) = sector {
                    check_sector(s, *p)?;
                }
                check_grid(*grid, *p)?;
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self.experiment {
            Experiment::Classical { .. } => "classical",
            Experiment::SingleCatEntropy { .. } => "single-cat-entropy",
            Experiment::SectorMatrix { .. } => "sector-matrix",
            Experiment::MassSweep { .. } => "mass-sweep",
            Experiment::KappaSweep { .. } => "kappa-sweep",
            Experiment::VonNeumann { .. } => "von-neumann",
            Experiment::PartialEntropy { .. } => "partial-entropy",
            Experiment::CombinedLimit { .. } => "combined-limit",
        }
    }
}

/// Replaces the value at a dotted path (`experiment.q`, `budget.memory_mb`)
/// in a JSON document; `value` is parsed as JSON, falling back to a string.
pub fn apply_override(doc: &mut serde_json::Value, path: &str, value: &str) -> Result<()> {
    let parsed = serde_json::from_str(value)
        .unwrap_or_else(|_| serde_json::Value::String(value.to_string()));
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (k, part) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| invalid(format!("override path {path:?} crosses a non-object")))?;
        if k + 1 == parts.len() {
            obj.insert(part.to_string(), parsed);
            return Ok(());
        }
        cur = obj
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    Err(invalid("empty override path"))
}
