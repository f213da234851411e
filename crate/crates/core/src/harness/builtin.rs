use crate::error::{CatError, Result};

use super::config::ExperimentConfig;

/// A figure-reproduction config shipped with the crate.
#[derive(Clone, Copy, Debug)]
pub struct BuiltinExperiment {
    pub name: &'static str,
    pub json: &'static str,
}

macro_rules! builtin {
    ($($name:literal),* $(,)?) => {
        &[$(BuiltinExperiment {
            name: $name,
            json: include_str!(concat!("../../experiments/", $name, ".json")),
        }),*]
    };
}

const BUILTIN: &[BuiltinExperiment] = builtin![
    "classical-ks",
    "fig03-saturation",
    "fig04-sector-n3",
    "fig04-sector-n4",
    "fig05-06-mass",
    "fig07-schrodinger-cat",
    "fig08-10-kappa",
    "fig11-combined-limit",
    "fig12-partial-entropies",
];

/// Every shipped config, in figure order.
pub fn builtin_experiments() -> &'static [BuiltinExperiment] {
    BUILTIN
}

pub fn builtin_experiment(name: &str) -> Result<ExperimentConfig> {
    let b = BUILTIN
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| CatError::ConfigInvalid(format!("no built-in experiment {name:?}")))?;
    ExperimentConfig::from_json(b.json)
}
