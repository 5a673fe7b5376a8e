//! Experiment configuration, shipped presets and multi-seed orchestration.
//!
//! Configurations are TOML documents; unknown keys are rejected. Each run
//! writes one CSV trace per seed and a JSON summary whose `config` field
//! parses back into the configuration that produced it.

mod config;
mod experiment;

pub use config::{
    ExperimentConfig, GameConfig, LearnerConfig, NoiseConfig, SamplingConfig, SequenceConfig,
    StepConfig, Target, Validation, EXPONENT_MARGIN,
};
pub use experiment::{
    checkpoints, output_root, run_experiment, run_seed, write_csv, SeedRun, SeedSummary, Summary,
    CSV_HEADER, OUTPUT_ENV, SUMMARY_FORMAT,
};

use crate::{Error, Result};

const PRESETS: &[(&str, &str)] = &[
    (
        "regret-sqrt",
        include_str!("../../presets/regret-sqrt.toml"),
    ),
    (
        "converge-stable",
        include_str!("../../presets/converge-stable.toml"),
    ),
    (
        "tracking-v05",
        include_str!("../../presets/tracking-v05.toml"),
    ),
    ("dynreg-v05", include_str!("../../presets/dynreg-v05.toml")),
    (
        "bandit-tracking-v05",
        include_str!("../../presets/bandit-tracking-v05.toml"),
    ),
    (
        "bandit-converge",
        include_str!("../../presets/bandit-converge.toml"),
    ),
    (
        "zerosum-ergodic",
        include_str!("../../presets/zerosum-ergodic.toml"),
    ),
];

pub fn list_presets() -> Vec<&'static str> {
    PRESETS.iter().map(|(name, _)| *name).collect()
}

/// TOML source of a shipped preset.
pub fn preset_source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| *src)
        .ok_or_else(|| {
            let nearest = PRESETS
                .iter()
                .map(|(n, _)| (strsim::levenshtein(n, name), *n))
                .min()
                .map(|(_, n)| n)
                .unwrap_or_default();
            Error::Config(format!(
                "unknown preset {name:?}; did you mean {nearest:?}?"
            ))
        })
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_toml_str(preset_source(name)?)
}
