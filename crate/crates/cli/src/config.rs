use std::path::{Path, PathBuf};

use photocount::classicality::ClassifyOptions;
use photocount::{PhaseMode, PulseSpec, StateSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Simulate,
    Analyze,
    Classify,
    Wideband,
    VerifyOracle,
}

/// Flat run configuration. Every key is optional in the file; command-line
/// flags override file values; unset keys fall back to per-command defaults.
/// The fully resolved config is written next to each run's outputs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impedance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratures_out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_n_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface_out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface_var_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_small: Option<f64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident: $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overlay(mut self, flags: &RunConfig) -> Self {
        overlay!(self, flags: command, state, phase, n, seed, bootstrap, pulse, fs, duration,
            impedance, nu0, input, reference, out, quadratures_out, boundary_out,
            boundary_n_max, boundary_points, surface_out, surface_var_max, k_sigma, n_small);
        self
    }

    pub fn check_command(&self, running: CommandName) -> Result<(), CliError> {
        match self.command {
            Some(c) if c != running => Err(CliError::Config(format!(
                "config is for command {c:?} but {running:?} was invoked"
            ))),
            _ => Ok(()),
        }
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        let d = ClassifyOptions::default();
        ClassifyOptions {
            k_sigma: self.k_sigma.unwrap_or(d.k_sigma),
            n_small: self.n_small.unwrap_or(d.n_small),
        }
    }
}

/// `dir/stem.ext` -> `dir/stem.run.json`.
pub fn resolved_config_path(output: &Path) -> PathBuf {
    output.with_extension("run.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"seed": 1, "sede": 2}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }

    #[test]
    fn flags_override_file() {
        let file: RunConfig =
            serde_json::from_str(r#"{"seed": 1, "n": 500, "command": "simulate"}"#).unwrap();
        let flags = RunConfig {
            seed: Some(9),
            ..Default::default()
        };
        let merged = file.overlay(&flags);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.n, Some(500));
        assert!(merged.check_command(CommandName::Simulate).is_ok());
        assert!(merged.check_command(CommandName::Analyze).is_err());
    }
}
