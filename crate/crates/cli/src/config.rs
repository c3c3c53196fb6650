use mgk_core::groups::Caps;
use mgk_core::pipeline::ConstructionConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Construct,
    Agreement,
    Spectral,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

fn default_rmax() -> u32 {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgreementConfig {
    /// Pairs of group names such as `["Z/6", "Z"]`.
    pub pairs: Vec<(String, String)>,
    #[serde(default = "default_rmax")]
    pub rmax: u32,
}

impl Default for AgreementConfig {
    fn default() -> Self {
        AgreementConfig {
            pairs: vec![("Z/6".into(), "Z".into()), ("D[6]".into(), "D[inf]".into())],
            rmax: default_rmax(),
        }
    }
}

fn default_blocks() -> Vec<(usize, u32)> {
    vec![(1, 2)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    /// (l', p) per row: SL(4l', p) with the block elementary marking.
    #[serde(default = "default_blocks")]
    pub blocks: Vec<(usize, u32)>,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            blocks: default_blocks(),
        }
    }
}

fn default_seed() -> u64 {
    0x5eed
}

fn default_samples() -> usize {
    200
}

fn default_absorption_rmax() -> u32 {
    6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Suites to run for `verify`; empty means all.
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub pipeline: ConstructionConfig,
    #[serde(default)]
    pub agreement: AgreementConfig,
    #[serde(default)]
    pub spectral: SpectralConfig,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Applies to every command, including the pipeline.
    #[serde(default)]
    pub caps: Caps,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub goursat_samples: usize,
    #[serde(default = "default_absorption_rmax")]
    pub absorption_rmax: u32,
    #[serde(default)]
    pub record_timings: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.into(),
            source,
        })?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.caps
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let known = mgk_core::suites::suite_names();
        if let Some(bad) = self.suites.iter().find(|s| !known.contains(&s.as_str())) {
            return Err(ConfigError::Invalid(format!(
                "unknown suite {bad:?}; known: {}",
                known.join(", ")
            )));
        }
        if self.goursat_samples == 0 {
            return Err(ConfigError::Invalid(
                "goursat_samples must be positive".into(),
            ));
        }
        if self.command == Command::Construct {
            self.pipeline_config()
                .schedule()
                .validate(15)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            if self.pipeline.prefix_n == 0 || self.pipeline.prefix_n > self.pipeline.primes.len() {
                return Err(ConfigError::Invalid(format!(
                    "prefix_n = {} needs between 1 and {} prime pairs",
                    self.pipeline.prefix_n,
                    self.pipeline.primes.len()
                )));
            }
        }
        if self.command == Command::Agreement {
            for (a, b) in &self.agreement.pairs {
                for name in [a, b] {
                    mgk_core::suites::named_group(name)
                        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                }
            }
        }
        Ok(())
    }

    /// Suites in name order.
    pub fn selected_suites(&self) -> Vec<String> {
        let mut s: Vec<String> = if self.suites.is_empty() {
            mgk_core::suites::suite_names()
                .into_iter()
                .map(String::from)
                .collect()
        } else {
            self.suites.clone()
        };
        s.sort();
        s.dedup();
        s
    }

    pub fn pipeline_config(&self) -> ConstructionConfig {
        ConstructionConfig {
            caps: self.caps,
            record_timings: self.record_timings,
            ..self.pipeline.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"command": "verify", "suites": ["goursat"]}"#).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.selected_suites(), vec!["goursat"]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(
            serde_json::from_str::<RunConfig>(r#"{"command": "verify", "sweets": []}"#).is_err()
        );
        assert!(serde_json::from_str::<RunConfig>(
            r#"{"command": "verify", "caps": {"balls": 1}}"#
        )
        .is_err());
    }

    #[test]
    fn zero_caps_are_invalid() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"command": "verify", "caps": {"ball": 0}}"#).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_filter_means_all() {
        let cfg: RunConfig = serde_json::from_str(r#"{"command": "verify"}"#).unwrap();
        assert_eq!(
            cfg.selected_suites().len(),
            mgk_core::suites::suite_names().len()
        );
    }
}
