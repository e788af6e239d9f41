//! TOML run configuration.
//!
//! ```toml
//! seed = 7
//!
//! [ensemble]
//! kind = "check-regular"
//! p = 0.5
//! epsilon = 0.1
//!
//! [sim]
//! n_list = [8192]
//! p_list = [0.3, 0.4]
//! trials = 200
//! ```
//!
//! Every table except `ensemble` is optional and falls back to defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use ira_core::degree_dist::{BitRegularSpec, CheckRegularSpec, DepthOptions, EnsembleSpec};
use ira_core::graph_codec::{BuildOptions, DEFAULT_MAX_SWAP_PASSES};
use ira_core::sim::SimOptions;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub ensemble: EnsembleConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub depth: DepthConfig,
    #[serde(default)]
    pub de: DeConfig,
    #[serde(default)]
    pub build: BuildConfig,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnsembleConfig {
    BitRegular { q: u32, p: f64, epsilon: f64 },
    CheckRegular { p: f64, epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DepthConfig {
    pub rho_max: usize,
    pub lambda_max: usize,
}

impl Default for DepthConfig {
    fn default() -> Self {
        let d = DepthOptions::default();
        DepthConfig {
            rho_max: d.rho_max,
            lambda_max: d.lambda_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeConfig {
    pub grid_size: usize,
    pub threshold_tol: f64,
}

impl Default for DeConfig {
    fn default() -> Self {
        DeConfig {
            grid_size: 1000,
            threshold_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doping_count: Option<usize>,
    pub max_swap_passes: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            doping_count: None,
            max_swap_passes: DEFAULT_MAX_SWAP_PASSES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_list: Vec<usize>,
    pub p_list: Vec<f64>,
    pub trials: u64,
    pub fresh_graph_per_trial: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_list: vec![8192],
            p_list: vec![0.3, 0.4],
            trials: 100,
            fresh_graph_per_trial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// Why a configuration was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io(String),
    /// Malformed TOML or unknown key; 1-based position when known.
    Parse { line: usize, column: usize, message: String },
    /// A value is outside its range.
    Validation { field: &'static str, reason: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "cannot read config: {m}"),
            ConfigError::Parse { line, column, message } => {
                write!(f, "config parse error at line {line}, column {column}: {message}")
            }
            ConfigError::Validation { field, reason } => write!(f, "invalid config field `{field}`: {reason}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field,
        reason: reason.into(),
    }
}

fn open_unit(field: &'static str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(bad(field, format!("{x} is not in (0, 1)")))
    }
}

impl Config {
    /// Parses and validates TOML text.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: Config = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        // TOML integers are signed 64-bit.
        if self.seed.is_some_and(|s| s > i64::MAX as u64) {
            return Err(bad("seed", "must fit in a signed 64-bit integer"));
        }
        match self.ensemble {
            EnsembleConfig::BitRegular { q, p, epsilon } => {
                if q < 3 {
                    return Err(bad("q", format!("{q} is below 3")));
                }
                open_unit("p", p)?;
                open_unit("epsilon", epsilon)?;
            }
            EnsembleConfig::CheckRegular { p, epsilon } => {
                open_unit("p", p)?;
                open_unit("epsilon", epsilon)?;
            }
        }
        if self.depth.rho_max < 16 {
            return Err(bad("rho_max", "must be at least 16"));
        }
        if self.depth.lambda_max < 16 {
            return Err(bad("lambda_max", "must be at least 16"));
        }
        if self.de.grid_size < 100 {
            return Err(bad("grid_size", "must be at least 100"));
        }
        if !(self.de.threshold_tol > 0.0 && self.de.threshold_tol < 0.5) {
            return Err(bad("threshold_tol", "must be in (0, 0.5)"));
        }
        if self.sim.trials == 0 {
            return Err(bad("trials", "must be at least 1"));
        }
        if let Some(&n) = self.sim.n_list.iter().find(|&&n| n < 2) {
            return Err(bad("n_list", format!("block length {n} is below 2")));
        }
        if let Some(p) = self.sim.p_list.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(bad("p_list", format!("{p} is outside [0, 1)")));
        }
        Ok(())
    }

    pub fn spec(&self) -> EnsembleSpec {
        self.ensemble.spec().expect("validated ensemble")
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            build: BuildOptions {
                doping_count: self.build.doping_count,
                max_swap_passes: self.build.max_swap_passes,
            },
            depth: DepthOptions {
                rho_max: self.depth.rho_max,
                lambda_max: self.depth.lambda_max,
            },
            fresh_graph_per_trial: self.sim.fresh_graph_per_trial,
        }
    }
}

impl EnsembleConfig {
    pub fn spec(&self) -> ira_core::Result<EnsembleSpec> {
        Ok(match *self {
            EnsembleConfig::BitRegular { q, p, epsilon } => EnsembleSpec::BitRegular(BitRegularSpec::new(q, p, epsilon)?),
            EnsembleConfig::CheckRegular { p, epsilon } => EnsembleSpec::CheckRegular(CheckRegularSpec::new(p, epsilon)?),
        })
    }
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    Config::parse(&text)
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = Config::parse("[ensemble]\nkind = \"check-regular\"\np = 0.5\nepsilon = 0.1\n").unwrap();
        assert_eq!(c.seed, None);
        assert_eq!(c.de, DeConfig::default());
        assert_eq!(c.sim, SimConfig::default());
        assert_eq!(c.depth, DepthConfig::default());
    }

    #[test]
    fn out_of_range_value_names_field() {
        let e = Config::parse("[ensemble]\nkind = \"check-regular\"\np = 1.5\nepsilon = 0.1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Validation { field: "p", .. }), "{e}");
        let e = Config::parse("[ensemble]\nkind = \"bit-regular\"\nq = 2\np = 0.05\nepsilon = 0.1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Validation { field: "q", .. }), "{e}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let e = Config::parse("[ensemble]\nkind = \"check-regular\"\np = 0.5\nepsilon = 0.1\n\n[sim]\ntrails = 3\n").unwrap_err();
        match e {
            ConfigError::Parse { line, .. } => assert_eq!(line, 7),
            other => panic!("{other}"),
        }
        let e = Config::parse("[ensemble]\nkind = \"check-regular\"\np = 0.5\nepsilon = 0.1\nq = 3\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { .. }), "{e}");
    }

    #[test]
    fn oversized_seed_is_rejected() {
        let mut c = Config::parse("[ensemble]\nkind = \"check-regular\"\np = 0.5\nepsilon = 0.1\n").unwrap();
        c.seed = Some(u64::MAX);
        assert!(matches!(c.validate(), Err(ConfigError::Validation { field: "seed", .. })));
    }

    #[test]
    fn line_column_counts_from_one() {
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        assert_eq!(line_column("ab", 0), (1, 1));
    }
}
