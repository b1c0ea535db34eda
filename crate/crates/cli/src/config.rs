//! Experiment selection and the flat `key = value` configuration format.
//!
//! ```text
//! # comment
//! seed = 42
//! trials = 200
//! ```
//!
//! Keys are validated against the chosen experiment: anything that is not a
//! common key (`seed`, `format`, `out`, `threads`) or one of the
//! experiment's own parameters is rejected. Command-line flags override file
//! values.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Experiment {
    /// Random pure states: left vs right entropy.
    Symmetry,
    /// Random mixed product states under random unitaries.
    Growth,
    /// Keep-m truncation vs random projections.
    Truncation,
    /// Gaussian covariance entropy vs brute-force Fock diagonalization.
    Oracle,
    /// DMRG run compared with the covariance oracle.
    Dmrg,
    /// Angular-wave samples for plotting.
    Modes,
    /// Discrete angular spectrum behind a Dirichlet wall.
    Spectrum,
    /// Geometric entropy against the wall distance.
    GeomEntropy,
    /// Schwarzschild to Kruskal round trips.
    Kruskal,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Symmetry => "symmetry",
            Self::Growth => "growth",
            Self::Truncation => "truncation",
            Self::Oracle => "oracle",
            Self::Dmrg => "dmrg",
            Self::Modes => "modes",
            Self::Spectrum => "spectrum",
            Self::GeomEntropy => "geom-entropy",
            Self::Kruskal => "kruskal",
        }
    }

    /// Parameters with their kinds and defaults.
    pub fn parameters(&self) -> &'static [Param] {
        use Kind::{Int, Real, RealList};
        match self {
            Self::Symmetry => {
                const {
                    &[
                        p("trials", Int, "200"),
                        p("max_dim", Int, "10"),
                        p("tolerance", Real, "1e-9"),
                    ]
                }
            }
            Self::Growth => {
                const {
                    &[
                        p("trials", Int, "200"),
                        p("dim_left", Int, "3"),
                        p("dim_right", Int, "3"),
                        p("tolerance", Real, "1e-9"),
                    ]
                }
            }
            Self::Truncation => {
                const {
                    &[
                        p("trials", Int, "50"),
                        p("dim", Int, "6"),
                        p("kept", Int, "3"),
                        p("projections", Int, "200"),
                        p("tolerance", Real, "1e-10"),
                    ]
                }
            }
            Self::Oracle => {
                const {
                    &[
                        p("n_sites", Int, "2"),
                        p("mass", Real, "1"),
                        p("cutoff", Int, "20"),
                        p("block_sites", Int, "1"),
                        p("tolerance", Real, "1e-4"),
                    ]
                }
            }
            Self::Dmrg => {
                const {
                    &[
                        p("local_dim", Int, "8"),
                        p("kept_states", Int, "16"),
                        p("target_length", Int, "20"),
                        p("mass", Real, "1"),
                        p("gs_tolerance", Real, "1e-9"),
                        p("max_iterations", Int, "1000"),
                        p("energy_tolerance", Real, "0.01"),
                        p("entropy_tolerance", Real, "0.05"),
                    ]
                }
            }
            Self::Modes => {
                const {
                    &[
                        p("ell", Real, "8"),
                        p("mass", Real, "1"),
                        p("x_min", Real, "0.008"),
                        p("x_max", Real, "30"),
                        p("points", Int, "1000"),
                    ]
                }
            }
            Self::Spectrum => {
                const {
                    &[
                        p("mass", Real, "1"),
                        p("epsilon", Real, "0.1"),
                        p("ell_max", Real, "20"),
                        p("points_per_unit", Real, "1000"),
                    ]
                }
            }
            Self::GeomEntropy => {
                const {
                    &[
                        p("mass", Real, "1"),
                        p("ell_max", Real, "20"),
                        p("epsilons", RealList, "0.1,0.05,0.025"),
                        p("points_per_unit", Real, "1000"),
                        p("log_law_tolerance", Real, "0.3"),
                    ]
                }
            }
            Self::Kruskal => {
                const {
                    &[
                        p("points", Int, "1000"),
                        p("masses", RealList, "0.5,1,2"),
                        p("r_max", Real, "10"),
                        p("t_max", Real, "10"),
                        p("probe_steps", Int, "12"),
                        p("tolerance", Real, "1e-10"),
                    ]
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Int,
    Real,
    RealList,
}

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub key: &'static str,
    pub kind: Kind,
    pub default: &'static str,
}

const fn p(key: &'static str, kind: Kind, default: &'static str) -> Param {
    Param { key, kind, default }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

pub const DEFAULT_SEED: u64 = 42;
const COMMON_KEYS: [&str; 4] = ["seed", "format", "out", "threads"];

/// Overrides supplied on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    /// `None` writes to stdout.
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
    params: BTreeMap<String, String>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected 'key = value', got '{raw}'",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(CliError::Usage(format!(
                "config line {}: empty key",
                lineno + 1
            )));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Usage(format!(
                "config line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

impl ExperimentConfig {
    /// Defaults for `experiment`, no file, no overrides.
    pub fn defaults(experiment: Experiment) -> Self {
        Self::resolve(experiment, "", &Overrides::default()).expect("defaults are valid")
    }

    /// Merges defaults, file contents, and command-line overrides.
    pub fn resolve(
        experiment: Experiment,
        file_text: &str,
        overrides: &Overrides,
    ) -> Result<Self, CliError> {
        let file = parse_key_values(file_text)?;
        let allowed = experiment.parameters();
        for key in file.keys() {
            if !COMMON_KEYS.contains(&key.as_str()) && !allowed.iter().any(|p| p.key == key) {
                let names: Vec<&str> = allowed.iter().map(|p| p.key).collect();
                return Err(CliError::Usage(format!(
                    "unknown key '{key}' for experiment '{}' (allowed: {}, {})",
                    experiment.name(),
                    COMMON_KEYS.join(", "),
                    names.join(", ")
                )));
            }
        }
        let parse_common = |key: &str| -> Option<&String> { file.get(key) };
        let seed = match (overrides.seed, parse_common("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => v.parse().map_err(|_| {
                CliError::Usage(format!("seed: '{v}' is not a 64-bit unsigned integer"))
            })?,
            (None, None) => DEFAULT_SEED,
        };
        let format = match (overrides.format, parse_common("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => v.parse().map_err(CliError::Usage)?,
            (None, None) => Format::Csv,
        };
        let out = overrides
            .out
            .clone()
            .or_else(|| parse_common("out").map(PathBuf::from));
        let threads = match (overrides.threads, parse_common("threads")) {
            (Some(t), _) => t,
            (None, Some(v)) => v.parse().map_err(|_| {
                CliError::Usage(format!("threads: '{v}' is not a positive integer"))
            })?,
            (None, None) => 1,
        };
        if threads == 0 {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        let mut params = BTreeMap::new();
        for param in allowed {
            let value = file
                .get(param.key)
                .cloned()
                .unwrap_or_else(|| param.default.to_string());
            params.insert(param.key.to_string(), value);
        }
        let config = Self {
            experiment,
            seed,
            out,
            format,
            threads,
            params,
        };
        config.validate_params()?;
        Ok(config)
    }

    fn validate_params(&self) -> Result<(), CliError> {
        for param in self.experiment.parameters() {
            match param.kind {
                Kind::Int => self.usize(param.key).map(|_| ())?,
                Kind::Real => self.f64(param.key).map(|_| ())?,
                Kind::RealList => self.f64_list(param.key).map(|_| ())?,
            }
        }
        Ok(())
    }

    /// Resolved parameters, defaults included.
    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    fn raw(&self, key: &str) -> &str {
        self.params
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("parameter '{key}' not declared"))
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        let v = self.raw(key);
        v.parse()
            .map_err(|_| CliError::Usage(format!("{key}: '{v}' is not a nonnegative integer")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v = self.raw(key);
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(CliError::Usage(format!(
                "{key}: '{v}' is not a finite number"
            ))),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = self.raw(key);
        v.split(',')
            .map(|s| match s.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(CliError::Usage(format!(
                    "{key}: '{v}' is not a comma-separated list of numbers"
                ))),
            })
            .collect()
    }
}
