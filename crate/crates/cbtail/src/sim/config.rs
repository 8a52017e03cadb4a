//! Experiment configuration: model/design/run sections loaded from a
//! versioned TOML file, validated against the tuning rules, and hashed for
//! provenance.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::models::CopulaModel;
use crate::tail::Side;
use crate::tuning::{self, TuningPlan};

/// Config file schema version this build reads.
pub const CONFIG_SCHEMA: u64 = 1;

/// Environment variable overriding the output directory — the only
/// environment knob the harness honors.
pub const OUTPUT_DIR_ENV: &str = "CBTAIL_OUTPUT_DIR";

/// One experiment cell: a sample size, one exponent pair and the resolved
/// tuning plan. Cells are numbered in declaration order (sample sizes outer,
/// exponent pairs inner) and the index addresses every RNG stream the cell
/// consumes.
#[derive(Debug, Clone)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub plan: TuningPlan,
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: CopulaModel,
    pub n_values: Vec<usize>,
    pub exponent_pairs: Vec<(f64, f64)>,
    /// Second-order exponent used by every tuning plan in the grid.
    pub rho: f64,
    pub side: Side,
    /// Bootstrap resamples per replicate.
    pub bootstrap_b: usize,
    /// Monte Carlo replicates per cell.
    pub reps: usize,
    /// Nominal confidence level of the reported intervals.
    pub level: f64,
    pub master_seed: u64,
    pub output: PathBuf,
    pub parallelism: usize,
    /// Record wall time per cell. Off by default: timing is inherently
    /// schedule-dependent and would break byte-identical outputs.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: CopulaModel::Clayton { theta: 1.0 },
            n_values: vec![500, 1000, 2000],
            exponent_pairs: vec![(0.6, 0.75), (0.8, 0.85), (0.9, 0.95)],
            // The default grid reaches alpha = 0.9, which the feasibility
            // inequality alpha < 2 rho / (1 + 2 rho) admits only for
            // rho > 4.5; rho = 5 accepts the whole grid.
            rho: 5.0,
            side: Side::Lower,
            bootstrap_b: 500,
            reps: 1000,
            level: 0.90,
            master_seed: 42,
            output: PathBuf::from("results"),
            parallelism: 1,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    /// Check every field and resolve every tuning plan; exponent-level
    /// infeasibility is a hard error, finite-n tuning warnings are not.
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        // The harness scores against the model's limiting coefficient, so
        // an oracle must exist for the requested corner.
        self.model.tail_oracle(self.side)?;
        if self.n_values.is_empty() {
            return Err(Error::Config("at least one sample size is required".into()));
        }
        if self.exponent_pairs.is_empty() {
            return Err(Error::Config("at least one exponent pair is required".into()));
        }
        if self.bootstrap_b < 2 {
            return Err(Error::Config(format!(
                "bootstrap must be at least 2, got {}",
                self.bootstrap_b
            )));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be positive".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!(
                "level must lie in (0,1), got {}",
                self.level
            )));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be positive".into()));
        }
        self.cells()?;
        Ok(())
    }

    /// The cell grid in declaration order with resolved tuning plans.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let mut cells = Vec::with_capacity(self.n_values.len() * self.exponent_pairs.len());
        for &n in &self.n_values {
            for &(alpha, beta) in &self.exponent_pairs {
                let plan = tuning::plan(n, alpha, beta, self.rho)?;
                cells.push(Cell {
                    index: cells.len(),
                    n,
                    alpha,
                    beta,
                    plan,
                });
            }
        }
        Ok(cells)
    }

    /// Canonical one-line rendering of the experiment-defining fields.
    /// Output path, parallelism and timing are plumbing and excluded, so the
    /// same study hashes identically on any machine.
    pub fn canonical_description(&self) -> String {
        let pairs: Vec<String> = self
            .exponent_pairs
            .iter()
            .map(|&(a, b)| format!("({a:?},{b:?})"))
            .collect();
        format!(
            "schema={CONFIG_SCHEMA};model={};side={};n={:?};pairs=[{}];rho={:?};B={};reps={};level={:?};seed={}",
            self.model.label(),
            self.side,
            self.n_values,
            pairs.join(","),
            self.rho,
            self.bootstrap_b,
            self.reps,
            self.level,
            self.master_seed
        )
    }

    /// FNV-1a hash of the canonical description, for provenance blocks.
    pub fn config_hash(&self) -> u64 {
        fnv1a64(self.canonical_description().as_bytes())
    }

    /// Parse a config file body. Unknown keys, schema mismatches, unknown
    /// model families, misapplied model parameters and infeasible exponent
    /// pairs are all hard errors.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        if file.schema != CONFIG_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported config schema {} (this build reads schema {CONFIG_SCHEMA})",
                file.schema
            )));
        }
        let mut cfg = ExperimentConfig {
            model: resolve_model(&file.model)?,
            ..ExperimentConfig::default()
        };
        let design = file.design;
        if let Some(n) = design.n {
            cfg.n_values = n.iter().map(|&v| v as usize).collect();
        }
        if let Some(pairs) = design.pairs {
            cfg.exponent_pairs = pairs.iter().map(|p| (p[0], p[1])).collect();
        }
        if let Some(rho) = design.rho {
            cfg.rho = rho;
        }
        if let Some(side) = &design.side {
            cfg.side = side.parse()?;
        }
        let run = file.run;
        if let Some(b) = run.bootstrap {
            cfg.bootstrap_b = b as usize;
        }
        if let Some(reps) = run.reps {
            cfg.reps = reps as usize;
        }
        if let Some(level) = run.level {
            cfg.level = level;
        }
        if let Some(seed) = run.seed {
            cfg.master_seed = seed;
        }
        if let Some(par) = run.parallelism {
            cfg.parallelism = par as usize;
        }
        if let Some(output) = run.output {
            cfg.output = PathBuf::from(output);
        }
        if let Some(timing) = run.timing {
            cfg.timing = timing;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load a config file and apply the output-directory environment
    /// override if set.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            cfg.output = PathBuf::from(dir);
        }
        Ok(cfg)
    }
}

/// FNV-1a 64-bit hash; tiny, stable, dependency-free.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema: u64,
    #[serde(default)]
    model: ModelSection,
    #[serde(default)]
    design: DesignSection,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    family: Option<String>,
    theta: Option<f64>,
    rho: Option<f64>,
    nu: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignSection {
    n: Option<Vec<u64>>,
    pairs: Option<Vec<[f64; 2]>>,
    rho: Option<f64>,
    side: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    bootstrap: Option<u64>,
    reps: Option<u64>,
    level: Option<f64>,
    seed: Option<u64>,
    parallelism: Option<u64>,
    output: Option<String>,
    timing: Option<bool>,
}

fn resolve_model(section: &ModelSection) -> Result<CopulaModel> {
    let family = section.family.as_deref().unwrap_or("clayton");
    let reject_param = |name: &str, set: bool| -> Result<()> {
        if set {
            Err(Error::Config(format!(
                "model parameter `{name}` does not apply to family `{family}`"
            )))
        } else {
            Ok(())
        }
    };
    let require_param = |name: &str, value: Option<f64>| -> Result<f64> {
        value.ok_or_else(|| {
            Error::Config(format!(
                "model family `{family}` requires parameter `{name}`"
            ))
        })
    };
    match family {
        "independence" => {
            reject_param("theta", section.theta.is_some())?;
            reject_param("rho", section.rho.is_some())?;
            reject_param("nu", section.nu.is_some())?;
            Ok(CopulaModel::Independence)
        }
        "comonotone" => {
            reject_param("theta", section.theta.is_some())?;
            reject_param("rho", section.rho.is_some())?;
            reject_param("nu", section.nu.is_some())?;
            Ok(CopulaModel::Comonotone)
        }
        "clayton" => {
            reject_param("rho", section.rho.is_some())?;
            reject_param("nu", section.nu.is_some())?;
            Ok(CopulaModel::Clayton {
                theta: section.theta.unwrap_or(1.0),
            })
        }
        "gaussian" => {
            reject_param("theta", section.theta.is_some())?;
            reject_param("nu", section.nu.is_some())?;
            Ok(CopulaModel::Gaussian {
                rho: require_param("rho", section.rho)?,
            })
        }
        "student_t" => {
            reject_param("theta", section.theta.is_some())?;
            Ok(CopulaModel::StudentT {
                rho: require_param("rho", section.rho)?,
                nu: require_param("nu", section.nu)?,
            })
        }
        other => Err(Error::Config(format!("unknown model family `{other}`"))),
    }
}
