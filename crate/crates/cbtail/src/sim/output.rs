//! Result emission: the frozen 11-column CSV table and its JSON mirror with
//! a provenance block.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::CONFIG_SCHEMA;
use super::runner::{CellRecord, ExperimentResult};

/// Frozen column order of the CSV table.
pub const CSV_HEADER: &str = "model,n,alpha,beta,estimator,bias,mse,coverage,ci_length,reps,seconds";

/// Render a float with 6 significant digits. Fixed-point inside
/// [1e-4, 1e6), scientific outside, and exact zero prints as a plain
/// fixed-point zero.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".into();
    }
    let a = x.abs();
    if (1e-4..1e6).contains(&a) {
        let exponent = a.log10().floor() as i32;
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// Render the aggregated rows as CSV in the frozen column order.
pub fn to_csv(records: &[CellRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.model,
            r.n,
            format_sig6(r.alpha),
            format_sig6(r.beta),
            r.estimator,
            format_sig6(r.bias),
            format_sig6(r.mse),
            format_sig6(r.coverage),
            format_sig6(r.ci_length),
            r.reps,
            format_sig6(r.seconds),
        ));
    }
    out
}

/// Provenance block carried by the JSON report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Hex rendering of the config hash.
    pub config_hash: String,
    pub seed: u64,
}

/// JSON report: schema + provenance + the same records as the CSV, with
/// floats at full precision so parsing reproduces them exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub schema: u64,
    pub provenance: Provenance,
    pub records: Vec<CellRecord>,
}

impl JsonReport {
    pub fn from_result(result: &ExperimentResult) -> Self {
        Self {
            schema: CONFIG_SCHEMA,
            provenance: Provenance {
                config_hash: format!("{:016x}", result.config_hash),
                seed: result.master_seed,
            },
            records: result.records.clone(),
        }
    }
}

/// Serialize the JSON report (pretty, stable field order).
pub fn to_json(result: &ExperimentResult) -> String {
    // Serialization of these plain structs cannot fail.
    serde_json::to_string_pretty(&JsonReport::from_result(result)).expect("report serialization")
}

/// Parse a JSON report back into records and provenance.
pub fn parse_json(text: &str) -> Result<JsonReport> {
    let report: JsonReport =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("json report: {e}")))?;
    if report.schema != CONFIG_SCHEMA {
        return Err(Error::Parse(format!(
            "unsupported report schema {} (this build reads schema {CONFIG_SCHEMA})",
            report.schema
        )));
    }
    Ok(report)
}

/// Write `results.csv` and `results.json` under `dir`, creating it if
/// needed. Returns both paths.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join("results.csv");
    let json_path = dir.join("results.json");
    fs::write(&csv_path, to_csv(&result.records))?;
    fs::write(&json_path, to_json(result))?;
    Ok((csv_path, json_path))
}
