//! Result persistence: CSV and JSON renderings of sweep rows with a summary
//! block, all numbers at 12 significant digits in the CSV.

use std::fs;
use std::path::{Path, PathBuf};

use lgsim_core::LgReport;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{OutputFormat, SweepConfig};
use crate::sample::{SampleEstimate, RNG_ALGORITHM};
use crate::sweep::{SweepOutcome, SweepSummary};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot encode results: {0}")]
    Encode(#[from] serde_json::Error),
}

/// The fixed CSV column set.
pub const CSV_COLUMNS: &str = "theta1,theta2,epsilon,K12,K23,K13,S12,S23,S13,S2,S123,\
                               B1,B2,B3,B4,B1s,B2s,B3s,B1p,naive_S13,naive_K13";

/// Formats with 12 significant digits, plain decimal where reasonable and
/// scientific notation for extreme magnitudes, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp_str) = sci.split_once('e').expect("LowerExp always emits an exponent");
    let exp: i32 = exp_str.parse().expect("exponent is an integer");
    if !(-4..12).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exp}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        fixed
    }
}

fn report_fields(r: &LgReport) -> [f64; 21] {
    [
        r.theta1, r.theta2, r.epsilon, r.k12, r.k23, r.k13, r.s12, r.s23, r.s13, r.s2, r.s123,
        r.b1, r.b2, r.b3, r.b4, r.b1s, r.b2s, r.b3s, r.b1p, r.naive_s13, r.naive_k13,
    ]
}

fn csv_row(r: &LgReport) -> String {
    report_fields(r)
        .map(fmt_sig)
        .join(",")
}

/// Renders the CSV document. When sampling is enabled the generator and seed
/// are recorded in a leading comment so the file is reproducible; otherwise
/// the file is exactly a header line plus one line per row.
pub fn render_csv(outcome: &SweepOutcome, cfg: &SweepConfig) -> String {
    let mut out = String::new();
    if cfg.sample_count > 0 {
        out.push_str(&format!(
            "# rng: {RNG_ALGORITHM}, seed: {}, samples_per_row: {} (row seed = seed + row index)\n",
            cfg.seed, cfg.sample_count
        ));
    }
    out.push_str(CSV_COLUMNS);
    out.push('\n');
    for row in &outcome.rows {
        out.push_str(&csv_row(&row.report));
        out.push('\n');
    }
    out
}

/// One sweep row as persisted to JSON; field names match the CSV columns.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonRow {
    pub theta1: f64,
    pub theta2: f64,
    pub epsilon: f64,
    #[serde(rename = "K12")]
    pub k12: f64,
    #[serde(rename = "K23")]
    pub k23: f64,
    #[serde(rename = "K13")]
    pub k13: f64,
    #[serde(rename = "S12")]
    pub s12: f64,
    #[serde(rename = "S23")]
    pub s23: f64,
    #[serde(rename = "S13")]
    pub s13: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    #[serde(rename = "S123")]
    pub s123: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    #[serde(rename = "B2")]
    pub b2: f64,
    #[serde(rename = "B3")]
    pub b3: f64,
    #[serde(rename = "B4")]
    pub b4: f64,
    #[serde(rename = "B1s")]
    pub b1s: f64,
    #[serde(rename = "B2s")]
    pub b2s: f64,
    #[serde(rename = "B3s")]
    pub b3s: f64,
    #[serde(rename = "B1p")]
    pub b1p: f64,
    #[serde(rename = "naive_S13")]
    pub naive_s13: f64,
    #[serde(rename = "naive_K13")]
    pub naive_k13: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<JsonSample>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonSample {
    pub n: u64,
    pub seed: u64,
    pub counts: [u64; 8],
    #[serde(rename = "K_hat")]
    pub k_hat: [f64; 3],
    pub stderr: [f64; 3],
    pub shannon_pairs: [f64; 3],
    pub shannon_triple: f64,
}

impl From<&SampleEstimate> for JsonSample {
    fn from(est: &SampleEstimate) -> Self {
        Self {
            n: est.n,
            seed: est.seed,
            counts: est.counts,
            k_hat: est.k_hat,
            stderr: est.stderr,
            shannon_pairs: est.shannon_pairs,
            shannon_triple: est.shannon_triple,
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonSummary {
    pub rows: usize,
    #[serde(rename = "min_B1s")]
    pub min_b1s: f64,
    #[serde(rename = "min_B1p")]
    pub min_b1p: f64,
    #[serde(rename = "max_B1")]
    pub max_b1: f64,
    pub naive_violations: usize,
    pub naive_entropic_violations: usize,
    pub naive_standard_violations: usize,
    pub rng: String,
    pub seed: u64,
    pub sample_count: u64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonDocument {
    pub rows: Vec<JsonRow>,
    pub summary: JsonSummary,
}

pub fn json_document(outcome: &SweepOutcome, cfg: &SweepConfig) -> JsonDocument {
    let rows = outcome
        .rows
        .iter()
        .map(|row| {
            let r = &row.report;
            let [theta1, theta2, epsilon, k12, k23, k13, s12, s23, s13, s2, s123, b1, b2, b3, b4, b1s, b2s, b3s, b1p, naive_s13, naive_k13] =
                report_fields(r);
            JsonRow {
                theta1,
                theta2,
                epsilon,
                k12,
                k23,
                k13,
                s12,
                s23,
                s13,
                s2,
                s123,
                b1,
                b2,
                b3,
                b4,
                b1s,
                b2s,
                b3s,
                b1p,
                naive_s13,
                naive_k13,
                sample: row.sample.as_ref().map(JsonSample::from),
            }
        })
        .collect();
    JsonDocument {
        rows,
        summary: summary_json(&outcome.summary, cfg),
    }
}

fn summary_json(summary: &SweepSummary, cfg: &SweepConfig) -> JsonSummary {
    JsonSummary {
        rows: summary.rows,
        min_b1s: summary.min_b1s,
        min_b1p: summary.min_b1p,
        max_b1: summary.max_b1,
        naive_violations: summary.naive_violations,
        naive_entropic_violations: summary.naive_entropic_violations,
        naive_standard_violations: summary.naive_standard_violations,
        rng: RNG_ALGORITHM.to_string(),
        seed: cfg.seed,
        sample_count: cfg.sample_count,
    }
}

pub fn render_json(outcome: &SweepOutcome, cfg: &SweepConfig) -> Result<String, OutputError> {
    Ok(serde_json::to_string_pretty(&json_document(outcome, cfg))?)
}

/// Writes the sweep result to `cfg.output_path` in the configured format.
pub fn write_results(outcome: &SweepOutcome, cfg: &SweepConfig) -> Result<(), OutputError> {
    let text = match cfg.format {
        OutputFormat::Csv => render_csv(outcome, cfg),
        OutputFormat::Json => render_json(outcome, cfg)?,
    };
    write_text(&cfg.output_path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    fs::write(path, text).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}
