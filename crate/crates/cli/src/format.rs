//! JSON input files and CSV outputs.
//!
//! Behavior file:
//! `{"blocks": {"a,b": [[pPP, pPM], [pMP, pMM]], "a,b'": .., "a',b": .., "a',b'": ..}}`
//! with outcome order (+1, -1).
//!
//! Model file:
//! `{"lambda": [{"label": str, "prob": r, "pA_plus": {"a": r, "a'": r}, "pB_plus": {"b": r, "b'": r}}]}`.
//! A network file is a model file with optional `"settingPriorA": {"a": r, "a'": r}`
//! and `"settingPriorB": {"b": r, "b'": r}`; missing priors are uniform.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use bell_core::behavior::{block_label, ALICE_SETTINGS, BLOCK_LABELS, BLOCK_SUM_TOL, BOB_SETTINGS};
use bell_core::network::DISTRIBUTION_TOL;
use bell_core::optimizer::SweepRow;
use bell_core::{Behavior, HiddenState, LhvModel, NetworkSpec, SampleDataset, SampleRecord};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

type Block = [[f64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorFile {
    pub blocks: Blocks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Blocks {
    #[serde(rename = "a,b")]
    pub ab: Block,
    #[serde(rename = "a,b'")]
    pub ab_prime: Block,
    #[serde(rename = "a',b")]
    pub a_prime_b: Block,
    #[serde(rename = "a',b'")]
    pub a_prime_b_prime: Block,
}

impl Blocks {
    fn get(&self, x: usize, y: usize) -> &Block {
        match (x, y) {
            (0, 0) => &self.ab,
            (0, _) => &self.ab_prime,
            (_, 0) => &self.a_prime_b,
            _ => &self.a_prime_b_prime,
        }
    }
}

impl From<&Behavior> for BehaviorFile {
    fn from(b: &Behavior) -> Self {
        BehaviorFile {
            blocks: Blocks {
                ab: b.block(0, 0),
                ab_prime: b.block(0, 1),
                a_prime_b: b.block(1, 0),
                a_prime_b_prime: b.block(1, 1),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlicePair {
    pub a: f64,
    #[serde(rename = "a'")]
    pub a_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BobPair {
    pub b: f64,
    #[serde(rename = "b'")]
    pub b_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaEntry {
    pub label: String,
    pub prob: f64,
    #[serde(rename = "pA_plus")]
    pub alice_plus: AlicePair,
    #[serde(rename = "pB_plus")]
    pub bob_plus: BobPair,
}

/// Model file, optionally carrying setting priors (network file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub lambda: Vec<LambdaEntry>,
    #[serde(rename = "settingPriorA", default, skip_serializing_if = "Option::is_none")]
    pub setting_prior_a: Option<AlicePair>,
    #[serde(rename = "settingPriorB", default, skip_serializing_if = "Option::is_none")]
    pub setting_prior_b: Option<BobPair>,
}

impl NetworkFile {
    pub fn from_model(model: &LhvModel) -> Self {
        let lambda = model
            .states()
            .iter()
            .map(|s| LambdaEntry {
                label: s.label.clone(),
                prob: s.prob,
                alice_plus: AlicePair { a: s.alice_plus[0], a_prime: s.alice_plus[1] },
                bob_plus: BobPair { b: s.bob_plus[0], b_prime: s.bob_plus[1] },
            })
            .collect();
        NetworkFile { lambda, setting_prior_a: None, setting_prior_b: None }
    }

    pub fn from_spec(spec: &NetworkSpec) -> Self {
        let [pa, pa_prime] = spec.setting_prior_a();
        let [pb, pb_prime] = spec.setting_prior_b();
        NetworkFile {
            setting_prior_a: Some(AlicePair { a: pa, a_prime: pa_prime }),
            setting_prior_b: Some(BobPair { b: pb, b_prime: pb_prime }),
            ..Self::from_model(spec.model())
        }
    }
}

/// A parsed `chsh`/`local` input.
#[derive(Debug, Clone)]
pub enum InputFile {
    Behavior(Behavior),
    Network(NetworkSpec),
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("file types serialize");
    out.push(b'\n');
    out
}

fn line_of(text: &str, needle: &str) -> usize {
    text.find(needle).map_or(1, |i| text[..i].matches('\n').count() + 1)
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

fn json_error(path: &Path, e: serde_json::Error) -> CliError {
    let full = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    let message = full.strip_suffix(&suffix).unwrap_or(&full);
    let message = match message.strip_prefix("missing field `").and_then(|m| m.strip_suffix('`')) {
        Some(field) if BLOCK_LABELS.contains(&field) => format!("missing block \"{field}\""),
        _ => message.to_string(),
    };
    parse_error(path, e.line().max(1), message)
}

pub fn parse_behavior(path: &Path, text: &str) -> Result<Behavior> {
    let file: BehaviorFile = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    behavior_from_file(path, text, &file)
}

fn behavior_from_file(path: &Path, text: &str, file: &BehaviorFile) -> Result<Behavior> {
    let mut table = [[[[0.0; 2]; 2]; 2]; 2];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, slot) in row.iter_mut().enumerate() {
            let label = block_label(x, y);
            let block = file.blocks.get(x, y);
            let bad = |msg: String| parse_error(path, line_of(text, &format!("\"{label}\"")), msg);
            if block.iter().flatten().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
                return Err(bad(format!("block \"{label}\" has an entry outside [0, 1]")));
            }
            let sum: f64 = block.iter().flatten().sum();
            if (sum - 1.0).abs() > BLOCK_SUM_TOL {
                return Err(bad(format!("block \"{label}\" sums to {sum}, expected 1")));
            }
            *slot = *block;
        }
    }
    Behavior::new(table).map_err(|e| parse_error(path, line_of(text, "\"blocks\""), e.to_string()))
}

pub fn parse_network(path: &Path, text: &str) -> Result<NetworkSpec> {
    let file: NetworkFile = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    network_from_file(path, text, &file)
}

fn network_from_file(path: &Path, text: &str, file: &NetworkFile) -> Result<NetworkSpec> {
    let lambda_line = line_of(text, "\"lambda\"");
    let lambda_start = text.find("\"lambda\"").unwrap_or(0);
    if file.lambda.is_empty() {
        return Err(parse_error(path, lambda_line, "\"lambda\" needs at least one entry"));
    }
    let mut states = Vec::with_capacity(file.lambda.len());
    for (i, entry) in file.lambda.iter().enumerate() {
        let needle = serde_json::to_string(&entry.label).expect("strings serialize");
        let line = text[lambda_start..]
            .find(&needle)
            .map_or(lambda_line, |k| text[..lambda_start + k].matches('\n').count() + 1);
        let responses = [entry.alice_plus.a, entry.alice_plus.a_prime, entry.bob_plus.b, entry.bob_plus.b_prime];
        let unit = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
        if !unit(entry.prob) {
            return Err(parse_error(path, line, format!("lambda entry {i} ({}): prob outside [0, 1]", entry.label)));
        }
        if !responses.into_iter().all(unit) {
            return Err(parse_error(
                path,
                line,
                format!("lambda entry {i} ({}): response probability outside [0, 1]", entry.label),
            ));
        }
        states.push(HiddenState::new(
            entry.label.clone(),
            entry.prob,
            [entry.alice_plus.a, entry.alice_plus.a_prime],
            [entry.bob_plus.b, entry.bob_plus.b_prime],
        ));
    }
    let model = LhvModel::new(states).map_err(|e| parse_error(path, lambda_line, e.to_string()))?;

    let prior = |key: &str, pair: Option<[f64; 2]>| -> Result<[f64; 2]> {
        let Some(p) = pair else { return Ok([0.5, 0.5]) };
        let valid = p.iter().all(|v| v.is_finite() && *v >= 0.0) && (p[0] + p[1] - 1.0).abs() <= DISTRIBUTION_TOL;
        if valid {
            Ok(p)
        } else {
            Err(parse_error(path, line_of(text, &format!("\"{key}\"")), format!("\"{key}\" is not a distribution")))
        }
    };
    let pa = prior("settingPriorA", file.setting_prior_a.map(|p| [p.a, p.a_prime]))?;
    let pb = prior("settingPriorB", file.setting_prior_b.map(|p| [p.b, p.b_prime]))?;
    NetworkSpec::new(model, pa, pb).map_err(|e| parse_error(path, line_of(text, "\"settingPrior"), e.to_string()))
}

/// Behavior or model/network file, told apart by the top-level key.
pub fn parse_input(path: &Path, text: &str) -> Result<InputFile> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    let has = |key: &str| value.get(key).is_some();
    if has("blocks") {
        parse_behavior(path, text).map(InputFile::Behavior)
    } else if has("lambda") {
        parse_network(path, text).map(InputFile::Network)
    } else {
        Err(parse_error(path, 1, "expected a top-level \"blocks\" or \"lambda\" key"))
    }
}

const DATASET_HEADER: [&str; 5] = ["lambda", "x", "y", "A", "B"];
const OUTCOME_TEXT: [&str; 2] = ["1", "-1"];

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory CSV writes cannot fail")
}

/// Columns `lambda,x,y,A,B`: hidden-value label, setting names and ±1 outcomes.
pub fn dataset_csv(d: &SampleDataset) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(DATASET_HEADER).expect("in-memory CSV writes cannot fail");
    for r in d.records() {
        let row = [
            d.labels()[r.lambda].as_str(),
            ALICE_SETTINGS[r.x],
            BOB_SETTINGS[r.y],
            OUTCOME_TEXT[r.a],
            OUTCOME_TEXT[r.b],
        ];
        w.write_record(row).expect("in-memory CSV writes cannot fail");
    }
    finish(w)
}

/// Reads a dataset CSV. Labels are indexed in order of first appearance.
pub fn parse_dataset_csv(path: &Path, bytes: &[u8]) -> Result<SampleDataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header = reader.headers().map_err(|e| parse_error(path, 1, e.to_string()))?;
    if header.iter().ne(DATASET_HEADER) {
        return Err(parse_error(path, 1, format!("expected header {}", DATASET_HEADER.join(","))));
    }
    let mut labels = Vec::new();
    let mut index = HashMap::new();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(1, |p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = row.position().map_or(1, |p| p.line() as usize);
        let field = |i: usize, allowed: &[&str]| -> Result<usize> {
            allowed.iter().position(|v| *v == &row[i]).ok_or_else(|| {
                parse_error(path, line, format!("column {}: expected one of {}", DATASET_HEADER[i], allowed.join(", ")))
            })
        };
        let (x, y, a, b) =
            (field(1, &ALICE_SETTINGS)?, field(2, &BOB_SETTINGS)?, field(3, &OUTCOME_TEXT)?, field(4, &OUTCOME_TEXT)?);
        let lambda = *index.entry(row[0].to_string()).or_insert_with(|| {
            labels.push(row[0].to_string());
            labels.len() - 1
        });
        records.push(SampleRecord { lambda, x, y, a, b });
    }
    Ok(SampleDataset::from_records(labels, records, None, "csv")?)
}

/// Columns `theta_degrees,S` at full precision.
pub fn sweep_csv(rows: &[SweepRow]) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(["theta_degrees", "S"]).expect("in-memory CSV writes cannot fail");
    for r in rows {
        w.write_record([r.theta_degrees.to_string(), r.s.to_string()]).expect("in-memory CSV writes cannot fail");
    }
    finish(w)
}
