use std::path::Path;

use bell_core::behavior::{BLOCK_LABELS, LOCAL_BOUND_TOL};
use bell_core::heptalemma::{lookup, suggest};
use bell_core::lhv::strategy_label;
use bell_core::network::exact_chsh;
use bell_core::optimizer::SweepSpec;
use bell_core::{
    correlators, enumerate_deterministic, escape_route, estimate_chsh, is_local, lhv_behavior, local_decomposition,
    model_chsh, no_signaling_report, quantum_behavior, reference_settings, sample, seesaw_maximize, singlet, taxonomy,
    verify_markov, Behavior, ChshEstimate, EscapeRoute, InterpretationRecord, Thesis, TwoQubitState, LOCAL_BOUND,
    TSIRELSON_BOUND,
};
use num_complex::Complex64;

use crate::cli::{BehaviorSource, Command, Preset};
use crate::error::{CliError, Result};
use crate::format::{
    dataset_csv, parse_dataset_csv, parse_input, parse_network, read_text, sweep_csv, to_json_bytes, write_file,
    BehaviorFile, InputFile,
};
use crate::report::{InputDigest, RunReport, Table, Value};

/// Squared-norm tolerance for amplitudes given on the command line.
pub const STATE_NORM_TOL: f64 = 1e-6;
/// Residual below which the Markov conditions are reported as holding.
pub const MARKOV_TOL: f64 = 1e-12;

pub fn run(command: &Command) -> Result<RunReport> {
    match command {
        Command::Chsh { file } => chsh(file),
        Command::Enumerate => Ok(enumerate()),
        Command::Optimize { state, seed, tol, max_iter } => optimize(state, *seed, *tol, *max_iter),
        Command::Sample { file, n, seed, out } => sample_network(file, *n, *seed, out.as_deref()),
        Command::Estimate { file } => estimate(file),
        Command::Taxonomy { name } => taxonomy_report(name.as_deref()),
        Command::Sweep { state, steps, from, to, out } => sweep(state, *steps, *from, *to, out.as_deref()),
        Command::Behavior { source, out } => write_behavior(source, out),
        Command::Local { file } => local(file),
    }
}

/// `singlet`, `00`..`11`, or 4 real / 8 interleaved (re, im) amplitudes.
pub fn parse_state(spec: &str) -> Result<TwoQubitState> {
    let spec = spec.trim();
    match spec.to_ascii_lowercase().as_str() {
        "singlet" => return Ok(singlet()),
        "00" => return Ok(TwoQubitState::basis(0)),
        "01" => return Ok(TwoQubitState::basis(1)),
        "10" => return Ok(TwoQubitState::basis(2)),
        "11" => return Ok(TwoQubitState::basis(3)),
        _ => {}
    }
    let reals = spec
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Validation(format!("state: `{s}` is not a number"))))
        .collect::<Result<Vec<f64>>>()?;
    let amp: [Complex64; 4] = match reals.len() {
        4 => std::array::from_fn(|i| Complex64::new(reals[i], 0.0)),
        8 => std::array::from_fn(|i| Complex64::new(reals[2 * i], reals[2 * i + 1])),
        n => {
            return Err(CliError::Validation(format!(
                "state: expected `singlet`, a basis keyword, or 4 or 8 amplitude reals, got {n} values"
            )))
        }
    };
    TwoQubitState::with_tolerance(amp, STATE_NORM_TOL).map_err(|e| CliError::Validation(format!("state: {e}")))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "satisfied"
    } else {
        "violated"
    }
}

fn push_chsh(report: &mut RunReport, b: &Behavior) -> f64 {
    let e = correlators(b);
    for (label, value) in BLOCK_LABELS.iter().zip(e.0) {
        report.push(format!("E({label})"), value);
    }
    let s = e.chsh_value();
    report.push("S", s);
    report.push("local_bound", verdict(s.abs() <= LOCAL_BOUND + LOCAL_BOUND_TOL));
    report.push("tsirelson_bound", verdict(s.abs() <= TSIRELSON_BOUND + LOCAL_BOUND_TOL));
    s
}

fn read_input(path: &Path, digest: &mut InputDigest) -> Result<(InputFile, String)> {
    let text = read_text(path)?;
    digest.add("file", text.as_bytes());
    Ok((parse_input(path, &text)?, text))
}

fn input_behavior(input: &InputFile) -> Behavior {
    match input {
        InputFile::Behavior(b) => *b,
        InputFile::Network(spec) => lhv_behavior(spec.model()),
    }
}

fn chsh(path: &Path) -> Result<RunReport> {
    let mut digest = InputDigest::new("chsh");
    let (input, _) = read_input(path, &mut digest)?;
    let mut report = RunReport::new("chsh", digest, None);
    report.push("input", if matches!(input, InputFile::Behavior(_)) { "behavior" } else { "model" });
    push_chsh(&mut report, &input_behavior(&input));
    if let InputFile::Network(spec) = &input {
        report.push("hidden_values", spec.model().len());
        report.push("S_from_model", model_chsh(spec.model()));
    }
    Ok(report)
}

fn enumerate() -> RunReport {
    let mut table = Table::new(["strategy", "A(a)", "A(a')", "B(b)", "B(b')", "S"]);
    let mut max_abs = 0;
    let rows = enumerate_deterministic();
    for (strategy, s) in &rows {
        let mut row: Vec<Value> = vec![strategy_label(*strategy).into()];
        row.extend(strategy.outcomes().iter().map(|o| Value::from(o.value())));
        row.push((*s).into());
        table.push(row);
        max_abs = max_abs.max(s.abs());
    }
    let mut report = RunReport::new("enumerate", InputDigest::new("enumerate"), None);
    report.push("strategies", Value::Table(table));
    report.push("count", rows.len());
    report.push("max_abs_S", max_abs);
    report
}

fn optimize(state: &str, seed: u64, tol: f64, max_iter: usize) -> Result<RunReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Validation("--tol must be a positive number".into()));
    }
    let psi = parse_state(state)?;
    let mut digest = InputDigest::new("optimize");
    digest.arg("state", state.trim()).arg("tol", tol).arg("max_iter", max_iter);
    let result = seesaw_maximize(&psi, seed, max_iter, tol)?;
    let mut report = RunReport::new("optimize", digest, Some(seed));
    report.push("best_S", result.best_s);
    report.push("abs_best_S", result.best_s.abs());
    let s = result.settings;
    for (name, v) in [("a", s.alice_u), ("a'", s.alice_u_prime), ("b", s.bob_v), ("b'", s.bob_v_prime)] {
        report.push(format!("setting {name}"), Value::Vector(v.to_array().to_vec()));
    }
    report.push("iterations", result.iterations);
    report.push("converged", result.converged);
    report.push("perturbations", result.perturbations);
    Ok(report)
}

fn push_estimate(report: &mut RunReport, est: &ChshEstimate) {
    report.push("estimated_S", est.s);
    report.push("stderr", est.stderr);
    let mut blocks = Table::new(["block", "records", "E"]);
    for ((label, count), e) in BLOCK_LABELS.iter().zip(est.per_block_counts).zip(est.correlators) {
        blocks.push(vec![(*label).into(), count.into(), e.into()]);
    }
    report.push("blocks", Value::Table(blocks));
}

fn sample_network(path: &Path, n: usize, seed: u64, out: Option<&Path>) -> Result<RunReport> {
    let text = read_text(path)?;
    let spec = parse_network(path, &text)?;
    let mut digest = InputDigest::new("sample");
    digest.add("file", text.as_bytes()).arg("n", n);
    let dataset = sample(&spec, n, seed)?;
    if let Some(out) = out {
        write_file(out, &dataset_csv(&dataset))?;
    }
    let est = estimate_chsh(&dataset)?;
    let markov = verify_markov(&spec);

    let mut report = RunReport::new("sample", digest, Some(seed));
    report.push("records", dataset.count());
    report.push("generator", dataset.generator());
    report.push("exact_S", exact_chsh(&spec));
    push_estimate(&mut report, &est);
    report.push("markov_roots_independent", markov.roots_independent);
    report.push("markov_alice_screened", markov.alice_screened);
    report.push("markov_bob_screened", markov.bob_screened);
    report.push("markov_holds", markov.holds(MARKOV_TOL));
    if let Some(out) = out {
        report.push("output", out.display().to_string());
    }
    Ok(report)
}

fn estimate(path: &Path) -> Result<RunReport> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
    let dataset = parse_dataset_csv(path, &bytes)?;
    let mut digest = InputDigest::new("estimate");
    digest.add("file", &bytes);
    let est = estimate_chsh(&dataset)?;
    let mut report = RunReport::new("estimate", digest, None);
    report.push("records", dataset.count());
    push_estimate(&mut report, &est);
    Ok(report)
}

fn route_text(route: EscapeRoute) -> String {
    match route {
        EscapeRoute::Nonlocal => "nonlocal witness model".into(),
        EscapeRoute::Superdeterministic => "setting-dependent witness model".into(),
        EscapeRoute::NonConstructive(t) => {
            format!("no probabilistic witness; rejecting {t} concerns facts or observers, not a distribution")
        }
    }
}

fn record_report(report: &mut RunReport, record: &InterpretationRecord) {
    report.push("interpretation", record.name);
    report.push("rejects", record.rejected.name());
    let retained: Vec<&str> = record.stance().retained().map(Thesis::name).collect();
    report.push("retains", retained.join(", "));
    report.push("escape_route", route_text(escape_route(record.rejected)));
}

fn taxonomy_report(name: Option<&str>) -> Result<RunReport> {
    let mut digest = InputDigest::new("taxonomy");
    if let Some(name) = name {
        digest.arg("name", name);
    }
    let Some(name) = name else {
        let mut table = Table::new(std::iter::once("Interpretation").chain(Thesis::ALL.iter().map(|t| t.name())));
        for record in taxonomy() {
            let mut row: Vec<Value> = vec![record.name.into()];
            row.extend(Thesis::ALL.iter().map(|t| Value::from(if *t == record.rejected { "x" } else { "" })));
            table.push(row);
        }
        let mut report = RunReport::new("taxonomy", digest, None);
        report.push("interpretations", Value::Table(table));
        report.push("count", taxonomy().len());
        return Ok(report);
    };
    let record = lookup(name).ok_or_else(|| {
        let mut message = format!("unknown interpretation \"{name}\"");
        let hints = suggest(name);
        if !hints.is_empty() {
            message.push_str(&format!("\ndid you mean: {}", hints.join(", ")));
        }
        let valid: Vec<&str> = taxonomy().iter().map(|r| r.name).collect();
        message.push_str(&format!("\nvalid names: {}", valid.join(", ")));
        CliError::Lookup(message)
    })?;
    let mut report = RunReport::new("taxonomy", digest, None);
    record_report(&mut report, record);
    Ok(report)
}

fn sweep(state: &str, steps: usize, from: f64, to: f64, out: Option<&Path>) -> Result<RunReport> {
    if steps < 2 {
        return Err(CliError::Validation(format!("--steps must be at least 2, got {steps}")));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Validation("--from and --to must be finite".into()));
    }
    let psi = parse_state(state)?;
    let spec = SweepSpec { from_degrees: from, to_degrees: to, ..SweepSpec::default() };
    let rows = bell_core::sweep(&psi, &spec, steps)?;
    if let Some(out) = out {
        write_file(out, &sweep_csv(&rows))?;
    }
    let mut digest = InputDigest::new("sweep");
    digest.arg("state", state.trim()).arg("steps", steps).arg("from", from).arg("to", to);
    let mut table = Table::new(["theta_degrees", "S"]);
    for r in &rows {
        table.push(vec![r.theta_degrees.into(), r.s.into()]);
    }
    let mut report = RunReport::new("sweep", digest, None);
    report.push("rows", Value::Table(table));
    if let Some(out) = out {
        report.push("output", out.display().to_string());
    }
    Ok(report)
}

fn write_behavior(source: &BehaviorSource, out: &Path) -> Result<RunReport> {
    let mut digest = InputDigest::new("behavior");
    let b = if let Some(state) = &source.state {
        digest.arg("state", state.trim());
        quantum_behavior(&parse_state(state)?, &reference_settings().vectors())
    } else if let Some(path) = &source.model {
        input_behavior(&read_input(path, &mut digest)?.0)
    } else {
        match source.preset.expect("clap requires one source") {
            Preset::Uniform => {
                digest.arg("preset", "uniform");
                Behavior::uniform()
            }
            Preset::PrBox => {
                digest.arg("preset", "pr-box");
                Behavior::pr_box()
            }
        }
    };
    write_file(out, &to_json_bytes(&BehaviorFile::from(&b)))?;
    let mut report = RunReport::new("behavior", digest, None);
    push_chsh(&mut report, &b);
    report.push("output", out.display().to_string());
    Ok(report)
}

fn local(path: &Path) -> Result<RunReport> {
    let mut digest = InputDigest::new("local");
    let (input, _) = read_input(path, &mut digest)?;
    let b = input_behavior(&input);
    let mut report = RunReport::new("local", digest, None);
    report.push("no_signaling_residual", no_signaling_report(&b).max_residual());
    let local = is_local(&b)?;
    let variants = correlators(&b).chsh_variants();
    report.push("chsh_variants", Value::Vector(variants.to_vec()));
    report.push("max_abs_variant", variants.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    report.push("local", local);
    let decomposition = local_decomposition(&b);
    report.push("decomposition_found", decomposition.is_some());
    if let Some(d) = decomposition {
        let mut table = Table::new(["strategy", "weight"]);
        for (strategy, w) in d.strategies().filter(|(_, w)| *w > 0.0) {
            table.push(vec![strategy_label(strategy).into(), w.into()]);
        }
        report.push("weights", Value::Table(table));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_specs() {
        assert_eq!(parse_state("singlet").unwrap(), singlet());
        assert_eq!(parse_state("10").unwrap(), TwoQubitState::basis(2));
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let s = parse_state(&format!("0,{half},{},0", -half)).unwrap();
        assert!((s.overlap(&singlet()).norm_sqr() - 1.0).abs() < 1e-12);
        let complex = parse_state(&format!("0 0 {half} 0 {} 0 0 0", -half)).unwrap();
        assert!((complex.overlap(&singlet()).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_amplitudes_are_rejected() {
        let err = parse_state("1,1,0,0").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(parse_state("1,0,0,1e-4").is_ok());
        assert!(parse_state("1,0,0,0.01").is_err());
        assert!(parse_state("1,2,3").is_err());
    }

    #[test]
    fn taxonomy_unknown_name_suggests() {
        let err = taxonomy_report(Some("Bohm")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("de Broglie-Bohm"));
    }
}
