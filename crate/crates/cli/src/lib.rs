//! Commands behind the `fss` binary: decompose an input document, build a
//! document from a permutation group, and re-verify a saved report.

use std::fs;
use std::path::Path;
use std::time::Instant;

use fss_core::fss::{
    decompose, DecomposeConfig, Decomposition, LevelChecks, SectionStrategy, StopReason, TransversalStrategy,
    VerifyMode,
};
use fss_core::io::InputDocument;
use fss_core::oracle::{oracle_dim, perm_group_fixture_from_text};
use fss_core::{Error, FieldSpec, Matrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Pipeline(String),
    #[error("report mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Input(_) => 2,
            CliError::Pipeline(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Pipeline(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalDimMode {
    #[default]
    Oracle,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub max_levels: usize,
    pub budget: usize,
    pub verify: VerifyMode,
    pub terminal_dim: TerminalDimMode,
    pub transversal: TransversalStrategy,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = DecomposeConfig::default();
        RunConfig {
            seed: d.seed,
            max_levels: d.max_levels,
            budget: d.budget,
            verify: d.verify,
            terminal_dim: TerminalDimMode::Oracle,
            transversal: d.transversal,
        }
    }
}

impl RunConfig {
    fn core(&self) -> DecomposeConfig {
        DecomposeConfig {
            seed: self.seed,
            max_levels: self.max_levels,
            budget: self.budget,
            transversal: self.transversal,
            verify: self.verify,
            terminal_dim: self.terminal_dim == TerminalDimMode::Oracle,
            ..DecomposeConfig::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCounts {
    pub inverted_transversal: usize,
    pub idempotent_completion: usize,
    pub annihilating: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub index: usize,
    pub algebra_dim: usize,
    pub generators: usize,
    pub x: Vec<String>,
    pub cyclic_dim: usize,
    pub radical_dim: usize,
    pub transversal: Vec<String>,
    pub u_raw: usize,
    pub u_kept: usize,
    pub u_provenance: Vec<String>,
    pub u_algebra_dim: usize,
    pub section: SectionCounts,
    pub checks: LevelChecks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub decompose_ms: u128,
    pub oracle_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub field: String,
    pub config: RunConfig,
    pub algebra_dim: usize,
    pub module_dim: usize,
    pub levels: Vec<LevelRecord>,
    pub terminal_reason: StopReason,
    pub terminal_generators: usize,
    pub cyclic_dims: Vec<usize>,
    pub terminal_dim: Option<usize>,
    pub bound: String,
    pub oracle_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    /// Verification flags all true, and the bound at least the oracle dimension.
    pub fn invariants_hold(&self) -> std::result::Result<(), String> {
        for l in &self.levels {
            if let Some(check) = l.checks.first_failure() {
                return Err(format!("level {} failed {check}", l.index));
            }
        }
        if let (Some(t), Some(o)) = (self.terminal_dim, self.oracle_dim) {
            let product: u128 = self.cyclic_dims.iter().map(|&d| d as u128).product::<u128>() * t as u128;
            if product.to_string() != self.bound {
                return Err(format!("bound {} is not the product {product}", self.bound));
            }
            if product < o as u128 {
                return Err(format!("bound {product} is below dim A = {o}"));
            }
        }
        Ok(())
    }

    /// One line per level and a closing line with the bound.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for l in &self.levels {
            out.push_str(&format!(
                "level {}: dim A = {}, dim Ax = {}, |U| = {} ({} raw), dim K<U> = {}\n",
                l.index, l.algebra_dim, l.cyclic_dim, l.u_kept, l.u_raw, l.u_algebra_dim
            ));
        }
        let reason = match self.terminal_reason {
            StopReason::ScalarAction => "scalar action",
            StopReason::NoProgress => "no progress",
        };
        out.push_str(&format!(
            "stopped on {reason}; bound {} (dim A = {})\n",
            self.bound,
            self.oracle_dim.map_or("not computed".into(), |d| d.to_string())
        ));
        out
    }
}

fn vector_doc(v: &[fss_core::Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn build_report(d: &Decomposition, field: FieldSpec, algebra_dim: usize, module_dim: usize, config: &RunConfig, oracle: Option<usize>) -> Report {
    let levels = d
        .levels
        .iter()
        .map(|l| {
            let mut section = SectionCounts::default();
            for e in &l.section {
                match e.value.as_ref().map(|v| v.strategy) {
                    Some(SectionStrategy::InvertedTransversal) => section.inverted_transversal += 1,
                    Some(SectionStrategy::IdempotentCompletion) => section.idempotent_completion += 1,
                    None => section.annihilating += 1,
                }
            }
            let names = l.algebra.names();
            LevelRecord {
                index: l.index,
                algebra_dim: l.algebra.dim(),
                generators: l.algebra.generators().len(),
                x: vector_doc(l.x()),
                cyclic_dim: l.cyclic_dim(),
                radical_dim: l.radical_dim,
                transversal: l.transversal.basis.words.iter().map(|w| w.render(names)).collect(),
                u_raw: l.u.raw.len(),
                u_kept: l.u.kept.len(),
                u_provenance: l.u.kept.iter().map(|u| u.provenance.to_string()).collect(),
                u_algebra_dim: l.u_algebra_dim,
                section,
                checks: l.checks,
            }
        })
        .collect();
    Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        field: field.to_string(),
        config: config.clone(),
        algebra_dim,
        module_dim,
        levels,
        terminal_reason: d.stop,
        terminal_generators: d.terminal.generators().len(),
        cyclic_dims: d.cyclic_dims.clone(),
        terminal_dim: d.terminal_dim,
        bound: d.bound().to_string(),
        oracle_dim: oracle,
        timings: None,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Parses and decomposes the document at `input`.
pub fn run_decomposition(input: &Path, config: &RunConfig, timings: bool) -> Result<Report, CliError> {
    let doc = InputDocument::from_json(&read(input)?)?;
    let alg = doc.to_algebra()?;
    let start = Instant::now();
    let d = decompose(&alg, &config.core())?;
    let decompose_ms = start.elapsed().as_millis();
    let start = Instant::now();
    let oracle = (config.terminal_dim == TerminalDimMode::Oracle).then(|| {
        let reps: Vec<Matrix> = alg.generators().iter().map(|g| g.rep().clone()).collect();
        oracle_dim(alg.field(), alg.faithful_dim(), &reps)
    });
    let oracle_ms = start.elapsed().as_millis();
    let mut report = build_report(&d, alg.field(), alg.dim(), alg.module_dim(), config, oracle);
    if timings {
        report.timings = Some(Timings { decompose_ms, oracle_ms });
    }
    Ok(report)
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Decomposes, writes the report (to `report_path`, or returns it for stdout),
/// and fails with a pipeline error when any verification flag is false.
pub fn cmd_decompose(
    input: &Path,
    config: &RunConfig,
    report_path: Option<&Path>,
    timings: bool,
) -> Result<Report, CliError> {
    let report = run_decomposition(input, config, timings)?;
    if let Some(p) = report_path {
        write(p, &report_json(&report))?;
    }
    report.invariants_hold().map_err(CliError::Pipeline)?;
    Ok(report)
}

/// Writes an input document for the group generated by `gens` (cycle notation).
pub fn cmd_from_permutation_group(gens: &str, field: FieldSpec, out: &Path) -> Result<InputDocument, CliError> {
    let fx = perm_group_fixture_from_text(field, gens)?;
    let names: Vec<String> = (1..=fx.faithful.len()).map(|i| format!("g{i}")).collect();
    let mut doc = InputDocument::from_matrices(field, &names, &fx.faithful, &fx.module);
    doc.metadata = Some(serde_json::json!({ "permutation_generators": gens, "group_order": fx.order }));
    write(out, &(doc.to_json() + "\n"))?;
    Ok(doc)
}

/// Re-runs the decomposition recorded in `report` and compares everything but timings.
pub fn cmd_verify(report: &Path, input: &Path) -> Result<(), CliError> {
    let recorded: Report = serde_json::from_str(&read(report)?)
        .map_err(|e| CliError::Input(format!("invalid report {}: {e}", report.display())))?;
    let mut fresh = run_decomposition(input, &recorded.config, false)?;
    fresh.timings = recorded.timings.clone();
    if fresh != recorded {
        let a = serde_json::to_value(&recorded).expect("serializes");
        let b = serde_json::to_value(&fresh).expect("serializes");
        let field = a
            .as_object()
            .and_then(|a| a.iter().find(|(k, v)| b.get(k.as_str()) != Some(v)).map(|(k, _)| k.clone()))
            .unwrap_or_else(|| "report".into());
        return Err(CliError::Mismatch(format!("field {field:?} differs from a fresh run")));
    }
    recorded.invariants_hold().map_err(CliError::Mismatch)
}
