//! NL → CNL → ASP orchestration.
//!
//! Sentences are translated one by one, each candidate is syntax-checked,
//! accepted candidates are parsed in order as a single document and compiled
//! proposition by proposition. With a gold program the result is compared by
//! bounded uniform equivalence.

mod protocol;
mod translator;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use protocol::{
    serve_echo, Handshake, PluginClient, PluginConfig, PluginError, PluginReply, PluginRequest,
    PluginResponse, MALFORMED, PROTOCOL_NAME, PROTOCOL_VERSION,
};
pub use translator::{
    retrieval_translate, translate, Candidate, RetrievalIndex, TranslateError, TranslatorSpec,
};

use crate::asp::{print_program, AspProgram, Term};
use crate::cnl::{check_syntax, parse_cnl_with, Resolution, SymbolTable, SyntaxVerdict};
use crate::codegen::compile_sentence;
use crate::dataset::TemplatePair;
use crate::metrics::{evaluate, EvalPair, EvalReport, MetricConfig};
use crate::solver::{
    check_uniform_equivalence_with, EquivalenceOptions, EquivalenceVerdict, Signature,
};

/// Bounds of the equivalence check against the gold program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceSetup {
    /// Predicates whose atoms form the input fact sets.
    pub signature: Vec<Signature>,
    pub universe: Vec<Term>,
    pub options: EquivalenceOptions,
}

/// What to run.
#[derive(Debug, Clone, Default)]
pub struct PipelineInputs {
    pub sentences: Vec<String>,
    /// Reference CNL per sentence, for translation metrics.
    pub references: Option<Vec<String>>,
    pub gold: Option<AspProgram>,
    pub equivalence: Option<EquivalenceSetup>,
    pub metrics: MetricConfig,
}

/// Translation of one input sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnlOutput {
    pub index: usize,
    pub candidate: Candidate,
    pub verdict: SyntaxVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Parse,
    Compile,
}

/// A sentence that was accepted by the syntax checker but could not be
/// turned into rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceError {
    pub index: usize,
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum EquivalenceOutcome {
    Checked { verdict: EquivalenceVerdict },
    Skipped { reason: String },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub total: usize,
    pub accepted: usize,
    pub syntactic_accuracy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<EvalReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<EquivalenceOutcome>,
    pub notes: Vec<String>,
}

/// A completed run. Programs are stored in printed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub inputs: Vec<String>,
    pub translator: TranslatorSpec,
    pub cnl_outputs: Vec<CnlOutput>,
    pub errors: Vec<SentenceError>,
    /// Present only when every accepted sentence compiled.
    pub asp_program: Option<String>,
    pub gold: Option<String>,
    pub report: RunReport,
}

/// Parses and compiles the accepted candidates in order. Returns the
/// printed program when every one of them compiled, and the per-sentence
/// failures.
pub fn compile_outputs(outputs: &[CnlOutput]) -> (Option<String>, Vec<SentenceError>) {
    let mut symbols = SymbolTable::new();
    let mut program = AspProgram::default();
    let mut errors = Vec::new();
    for out in outputs {
        let (Some(cnl), true) = (out.candidate.cnl(), out.verdict.is_accepted()) else {
            continue;
        };
        let doc = match parse_cnl_with(cnl, Some(&symbols), Resolution::Strict) {
            Ok(doc) => doc,
            Err(e) => {
                errors.push(SentenceError {
                    index: out.index,
                    stage: Stage::Parse,
                    message: e.to_string(),
                });
                continue;
            }
        };
        symbols = doc.symbols;
        for p in &doc.propositions {
            match compile_sentence(p, &symbols) {
                Ok(rules) => program.rules.extend(rules),
                Err(e) => errors.push(SentenceError {
                    index: out.index,
                    stage: Stage::Compile,
                    message: e.to_string(),
                }),
            }
        }
    }
    let printed = errors.is_empty().then(|| print_program(&program));
    (printed, errors)
}

/// Runs translation, checking, compilation and, with a gold program and an
/// equivalence setup, the equivalence check. Only translator startup
/// failures abort; every other problem is recorded in the run.
pub fn run_pipeline(
    inputs: &PipelineInputs,
    spec: &TranslatorSpec,
    templates: &[TemplatePair],
) -> Result<PipelineRun, TranslateError> {
    let candidates = translate(&inputs.sentences, spec, templates)?;
    let cnl_outputs: Vec<CnlOutput> = candidates
        .into_iter()
        .enumerate()
        .map(|(index, candidate)| {
            let verdict = match &candidate {
                Candidate::Cnl { cnl } => check_syntax(cnl, None),
                Candidate::NoMatch => rejected("no matching template"),
                Candidate::Timeout => rejected("translation timed out"),
                Candidate::Error { message } => rejected(&format!("translator error: {message}")),
            };
            CnlOutput {
                index,
                candidate,
                verdict,
            }
        })
        .collect();
    let (asp_program, errors) = compile_outputs(&cnl_outputs);

    let total = cnl_outputs.len();
    let accepted = cnl_outputs
        .iter()
        .filter(|o| o.verdict.is_accepted())
        .count();
    let mut notes = Vec::new();
    let metrics = inputs.references.as_ref().and_then(|refs| {
        if refs.len() != total {
            notes.push(format!(
                "metrics skipped: {} references for {total} sentences",
                refs.len()
            ));
            return None;
        }
        let pairs: Vec<EvalPair> = cnl_outputs
            .iter()
            .zip(refs)
            .map(|(o, r)| EvalPair::new(o.candidate.cnl().unwrap_or(""), r.as_str()))
            .collect();
        match evaluate(&pairs, &inputs.metrics, true) {
            Ok(r) => Some(r),
            Err(e) => {
                notes.push(format!("metrics skipped: {e}"));
                None
            }
        }
    });

    let equivalence = inputs.gold.as_ref().map(|gold| {
        let Some(setup) = &inputs.equivalence else {
            return EquivalenceOutcome::Skipped {
                reason: "no equivalence bounds configured".into(),
            };
        };
        let Some(text) = &asp_program else {
            return EquivalenceOutcome::Skipped {
                reason: format!("{} sentence(s) failed to compile", errors.len()),
            };
        };
        let program: AspProgram = text.parse().expect("printed programs parse back");
        match check_uniform_equivalence_with(
            &program,
            gold,
            &setup.signature,
            &setup.universe,
            &setup.options,
        ) {
            Ok(verdict) => EquivalenceOutcome::Checked { verdict },
            Err(e) => EquivalenceOutcome::Failed {
                error: e.to_string(),
            },
        }
    });

    Ok(PipelineRun {
        inputs: inputs.sentences.clone(),
        translator: spec.clone(),
        report: RunReport {
            total,
            accepted,
            syntactic_accuracy: if total == 0 {
                0.0
            } else {
                accepted as f64 / total as f64
            },
            metrics,
            equivalence,
            notes,
        },
        cnl_outputs,
        errors,
        asp_program,
        gold: inputs.gold.as_ref().map(print_program),
    })
}

fn rejected(reason: &str) -> SyntaxVerdict {
    SyntaxVerdict::Rejected {
        reason: reason.to_string(),
    }
}

impl PipelineRun {
    /// Recompiles the stored CNL outputs. Equal to `asp_program` for any
    /// run produced by [`run_pipeline`].
    pub fn replay(&self) -> Option<String> {
        compile_outputs(&self.cnl_outputs).0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}
