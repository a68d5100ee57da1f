//! Translation-quality metrics: corpus BLEU, METEOR (exact-match stage),
//! syntactic accuracy of CNL output and token-level precision/recall.

mod bleu;
mod meteor;
mod prf;
mod report;
mod sa;
mod tokenize;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bleu::corpus_bleu;
pub use meteor::{corpus_meteor, meteor_alignment, sentence_meteor, Alignment};
pub use prf::{token_prf, TokenPrf};
pub use report::{evaluate, render_table, EvalCounts, EvalReport};
pub use sa::{syntactic_accuracy, SyntacticAccuracy};
pub use tokenize::{tokenize, TOKENIZATION};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum MetricError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("pair {index}: empty hypothesis")]
    EmptyHypothesis { index: usize },
    #[error("pair {index}: no reference")]
    MissingReference { index: usize },
    #[error("invalid metric configuration: {0}")]
    InvalidConfig(String),
}

/// One hypothesis with its references, as raw text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub hypothesis: String,
    pub references: Vec<String>,
}

impl EvalPair {
    pub fn new(hypothesis: impl Into<String>, reference: impl Into<String>) -> Self {
        EvalPair {
            hypothesis: hypothesis.into(),
            references: vec![reference.into()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothing {
    /// A zero n-gram precision makes the score zero.
    #[default]
    None,
    /// Add one to numerator and denominator of precisions for n >= 2.
    AddOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    pub bleu_max_n: usize,
    pub bleu_smoothing: Smoothing,
    pub meteor_alpha: f64,
    pub meteor_beta: f64,
    pub meteor_gamma: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            bleu_max_n: 4,
            bleu_smoothing: Smoothing::None,
            meteor_alpha: 0.9,
            meteor_beta: 3.0,
            meteor_gamma: 0.5,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<(), MetricError> {
        let bad = |m: &str| Err(MetricError::InvalidConfig(m.to_string()));
        if self.bleu_max_n == 0 {
            return bad("bleu_max_n must be at least 1");
        }
        if !(self.meteor_alpha > 0.0 && self.meteor_alpha < 1.0) {
            return bad("meteor_alpha must lie in (0, 1)");
        }
        if self.meteor_beta.is_nan() || self.meteor_beta <= 0.0 {
            return bad("meteor_beta must be positive");
        }
        if !(0.0..=1.0).contains(&self.meteor_gamma) {
            return bad("meteor_gamma must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Tokenizes every pair, checking the corpus preconditions.
pub(crate) fn tokenized(
    pairs: &[EvalPair],
) -> Result<Vec<(Vec<String>, Vec<Vec<String>>)>, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    pairs
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let hyp = tokenize(&p.hypothesis);
            if hyp.is_empty() {
                return Err(MetricError::EmptyHypothesis { index });
            }
            if p.references.is_empty() {
                return Err(MetricError::MissingReference { index });
            }
            Ok((hyp, p.references.iter().map(|r| tokenize(r)).collect()))
        })
        .collect()
}

/// Order-independent mean: values are sorted before summation.
pub(crate) fn stable_mean(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / values.len() as f64
}
