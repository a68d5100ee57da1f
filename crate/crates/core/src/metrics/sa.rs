use serde::{Deserialize, Serialize};

use super::MetricError;
use crate::cnl::{check_syntax, SymbolTable, SyntaxVerdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntacticAccuracy {
    pub total: usize,
    pub accepted: usize,
    /// `accepted / total`.
    pub accuracy: f64,
    pub verdicts: Vec<SyntaxVerdict>,
}

/// Share of sentences accepted by [`check_syntax`], with per-sentence
/// verdicts.
pub fn syntactic_accuracy<S: AsRef<str>>(
    sentences: &[S],
    ambient: Option<&SymbolTable>,
) -> Result<SyntacticAccuracy, MetricError> {
    if sentences.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let verdicts: Vec<SyntaxVerdict> = sentences
        .iter()
        .map(|s| check_syntax(s.as_ref(), ambient))
        .collect();
    let accepted = verdicts.iter().filter(|v| v.is_accepted()).count();
    Ok(SyntacticAccuracy {
        total: sentences.len(),
        accepted,
        accuracy: accepted as f64 / sentences.len() as f64,
        verdicts,
    })
}
