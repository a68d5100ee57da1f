use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{stable_mean, tokenize, EvalPair, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub exact_match_accuracy: f64,
}

fn multiset_overlap(a: &[String], b: &[String]) -> usize {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in b {
        *counts.entry(t).or_insert(0) += 1;
    }
    a.iter()
        .filter(|t| match counts.get_mut(t.as_str()) {
            Some(c) if *c > 0 => {
                *c -= 1;
                true
            }
            _ => false,
        })
        .count()
}

fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Macro-averaged token precision and recall against the first reference of
/// each pair, their harmonic mean, and the fraction of hypotheses equal to
/// that reference up to whitespace.
pub fn token_prf(pairs: &[EvalPair]) -> Result<TokenPrf, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let mut ps = Vec::with_capacity(pairs.len());
    let mut rs = Vec::with_capacity(pairs.len());
    let mut exact = 0usize;
    for (index, pair) in pairs.iter().enumerate() {
        let reference = pair
            .references
            .first()
            .ok_or(MetricError::MissingReference { index })?;
        let h = tokenize(&pair.hypothesis);
        let r = tokenize(reference);
        let overlap = multiset_overlap(&h, &r) as f64;
        ps.push(if h.is_empty() {
            0.0
        } else {
            overlap / h.len() as f64
        });
        rs.push(if r.is_empty() {
            0.0
        } else {
            overlap / r.len() as f64
        });
        if normalize(&pair.hypothesis) == normalize(reference) {
            exact += 1;
        }
    }
    let precision = stable_mean(ps);
    let recall = stable_mean(rs);
    let f1 = if precision > 0.0 && recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(TokenPrf {
        precision,
        recall,
        f1,
        exact_match_accuracy: exact as f64 / pairs.len() as f64,
    })
}
