use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stable_mean, tokenized, EvalPair, MetricConfig, MetricError};

/// Exact-match alignment between a hypothesis and one reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    /// Matched (hypothesis position, reference position) pairs, sorted by
    /// hypothesis position.
    pub pairs: Vec<(usize, usize)>,
    pub chunks: usize,
}

impl Alignment {
    pub fn matches(&self) -> usize {
        self.pairs.len()
    }
}

/// Aligns identical tokens, repeatedly taking the longest run of
/// consecutive unmatched tokens that appears in both sequences (leftmost in
/// the hypothesis, then in the reference, on ties). Every token that can be
/// matched is matched, and long runs keep the chunk count low.
pub fn meteor_alignment(hyp: &[String], reference: &[String]) -> Alignment {
    let mut hyp_used = vec![false; hyp.len()];
    let mut ref_used = vec![false; reference.len()];
    let mut pairs = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..hyp.len() {
            for j in 0..reference.len() {
                let mut len = 0;
                while i + len < hyp.len()
                    && j + len < reference.len()
                    && !hyp_used[i + len]
                    && !ref_used[j + len]
                    && hyp[i + len] == reference[j + len]
                {
                    len += 1;
                }
                if len > best.map_or(0, |b| b.2) {
                    best = Some((i, j, len));
                }
            }
        }
        let Some((i, j, len)) = best else { break };
        for k in 0..len {
            hyp_used[i + k] = true;
            ref_used[j + k] = true;
            pairs.push((i + k, j + k));
        }
    }
    pairs.sort_unstable();
    let chunks = pairs
        .iter()
        .enumerate()
        .filter(|(k, &(h, r))| *k == 0 || pairs[k - 1] != (h - 1, r.wrapping_sub(1)))
        .count();
    Alignment { pairs, chunks }
}

/// METEOR of one hypothesis against one reference.
pub fn sentence_meteor(hyp: &[String], reference: &[String], config: &MetricConfig) -> f64 {
    let a = meteor_alignment(hyp, reference);
    let m = a.matches();
    if m == 0 {
        return 0.0;
    }
    let p = m as f64 / hyp.len() as f64;
    let r = m as f64 / reference.len() as f64;
    let alpha = config.meteor_alpha;
    let fmean = p * r / (alpha * p + (1.0 - alpha) * r);
    let penalty = config.meteor_gamma * (a.chunks as f64 / m as f64).powf(config.meteor_beta);
    fmean * (1.0 - penalty)
}

/// Mean over pairs of the best per-reference METEOR score.
pub fn corpus_meteor(pairs: &[EvalPair], config: &MetricConfig) -> Result<f64, MetricError> {
    config.validate()?;
    let data = tokenized(pairs)?;
    let scores: Vec<f64> = data
        .par_iter()
        .map(|(h, refs)| {
            refs.iter()
                .map(|r| sentence_meteor(h, r, config))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(stable_mean(scores))
}
