use serde::{Deserialize, Serialize};

use super::{
    corpus_bleu, corpus_meteor, syntactic_accuracy, token_prf, EvalPair, MetricConfig, MetricError,
    Smoothing, TOKENIZATION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub total: usize,
    /// Present when hypotheses were checked as CNL.
    pub syntactically_correct: Option<usize>,
}

/// Every score for one hypothesis/reference corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Cumulative BLEU-1 .. BLEU-n.
    pub bleu: Vec<f64>,
    pub meteor: f64,
    pub syntactic_accuracy: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub exact_match_accuracy: f64,
    pub counts: EvalCounts,
    pub config: MetricConfig,
    pub tokenization: String,
    pub meteor_stage: String,
}

/// Computes all metrics. With `cnl_syntax`, hypotheses are also run through
/// the CNL syntax checker.
pub fn evaluate(
    pairs: &[EvalPair],
    config: &MetricConfig,
    cnl_syntax: bool,
) -> Result<EvalReport, MetricError> {
    let bleu = corpus_bleu(pairs, config)?;
    let meteor = corpus_meteor(pairs, config)?;
    let prf = token_prf(pairs)?;
    let sa = if cnl_syntax {
        let hyps: Vec<&str> = pairs.iter().map(|p| p.hypothesis.as_str()).collect();
        Some(syntactic_accuracy(&hyps, None)?)
    } else {
        None
    };
    Ok(EvalReport {
        bleu,
        meteor,
        syntactic_accuracy: sa.as_ref().map(|s| s.accuracy),
        precision: prf.precision,
        recall: prf.recall,
        f1: prf.f1,
        exact_match_accuracy: prf.exact_match_accuracy,
        counts: EvalCounts {
            total: pairs.len(),
            syntactically_correct: sa.map(|s| s.accepted),
        },
        config: *config,
        tokenization: TOKENIZATION.to_string(),
        meteor_stage: "exact".to_string(),
    })
}

/// Two-column text table of a report.
pub fn render_table(r: &EvalReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for (i, b) in r.bleu.iter().enumerate() {
        rows.push((format!("BLEU-{}", i + 1), format!("{b:.3}")));
    }
    rows.push(("METEOR".into(), format!("{:.3}", r.meteor)));
    if let (Some(sa), Some(ok)) = (r.syntactic_accuracy, r.counts.syntactically_correct) {
        rows.push((
            "SA (%)".into(),
            format!("{:.2} ({ok}/{})", sa * 100.0, r.counts.total),
        ));
    }
    rows.push(("Precision".into(), format!("{:.3}", r.precision)));
    rows.push(("Recall".into(), format!("{:.3}", r.recall)));
    rows.push(("F1".into(), format!("{:.3}", r.f1)));
    rows.push(("Accuracy".into(), format!("{:.3}", r.exact_match_accuracy)));
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0).max(6);
    let mut out = format!("{:<width$}  Value\n", "Metric");
    out.push_str(&format!("{}  {}\n", "-".repeat(width), "-".repeat(5)));
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    let smoothing = match r.config.bleu_smoothing {
        Smoothing::None => "none",
        Smoothing::AddOne => "add-one",
    };
    out.push_str(&format!(
        "pairs: {}; bleu smoothing: {smoothing}; meteor: {} stage, alpha={} beta={} gamma={}\n",
        r.counts.total,
        r.meteor_stage,
        r.config.meteor_alpha,
        r.config.meteor_beta,
        r.config.meteor_gamma
    ));
    out
}
