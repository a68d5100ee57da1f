use std::collections::HashMap;

use rayon::prelude::*;

use super::{tokenized, EvalPair, MetricConfig, MetricError, Smoothing};

#[derive(Debug, Clone, Default)]
struct Counts {
    matched: Vec<u64>,
    total: Vec<u64>,
    hyp_len: u64,
    ref_len: u64,
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        for (a, b) in self.matched.iter_mut().zip(other.matched) {
            *a += b;
        }
        for (a, b) in self.total.iter_mut().zip(other.total) {
            *a += b;
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        self
    }
}

fn ngrams(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut out = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *out.entry(w).or_insert(0) += 1;
        }
    }
    out
}

fn pair_counts(hyp: &[String], refs: &[Vec<String>], max_n: usize) -> Counts {
    let mut c = Counts {
        matched: vec![0; max_n],
        total: vec![0; max_n],
        hyp_len: hyp.len() as u64,
        ref_len: 0,
    };
    for n in 1..=max_n {
        let h = ngrams(hyp, n);
        let mut max_ref: HashMap<&[String], u64> = HashMap::new();
        for r in refs {
            for (g, k) in ngrams(r, n) {
                let e = max_ref.entry(g).or_insert(0);
                *e = (*e).max(k);
            }
        }
        for (g, k) in &h {
            c.matched[n - 1] += (*k).min(max_ref.get(g).copied().unwrap_or(0));
            c.total[n - 1] += k;
        }
    }
    // Closest reference length, the shorter one on ties.
    let hl = hyp.len() as i64;
    c.ref_len = refs
        .iter()
        .map(|r| r.len() as i64)
        .min_by_key(|&l| ((l - hl).abs(), l))
        .unwrap_or(0) as u64;
    c
}

/// Cumulative corpus BLEU-1 through BLEU-`bleu_max_n`.
///
/// Clipped n-gram counts and lengths are summed over the corpus before any
/// division. The brevity penalty is 1 when the hypotheses are longer than
/// the closest references and `exp(1 - r/c)` otherwise.
pub fn corpus_bleu(pairs: &[EvalPair], config: &MetricConfig) -> Result<Vec<f64>, MetricError> {
    config.validate()?;
    let data = tokenized(pairs)?;
    let max_n = config.bleu_max_n;
    let counts = data
        .par_iter()
        .map(|(h, r)| pair_counts(h, r, max_n))
        .reduce(
            || Counts {
                matched: vec![0; max_n],
                total: vec![0; max_n],
                ..Counts::default()
            },
            Counts::merge,
        );
    let c = counts.hyp_len as f64;
    let r = counts.ref_len as f64;
    let bp = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    let mut log_sum = 0.0;
    let mut zero = false;
    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let (mut num, mut den) = (counts.matched[n - 1] as f64, counts.total[n - 1] as f64);
        if config.bleu_smoothing == Smoothing::AddOne && n >= 2 {
            num += 1.0;
            den += 1.0;
        }
        if num == 0.0 || den == 0.0 {
            zero = true;
        } else {
            log_sum += (num / den).ln();
        }
        out.push(if zero {
            0.0
        } else {
            (bp * (log_sum / n as f64).exp()).min(1.0)
        });
    }
    Ok(out)
}
