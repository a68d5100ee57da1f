use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DatasetRecord, Origin};
use crate::pipeline::{PluginClient, PluginConfig, PluginError, PluginReply, PluginRequest};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum ProviderError {
    #[error("provider unavailable: {0}")]
    Unavailable(String),
    #[error("provider failed: {0}")]
    Failed(String),
    #[error("provider returned {got} paraphrases, {wanted} requested")]
    Short { wanted: usize, got: usize },
}

/// Produces NL paraphrases. CNL is never paraphrased.
pub trait ParaphraseProvider {
    fn name(&self) -> &str;

    /// Exactly `k` paraphrases of `nl`, in a deterministic order.
    fn paraphrase(&mut self, nl: &str, k: usize) -> Result<Vec<String>, ProviderError>;
}

/// Returns the input unchanged `k` times.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityProvider;

impl ParaphraseProvider for IdentityProvider {
    fn name(&self) -> &str {
        "identity"
    }

    fn paraphrase(&mut self, nl: &str, k: usize) -> Result<Vec<String>, ProviderError> {
        Ok(vec![nl.to_string(); k])
    }
}

/// Rewrites phrases from a substitution table. Variant `j` applies the
/// substitutions selected by the bits of `j + 1`; when the sentence admits
/// fewer distinct rewrites than requested the variants repeat cyclically.
#[derive(Debug, Clone)]
pub struct SynonymProvider {
    pub table: Vec<(String, String)>,
}

const DEFAULT_SYNONYMS: &[(&str, &str)] = &[
    ("each", "every"),
    ("must", "has to"),
    ("there is", "there exists"),
    ("cannot", "must not"),
    ("at most", "no more than"),
    ("at least", "no fewer than"),
    ("assign", "give"),
    ("connected", "linked"),
    ("minimize", "keep as small as possible"),
    ("same", "identical"),
    ("if", "whenever"),
    ("possible", "allowed"),
];

impl Default for SynonymProvider {
    fn default() -> Self {
        SynonymProvider {
            table: DEFAULT_SYNONYMS
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }
}

fn replace_words(text: &str, from: &str, to: &str) -> String {
    let words: Vec<&str> = text.split(' ').collect();
    let pat: Vec<&str> = from.split(' ').collect();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let hit = i + pat.len() <= words.len()
            && pat
                .iter()
                .zip(&words[i..])
                .all(|(p, w)| w.eq_ignore_ascii_case(p));
        if hit {
            let first = words[i].chars().next().is_some_and(char::is_uppercase);
            let mut rep = to.to_string();
            if first {
                rep = capitalize(&rep);
            }
            out.push(rep);
            i += pat.len();
        } else {
            out.push(words[i].to_string());
            i += 1;
        }
    }
    out.join(" ")
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

impl ParaphraseProvider for SynonymProvider {
    fn name(&self) -> &str {
        "synonym"
    }

    fn paraphrase(&mut self, nl: &str, k: usize) -> Result<Vec<String>, ProviderError> {
        let applicable: Vec<&(String, String)> = self
            .table
            .iter()
            .filter(|(from, to)| replace_words(nl, from, to) != nl)
            .take(16)
            .collect();
        let mut variants: Vec<String> = Vec::new();
        for mask in 1u32..(1 << applicable.len()) {
            let mut s = nl.to_string();
            for (b, (from, to)) in applicable.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    s = replace_words(&s, from, to);
                }
            }
            if s != nl && !variants.contains(&s) {
                variants.push(s);
            }
            if variants.len() == k {
                break;
            }
        }
        if variants.is_empty() {
            variants.push(nl.to_string());
        }
        Ok((0..k)
            .map(|j| variants[j % variants.len()].clone())
            .collect())
    }
}

/// Settings of the hosted completion API used for the original dataset.
/// Recorded for provenance only; no client is bundled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HostedSettings {
    pub engine: String,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for HostedSettings {
    fn default() -> Self {
        HostedSettings {
            engine: "text-davinci-003".into(),
            temperature: 0.6,
            max_tokens: 1000,
        }
    }
}

/// Paraphrases through a plugin process speaking the translator protocol,
/// with `task = "paraphrase"` and one request per variant.
pub struct ExternalProvider {
    client: PluginClient,
}

impl ExternalProvider {
    pub fn spawn(config: &PluginConfig) -> Result<Self, ProviderError> {
        PluginClient::spawn(config)
            .map(|client| ExternalProvider { client })
            .map_err(|e| ProviderError::Unavailable(e.to_string()))
    }
}

impl ParaphraseProvider for ExternalProvider {
    fn name(&self) -> &str {
        "external"
    }

    fn paraphrase(&mut self, nl: &str, k: usize) -> Result<Vec<String>, ProviderError> {
        let requests: Vec<PluginRequest> = (0..k)
            .map(|j| PluginRequest::paraphrase(nl, j as u32))
            .collect();
        let mut out = Vec::with_capacity(k);
        for r in self.client.call_batch(requests) {
            match r {
                Ok(PluginReply::Nl(s)) => out.push(s),
                Ok(PluginReply::Cnl(_)) => {
                    return Err(ProviderError::Failed(
                        "plugin answered with cnl to a paraphrase request".into(),
                    ))
                }
                Err(PluginError::Remote { message, .. }) => {
                    return Err(ProviderError::Failed(message))
                }
                Err(e) => return Err(ProviderError::Failed(e.to_string())),
            }
        }
        Ok(out)
    }
}

/// Partial result of an interrupted expansion. Pass `completed` and
/// `resume_from` to [`rephrase_expand_from`] to continue.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("paraphrasing record {record_id} failed: {error}")]
pub struct RephraseFailure {
    pub record_id: u64,
    pub error: ProviderError,
    /// Rephrased records produced before the failure.
    pub completed: Vec<DatasetRecord>,
    /// Index into the input of the record to retry.
    pub resume_from: usize,
}

/// Returns `records` followed by `k` rephrased copies of every source or
/// generated record, in input order. Rephrased copies keep the parent's CNL
/// and category and get fresh ids after the largest input id.
pub fn rephrase_expand(
    records: &[DatasetRecord],
    provider: &mut dyn ParaphraseProvider,
    k: usize,
) -> Result<Vec<DatasetRecord>, RephraseFailure> {
    rephrase_expand_from(records, provider, k, Vec::new(), 0)
}

pub fn rephrase_expand_from(
    records: &[DatasetRecord],
    provider: &mut dyn ParaphraseProvider,
    k: usize,
    mut completed: Vec<DatasetRecord>,
    resume_from: usize,
) -> Result<Vec<DatasetRecord>, RephraseFailure> {
    let base = records.iter().map(|r| r.id).max().unwrap_or(0);
    let mut next_id = completed
        .iter()
        .map(|r| r.id)
        .max()
        .unwrap_or(base)
        .max(base)
        + 1;
    for (i, parent) in records.iter().enumerate().skip(resume_from) {
        if parent.origin == Origin::Rephrased || k == 0 {
            continue;
        }
        let fail = |error, completed| RephraseFailure {
            record_id: parent.id,
            error,
            completed,
            resume_from: i,
        };
        let texts = match provider.paraphrase(&parent.nl, k) {
            Ok(t) if t.len() == k => t,
            Ok(t) => {
                return Err(fail(
                    ProviderError::Short {
                        wanted: k,
                        got: t.len(),
                    },
                    completed,
                ))
            }
            Err(e) => return Err(fail(e, completed)),
        };
        for nl in texts {
            completed.push(DatasetRecord {
                id: next_id,
                nl,
                cnl: parent.cnl.clone(),
                category: parent.category,
                origin: Origin::Rephrased,
                parent_id: Some(parent.id),
            });
            next_id += 1;
        }
    }
    let mut out = records.to_vec();
    out.extend(completed);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnl::PropositionKind;

    fn rec(id: u64, nl: &str) -> DatasetRecord {
        DatasetRecord {
            id,
            nl: nl.into(),
            cnl: "A node is identified by an id.".into(),
            category: PropositionKind::DefinitionConstCompound,
            origin: Origin::Source,
            parent_id: None,
        }
    }

    #[test]
    fn identity_expansion() {
        let out = rephrase_expand(&[rec(1, "a"), rec(2, "b")], &mut IdentityProvider, 3).unwrap();
        assert_eq!(out.len(), 8);
        assert_eq!(out[2].parent_id, Some(1));
        assert_eq!(out[5].parent_id, Some(2));
        assert_eq!(
            out.iter().map(|r| r.id).collect::<Vec<_>>(),
            [1, 2, 3, 4, 5, 6, 7, 8]
        );
        assert!(out[2..]
            .iter()
            .all(|r| r.origin == Origin::Rephrased && r.cnl == out[0].cnl));
    }

    #[test]
    fn k_zero_adds_nothing() {
        let input = [rec(4, "a")];
        assert_eq!(
            rephrase_expand(&input, &mut IdentityProvider, 0).unwrap(),
            input
        );
    }

    #[test]
    fn synonyms_rewrite_and_cycle() {
        let mut p = SynonymProvider::default();
        let v = p.paraphrase("Each node must have a color.", 4).unwrap();
        assert_eq!(v[0], "Every node must have a color.");
        assert_eq!(v[1], "Each node has to have a color.");
        assert_eq!(v[2], "Every node has to have a color.");
        assert_eq!(v[3], v[0]);
        assert_eq!(
            p.paraphrase("Nothing here.", 2).unwrap(),
            ["Nothing here.", "Nothing here."]
        );
    }

    struct Flaky {
        fail_on: &'static str,
    }

    impl ParaphraseProvider for Flaky {
        fn name(&self) -> &str {
            "flaky"
        }

        fn paraphrase(&mut self, nl: &str, k: usize) -> Result<Vec<String>, ProviderError> {
            if nl == self.fail_on {
                return Err(ProviderError::Failed("boom".into()));
            }
            Ok(vec![format!("{nl}!"); k])
        }
    }

    #[test]
    fn failure_reports_cursor_and_resumes() {
        let input = [rec(1, "a"), rec(2, "b"), rec(3, "c")];
        let err = rephrase_expand(&input, &mut Flaky { fail_on: "b" }, 2).unwrap_err();
        assert_eq!(
            (err.record_id, err.resume_from, err.completed.len()),
            (2, 1, 2)
        );
        let out = rephrase_expand_from(
            &input,
            &mut Flaky { fail_on: "" },
            2,
            err.completed,
            err.resume_from,
        )
        .unwrap();
        let straight = rephrase_expand(&input, &mut Flaky { fail_on: "" }, 2).unwrap();
        assert_eq!(out, straight);
    }
}
