use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::protocol::{PluginClient, PluginConfig, PluginError, PluginReply, PluginRequest};
use crate::dataset::{capture, render, Side, TemplatePair};

/// Which translator turns NL sentences into CNL candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TranslatorSpec {
    /// Template retrieval over the NL sides of template pairs.
    BuiltinRetrieval,
    /// A child process speaking the plugin protocol.
    ExternalProcess {
        command: Vec<String>,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
        #[serde(default = "default_window")]
        window: usize,
    },
}

fn default_timeout_ms() -> u64 {
    PluginConfig::default().timeout_ms
}

fn default_window() -> usize {
    PluginConfig::default().window
}

impl Default for TranslatorSpec {
    fn default() -> Self {
        TranslatorSpec::BuiltinRetrieval
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum TranslateError {
    #[error("translator unavailable: {0}")]
    TranslatorUnavailable(String),
}

impl TranslatorSpec {
    /// Checks the invariants that can be verified without running anything:
    /// a positive timeout and window, and a resolvable program.
    pub fn validate(&self) -> Result<(), TranslateError> {
        let TranslatorSpec::ExternalProcess {
            command,
            timeout_ms,
            window,
        } = self
        else {
            return Ok(());
        };
        let unavailable = |m: String| Err(TranslateError::TranslatorUnavailable(m));
        if *timeout_ms == 0 || *window == 0 {
            return unavailable("timeout and window must be positive".into());
        }
        let Some(program) = command.first() else {
            return unavailable("empty command".into());
        };
        if !resolvable(program) {
            return unavailable(format!("{program}: not found"));
        }
        Ok(())
    }
}

fn resolvable(program: &str) -> bool {
    if program.contains(std::path::MAIN_SEPARATOR) || program.contains('/') {
        return Path::new(program).is_file();
    }
    std::env::var_os("PATH")
        .map(|paths| std::env::split_paths(&paths).any(|d| d.join(program).is_file()))
        .unwrap_or(false)
}

/// Result of translating one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Candidate {
    Cnl { cnl: String },
    NoMatch,
    Timeout,
    Error { message: String },
}

impl Candidate {
    pub fn cnl(&self) -> Option<&str> {
        match self {
            Candidate::Cnl { cnl } => Some(cnl),
            _ => None,
        }
    }
}

/// Template pairs ordered for retrieval: most literal NL tokens first,
/// ties kept in input order.
#[derive(Debug, Clone)]
pub struct RetrievalIndex {
    templates: Vec<TemplatePair>,
}

impl RetrievalIndex {
    pub fn new(templates: &[TemplatePair]) -> Self {
        let mut scored: Vec<(usize, &TemplatePair)> = templates
            .iter()
            .map(|t| (crate::dataset::literal_count(&t.nl).unwrap_or(0), t))
            .collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0));
        RetrievalIndex {
            templates: scored.into_iter().map(|(_, t)| t.clone()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// Fills the CNL side of the first template whose NL side captures `nl`.
pub fn retrieval_translate(nl: &str, index: &RetrievalIndex) -> Option<String> {
    let nl = nl.split_whitespace().collect::<Vec<_>>().join(" ");
    index.templates.iter().find_map(|t| {
        let asg = capture(&t.nl, &nl, Side::Nl).ok()??;
        render(&t.cnl, &asg, Side::Cnl).ok()
    })
}

/// One candidate per sentence, in order. Only startup failures abort.
pub fn translate(
    sentences: &[String],
    spec: &TranslatorSpec,
    templates: &[TemplatePair],
) -> Result<Vec<Candidate>, TranslateError> {
    match spec {
        TranslatorSpec::BuiltinRetrieval => {
            let index = RetrievalIndex::new(templates);
            Ok(sentences
                .iter()
                .map(|s| match retrieval_translate(s, &index) {
                    Some(cnl) => Candidate::Cnl { cnl },
                    None => Candidate::NoMatch,
                })
                .collect())
        }
        TranslatorSpec::ExternalProcess {
            command,
            timeout_ms,
            window,
        } => {
            spec.validate()?;
            if sentences.is_empty() {
                return Ok(Vec::new());
            }
            let config = PluginConfig {
                command: command.clone(),
                timeout_ms: *timeout_ms,
                window: *window,
                ..PluginConfig::default()
            };
            let mut client = PluginClient::spawn(&config)
                .map_err(|e| TranslateError::TranslatorUnavailable(e.to_string()))?;
            let requests = sentences.iter().map(PluginRequest::translate).collect();
            Ok(client
                .call_batch(requests)
                .into_iter()
                .map(|r| match r {
                    Ok(PluginReply::Cnl(cnl)) => Candidate::Cnl { cnl },
                    Ok(PluginReply::Nl(_)) => Candidate::Error {
                        message: "plugin answered a translation request with nl".into(),
                    },
                    Err(PluginError::Timeout { .. }) => Candidate::Timeout,
                    Err(PluginError::Remote { message, .. }) => Candidate::Error { message },
                    Err(e) => Candidate::Error {
                        message: e.to_string(),
                    },
                })
                .collect())
        }
    }
}
