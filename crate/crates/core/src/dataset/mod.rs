//! Template-driven NL/CNL dataset generation.
//!
//! Template pairs carry typed placeholders (`noun_1`, `verb_2`, `var_1`,
//! `num_3`, `color_1`, `PID_1`, `num_range(1 to 4)`, `num_choice(3)`)
//! which are filled from a bag of words. Generated records are balanced
//! per grammar category, optionally expanded with paraphrases of the NL
//! side, and summarized by a manifest whose arithmetic can be audited.

mod bow;
mod generate;
mod io;
mod manifest;
mod placeholder;
mod rephrase;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnl::PropositionKind;

pub use bow::BagOfWords;
pub use generate::{
    generate_balanced, generate_balanced_with, instantiate, instantiate_with, Targets,
    DEFAULT_RETRY_CAP,
};
pub use io::{parse_targets, parse_templates, read_records, render_templates, write_records};
pub use manifest::{audit_manifest, CategoryCounts, DatasetManifest, ManifestViolation};
pub(crate) use placeholder::literal_count;
pub use placeholder::{
    capture, render, scan, Assignment, Connector, Occurrence, Placeholder, Side, Slot, SlotKind,
    TemplatePair,
};
pub use rephrase::{
    rephrase_expand, rephrase_expand_from, ExternalProvider, HostedSettings, IdentityProvider,
    ParaphraseProvider, ProviderError, RephraseFailure, SynonymProvider,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Source,
    Generated,
    Rephrased,
}

/// One NL/CNL pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: u64,
    pub nl: String,
    pub cnl: String,
    pub category: PropositionKind,
    pub origin: Origin,
    /// Set exactly for rephrased records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DatasetError {
    #[error("bag of words has no {category} entries")]
    EmptyBagCategory { category: String },
    #[error("bag of words: {0}")]
    InvalidBag(String),
    #[error("placeholder mismatch: {0}")]
    PlaceholderMismatch(String),
    #[error("bad placeholder '{text}': {detail}")]
    BadPlaceholder { text: String, detail: String },
    #[error("template {template} of category {category} produced no valid CNL after {attempts} attempts")]
    RetryExhausted {
        category: PropositionKind,
        template: usize,
        attempts: usize,
    },
    #[error("no template for category {category}")]
    NoTemplates { category: PropositionKind },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}
