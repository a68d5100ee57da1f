//! Controlled natural language frontend.
//!
//! Sentences are period-terminated and fall into seven proposition
//! categories. The grammar is written down in `docs/grammar.md`; the parser
//! in [`parser`] follows it production by production.

mod lexer;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asp::CompareOp;

pub use lexer::{split_sentences, SentenceSpan};
pub use parser::RESERVED;

/// A value bound to an attribute or used in a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Var(String),
    Const(String),
    Int(i64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Var(s) | Value::Const(s) => f.write_str(s),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

/// `A node is identified by an id.`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityDef {
    pub name: String,
    pub key_attrs: Vec<String>,
    pub value_attrs: Vec<String>,
}

impl EntityDef {
    /// Attributes in argument order: keys first, then values.
    pub fn attributes(&self) -> impl Iterator<Item = &str> {
        self.key_attrs
            .iter()
            .chain(&self.value_attrs)
            .map(String::as_str)
    }

    pub fn arity(&self) -> usize {
        self.key_attrs.len() + self.value_attrs.len()
    }

    pub fn position(&self, attr: &str) -> Option<usize> {
        self.attributes().position(|a| a == attr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub attribute: String,
    pub value: Value,
}

/// `a col with node X, and with color equal to blue`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRef {
    pub entity: String,
    pub bindings: Vec<Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnlComparison {
    pub left: Value,
    pub op: CompareOp,
    pub right: Value,
}

/// One clause of a condition or assertion list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// `there is [not] a <ref>`
    Exists { entity: EntityRef, negated: bool },
    /// `X is less than Y`
    Compare(CnlComparison),
}

/// Cardinality attached to a quantified choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    Exactly(i64),
    AtMost(i64),
    AtLeast(i64),
    Between(i64, i64),
}

impl Quantity {
    pub fn bounds(self) -> (Option<i64>, Option<i64>) {
        match self {
            Quantity::Exactly(n) => (Some(n), Some(n)),
            Quantity::AtMost(n) => (None, Some(n)),
            Quantity::AtLeast(n) => (Some(n), None),
            Quantity::Between(lo, hi) => (Some(lo), Some(hi)),
        }
    }
}

/// One alternative of a choice head, with its `such that` conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceAlternative {
    pub target: EntityRef,
    pub such_that: Vec<EntityRef>,
}

/// The seven proposition categories used for dataset accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropositionKind {
    DefinitionConstCompound,
    DefinitionWhen,
    DefinitionWhenever,
    NegativeConstraint,
    PositiveConstraint,
    QuantifiedChoice,
    WeakConstraint,
}

impl PropositionKind {
    pub const ALL: [PropositionKind; 7] = [
        PropositionKind::DefinitionConstCompound,
        PropositionKind::DefinitionWhen,
        PropositionKind::DefinitionWhenever,
        PropositionKind::NegativeConstraint,
        PropositionKind::PositiveConstraint,
        PropositionKind::QuantifiedChoice,
        PropositionKind::WeakConstraint,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PropositionKind::DefinitionConstCompound => "definition-const-compound",
            PropositionKind::DefinitionWhen => "definition-when",
            PropositionKind::DefinitionWhenever => "definition-whenever",
            PropositionKind::NegativeConstraint => "negative-constraint",
            PropositionKind::PositiveConstraint => "positive-constraint",
            PropositionKind::QuantifiedChoice => "quantified-choice",
            PropositionKind::WeakConstraint => "weak-constraint",
        }
    }

    /// Row label in dataset accounting tables.
    pub fn table_label(self) -> &'static str {
        match self {
            PropositionKind::DefinitionConstCompound => "Def. Const/Comp.",
            PropositionKind::DefinitionWhen => "Def. 'When'",
            PropositionKind::DefinitionWhenever => "Def. 'Whenever'",
            PropositionKind::NegativeConstraint => "Neg. Constraint",
            PropositionKind::PositiveConstraint => "Pos. Constraint",
            PropositionKind::QuantifiedChoice => "Quant. Choice",
            PropositionKind::WeakConstraint => "Weak Constraint",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == label)
    }
}

impl fmt::Display for PropositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for PropositionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_label(s).ok_or_else(|| format!("unknown proposition category '{s}'"))
    }
}

/// A parsed proposition. The variant determines the category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CnlProposition {
    /// `A edge is identified by a firstnode, and by a secondnode.`
    Definition(EntityDef),
    /// `A reached with id Y holds when there is ...`
    When {
        head: EntityRef,
        conditions: Vec<Condition>,
    },
    /// `Whenever there is ... then we must have a ...`
    Whenever {
        conditions: Vec<Condition>,
        head: EntityRef,
    },
    /// `It is prohibited that ..., whenever there is ...`
    Prohibition {
        assertions: Vec<Condition>,
        conditions: Vec<Condition>,
    },
    /// `It is required that ..., whenever there is ...`
    Requirement {
        assertions: Vec<Condition>,
        conditions: Vec<Condition>,
    },
    /// `Whenever there is ... then we can have ...`
    Choice {
        conditions: Vec<Condition>,
        quantity: Option<Quantity>,
        alternatives: Vec<ChoiceAlternative>,
    },
    /// `It is preferred as little as possible, with weight W and priority L, that ...`
    Preference {
        weight: Value,
        priority: i64,
        assertions: Vec<Condition>,
        conditions: Vec<Condition>,
    },
}

impl CnlProposition {
    pub fn kind(&self) -> PropositionKind {
        categorize(self)
    }
}

/// Returns the accounting category of a proposition.
pub fn categorize(p: &CnlProposition) -> PropositionKind {
    match p {
        CnlProposition::Definition(_) => PropositionKind::DefinitionConstCompound,
        CnlProposition::When { .. } => PropositionKind::DefinitionWhen,
        CnlProposition::Whenever { .. } => PropositionKind::DefinitionWhenever,
        CnlProposition::Prohibition { .. } => PropositionKind::NegativeConstraint,
        CnlProposition::Requirement { .. } => PropositionKind::PositiveConstraint,
        CnlProposition::Choice { .. } => PropositionKind::QuantifiedChoice,
        CnlProposition::Preference { .. } => PropositionKind::WeakConstraint,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolEntry {
    pub def: EntityDef,
    /// Declared by first use in a head rather than by a definition sentence.
    pub implicit: bool,
}

/// Entity definitions in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTable {
    entries: Vec<SymbolEntry>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&EntityDef> {
        self.entry(name).map(|e| &e.def)
    }

    pub fn entry(&self, name: &str) -> Option<&SymbolEntry> {
        self.entries.iter().find(|e| e.def.name == name)
    }

    fn entry_mut(&mut self, name: &str) -> Option<&mut SymbolEntry> {
        self.entries.iter_mut().find(|e| e.def.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &EntityDef> {
        self.entries.iter().map(|e| &e.def)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds or replaces an explicit definition.
    pub fn define(&mut self, def: EntityDef) -> Result<(), EntityDef> {
        match self.entry_mut(&def.name) {
            Some(e) if e.implicit => {
                *e = SymbolEntry {
                    def,
                    implicit: false,
                };
                Ok(())
            }
            Some(e) if e.def == def => Ok(()),
            Some(e) => Err(e.def.clone()),
            None => {
                self.entries.push(SymbolEntry {
                    def,
                    implicit: false,
                });
                Ok(())
            }
        }
    }

    /// Declares `r.entity` from its bindings if unknown, or extends an
    /// implicit declaration with attributes it has not seen yet.
    fn declare_implicit(&mut self, r: &EntityRef, extend: bool) {
        match self.entry_mut(&r.entity) {
            Some(e) => {
                if e.implicit || extend {
                    for b in &r.bindings {
                        if e.def.position(&b.attribute).is_none() {
                            e.def.key_attrs.push(b.attribute.clone());
                        }
                    }
                }
            }
            None => {
                let mut keys: Vec<String> = Vec::new();
                for b in &r.bindings {
                    if !keys.contains(&b.attribute) {
                        keys.push(b.attribute.clone());
                    }
                }
                self.entries.push(SymbolEntry {
                    def: EntityDef {
                        name: r.entity.clone(),
                        key_attrs: keys,
                        value_attrs: Vec::new(),
                    },
                    implicit: true,
                });
            }
        }
    }
}

/// A parsed CNL text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnlDocument {
    pub propositions: Vec<CnlProposition>,
    pub symbols: SymbolTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CnlError {
    #[error("sentence {sentence}, position {position}: unexpected {found}; expected {}{}", .expected.join(" or "), .hint.as_ref().map(|h| format!(" ({h})")).unwrap_or_default())]
    Syntax {
        sentence: usize,
        position: usize,
        found: String,
        expected: Vec<String>,
        hint: Option<String>,
    },
    #[error("sentence {sentence}: unknown entity '{name}'")]
    UnknownEntity { name: String, sentence: usize },
    #[error("sentence {sentence}: entity '{entity}' has no attribute '{attribute}'")]
    UnknownAttribute {
        entity: String,
        attribute: String,
        sentence: usize,
    },
    #[error("sentence {sentence}: '{name}' was already defined with different attributes")]
    ConflictingDefinition { name: String, sentence: usize },
}

impl CnlError {
    pub fn sentence(&self) -> usize {
        match self {
            CnlError::Syntax { sentence, .. }
            | CnlError::UnknownEntity { sentence, .. }
            | CnlError::UnknownAttribute { sentence, .. }
            | CnlError::ConflictingDefinition { sentence, .. } => *sentence,
        }
    }
}

/// Entity-resolution policy of a parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Resolution {
    /// Entities in conditions must be defined (explicitly or by an earlier head).
    #[default]
    Strict,
    /// Unknown entities and attributes are declared on first use.
    Lenient,
}

/// Parses a CNL text. Entities referenced in conditions must be defined
/// earlier in the text; entities first seen in a rule head are declared
/// implicitly with their attributes in order of mention.
pub fn parse_cnl(text: &str) -> Result<CnlDocument, CnlError> {
    parse_cnl_with(text, None, Resolution::Strict)
}

/// Parses with an ambient symbol table and a resolution policy.
pub fn parse_cnl_with(
    text: &str,
    ambient: Option<&SymbolTable>,
    resolution: Resolution,
) -> Result<CnlDocument, CnlError> {
    let mut symbols = ambient.cloned().unwrap_or_default();
    let mut propositions = Vec::new();
    for (index, span) in split_sentences(text).into_iter().enumerate() {
        let tokens = lexer::lex(span.text, index)?;
        let prop = parser::parse_sentence(&tokens, index, span.text.len())?;
        resolve(&prop, &mut symbols, index, resolution)?;
        propositions.push(prop);
    }
    Ok(CnlDocument {
        propositions,
        symbols,
    })
}

/// Verdict of [`check_syntax`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum SyntaxVerdict {
    Accepted { category: PropositionKind },
    Rejected { reason: String },
}

impl SyntaxVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, SyntaxVerdict::Accepted { .. })
    }
}

/// Checks a single sentence. With an ambient table the sentence is parsed
/// exactly as it would be inside a document following those definitions;
/// without one, entity resolution is lenient and only the grammar is
/// checked.
pub fn check_syntax(sentence: &str, ambient: Option<&SymbolTable>) -> SyntaxVerdict {
    let resolution = if ambient.is_some() {
        Resolution::Strict
    } else {
        Resolution::Lenient
    };
    let spans = split_sentences(sentence);
    if spans.len() != 1 {
        return SyntaxVerdict::Rejected {
            reason: format!("expected exactly one sentence, found {}", spans.len()),
        };
    }
    match parse_cnl_with(sentence, ambient, resolution) {
        Ok(doc) => SyntaxVerdict::Accepted {
            category: doc.propositions[0].kind(),
        },
        Err(e) => SyntaxVerdict::Rejected {
            reason: e.to_string(),
        },
    }
}

fn collect<'a>(conds: &'a [Condition], uses: &mut Vec<&'a EntityRef>) {
    for c in conds {
        if let Condition::Exists { entity, .. } = c {
            uses.push(entity);
        }
    }
}

fn resolve(
    prop: &CnlProposition,
    symbols: &mut SymbolTable,
    sentence: usize,
    resolution: Resolution,
) -> Result<(), CnlError> {
    let lenient = resolution == Resolution::Lenient;
    let mut heads: Vec<&EntityRef> = Vec::new();
    let mut uses: Vec<&EntityRef> = Vec::new();
    match prop {
        CnlProposition::Definition(def) => {
            return symbols
                .define(def.clone())
                .map_err(|_| CnlError::ConflictingDefinition {
                    name: def.name.clone(),
                    sentence,
                });
        }
        CnlProposition::When { head, conditions }
        | CnlProposition::Whenever {
            head, conditions, ..
        } => {
            heads.push(head);
            collect(conditions, &mut uses);
        }
        CnlProposition::Prohibition {
            assertions,
            conditions,
        }
        | CnlProposition::Requirement {
            assertions,
            conditions,
        }
        | CnlProposition::Preference {
            assertions,
            conditions,
            ..
        } => {
            collect(assertions, &mut uses);
            collect(conditions, &mut uses);
        }
        CnlProposition::Choice {
            conditions,
            alternatives,
            ..
        } => {
            collect(conditions, &mut uses);
            for alt in alternatives {
                heads.push(&alt.target);
                uses.extend(alt.such_that.iter());
            }
        }
    }

    // Heads first: a derived entity may appear in its own body (recursion).
    for r in heads {
        match symbols.entry(&r.entity) {
            Some(e) if !e.implicit && !lenient => check_ref(r, symbols, sentence)?,
            _ => symbols.declare_implicit(r, lenient),
        }
    }
    for r in uses {
        if lenient {
            symbols.declare_implicit(r, true);
        } else {
            check_ref(r, symbols, sentence)?;
        }
    }
    Ok(())
}

fn check_ref(r: &EntityRef, symbols: &SymbolTable, sentence: usize) -> Result<(), CnlError> {
    let def = symbols
        .get(&r.entity)
        .ok_or_else(|| CnlError::UnknownEntity {
            name: r.entity.clone(),
            sentence,
        })?;
    for b in &r.bindings {
        if def.position(&b.attribute).is_none() {
            return Err(CnlError::UnknownAttribute {
                entity: r.entity.clone(),
                attribute: b.attribute.clone(),
                sentence,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
