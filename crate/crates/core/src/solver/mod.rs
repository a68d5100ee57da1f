//! Desk-scale answer-set oracle: naive grounding, brute-force stable model
//! enumeration and bounded uniform equivalence checking.
//!
//! Nothing here tries to be fast. Every stage is bounded by a configurable
//! limit and fails with an explicit error rather than running away.

mod equiv;
mod ground;
mod stable;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asp::{AspProgram, Atom, Term};

pub use equiv::{
    check_uniform_equivalence_bounded, check_uniform_equivalence_with, Counterexample,
    EquivalenceOptions, EquivalenceVerdict, Sample,
};
pub use ground::{ground, ground_with_limit, GroundProgram};
pub use stable::{answer_sets, answer_sets_with, is_stable};

pub const DEFAULT_GROUNDING_LIMIT: u64 = 1_000_000;
pub const DEFAULT_ATOM_BOUND: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum SolveError {
    #[error("grounding rule {rule} exceeds the instantiation limit ({count} > {limit})")]
    GroundingBlowup {
        rule: usize,
        count: u128,
        limit: u64,
    },
    #[error("{atoms} undetermined atoms exceed the enumeration bound of {bound}")]
    UniverseTooLarge { atoms: usize, bound: usize },
    #[error("rule is not ground: {rule}")]
    NonGround { rule: String },
    #[error("weak constraint weight is not an integer: {rule}")]
    NonIntegerWeight { rule: String },
    #[error("{atoms} candidate fact atoms exceed the exhaustive bound of {bound}")]
    FactSpaceTooLarge { atoms: usize, bound: usize },
    #[error("with facts {{{}}}: {source}", join_atoms(.facts))]
    AtFacts {
        facts: Vec<Atom>,
        source: Box<SolveError>,
    },
}

fn join_atoms(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(Atom::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Limits and switches shared by grounding and enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub grounding_limit: u64,
    /// Maximum number of atoms whose truth value is enumerated.
    pub atom_bound: usize,
    /// Keep only answer sets of minimal cost.
    pub optimal_only: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grounding_limit: DEFAULT_GROUNDING_LIMIT,
            atom_bound: DEFAULT_ATOM_BOUND,
            optimal_only: false,
        }
    }
}

/// A predicate name with its arity, written `name/arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub predicate: String,
    pub arity: usize,
}

impl Signature {
    pub fn new(predicate: impl Into<String>, arity: usize) -> Self {
        Signature {
            predicate: predicate.into(),
            arity,
        }
    }

    pub fn matches(&self, atom: &Atom) -> bool {
        atom.predicate == self.predicate && atom.arity() == self.arity
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.predicate, self.arity)
    }
}

impl FromStr for Signature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arity) = s
            .rsplit_once('/')
            .ok_or_else(|| format!("expected name/arity, got '{s}'"))?;
        let arity = arity
            .trim()
            .parse()
            .map_err(|_| format!("bad arity in '{s}'"))?;
        let name = name.trim();
        if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(format!("predicate must start lowercase in '{s}'"));
        }
        Ok(Signature::new(name, arity))
    }
}

/// A stable model together with its weak-constraint cost per level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnswerSet {
    pub atoms: BTreeSet<Atom>,
    pub cost: BTreeMap<i64, i64>,
}

impl AnswerSet {
    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms whose predicate matches one of `signatures`.
    pub fn project(&self, signatures: &[Signature]) -> BTreeSet<Atom> {
        self.atoms
            .iter()
            .filter(|a| signatures.iter().any(|s| s.matches(a)))
            .cloned()
            .collect()
    }
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.atoms
                .iter()
                .map(Atom::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )?;
        if !self.cost.is_empty() {
            let parts: Vec<String> = self
                .cost
                .iter()
                .rev()
                .map(|(l, c)| format!("{c}@{l}"))
                .collect();
            write!(f, " cost [{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Grounds `program` plus `facts` over every constant they mention and
/// enumerates the answer sets.
pub fn solve(
    program: &AspProgram,
    facts: &[Atom],
    config: &SolverConfig,
) -> Result<Vec<AnswerSet>, SolveError> {
    let mut universe: BTreeSet<Term> = program.constants().into_iter().collect();
    universe.extend(facts.iter().flat_map(|a| a.args.iter().cloned()));
    let universe: Vec<Term> = universe.into_iter().collect();
    let g = ground_with_limit(program, &universe, config.grounding_limit)?.with_facts(facts);
    answer_sets_with(&g, config)
}
