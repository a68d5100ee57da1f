//! Data shipped with the library: templates, the bag of words, generation
//! targets and the end-to-end problem specifications.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asp::{parse_program, AspProgram, Atom, Head, Term};
use crate::dataset::{parse_targets, parse_templates, BagOfWords, Targets, TemplatePair};
use crate::pipeline::EquivalenceSetup;
use crate::solver::{EquivalenceOptions, Sample, Signature, SolverConfig};

pub const TEMPLATES: &str = include_str!("../../../data/templates/templates.txt");
pub const TARGETS: &str = include_str!("../../../data/targets.toml");

const PIDS: &str = include_str!("../../../data/bow/pids.txt");
const NOUNS: &str = include_str!("../../../data/bow/nouns.txt");
const VERBS: &str = include_str!("../../../data/bow/verbs.txt");
const COLORS: &str = include_str!("../../../data/bow/colors.txt");

const PROBLEMS: &[&str] = &[
    include_str!("../../../data/problems/gcv1.toml"),
    include_str!("../../../data/problems/gcv2.toml"),
    include_str!("../../../data/problems/hamiltonian_cycle.toml"),
    include_str!("../../../data/problems/max_clique.toml"),
    include_str!("../../../data/problems/connected_dominating_set.toml"),
    include_str!("../../../data/problems/tsp.toml"),
    include_str!("../../../data/problems/hierarchical_clustering.toml"),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("problem file: {0}")]
    Format(String),
    #[error("problem {problem}: {message}")]
    Invalid { problem: String, message: String },
}

/// A named input fact set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub facts: String,
}

/// An end-to-end problem: NL statements, their CNL counterparts, a gold
/// ASP program written by hand and the bounds for comparing against it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub name: String,
    pub title: String,
    pub nl: Vec<String>,
    pub cnl: Vec<String>,
    pub gold: String,
    /// Input predicates, as `name/arity`.
    pub signature: Vec<String>,
    pub universe: Vec<String>,
    #[serde(default)]
    pub project: Option<Vec<String>>,
    #[serde(default)]
    pub optimal_only: bool,
    #[serde(default = "exhaustive")]
    pub sample: Sample,
    #[serde(default)]
    pub instances: Vec<Instance>,
}

fn exhaustive() -> Sample {
    Sample::Exhaustive
}

fn term(s: &str) -> Term {
    s.parse::<i64>()
        .map_or_else(|_| Term::constant(s), Term::Int)
}

fn signatures(problem: &str, list: &[String]) -> Result<Vec<Signature>, ProblemError> {
    list.iter()
        .map(|s| {
            s.parse().map_err(|e| ProblemError::Invalid {
                problem: problem.to_string(),
                message: format!("signature '{s}': {e}"),
            })
        })
        .collect()
}

impl Problem {
    pub fn from_toml(text: &str) -> Result<Self, ProblemError> {
        let p: Problem = toml::from_str(text).map_err(|e| ProblemError::Format(e.to_string()))?;
        if p.nl.len() != p.cnl.len() {
            return Err(p.invalid(format!(
                "{} NL sentences but {} CNL sentences",
                p.nl.len(),
                p.cnl.len()
            )));
        }
        p.gold_program()?;
        p.equivalence_setup()?;
        for i in &p.instances {
            p.facts(&i.name)?;
        }
        Ok(p)
    }

    fn invalid(&self, message: String) -> ProblemError {
        ProblemError::Invalid {
            problem: self.name.clone(),
            message,
        }
    }

    pub fn gold_program(&self) -> Result<AspProgram, ProblemError> {
        parse_program(&self.gold).map_err(|e| self.invalid(format!("gold program: {e}")))
    }

    /// The CNL sentences as one document.
    pub fn cnl_text(&self) -> String {
        self.cnl.join("\n")
    }

    pub fn universe_terms(&self) -> Vec<Term> {
        self.universe.iter().map(|s| term(s)).collect()
    }

    pub fn equivalence_setup(&self) -> Result<EquivalenceSetup, ProblemError> {
        Ok(EquivalenceSetup {
            signature: signatures(&self.name, &self.signature)?,
            universe: self.universe_terms(),
            options: EquivalenceOptions {
                sample: self.sample,
                project: self
                    .project
                    .as_ref()
                    .map(|p| signatures(&self.name, p))
                    .transpose()?,
                solver: SolverConfig {
                    optimal_only: self.optimal_only,
                    ..SolverConfig::default()
                },
                ..EquivalenceOptions::default()
            },
        })
    }

    /// Facts of the named instance.
    pub fn facts(&self, instance: &str) -> Result<Vec<Atom>, ProblemError> {
        let inst = self
            .instances
            .iter()
            .find(|i| i.name == instance)
            .ok_or_else(|| self.invalid(format!("no instance '{instance}'")))?;
        parse_facts(&inst.facts).map_err(|m| self.invalid(format!("instance '{instance}': {m}")))
    }
}

/// Parses a list of ground facts such as `node(1). edge(1,2).`.
pub fn parse_facts(text: &str) -> Result<Vec<Atom>, String> {
    let program = parse_program(text).map_err(|e| e.to_string())?;
    program
        .rules
        .into_iter()
        .map(|r| match r.head {
            Head::Disjunction(mut atoms)
                if atoms.len() == 1 && r.body.is_empty() && atoms[0].is_ground() =>
            {
                Ok(atoms.remove(0))
            }
            _ => Err("only ground facts are allowed".to_string()),
        })
        .collect()
}

pub fn problems() -> Vec<Problem> {
    PROBLEMS
        .iter()
        .map(|t| Problem::from_toml(t).expect("bundled problem is valid"))
        .collect()
}

pub fn problem(name: &str) -> Option<Problem> {
    problems().into_iter().find(|p| p.name == name)
}

pub fn templates() -> Vec<TemplatePair> {
    parse_templates(TEMPLATES).expect("bundled templates are valid")
}

pub fn bag_of_words() -> BagOfWords {
    BagOfWords::from_lists(PIDS, NOUNS, VERBS, COLORS)
}

pub fn targets() -> Targets {
    parse_targets(TARGETS).expect("bundled targets are valid")
}
