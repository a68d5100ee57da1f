use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ground::{ground_with_limit, GroundProgram};
use super::stable::answer_sets_with;
use super::{Signature, SolveError, SolverConfig};
use crate::asp::{AspProgram, Atom, Term};

/// Which fact sets to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sample {
    /// Every subset of the candidate fact atoms.
    Exhaustive,
    /// `n` subsets drawn with each atom included with probability 1/2.
    Random { n: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceOptions {
    pub sample: Sample,
    /// Compare answer sets restricted to these predicates; all atoms when
    /// absent.
    pub project: Option<Vec<Signature>>,
    pub solver: SolverConfig,
    /// Largest number of candidate fact atoms accepted in exhaustive mode.
    pub max_fact_atoms: usize,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions {
            sample: Sample::Exhaustive,
            project: None,
            solver: SolverConfig::default(),
            max_fact_atoms: 20,
        }
    }
}

/// A fact set on which the two programs disagree, with both families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub facts: Vec<Atom>,
    pub left: Vec<BTreeSet<Atom>>,
    pub right: Vec<BTreeSet<Atom>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Number of fact sets examined.
    pub tested: usize,
    pub counterexample: Option<Counterexample>,
}

/// Tests uniform equivalence of `p1` and `p2` over fact sets built from
/// `signature` and `universe`, with default limits and no projection.
pub fn check_uniform_equivalence_bounded(
    p1: &AspProgram,
    p2: &AspProgram,
    signature: &[Signature],
    universe: &[Term],
    sample: Sample,
) -> Result<EquivalenceVerdict, SolveError> {
    let options = EquivalenceOptions {
        sample,
        ..EquivalenceOptions::default()
    };
    check_uniform_equivalence_with(p1, p2, signature, universe, &options)
}

/// Tests uniform equivalence with explicit options. Fact sets are checked
/// in parallel; the reported counterexample is always the first one in
/// enumeration order.
pub fn check_uniform_equivalence_with(
    p1: &AspProgram,
    p2: &AspProgram,
    signature: &[Signature],
    universe: &[Term],
    options: &EquivalenceOptions,
) -> Result<EquivalenceVerdict, SolveError> {
    let candidates = fact_atoms(signature, universe);
    let mut full: BTreeSet<Term> = universe.iter().filter(|t| t.is_ground()).cloned().collect();
    full.extend(p1.constants());
    full.extend(p2.constants());
    let full: Vec<Term> = full.into_iter().collect();
    let g1 = ground_with_limit(p1, &full, options.solver.grounding_limit)?;
    let g2 = ground_with_limit(p2, &full, options.solver.grounding_limit)?;

    let fact_sets: Vec<Vec<Atom>> = match options.sample {
        Sample::Exhaustive => {
            if candidates.len() > options.max_fact_atoms {
                return Err(SolveError::FactSpaceTooLarge {
                    atoms: candidates.len(),
                    bound: options.max_fact_atoms,
                });
            }
            (0..1u64 << candidates.len())
                .map(|mask| select(&candidates, |i| mask & (1 << i) != 0))
                .collect()
        }
        Sample::Random { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let picks: Vec<bool> = candidates.iter().map(|_| rng.gen_bool(0.5)).collect();
                    select(&candidates, |i| picks[i])
                })
                .collect()
        }
    };

    let project = options.project.as_deref();
    let outcome = fact_sets.par_iter().find_map_first(|facts| {
        let run = |g: &GroundProgram| -> Result<Vec<BTreeSet<Atom>>, SolveError> {
            family(g, facts, project, &options.solver)
        };
        match (run(&g1), run(&g2)) {
            (Ok(left), Ok(right)) if left == right => None,
            (Ok(left), Ok(right)) => Some(Ok(Counterexample {
                facts: facts.clone(),
                left,
                right,
            })),
            (Err(e), _) | (_, Err(e)) => Some(Err(SolveError::AtFacts {
                facts: facts.clone(),
                source: Box::new(e),
            })),
        }
    });
    match outcome {
        None => Ok(EquivalenceVerdict {
            equivalent: true,
            tested: fact_sets.len(),
            counterexample: None,
        }),
        Some(Ok(cx)) => Ok(EquivalenceVerdict {
            equivalent: false,
            tested: fact_sets.len(),
            counterexample: Some(cx),
        }),
        Some(Err(e)) => Err(e),
    }
}

fn select(candidates: &[Atom], keep: impl Fn(usize) -> bool) -> Vec<Atom> {
    candidates
        .iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(_, a)| a.clone())
        .collect()
}

fn family(
    g: &GroundProgram,
    facts: &[Atom],
    project: Option<&[Signature]>,
    config: &SolverConfig,
) -> Result<Vec<BTreeSet<Atom>>, SolveError> {
    let sets = answer_sets_with(&g.with_facts(facts), config)?;
    let family: BTreeSet<BTreeSet<Atom>> = sets
        .into_iter()
        .map(|s| match project {
            Some(sig) => s.project(sig),
            None => s.atoms,
        })
        .collect();
    Ok(family.into_iter().collect())
}

/// Every ground atom over `signature` with arguments from `universe`, in
/// signature order and then lexicographic argument order.
fn fact_atoms(signature: &[Signature], universe: &[Term]) -> Vec<Atom> {
    let universe: Vec<Term> = universe
        .iter()
        .filter(|t| t.is_ground())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    for sig in signature {
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..sig.arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    universe.iter().map(move |c| {
                        let mut next = t.clone();
                        next.push(c.clone());
                        next
                    })
                })
                .collect();
        }
        out.extend(
            tuples
                .into_iter()
                .map(|args| Atom::new(sig.predicate.clone(), args)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::parse_program;

    #[test]
    fn fact_atoms_cover_the_signature() {
        let atoms = fact_atoms(
            &[Signature::new("node", 1), Signature::new("edge", 2)],
            &[Term::Int(1), Term::Int(2)],
        );
        assert_eq!(atoms.len(), 2 + 4);
        assert_eq!(atoms[2].to_string(), "edge(1,1)");
    }

    #[test]
    fn reflexive() {
        let p = parse_program("q(X) :- p(X), not r(X).").unwrap();
        let v = check_uniform_equivalence_bounded(
            &p,
            &p,
            &[Signature::new("p", 1), Signature::new("r", 1)],
            &[Term::Int(1), Term::Int(2)],
            Sample::Exhaustive,
        )
        .unwrap();
        assert!(v.equivalent);
        assert_eq!(v.tested, 16);
    }

    #[test]
    fn strongly_different_but_uniformly_equivalent_on_facts() {
        // Both derive q from p; the second via an auxiliary step.
        let a = parse_program("q(X) :- p(X).").unwrap();
        let b = parse_program("s(X) :- p(X).\nq(X) :- s(X).").unwrap();
        let sig = [Signature::new("p", 1)];
        let universe = [Term::Int(1), Term::Int(2)];
        let plain =
            check_uniform_equivalence_bounded(&a, &b, &sig, &universe, Sample::Exhaustive).unwrap();
        assert!(!plain.equivalent);
        let projected = check_uniform_equivalence_with(
            &a,
            &b,
            &sig,
            &universe,
            &EquivalenceOptions {
                project: Some(vec![Signature::new("q", 1)]),
                ..EquivalenceOptions::default()
            },
        )
        .unwrap();
        assert!(projected.equivalent);
    }

    #[test]
    fn random_sampling_is_seeded() {
        let a = parse_program("q(X) :- p(X).").unwrap();
        let b = parse_program("q(X) :- p(X), not r(X).").unwrap();
        let sig = [Signature::new("p", 1), Signature::new("r", 1)];
        let universe = [Term::Int(1), Term::Int(2), Term::Int(3)];
        let run = || {
            check_uniform_equivalence_bounded(
                &a,
                &b,
                &sig,
                &universe,
                Sample::Random { n: 40, seed: 7 },
            )
            .unwrap()
        };
        let first = run();
        assert!(!first.equivalent);
        assert_eq!(first, run());
    }

    #[test]
    fn exhaustive_space_is_bounded() {
        let p = AspProgram::default();
        let err = check_uniform_equivalence_bounded(
            &p,
            &p,
            &[Signature::new("e", 2)],
            &(1..=5).map(Term::Int).collect::<Vec<_>>(),
            Sample::Exhaustive,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            SolveError::FactSpaceTooLarge { atoms: 25, .. }
        ));
    }
}
