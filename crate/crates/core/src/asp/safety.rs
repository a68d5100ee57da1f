use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AspRule, BodyItem, Head, Term};

/// Where an unsafe variable occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VariablePosition {
    Head,
    NegativeBody,
    Comparison,
    ChoiceElement,
    WeakTerm,
}

impl fmt::Display for VariablePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariablePosition::Head => "head",
            VariablePosition::NegativeBody => "negative body literal",
            VariablePosition::Comparison => "comparison",
            VariablePosition::ChoiceElement => "choice element",
            VariablePosition::WeakTerm => "weak constraint terms",
        })
    }
}

/// A variable that has no occurrence in a positive body literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SafetyViolation {
    pub variable: String,
    pub position: VariablePosition,
}

impl fmt::Display for SafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "variable {} in {} is not bound by a positive body literal",
            self.variable, self.position
        )
    }
}

fn vars_of(t: &Term) -> Option<&str> {
    match t {
        Term::Var(v) => Some(v),
        _ => None,
    }
}

/// Reports every variable of the head, of negative literals, of comparisons
/// and of weak-constraint terms that lacks a positive body occurrence.
/// Variables local to a choice element may also be bound by the positive
/// literals of that element's condition.
pub fn validate_safety(rule: &AspRule) -> Result<(), Vec<SafetyViolation>> {
    let bound: BTreeSet<&str> = rule.positive_body().flat_map(|a| a.variables()).collect();
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    let mut report = |v: &str, position: VariablePosition, extra: &BTreeSet<&str>| {
        if !bound.contains(v) && !extra.contains(v) && seen.insert((v.to_string(), position)) {
            violations.push(SafetyViolation {
                variable: v.to_string(),
                position,
            });
        }
    };
    let none = BTreeSet::new();

    match &rule.head {
        Head::Disjunction(atoms) => {
            for v in atoms.iter().flat_map(|a| a.variables()) {
                report(v, VariablePosition::Head, &none);
            }
        }
        Head::Empty => {}
        Head::Choice(choice) => {
            for e in &choice.elements {
                let local: BTreeSet<&str> = e
                    .condition
                    .iter()
                    .filter(|l| !l.negated)
                    .flat_map(|l| l.atom.variables())
                    .collect();
                for v in e.atom.variables() {
                    report(v, VariablePosition::ChoiceElement, &local);
                }
                for l in e.condition.iter().filter(|l| l.negated) {
                    for v in l.atom.variables() {
                        report(v, VariablePosition::ChoiceElement, &local);
                    }
                }
            }
        }
    }
    for item in &rule.body {
        match item {
            BodyItem::Literal(l) if l.negated => {
                for v in l.atom.variables() {
                    report(v, VariablePosition::NegativeBody, &none);
                }
            }
            BodyItem::Literal(_) => {}
            BodyItem::Comparison(c) => {
                for v in [&c.left, &c.right].into_iter().filter_map(vars_of) {
                    report(v, VariablePosition::Comparison, &none);
                }
            }
        }
    }
    if let Some(w) = &rule.weak {
        for v in std::iter::once(&w.weight)
            .chain(&w.terms)
            .filter_map(vars_of)
        {
            report(v, VariablePosition::WeakTerm, &none);
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{parse_program, parse_rule};

    #[test]
    fn safe_rule() {
        assert!(validate_safety(&parse_rule("p(X) :- q(X).").unwrap()).is_ok());
    }

    #[test]
    fn unsafe_negation() {
        let v = validate_safety(&parse_rule("p(X) :- not q(X).").unwrap()).unwrap_err();
        assert_eq!(
            v,
            vec![
                SafetyViolation {
                    variable: "X".into(),
                    position: VariablePosition::Head
                },
                SafetyViolation {
                    variable: "X".into(),
                    position: VariablePosition::NegativeBody
                },
            ]
        );
    }

    #[test]
    fn both_coloring_encodings_are_safe() {
        let programs = [
            "col(X,red) | col(X,green) | col(X,yellow) :- node(X).\n:- col(X,C), col(Y,C), edge(X,Y).",
            "col(X,blue) | col(X,red) | col(X,green) :- node(X).\n:- C1 = C2, col(X,C1), col(Y,C2), edge(X,Y).",
        ];
        for text in programs {
            for rule in parse_program(text).unwrap().rules {
                assert!(validate_safety(&rule).is_ok(), "{rule}");
            }
        }
    }

    #[test]
    fn choice_condition_binds_local_variables() {
        let ok = parse_rule("1 <= {assign(X,C): color(C)} <= 1 :- node(X).").unwrap();
        assert!(validate_safety(&ok).is_ok());
        let bad = parse_rule("{assign(X,C)} :- node(X).").unwrap();
        assert_eq!(validate_safety(&bad).unwrap_err()[0].variable, "C");
    }

    #[test]
    fn comparisons_and_weak_terms_need_binding() {
        let bad = parse_rule(":- p(X), X < Y.").unwrap();
        assert_eq!(validate_safety(&bad).unwrap_err().len(), 1);
        let weak = parse_rule(":~ p(X). [W@1, X]").unwrap();
        let v = validate_safety(&weak).unwrap_err();
        assert_eq!(v[0].variable, "W");
        assert_eq!(v[0].position, VariablePosition::WeakTerm);
    }
}
