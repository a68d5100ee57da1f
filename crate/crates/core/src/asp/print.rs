use std::fmt::Write;

use super::{AspProgram, AspRule, BodyItem, ChoiceElement, Head};

/// Prints a program one rule per line, each line terminated by a newline.
pub fn print_program(program: &AspProgram) -> String {
    let mut out = String::new();
    for rule in &program.rules {
        out.push_str(&print_rule(rule));
        out.push('\n');
    }
    out
}

pub fn print_rule(rule: &AspRule) -> String {
    let mut out = String::new();
    let body = join_body(&rule.body);
    if let Some(weak) = &rule.weak {
        out.push_str(":~");
        if !body.is_empty() {
            out.push(' ');
            out.push_str(&body);
        }
        let _ = write!(out, ". [{}@{}", weak.weight, weak.level);
        for t in &weak.terms {
            let _ = write!(out, ", {t}");
        }
        out.push(']');
        return out;
    }
    match &rule.head {
        Head::Disjunction(atoms) => {
            let head: Vec<String> = atoms.iter().map(ToString::to_string).collect();
            out.push_str(&head.join(" | "));
        }
        Head::Empty => {}
        Head::Choice(choice) => {
            if let Some(lo) = choice.lower {
                let _ = write!(out, "{lo} <= ");
            }
            out.push('{');
            let elems: Vec<String> = choice.elements.iter().map(print_element).collect();
            out.push_str(&elems.join("; "));
            out.push('}');
            if let Some(hi) = choice.upper {
                let _ = write!(out, " <= {hi}");
            }
        }
    }
    if !body.is_empty() {
        if out.is_empty() {
            out.push_str(":- ");
        } else {
            out.push_str(" :- ");
        }
        out.push_str(&body);
    } else if matches!(rule.head, Head::Empty) {
        out.push_str(":-");
    }
    out.push('.');
    out
}

fn print_element(e: &ChoiceElement) -> String {
    if e.condition.is_empty() {
        e.atom.to_string()
    } else {
        let cond: Vec<String> = e.condition.iter().map(ToString::to_string).collect();
        format!("{}: {}", e.atom, cond.join(", "))
    }
}

fn join_body(body: &[BodyItem]) -> String {
    let items: Vec<String> = body.iter().map(ToString::to_string).collect();
    items.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{Atom, Choice, CompareOp, Comparison, Literal, Term, WeakAnnotation};

    fn col(x: &str, c: &str) -> Atom {
        Atom::new("col", vec![Term::var(x), Term::constant(c)])
    }

    #[test]
    fn disjunctive_coloring_rule() {
        let rule = AspRule::disjunctive(
            vec![col("X", "red"), col("X", "green"), col("X", "yellow")],
            vec![BodyItem::pos(Atom::new("node", vec![Term::var("X")]))],
        );
        assert_eq!(
            print_rule(&rule),
            "col(X,red) | col(X,green) | col(X,yellow) :- node(X)."
        );
    }

    #[test]
    fn empty_program_prints_nothing() {
        assert_eq!(print_program(&AspProgram::default()), "");
    }

    #[test]
    fn fact() {
        let rule = AspRule::fact(Atom::new("node", vec![Term::Int(1)]));
        assert_eq!(print_rule(&rule), "node(1).");
    }

    #[test]
    fn constraint_with_comparison() {
        let rule = AspRule::constraint(vec![
            BodyItem::Comparison(Comparison::new(
                Term::var("C1"),
                CompareOp::Eq,
                Term::var("C2"),
            )),
            BodyItem::pos(Atom::new("col", vec![Term::var("X"), Term::var("C1")])),
        ]);
        assert_eq!(print_rule(&rule), ":- C1 = C2, col(X,C1).");
    }

    #[test]
    fn weak_and_choice() {
        let weak = AspRule::weak(
            vec![BodyItem::pos(Atom::new("in", vec![Term::var("X")]))],
            WeakAnnotation {
                weight: Term::Int(1),
                level: 2,
                terms: vec![Term::var("X")],
            },
        );
        assert_eq!(print_rule(&weak), ":~ in(X). [1@2, X]");

        let choice = AspRule::choice(
            Choice {
                elements: vec![ChoiceElement {
                    atom: Atom::new("assign", vec![Term::var("X"), Term::var("C")]),
                    condition: vec![Literal::pos(Atom::new("color", vec![Term::var("C")]))],
                }],
                lower: Some(1),
                upper: Some(1),
            },
            vec![BodyItem::pos(Atom::new("node", vec![Term::var("X")]))],
        );
        assert_eq!(
            print_rule(&choice),
            "1 <= {assign(X,C): color(C)} <= 1 :- node(X)."
        );
    }
}
