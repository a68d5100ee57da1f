//! ASP program representation for the subset produced by the CNL compiler:
//! disjunctive rules, strong and weak constraints, choice rules with
//! optional bounds and comparison built-ins.

mod parse;
mod print;
mod safety;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use parse::{parse_program, parse_rule, AspSyntaxError};
pub use print::{print_program, print_rule};
pub use safety::{validate_safety, SafetyViolation, VariablePosition};

/// A term: constant symbol, integer or variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Const(String),
    Int(i64),
    Var(String),
}

impl Term {
    pub fn constant(s: impl Into<String>) -> Self {
        Term::Const(s.into())
    }

    pub fn var(s: impl Into<String>) -> Self {
        Term::Var(s.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        !self.is_var()
    }

    /// Total order on ground terms: integers before symbols, symbols
    /// compared lexicographically. Returns `None` if either side is a
    /// variable.
    pub fn ground_cmp(&self, other: &Term) -> Option<Ordering> {
        match (self, other) {
            (Term::Int(a), Term::Int(b)) => Some(a.cmp(b)),
            (Term::Int(_), Term::Const(_)) => Some(Ordering::Less),
            (Term::Const(_), Term::Int(_)) => Some(Ordering::Greater),
            (Term::Const(a), Term::Const(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(s) | Term::Var(s) => f.write_str(s),
            Term::Int(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Int(_) => 0,
                Term::Const(_) => 1,
                Term::Var(_) => 2,
            }
        }
        match (self, other) {
            (Term::Int(a), Term::Int(b)) => a.cmp(b),
            (Term::Const(a), Term::Const(b)) | (Term::Var(a), Term::Var(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom under optional default negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    /// The operator that holds exactly when `self` does not.
    pub fn complement(self) -> Self {
        match self {
            CompareOp::Eq => CompareOp::Ne,
            CompareOp::Ne => CompareOp::Eq,
            CompareOp::Lt => CompareOp::Ge,
            CompareOp::Le => CompareOp::Gt,
            CompareOp::Gt => CompareOp::Le,
            CompareOp::Ge => CompareOp::Lt,
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Ge => ord != Ordering::Less,
        }
    }
}

/// Built-in comparison between two terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Comparison {
    pub left: Term,
    pub op: CompareOp,
    pub right: Term,
}

impl Comparison {
    pub fn new(left: Term, op: CompareOp, right: Term) -> Self {
        Comparison { left, op, right }
    }

    /// Evaluates a ground comparison; `None` while variables remain.
    pub fn evaluate(&self) -> Option<bool> {
        self.left.ground_cmp(&self.right).map(|o| self.op.holds(o))
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.op.symbol(), self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BodyItem {
    Literal(Literal),
    Comparison(Comparison),
}

impl BodyItem {
    pub fn pos(atom: Atom) -> Self {
        BodyItem::Literal(Literal::pos(atom))
    }

    pub fn neg(atom: Atom) -> Self {
        BodyItem::Literal(Literal::neg(atom))
    }
}

impl fmt::Display for BodyItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyItem::Literal(l) => l.fmt(f),
            BodyItem::Comparison(c) => c.fmt(f),
        }
    }
}

/// One element `atom : condition` of a choice head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChoiceElement {
    pub atom: Atom,
    pub condition: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Choice {
    pub elements: Vec<ChoiceElement>,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Head {
    /// `a1 | ... | an` with n >= 1.
    Disjunction(Vec<Atom>),
    /// Constraint (strong or weak).
    Empty,
    Choice(Choice),
}

/// `[weight@level, terms]` annotation of a weak constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeakAnnotation {
    pub weight: Term,
    pub level: i64,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AspRule {
    pub head: Head,
    pub body: Vec<BodyItem>,
    pub weak: Option<WeakAnnotation>,
}

impl AspRule {
    pub fn fact(atom: Atom) -> Self {
        AspRule {
            head: Head::Disjunction(vec![atom]),
            body: Vec::new(),
            weak: None,
        }
    }

    pub fn normal(head: Atom, body: Vec<BodyItem>) -> Self {
        AspRule {
            head: Head::Disjunction(vec![head]),
            body,
            weak: None,
        }
    }

    pub fn disjunctive(head: Vec<Atom>, body: Vec<BodyItem>) -> Self {
        AspRule {
            head: Head::Disjunction(head),
            body,
            weak: None,
        }
    }

    pub fn constraint(body: Vec<BodyItem>) -> Self {
        AspRule {
            head: Head::Empty,
            body,
            weak: None,
        }
    }

    pub fn weak(body: Vec<BodyItem>, annotation: WeakAnnotation) -> Self {
        AspRule {
            head: Head::Empty,
            body,
            weak: Some(annotation),
        }
    }

    pub fn choice(choice: Choice, body: Vec<BodyItem>) -> Self {
        AspRule {
            head: Head::Choice(choice),
            body,
            weak: None,
        }
    }

    pub fn is_fact(&self) -> bool {
        matches!(&self.head, Head::Disjunction(h) if h.len() == 1) && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        matches!(self.head, Head::Empty) && self.weak.is_none()
    }

    pub fn is_weak(&self) -> bool {
        self.weak.is_some()
    }

    pub fn positive_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|b| match b {
            BodyItem::Literal(l) if !l.negated => Some(&l.atom),
            _ => None,
        })
    }

    pub fn is_ground(&self) -> bool {
        let head_ground = match &self.head {
            Head::Disjunction(atoms) => atoms.iter().all(Atom::is_ground),
            Head::Empty => true,
            Head::Choice(c) => c
                .elements
                .iter()
                .all(|e| e.atom.is_ground() && e.condition.iter().all(|l| l.atom.is_ground())),
        };
        let body_ground = self.body.iter().all(|b| match b {
            BodyItem::Literal(l) => l.atom.is_ground(),
            BodyItem::Comparison(c) => c.left.is_ground() && c.right.is_ground(),
        });
        let weak_ground = self
            .weak
            .as_ref()
            .is_none_or(|w| w.weight.is_ground() && w.terms.iter().all(Term::is_ground));
        head_ground && body_ground && weak_ground
    }
}

impl fmt::Display for AspRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_rule(self))
    }
}

/// An ordered list of rules.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AspProgram {
    pub rules: Vec<AspRule>,
}

impl AspProgram {
    pub fn new(rules: Vec<AspRule>) -> Self {
        AspProgram { rules }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// Appends the rules of `other` after the rules of `self`.
    pub fn extend(&mut self, other: AspProgram) {
        self.rules.extend(other.rules);
    }

    /// Constant terms (symbols and integers) mentioned anywhere in the program.
    pub fn constants(&self) -> Vec<Term> {
        let mut out = std::collections::BTreeSet::new();
        let mut add = |t: &Term| {
            if t.is_ground() {
                out.insert(t.clone());
            }
        };
        for rule in &self.rules {
            match &rule.head {
                Head::Disjunction(atoms) => atoms.iter().flat_map(|a| &a.args).for_each(&mut add),
                Head::Empty => {}
                Head::Choice(c) => {
                    for e in &c.elements {
                        e.atom.args.iter().for_each(&mut add);
                        e.condition
                            .iter()
                            .flat_map(|l| &l.atom.args)
                            .for_each(&mut add);
                    }
                }
            }
            for b in &rule.body {
                match b {
                    BodyItem::Literal(l) => l.atom.args.iter().for_each(&mut add),
                    BodyItem::Comparison(c) => {
                        add(&c.left);
                        add(&c.right);
                    }
                }
            }
            if let Some(w) = &rule.weak {
                add(&w.weight);
                w.terms.iter().for_each(&mut add);
            }
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program(self))
    }
}

impl std::str::FromStr for AspProgram {
    type Err = AspSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}
