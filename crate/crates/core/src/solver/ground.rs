use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{SolveError, DEFAULT_GROUNDING_LIMIT};
use crate::asp::{
    AspProgram, AspRule, Atom, BodyItem, Choice, ChoiceElement, Comparison, Head, Literal, Term,
    WeakAnnotation,
};

/// A variable-free program and the atoms occurring in it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundProgram {
    pub rules: Vec<AspRule>,
    /// Sorted, duplicate-free.
    pub atoms: Vec<Atom>,
}

impl GroundProgram {
    pub fn from_rules(rules: Vec<AspRule>) -> Self {
        let mut atoms = BTreeSet::new();
        for r in &rules {
            rule_atoms(r, &mut |a| {
                atoms.insert(a.clone());
            });
        }
        GroundProgram {
            rules,
            atoms: atoms.into_iter().collect(),
        }
    }

    /// The same program with `facts` appended as fact rules.
    pub fn with_facts(&self, facts: &[Atom]) -> GroundProgram {
        let mut rules = self.rules.clone();
        rules.extend(facts.iter().cloned().map(AspRule::fact));
        let mut atoms: BTreeSet<Atom> = self.atoms.iter().cloned().collect();
        atoms.extend(facts.iter().cloned());
        GroundProgram {
            rules,
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn to_program(&self) -> AspProgram {
        AspProgram::new(self.rules.clone())
    }
}

pub(super) fn rule_atoms(r: &AspRule, f: &mut impl FnMut(&Atom)) {
    match &r.head {
        Head::Disjunction(atoms) => atoms.iter().for_each(&mut *f),
        Head::Empty => {}
        Head::Choice(c) => {
            for e in &c.elements {
                f(&e.atom);
                e.condition.iter().for_each(|l| f(&l.atom));
            }
        }
    }
    for b in &r.body {
        if let BodyItem::Literal(l) = b {
            f(&l.atom);
        }
    }
}

/// Instantiates every rule with all substitutions of its variables by
/// `universe` constants, using the default instantiation limit.
pub fn ground(program: &AspProgram, universe: &[Term]) -> Result<GroundProgram, SolveError> {
    ground_with_limit(program, universe, DEFAULT_GROUNDING_LIMIT)
}

/// Like [`ground`] with an explicit limit on the total number of
/// substitutions tried. Comparisons are evaluated away; a rule with a false
/// comparison is dropped.
pub fn ground_with_limit(
    program: &AspProgram,
    universe: &[Term],
    limit: u64,
) -> Result<GroundProgram, SolveError> {
    let universe: Vec<Term> = universe
        .iter()
        .filter(|t| t.is_ground())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = universe.len() as u128;
    let mut total: u128 = 0;
    let mut shapes = Vec::with_capacity(program.rules.len());
    for (i, rule) in program.rules.iter().enumerate() {
        let shape = RuleShape::of(rule);
        let per = 1 + shape
            .locals
            .iter()
            .map(|l| pow(n, l.len()))
            .fold(0u128, u128::saturating_add);
        total = total.saturating_add(pow(n, shape.globals.len()).saturating_mul(per));
        if total > limit as u128 {
            return Err(SolveError::GroundingBlowup {
                rule: i,
                count: total,
                limit,
            });
        }
        shapes.push(shape);
    }

    let mut rules = Vec::new();
    for (rule, shape) in program.rules.iter().zip(&shapes) {
        for_each_assignment(&universe, shape.globals.len(), |vals| {
            let sub = Subst {
                vars: &shape.globals,
                vals,
            };
            if let Some(r) = instantiate(rule, shape, &sub, &universe) {
                rules.push(r);
            }
        });
    }
    Ok(GroundProgram::from_rules(rules))
}

fn pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

struct RuleShape {
    globals: Vec<String>,
    /// Per choice element, the variables local to it.
    locals: Vec<Vec<String>>,
}

impl RuleShape {
    fn of(rule: &AspRule) -> Self {
        let mut globals = Vec::new();
        let push = |v: &str, out: &mut Vec<String>| {
            if !out.iter().any(|x| x == v) {
                out.push(v.to_string());
            }
        };
        for b in &rule.body {
            match b {
                BodyItem::Literal(l) => l.atom.variables().for_each(|v| push(v, &mut globals)),
                BodyItem::Comparison(c) => {
                    for t in [&c.left, &c.right] {
                        if let Term::Var(v) = t {
                            push(v, &mut globals);
                        }
                    }
                }
            }
        }
        if let Head::Disjunction(atoms) = &rule.head {
            for a in atoms {
                a.variables().for_each(|v| push(v, &mut globals));
            }
        }
        if let Some(w) = &rule.weak {
            for t in std::iter::once(&w.weight).chain(&w.terms) {
                if let Term::Var(v) = t {
                    push(v, &mut globals);
                }
            }
        }
        let mut locals = Vec::new();
        if let Head::Choice(c) = &rule.head {
            for e in &c.elements {
                let mut local = Vec::new();
                let vars = e
                    .atom
                    .variables()
                    .chain(e.condition.iter().flat_map(|l| l.atom.variables()));
                for v in vars {
                    if !globals.iter().any(|g| g == v) {
                        push(v, &mut local);
                    }
                }
                locals.push(local);
            }
        }
        RuleShape { globals, locals }
    }
}

fn for_each_assignment<'u>(universe: &'u [Term], k: usize, mut f: impl FnMut(&[&'u Term])) {
    if k == 0 {
        f(&[]);
        return;
    }
    if universe.is_empty() {
        return;
    }
    let mut idx = vec![0usize; k];
    let mut vals: Vec<&Term> = vec![&universe[0]; k];
    loop {
        f(&vals);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < universe.len() {
                vals[pos] = &universe[idx[pos]];
                break;
            }
            idx[pos] = 0;
            vals[pos] = &universe[0];
        }
    }
}

struct Subst<'a> {
    vars: &'a [String],
    vals: &'a [&'a Term],
}

impl Subst<'_> {
    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self
                .vars
                .iter()
                .position(|x| x == v)
                .map_or_else(|| t.clone(), |i| self.vals[i].clone()),
            _ => t.clone(),
        }
    }

    fn atom(&self, a: &Atom) -> Atom {
        Atom::new(
            a.predicate.clone(),
            a.args.iter().map(|t| self.term(t)).collect(),
        )
    }

    fn literal(&self, l: &Literal) -> Literal {
        Literal {
            atom: self.atom(&l.atom),
            negated: l.negated,
        }
    }
}

fn instantiate(
    rule: &AspRule,
    shape: &RuleShape,
    sub: &Subst<'_>,
    universe: &[Term],
) -> Option<AspRule> {
    let mut body = Vec::with_capacity(rule.body.len());
    for b in &rule.body {
        match b {
            BodyItem::Literal(l) => body.push(BodyItem::Literal(sub.literal(l))),
            BodyItem::Comparison(c) => {
                let g = Comparison::new(sub.term(&c.left), c.op, sub.term(&c.right));
                if !g.evaluate()? {
                    return None;
                }
            }
        }
    }
    let head = match &rule.head {
        Head::Disjunction(atoms) => Head::Disjunction(atoms.iter().map(|a| sub.atom(a)).collect()),
        Head::Empty => Head::Empty,
        Head::Choice(c) => {
            let mut elements = Vec::new();
            for (e, local) in c.elements.iter().zip(&shape.locals) {
                for_each_assignment(universe, local.len(), |lvals| {
                    let mut vars: Vec<String> = sub.vars.to_vec();
                    vars.extend(local.iter().cloned());
                    let mut vals: Vec<&Term> = sub.vals.to_vec();
                    vals.extend_from_slice(lvals);
                    let inner = Subst {
                        vars: &vars,
                        vals: &vals,
                    };
                    elements.push(ChoiceElement {
                        atom: inner.atom(&e.atom),
                        condition: e.condition.iter().map(|l| inner.literal(l)).collect(),
                    });
                });
            }
            Head::Choice(Choice {
                elements,
                lower: c.lower,
                upper: c.upper,
            })
        }
    };
    let weak = rule.weak.as_ref().map(|w| WeakAnnotation {
        weight: sub.term(&w.weight),
        level: w.level,
        terms: w.terms.iter().map(|t| sub.term(t)).collect(),
    });
    Some(AspRule { head, body, weak })
}
