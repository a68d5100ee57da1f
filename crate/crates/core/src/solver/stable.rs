use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ground::GroundProgram;
use super::{AnswerSet, SolveError, SolverConfig};
use crate::asp::{print_rule, Atom, BodyItem, Head, Term};

#[derive(Debug, Clone)]
struct Elem {
    atom: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

#[derive(Debug, Clone)]
enum IHead {
    Disj(Vec<usize>),
    Empty,
    Choice {
        elems: Vec<Elem>,
        lower: Option<i64>,
        upper: Option<i64>,
    },
}

#[derive(Debug, Clone)]
struct Weak {
    weight: i64,
    level: i64,
    terms: Vec<Term>,
}

#[derive(Debug, Clone)]
struct IRule {
    head: IHead,
    pos: Vec<usize>,
    neg: Vec<usize>,
    weak: Option<Weak>,
}

/// Integer-indexed form of a ground program.
struct Indexed {
    atoms: Vec<Atom>,
    rules: Vec<IRule>,
}

impl Indexed {
    fn build(g: &GroundProgram) -> Result<Self, SolveError> {
        let mut atoms: Vec<Atom> = g.atoms.clone();
        let mut index: HashMap<Atom, usize> = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let mut id = |a: &Atom| -> usize {
            if let Some(&i) = index.get(a) {
                return i;
            }
            atoms.push(a.clone());
            index.insert(a.clone(), atoms.len() - 1);
            atoms.len() - 1
        };
        let mut rules = Vec::with_capacity(g.rules.len());
        'rules: for r in &g.rules {
            if !r.is_ground() {
                return Err(SolveError::NonGround {
                    rule: print_rule(r),
                });
            }
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for b in &r.body {
                match b {
                    BodyItem::Literal(l) if l.negated => neg.push(id(&l.atom)),
                    BodyItem::Literal(l) => pos.push(id(&l.atom)),
                    BodyItem::Comparison(c) => {
                        if c.evaluate() != Some(true) {
                            continue 'rules;
                        }
                    }
                }
            }
            let head = match &r.head {
                Head::Disjunction(atoms) => IHead::Disj(atoms.iter().map(&mut id).collect()),
                Head::Empty => IHead::Empty,
                Head::Choice(c) => IHead::Choice {
                    elems: c
                        .elements
                        .iter()
                        .map(|e| Elem {
                            atom: id(&e.atom),
                            pos: e
                                .condition
                                .iter()
                                .filter(|l| !l.negated)
                                .map(|l| id(&l.atom))
                                .collect(),
                            neg: e
                                .condition
                                .iter()
                                .filter(|l| l.negated)
                                .map(|l| id(&l.atom))
                                .collect(),
                        })
                        .collect(),
                    lower: c.lower,
                    upper: c.upper,
                },
            };
            let weak = match &r.weak {
                None => None,
                Some(w) => match w.weight {
                    Term::Int(weight) => Some(Weak {
                        weight,
                        level: w.level,
                        terms: w.terms.clone(),
                    }),
                    _ => {
                        return Err(SolveError::NonIntegerWeight {
                            rule: print_rule(r),
                        })
                    }
                },
            };
            rules.push(IRule {
                head,
                pos,
                neg,
                weak,
            });
        }
        Ok(Indexed { atoms, rules })
    }
}

fn all_in(xs: &[usize], set: &[bool]) -> bool {
    xs.iter().all(|&x| set[x])
}

fn none_in(xs: &[usize], set: &[bool]) -> bool {
    xs.iter().all(|&x| !set[x])
}

/// Result of the pre-enumeration analysis: atoms that may be true in some
/// answer set, atoms true in all of them, and the rules that can still fire.
struct Simplified {
    possible: Vec<bool>,
    certain: Vec<bool>,
    rules: Vec<IRule>,
}

fn simplify(ix: &Indexed) -> Simplified {
    let n = ix.atoms.len();
    let mut rules = ix.rules.clone();
    loop {
        // Over-approximation: derive heads ignoring negation.
        let mut possible = vec![false; n];
        let mut changed = true;
        while changed {
            changed = false;
            for r in &rules {
                if r.weak.is_some() || !all_in(&r.pos, &possible) {
                    continue;
                }
                let heads: Vec<usize> = match &r.head {
                    IHead::Disj(h) => h.clone(),
                    IHead::Empty => Vec::new(),
                    IHead::Choice { elems, .. } => elems
                        .iter()
                        .filter(|e| all_in(&e.pos, &possible))
                        .map(|e| e.atom)
                        .collect(),
                };
                for a in heads {
                    if !possible[a] {
                        possible[a] = true;
                        changed = true;
                    }
                }
            }
        }
        // Under-approximation: definite single-head rules whose negative
        // literals are trivially true.
        let mut certain = vec![false; n];
        changed = true;
        while changed {
            changed = false;
            for r in &rules {
                if let IHead::Disj(h) = &r.head {
                    if h.len() == 1
                        && !certain[h[0]]
                        && r.weak.is_none()
                        && none_in(&r.neg, &possible)
                        && all_in(&r.pos, &certain)
                    {
                        certain[h[0]] = true;
                        changed = true;
                    }
                }
            }
        }
        let before = rules.len();
        rules.retain(|r| all_in(&r.pos, &possible) && none_in(&r.neg, &certain));
        for r in &mut rules {
            r.neg.retain(|&a| possible[a]);
            if let IHead::Choice { elems, .. } = &mut r.head {
                elems.retain(|e| all_in(&e.pos, &possible) && none_in(&e.neg, &certain));
                for e in elems {
                    e.neg.retain(|&a| possible[a]);
                }
            }
        }
        if rules.len() == before {
            return Simplified {
                possible,
                certain,
                rules,
            };
        }
    }
}

fn body_holds(r: &IRule, truth: &[bool]) -> bool {
    all_in(&r.pos, truth) && none_in(&r.neg, truth)
}

fn elem_holds(e: &Elem, truth: &[bool]) -> bool {
    all_in(&e.pos, truth) && none_in(&e.neg, truth)
}

fn is_model(rules: &[IRule], truth: &[bool]) -> bool {
    rules.iter().all(|r| {
        if r.weak.is_some() || !body_holds(r, truth) {
            return true;
        }
        match &r.head {
            IHead::Disj(h) => h.iter().any(|&a| truth[a]),
            IHead::Empty => false,
            IHead::Choice {
                elems,
                lower,
                upper,
            } => {
                let count = elems
                    .iter()
                    .filter(|e| truth[e.atom] && elem_holds(e, truth))
                    .count() as i64;
                lower.is_none_or(|l| count >= l) && upper.is_none_or(|u| count <= u)
            }
        }
    })
}

/// A positive rule of the reduct: `head :- pos`, empty head for constraints.
struct Reduct {
    head: Vec<usize>,
    pos: Vec<usize>,
}

fn reduct(rules: &[IRule], truth: &[bool]) -> Vec<Reduct> {
    let mut out = Vec::new();
    for r in rules {
        if r.weak.is_some() || !none_in(&r.neg, truth) {
            continue;
        }
        match &r.head {
            IHead::Disj(h) => out.push(Reduct {
                head: h.clone(),
                pos: r.pos.clone(),
            }),
            IHead::Empty => out.push(Reduct {
                head: Vec::new(),
                pos: r.pos.clone(),
            }),
            IHead::Choice { elems, .. } => {
                for e in elems {
                    if truth[e.atom] && none_in(&e.neg, truth) {
                        let mut pos = r.pos.clone();
                        pos.extend(&e.pos);
                        out.push(Reduct {
                            head: vec![e.atom],
                            pos,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Least model of the single-head part of a reduct.
fn least_model(reduct: &[Reduct], n: usize) -> Vec<bool> {
    let mut m = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for r in reduct {
            if r.head.len() == 1 && !m[r.head[0]] && all_in(&r.pos, &m) {
                m[r.head[0]] = true;
                changed = true;
            }
        }
    }
    m
}

fn reduct_satisfied(reduct: &[Reduct], truth: &[bool]) -> bool {
    reduct
        .iter()
        .all(|r| !all_in(&r.pos, truth) || r.head.iter().any(|&a| truth[a]))
}

/// True when no proper subset of `truth` satisfies the reduct. Atoms forced
/// by single-head reduct rules belong to every model, so only the rest of
/// `truth` is varied.
fn minimal(reduct: &[Reduct], truth: &[bool], disjunctive: bool) -> bool {
    let forced = least_model(reduct, truth.len());
    if !disjunctive {
        return forced == truth;
    }
    let free: Vec<usize> = (0..truth.len())
        .filter(|&a| truth[a] && !forced[a])
        .collect();
    if free.len() >= 63 {
        // Never reached under the enumeration bound.
        return false;
    }
    let mut j = forced;
    for mask in 0..(1u64 << free.len()) - 1 {
        for (bit, &a) in free.iter().enumerate() {
            j[a] = mask & (1 << bit) != 0;
        }
        if reduct_satisfied(reduct, &j) {
            return false;
        }
    }
    true
}

fn cost(rules: &[IRule], truth: &[bool]) -> BTreeMap<i64, i64> {
    let mut tuples = BTreeSet::new();
    for r in rules {
        if let Some(w) = &r.weak {
            if body_holds(r, truth) {
                tuples.insert((w.level, w.weight, w.terms.clone()));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (level, weight, _) in tuples {
        *out.entry(level).or_insert(0) += weight;
    }
    out
}

const UNKNOWN: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

fn rule_heads(r: &IRule) -> Vec<usize> {
    match &r.head {
        IHead::Disj(h) => h.clone(),
        IHead::Empty => Vec::new(),
        IHead::Choice { elems, .. } => elems.iter().map(|e| e.atom).collect(),
    }
}

/// Depth-first assignment of the open atoms under a partial interpretation.
struct Search<'a> {
    rules: &'a [IRule],
    occurs: Vec<Vec<usize>>,
    supports: Vec<Vec<usize>>,
    open: Vec<usize>,
    value: Vec<u8>,
}

impl<'a> Search<'a> {
    fn new(s: &'a Simplified, open: Vec<usize>) -> Self {
        let n = s.possible.len();
        let mut occurs = vec![Vec::new(); n];
        let mut supports = vec![Vec::new(); n];
        for (i, r) in s.rules.iter().enumerate() {
            if r.weak.is_some() {
                continue;
            }
            let mut atoms: Vec<usize> = r.pos.iter().chain(&r.neg).copied().collect();
            atoms.extend(rule_heads(r));
            if let IHead::Choice { elems, .. } = &r.head {
                for e in elems {
                    atoms.extend(e.pos.iter().chain(&e.neg));
                }
            }
            atoms.sort_unstable();
            atoms.dedup();
            for a in atoms {
                occurs[a].push(i);
            }
            for h in rule_heads(r) {
                supports[h].push(i);
            }
        }
        let value = (0..n)
            .map(|a| match (s.certain[a], s.possible[a]) {
                (true, _) => TRUE,
                (false, false) => FALSE,
                _ => UNKNOWN,
            })
            .collect();
        Search {
            rules: &s.rules,
            occurs,
            supports,
            open,
            value,
        }
    }

    fn sure(&self, pos: &[usize], neg: &[usize]) -> bool {
        pos.iter().all(|&a| self.value[a] == TRUE) && neg.iter().all(|&a| self.value[a] == FALSE)
    }

    fn possible(&self, pos: &[usize], neg: &[usize]) -> bool {
        pos.iter().all(|&a| self.value[a] != FALSE) && neg.iter().all(|&a| self.value[a] != TRUE)
    }

    fn violated(&self, r: &IRule) -> bool {
        if r.weak.is_some() || !self.sure(&r.pos, &r.neg) {
            return false;
        }
        match &r.head {
            IHead::Disj(h) => h.iter().all(|&a| self.value[a] == FALSE),
            IHead::Empty => true,
            IHead::Choice {
                elems,
                lower,
                upper,
            } => {
                let sure = elems
                    .iter()
                    .filter(|e| self.value[e.atom] == TRUE && self.sure(&e.pos, &e.neg))
                    .count() as i64;
                let possible = elems
                    .iter()
                    .filter(|e| self.value[e.atom] != FALSE && self.possible(&e.pos, &e.neg))
                    .count() as i64;
                upper.is_some_and(|u| sure > u) || lower.is_some_and(|l| possible < l)
            }
        }
    }

    fn supported(&self, a: usize) -> bool {
        self.supports[a].iter().any(|&i| {
            let r = &self.rules[i];
            self.possible(&r.pos, &r.neg)
                && match &r.head {
                    IHead::Choice { elems, .. } => elems
                        .iter()
                        .any(|e| e.atom == a && self.possible(&e.pos, &e.neg)),
                    _ => true,
                }
        })
    }

    /// False when the latest assignment to `a` already rules out every
    /// completion.
    fn consistent(&self, a: usize) -> bool {
        if self.value[a] == TRUE && !self.supported(a) {
            return false;
        }
        self.occurs[a].iter().all(|&i| {
            let r = &self.rules[i];
            !self.violated(r)
                && rule_heads(r)
                    .iter()
                    .all(|&h| h == a || self.value[h] != TRUE || self.supported(h))
        })
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[bool])) {
        if depth == 0 && self.rules.iter().any(|r| self.violated(r)) {
            return;
        }
        let Some(&a) = self.open.get(depth) else {
            let truth: Vec<bool> = self.value.iter().map(|&v| v == TRUE).collect();
            if is_model(self.rules, &truth) {
                visit(&truth);
            }
            return;
        };
        for v in [FALSE, TRUE] {
            self.value[a] = v;
            if self.consistent(a) {
                self.run(depth + 1, visit);
            }
        }
        self.value[a] = UNKNOWN;
    }
}

/// Enumerates the answer sets of a ground program under default limits.
pub fn answer_sets(g: &GroundProgram) -> Result<Vec<AnswerSet>, SolveError> {
    answer_sets_with(g, &SolverConfig::default())
}

/// Enumerates the answer sets of a ground program, sorted by atoms.
///
/// Atoms that cannot be derived are fixed false and atoms derived by
/// definite rules are fixed true; the remaining atoms are enumerated
/// exhaustively and must not exceed `config.atom_bound`. Branches where a
/// rule is already violated or a true atom has lost every supporting rule
/// are cut; each complete interpretation is still checked in full.
pub fn answer_sets_with(
    g: &GroundProgram,
    config: &SolverConfig,
) -> Result<Vec<AnswerSet>, SolveError> {
    let ix = Indexed::build(g)?;
    let s = simplify(&ix);
    let open: Vec<usize> = (0..ix.atoms.len())
        .filter(|&a| s.possible[a] && !s.certain[a])
        .collect();
    if open.len() > config.atom_bound {
        return Err(SolveError::UniverseTooLarge {
            atoms: open.len(),
            bound: config.atom_bound,
        });
    }
    let disjunctive = s
        .rules
        .iter()
        .any(|r| matches!(&r.head, IHead::Disj(h) if h.len() > 1));
    let mut search = Search::new(&s, open);
    let mut found = Vec::new();
    search.run(0, &mut |truth| {
        let red = reduct(&s.rules, truth);
        if minimal(&red, truth, disjunctive) {
            found.push(AnswerSet {
                atoms: (0..truth.len())
                    .filter(|&a| truth[a])
                    .map(|a| ix.atoms[a].clone())
                    .collect(),
                cost: cost(&s.rules, truth),
            });
        }
    });
    if config.optimal_only {
        found = optimal(found);
    }
    found.sort();
    Ok(found)
}

/// Cost vectors compared from the highest level down.
fn cost_key(c: &BTreeMap<i64, i64>, levels: &BTreeSet<i64>) -> Vec<i64> {
    levels
        .iter()
        .rev()
        .map(|l| c.get(l).copied().unwrap_or(0))
        .collect()
}

fn optimal(sets: Vec<AnswerSet>) -> Vec<AnswerSet> {
    let levels: BTreeSet<i64> = sets.iter().flat_map(|s| s.cost.keys().copied()).collect();
    let Some(best) = sets.iter().map(|s| cost_key(&s.cost, &levels)).min() else {
        return sets;
    };
    sets.into_iter()
        .filter(|s| cost_key(&s.cost, &levels) == best)
        .collect()
}

/// Checks by definition whether `candidate` is a stable model of `g`:
/// it must satisfy every rule and be a minimal model of the reduct.
pub fn is_stable(g: &GroundProgram, candidate: &BTreeSet<Atom>) -> bool {
    let Ok(ix) = Indexed::build(g) else {
        return false;
    };
    if candidate.iter().any(|a| !ix.atoms.iter().any(|b| b == a)) {
        return false;
    }
    let truth: Vec<bool> = ix.atoms.iter().map(|a| candidate.contains(a)).collect();
    if !is_model(&ix.rules, &truth) {
        return false;
    }
    let red = reduct(&ix.rules, &truth);
    minimal(&red, &truth, true)
}
