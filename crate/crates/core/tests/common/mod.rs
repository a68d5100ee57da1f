//! Strategies, independent oracles and property checks shared by the
//! property suite and the acceptance harness.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use cnlasp_core::asp::{
    parse_program, print_program, validate_safety, AspProgram, AspRule, Atom, BodyItem, Choice,
    ChoiceElement, CompareOp, Comparison, Head, Literal, Term, WeakAnnotation,
};
use cnlasp_core::bundled;
use cnlasp_core::cnl::{parse_cnl_with, PropositionKind, Resolution};
use cnlasp_core::codegen::compile;
use cnlasp_core::dataset::{
    audit_manifest, instantiate, rephrase_expand, DatasetManifest, DatasetRecord, IdentityProvider,
    Origin,
};
use cnlasp_core::metrics::{
    corpus_bleu, corpus_meteor, syntactic_accuracy, token_prf, EvalPair, MetricConfig,
};
use cnlasp_core::pipeline::{retrieval_translate, RetrievalIndex};
use cnlasp_core::solver::{answer_sets, ground, is_stable};

// ---------------------------------------------------------------------------
// Independent oracle: naive grounding and stable models by definition.
// ---------------------------------------------------------------------------

/// A ground rule in propositional form over atom indices.
#[derive(Debug, Clone)]
pub struct PRule {
    pub head: Vec<usize>,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    /// (atom, positive condition, negative condition), with bounds.
    pub choice: Option<(
        Vec<(usize, Vec<usize>, Vec<usize>)>,
        Option<i64>,
        Option<i64>,
    )>,
}

#[derive(Debug, Clone, Default)]
pub struct PProgram {
    pub atoms: Vec<Atom>,
    pub rules: Vec<PRule>,
}

fn subst(t: &Term, s: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    }
}

fn subst_atom(a: &Atom, s: &BTreeMap<String, Term>) -> Atom {
    Atom::new(
        a.predicate.clone(),
        a.args.iter().map(|t| subst(t, s)).collect(),
    )
}

/// Equality and disequality on ground terms; ordering comparisons put
/// integers before constants.
fn compare(c: &Comparison, s: &BTreeMap<String, Term>) -> bool {
    let (l, r) = (subst(&c.left, s), subst(&c.right, s));
    let key = |t: &Term| match t {
        Term::Int(i) => (0, *i, String::new()),
        Term::Const(c) => (1, 0, c.clone()),
        Term::Var(v) => (2, 0, v.clone()),
    };
    let (a, b) = (key(&l), key(&r));
    match c.op {
        CompareOp::Eq => a == b,
        CompareOp::Ne => a != b,
        CompareOp::Lt => a < b,
        CompareOp::Le => a <= b,
        CompareOp::Gt => a > b,
        CompareOp::Ge => a >= b,
    }
}

fn vars_of_rule(r: &AspRule) -> Vec<String> {
    let mut vs = BTreeSet::new();
    let mut add = |t: &Term| {
        if let Term::Var(v) = t {
            vs.insert(v.clone());
        }
    };
    let mut atoms: Vec<&Atom> = Vec::new();
    match &r.head {
        Head::Disjunction(h) => atoms.extend(h),
        Head::Empty => {}
        Head::Choice(c) => {
            for e in &c.elements {
                atoms.push(&e.atom);
                atoms.extend(e.condition.iter().map(|l| &l.atom));
            }
        }
    }
    for b in &r.body {
        match b {
            BodyItem::Literal(l) => atoms.push(&l.atom),
            BodyItem::Comparison(c) => {
                add(&c.left);
                add(&c.right);
            }
        }
    }
    for a in atoms {
        a.args.iter().for_each(&mut add);
    }
    vs.into_iter().collect()
}

/// Grounds by substituting every variable with every constant, then keeps
/// only rules whose positive body can still be derived. Weak constraints
/// are dropped.
pub fn naive_ground(program: &AspProgram, facts: &[Atom], constants: &[Term]) -> PProgram {
    let mut ground_rules: Vec<(
        Vec<Atom>,
        Vec<Atom>,
        Vec<Atom>,
        Option<(Vec<(Atom, Vec<Atom>, Vec<Atom>)>, Option<i64>, Option<i64>)>,
    )> = Vec::new();
    for f in facts {
        ground_rules.push((vec![f.clone()], vec![], vec![], None));
    }
    for r in program.rules.iter().filter(|r| r.weak.is_none()) {
        let vars = vars_of_rule(r);
        let total = constants.len().pow(vars.len() as u32);
        for mut code in 0..total {
            let mut s = BTreeMap::new();
            for v in &vars {
                s.insert(v.clone(), constants[code % constants.len()].clone());
                code /= constants.len();
            }
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut ok = true;
            for b in &r.body {
                match b {
                    BodyItem::Literal(l) if l.negated => neg.push(subst_atom(&l.atom, &s)),
                    BodyItem::Literal(l) => pos.push(subst_atom(&l.atom, &s)),
                    BodyItem::Comparison(c) => ok &= compare(c, &s),
                }
            }
            if !ok {
                continue;
            }
            let (head, choice) = match &r.head {
                Head::Disjunction(h) => (h.iter().map(|a| subst_atom(a, &s)).collect(), None),
                Head::Empty => (vec![], None),
                Head::Choice(c) => {
                    let elems: Vec<_> = c
                        .elements
                        .iter()
                        .map(|e| {
                            (
                                subst_atom(&e.atom, &s),
                                e.condition
                                    .iter()
                                    .filter(|l| !l.negated)
                                    .map(|l| subst_atom(&l.atom, &s))
                                    .collect(),
                                e.condition
                                    .iter()
                                    .filter(|l| l.negated)
                                    .map(|l| subst_atom(&l.atom, &s))
                                    .collect(),
                            )
                        })
                        .collect();
                    (
                        elems
                            .iter()
                            .map(|e: &(Atom, Vec<Atom>, Vec<Atom>)| e.0.clone())
                            .collect(),
                        Some((elems, c.lower, c.upper)),
                    )
                }
            };
            ground_rules.push((head, pos, neg, choice));
        }
    }
    // Derivable atoms, ignoring negation.
    let mut possible: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let before = possible.len();
        for (head, pos, _, choice) in &ground_rules {
            if pos.iter().all(|a| possible.contains(a)) {
                match choice {
                    Some((elems, _, _)) => {
                        for (a, cpos, _) in elems {
                            if cpos.iter().all(|c| possible.contains(c)) {
                                possible.insert(a.clone());
                            }
                        }
                    }
                    None => possible.extend(head.iter().cloned()),
                }
            }
        }
        if possible.len() == before {
            break;
        }
    }
    let atoms: Vec<Atom> = possible.iter().cloned().collect();
    let idx = |a: &Atom| atoms.iter().position(|b| b == a);
    let mut out = PProgram {
        atoms: atoms.clone(),
        rules: Vec::new(),
    };
    for (head, pos, neg, choice) in ground_rules {
        if !pos.iter().all(|a| possible.contains(a)) {
            continue;
        }
        let pos: Vec<usize> = pos.iter().map(|a| idx(a).unwrap()).collect();
        let neg: Vec<usize> = neg.iter().filter_map(idx).collect();
        let choice = choice.map(|(elems, lo, hi)| {
            (
                elems
                    .iter()
                    .filter(|(a, cpos, _)| {
                        possible.contains(a) && cpos.iter().all(|c| possible.contains(c))
                    })
                    .map(|(a, cpos, cneg)| {
                        (
                            idx(a).unwrap(),
                            cpos.iter().map(|c| idx(c).unwrap()).collect(),
                            cneg.iter().filter_map(idx).collect(),
                        )
                    })
                    .collect(),
                lo,
                hi,
            )
        });
        let head = head.iter().filter_map(idx).collect();
        out.rules.push(PRule {
            head,
            pos,
            neg,
            choice,
        });
    }
    out
}

fn holds(xs: &[usize], i: &[bool]) -> bool {
    xs.iter().all(|&a| i[a])
}

fn none(xs: &[usize], i: &[bool]) -> bool {
    xs.iter().all(|&a| !i[a])
}

fn is_model_of(p: &PProgram, i: &[bool]) -> bool {
    p.rules.iter().all(|r| {
        if !(holds(&r.pos, i) && none(&r.neg, i)) {
            return true;
        }
        match &r.choice {
            Some((elems, lo, hi)) => {
                let n = elems
                    .iter()
                    .filter(|(a, cp, cn)| i[*a] && holds(cp, i) && none(cn, i))
                    .count() as i64;
                lo.is_none_or(|l| n >= l) && hi.is_none_or(|h| n <= h)
            }
            None => r.head.iter().any(|&a| i[a]),
        }
    })
}

/// Reduct relative to `i`, as (head, positive body) pairs.
fn reduct_of(p: &PProgram, i: &[bool]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for r in &p.rules {
        if !none(&r.neg, i) {
            continue;
        }
        match &r.choice {
            Some((elems, _, _)) => {
                for (a, cp, cn) in elems {
                    if i[*a] && none(cn, i) {
                        let mut pos = r.pos.clone();
                        pos.extend(cp);
                        out.push((vec![*a], pos));
                    }
                }
            }
            None => out.push((r.head.clone(), r.pos.clone())),
        }
    }
    out
}

/// Stable by definition: a model whose reduct has no model strictly inside it.
pub fn stable_by_definition(p: &PProgram, i: &[bool]) -> bool {
    if !is_model_of(p, i) {
        return false;
    }
    let red = reduct_of(p, i);
    let inside: Vec<usize> = (0..i.len()).filter(|&a| i[a]).collect();
    let mut j = vec![false; i.len()];
    for mask in 0..(1u64 << inside.len()) - 1 {
        for (bit, &a) in inside.iter().enumerate() {
            j[a] = mask >> bit & 1 == 1;
        }
        if red
            .iter()
            .all(|(h, b)| !holds(b, &j) || h.iter().any(|&a| j[a]))
        {
            return false;
        }
    }
    true
}

/// Every interpretation over the derivable atoms, checked by definition.
pub fn sweep(p: &PProgram) -> Vec<BTreeSet<Atom>> {
    assert!(p.atoms.len() <= 20, "sweep over {} atoms", p.atoms.len());
    let mut out = Vec::new();
    let mut i = vec![false; p.atoms.len()];
    for mask in 0u64..(1 << p.atoms.len()) {
        for (a, v) in i.iter_mut().enumerate() {
            *v = mask >> a & 1 == 1;
        }
        if stable_by_definition(p, &i) {
            out.push(
                (0..i.len())
                    .filter(|&a| i[a])
                    .map(|a| p.atoms[a].clone())
                    .collect(),
            );
        }
    }
    out.sort();
    out
}

pub fn stable_set(p: &PProgram, set: &BTreeSet<Atom>) -> bool {
    if set.iter().any(|a| !p.atoms.contains(a)) {
        return false;
    }
    let i: Vec<bool> = p.atoms.iter().map(|a| set.contains(a)).collect();
    stable_by_definition(p, &i)
}

pub fn constants_of(program: &AspProgram, facts: &[Atom]) -> Vec<Term> {
    let mut cs: BTreeSet<(u8, i64, String)> = BTreeSet::new();
    let mut add = |t: &Term| match t {
        Term::Int(i) => {
            cs.insert((0, *i, String::new()));
        }
        Term::Const(c) => {
            cs.insert((1, 0, c.clone()));
        }
        Term::Var(_) => {}
    };
    for t in program
        .constants()
        .iter()
        .chain(facts.iter().flat_map(|a| a.args.iter()))
    {
        add(t);
    }
    cs.into_iter()
        .map(|(k, i, s)| if k == 0 { Term::Int(i) } else { Term::Const(s) })
        .collect()
}

// ---------------------------------------------------------------------------
// Strategies.
// ---------------------------------------------------------------------------

const CONSTS: &[&str] = &["a", "b", "red", "node1", "x_y"];
const PREDS: &[&str] = &["p", "q", "col", "edge", "r2"];
const VARS: &[&str] = &["X", "Y", "Z", "C1", "V_2"];

pub fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(CONSTS).prop_map(Term::constant),
        (-3i64..40).prop_map(Term::Int),
        prop::sample::select(VARS).prop_map(Term::var),
    ]
}

pub fn atom() -> impl Strategy<Value = Atom> {
    (
        prop::sample::select(PREDS),
        prop::collection::vec(term(), 0..3),
    )
        .prop_map(|(p, args)| Atom::new(p, args))
}

fn literal() -> impl Strategy<Value = Literal> {
    (atom(), any::<bool>()).prop_map(|(atom, negated)| Literal { atom, negated })
}

fn body_item() -> impl Strategy<Value = BodyItem> {
    let op = prop::sample::select(vec![
        CompareOp::Eq,
        CompareOp::Ne,
        CompareOp::Lt,
        CompareOp::Le,
        CompareOp::Gt,
        CompareOp::Ge,
    ]);
    prop_oneof![
        3 => literal().prop_map(BodyItem::Literal),
        1 => (term(), op, term()).prop_map(|(l, o, r)| BodyItem::Comparison(Comparison::new(l, o, r))),
    ]
}

fn choice() -> impl Strategy<Value = Choice> {
    (
        prop::collection::vec(
            (atom(), prop::collection::vec(literal(), 0..2))
                .prop_map(|(atom, condition)| ChoiceElement { atom, condition }),
            1..4,
        ),
        prop::option::of(0i64..3),
        prop::option::of(1i64..4),
    )
        .prop_map(|(elements, lower, upper)| Choice {
            elements,
            lower,
            upper,
        })
}

/// Syntactically valid rules of every shape, safe or not.
pub fn rule() -> impl Strategy<Value = AspRule> {
    let body = prop::collection::vec(body_item(), 0..4);
    let nonempty_body = || prop::collection::vec(body_item(), 1..4);
    prop_oneof![
        (prop::collection::vec(atom(), 1..4), body).prop_map(|(h, b)| AspRule::disjunctive(h, b)),
        nonempty_body().prop_map(AspRule::constraint),
        (choice(), prop::collection::vec(body_item(), 0..3))
            .prop_map(|(c, b)| AspRule::choice(c, b)),
        (
            nonempty_body(),
            term(),
            0i64..4,
            prop::collection::vec(term(), 0..3)
        )
            .prop_map(|(b, weight, level, terms)| {
                AspRule::weak(
                    b,
                    WeakAnnotation {
                        weight,
                        level,
                        terms,
                    },
                )
            }),
    ]
}

pub fn program() -> impl Strategy<Value = AspProgram> {
    prop::collection::vec(rule(), 0..6).prop_map(AspProgram::new)
}

/// Small propositional programs over `p0..p5`.
pub fn ground_program(with_choice: bool) -> impl Strategy<Value = AspProgram> {
    let a = (0usize..6).prop_map(|i| Atom::new(format!("p{i}"), vec![]));
    let lit = (a.clone(), any::<bool>())
        .prop_map(|(atom, negated)| BodyItem::Literal(Literal { atom, negated }));
    let disj = (
        prop::collection::vec(a.clone(), 1..3),
        prop::collection::vec(lit.clone(), 0..3),
    )
        .prop_map(|(h, b)| AspRule::disjunctive(h, b));
    let cons = prop::collection::vec(lit.clone(), 1..3).prop_map(AspRule::constraint);
    let ch = (
        prop::collection::vec(a, 1..4),
        prop::option::of(0i64..3),
        prop::option::of(0i64..3),
        prop::collection::vec(lit, 0..2),
    )
        .prop_map(|(atoms, lower, upper, body)| {
            let mut seen = BTreeSet::new();
            let elements = atoms
                .into_iter()
                .filter(|a| seen.insert(a.clone()))
                .map(|atom| ChoiceElement {
                    atom,
                    condition: vec![],
                })
                .collect();
            AspRule::choice(
                Choice {
                    elements,
                    lower,
                    upper,
                },
                body,
            )
        });
    let rule = if with_choice {
        prop_oneof![4 => disj, 1 => cons, 2 => ch].boxed()
    } else {
        prop_oneof![4 => disj, 1 => cons].boxed()
    };
    prop::collection::vec(rule, 0..7).prop_map(AspProgram::new)
}

const WORDS: &[&str] = &[
    "node", "edge", "is", "a", "the", "color", "x", "with", "id", "of",
];

pub fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 1..9).prop_map(|w| w.join(" "))
}

pub fn pairs() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::vec((sentence(), sentence()), 1..8)
}

pub fn records() -> impl Strategy<Value = Vec<DatasetRecord>> {
    prop::collection::vec((0usize..7, prop::bool::ANY), 0..40).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (k, source))| DatasetRecord {
                id: i as u64 + 1,
                nl: format!("n{i}"),
                cnl: format!("c{i}"),
                category: PropositionKind::ALL[k],
                origin: if source {
                    Origin::Source
                } else {
                    Origin::Generated
                },
                parent_id: None,
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Property checks.
// ---------------------------------------------------------------------------

/// print ∘ parse ∘ print is the identity on printed text, and parsing
/// recovers the AST.
pub fn asp_round_trip(p: &AspProgram) -> Result<(), TestCaseError> {
    let text = print_program(p);
    let back = parse_program(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, p, "{}", text);
    prop_assert_eq!(print_program(&back), text);
    Ok(())
}

/// An NL sentence instantiated from a template translates back to the
/// record's CNL, and the CNL compiles to safe rules that survive printing.
pub fn cnl_round_trip_and_safety(template: usize, seed: u64) -> Result<(), TestCaseError> {
    let templates = bundled::templates();
    let t = &templates[template % templates.len()];
    let rec = instantiate(t, &bundled::bag_of_words(), seed)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let index = RetrievalIndex::new(&templates);
    let translated = retrieval_translate(&rec.nl, &index);
    prop_assert_eq!(
        translated.as_deref(),
        Some(rec.cnl.as_str()),
        "nl: {}",
        rec.nl
    );
    let doc = parse_cnl_with(&rec.cnl, None, Resolution::Lenient)
        .map_err(|e| TestCaseError::fail(format!("{e}: {}", rec.cnl)))?;
    let program = compile(&doc).map_err(|e| TestCaseError::fail(format!("{e}: {}", rec.cnl)))?;
    for r in &program.rules {
        prop_assert!(
            validate_safety(r).is_ok(),
            "unsafe rule from {}: {:?}",
            rec.cnl,
            r
        );
    }
    asp_round_trip(&program)
}

fn answer_families(p: &AspProgram) -> Result<Vec<BTreeSet<Atom>>, TestCaseError> {
    let g = ground(p, &[]).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let sets = answer_sets(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok(sets.into_iter().map(|s| s.atoms).collect())
}

/// The enumerator agrees with the definition-level sweep, and every set it
/// returns passes both stability checks.
pub fn enumerator_matches_sweep(p: &AspProgram) -> Result<(), TestCaseError> {
    let mut got = answer_families(p)?;
    got.sort();
    let naive = naive_ground(p, &[], &[]);
    prop_assert_eq!(&got, &sweep(&naive), "{}", print_program(p));
    let g = ground(p, &[]).unwrap();
    for s in &got {
        prop_assert!(is_stable(&g, s));
        prop_assert!(stable_set(&naive, s));
    }
    Ok(())
}

/// Without choice rules no answer set contains another.
pub fn anti_chain(p: &AspProgram) -> Result<(), TestCaseError> {
    let sets = answer_families(p)?;
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            prop_assert!(
                !a.is_subset(b) && !b.is_subset(a),
                "{:?} vs {:?}\n{}",
                a,
                b,
                print_program(p)
            );
        }
    }
    Ok(())
}

/// Reordering rules changes neither the answer sets nor their costs.
pub fn rule_order_invariance(p: &AspProgram, perm: &[usize]) -> Result<(), TestCaseError> {
    let mut q = p.clone();
    if !q.rules.is_empty() {
        let n = q.rules.len();
        let order: Vec<usize> = perm.iter().map(|i| i % n).chain(0..n).collect();
        let mut seen = BTreeSet::new();
        q.rules = order
            .into_iter()
            .filter(|i| seen.insert(*i))
            .map(|i| p.rules[i].clone())
            .collect();
    }
    let a = answer_sets(&ground(p, &[]).unwrap()).unwrap();
    let b = answer_sets(&ground(&q, &[]).unwrap()).unwrap();
    prop_assert_eq!(a, b);
    Ok(())
}

/// Manifests built from records always audit clean, after identity
/// expansion too; changing any single count breaks the audit.
pub fn manifest_arithmetic(
    records: &[DatasetRecord],
    k: usize,
    cell: usize,
    delta: i64,
) -> Result<(), TestCaseError> {
    let m = DatasetManifest::from_records(records, None);
    prop_assert!(audit_manifest(&m).is_ok());
    let expanded = rephrase_expand(records, &mut IdentityProvider, k)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let m = DatasetManifest::from_records(&expanded, Some(k));
    prop_assert!(audit_manifest(&m).is_ok());
    for c in m.categories.values().chain(std::iter::once(&m.grand)) {
        prop_assert_eq!(c.total, (k + 1) * (c.source + c.generated));
    }
    let mut bad = m.clone();
    let rows: Vec<PropositionKind> = bad.categories.keys().copied().collect();
    let row = cell / 4 % (rows.len() + 1);
    let counts = if row == rows.len() {
        &mut bad.grand
    } else {
        bad.categories.get_mut(&rows[row]).unwrap()
    };
    let field = match cell % 4 {
        0 => &mut counts.source,
        1 => &mut counts.generated,
        2 => &mut counts.rephrased,
        _ => &mut counts.total,
    };
    let delta = if delta == 0 { 1 } else { delta };
    if (*field as i64) + delta < 0 {
        *field += delta.unsigned_abs() as usize;
    } else {
        *field = (*field as i64 + delta) as usize;
    }
    prop_assert!(
        audit_manifest(&bad).is_err(),
        "perturbed cell {} not detected",
        cell
    );
    Ok(())
}

/// Corpus metrics do not depend on the order of the pairs.
pub fn metric_permutation_invariance(
    pairs: &[(String, String)],
    perm: &[usize],
) -> Result<(), TestCaseError> {
    let a: Vec<EvalPair> = pairs
        .iter()
        .map(|(h, r)| EvalPair::new(h.as_str(), r.as_str()))
        .collect();
    let mut b = a.clone();
    for (i, j) in perm.iter().enumerate() {
        let n = b.len();
        b.swap(i % n, j % n);
    }
    let config = MetricConfig::default();
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12;
    let (ba, bb) = (
        corpus_bleu(&a, &config).unwrap(),
        corpus_bleu(&b, &config).unwrap(),
    );
    prop_assert!(
        ba.iter().zip(&bb).all(|(x, y)| close(*x, *y)),
        "{:?} vs {:?}",
        ba,
        bb
    );
    prop_assert!(close(
        corpus_meteor(&a, &config).unwrap(),
        corpus_meteor(&b, &config).unwrap()
    ));
    let (pa, pb) = (token_prf(&a).unwrap(), token_prf(&b).unwrap());
    prop_assert!(close(pa.f1, pb.f1) && close(pa.exact_match_accuracy, pb.exact_match_accuracy));
    let ha: Vec<&str> = a.iter().map(|p| p.hypothesis.as_str()).collect();
    let hb: Vec<&str> = b.iter().map(|p| p.hypothesis.as_str()).collect();
    prop_assert_eq!(
        syntactic_accuracy(&ha, None).unwrap().accepted,
        syntactic_accuracy(&hb, None).unwrap().accepted
    );
    Ok(())
}
