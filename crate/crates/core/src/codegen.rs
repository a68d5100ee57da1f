//! CNL to ASP compilation.
//!
//! Each entity becomes a predicate of the same name whose arguments follow
//! the entity's attribute order (key attributes, then value attributes).
//! Attributes a reference leaves unbound get a fresh variable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asp::{
    validate_safety, AspProgram, AspRule, Atom, BodyItem, Choice, ChoiceElement, Comparison,
    Literal, Term, WeakAnnotation,
};
use crate::cnl::{
    CnlComparison, CnlDocument, CnlProposition, Condition, EntityRef, SymbolTable, Value,
};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CompileError {
    #[error("proposition {proposition}: variable {var} is not bound by a positive condition")]
    UnboundVariable { var: String, proposition: usize },
    #[error("proposition {proposition}: unknown entity '{entity}'")]
    UnknownEntity { entity: String, proposition: usize },
    #[error("proposition {proposition}: entity '{entity}' has no attribute '{attribute}'")]
    ArityMismatch {
        entity: String,
        attribute: String,
        proposition: usize,
    },
}

impl CompileError {
    pub fn proposition(&self) -> usize {
        match self {
            CompileError::UnboundVariable { proposition, .. }
            | CompileError::UnknownEntity { proposition, .. }
            | CompileError::ArityMismatch { proposition, .. } => *proposition,
        }
    }
}

/// Compiles a resolved document. The result is the in-order concatenation
/// of [`compile_sentence`] over its propositions.
pub fn compile(doc: &CnlDocument) -> Result<AspProgram, CompileError> {
    let mut program = AspProgram::default();
    for (i, p) in doc.propositions.iter().enumerate() {
        program.rules.extend(compile_indexed(p, &doc.symbols, i)?);
    }
    Ok(program)
}

/// Compiles one proposition. Entity definitions yield no rules.
pub fn compile_sentence(
    p: &CnlProposition,
    symbols: &SymbolTable,
) -> Result<Vec<AspRule>, CompileError> {
    compile_indexed(p, symbols, 0)
}

fn compile_indexed(
    p: &CnlProposition,
    symbols: &SymbolTable,
    index: usize,
) -> Result<Vec<AspRule>, CompileError> {
    let mut cx = Context::new(p, symbols, index);
    let rules = match p {
        CnlProposition::Definition(_) => Vec::new(),
        CnlProposition::When { head, conditions }
        | CnlProposition::Whenever { head, conditions } => {
            let head = cx.atom(head)?;
            let body = cx.body(&[], conditions)?;
            vec![AspRule::normal(head, body)]
        }
        CnlProposition::Prohibition {
            assertions,
            conditions,
        } => vec![AspRule::constraint(cx.body(assertions, conditions)?)],
        CnlProposition::Requirement {
            assertions,
            conditions,
        } => {
            let mut rules = Vec::new();
            for a in assertions {
                let mut comparisons = Vec::new();
                let mut literals = Vec::new();
                cx.split(conditions, &mut comparisons, &mut literals)?;
                match a {
                    Condition::Compare(c) => {
                        let mut c = cx.comparison(c);
                        c.op = c.op.complement();
                        comparisons.insert(0, BodyItem::Comparison(c));
                    }
                    Condition::Exists { entity, negated } => {
                        let atom = cx.atom(entity)?;
                        literals.push(BodyItem::Literal(Literal {
                            atom,
                            negated: !negated,
                        }));
                    }
                }
                comparisons.extend(literals);
                rules.push(AspRule::constraint(comparisons));
            }
            rules
        }
        CnlProposition::Preference {
            weight,
            priority,
            assertions,
            conditions,
        } => {
            let body = cx.body(assertions, conditions)?;
            let mut seen = BTreeSet::new();
            let mut terms = Vec::new();
            for item in &body {
                for v in body_vars(item) {
                    if seen.insert(v.to_string()) {
                        terms.push(Term::Var(v.to_string()));
                    }
                }
            }
            vec![AspRule::weak(
                body,
                WeakAnnotation {
                    weight: value_term(weight),
                    level: *priority,
                    terms,
                },
            )]
        }
        CnlProposition::Choice {
            conditions,
            quantity,
            alternatives,
        } => {
            let body = cx.body(&[], conditions)?;
            let plain = quantity.is_none()
                && alternatives.len() > 1
                && alternatives.iter().all(|a| a.such_that.is_empty());
            if plain {
                let head = alternatives
                    .iter()
                    .map(|a| cx.atom(&a.target))
                    .collect::<Result<Vec<_>, _>>()?;
                vec![AspRule::disjunctive(head, body)]
            } else {
                let mut elements = Vec::new();
                for alt in alternatives {
                    let atom = cx.atom(&alt.target)?;
                    let condition = alt
                        .such_that
                        .iter()
                        .map(|r| cx.atom(r).map(Literal::pos))
                        .collect::<Result<Vec<_>, _>>()?;
                    elements.push(ChoiceElement { atom, condition });
                }
                let (lower, upper) = quantity.map_or((None, None), |q| q.bounds());
                vec![AspRule::choice(
                    Choice {
                        elements,
                        lower,
                        upper,
                    },
                    body,
                )]
            }
        }
    };
    for rule in &rules {
        if let Err(violations) = validate_safety(rule) {
            return Err(CompileError::UnboundVariable {
                var: violations[0].variable.clone(),
                proposition: index,
            });
        }
    }
    Ok(rules)
}

fn body_vars(item: &BodyItem) -> Vec<&str> {
    match item {
        BodyItem::Literal(l) => l.atom.variables().collect(),
        BodyItem::Comparison(c) => [&c.left, &c.right]
            .into_iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v.as_str()),
                _ => None,
            })
            .collect(),
    }
}

fn value_term(v: &Value) -> Term {
    match v {
        Value::Var(s) => Term::Var(s.clone()),
        Value::Const(s) => Term::Const(s.clone()),
        Value::Int(n) => Term::Int(*n),
    }
}

struct Context<'a> {
    symbols: &'a SymbolTable,
    index: usize,
    used: BTreeSet<String>,
    fresh: usize,
}

impl<'a> Context<'a> {
    fn new(p: &CnlProposition, symbols: &'a SymbolTable, index: usize) -> Self {
        Context {
            symbols,
            index,
            used: sentence_vars(p),
            fresh: 0,
        }
    }

    fn fresh_var(&mut self) -> Term {
        loop {
            self.fresh += 1;
            let name = format!("V{}", self.fresh);
            if self.used.insert(name.clone()) {
                return Term::Var(name);
            }
        }
    }

    fn atom(&mut self, r: &EntityRef) -> Result<Atom, CompileError> {
        let def = self
            .symbols
            .get(&r.entity)
            .ok_or_else(|| CompileError::UnknownEntity {
                entity: r.entity.clone(),
                proposition: self.index,
            })?;
        let mut args: Vec<Option<Term>> = vec![None; def.arity()];
        for b in &r.bindings {
            let pos = def
                .position(&b.attribute)
                .ok_or_else(|| CompileError::ArityMismatch {
                    entity: r.entity.clone(),
                    attribute: b.attribute.clone(),
                    proposition: self.index,
                })?;
            args[pos] = Some(value_term(&b.value));
        }
        let args = args
            .into_iter()
            .map(|a| a.unwrap_or_else(|| self.fresh_var()))
            .collect();
        Ok(Atom::new(r.entity.clone(), args))
    }

    fn comparison(&self, c: &CnlComparison) -> Comparison {
        Comparison::new(value_term(&c.left), c.op, value_term(&c.right))
    }

    fn split(
        &mut self,
        conds: &[Condition],
        comparisons: &mut Vec<BodyItem>,
        literals: &mut Vec<BodyItem>,
    ) -> Result<(), CompileError> {
        for c in conds {
            match c {
                Condition::Compare(c) => comparisons.push(BodyItem::Comparison(self.comparison(c))),
                Condition::Exists { entity, negated } => {
                    let atom = self.atom(entity)?;
                    literals.push(BodyItem::Literal(Literal {
                        atom,
                        negated: *negated,
                    }));
                }
            }
        }
        Ok(())
    }

    /// Comparisons first, then literals, each group in sentence order.
    fn body(
        &mut self,
        assertions: &[Condition],
        conditions: &[Condition],
    ) -> Result<Vec<BodyItem>, CompileError> {
        let mut comparisons = Vec::new();
        let mut literals = Vec::new();
        self.split(assertions, &mut comparisons, &mut literals)?;
        self.split(conditions, &mut comparisons, &mut literals)?;
        comparisons.extend(literals);
        Ok(comparisons)
    }
}

fn sentence_vars(p: &CnlProposition) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let add_value = |v: &Value, out: &mut BTreeSet<String>| {
        if let Value::Var(s) = v {
            out.insert(s.clone());
        }
    };
    let add_ref = |r: &EntityRef, out: &mut BTreeSet<String>| {
        for b in &r.bindings {
            if let Value::Var(s) = &b.value {
                out.insert(s.clone());
            }
        }
    };
    let add_conds = |cs: &[Condition], out: &mut BTreeSet<String>| {
        for c in cs {
            match c {
                Condition::Exists { entity, .. } => add_ref(entity, out),
                Condition::Compare(c) => {
                    add_value(&c.left, out);
                    add_value(&c.right, out);
                }
            }
        }
    };
    match p {
        CnlProposition::Definition(_) => {}
        CnlProposition::When { head, conditions }
        | CnlProposition::Whenever { head, conditions } => {
            add_ref(head, &mut out);
            add_conds(conditions, &mut out);
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
            add_conds(assertions, &mut out);
            add_conds(conditions, &mut out);
        }
        CnlProposition::Choice {
            conditions,
            alternatives,
            ..
        } => {
            add_conds(conditions, &mut out);
            for a in alternatives {
                add_ref(&a.target, &mut out);
                a.such_that.iter().for_each(|r| add_ref(r, &mut out));
            }
        }
    }
    if let CnlProposition::Preference {
        weight: Value::Var(w),
        ..
    } = p
    {
        out.insert(w.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{parse_program, print_program, print_rule};
    use crate::cnl::{parse_cnl, parse_cnl_with, Resolution};

    const COLORING: &str = "A node is identified by an id.
A edge is identified by a firstnode, and by a secondnode.
A color is identified by an id.
Whenever there is a node with id X then we can have a col with node X, and with color equal to blue, or a col with node X, and with color equal to red, or a col with node X, and with color equal to green.
It is prohibited that C1 is equal to C2, whenever there is a col with node X, and with color C1, whenever there is a col with node Y, and with color C2, whenever there is an edge with firstnode X, and with secondnode Y.
";

    #[test]
    fn coloring_golden() {
        let program = compile(&parse_cnl(COLORING).unwrap()).unwrap();
        assert_eq!(
            print_program(&program),
            "col(X,blue) | col(X,red) | col(X,green) :- node(X).\n:- C1 = C2, col(X,C1), col(Y,C2), edge(X,Y).\n"
        );
    }

    #[test]
    fn definitions_only_compile_to_nothing() {
        let doc =
            parse_cnl("A node is identified by an id. A color is identified by an id.").unwrap();
        assert!(compile(&doc).unwrap().is_empty());
    }

    #[test]
    fn compile_is_concatenation_of_sentences() {
        let doc = parse_cnl(COLORING).unwrap();
        let whole = compile(&doc).unwrap();
        let parts: Vec<AspRule> = doc
            .propositions
            .iter()
            .flat_map(|p| compile_sentence(p, &doc.symbols).unwrap())
            .collect();
        assert_eq!(whole.rules, parts);
    }

    #[test]
    fn bounded_choice() {
        let doc = parse_cnl("A node is identified by an id. A color is identified by an id. Whenever there is a node with id X then we can have exactly 1 assign with node X, and with color C such that there is a color with id C.").unwrap();
        let rules = compile(&doc).unwrap();
        assert_eq!(
            print_program(&rules),
            "1 <= {assign(X,C): color(C)} <= 1 :- node(X).\n"
        );
    }

    #[test]
    fn single_alternative_is_an_unbounded_choice() {
        let doc = parse_cnl("A node is identified by an id. Whenever there is a node with id X then we can have a selected with id X.").unwrap();
        assert_eq!(
            print_program(&compile(&doc).unwrap()),
            "{selected(X)} :- node(X).\n"
        );
    }

    #[test]
    fn negative_constraint_with_one_condition() {
        let doc = parse_cnl("A node is identified by an id. A selected is identified by an id. It is prohibited that there is a selected with id X, whenever there is a node with id X.").unwrap();
        let rules = compile_sentence(&doc.propositions[2], &doc.symbols).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(print_rule(&rules[0]), ":- selected(X), node(X).");
    }

    #[test]
    fn requirement_negates_each_assertion() {
        let doc = parse_cnl("A node is identified by an id. A reached is identified by an id. A marked is identified by an id. It is required that there is a reached with id X, and there is a marked with id X, whenever there is a node with id X. It is required that X is different from 3, whenever there is a node with id X.").unwrap();
        let program = compile(&doc).unwrap();
        assert_eq!(
            print_program(&program),
            ":- node(X), not reached(X).\n:- node(X), not marked(X).\n:- X = 3, node(X).\n"
        );
    }

    #[test]
    fn weak_constraint_annotation() {
        let doc = parse_cnl("A path is identified by a firstnode, and by a secondnode. A cost is identified by a firstnode, and by a secondnode, and has a value. It is preferred as little as possible, with weight W and priority 2, that there is a path with firstnode X, and with secondnode Y, whenever there is a cost with firstnode X, and with secondnode Y, and with value W.").unwrap();
        let rules = compile(&doc).unwrap();
        assert_eq!(
            print_program(&rules),
            ":~ path(X,Y), cost(X,Y,W). [W@2, X, Y, W]\n"
        );
        let default = parse_cnl("A node is identified by an id. It is preferred as little as possible, that there is a node with id X.").unwrap();
        assert_eq!(
            print_program(&compile(&default).unwrap()),
            ":~ node(X). [1@1, X]\n"
        );
    }

    #[test]
    fn constants_and_numbers() {
        let doc = parse_cnl("A col is identified by a node, and by a color. Whenever there is a col with node 1, and with color equal to red then we must have a seen with id 1.").unwrap();
        assert_eq!(
            print_program(&compile(&doc).unwrap()),
            "seen(1) :- col(1,red).\n"
        );
    }

    #[test]
    fn unbound_attributes_get_fresh_variables() {
        let doc = parse_cnl("A edge is identified by a firstnode, and by a secondnode. Whenever there is an edge with firstnode X then we must have a source with id X.").unwrap();
        assert_eq!(
            print_program(&compile(&doc).unwrap()),
            "source(X) :- edge(X,V1).\n"
        );
    }

    #[test]
    fn unsafe_proposition_is_reported() {
        let doc = parse_cnl("A node is identified by an id. Whenever there is not a node with id X then we must have a ghost with id X.").unwrap();
        assert_eq!(
            compile(&doc).unwrap_err(),
            CompileError::UnboundVariable {
                var: "X".into(),
                proposition: 1
            }
        );
    }

    #[test]
    fn arity_mismatch_against_foreign_symbols() {
        let doc = parse_cnl_with(
            "It is prohibited that there is a node with label X.",
            None,
            Resolution::Lenient,
        )
        .unwrap();
        let other = parse_cnl("A node is identified by an id.").unwrap();
        assert!(matches!(
            compile_sentence(&doc.propositions[0], &other.symbols),
            Err(CompileError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn output_is_parseable() {
        let program = compile(&parse_cnl(COLORING).unwrap()).unwrap();
        let text = print_program(&program);
        assert_eq!(parse_program(&text).unwrap(), program);
    }
}
