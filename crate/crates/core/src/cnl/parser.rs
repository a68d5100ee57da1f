use super::lexer::{Tok, Token};
use super::{
    Binding, ChoiceAlternative, CnlComparison, CnlError, CnlProposition, Condition, EntityDef,
    EntityRef, Quantity, Value,
};
use crate::asp::CompareOp;

/// Words that cannot be used as entity, attribute or constant names.
pub const RESERVED: &[&str] = &[
    "a",
    "an",
    "and",
    "as",
    "at",
    "between",
    "by",
    "can",
    "different",
    "equal",
    "exactly",
    "from",
    "greater",
    "has",
    "have",
    "holds",
    "identified",
    "is",
    "least",
    "less",
    "little",
    "most",
    "must",
    "not",
    "or",
    "possible",
    "preferred",
    "priority",
    "prohibited",
    "required",
    "such",
    "than",
    "that",
    "then",
    "there",
    "to",
    "we",
    "weight",
    "when",
    "whenever",
    "with",
];

pub(crate) fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}

#[derive(Clone, Copy)]
enum Pat<'p> {
    W(&'p str),
    Comma,
    /// A word or integer usable as a comparison operand.
    Operand,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    sentence: usize,
    end: usize,
}

type PResult<T> = Result<T, CnlError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_word(&self) -> Option<&'a str> {
        match self.peek() {
            Some(Tok::Word(w)) => Some(w),
            _ => None,
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        self.fail_hint(expected, None)
    }

    fn fail_hint<T>(&self, expected: &[&str], hint: Option<String>) -> PResult<T> {
        let (found, position) = match self.toks.get(self.pos) {
            Some(t) => (t.tok.describe(), t.position),
            None => ("end of sentence".to_string(), self.end),
        };
        Err(CnlError::Syntax {
            sentence: self.sentence,
            position,
            found,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            hint,
        })
    }

    fn at(&self, pats: &[Pat]) -> bool {
        pats.iter().enumerate().all(|(k, p)| {
            let tok = self.toks.get(self.pos + k).map(|t| &t.tok);
            match (p, tok) {
                (Pat::W(w), Some(Tok::Word(x))) => x == w,
                (Pat::Comma, Some(Tok::Comma)) => true,
                (Pat::Operand, Some(Tok::Int(_))) => true,
                (Pat::Operand, Some(Tok::Word(x))) => !is_reserved(x),
                _ => false,
            }
        })
    }

    fn eat(&mut self, pats: &[Pat]) -> bool {
        if self.at(pats) {
            self.pos += pats.len();
            true
        } else {
            false
        }
    }

    fn expect_words(&mut self, words: &[&str]) -> PResult<()> {
        for w in words {
            if self.peek_word() == Some(w) {
                self.pos += 1;
            } else {
                return self.fail(&[&format!("'{w}'")]);
            }
        }
        Ok(())
    }

    fn article(&mut self) -> PResult<()> {
        match self.peek_word() {
            Some("a" | "an") => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&["'a'", "'an'"]),
        }
    }

    fn name(&mut self, what: &str) -> PResult<String> {
        match self.peek_word() {
            Some(w) if w.starts_with(|c: char| c.is_ascii_lowercase()) && !is_reserved(w) => {
                self.pos += 1;
                Ok(w.to_string())
            }
            _ => self.fail(&[what]),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(*n)
            }
            _ => self.fail(&["a number"]),
        }
    }

    fn value(&mut self) -> PResult<Value> {
        let v = match self.peek() {
            Some(Tok::Int(n)) => Value::Int(*n),
            Some(Tok::Word(w)) if w.starts_with(|c: char| c.is_ascii_uppercase()) => {
                Value::Var(w.clone())
            }
            Some(Tok::Word(w)) if !is_reserved(w) => Value::Const(w.clone()),
            _ => return self.fail(&["a variable, number or constant"]),
        };
        self.pos += 1;
        Ok(v)
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            Some(Tok::Period) if self.pos + 1 == self.toks.len() => Ok(()),
            Some(Tok::Period) => {
                self.pos += 1;
                self.fail(&["end of sentence"])
            }
            _ => self.fail(&["'.'"]),
        }
    }

    // --- shared productions -------------------------------------------------

    /// `name [with attr value {, and with attr value}]`
    fn entity_ref(&mut self) -> PResult<EntityRef> {
        let entity = self.name("an entity name")?;
        let mut bindings = Vec::new();
        if self.eat(&[Pat::W("with")]) {
            bindings.push(self.binding()?);
            while self.eat(&[Pat::Comma, Pat::W("and"), Pat::W("with")]) {
                bindings.push(self.binding()?);
            }
        }
        Ok(EntityRef { entity, bindings })
    }

    fn binding(&mut self) -> PResult<Binding> {
        let attribute = self.name("an attribute name")?;
        self.eat(&[Pat::W("equal"), Pat::W("to")]);
        let value = self.value()?;
        Ok(Binding { attribute, value })
    }

    /// `[not] a <ref>` following `there is`.
    fn exists_tail(&mut self) -> PResult<Condition> {
        let negated = self.eat(&[Pat::W("not")]);
        self.article()?;
        let entity = self.entity_ref()?;
        Ok(Condition::Exists { entity, negated })
    }

    fn comparison(&mut self) -> PResult<CnlComparison> {
        let left = self.value()?;
        self.expect_words(&["is"])?;
        let op = self.comparison_phrase()?;
        let right = self.value()?;
        Ok(CnlComparison { left, op, right })
    }

    fn comparison_phrase(&mut self) -> PResult<CompareOp> {
        use Pat::W;
        let or_equal = [W("or"), W("equal"), W("to")];
        if self.eat(&[W("equal"), W("to")]) {
            Ok(CompareOp::Eq)
        } else if self.eat(&[W("different"), W("from")]) {
            Ok(CompareOp::Ne)
        } else if self.eat(&[W("less"), W("than")]) {
            Ok(if self.eat(&or_equal) {
                CompareOp::Le
            } else {
                CompareOp::Lt
            })
        } else if self.eat(&[W("greater"), W("than")]) {
            Ok(if self.eat(&or_equal) {
                CompareOp::Ge
            } else {
                CompareOp::Gt
            })
        } else if self.at(&[W("at"), W("most"), W("or"), W("equal"), W("to")]) {
            self.fail_hint(
                &["a comparison phrase"],
                Some("write 'less than or equal to' instead of 'at most or equal to'".into()),
            )
        } else if self.at(&[W("at"), W("least"), W("or"), W("equal"), W("to")]) {
            self.fail_hint(
                &["a comparison phrase"],
                Some("write 'greater than or equal to' instead of 'at least or equal to'".into()),
            )
        } else {
            self.fail(&[
                "'equal to'",
                "'different from'",
                "'less than'",
                "'less than or equal to'",
                "'greater than'",
                "'greater than or equal to'",
            ])
        }
    }

    fn at_comparison(&self, lead: &[Pat]) -> bool {
        let mut pats = lead.to_vec();
        pats.extend([Pat::Operand, Pat::W("is")]);
        self.at(&pats)
    }

    /// `there is [not] a <ref>` or a comparison.
    fn assertion(&mut self) -> PResult<Condition> {
        if self.eat(&[Pat::W("there"), Pat::W("is")]) {
            self.exists_tail()
        } else if self.at_comparison(&[]) {
            Ok(Condition::Compare(self.comparison()?))
        } else {
            self.fail(&["'there is'", "a comparison"])
        }
    }

    /// Condition continuations: `, whenever there is ...`, `, and there is ...`
    /// and `, and <comparison>`.
    fn more_conditions(&mut self, out: &mut Vec<Condition>) -> PResult<()> {
        use Pat::{Comma, W};
        loop {
            if self.eat(&[Comma, W("whenever"), W("there"), W("is")])
                || self.eat(&[Comma, W("and"), W("there"), W("is")])
            {
                out.push(self.exists_tail()?);
            } else if self.at_comparison(&[Comma, W("and")]) {
                self.pos += 2;
                out.push(Condition::Compare(self.comparison()?));
            } else {
                return Ok(());
            }
        }
    }

    // --- sentences ----------------------------------------------------------

    fn sentence(&mut self) -> PResult<CnlProposition> {
        match self.peek_word() {
            Some("A" | "An") => self.definition_or_when(),
            Some("Whenever") => self.whenever(),
            Some("It") => self.it_is(),
            _ => self.fail(&["'A'", "'An'", "'Whenever'", "'It'"]),
        }
    }

    fn definition_or_when(&mut self) -> PResult<CnlProposition> {
        use Pat::{Comma, W};
        self.pos += 1;
        if self.toks.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::Word("is".into())) {
            let name = self.name("an entity name")?;
            self.expect_words(&["is", "identified", "by"])?;
            self.article()?;
            let mut key_attrs = vec![self.name("an attribute name")?];
            while self.eat(&[Comma, W("and"), W("by")]) {
                self.article()?;
                key_attrs.push(self.name("an attribute name")?);
            }
            let mut value_attrs = Vec::new();
            while self.eat(&[Comma, W("and"), W("has")]) {
                self.article()?;
                value_attrs.push(self.name("an attribute name")?);
            }
            self.finish()?;
            let mut seen = std::collections::BTreeSet::new();
            for a in key_attrs.iter().chain(&value_attrs) {
                if !seen.insert(a) {
                    return Err(CnlError::Syntax {
                        sentence: self.sentence,
                        position: self.end,
                        found: format!("'{a}'"),
                        expected: vec!["distinct attribute names".into()],
                        hint: Some(format!("attribute '{a}' is declared twice")),
                    });
                }
            }
            return Ok(CnlProposition::Definition(EntityDef {
                name,
                key_attrs,
                value_attrs,
            }));
        }
        let head = self.entity_ref()?;
        self.expect_words(&["holds", "when"])?;
        let mut conditions = vec![self.assertion()?];
        self.more_conditions(&mut conditions)?;
        self.finish()?;
        Ok(CnlProposition::When { head, conditions })
    }

    fn whenever(&mut self) -> PResult<CnlProposition> {
        use Pat::W;
        self.expect_words(&["Whenever", "there", "is"])?;
        let mut conditions = vec![self.exists_tail()?];
        self.more_conditions(&mut conditions)?;
        self.eat(&[Pat::Comma]);
        self.expect_words(&["then", "we"])?;
        if self.eat(&[W("must"), W("have")]) {
            self.article()?;
            let head = self.entity_ref()?;
            self.finish()?;
            return Ok(CnlProposition::Whenever { conditions, head });
        }
        if !self.eat(&[W("can"), W("have")]) {
            return self.fail(&["'must have'", "'can have'"]);
        }
        let quantity = self.quantity()?;
        if quantity.is_none() {
            self.article()?;
        }
        let mut alternatives = vec![self.choice_alternative()?];
        while self.eat(&[Pat::Comma, W("or")]) {
            if matches!(self.peek_word(), Some("a" | "an")) {
                self.pos += 1;
            }
            alternatives.push(self.choice_alternative()?);
        }
        self.finish()?;
        Ok(CnlProposition::Choice {
            conditions,
            quantity,
            alternatives,
        })
    }

    fn quantity(&mut self) -> PResult<Option<Quantity>> {
        use Pat::W;
        let q = if self.eat(&[W("exactly")]) {
            Quantity::Exactly(self.int()?)
        } else if self.eat(&[W("at"), W("most")]) {
            Quantity::AtMost(self.int()?)
        } else if self.eat(&[W("at"), W("least")]) {
            Quantity::AtLeast(self.int()?)
        } else if self.eat(&[W("between")]) {
            let lo = self.int()?;
            self.expect_words(&["and"])?;
            let hi = self.int()?;
            if lo > hi {
                self.pos -= 1;
                return self.fail(&[&format!("an upper bound of at least {lo}")]);
            }
            Quantity::Between(lo, hi)
        } else {
            return Ok(None);
        };
        Ok(Some(q))
    }

    fn choice_alternative(&mut self) -> PResult<ChoiceAlternative> {
        use Pat::{Comma, W};
        let target = self.entity_ref()?;
        let mut such_that = Vec::new();
        if self.eat(&[W("such"), W("that"), W("there"), W("is")]) {
            self.article()?;
            such_that.push(self.entity_ref()?);
            while self.eat(&[Comma, W("and"), W("there"), W("is")]) {
                self.article()?;
                such_that.push(self.entity_ref()?);
            }
        }
        Ok(ChoiceAlternative { target, such_that })
    }

    fn it_is(&mut self) -> PResult<CnlProposition> {
        use Pat::{Comma, W};
        self.expect_words(&["It", "is"])?;
        match self.peek_word() {
            Some("prohibited") | Some("required") => {
                let required = self.peek_word() == Some("required");
                self.pos += 1;
                self.expect_words(&["that"])?;
                let (assertions, conditions) = self.assertions_and_conditions()?;
                self.finish()?;
                Ok(if required {
                    CnlProposition::Requirement {
                        assertions,
                        conditions,
                    }
                } else {
                    CnlProposition::Prohibition {
                        assertions,
                        conditions,
                    }
                })
            }
            Some("preferred") => {
                self.expect_words(&["preferred", "as", "little", "as", "possible"])?;
                let (mut weight, mut priority) = (Value::Int(1), 1);
                if self.eat(&[Comma, W("with"), W("weight")]) {
                    weight = self.value()?;
                    self.expect_words(&["and", "priority"])?;
                    priority = self.int()?;
                } else if self.eat(&[Comma, W("with"), W("priority")]) {
                    priority = self.int()?;
                }
                if !self.eat(&[Comma, W("that")]) && !self.eat(&[W("that")]) {
                    return self.fail(&["'that'", "', with weight'", "', with priority'"]);
                }
                let (assertions, conditions) = self.assertions_and_conditions()?;
                self.finish()?;
                Ok(CnlProposition::Preference {
                    weight,
                    priority,
                    assertions,
                    conditions,
                })
            }
            _ => self.fail(&["'prohibited'", "'required'", "'preferred'"]),
        }
    }

    fn assertions_and_conditions(&mut self) -> PResult<(Vec<Condition>, Vec<Condition>)> {
        use Pat::{Comma, W};
        let mut assertions = vec![self.assertion()?];
        loop {
            if self.eat(&[Comma, W("and"), W("there"), W("is")]) {
                assertions.push(self.exists_tail()?);
            } else if self.at_comparison(&[Comma, W("and")]) {
                self.pos += 2;
                assertions.push(Condition::Compare(self.comparison()?));
            } else {
                break;
            }
        }
        let mut conditions = Vec::new();
        if self.eat(&[Comma, W("whenever"), W("there"), W("is")]) {
            conditions.push(self.exists_tail()?);
            self.more_conditions(&mut conditions)?;
        }
        Ok((assertions, conditions))
    }
}

pub(crate) fn parse_sentence(
    toks: &[Token],
    sentence: usize,
    end: usize,
) -> Result<CnlProposition, CnlError> {
    let mut p = Parser {
        toks,
        pos: 0,
        sentence,
        end,
    };
    p.sentence()
}
