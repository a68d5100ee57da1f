use thiserror::Error;

use super::{
    AspProgram, AspRule, Atom, BodyItem, Choice, ChoiceElement, CompareOp, Comparison, Head,
    Literal, Term, WeakAnnotation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message} (found {found})")]
pub struct AspSyntaxError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Not,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    If,
    WeakIf,
    Bar,
    At,
    Cmp(CompareOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Not => "'not'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Colon => "':'".into(),
            Tok::Dot => "'.'".into(),
            Tok::If => "':-'".into(),
            Tok::WeakIf => "':~'".into(),
            Tok::Bar => "'|'".into(),
            Tok::At => "'@'".into(),
            Tok::Cmp(op) => format!("'{}'", op.symbol()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, AspSyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '@' => push(Tok::At, 1, &mut i, &mut col),
            ':' => match chars.get(i + 1) {
                Some('-') => push(Tok::If, 2, &mut i, &mut col),
                Some('~') => push(Tok::WeakIf, 2, &mut i, &mut col),
                _ => push(Tok::Colon, 1, &mut i, &mut col),
            },
            '=' => push(Tok::Cmp(CompareOp::Eq), 1, &mut i, &mut col),
            '!' if chars.get(i + 1) == Some(&'=') => {
                push(Tok::Cmp(CompareOp::Ne), 2, &mut i, &mut col)
            }
            '<' if chars.get(i + 1) == Some(&'=') => {
                push(Tok::Cmp(CompareOp::Le), 2, &mut i, &mut col)
            }
            '<' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Cmp(CompareOp::Ne), 2, &mut i, &mut col)
            }
            '<' => push(Tok::Cmp(CompareOp::Lt), 1, &mut i, &mut col),
            '>' if chars.get(i + 1) == Some(&'=') => {
                push(Tok::Cmp(CompareOp::Ge), 2, &mut i, &mut col)
            }
            '>' => push(Tok::Cmp(CompareOp::Gt), 1, &mut i, &mut col),
            c if c.is_ascii_digit()
                || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) =>
            {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s.parse::<i64>().map_err(|_| AspSyntaxError {
                    line,
                    column: col,
                    found: format!("'{s}'"),
                    message: "integer out of range".into(),
                })?;
                push(Tok::Int(n), j - i, &mut i, &mut col);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let tok = if s == "not" {
                    Tok::Not
                } else if c.is_uppercase() || c == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                };
                push(tok, j - i, &mut i, &mut col);
            }
            other => {
                return Err(AspSyntaxError {
                    line,
                    column: col,
                    found: format!("'{other}'"),
                    message: "unexpected character".into(),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> AspSyntaxError {
        let s = &self.toks[self.pos];
        AspSyntaxError {
            line: s.line,
            column: s.column,
            found: s.tok.describe(),
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), AspSyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn program(&mut self) -> Result<AspProgram, AspSyntaxError> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(AspProgram { rules })
    }

    fn rule(&mut self) -> Result<AspRule, AspSyntaxError> {
        match self.peek() {
            Tok::WeakIf => {
                self.bump();
                let body = self.body_until_dot()?;
                self.expect(Tok::Dot, "'.'")?;
                self.expect(Tok::LBracket, "'['")?;
                let weight = self.term()?;
                self.expect(Tok::At, "'@'")?;
                let level = match self.bump() {
                    Tok::Int(n) => n,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected integer priority level"));
                    }
                };
                let mut terms = Vec::new();
                while *self.peek() == Tok::Comma {
                    self.bump();
                    terms.push(self.term()?);
                }
                self.expect(Tok::RBracket, "']'")?;
                Ok(AspRule::weak(
                    body,
                    WeakAnnotation {
                        weight,
                        level,
                        terms,
                    },
                ))
            }
            Tok::If => {
                self.bump();
                let body = self.body_until_dot()?;
                self.expect(Tok::Dot, "'.'")?;
                Ok(AspRule::constraint(body))
            }
            _ => {
                let head = self.head()?;
                let body = if *self.peek() == Tok::If {
                    self.bump();
                    self.body_until_dot()?
                } else {
                    Vec::new()
                };
                self.expect(Tok::Dot, "'.' or ':-'")?;
                Ok(AspRule {
                    head,
                    body,
                    weak: None,
                })
            }
        }
    }

    fn head(&mut self) -> Result<Head, AspSyntaxError> {
        let starts_choice = *self.peek() == Tok::LBrace
            || (matches!(self.peek(), Tok::Int(_))
                && (*self.peek_at(1) == Tok::LBrace
                    || (*self.peek_at(1) == Tok::Cmp(CompareOp::Le)
                        && *self.peek_at(2) == Tok::LBrace)));
        if starts_choice {
            return self.choice().map(Head::Choice);
        }
        let mut atoms = vec![self.atom()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            atoms.push(self.atom()?);
        }
        Ok(Head::Disjunction(atoms))
    }

    fn choice(&mut self) -> Result<Choice, AspSyntaxError> {
        let lower = if let Tok::Int(n) = *self.peek() {
            self.bump();
            if *self.peek() == Tok::Cmp(CompareOp::Le) {
                self.bump();
            }
            Some(n)
        } else {
            None
        };
        self.expect(Tok::LBrace, "'{'")?;
        let mut elements = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let atom = self.atom()?;
                let mut condition = Vec::new();
                if *self.peek() == Tok::Colon {
                    self.bump();
                    loop {
                        condition.push(self.literal()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                elements.push(ChoiceElement { atom, condition });
                if *self.peek() == Tok::Semi {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace, "'}' or ';'")?;
        let upper = if let Tok::Int(n) = *self.peek() {
            self.bump();
            Some(n)
        } else if *self.peek() == Tok::Cmp(CompareOp::Le) {
            self.bump();
            match self.bump() {
                Tok::Int(n) => Some(n),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected integer upper bound"));
                }
            }
        } else {
            None
        };
        Ok(Choice {
            elements,
            lower,
            upper,
        })
    }

    fn body_until_dot(&mut self) -> Result<Vec<BodyItem>, AspSyntaxError> {
        let mut body = Vec::new();
        if *self.peek() == Tok::Dot {
            return Ok(body);
        }
        loop {
            body.push(self.body_item()?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        Ok(body)
    }

    fn body_item(&mut self) -> Result<BodyItem, AspSyntaxError> {
        match self.peek() {
            Tok::Not => Ok(BodyItem::Literal(self.literal()?)),
            Tok::Var(_) | Tok::Int(_) => self.comparison().map(BodyItem::Comparison),
            Tok::Ident(_) if matches!(self.peek_at(1), Tok::Cmp(_)) => {
                self.comparison().map(BodyItem::Comparison)
            }
            Tok::Ident(_) => Ok(BodyItem::pos(self.atom()?)),
            _ => Err(self.error("expected body literal or comparison")),
        }
    }

    fn comparison(&mut self) -> Result<Comparison, AspSyntaxError> {
        let left = self.term()?;
        let op = match self.peek() {
            Tok::Cmp(op) => *op,
            _ => return Err(self.error("expected comparison operator")),
        };
        self.bump();
        let right = self.term()?;
        Ok(Comparison { left, op, right })
    }

    fn literal(&mut self) -> Result<Literal, AspSyntaxError> {
        let negated = if *self.peek() == Tok::Not {
            self.bump();
            true
        } else {
            false
        };
        Ok(Literal {
            atom: self.atom()?,
            negated,
        })
    }

    fn atom(&mut self) -> Result<Atom, AspSyntaxError> {
        let predicate = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error("expected atom")),
        };
        self.bump();
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.term()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen, "')' or ','")?;
        }
        Ok(Atom { predicate, args })
    }

    fn term(&mut self) -> Result<Term, AspSyntaxError> {
        let t = match self.peek() {
            Tok::Ident(s) => Term::Const(s.clone()),
            Tok::Var(s) => Term::Var(s.clone()),
            Tok::Int(n) => Term::Int(*n),
            _ => return Err(self.error("expected term")),
        };
        self.bump();
        if *self.peek() == Tok::LParen {
            return Err(self.error("function terms are not supported"));
        }
        Ok(t)
    }
}

/// Parses program text in the printed subset. `%` starts a line comment.
pub fn parse_program(text: &str) -> Result<AspProgram, AspSyntaxError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.program()
}

/// Parses exactly one rule.
pub fn parse_rule(text: &str) -> Result<AspRule, AspSyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let rule = p.rule()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("expected end of input after rule"));
    }
    Ok(rule)
}
