use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::cnl::PropositionKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    Num,
    Verb,
    Noun,
    Var,
    Color,
    Pid,
}

impl SlotKind {
    pub fn label(self) -> &'static str {
        match self {
            SlotKind::Num => "num",
            SlotKind::Verb => "verb",
            SlotKind::Noun => "noun",
            SlotKind::Var => "var",
            SlotKind::Color => "color",
            SlotKind::Pid => "PID",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connector {
    Or,
    And,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Placeholder {
    Indexed {
        kind: SlotKind,
        index: u32,
    },
    NumRange {
        lo: i64,
        hi: i64,
    },
    NumChoice {
        count: usize,
        connector: Option<Connector>,
    },
}

impl fmt::Display for Placeholder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Placeholder::Indexed { kind, index } => write!(f, "{}_{index}", kind.label()),
            Placeholder::NumRange { lo, hi } => write!(f, "num_range({lo} to {hi})"),
            Placeholder::NumChoice { count, connector } => match connector {
                None => write!(f, "num_choice({count})"),
                Some(Connector::Or) => write!(f, "num_choice({count}, or)"),
                Some(Connector::And) => write!(f, "num_choice({count}, and)"),
            },
        }
    }
}

/// Key of a filled value. Indexed placeholders are keyed by category and
/// index; `num_range` and `num_choice` by their order of appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    Indexed(SlotKind, u32),
    Range(usize),
    Choice(usize),
}

pub type Assignment = BTreeMap<Slot, String>;

/// A placeholder found in template text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub start: usize,
    pub end: usize,
    pub placeholder: Placeholder,
    pub slot: Slot,
    /// Written with an initial capital (`Noun_1`).
    pub capitalized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cnl,
    Nl,
}

fn pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?x)
            \b(?:
                num_range\s*\(\s*(?P<lo>-?\d+)\s+to\s+(?P<hi>-?\d+)\s*\)
              | num_choice\s*\(\s*(?P<count>\d+)\s*(?:,\s*(?P<conn>or|and)\s*)?\)
              | (?P<kind>[Nn]um|[Vv]erb|[Nn]oun|[Vv]ar|[Cc]olor|PID)_(?P<index>\d+)\b
            )",
        )
        .expect("placeholder pattern")
    })
}

/// Finds every placeholder in `text`, in order.
pub fn scan(text: &str) -> Result<Vec<Occurrence>, DatasetError> {
    let mut out = Vec::new();
    let (mut ranges, mut choices) = (0, 0);
    for caps in pattern().captures_iter(text) {
        let m = caps.get(0).expect("match");
        let bad = |detail: &str| DatasetError::BadPlaceholder {
            text: m.as_str().to_string(),
            detail: detail.to_string(),
        };
        let (placeholder, slot, capitalized) = if let Some(kind) = caps.name("kind") {
            let k = kind.as_str();
            let slot_kind = match k.to_ascii_lowercase().as_str() {
                "num" => SlotKind::Num,
                "verb" => SlotKind::Verb,
                "noun" => SlotKind::Noun,
                "var" => SlotKind::Var,
                "color" => SlotKind::Color,
                _ => SlotKind::Pid,
            };
            let index: u32 = caps["index"]
                .parse()
                .map_err(|_| bad("index out of range"))?;
            if index == 0 {
                return Err(bad("index must be positive"));
            }
            let cap = slot_kind != SlotKind::Pid && k.starts_with(|c: char| c.is_ascii_uppercase());
            (
                Placeholder::Indexed {
                    kind: slot_kind,
                    index,
                },
                Slot::Indexed(slot_kind, index),
                cap,
            )
        } else if let Some(lo) = caps.name("lo") {
            let lo: i64 = lo.as_str().parse().map_err(|_| bad("bound out of range"))?;
            let hi: i64 = caps["hi"].parse().map_err(|_| bad("bound out of range"))?;
            if lo > hi {
                return Err(bad("lower bound exceeds upper bound"));
            }
            ranges += 1;
            (
                Placeholder::NumRange { lo, hi },
                Slot::Range(ranges - 1),
                false,
            )
        } else {
            let count: usize = caps["count"]
                .parse()
                .map_err(|_| bad("count out of range"))?;
            if !(1..=10).contains(&count) {
                return Err(bad("count must lie between 1 and 10"));
            }
            let connector = caps.name("conn").map(|c| match c.as_str() {
                "or" => Connector::Or,
                _ => Connector::And,
            });
            choices += 1;
            (
                Placeholder::NumChoice { count, connector },
                Slot::Choice(choices - 1),
                false,
            )
        };
        out.push(Occurrence {
            start: m.start(),
            end: m.end(),
            placeholder,
            slot,
            capitalized,
        });
    }
    Ok(out)
}

/// Replaces every placeholder of `template` with its value in `assignment`,
/// then makes each `a`/`an` agree with the following word.
///
/// `PID` values may span several words; on the CNL side they are joined
/// with `_` so that they form a single identifier.
pub fn render(template: &str, assignment: &Assignment, side: Side) -> Result<String, DatasetError> {
    let mut out = String::with_capacity(template.len());
    let mut last = 0;
    for occ in scan(template)? {
        out.push_str(&template[last..occ.start]);
        let value = assignment.get(&occ.slot).ok_or_else(|| {
            DatasetError::PlaceholderMismatch(format!("no value for {}", occ.placeholder))
        })?;
        let value = match (occ.slot, side) {
            (Slot::Indexed(SlotKind::Pid, _), Side::Cnl) => {
                value.split_whitespace().collect::<Vec<_>>().join("_")
            }
            _ => value.clone(),
        };
        if occ.capitalized {
            let mut chars = value.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
        } else {
            out.push_str(&value);
        }
        last = occ.end;
    }
    out.push_str(&template[last..]);
    Ok(fix_articles(&out))
}

fn fix_articles(text: &str) -> String {
    let words: Vec<&str> = text.split(' ').collect();
    let mut out: Vec<String> = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        let next = words[i + 1..].iter().find(|n| !n.is_empty());
        let fixed = match (*w, next) {
            ("a" | "an" | "A" | "An", Some(n))
                if n.starts_with(|c: char| c.is_ascii_alphabetic()) =>
            {
                let vowel = n.starts_with(|c: char| "aeiouAEIOU".contains(c));
                let lower = if vowel { "an" } else { "a" };
                if w.starts_with('A') {
                    let mut s = lower.to_string();
                    s[..1].make_ascii_uppercase();
                    s
                } else {
                    lower.to_string()
                }
            }
            _ => w.to_string(),
        };
        out.push(fixed);
    }
    out.join(" ")
}

/// Formats sorted numbers for a `num_choice` slot.
pub(crate) fn join_choice(values: &[i64], connector: Option<Connector>) -> String {
    let conn = connector.unwrap_or(if values.len() <= 2 {
        Connector::Or
    } else {
        Connector::And
    });
    let word = match conn {
        Connector::Or => "or",
        Connector::And => "and",
    };
    let v: Vec<String> = values.iter().map(i64::to_string).collect();
    match v.len() {
        0 => String::new(),
        1 => v[0].clone(),
        2 => format!("{} {word} {}", v[0], v[1]),
        n => format!("{}, {word} {}", v[..n - 1].join(", "), v[n - 1]),
    }
}

/// A CNL template with its NL counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplatePair {
    pub cnl: String,
    pub nl: String,
    pub category: PropositionKind,
}

impl TemplatePair {
    pub fn new(cnl: impl Into<String>, nl: impl Into<String>, category: PropositionKind) -> Self {
        TemplatePair {
            cnl: cnl.into(),
            nl: nl.into(),
            category,
        }
    }

    /// Checks that both sides use the same placeholders, so every slot can
    /// be filled consistently.
    pub fn validate(&self) -> Result<(), DatasetError> {
        let cnl = signature(&scan(&self.cnl)?);
        let nl = signature(&scan(&self.nl)?);
        if cnl != nl {
            return Err(DatasetError::PlaceholderMismatch(format!(
                "CNL side uses [{}], NL side uses [{}]",
                describe(&cnl),
                describe(&nl)
            )));
        }
        Ok(())
    }

    /// Placeholders of the template, one per slot.
    pub fn slots(&self) -> Result<BTreeMap<Slot, Placeholder>, DatasetError> {
        Ok(signature(&scan(&self.cnl)?))
    }
}

fn signature(occ: &[Occurrence]) -> BTreeMap<Slot, Placeholder> {
    occ.iter().map(|o| (o.slot, o.placeholder)).collect()
}

fn describe(sig: &BTreeMap<Slot, Placeholder>) -> String {
    sig.values()
        .map(Placeholder::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

// --- matching rendered text back against a template ---------------------

#[derive(Debug, Clone)]
enum Seg {
    Lit(String),
    Hole(Occurrence),
}

/// Splits on whitespace; `,` `.` `;` `:` `?` `!` `(` `)` become tokens.
pub(crate) fn words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_whitespace() || ",.;:?!()".contains(c) {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn segments(template: &str) -> Result<Vec<Seg>, DatasetError> {
    let mut segs = Vec::new();
    let mut last = 0;
    for occ in scan(template)? {
        segs.extend(words(&template[last..occ.start]).into_iter().map(Seg::Lit));
        last = occ.end;
        segs.push(Seg::Hole(occ));
    }
    segs.extend(words(&template[last..]).into_iter().map(Seg::Lit));
    Ok(segs)
}

/// Number of literal tokens in a template side.
pub(crate) fn literal_count(template: &str) -> Result<usize, DatasetError> {
    Ok(segments(template)?
        .iter()
        .filter(|s| matches!(s, Seg::Lit(_)))
        .count())
}

fn lit_eq(lit: &str, tok: &str) -> bool {
    let article = |s: &str| s.eq_ignore_ascii_case("a") || s.eq_ignore_ascii_case("an");
    lit.eq_ignore_ascii_case(tok) || (article(lit) && article(tok))
}

fn is_int(t: &str) -> bool {
    t.parse::<i64>().is_ok()
}

fn is_word(t: &str) -> bool {
    t.starts_with(|c: char| c.is_alphabetic()) && t.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Candidate values for a hole starting at `toks[0]`, shortest first.
fn candidates(occ: &Occurrence, toks: &[String], side: Side) -> Vec<(usize, String)> {
    let Some(first) = toks.first() else {
        return Vec::new();
    };
    match occ.placeholder {
        Placeholder::Indexed { kind, .. } => match kind {
            SlotKind::Num => match is_int(first) {
                true => vec![(1, first.clone())],
                false => Vec::new(),
            },
            SlotKind::Var => {
                if first.starts_with(|c: char| c.is_ascii_uppercase()) && is_word(first) {
                    vec![(1, first.clone())]
                } else {
                    Vec::new()
                }
            }
            SlotKind::Noun | SlotKind::Verb | SlotKind::Color => match is_word(first) {
                true => vec![(1, first.to_lowercase())],
                false => Vec::new(),
            },
            SlotKind::Pid => match side {
                Side::Cnl if is_word(first) => vec![(1, first.replace('_', " "))],
                Side::Cnl => Vec::new(),
                Side::Nl => (1..=3)
                    .take_while(|&n| n <= toks.len() && toks[..n].iter().all(|t| is_word(t)))
                    .map(|n| (n, toks[..n].join(" ").to_lowercase()))
                    .collect(),
            },
        },
        Placeholder::NumRange { lo, hi } => match first.parse::<i64>() {
            Ok(v) if (lo..=hi).contains(&v) => vec![(1, first.clone())],
            _ => Vec::new(),
        },
        Placeholder::NumChoice { count, connector } => {
            // Re-render the numbers found and require the same text.
            let mut nums = Vec::new();
            let mut out = Vec::new();
            for (i, t) in toks.iter().enumerate() {
                match t.parse::<i64>() {
                    Ok(v) => nums.push(v),
                    Err(_) if [",", "or", "and"].contains(&t.as_str()) => continue,
                    Err(_) => break,
                }
                if nums.len() == count {
                    let text = join_choice(&nums, connector);
                    if words(&text) == toks[..=i] {
                        out.push((i + 1, text));
                    }
                    break;
                }
            }
            out
        }
    }
}

fn match_from(segs: &[Seg], toks: &[String], side: Side, asg: &mut Assignment) -> bool {
    let Some((seg, rest)) = segs.split_first() else {
        return toks.is_empty();
    };
    match seg {
        Seg::Lit(l) => match toks.first() {
            Some(t) if lit_eq(l, t) => match_from(rest, &toks[1..], side, asg),
            _ => false,
        },
        Seg::Hole(occ) => {
            if let Some(existing) = asg.get(&occ.slot) {
                let shown = match (occ.slot, side) {
                    (Slot::Indexed(SlotKind::Pid, _), Side::Cnl) => existing.replace(' ', "_"),
                    _ => existing.clone(),
                };
                let want = words(&shown);
                let n = want.len();
                return toks.len() >= n
                    && toks[..n]
                        .iter()
                        .zip(&want)
                        .all(|(a, b)| a.eq_ignore_ascii_case(b))
                    && match_from(rest, &toks[n..], side, asg);
            }
            for (n, value) in candidates(occ, toks, side) {
                asg.insert(occ.slot, value);
                if match_from(rest, &toks[n..], side, asg) {
                    return true;
                }
                asg.remove(&occ.slot);
            }
            false
        }
    }
}

/// Matches `text` against one side of a template and returns the captured
/// slot values. Literals compare case-insensitively, `a` and `an` are
/// interchangeable, and multi-word spans are tried shortest first.
pub fn capture(template: &str, text: &str, side: Side) -> Result<Option<Assignment>, DatasetError> {
    let segs = segments(template)?;
    let toks = words(text);
    let mut asg = Assignment::new();
    Ok(match_from(&segs, &toks, side, &mut asg).then_some(asg))
}
