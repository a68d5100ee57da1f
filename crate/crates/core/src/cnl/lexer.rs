use super::CnlError;

/// A sentence of the input with its byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceSpan<'a> {
    pub offset: usize,
    pub text: &'a str,
}

/// Splits text into sentences on "." followed by whitespace or end of input.
/// A trailing fragment without a period is returned as its own sentence so
/// the parser can report it as truncated.
pub fn split_sentences(text: &str) -> Vec<SentenceSpan<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'.' && bytes.get(i + 1).is_none_or(|c| c.is_ascii_whitespace()) {
            push_span(&mut out, text, start, i + 1);
            start = i + 1;
        }
    }
    push_span(&mut out, text, start, text.len());
    out
}

fn push_span<'a>(out: &mut Vec<SentenceSpan<'a>>, text: &'a str, start: usize, end: usize) {
    let raw = &text[start..end];
    let trimmed = raw.trim_start();
    let lead = raw.len() - trimmed.len();
    let trimmed = trimmed.trim_end();
    if !trimmed.is_empty() {
        out.push(SentenceSpan {
            offset: start + lead,
            text: trimmed,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Int(i64),
    Comma,
    Period,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("'{w}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Comma => "','".into(),
            Tok::Period => "'.'".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub position: usize,
}

/// Tokenizes one sentence into words, integers, commas and the final period.
pub(crate) fn lex(sentence: &str, index: usize) -> Result<Vec<Token>, CnlError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == ',' {
            out.push(Token {
                tok: Tok::Comma,
                position: pos,
            });
            i += 1;
        } else if c == '.' {
            out.push(Token {
                tok: Tok::Period,
                position: pos,
            });
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|(_, d)| d.is_ascii_digit()))
        {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(sentence.len(), |(p, _)| *p);
            if j < chars.len() && is_word_char(chars[j].1) {
                return Err(bad_char(index, chars[j].0, chars[j].1));
            }
            let n = sentence[pos..end]
                .parse::<i64>()
                .map_err(|_| CnlError::Syntax {
                    sentence: index,
                    position: pos,
                    found: format!("'{}'", &sentence[pos..end]),
                    expected: vec!["an integer in range".into()],
                    hint: None,
                })?;
            out.push(Token {
                tok: Tok::Int(n),
                position: pos,
            });
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < chars.len() && is_word_char(chars[j].1) {
                j += 1;
            }
            if j < chars.len() && !is_separator(chars[j].1) {
                return Err(bad_char(index, chars[j].0, chars[j].1));
            }
            let end = chars.get(j).map_or(sentence.len(), |(p, _)| *p);
            out.push(Token {
                tok: Tok::Word(sentence[pos..end].to_string()),
                position: pos,
            });
            i = j;
        } else {
            return Err(bad_char(index, pos, c));
        }
    }
    Ok(out)
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || c == ',' || c == '.'
}

fn bad_char(sentence: usize, position: usize, c: char) -> CnlError {
    let hint = (c == '-').then(|| "join words with '_' instead of '-'".to_string());
    CnlError::Syntax {
        sentence,
        position,
        found: format!("'{c}'"),
        expected: vec!["a word, number, ',' or '.'".into()],
        hint,
    }
}
