//! Text scanner: raw text to classified, normalized tokens.
//!
//! Offsets are code-point indices. Whitespace is skipped except where it
//! carries structure: two or more newlines form a paragraph break and the
//! leading whitespace of a line (two columns or a tab) forms an indentation
//! token.

mod abbrev;
mod normalize;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::avs::AttrValue;

pub use abbrev::{expand_abbreviations, load_abbreviations, parse_abbreviations, AbbreviationTable};
pub use normalize::{normalize_date, normalize_time, render_date, render_time};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ScanError {
    #[error("`{0}` does not match any normalization pattern")]
    NoMatch(String),
    #[error("{path}:{line}: {message}")]
    Resource {
        path: String,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Word,
    Number,
    Date,
    Time,
    Punct,
    ParagraphBreak,
    Indentation,
    Abbreviation,
}

impl TokenKind {
    pub fn name(self) -> &'static str {
        match self {
            TokenKind::Word => "word",
            TokenKind::Number => "number",
            TokenKind::Date => "date",
            TokenKind::Time => "time",
            TokenKind::Punct => "punct",
            TokenKind::ParagraphBreak => "paragraph-break",
            TokenKind::Indentation => "indentation",
            TokenKind::Abbreviation => "abbreviation",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "word" => TokenKind::Word,
            "number" => TokenKind::Number,
            "date" => TokenKind::Date,
            "time" => TokenKind::Time,
            "punct" => TokenKind::Punct,
            "paragraph-break" | "paragraph" => TokenKind::ParagraphBreak,
            "indentation" => TokenKind::Indentation,
            "abbreviation" => TokenKind::Abbreviation,
            _ => return None,
        })
    }
}

/// Half-open code-point range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl From<(usize, usize)> for Span {
    fn from((start, end): (usize, usize)) -> Self {
        Span { start, end }
    }
}

impl From<Span> for (usize, usize) {
    fn from(s: Span) -> Self {
        (s.start, s.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub span: Span,
    pub payload: AttrValue,
}

impl Token {
    pub fn new(surface: impl Into<String>, kind: TokenKind, start: usize, end: usize) -> Self {
        Token {
            surface: surface.into(),
            kind,
            span: Span { start, end },
            payload: AttrValue::new(),
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Abbreviation)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("tokens always serialize")
    }
}

/// Scanner configuration. The abbreviation set, when present, lets a word
/// keep its trailing period even where the context heuristic would split it.
#[derive(Debug, Clone, Default)]
pub struct Scanner {
    abbreviations: BTreeSet<String>,
}

impl Scanner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_abbreviations(table: &AbbreviationTable) -> Self {
        Scanner {
            abbreviations: table.keys().map(|k| k.to_lowercase()).collect(),
        }
    }

    pub fn scan(&self, text: &str) -> Vec<Token> {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i = self.whitespace(&chars, i, &mut tokens);
            } else if c.is_ascii_digit() {
                i = self.numeric(&chars, i, &mut tokens);
            } else if c.is_alphabetic() {
                i = self.word(&chars, i, &mut tokens);
            } else {
                tokens.push(Token::new(c, TokenKind::Punct, i, i + 1));
                i += 1;
            }
        }
        tokens
    }

    fn whitespace(&self, chars: &[char], start: usize, tokens: &mut Vec<Token>) -> usize {
        let end = start + chars[start..].iter().take_while(|c| c.is_whitespace()).count();
        let newlines: Vec<usize> = (start..end).filter(|&k| chars[k] == '\n').collect();
        if newlines.len() >= 2 {
            let (first, last) = (newlines[0], *newlines.last().unwrap());
            tokens.push(Token::new(
                chars[first..=last].iter().collect::<String>(),
                TokenKind::ParagraphBreak,
                first,
                last + 1,
            ));
        }
        let line_start = match newlines.last() {
            Some(&nl) => Some(nl + 1),
            None if start == 0 => Some(0),
            None => None,
        };
        if let Some(ls) = line_start {
            let indent = &chars[ls..end];
            if end < chars.len() && (indent.len() >= 2 || indent.contains(&'\t')) {
                let mut tok = Token::new(indent.iter().collect::<String>(), TokenKind::Indentation, ls, end);
                tok.payload.set("width", indent.len() as i64);
                tokens.push(tok);
            }
        }
        end
    }

    fn numeric(&self, chars: &[char], i: usize, tokens: &mut Vec<Token>) -> usize {
        let surface = |a: usize, b: usize| chars[a..b].iter().collect::<String>();
        if let Some(m) = normalize::recognize_time(chars, i) {
            let mut tok = Token::new(surface(i, i + m.core), TokenKind::Time, i, i + m.core);
            tok.payload = m.payload;
            tokens.push(tok);
            if let Some((us, ue)) = m.unit {
                tokens.push(Token::new(surface(i + us, i + ue), TokenKind::Word, i + us, i + ue));
                return i + ue;
            }
            return i + m.core;
        }
        if let Some((len, payload)) = normalize::recognize_date(chars, i) {
            let mut tok = Token::new(surface(i, i + len), TokenKind::Date, i, i + len);
            tok.payload = payload;
            tokens.push(tok);
            return i + len;
        }
        let (len, payload) = normalize::recognize_number(chars, i).expect("starts with a digit");
        let mut tok = Token::new(surface(i, i + len), TokenKind::Number, i, i + len);
        tok.payload = payload;
        tokens.push(tok);
        i + len
    }

    fn word(&self, chars: &[char], start: usize, tokens: &mut Vec<Token>) -> usize {
        let mut end = start;
        loop {
            while end < chars.len() && chars[end].is_alphanumeric() {
                end += 1;
            }
            let joins = |sep: char| {
                chars.get(end) == Some(&sep)
                    && chars.get(end + 1).is_some_and(|c| c.is_alphanumeric())
            };
            if joins('-') {
                end += 1;
                continue;
            }
            // z.B., u.a.: short letter groups chained by periods
            let group = chars[start..end]
                .iter()
                .rev()
                .take_while(|c| c.is_alphabetic())
                .count();
            if group <= 2
                && chars.get(end) == Some(&'.')
                && chars.get(end + 1).is_some_and(|c| c.is_alphabetic())
                && !chars[start..end].contains(&'-')
            {
                end += 1;
                continue;
            }
            break;
        }
        if chars.get(end) == Some(&'.') && self.keeps_period(chars, start, end) {
            end += 1;
        }
        tokens.push(Token::new(
            chars[start..end].iter().collect::<String>(),
            TokenKind::Word,
            start,
            end,
        ));
        end
    }

    fn keeps_period(&self, chars: &[char], start: usize, end: usize) -> bool {
        let with_dot: String = chars[start..=end].iter().collect::<String>().to_lowercase();
        if self.abbreviations.contains(&with_dot) {
            return true;
        }
        if chars[start..end].contains(&'.') {
            return true;
        }
        // A period followed by a lowercase word or a digit does not end a sentence.
        let mut k = end + 1;
        let mut saw_space = false;
        while k < chars.len() && (chars[k] == ' ' || chars[k] == '\t') {
            k += 1;
            saw_space = true;
        }
        saw_space && chars.get(k).is_some_and(|c| c.is_lowercase() || c.is_ascii_digit())
    }
}

/// Scans `text` with the default configuration.
pub fn scan(text: &str) -> Vec<Token> {
    Scanner::new().scan(text)
}

/// Reconstructs the text between tokens; used by tests and the HTML emitter.
pub fn gaps(text: &str, tokens: &[Token]) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::with_capacity(tokens.len() + 1);
    let mut pos = 0;
    for t in tokens {
        out.push(chars[pos..t.span.start].iter().collect());
        pos = t.span.end;
    }
    out.push(chars[pos..].iter().collect());
    out
}
