//! A small reader for parenthesized symbolic expressions.
//!
//! Grammar files, combination patterns and the s-expression form of
//! attribute-value structures share this reader. Atoms are integers, strings
//! in double quotes, or symbols (anything else up to whitespace or a
//! parenthesis). `;` starts a comment, a leading `'` is ignored.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SourcePos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SexprKind {
    Int(i64),
    Str(String),
    Sym(String),
    List(Vec<Sexpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sexpr {
    pub kind: SexprKind,
    pub pos: SourcePos,
}

impl Sexpr {
    pub fn is_sym(&self, s: &str) -> bool {
        matches!(&self.kind, SexprKind::Sym(x) if x.eq_ignore_ascii_case(s))
    }

    pub fn as_sym(&self) -> Option<&str> {
        match &self.kind {
            SexprKind::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match &self.kind {
            SexprKind::Str(s) => Some(s),
            _ => None,
        }
    }

    /// A string or a symbol, with a leading `:` stripped from symbols.
    pub fn as_name(&self) -> Option<&str> {
        match &self.kind {
            SexprKind::Str(s) => Some(s),
            SexprKind::Sym(s) => Some(s.strip_prefix(':').unwrap_or(s)),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match &self.kind {
            SexprKind::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match &self.kind {
            SexprKind::List(l) => Some(l),
            _ => None,
        }
    }

    /// `T` is true, `NIL` and `()` are false.
    pub fn as_bool(&self) -> Option<bool> {
        match &self.kind {
            SexprKind::Sym(s) if s.eq_ignore_ascii_case("t") => Some(true),
            SexprKind::Sym(s) if s.eq_ignore_ascii_case("nil") => Some(false),
            SexprKind::List(l) if l.is_empty() => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SexprKind::Int(i) => write!(f, "{i}"),
            SexprKind::Str(s) => {
                let mut out = String::new();
                write_string(&mut out, s);
                f.write_str(&out)
            }
            SexprKind::Sym(s) => f.write_str(s),
            SexprKind::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ReadError {
    pub pos: SourcePos,
    pub message: String,
}

pub fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: SourcePos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || c == '\'' {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn err<T>(&self, pos: SourcePos, message: impl Into<String>) -> Result<T, ReadError> {
        Err(ReadError {
            pos,
            message: message.into(),
        })
    }

    fn read(&mut self) -> Result<Option<Sexpr>, ReadError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return self.err(start, "unclosed `(`"),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?.expect("peeked a char")),
                    }
                }
                Ok(Some(Sexpr {
                    kind: SexprKind::List(items),
                    pos: start,
                }))
            }
            ')' => self.err(start, "unexpected `)`"),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return self.err(start, "unterminated string"),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(c) => s.push(c),
                            None => return self.err(start, "unterminated string"),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Some(Sexpr {
                    kind: SexprKind::Str(s),
                    pos: start,
                }))
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                let kind = match atom.parse::<i64>() {
                    Ok(i) => SexprKind::Int(i),
                    Err(_) => SexprKind::Sym(atom),
                };
                Ok(Some(Sexpr { kind, pos: start }))
            }
        }
    }
}

/// Reads every top-level form in `src`.
pub fn read_all(src: &str) -> Result<Vec<Sexpr>, ReadError> {
    let mut reader = Reader {
        chars: src.chars().peekable(),
        pos: SourcePos { line: 1, col: 1 },
    };
    let mut forms = Vec::new();
    while let Some(form) = reader.read()? {
        forms.push(form);
    }
    Ok(forms)
}
