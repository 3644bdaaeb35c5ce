use std::collections::BTreeMap;
use std::path::Path;

use super::{ScanError, Token, TokenKind};

/// Abbreviation surface (with its period) to expansion.
pub type AbbreviationTable = BTreeMap<String, String>;

/// Parses `short<TAB>expansion` lines. Blank lines and `#` comments are skipped.
pub fn parse_abbreviations(src: &str, path: &str) -> Result<AbbreviationTable, ScanError> {
    let mut table = AbbreviationTable::new();
    for (n, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('\t') {
            Some((short, expansion)) if !short.is_empty() && !expansion.trim().is_empty() => {
                table.insert(short.to_string(), expansion.trim().to_string());
            }
            _ => {
                return Err(ScanError::Resource {
                    path: path.to_string(),
                    line: n + 1,
                    message: "expected `short<TAB>expansion`".into(),
                })
            }
        }
    }
    Ok(table)
}

pub fn load_abbreviations(path: &Path) -> Result<AbbreviationTable, ScanError> {
    let src = std::fs::read_to_string(path).map_err(|e| ScanError::Resource {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    parse_abbreviations(&src, &path.display().to_string())
}

fn lookup<'t>(table: &'t AbbreviationTable, surface: &str) -> Option<&'t String> {
    table.get(surface).or_else(|| {
        let lower = surface.to_lowercase();
        table
            .iter()
            .find(|(k, _)| k.to_lowercase() == lower)
            .map(|(_, v)| v)
    })
}

/// Marks tokens found in `table` as abbreviations carrying their expansion.
/// Surfaces and spans are left untouched.
pub fn expand_abbreviations(tokens: Vec<Token>, table: &AbbreviationTable) -> Vec<Token> {
    if table.is_empty() {
        return tokens;
    }
    tokens
        .into_iter()
        .map(|mut tok| {
            if tok.kind == TokenKind::Word {
                if let Some(expansion) = lookup(table, &tok.surface) {
                    tok.kind = TokenKind::Abbreviation;
                    tok.payload.set("expansion", expansion.clone());
                }
            }
            tok
        })
        .collect()
}
