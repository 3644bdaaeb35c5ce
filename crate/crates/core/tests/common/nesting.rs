//! Checks that marked-up HTML is a well-formed forest of typed brackets over
//! the original text.

use std::collections::BTreeMap;

/// A bracket recovered from the markup: item id, type and the code-point
/// range of the enclosed text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub item: usize,
    pub ty: String,
    pub start: usize,
    pub end: usize,
}

fn unescape(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
        .replace("&amp;", "&")
}

fn attr<'a>(tag: &'a str, name: &str) -> Option<&'a str> {
    let key = format!("{name}=\"");
    let at = tag.find(&key)? + key.len();
    let len = tag[at..].find('"')?;
    Some(&tag[at..at + len])
}

/// Parses the output of `emit_html`. Returns the plain text and the
/// brackets, or a description of the first structural error.
pub fn parse(html: &str) -> Result<(String, Vec<Bracket>), String> {
    let mut text = String::new();
    let mut chars = 0usize;
    let mut stack: Vec<Bracket> = Vec::new();
    let mut done = Vec::new();
    let mut rest = html;
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix("<span") {
            let close = after.find('>').ok_or("unterminated <span")?;
            let tag = &after[..close];
            let ty = unescape(attr(tag, "data-type").ok_or("span without data-type")?);
            let item = attr(tag, "data-item")
                .and_then(|v| v.parse().ok())
                .ok_or("span without numeric data-item")?;
            rest = &after[close + 1..];
            let label = format!("[{ty} ");
            rest = rest
                .strip_prefix(label.as_str())
                .ok_or_else(|| format!("span for item {item} does not start with `{label}`"))?;
            stack.push(Bracket {
                item,
                ty,
                start: chars,
                end: chars,
            });
        } else if let Some(after) = rest.strip_prefix("]</span>") {
            let mut b = stack.pop().ok_or("closing bracket without opening")?;
            b.end = chars;
            done.push(b);
            rest = after;
        } else if rest.starts_with("</span>") {
            return Err("</span> without `]`".into());
        } else if rest.starts_with('<') {
            return Err(format!("unexpected markup at `{}`", &rest[..rest.len().min(20)]));
        } else {
            let next = rest.find(['<', ']']).unwrap_or(rest.len());
            let (chunk, tail) = if next == 0 { rest.split_at(1) } else { rest.split_at(next) };
            let plain = unescape(chunk);
            chars += plain.chars().count();
            text.push_str(&plain);
            rest = tail;
        }
    }
    if let Some(b) = stack.last() {
        return Err(format!("bracket for item {} never closed", b.item));
    }
    Ok((text, done))
}

/// Brackets never cross.
pub fn well_nested(brackets: &[Bracket]) -> bool {
    brackets.iter().all(|a| {
        brackets.iter().all(|b| {
            let disjoint = a.end <= b.start || b.end <= a.start;
            let a_in_b = b.start <= a.start && a.end <= b.end;
            let b_in_a = a.start <= b.start && b.end <= a.end;
            disjoint || a_in_b || b_in_a
        })
    })
}

/// Per item, the sorted pieces merged into contiguous ranges.
pub fn coverage(brackets: &[Bracket]) -> BTreeMap<usize, Vec<(usize, usize)>> {
    let mut by_item: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for b in brackets {
        by_item.entry(b.item).or_default().push((b.start, b.end));
    }
    for ranges in by_item.values_mut() {
        ranges.sort();
        let mut merged: Vec<(usize, usize)> = Vec::new();
        for r in ranges.drain(..) {
            match merged.last_mut() {
                Some(last) if last.1 == r.0 => last.1 = r.1,
                _ => merged.push(r),
            }
        }
        *ranges = merged;
    }
    by_item
}
