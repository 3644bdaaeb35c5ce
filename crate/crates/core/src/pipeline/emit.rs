use std::cmp::Reverse;

use serde::Serialize;

use crate::avs::AttrValue;
use crate::combiner::Template;
use crate::kb::CachedItem;
use crate::morphology::Pos;
use crate::scanner::{Span, TokenKind};

use super::RunResult;

#[derive(Serialize)]
struct JsonToken<'a> {
    surface: &'a str,
    kind: TokenKind,
    span: Span,
    tags: Vec<Pos>,
    #[serde(skip_serializing_if = "AttrValue::is_empty")]
    payload: &'a AttrValue,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    id: &'a str,
    tokens: Vec<JsonToken<'a>>,
    items: &'a [CachedItem],
    templates: &'a [Template],
}

fn json_doc(r: &RunResult) -> JsonDoc<'_> {
    JsonDoc {
        id: &r.id,
        tokens: r
            .tokens
            .iter()
            .map(|t| JsonToken {
                surface: &t.token.surface,
                kind: t.token.kind,
                span: t.token.span,
                tags: t.tags.iter().copied().collect(),
                payload: &t.token.payload,
            })
            .collect(),
        items: r.items(),
        templates: &r.templates,
    }
}

/// Pretty JSON with a fixed key order; timings are left out so equal input
/// gives byte-equal output.
pub fn emit_json(result: &RunResult) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&json_doc(result)).expect("run results always serialize");
    out.push(b'\n');
    out
}

/// A bracketed region of the text: code points `start..end` of item `item`.
/// Crossing items are cut into several pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HtmlPiece {
    pub start: usize,
    pub end: usize,
    pub item: usize,
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 < b.1 && b.0 < a.1 && !(a.0 <= b.0 && b.1 <= a.1) && !(b.0 <= a.0 && a.1 <= b.1)
}

/// Well-nested pieces for every item with a non-empty text span. Longer
/// items are placed first (earlier start on ties); a later item crossing a
/// placed piece is split at that piece's boundary.
pub fn html_pieces(result: &RunResult) -> Vec<HtmlPiece> {
    let mut spans: Vec<(usize, (usize, usize))> = result
        .items()
        .iter()
        .filter_map(|c| result.char_span(c.item.start, c.item.end).map(|s| (c.id, s)))
        .filter(|(_, (s, e))| s < e)
        .collect();
    spans.sort_by_key(|(id, (s, e))| (Reverse(e - s), *s, *id));
    let mut placed: Vec<HtmlPiece> = Vec::new();
    for (id, span) in spans {
        let mut segs = vec![span];
        loop {
            let mut split = false;
            let mut next = Vec::with_capacity(segs.len());
            for seg in segs {
                match placed.iter().find(|p| crosses(seg, (p.start, p.end))) {
                    Some(p) => {
                        let cut = if seg.0 < p.start { p.start } else { p.end };
                        next.push((seg.0, cut));
                        next.push((cut, seg.1));
                        split = true;
                    }
                    None => next.push(seg),
                }
            }
            segs = next;
            if !split {
                break;
            }
        }
        placed.extend(segs.into_iter().map(|(start, end)| HtmlPiece { start, end, item: id }));
    }
    placed
}

fn escape_into(out: &mut String, c: char) {
    match c {
        '&' => out.push_str("&amp;"),
        '<' => out.push_str("&lt;"),
        '>' => out.push_str("&gt;"),
        '"' => out.push_str("&quot;"),
        '\'' => out.push_str("&#39;"),
        c => out.push(c),
    }
}

/// The text with a typed bracket span around every item, e.g.
/// `<span class="ie" data-type="np" data-item="0">[np Die Gesellschaft]</span>`.
/// Without items this is the escaped text.
pub fn emit_html(result: &RunResult) -> String {
    let chars: Vec<char> = result.text.chars().collect();
    let mut pieces = html_pieces(result);
    // Outer pieces open first.
    pieces.sort_by_key(|p| (p.start, Reverse(p.end), p.item));
    let ty = |id: usize| {
        let mut t = String::new();
        if let Some(c) = result.cache.get(id) {
            c.item.ty.chars().for_each(|c| escape_into(&mut t, c));
        }
        t
    };
    let mut out = String::with_capacity(chars.len() * 2);
    let mut open: Vec<HtmlPiece> = Vec::new();
    let mut next = 0;
    for (i, c) in chars.iter().enumerate().chain(std::iter::once((chars.len(), &'\0'))) {
        while open.last().is_some_and(|p| p.end == i) {
            open.pop();
            out.push_str("]</span>");
        }
        while next < pieces.len() && pieces[next].start == i {
            let p = pieces[next];
            out.push_str(&format!(
                "<span class=\"ie\" data-type=\"{t}\" data-item=\"{id}\">[{t} ",
                t = ty(p.item),
                id = p.item
            ));
            open.push(p);
            next += 1;
        }
        if i < chars.len() {
            escape_into(&mut out, *c);
        }
    }
    out
}

/// Self-contained page: the marked-up text plus the JSON representation
/// that the `data-item` ids refer to.
pub fn emit_html_document(result: &RunResult) -> String {
    let json = String::from_utf8(emit_json(result)).expect("json is utf-8").replace("</", "<\\/");
    let mut title = String::new();
    result.id.chars().for_each(|c| escape_into(&mut title, c));
    format!(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{title}</title>\n<style>\n\
         body {{ font-family: sans-serif; }}\n\
         pre {{ white-space: pre-wrap; line-height: 1.8; }}\n\
         span.ie {{ border-bottom: 1px solid #888; }}\n\
         span.ie span.ie {{ border-bottom-color: #c60; }}\n\
         </style>\n</head>\n<body>\n<pre>{}</pre>\n\
         <script type=\"application/json\" id=\"ie-data\">\n{json}</script>\n</body>\n</html>\n",
        emit_html(result)
    )
}
