//! Output construction: `build-item` dispatches on the item type to a
//! registered constructor, falling back to a generic one.

use std::collections::BTreeMap;
use std::fmt;

use crate::avs::{AttrValue, Value};
use crate::feature::AliasTable;
use crate::item::{normalize_type, TextItem};
use crate::morphology::transliterate;
use crate::tagger::TaggedToken;

use super::env::{BindingEnv, Bound};
use super::expr::OutputDesc;

/// Lookups a constructor may need besides the bindings.
pub trait BuildCtx {
    fn token(&self, index: usize) -> Option<&TaggedToken>;
    fn aliases(&self) -> &AliasTable;
}

pub struct BuildInput<'a> {
    pub start: usize,
    pub end: usize,
    /// Output arguments in declaration order; unbound ones are empty.
    pub args: Vec<(&'a str, &'a [Bound])>,
    pub env: &'a BindingEnv,
    pub ctx: &'a dyn BuildCtx,
}

impl BuildInput<'_> {
    pub fn arg(&self, i: usize) -> &[Bound] {
        self.args.get(i).map_or(&[], |(_, b)| *b)
    }

    pub fn surface(&self, b: &Bound) -> Option<String> {
        match b {
            Bound::At { index, .. } => self.ctx.token(*index).map(|t| t.token.surface.clone()),
            _ => None,
        }
    }

    /// Transliterated lemma of the reading the edge matched, or of the
    /// lowercased surface for unknown words.
    pub fn lemma(&self, b: &Bound) -> Option<String> {
        let Bound::At { index, pos } = b else { return None };
        let tok = self.ctx.token(*index)?;
        let lemma = tok
            .readings
            .iter()
            .find(|r| pos.is_none_or(|p| r.pos == p))
            .map(|r| r.lemma.clone())
            .unwrap_or_else(|| tok.token.surface.to_lowercase());
        Some(transliterate(&lemma))
    }

    pub fn lexical_type(&self, b: &Bound) -> Option<String> {
        let Bound::At { index, pos } = b else { return None };
        let tok = self.ctx.token(*index)?;
        tok.readings
            .iter()
            .find(|r| pos.is_none_or(|p| r.pos == p))
            .map(|r| r.lexical_type.clone())
    }

    /// Structured content of a binding: an item's output or a token payload.
    pub fn content(&self, b: &Bound) -> Option<AttrValue> {
        match b {
            Bound::Item(item) => Some(item.out.clone()),
            Bound::At { index, .. } => self
                .ctx
                .token(*index)
                .map(|t| t.token.payload.clone())
                .filter(|p| !p.is_empty()),
            Bound::Pos(_) => None,
        }
    }

    pub fn value(&self, b: &Bound) -> Value {
        match b {
            Bound::At { .. } => Value::Str(self.surface(b).unwrap_or_default()),
            Bound::Pos(p) => Value::Int(*p as i64),
            Bound::Item(item) => Value::Av(item.to_av()),
        }
    }

    /// The case agreement collected so far, rendered through the alias table.
    pub fn case_agreement(&self) -> Option<String> {
        let envs = self.env.agr.get("agr").into_iter().chain(self.env.agr.values());
        envs.flat_map(|e| e.values())
            .find(|b| b.attr == "case")
            .map(|b| self.ctx.aliases().render(&b.values))
    }
}

pub type BuilderFn = fn(&BuildInput) -> AttrValue;

#[derive(Clone)]
pub struct BuilderRegistry {
    builders: BTreeMap<String, BuilderFn>,
}

impl fmt::Debug for BuilderRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.builders.keys()).finish()
    }
}

impl Default for BuilderRegistry {
    fn default() -> Self {
        let mut r = BuilderRegistry::empty();
        r.register("np", build_np);
        r.register("time-expr", merge_contents);
        r.register("time-expr-vorfield", build_vorfield);
        r.register("time", build_time);
        r.register("date-day", build_date_day);
        r.register("date-time", build_date_time);
        r.register("pp", build_interval);
        r.register("list", build_list);
        r.register("name-np", build_name);
        r.register("location", build_location);
        r
    }
}

impl BuilderRegistry {
    /// A registry where every type uses the generic constructor.
    pub fn empty() -> Self {
        BuilderRegistry {
            builders: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, ty: &str, f: BuilderFn) {
        self.builders.insert(normalize_type(ty), f);
    }

    pub fn contains(&self, ty: &str) -> bool {
        self.builders.contains_key(&normalize_type(ty))
    }

    pub fn build(&self, desc: &OutputDesc, start: usize, end: usize, env: &BindingEnv, ctx: &dyn BuildCtx) -> TextItem {
        let input = BuildInput {
            start,
            end,
            args: desc.args.iter().map(|a| (a.as_str(), env.get(a))).collect(),
            env,
            ctx,
        };
        let f = self.builders.get(&desc.ty).copied().unwrap_or(build_generic);
        TextItem::new(&desc.ty, start, end, f(&input))
    }
}

/// `{out: [arg ...]}`; an unbound argument is the empty list (NIL), a
/// single binding its value, several bindings a list.
pub fn build_generic(input: &BuildInput) -> AttrValue {
    let args = input
        .args
        .iter()
        .map(|(_, bs)| match bs {
            [one] => input.value(one),
            many => Value::List(many.iter().map(|b| input.value(b)).collect()),
        })
        .collect();
    AttrValue::new().with("out", Value::List(args))
}

fn build_np(input: &BuildInput) -> AttrValue {
    let mut sem = AttrValue::new();
    if let Some(head) = input.arg(2).last().and_then(|b| input.lemma(b)) {
        sem.set("head", head);
    }
    let mods: Vec<Value> = input.arg(1).iter().filter_map(|b| input.lemma(b)).map(Value::Str).collect();
    if !mods.is_empty() {
        sem.set("mods", Value::List(mods));
    }
    if let Some(q) = input.arg(0).first().and_then(|b| input.lexical_type(b)) {
        sem.set("quantifier", q);
    }
    let mut out = AttrValue::new().with("sem", sem);
    if let Some(agr) = input.case_agreement() {
        out.set("agr", agr);
    }
    out
}

fn merge_contents(input: &BuildInput) -> AttrValue {
    let mut out = AttrValue::new();
    for (_, bs) in &input.args {
        for b in bs.iter() {
            if let Some(c) = input.content(b) {
                out.merge(&c);
            }
        }
    }
    out
}

fn build_vorfield(input: &BuildInput) -> AttrValue {
    let mut out = AttrValue::new();
    for (key, i) in [("time-rel", 0), ("time-prep", 1)] {
        if let Some(l) = input.arg(i).last().and_then(|b| input.lemma(b)) {
            out.set(key, l);
        }
    }
    out
}

fn time_of(input: &BuildInput, b: &Bound) -> Option<(i64, i64)> {
    let c = input.content(b)?;
    let hour = c.get_int("hour")?;
    let minute = c.get_int("minute").or_else(|| c.get_int("min"))?;
    Some((hour, minute))
}

fn build_time(input: &BuildInput) -> AttrValue {
    match input.arg(0).first().and_then(|b| time_of(input, b)) {
        Some((h, m)) => AttrValue::new().with("minute", m).with("hour", h),
        None => AttrValue::new(),
    }
}

fn build_date_day(input: &BuildInput) -> AttrValue {
    match input.arg(0).first().and_then(|b| input.content(b)).and_then(|c| c.get_int("value")) {
        Some(d) => AttrValue::new().with("day", d),
        None => AttrValue::new(),
    }
}

fn build_date_time(input: &BuildInput) -> AttrValue {
    let mut out = AttrValue::new();
    if let Some(d) = input.arg(0).first().and_then(|b| input.content(b)) {
        for (src, dst) in [("day", "day"), ("month", "month"), ("mon", "month"), ("year", "year")] {
            if let Some(v) = d.get_int(src) {
                out.set(dst, v);
            }
        }
    }
    if let Some((h, m)) = input.arg(1).first().and_then(|b| time_of(input, b)) {
        out.set("hour", h);
        out.set("minute", m);
    }
    out
}

fn build_interval(input: &BuildInput) -> AttrValue {
    let mut out = AttrValue::new();
    for (key, i) in [("from", 0), ("to", 1)] {
        if let Some(c) = input.arg(i).last().and_then(|b| input.content(b)) {
            out.set(key, c);
        }
    }
    out
}

fn build_list(input: &BuildInput) -> AttrValue {
    let items = input
        .args
        .iter()
        .flat_map(|(_, bs)| bs.iter())
        .map(|b| input.value(b))
        .collect();
    AttrValue::new().with("items", Value::List(items))
}

fn surfaces(input: &BuildInput, bs: &[Bound]) -> Option<String> {
    let words: Vec<String> = bs.iter().filter_map(|b| input.surface(b)).collect();
    (!words.is_empty()).then(|| words.join(" "))
}

/// `(list title name)`: titles and name parts joined by spaces.
fn build_name(input: &BuildInput) -> AttrValue {
    let mut out = AttrValue::new();
    if let Some(t) = surfaces(input, input.arg(0)) {
        out.set("title", t);
    }
    if let Some(n) = surfaces(input, input.arg(1)) {
        out.set("name", n);
    }
    out
}

/// `(list prep place)`.
fn build_location(input: &BuildInput) -> AttrValue {
    let mut out = AttrValue::new();
    if let Some(p) = input.arg(0).last().and_then(|b| input.lemma(b)) {
        out.set("prep", p);
    }
    if let Some(n) = surfaces(input, input.arg(1)) {
        out.set("place", n);
    }
    out
}
