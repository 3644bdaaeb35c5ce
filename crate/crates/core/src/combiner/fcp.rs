use std::collections::{BTreeMap, BTreeSet};

use crate::feature::{AliasTable, ValueSet};
use crate::fst::{
    compile, keywords, parse_expr, parse_output_desc, CompiledFst, EdgeTest, FstDef, FstError, MatchParams, OutputDesc,
    ParseCtx, RegexExpr,
};
use crate::item::normalize_type;
use crate::sexpr::{read_all, Sexpr, SourcePos};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FcpError {
    #[error(transparent)]
    Syntax(#[from] FstError),
    #[error("pattern `{fcp}`: {message}")]
    Invalid { fcp: String, message: String },
}

/// One slot of a constraint set: `(:np (1 1) (nom-val (1 1)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintEntry {
    pub slot: String,
    pub min: usize,
    pub max: usize,
    /// Required case values and the alias they were written as.
    pub agr: Option<(String, ValueSet)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    pub name: String,
    pub necessary: bool,
    pub entries: Vec<ConstraintEntry>,
}

/// A fragment combination pattern.
#[derive(Debug, Clone)]
pub struct Fcp {
    pub name: String,
    pub anchor_var: Option<String>,
    pub sets: Vec<ConstraintSet>,
    pub left_expr: RegexExpr,
    pub right_expr: RegexExpr,
    pub left: CompiledFst,
    pub right: CompiledFst,
    pub output: OutputDesc,
    pub stop_markers: BTreeSet<String>,
    /// Lexemes this pattern is attached to, besides lexicon attachments.
    pub anchors: Vec<String>,
    pub source: SourcePos,
}

pub const DEFAULT_STOP_MARKERS: [&str; 5] = [".", "!", "?", ";", "paragraph-break"];

impl Fcp {
    pub fn entry(&self, set: &str, slot: &str) -> Option<&ConstraintEntry> {
        self.sets
            .iter()
            .find(|s| s.name == set)
            .and_then(|s| s.entries.iter().find(|e| e.slot == slot))
    }

    /// Passive variant: subject and object slots trade places and the
    /// demoted agent becomes optional.
    pub fn passive(&self) -> Fcp {
        let mut p = self.clone();
        let has = |s: &str| p.sets.iter().flat_map(|c| &c.entries).any(|e| e.slot == s);
        if !(has("subj") && has("obj")) {
            return p;
        }
        for set in &mut p.sets {
            for e in &mut set.entries {
                if e.slot == "subj" {
                    e.slot = "obj".into();
                } else if e.slot == "obj" {
                    e.slot = "subj".into();
                    e.min = 0;
                }
            }
        }
        p
    }
}

fn ctx_err(ctx: &ParseCtx, at: &Sexpr, message: impl Into<String>) -> FcpError {
    FcpError::Syntax(ctx.error(at.pos, message))
}

fn bounds(ctx: &ParseCtx, s: &Sexpr) -> Result<(usize, usize), FcpError> {
    match s.as_list() {
        Some([a, b]) => match (a.as_int(), b.as_int()) {
            (Some(min), Some(max)) if 0 <= min && min <= max => Ok((min as usize, max as usize)),
            _ => Err(ctx_err(ctx, s, format!("bad bounds `{s}`"))),
        },
        _ => Err(ctx_err(ctx, s, format!("expected (MIN MAX), found `{s}`"))),
    }
}

fn parse_entry(ctx: &ParseCtx, s: &Sexpr) -> Result<ConstraintEntry, FcpError> {
    let items = s.as_list().unwrap_or_default();
    let Some(slot) = items.first().and_then(Sexpr::as_name) else {
        return Err(ctx_err(ctx, s, format!("expected (:slot (MIN MAX) ...), found `{s}`")));
    };
    let (min, max) = bounds(ctx, items.get(1).ok_or_else(|| ctx_err(ctx, s, "missing bounds"))?)?;
    let agr = match items.get(2) {
        None => None,
        Some(a) => {
            let inner = a.as_list().unwrap_or_default();
            let Some(alias) = inner.first().and_then(Sexpr::as_name) else {
                return Err(ctx_err(ctx, a, format!("expected (ALIAS (MIN MAX)), found `{a}`")));
            };
            if let Some(b) = inner.get(1) {
                bounds(ctx, b)?;
            }
            let set = ctx.aliases.resolve(alias);
            if set.is_empty() {
                return Err(ctx_err(ctx, a, format!("unknown value set `{alias}`")));
            }
            Some((alias.to_string(), set))
        }
    };
    if items.len() > 3 {
        return Err(ctx_err(ctx, s, "too many elements in constraint entry"));
    }
    Ok(ConstraintEntry {
        slot: normalize_type(slot),
        min,
        max,
        agr,
    })
}

fn side_fst(name: &str, expr: &RegexExpr) -> Result<CompiledFst, FstError> {
    let def = FstDef::new(name, expr.clone(), OutputDesc::new("fcp-side", &[])).with_params(MatchParams {
        prefix: true,
        suffix: false,
        longest: true,
    });
    compile(&def, &BTreeMap::new())
}

fn parse_one(ctx: &ParseCtx, form: &Sexpr) -> Result<Fcp, FcpError> {
    let items = form.as_list().unwrap_or_default();
    if items.first().is_none_or(|h| !h.is_sym("compile-anchored-regexp")) || items.len() < 3 {
        return Err(ctx_err(ctx, form, "expected (compile-anchored-regexp HEADER BODY :name ...)"));
    }
    let mut anchor_var = None;
    let mut sets = Vec::new();
    for decl in items[1].as_list().unwrap_or_default() {
        let d = decl.as_list().unwrap_or_default();
        if d.len() != 3 || !d[0].is_sym(":set") {
            return Err(ctx_err(ctx, decl, format!("expected (:set VALUE NAME), found `{decl}`")));
        }
        let name = d[2].as_name().ok_or_else(|| ctx_err(ctx, &d[2], "expected a name"))?.to_string();
        match d[1].as_list() {
            Some(entries) if entries.first().is_none_or(|e| e.as_list().is_some()) => {
                let entries = entries.iter().map(|e| parse_entry(ctx, e)).collect::<Result<Vec<_>, _>>()?;
                sets.push(ConstraintSet {
                    name,
                    necessary: false,
                    entries,
                });
            }
            _ => anchor_var = Some(name),
        }
    }
    let mut left_expr = RegexExpr::Conc(Vec::new());
    let mut right_expr = RegexExpr::Conc(Vec::new());
    for side in items[2].as_list().unwrap_or_default() {
        match side.as_list() {
            Some([h, e]) if h.is_sym(":dl-list-left") => left_expr = parse_expr(ctx, e)?,
            Some([h, e]) if h.is_sym(":dl-list-right") => right_expr = parse_expr(ctx, e)?,
            _ => return Err(ctx_err(ctx, side, format!("expected (:dl-list-left EXPR) or (:dl-list-right EXPR), found `{side}`"))),
        }
    }
    let mut name = None;
    let mut output = None;
    let mut stop_markers = None;
    let mut anchors = Vec::new();
    for (k, v) in keywords(ctx, form, &items[3..])? {
        let strings = |v: &Sexpr| -> Result<Vec<String>, FcpError> {
            v.as_list()
                .unwrap_or_default()
                .iter()
                .map(|x| x.as_name().map(str::to_string).ok_or_else(|| ctx_err(ctx, x, "expected a string")))
                .collect()
        };
        match k.as_str() {
            ":name" => name = Some(v.as_name().ok_or_else(|| ctx_err(ctx, v, "expected a name"))?.to_string()),
            ":output-desc" => output = Some(parse_output_desc(ctx, v)?),
            ":stop-markers" => stop_markers = Some(strings(v)?.into_iter().collect::<BTreeSet<_>>()),
            ":anchors" => anchors = strings(v)?.into_iter().map(|s| s.to_lowercase()).collect(),
            _ => return Err(ctx_err(ctx, v, format!("unknown keyword `{k}`"))),
        }
    }
    let name = name.ok_or_else(|| ctx_err(ctx, form, "missing :name"))?;
    let output = output.ok_or_else(|| ctx_err(ctx, form, format!("pattern `{name}` is missing :output-desc")))?;
    let invalid = |message: String| FcpError::Invalid {
        fcp: name.clone(),
        message,
    };

    let mut ignored = BTreeSet::new();
    let mut bound: BTreeSet<String> = anchor_var.iter().cloned().collect();
    for e in left_expr.edges().into_iter().chain(right_expr.edges()) {
        bound.extend(e.var.clone());
        match &e.test {
            EdgeTest::IgnoreToken { surfaces } => ignored.extend(surfaces.iter().cloned()),
            EdgeTest::IgnoreFragment { .. } | EdgeTest::Var | EdgeTest::CurrentPos => {}
            EdgeTest::AddNec { slot, set, .. } | EdgeTest::AddOpt { slot, set, .. } => {
                let Some(cs) = sets.iter_mut().find(|s| s.name == *set) else {
                    return Err(invalid(format!("{} names unknown constraint set `{set}`", e.name())));
                };
                if !cs.entries.iter().any(|x| x.slot == *slot) {
                    return Err(invalid(format!("{} names unknown slot `{slot}` in set `{set}`", e.name())));
                }
                if matches!(e.test, EdgeTest::AddNec { .. }) {
                    cs.necessary = true;
                }
            }
            _ => return Err(invalid(format!("edge `{}` is not allowed in a combination pattern", e.name()))),
        }
    }
    for s in &mut sets {
        s.necessary |= s.name == "nec";
        let mut seen = BTreeSet::new();
        for e in &s.entries {
            if !seen.insert(&e.slot) {
                return Err(invalid(format!("slot `{}` appears twice in set `{}`", e.slot, s.name)));
            }
        }
    }
    for v in output.vars() {
        if !bound.contains(v) {
            return Err(invalid(format!("output variable `{v}` is never bound")));
        }
    }
    let stop_markers = stop_markers.unwrap_or_else(|| {
        DEFAULT_STOP_MARKERS
            .iter()
            .map(|s| s.to_string())
            .filter(|s| !ignored.contains(s))
            .collect()
    });
    let left = side_fst(&format!("{name}:left"), &left_expr).map_err(|e| invalid(e.to_string()))?;
    let right = side_fst(&format!("{name}:right"), &right_expr).map_err(|e| invalid(e.to_string()))?;
    Ok(Fcp {
        name,
        anchor_var,
        sets,
        left_expr,
        right_expr,
        left,
        right,
        output,
        stop_markers,
        anchors,
        source: form.pos,
    })
}

/// Parses every `(compile-anchored-regexp ...)` form; errors are collected
/// per form.
pub fn parse_fcp_file(src: &str, path: &str, aliases: &AliasTable) -> (Vec<Fcp>, Vec<FcpError>) {
    let ctx = ParseCtx { path, aliases };
    let forms = match read_all(src) {
        Ok(f) => f,
        Err(e) => return (Vec::new(), vec![FcpError::Syntax(ctx.error(e.pos, e.message))]),
    };
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for f in &forms {
        match parse_one(&ctx, f) {
            Ok(p) => out.push(p),
            Err(e) => errors.push(e),
        }
    }
    (out, errors)
}
