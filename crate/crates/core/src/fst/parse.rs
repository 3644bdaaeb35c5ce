//! Surface syntax: `(compile-regexp EXPR :name N :output-desc (build-item ...)
//! :prefix T :suffix NIL :longest T)`.

use crate::feature::{AgrConstraint, AliasTable};
use crate::item::normalize_type;
use crate::morphology::Pos;
use crate::scanner::TokenKind;
use crate::sexpr::{read_all, Sexpr, SexprKind, SourcePos};

use super::expr::{EdgeTest, FstDef, MatchParams, OutputDesc, RegexExpr};
use super::FstError;

pub(crate) struct Ctx<'a> {
    pub path: &'a str,
    pub aliases: &'a AliasTable,
}

impl Ctx<'_> {
    pub fn err<T>(&self, at: &Sexpr, message: impl Into<String>) -> Result<T, FstError> {
        Err(self.error(at.pos, message))
    }

    pub fn error(&self, pos: SourcePos, message: impl Into<String>) -> FstError {
        FstError::Parse {
            path: self.path.to_string(),
            pos,
            message: message.into(),
        }
    }

    fn name(&self, s: &Sexpr) -> Result<String, FstError> {
        match s.as_name() {
            Some(n) if !n.is_empty() => Ok(n.to_string()),
            _ => self.err(s, format!("expected a name, found `{s}`")),
        }
    }

    fn var(&self, s: Option<&Sexpr>, head: &Sexpr) -> Result<Option<String>, FstError> {
        match s {
            None => Ok(None),
            Some(v) if v.as_sym().is_some() => Ok(Some(self.name(v)?)),
            Some(v) => self.err(v, format!("expected a variable, found `{v}`")),
        }
        .and_then(|v| if v.as_deref() == Some("") { self.err(head, "empty variable") } else { Ok(v) })
    }

    fn pos(&self, s: &Sexpr) -> Result<Pos, FstError> {
        let n = self.name(s)?;
        Pos::parse(&n).map_or_else(|| self.err(s, format!("unknown part of speech `{n}`")), Ok)
    }

    fn strings(&self, s: &Sexpr) -> Result<Vec<String>, FstError> {
        match &s.kind {
            SexprKind::List(xs) => xs.iter().map(|x| self.name(x).map(|n| n.to_lowercase())).collect(),
            _ => Ok(vec![self.name(s)?.to_lowercase()]),
        }
    }

    fn types(&self, s: &Sexpr) -> Result<Vec<String>, FstError> {
        Ok(self.strings(s)?.iter().map(|t| normalize_type(t)).collect())
    }

    fn count(&self, s: &Sexpr) -> Result<usize, FstError> {
        match s.as_int() {
            Some(n) if n >= 0 => Ok(n as usize),
            _ => self.err(s, format!("expected a count, found `{s}`")),
        }
    }
}

fn arity(ctx: &Ctx, form: &Sexpr, args: &[Sexpr], min: usize, max: usize) -> Result<(), FstError> {
    if args.len() < min || args.len() > max {
        let head = form.as_list().and_then(|l| l.first()).map(|h| h.to_string()).unwrap_or_default();
        return ctx.err(form, format!("`{head}` takes {min} to {max} arguments, found {}", args.len()));
    }
    Ok(())
}

pub(crate) fn parse_expr(ctx: &Ctx, s: &Sexpr) -> Result<RegexExpr, FstError> {
    let Some(items) = s.as_list() else {
        return ctx.err(s, format!("expected an expression, found `{s}`"));
    };
    let Some(head) = items.first().and_then(Sexpr::as_sym) else {
        return ctx.err(s, "expression must start with an operator symbol");
    };
    let args = &items[1..];
    let head = head.to_ascii_lowercase();
    let edge = |test: EdgeTest, var: Option<String>| Ok(RegexExpr::Edge(super::BasicEdge { test, var }));
    match head.as_str() {
        ":conc" => Ok(RegexExpr::Conc(args.iter().map(|a| parse_expr(ctx, a)).collect::<Result<_, _>>()?)),
        ":alt" => {
            arity(ctx, s, args, 1, usize::MAX)?;
            Ok(RegexExpr::Alt(args.iter().map(|a| parse_expr(ctx, a)).collect::<Result<_, _>>()?))
        }
        ":star" => {
            arity(ctx, s, args, 1, 1)?;
            Ok(RegexExpr::Star(Box::new(parse_expr(ctx, &args[0])?)))
        }
        ":star<=n" | ":star≤n" => {
            arity(ctx, s, args, 2, 2)?;
            let max = ctx.count(&args[1])?;
            Ok(RegexExpr::BoundedStar(Box::new(parse_expr(ctx, &args[0])?), 0, max))
        }
        ":repeat" => {
            arity(ctx, s, args, 3, 3)?;
            let (min, max) = (ctx.count(&args[1])?, ctx.count(&args[2])?);
            if min > max {
                return ctx.err(s, format!("repeat bounds {min} > {max}"));
            }
            Ok(RegexExpr::BoundedStar(Box::new(parse_expr(ctx, &args[0])?), min, max))
        }
        ":mona-cat" => {
            arity(ctx, s, args, 1, 2)?;
            edge(EdgeTest::MonaCat { pos: ctx.pos(&args[0])? }, ctx.var(args.get(1), s)?)
        }
        ":mona-cat-type" => {
            arity(ctx, s, args, 1, 2)?;
            let spec = args[0].as_list().filter(|l| l.len() == 3 && l[0].is_sym(":and"));
            let Some(spec) = spec else {
                return ctx.err(&args[0], "expected (:and POS TYPE)");
            };
            edge(
                EdgeTest::MonaCatType {
                    pos: ctx.pos(&spec[1])?,
                    ty: ctx.name(&spec[2])?,
                },
                ctx.var(args.get(1), s)?,
            )
        }
        ":mona-cat-unify" => {
            arity(ctx, s, args, 3, 4)?;
            let Some(source) = args[1].as_str() else {
                return ctx.err(&args[1], "expected a constraint string");
            };
            let constraint = AgrConstraint::parse(source, ctx.aliases).map_err(|e| ctx.error(args[1].pos, e.to_string()))?;
            edge(
                EdgeTest::MonaCatUnify {
                    pos: ctx.pos(&args[0])?,
                    constraint,
                    source: source.to_string(),
                    agr: ctx.name(&args[2])?,
                },
                ctx.var(args.get(3), s)?,
            )
        }
        ":var" => {
            arity(ctx, s, args, 1, 1)?;
            edge(EdgeTest::Var, ctx.var(args.first(), s)?)
        }
        ":current-pos" => {
            arity(ctx, s, args, 1, 1)?;
            edge(EdgeTest::CurrentPos, ctx.var(args.first(), s)?)
        }
        ":seek" => {
            arity(ctx, s, args, 1, 2)?;
            edge(EdgeTest::Seek { grammar: ctx.name(&args[0])? }, ctx.var(args.get(1), s)?)
        }
        ":token" => {
            arity(ctx, s, args, 1, 2)?;
            edge(EdgeTest::Token { surfaces: ctx.strings(&args[0])? }, ctx.var(args.get(1), s)?)
        }
        ":token-kind" => {
            arity(ctx, s, args, 1, 2)?;
            let n = ctx.name(&args[0])?;
            let Some(kind) = TokenKind::from_name(&n) else {
                return ctx.err(&args[0], format!("unknown token kind `{n}`"));
            };
            edge(EdgeTest::TokenKind { kind }, ctx.var(args.get(1), s)?)
        }
        ":fragment" => {
            arity(ctx, s, args, 1, 2)?;
            edge(EdgeTest::Fragment { types: ctx.types(&args[0])? }, ctx.var(args.get(1), s)?)
        }
        ":ignore-token" => {
            arity(ctx, s, args, 1, 2)?;
            edge(EdgeTest::IgnoreToken { surfaces: ctx.strings(&args[0])? }, ctx.var(args.get(1), s)?)
        }
        ":ignore-fragment" => {
            let rest = match args.first() {
                Some(k) if k.is_sym(":type") => &args[1..],
                _ => args,
            };
            arity(ctx, s, rest, 1, 2)?;
            edge(EdgeTest::IgnoreFragment { types: ctx.types(&rest[0])? }, ctx.var(rest.get(1), s)?)
        }
        ":add-nec" | ":add-opt" => {
            arity(ctx, s, args, 4, 4)?;
            let types = ctx.types(&args[0])?;
            let slot = normalize_type(&ctx.name(&args[1])?);
            let set = ctx.name(&args[2])?;
            let var = ctx.var(args.get(3), s)?;
            let test = if head == ":add-nec" {
                EdgeTest::AddNec { types, slot, set }
            } else {
                EdgeTest::AddOpt { types, slot, set }
            };
            edge(test, var)
        }
        other => ctx.err(s, format!("unknown operator `{other}`")),
    }
}

/// Collects `:key value` pairs after the positional arguments.
pub(crate) fn keywords<'a>(ctx: &Ctx, form: &Sexpr, items: &'a [Sexpr]) -> Result<Vec<(String, &'a Sexpr)>, FstError> {
    let mut out = Vec::new();
    let mut it = items.iter();
    while let Some(k) = it.next() {
        let Some(key) = k.as_sym().filter(|s| s.starts_with(':')) else {
            return ctx.err(k, format!("expected a keyword, found `{k}`"));
        };
        let Some(v) = it.next() else {
            return ctx.err(form, format!("keyword `{key}` has no value"));
        };
        out.push((key.to_ascii_lowercase(), v));
    }
    Ok(out)
}

pub(crate) fn parse_output_desc(ctx: &Ctx, s: &Sexpr) -> Result<OutputDesc, FstError> {
    let items = s.as_list().unwrap_or_default();
    if items.first().is_none_or(|h| !h.is_sym("build-item")) {
        return ctx.err(s, "expected (build-item ...)");
    }
    let mut desc = OutputDesc {
        ty: String::new(),
        start: None,
        end: None,
        args: Vec::new(),
    };
    for (k, v) in keywords(ctx, s, &items[1..])? {
        match k.as_str() {
            ":type" => desc.ty = normalize_type(&ctx.name(v)?),
            ":start" => desc.start = Some(ctx.name(v)?),
            ":end" => desc.end = Some(ctx.name(v)?),
            ":out" => {
                desc.args = match v.as_list() {
                    Some([h, rest @ ..]) if h.is_sym("list") => rest.iter().map(|a| ctx.name(a)).collect::<Result<_, _>>()?,
                    Some([]) => Vec::new(),
                    _ if v.as_bool() == Some(false) => Vec::new(),
                    _ => vec![ctx.name(v)?],
                }
            }
            _ => return ctx.err(v, format!("unknown build-item keyword `{k}`")),
        }
    }
    if desc.ty.is_empty() {
        return ctx.err(s, "build-item needs :type");
    }
    Ok(desc)
}

fn flag(ctx: &Ctx, v: &Sexpr) -> Result<bool, FstError> {
    v.as_bool().map_or_else(|| ctx.err(v, format!("expected T or NIL, found `{v}`")), Ok)
}

fn parse_def(ctx: &Ctx, form: &Sexpr) -> Result<FstDef, FstError> {
    let items = form.as_list().unwrap_or_default();
    if items.first().is_none_or(|h| !h.is_sym("compile-regexp")) || items.len() < 2 {
        return ctx.err(form, "expected (compile-regexp EXPR :name ... :output-desc ...)");
    }
    let expr = parse_expr(ctx, &items[1])?;
    let mut name = None;
    let mut output = None;
    let mut params = MatchParams::default();
    for (k, v) in keywords(ctx, form, &items[2..])? {
        match k.as_str() {
            ":name" => name = Some(ctx.name(v)?),
            ":output-desc" => output = Some(parse_output_desc(ctx, v)?),
            ":prefix" => params.prefix = flag(ctx, v)?,
            ":suffix" => params.suffix = flag(ctx, v)?,
            ":longest" => params.longest = flag(ctx, v)?,
            _ => return ctx.err(v, format!("unknown keyword `{k}`")),
        }
    }
    let Some(name) = name else {
        return ctx.err(form, "missing :name");
    };
    let Some(output) = output else {
        return ctx.err(form, format!("grammar `{name}` is missing :output-desc"));
    };
    Ok(FstDef {
        name,
        expr,
        output,
        params,
        source: form.pos,
    })
}

/// Parses every definition in a grammar file. A syntax error in one form
/// does not hide errors in later forms.
pub fn parse_grammar_file(src: &str, path: &str, aliases: &AliasTable) -> (Vec<FstDef>, Vec<FstError>) {
    let ctx = Ctx { path, aliases };
    let forms = match read_all(src) {
        Ok(f) => f,
        Err(e) => return (Vec::new(), vec![ctx.error(e.pos, e.message)]),
    };
    let mut defs = Vec::new();
    let mut errors = Vec::new();
    for form in &forms {
        match parse_def(&ctx, form) {
            Ok(d) => defs.push(d),
            Err(e) => errors.push(e),
        }
    }
    (defs, errors)
}

/// Parses a single expression, e.g. for tests and tools.
pub fn parse_regex(src: &str, aliases: &AliasTable) -> Result<RegexExpr, FstError> {
    let ctx = Ctx { path: "<expr>", aliases };
    let forms = read_all(src).map_err(|e| ctx.error(e.pos, e.message))?;
    match forms.as_slice() {
        [one] => parse_expr(&ctx, one),
        _ => Err(ctx.error(SourcePos::default(), "expected exactly one expression")),
    }
}
