use std::fmt;

use crate::feature::AgrConstraint;
use crate::morphology::Pos;
use crate::scanner::TokenKind;
use crate::sexpr::SourcePos;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EdgeTest {
    /// The item has a reading with this part of speech.
    MonaCat { pos: Pos },
    /// As `MonaCat`, and the reading's lexical type is subsumed by `ty`.
    MonaCatType { pos: Pos, ty: String },
    /// As `MonaCat`, and the reading's inflection satisfies `constraint`
    /// under the agreement environment named `agr`.
    MonaCatUnify { pos: Pos, constraint: AgrConstraint, source: String, agr: String },
    /// Consumes any single item.
    Var,
    /// Consumes nothing; binds the current position.
    CurrentPos,
    /// Sub-grammar invocation, expanded at compile time.
    Seek { grammar: String },
    /// A token whose lowercased surface is listed.
    Token { surfaces: Vec<String> },
    /// A token of the given scanner kind.
    TokenKind { kind: TokenKind },
    /// A previously extracted item of one of these types, consumed whole.
    Fragment { types: Vec<String> },
    IgnoreToken { surfaces: Vec<String> },
    IgnoreFragment { types: Vec<String> },
    AddNec { types: Vec<String>, slot: String, set: String },
    AddOpt { types: Vec<String>, slot: String, set: String },
}

impl EdgeTest {
    pub fn name(&self) -> &'static str {
        match self {
            EdgeTest::MonaCat { .. } => "mona-cat",
            EdgeTest::MonaCatType { .. } => "mona-cat-type",
            EdgeTest::MonaCatUnify { .. } => "mona-cat-unify",
            EdgeTest::Var => "var",
            EdgeTest::CurrentPos => "current-pos",
            EdgeTest::Seek { .. } => "seek",
            EdgeTest::Token { .. } => "token",
            EdgeTest::TokenKind { .. } => "token-kind",
            EdgeTest::Fragment { .. } => "fragment",
            EdgeTest::IgnoreToken { .. } => "ignore-token",
            EdgeTest::IgnoreFragment { .. } => "ignore-fragment",
            EdgeTest::AddNec { .. } => "add-nec",
            EdgeTest::AddOpt { .. } => "add-opt",
        }
    }
}

/// `⟨name, test, variable⟩`; the name is implied by the test kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicEdge {
    pub test: EdgeTest,
    pub var: Option<String>,
}

impl BasicEdge {
    pub fn new(test: EdgeTest, var: Option<&str>) -> Self {
        BasicEdge {
            test,
            var: var.map(str::to_string),
        }
    }

    pub fn name(&self) -> &'static str {
        self.test.name()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexExpr {
    Conc(Vec<RegexExpr>),
    Alt(Vec<RegexExpr>),
    Star(Box<RegexExpr>),
    BoundedStar(Box<RegexExpr>, usize, usize),
    Edge(BasicEdge),
}

impl RegexExpr {
    pub fn edge(test: EdgeTest, var: Option<&str>) -> Self {
        RegexExpr::Edge(BasicEdge::new(test, var))
    }

    /// Pre-order walk over all edges.
    pub fn edges(&self) -> Vec<&BasicEdge> {
        let mut out = Vec::new();
        self.collect_edges(&mut out);
        out
    }

    fn collect_edges<'a>(&'a self, out: &mut Vec<&'a BasicEdge>) {
        match self {
            RegexExpr::Conc(xs) | RegexExpr::Alt(xs) => xs.iter().for_each(|x| x.collect_edges(out)),
            RegexExpr::Star(x) | RegexExpr::BoundedStar(x, _, _) => x.collect_edges(out),
            RegexExpr::Edge(e) => out.push(e),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RegexExpr::Conc(xs) | RegexExpr::Alt(xs) => 1 + xs.iter().map(Self::depth).max().unwrap_or(0),
            RegexExpr::Star(x) | RegexExpr::BoundedStar(x, _, _) => 1 + x.depth(),
            RegexExpr::Edge(_) => 0,
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[String]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x:?}")?;
    }
    f.write_str(")")
}

fn write_types(f: &mut fmt::Formatter<'_>, xs: &[String]) -> fmt::Result {
    let v: Vec<String> = xs.iter().map(|t| format!(":{t}")).collect();
    write!(f, "({})", v.join(" "))
}

impl fmt::Display for BasicEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(:{}", self.name())?;
        match &self.test {
            EdgeTest::MonaCat { pos } => write!(f, " {:?}", pos.as_str())?,
            EdgeTest::MonaCatType { pos, ty } => write!(f, " (:and {:?} {ty:?})", pos.as_str())?,
            EdgeTest::MonaCatUnify { pos, source, agr, .. } => write!(f, " {:?} {source:?} {agr}", pos.as_str())?,
            EdgeTest::Var | EdgeTest::CurrentPos => {}
            EdgeTest::Seek { grammar } => write!(f, " {grammar}")?,
            EdgeTest::Token { surfaces } | EdgeTest::IgnoreToken { surfaces } => {
                f.write_str(" ")?;
                write_list(f, surfaces)?
            }
            EdgeTest::TokenKind { kind } => write!(f, " {:?}", kind.name())?,
            EdgeTest::Fragment { types } => {
                f.write_str(" ")?;
                write_types(f, types)?
            }
            EdgeTest::IgnoreFragment { types } => {
                f.write_str(" :type ")?;
                write_types(f, types)?
            }
            EdgeTest::AddNec { types, slot, set } | EdgeTest::AddOpt { types, slot, set } => {
                f.write_str(" ")?;
                write_types(f, types)?;
                write!(f, " :{slot} {set}")?
            }
        }
        if let Some(v) = &self.var {
            write!(f, " {v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for RegexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexExpr::Conc(xs) | RegexExpr::Alt(xs) => {
                f.write_str(if matches!(self, RegexExpr::Conc(_)) { "(:conc" } else { "(:alt" })?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
            RegexExpr::Star(x) => write!(f, "(:star {x})"),
            RegexExpr::BoundedStar(x, 0, max) => write!(f, "(:star<=n {x} {max})"),
            RegexExpr::BoundedStar(x, min, max) => write!(f, "(:repeat {x} {min} {max})"),
            RegexExpr::Edge(e) => write!(f, "{e}"),
        }
    }
}

/// `(build-item :type T [:start v] [:end v] :out ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutputDesc {
    pub ty: String,
    pub start: Option<String>,
    pub end: Option<String>,
    pub args: Vec<String>,
}

impl OutputDesc {
    pub fn new(ty: &str, args: &[&str]) -> Self {
        OutputDesc {
            ty: crate::item::normalize_type(ty),
            start: None,
            end: None,
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Every variable the description reads.
    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.start.iter().chain(&self.end).chain(&self.args).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatchParams {
    /// Succeed on a match of a prefix of the remaining stream.
    pub prefix: bool,
    /// Allow the match to begin after the starting position.
    pub suffix: bool,
    /// Prefer the longest (otherwise the shortest) match.
    pub longest: bool,
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams {
            prefix: true,
            suffix: false,
            longest: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FstDef {
    pub name: String,
    pub expr: RegexExpr,
    pub output: OutputDesc,
    pub params: MatchParams,
    pub source: SourcePos,
}

impl FstDef {
    pub fn new(name: &str, expr: RegexExpr, output: OutputDesc) -> Self {
        FstDef {
            name: name.to_string(),
            expr,
            output,
            params: MatchParams::default(),
            source: SourcePos::default(),
        }
    }

    pub fn with_params(mut self, params: MatchParams) -> Self {
        self.params = params;
        self
    }
}
