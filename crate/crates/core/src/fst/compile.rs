use std::collections::{BTreeMap, BTreeSet};

use crate::item::TextItem;

use super::env::{BindingEnv, Bound, Match};
use super::expr::{BasicEdge, EdgeTest, FstDef, MatchParams, OutputDesc, RegexExpr};
use super::stream::Stream;
use super::FstError;

/// Upper bound on interpreter steps for one start position. Pathological
/// grammars stop exploring instead of running away.
pub const STEP_LIMIT: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Inst {
    Edge(BasicEdge),
    CurrentPos(Option<String>),
    Split(usize, usize),
    Jmp(usize),
    Fail,
    Enter,
    Exit { scope: usize, var: Option<String> },
    Match,
}

/// A grammar flattened into a backtracking program, with sub-grammars
/// inlined between scope markers.
#[derive(Debug, Clone)]
pub struct CompiledFst {
    pub name: String,
    pub output: OutputDesc,
    pub params: MatchParams,
    prog: Vec<Inst>,
    scopes: Vec<OutputDesc>,
}

fn nullable(expr: &RegexExpr, registry: &BTreeMap<String, FstDef>) -> bool {
    match expr {
        RegexExpr::Conc(xs) => xs.iter().all(|x| nullable(x, registry)),
        RegexExpr::Alt(xs) => xs.iter().any(|x| nullable(x, registry)),
        RegexExpr::Star(_) => true,
        RegexExpr::BoundedStar(x, min, _) => *min == 0 || nullable(x, registry),
        RegexExpr::Edge(e) => match &e.test {
            EdgeTest::CurrentPos => true,
            EdgeTest::Seek { grammar } => registry.get(grammar).is_some_and(|d| nullable(&d.expr, registry)),
            _ => false,
        },
    }
}

struct Compiler<'a> {
    registry: &'a BTreeMap<String, FstDef>,
    prog: Vec<Inst>,
    scopes: Vec<OutputDesc>,
    path: Vec<String>,
}

impl Compiler<'_> {
    fn push(&mut self, i: Inst) -> usize {
        self.prog.push(i);
        self.prog.len() - 1
    }

    fn grammar(&self) -> String {
        self.path.last().cloned().unwrap_or_default()
    }

    fn emit(&mut self, expr: &RegexExpr) -> Result<(), FstError> {
        match expr {
            RegexExpr::Conc(xs) => xs.iter().try_for_each(|x| self.emit(x))?,
            RegexExpr::Alt(xs) if xs.is_empty() => {
                self.push(Inst::Fail);
            }
            RegexExpr::Alt(xs) => {
                let mut exits = Vec::new();
                for (i, x) in xs.iter().enumerate() {
                    if i + 1 == xs.len() {
                        self.emit(x)?;
                        break;
                    }
                    let split = self.push(Inst::Split(0, 0));
                    self.emit(x)?;
                    exits.push(self.push(Inst::Jmp(0)));
                    self.prog[split] = Inst::Split(split + 1, self.prog.len());
                }
                let end = self.prog.len();
                for j in exits {
                    self.prog[j] = Inst::Jmp(end);
                }
            }
            RegexExpr::Star(x) => {
                if nullable(x, self.registry) {
                    return Err(FstError::NullableStar { grammar: self.grammar() });
                }
                let split = self.push(Inst::Split(0, 0));
                self.emit(x)?;
                self.push(Inst::Jmp(split));
                self.prog[split] = Inst::Split(split + 1, self.prog.len());
            }
            RegexExpr::BoundedStar(x, min, max) => {
                if min > max {
                    return Err(FstError::BadBounds {
                        grammar: self.grammar(),
                        min: *min,
                        max: *max,
                    });
                }
                for _ in 0..*min {
                    self.emit(x)?;
                }
                let mut splits = Vec::new();
                for _ in *min..*max {
                    splits.push(self.push(Inst::Split(0, 0)));
                    self.emit(x)?;
                }
                let end = self.prog.len();
                for s in splits {
                    self.prog[s] = Inst::Split(s + 1, end);
                }
            }
            RegexExpr::Edge(e) => match &e.test {
                EdgeTest::CurrentPos => {
                    self.push(Inst::CurrentPos(e.var.clone()));
                }
                EdgeTest::Seek { grammar } => {
                    let Some(def) = self.registry.get(grammar) else {
                        return Err(FstError::UnresolvedSeek {
                            grammar: self.grammar(),
                            target: grammar.clone(),
                        });
                    };
                    if let Some(at) = self.path.iter().position(|g| g == grammar) {
                        let mut cycle = self.path[at..].to_vec();
                        cycle.push(grammar.clone());
                        return Err(FstError::Recursion(cycle));
                    }
                    check_output(def)?;
                    self.path.push(grammar.clone());
                    self.push(Inst::Enter);
                    self.emit(&def.expr)?;
                    self.scopes.push(def.output.clone());
                    let scope = self.scopes.len() - 1;
                    self.push(Inst::Exit { scope, var: e.var.clone() });
                    self.path.pop();
                }
                _ => {
                    self.push(Inst::Edge(e.clone()));
                }
            },
        }
        Ok(())
    }
}

fn check_output(def: &FstDef) -> Result<(), FstError> {
    let bound: BTreeSet<&str> = def.expr.edges().iter().filter_map(|e| e.var.as_deref()).collect();
    for v in def.output.vars() {
        if !bound.contains(v) {
            return Err(FstError::UnboundOutputVar {
                grammar: def.name.clone(),
                var: v.to_string(),
            });
        }
    }
    Ok(())
}

/// Compiles `def`, inlining every `:seek` from `registry`.
pub fn compile(def: &FstDef, registry: &BTreeMap<String, FstDef>) -> Result<CompiledFst, FstError> {
    check_output(def)?;
    let mut c = Compiler {
        registry,
        prog: Vec::new(),
        scopes: Vec::new(),
        path: vec![def.name.clone()],
    };
    c.emit(&def.expr)?;
    c.push(Inst::Match);
    Ok(CompiledFst {
        name: def.name.clone(),
        output: def.output.clone(),
        params: def.params,
        prog: c.prog,
        scopes: c.scopes,
    })
}

#[derive(Clone)]
struct Frame {
    env: BindingEnv,
    start: usize,
}

/// Start and end of an item: the `:start`/`:end` positions when bound,
/// otherwise the matched span.
pub(crate) fn item_span(desc: &OutputDesc, start: usize, end: usize, env: &BindingEnv) -> (usize, usize) {
    let pos_of = |var: &Option<String>| {
        var.as_deref().and_then(|v| {
            env.get(v).iter().rev().find_map(|b| match b {
                Bound::Pos(p) => Some(*p),
                _ => None,
            })
        })
    };
    (pos_of(&desc.start).unwrap_or(start), pos_of(&desc.end).unwrap_or(end))
}

impl CompiledFst {
    pub fn instruction_count(&self) -> usize {
        self.prog.len()
    }

    /// All `(end, env)` pairs reachable from `start`.
    fn execute(&self, stream: &dyn Stream, start: usize, seed: &BindingEnv) -> BTreeSet<(usize, BindingEnv)> {
        let mut results = BTreeSet::new();
        let mut stack = vec![(
            0usize,
            start,
            vec![Frame {
                env: seed.clone(),
                start,
            }],
        )];
        let mut steps = 0usize;
        let mut outcomes = Vec::new();
        while let Some((mut pc, mut pos, mut frames)) = stack.pop() {
            loop {
                steps += 1;
                if steps > STEP_LIMIT {
                    return results;
                }
                match &self.prog[pc] {
                    Inst::Match => {
                        let env = frames.pop().expect("root frame").env;
                        results.insert((pos, env));
                        break;
                    }
                    Inst::Fail => break,
                    Inst::Jmp(t) => pc = *t,
                    Inst::Split(a, b) => {
                        stack.push((*b, pos, frames.clone()));
                        pc = *a;
                    }
                    Inst::CurrentPos(var) => {
                        if let Some(v) = var {
                            frames.last_mut().unwrap().env.push(v, Bound::Pos(pos));
                        }
                        pc += 1;
                    }
                    Inst::Enter => {
                        frames.push(Frame {
                            env: BindingEnv::new(),
                            start: pos,
                        });
                        pc += 1;
                    }
                    Inst::Exit { scope, var } => {
                        let frame = frames.pop().expect("scope frame");
                        let desc = &self.scopes[*scope];
                        let (s, e) = item_span(desc, frame.start, pos, &frame.env);
                        let item = stream.build(desc, s, e, &frame.env);
                        if let Some(v) = var {
                            frames.last_mut().unwrap().env.push(v, Bound::Item(item));
                        }
                        // Lookahead past an explicit `:end` is not consumed.
                        if desc.end.is_some() {
                            pos = e;
                        }
                        pc += 1;
                    }
                    Inst::Edge(edge) => {
                        outcomes.clear();
                        stream.step(edge, pos, &frames.last().unwrap().env, &mut outcomes);
                        let Some((first_pos, first_env)) = outcomes.first().cloned() else {
                            break;
                        };
                        for (p, env) in outcomes.drain(1..).rev() {
                            let mut fs = frames.clone();
                            fs.last_mut().unwrap().env = env;
                            stack.push((pc + 1, p, fs));
                        }
                        frames.last_mut().unwrap().env = first_env;
                        pos = first_pos;
                        pc += 1;
                    }
                }
            }
        }
        results
    }

    fn select(&self, start: usize, len: usize, found: BTreeSet<(usize, BindingEnv)>) -> Vec<Match> {
        let found: Vec<_> = found.into_iter().filter(|(end, _)| self.params.prefix || *end == len).collect();
        let best = if self.params.longest {
            found.iter().map(|(e, _)| *e).max()
        } else {
            found.iter().map(|(e, _)| *e).min()
        };
        let Some(best) = best else { return Vec::new() };
        found
            .into_iter()
            .filter(|(e, _)| *e == best)
            .map(|(end, env)| Match { start, end, env })
            .collect()
    }

    /// Matches starting at `at` (or anywhere after it when the grammar
    /// allows suffix matching), one preferred end per start.
    pub fn run(&self, stream: &dyn Stream, at: usize) -> Vec<Match> {
        let len = stream.len();
        if at > len {
            return Vec::new();
        }
        let last = if self.params.suffix { len } else { at };
        (at..=last)
            .flat_map(|s| self.select(s, len, self.execute(stream, s, &BindingEnv::new())))
            .collect()
    }

    /// Matches anchored exactly at `at`, ignoring the suffix parameter.
    pub fn run_anchored(&self, stream: &dyn Stream, at: usize) -> Vec<Match> {
        self.run_seeded(stream, at, &BindingEnv::new())
    }

    /// Anchored run starting from the bindings in `seed`.
    pub fn run_seeded(&self, stream: &dyn Stream, at: usize, seed: &BindingEnv) -> Vec<Match> {
        if at > stream.len() {
            return Vec::new();
        }
        self.select(at, stream.len(), self.execute(stream, at, seed))
    }

    pub fn build(&self, stream: &dyn Stream, m: &Match) -> TextItem {
        let (s, e) = item_span(&self.output, m.start, m.end, &m.env);
        stream.build(&self.output, s, e, &m.env)
    }

    /// Left-to-right sweep: emit the items of a successful non-empty match
    /// and continue after it, otherwise advance by one.
    pub fn scan_all(&self, stream: &dyn Stream) -> Vec<TextItem> {
        let mut out: Vec<TextItem> = Vec::new();
        let mut pos = 0;
        while pos < stream.len() {
            let matches = self.run_anchored(stream, pos);
            match matches.first().map(|m| m.end) {
                Some(end) if end > pos => {
                    for m in &matches {
                        let item = self.build(stream, m);
                        if !out.contains(&item) {
                            out.push(item);
                        }
                    }
                    pos = end;
                }
                _ => pos += 1,
            }
        }
        out
    }
}
