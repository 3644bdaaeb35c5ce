use std::collections::BTreeMap;

use crate::feature::{apply_agr, AliasTable, FeatureStructure, TypeLattice};
use crate::item::TextItem;
use crate::tagger::TaggedToken;

use super::build::{BuildCtx, BuilderRegistry};
use super::env::{BindingEnv, Bound};
use super::expr::{BasicEdge, EdgeTest, OutputDesc};

/// What the matcher runs over. Positions are element indices.
pub trait Stream {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every way the consuming edge can succeed at `pos`, as
    /// `(next position, extended env)`.
    fn step(&self, edge: &BasicEdge, pos: usize, env: &BindingEnv, out: &mut Vec<(usize, BindingEnv)>);

    /// Builds the item described by `desc` over `start..end`.
    fn build(&self, desc: &OutputDesc, start: usize, end: usize, env: &BindingEnv) -> TextItem;
}

/// Shared, read-only data consulted by edges and builders.
#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub lattice: TypeLattice,
    pub aliases: AliasTable,
    pub builders: BuilderRegistry,
}

/// Tagged tokens plus previously extracted items, indexed by start.
pub struct TokenStream<'a> {
    tokens: &'a [TaggedToken],
    items: BTreeMap<usize, Vec<&'a TextItem>>,
    res: &'a Resources,
}

impl<'a> TokenStream<'a> {
    pub fn new(tokens: &'a [TaggedToken], res: &'a Resources) -> Self {
        TokenStream {
            tokens,
            items: BTreeMap::new(),
            res,
        }
    }

    pub fn with_items(mut self, items: impl IntoIterator<Item = &'a TextItem>) -> Self {
        for item in items {
            self.items.entry(item.start).or_default().push(item);
        }
        self
    }

    pub fn tokens(&self) -> &'a [TaggedToken] {
        self.tokens
    }
}

fn bind(env: &BindingEnv, var: Option<&String>, value: Bound) -> BindingEnv {
    let mut e = env.clone();
    if let Some(v) = var {
        e.push(v, value);
    }
    e
}

impl Stream for TokenStream<'_> {
    fn len(&self) -> usize {
        self.tokens.len()
    }

    fn step(&self, edge: &BasicEdge, pos: usize, env: &BindingEnv, out: &mut Vec<(usize, BindingEnv)>) {
        let Some(tok) = self.tokens.get(pos) else { return };
        let var = edge.var.as_ref();
        let at = |p| Bound::At { index: pos, pos: p };
        let surface_in = |list: &[String]| list.iter().any(|s| *s == tok.token.surface.to_lowercase());
        match &edge.test {
            EdgeTest::MonaCat { pos: p } => {
                if tok.tags.contains(p) {
                    out.push((pos + 1, bind(env, var, at(Some(*p)))));
                }
            }
            EdgeTest::MonaCatType { pos: p, ty } => {
                let ok = tok.tags.contains(p)
                    && tok
                        .readings
                        .iter()
                        .any(|r| r.pos == *p && self.res.lattice.subsumes(ty, &r.lexical_type).unwrap_or(false));
                if ok {
                    out.push((pos + 1, bind(env, var, at(Some(*p)))));
                }
            }
            EdgeTest::MonaCatUnify { pos: p, constraint, agr, .. } => {
                if !tok.tags.contains(p) {
                    return;
                }
                let empty = FeatureStructure::new();
                let mut bundles: Vec<&FeatureStructure> =
                    tok.readings.iter().filter(|r| r.pos == *p).map(|r| &r.inflection).collect();
                if bundles.is_empty() && tok.is_unknown() {
                    bundles.push(&empty);
                }
                let prior = env.agr.get(agr).cloned().unwrap_or_default();
                let mut seen = Vec::new();
                for fs in bundles {
                    if let Some(next) = apply_agr(constraint, fs, &prior) {
                        if seen.contains(&next) {
                            continue;
                        }
                        seen.push(next.clone());
                        let mut e = bind(env, var, at(Some(*p)));
                        e.agr.insert(agr.clone(), next);
                        out.push((pos + 1, e));
                    }
                }
            }
            EdgeTest::Var => out.push((pos + 1, bind(env, var, at(None)))),
            EdgeTest::Token { surfaces } | EdgeTest::IgnoreToken { surfaces } => {
                if surface_in(surfaces) {
                    out.push((pos + 1, bind(env, var, at(None))));
                }
            }
            EdgeTest::TokenKind { kind } => {
                if tok.token.kind == *kind {
                    out.push((pos + 1, bind(env, var, at(None))));
                }
            }
            EdgeTest::Fragment { types } | EdgeTest::IgnoreFragment { types } => {
                for item in self.items.get(&pos).into_iter().flatten() {
                    if item.end > pos && types.contains(&item.ty) {
                        out.push((item.end, bind(env, var, Bound::Item((*item).clone()))));
                    }
                }
            }
            EdgeTest::CurrentPos | EdgeTest::Seek { .. } | EdgeTest::AddNec { .. } | EdgeTest::AddOpt { .. } => {}
        }
    }

    fn build(&self, desc: &OutputDesc, start: usize, end: usize, env: &BindingEnv) -> TextItem {
        self.res.builders.build(desc, start, end, env, self)
    }
}

impl BuildCtx for TokenStream<'_> {
    fn token(&self, index: usize) -> Option<&TaggedToken> {
        self.tokens.get(index)
    }

    fn aliases(&self) -> &AliasTable {
        &self.res.aliases
    }
}
