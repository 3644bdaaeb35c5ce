//! Set-based reference interpreter for grammars built from token, var,
//! part-of-speech and position edges.

use std::collections::BTreeSet;

use ie_core::fst::{BindingEnv, Bound, EdgeTest, Match, MatchParams, RegexExpr};
use ie_core::tagger::TaggedToken;

type States = BTreeSet<(usize, BindingEnv)>;

fn bound(env: &BindingEnv, var: &Option<String>, b: Bound) -> BindingEnv {
    let mut e = env.clone();
    if let Some(v) = var {
        e.vars.entry(v.clone()).or_default().push(b);
    }
    e
}

fn edge(test: &EdgeTest, var: &Option<String>, toks: &[TaggedToken], pos: usize, env: &BindingEnv) -> States {
    let mut out = States::new();
    if let EdgeTest::CurrentPos = test {
        out.insert((pos, bound(env, var, Bound::Pos(pos))));
        return out;
    }
    let Some(tok) = toks.get(pos) else { return out };
    let hit = match test {
        EdgeTest::Var => Some(None),
        EdgeTest::Token { surfaces } => surfaces.contains(&tok.token.surface.to_lowercase()).then_some(None),
        EdgeTest::MonaCat { pos: p } => tok.tags.contains(p).then_some(Some(*p)),
        other => panic!("reference interpreter does not handle {}", other.name()),
    };
    if let Some(p) = hit {
        out.insert((pos + 1, bound(env, var, Bound::At { index: pos, pos: p })));
    }
    out
}

fn step(expr: &RegexExpr, toks: &[TaggedToken], from: &States) -> States {
    from.iter().flat_map(|(p, e)| eval(expr, toks, *p, e)).collect()
}

/// Every `(end, env)` reachable by matching `expr` from `pos`.
pub fn eval(expr: &RegexExpr, toks: &[TaggedToken], pos: usize, env: &BindingEnv) -> States {
    let start: States = [(pos, env.clone())].into();
    match expr {
        RegexExpr::Edge(e) => edge(&e.test, &e.var, toks, pos, env),
        RegexExpr::Conc(xs) => xs.iter().fold(start, |acc, x| step(x, toks, &acc)),
        RegexExpr::Alt(xs) => xs.iter().flat_map(|x| eval(x, toks, pos, env)).collect(),
        RegexExpr::Star(x) => {
            let mut all = start.clone();
            let mut frontier = start;
            while !frontier.is_empty() {
                let next = step(x, toks, &frontier);
                frontier = next.difference(&all).cloned().collect();
                all.extend(frontier.iter().cloned());
            }
            all
        }
        RegexExpr::BoundedStar(x, min, max) => {
            let mut cur = start;
            for _ in 0..*min {
                cur = step(x, toks, &cur);
            }
            let mut all = cur.clone();
            for _ in *min..*max {
                cur = step(x, toks, &cur);
                all.extend(cur.iter().cloned());
            }
            all
        }
    }
}

/// Matches from `at` under `params`, one preferred end per start.
pub fn run(expr: &RegexExpr, params: MatchParams, toks: &[TaggedToken], at: usize) -> BTreeSet<Match> {
    let len = toks.len();
    let last = if params.suffix { len } else { at };
    let mut out = BTreeSet::new();
    for s in at..=last.min(len) {
        let found: Vec<(usize, BindingEnv)> = eval(expr, toks, s, &BindingEnv::new())
            .into_iter()
            .filter(|(e, _)| params.prefix || *e == len)
            .collect();
        let ends = found.iter().map(|(e, _)| *e);
        let best = if params.longest { ends.max() } else { ends.min() };
        if let Some(best) = best {
            out.extend(
                found
                    .into_iter()
                    .filter(|(e, _)| *e == best)
                    .map(|(end, env)| Match { start: s, end, env }),
            );
        }
    }
    out
}
