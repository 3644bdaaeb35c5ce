use std::collections::HashMap;

use crate::morphology::{Morphology, Pos};
use crate::scanner::Token;

use super::rules::{apply_filter_rules, Direction, FilterRule, RuleTest};
use super::{apply_case_rules, tag_tokens, TaggedToken};

type Context = (Direction, RuleTest);

fn contexts(sentence: &[TaggedToken], i: usize) -> Vec<Context> {
    let mut out = Vec::new();
    for dir in [Direction::Left, Direction::Right] {
        let j = match dir {
            Direction::Left if i > 0 => i - 1,
            Direction::Right if i + 1 < sentence.len() => i + 1,
            _ => continue,
        };
        if let Some(p) = sentence[j].chosen() {
            out.push((dir, RuleTest::Pos(p)));
        }
        out.push((dir, RuleTest::Word(sentence[j].token.surface.to_lowercase())));
    }
    out
}

struct Candidate {
    rule: FilterRule,
    order: usize,
}

/// Scores a rule `from -> to / ctx` by how much more often `to` appears
/// unambiguously in `ctx` than any competitor, with competitors scaled by
/// relative corpus frequency.
fn score(
    rule: &FilterRule,
    freq: &HashMap<Pos, usize>,
    incount: &HashMap<&Context, HashMap<Pos, usize>>,
) -> f64 {
    let ctx = (rule.dir, rule.test.clone());
    let counts = incount.get(&ctx);
    let inc = |p: Pos| counts.and_then(|c| c.get(&p)).copied().unwrap_or(0) as f64;
    let fy = freq.get(&rule.to).copied().unwrap_or(0) as f64;
    let worst = rule
        .from
        .iter()
        .filter(|z| **z != rule.to)
        .filter_map(|z| {
            let fz = freq.get(z).copied().unwrap_or(0);
            (fz > 0).then(|| fy / fz as f64 * inc(*z))
        })
        .fold(0.0, f64::max);
    inc(rule.to) - worst
}

/// Greedy learning over already tagged sentences.
pub fn learn_from_tagged(mut corpus: Vec<Vec<TaggedToken>>, max_rules: usize) -> Vec<FilterRule> {
    let mut learned: Vec<FilterRule> = Vec::new();
    while learned.len() < max_rules {
        let mut freq: HashMap<Pos, usize> = HashMap::new();
        let mut in_ctx: Vec<(Context, Pos)> = Vec::new();
        let mut candidates: Vec<Candidate> = Vec::new();
        let mut seen: HashMap<FilterRule, usize> = HashMap::new();
        for sentence in &corpus {
            for (i, t) in sentence.iter().enumerate() {
                if !t.token.is_word() {
                    continue;
                }
                if let Some(p) = t.chosen() {
                    *freq.entry(p).or_default() += 1;
                    for ctx in contexts(sentence, i) {
                        in_ctx.push((ctx, p));
                    }
                } else if t.is_ambiguous() {
                    for (dir, test) in contexts(sentence, i) {
                        for &to in &t.tags {
                            let rule = FilterRule {
                                from: t.tags.clone(),
                                to,
                                dir,
                                test: test.clone(),
                            };
                            if learned.contains(&rule) || seen.contains_key(&rule) {
                                continue;
                            }
                            seen.insert(rule.clone(), candidates.len());
                            let order = candidates.len();
                            candidates.push(Candidate { rule, order });
                        }
                    }
                }
            }
        }
        let mut incount: HashMap<&Context, HashMap<Pos, usize>> = HashMap::new();
        for (ctx, p) in &in_ctx {
            *incount.entry(ctx).or_default().entry(*p).or_default() += 1;
        }
        let mut best: Option<(f64, &Candidate)> = None;
        for c in &candidates {
            let s = score(&c.rule, &freq, &incount);
            if s <= 0.0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bs, bc)) => s > bs || (s == bs && (c.order, c.rule.to_string()) < (bc.order, bc.rule.to_string())),
            };
            if better {
                best = Some((s, c));
            }
        }
        let Some((_, c)) = best else { break };
        let rule = c.rule.clone();
        corpus = corpus
            .into_iter()
            .map(|s| apply_filter_rules(s, std::slice::from_ref(&rule)))
            .collect();
        learned.push(rule);
    }
    learned
}

/// Learns up to `max_rules` filter rules from raw sentences.
pub fn learn_filter_rules(corpus: &[Vec<Token>], morph: &Morphology, max_rules: usize) -> Vec<FilterRule> {
    let tagged = corpus
        .iter()
        .map(|s| apply_case_rules(tag_tokens(s, morph)))
        .collect();
    learn_from_tagged(tagged, max_rules)
}
