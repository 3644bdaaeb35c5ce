use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::morphology::Pos;

use super::TaggedToken;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Left,
    Right,
}

/// Condition on the immediate neighbor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTest {
    /// The neighbor is unambiguously tagged with this pos.
    Pos(Pos),
    /// The neighbor's lowercased surface equals this string.
    Word(String),
}

/// Narrow a token whose tag set is exactly `from` down to `to` when the
/// neighbor in `dir` satisfies `test`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FilterRule {
    pub from: BTreeSet<Pos>,
    pub to: Pos,
    pub dir: Direction,
    pub test: RuleTest,
}

impl FilterRule {
    pub(crate) fn context_holds(&self, sentence: &[TaggedToken], i: usize) -> bool {
        let j = match self.dir {
            Direction::Left if i > 0 => i - 1,
            Direction::Right if i + 1 < sentence.len() => i + 1,
            _ => return false,
        };
        let n = &sentence[j];
        match &self.test {
            RuleTest::Pos(p) => n.chosen() == Some(*p),
            RuleTest::Word(w) => n.token.surface.to_lowercase() == *w,
        }
    }

    pub fn fires(&self, sentence: &[TaggedToken], i: usize) -> bool {
        sentence[i].tags == self.from && self.context_holds(sentence, i)
    }
}

impl fmt::Display for FilterRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let from: Vec<&str> = self.from.iter().map(|p| p.as_str()).collect();
        let dir = match self.dir {
            Direction::Left => "left",
            Direction::Right => "right",
        };
        let (test, value) = match &self.test {
            RuleTest::Pos(p) => ("pos", p.as_str().to_string()),
            RuleTest::Word(w) => ("word", w.clone()),
        };
        write!(f, "FROM={{{}}} TO={} DIR={dir} TEST={test} VALUE={value}", from.join(","), self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}:{line}: {message}")]
pub struct RuleError {
    pub path: String,
    pub line: usize,
    pub message: String,
}

fn parse_rule(line: &str) -> Result<FilterRule, String> {
    let mut from = None;
    let mut to = None;
    let mut dir = None;
    let mut test = None;
    let mut value = None;
    for field in line.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, found `{field}`"))?;
        let pos = |s: &str| Pos::parse(s).ok_or_else(|| format!("unknown pos `{s}`"));
        match k {
            "FROM" => {
                let inner = v
                    .strip_prefix('{')
                    .and_then(|v| v.strip_suffix('}'))
                    .ok_or("FROM must be a braced set")?;
                from = Some(inner.split(',').map(pos).collect::<Result<BTreeSet<_>, _>>()?);
            }
            "TO" => to = Some(pos(v)?),
            "DIR" => {
                dir = Some(match v {
                    "left" => Direction::Left,
                    "right" => Direction::Right,
                    _ => return Err(format!("unknown direction `{v}`")),
                })
            }
            "TEST" => test = Some(v.to_string()),
            "VALUE" => value = Some(v.to_string()),
            _ => return Err(format!("unknown key `{k}`")),
        }
    }
    let (Some(from), Some(to), Some(dir), Some(test), Some(value)) = (from, to, dir, test, value) else {
        return Err("rule needs FROM, TO, DIR, TEST and VALUE".into());
    };
    if !from.contains(&to) || from.len() < 2 {
        return Err("TO must be one of at least two FROM tags".into());
    }
    let test = match test.as_str() {
        "pos" => RuleTest::Pos(Pos::parse(&value).ok_or_else(|| format!("unknown pos `{value}`"))?),
        "word" => RuleTest::Word(value),
        _ => return Err(format!("unknown test `{test}`")),
    };
    Ok(FilterRule { from, to, dir, test })
}

pub fn parse_rules(src: &str, path: &str) -> Result<Vec<FilterRule>, RuleError> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, l)| {
            parse_rule(l).map_err(|message| RuleError {
                path: path.to_string(),
                line: n + 1,
                message,
            })
        })
        .collect()
}

pub fn load_rules(path: &Path) -> Result<Vec<FilterRule>, RuleError> {
    let src = std::fs::read_to_string(path).map_err(|e| RuleError {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    parse_rules(&src, &path.display().to_string())
}

pub fn render_rules(rules: &[FilterRule]) -> String {
    rules.iter().map(|r| format!("{r}\n")).collect()
}

/// Applies each rule in order, sweeping the sentence left to right.
pub fn apply_filter_rules(mut sentence: Vec<TaggedToken>, rules: &[FilterRule]) -> Vec<TaggedToken> {
    for rule in rules {
        for i in 0..sentence.len() {
            if rule.fires(&sentence, i) {
                let keep = [rule.to].into_iter().collect();
                sentence[i].restrict(&keep);
            }
        }
    }
    sentence
}
