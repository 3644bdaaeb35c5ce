//! Knowledge-base loading and validation, the per-document item cache and
//! the pipeline configuration.
//!
//! A knowledge-base directory holds:
//!
//! | file | content |
//! |------|---------|
//! | `lexicon.tsv` | `stem pos class type [fcps [attrs]]` |
//! | `inflection.tsv` | `class ending features` |
//! | `lattice.tsv` | `type supertype` |
//! | `aliases.tsv` | `alias value,value` |
//! | `linkers.tsv` | optional compound linking rules |
//! | `abbreviations.tsv` | optional `short expansion` |
//! | `tagger.rules` | optional learned filter rules |
//! | `grammars/*.fst` | `(compile-regexp ...)` forms |
//! | `fcps/*.fcp` | `(compile-anchored-regexp ...)` forms |

mod cache;
mod config;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use crate::combiner::{parse_fcp_file, Fcp, FcpError};
use crate::feature::{AliasTable, FeatureError, TypeLattice};
use crate::fst::{compile, parse_grammar_file, BuilderRegistry, CompiledFst, EdgeTest, FstDef, FstError, Resources};
use crate::morphology::{parse_inflection, parse_lexicon_entries, LexiconTrie, LinkRule, MorphConfig, Morphology};
use crate::scanner::{parse_abbreviations, AbbreviationTable};
use crate::tagger::{parse_rules, FilterRule};

pub use cache::{CachedItem, ItemCache};
pub use config::{ConfigError, MorphologySection, PipelineConfig, Stage, StageMode, MAX_SWEEPS};

/// One validation problem. `line` is 0 when the problem is not tied to a
/// line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: {}", self.file, self.line, self.message)
        } else {
            write!(f, "{}: {}", self.file, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KbError {
    #[error("knowledge base has {} problem(s):\n{}", .0.len(), .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

impl KbError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            KbError::Invalid(d) => d,
        }
    }
}

/// Raw text of every knowledge source, keyed by the name used in
/// diagnostics.
#[derive(Debug, Clone, Default)]
pub struct KbSources {
    pub lexicon: String,
    pub inflection: String,
    pub lattice: String,
    pub aliases: String,
    pub linkers: Option<String>,
    pub abbreviations: Option<String>,
    pub tagger_rules: Option<String>,
    pub grammars: Vec<(String, String)>,
    pub fcps: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    pub def: FstDef,
    pub fst: CompiledFst,
    pub file: String,
}

/// Everything loaded and validated; immutable afterwards.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub morphology: Morphology,
    pub abbreviations: AbbreviationTable,
    pub resources: Resources,
    pub grammars: BTreeMap<String, Grammar>,
    order: Vec<String>,
    pub fcps: BTreeMap<String, Fcp>,
    /// Lexeme to FCP names declared with `:anchors`.
    pub fcp_anchors: BTreeMap<String, Vec<String>>,
    pub tagger_rules: Vec<FilterRule>,
}

impl KnowledgeBase {
    /// Grammar names in declaration order (files sorted by name).
    pub fn grammar_order(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    pub fn with_morph_config(&self, config: MorphConfig) -> Morphology {
        self.morphology.clone().with_config(config)
    }
}

fn read_optional(path: &Path, diags: &mut Vec<Diagnostic>) -> Option<String> {
    if !path.exists() {
        return None;
    }
    match std::fs::read_to_string(path) {
        Ok(s) => Some(s),
        Err(e) => {
            diags.push(Diagnostic {
                file: path.display().to_string(),
                line: 0,
                message: e.to_string(),
            });
            None
        }
    }
}

/// Files of `root/sub` with extension `ext`, named relative to `root`.
fn read_dir_sorted(root: &Path, sub: &str, ext: &str, diags: &mut Vec<Diagnostic>) -> Vec<(String, String)> {
    let Ok(rd) = std::fs::read_dir(root.join(sub)) else {
        return Vec::new();
    };
    let mut paths: Vec<_> = rd
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .filter_map(|p| {
            let name = format!("{sub}/{}", p.file_name()?.to_string_lossy());
            read_optional(&p, diags).map(|s| (name, s))
        })
        .collect()
}

impl KbSources {
    /// Reads a knowledge-base directory. Missing required files are
    /// reported as diagnostics.
    pub fn read_dir(dir: &Path) -> Result<Self, KbError> {
        let mut diags = Vec::new();
        let mut required = |name: &str| match read_optional(&dir.join(name), &mut diags) {
            Some(s) => s,
            None => {
                diags.push(Diagnostic {
                    file: name.to_string(),
                    line: 0,
                    message: "required file is missing".into(),
                });
                String::new()
            }
        };
        let lexicon = required("lexicon.tsv");
        let inflection = required("inflection.tsv");
        let lattice = required("lattice.tsv");
        let aliases = required("aliases.tsv");
        let sources = KbSources {
            lexicon,
            inflection,
            lattice,
            aliases,
            linkers: read_optional(&dir.join("linkers.tsv"), &mut diags),
            abbreviations: read_optional(&dir.join("abbreviations.tsv"), &mut diags),
            tagger_rules: read_optional(&dir.join("tagger.rules"), &mut diags),
            grammars: read_dir_sorted(dir, "grammars", "fst", &mut diags),
            fcps: read_dir_sorted(dir, "fcps", "fcp", &mut diags),
        };
        if diags.is_empty() {
            Ok(sources)
        } else {
            Err(KbError::Invalid(diags))
        }
    }
}

/// Runs a line parser over each data line on its own so one bad line does
/// not hide the next; returns the source with bad lines blanked.
fn screen_lines(src: &str, file: &str, diags: &mut Vec<Diagnostic>, check: impl Fn(&str) -> Result<(), String>) -> String {
    let mut kept = Vec::new();
    for (n, line) in src.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            kept.push(line);
            continue;
        }
        match check(line) {
            Ok(()) => kept.push(line),
            Err(message) => {
                diags.push(Diagnostic {
                    file: file.to_string(),
                    line: n + 1,
                    message,
                });
                kept.push("");
            }
        }
    }
    kept.join("\n")
}

fn strip_location(msg: String) -> String {
    // Single-line parsers report `path:1: message`; keep the message.
    match msg.splitn(3, ':').collect::<Vec<_>>().as_slice() {
        [_, line, rest] if line.trim().parse::<usize>().is_ok() => rest.trim().to_string(),
        _ => msg,
    }
}

fn fst_diag(file: &str, e: &FstError) -> Diagnostic {
    match e {
        FstError::Parse { pos, message, .. } => Diagnostic {
            file: file.to_string(),
            line: pos.line,
            message: message.clone(),
        },
        other => Diagnostic {
            file: file.to_string(),
            line: 0,
            message: other.to_string(),
        },
    }
}

/// Loads and validates a knowledge-base directory, reporting every problem
/// found rather than the first.
pub fn load_kb(dir: &Path) -> Result<KnowledgeBase, KbError> {
    build_kb(&KbSources::read_dir(dir)?)
}

pub fn build_kb(src: &KbSources) -> Result<KnowledgeBase, KbError> {
    let mut diags = Vec::new();

    let lattice = match TypeLattice::parse(&src.lattice) {
        Ok(l) => l,
        Err(e) => {
            let line = match &e {
                FeatureError::Syntax { line, .. } => *line,
                _ => 0,
            };
            diags.push(Diagnostic {
                file: "lattice.tsv".into(),
                line,
                message: e.to_string(),
            });
            TypeLattice::default()
        }
    };
    let alias_src = screen_lines(&src.aliases, "aliases.tsv", &mut diags, |l| {
        AliasTable::parse(l).map(|_| ()).map_err(|e| strip_location(e.to_string()))
    });
    let aliases = AliasTable::parse(&alias_src).unwrap_or_default();

    let lex_src = screen_lines(&src.lexicon, "lexicon.tsv", &mut diags, |l| {
        parse_lexicon_entries(l, "").map(|_| ()).map_err(|e| strip_location(e.to_string()))
    });
    let entries = parse_lexicon_entries(&lex_src, "lexicon.tsv").unwrap_or_default();
    let infl_src = screen_lines(&src.inflection, "inflection.tsv", &mut diags, |l| {
        parse_inflection(l, "").map(|_| ()).map_err(|e| strip_location(e.to_string()))
    });
    let inflection = parse_inflection(&infl_src, "inflection.tsv").unwrap_or_default();
    let links = match &src.linkers {
        None => LinkRule::german_defaults(),
        Some(s) => {
            let ok = screen_lines(s, "linkers.tsv", &mut diags, |l| {
                LinkRule::parse(l, "").map(|_| ()).map_err(|e| strip_location(e.to_string()))
            });
            LinkRule::parse(&ok, "linkers.tsv").unwrap_or_default()
        }
    };
    let abbreviations = match &src.abbreviations {
        None => AbbreviationTable::new(),
        Some(s) => {
            let ok = screen_lines(s, "abbreviations.tsv", &mut diags, |l| {
                parse_abbreviations(l, "").map(|_| ()).map_err(|e| strip_location(e.to_string()))
            });
            parse_abbreviations(&ok, "abbreviations.tsv").unwrap_or_default()
        }
    };
    let tagger_rules = match &src.tagger_rules {
        None => Vec::new(),
        Some(s) => {
            let ok = screen_lines(s, "tagger.rules", &mut diags, |l| {
                parse_rules(l, "").map(|_| ()).map_err(|e| strip_location(e.to_string()))
            });
            parse_rules(&ok, "tagger.rules").unwrap_or_default()
        }
    };

    // Grammars: parse all files, then compile against the full registry.
    let mut defs: BTreeMap<String, (FstDef, String)> = BTreeMap::new();
    let mut order = Vec::new();
    for (file, text) in &src.grammars {
        let (parsed, errors) = parse_grammar_file(text, file, &aliases);
        diags.extend(errors.iter().map(|e| fst_diag(file, e)));
        for d in parsed {
            if defs.contains_key(&d.name) {
                diags.push(Diagnostic {
                    file: file.clone(),
                    line: d.source.line,
                    message: FstError::Duplicate(d.name.clone()).to_string(),
                });
                continue;
            }
            order.push(d.name.clone());
            defs.insert(d.name.clone(), (d, file.clone()));
        }
    }
    let registry: BTreeMap<String, FstDef> = defs.iter().map(|(k, (d, _))| (k.clone(), d.clone())).collect();
    let mut grammars = BTreeMap::new();
    for name in &order {
        let (def, file) = &defs[name];
        for e in def.expr.edges() {
            if let EdgeTest::MonaCatType { ty, .. } = &e.test {
                if !lattice.contains(ty) {
                    diags.push(Diagnostic {
                        file: file.clone(),
                        line: def.source.line,
                        message: format!("grammar `{name}` tests unknown lattice type `{ty}`"),
                    });
                }
            }
        }
        match compile(def, &registry) {
            Ok(fst) => {
                grammars.insert(
                    name.clone(),
                    Grammar {
                        def: def.clone(),
                        fst,
                        file: file.clone(),
                    },
                );
            }
            Err(e) => diags.push(Diagnostic {
                line: def.source.line,
                ..fst_diag(file, &e)
            }),
        }
    }

    let mut fcps = BTreeMap::new();
    let mut fcp_files = BTreeMap::new();
    for (file, text) in &src.fcps {
        let (parsed, errors) = parse_fcp_file(text, file, &aliases);
        for e in errors {
            diags.push(match e {
                FcpError::Syntax(f) => fst_diag(file, &f),
                other => Diagnostic {
                    file: file.clone(),
                    line: 0,
                    message: other.to_string(),
                },
            });
        }
        for f in parsed {
            if fcps.contains_key(&f.name) {
                diags.push(Diagnostic {
                    file: file.clone(),
                    line: f.source.line,
                    message: format!("pattern `{}` is defined more than once", f.name),
                });
                continue;
            }
            fcp_files.insert(f.name.clone(), file.clone());
            fcps.insert(f.name.clone(), f);
        }
    }

    // Cross-references.
    let lexemes: BTreeSet<&str> = entries.iter().map(|(_, e)| e.lemma()).collect();
    for (line, e) in &entries {
        if !lattice.contains(&e.lattice_type) {
            diags.push(Diagnostic {
                file: "lexicon.tsv".into(),
                line: *line,
                message: format!("unknown lattice type `{}`", e.lattice_type),
            });
        }
        for f in &e.fcps {
            if !fcps.contains_key(f) {
                diags.push(Diagnostic {
                    file: "lexicon.tsv".into(),
                    line: *line,
                    message: format!("unknown combination pattern `{f}`"),
                });
            }
        }
    }
    let mut fcp_anchors: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for f in fcps.values() {
        for a in &f.anchors {
            if !lexemes.contains(a.as_str()) {
                diags.push(Diagnostic {
                    file: fcp_files[&f.name].clone(),
                    line: f.source.line,
                    message: format!("pattern `{}` is anchored to `{a}`, which is not in the lexicon", f.name),
                });
            }
            fcp_anchors.entry(a.clone()).or_default().push(f.name.clone());
        }
    }

    if !diags.is_empty() {
        return Err(KbError::Invalid(diags));
    }
    let mut trie = LexiconTrie::new();
    for (_, e) in entries {
        trie.insert(e);
    }
    Ok(KnowledgeBase {
        morphology: Morphology::new(trie, inflection, links),
        abbreviations,
        resources: Resources {
            lattice,
            aliases,
            builders: BuilderRegistry::default(),
        },
        grammars,
        order,
        fcps,
        fcp_anchors,
        tagger_rules,
    })
}
