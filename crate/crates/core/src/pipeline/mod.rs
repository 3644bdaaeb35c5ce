//! End-to-end driver: scanning, tagging, fragment stages, verb grouping and
//! fragment combination, plus JSON and HTML output.

mod emit;

use std::time::Instant;

use serde::Serialize;

use crate::combiner::{apply_lexical_rules, build_item_stream, combine, Template};
use crate::fst::TokenStream;
use crate::item::TextItem;
use crate::kb::{CachedItem, ConfigError, ItemCache, KnowledgeBase, PipelineConfig, StageMode, MAX_SWEEPS};
use crate::scanner::{expand_abbreviations, Scanner, Token};
use crate::tagger::{sentences, tag_document, FilterRule, TaggedToken};

pub use emit::{emit_html, emit_html_document, emit_json, html_pieces, HtmlPiece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub micros: u128,
}

/// Everything produced for one document.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub id: String,
    pub text: String,
    pub tokens: Vec<TaggedToken>,
    pub cache: ItemCache,
    pub templates: Vec<Template>,
    pub timings: Vec<StageTiming>,
}

impl RunResult {
    pub fn items(&self) -> &[CachedItem] {
        self.cache.entries()
    }

    /// Code-point range covered by the tokens `start..end`.
    pub fn char_span(&self, start: usize, end: usize) -> Option<(usize, usize)> {
        if start >= end {
            return None;
        }
        let first = self.tokens.get(start)?;
        let last = self.tokens.get(end - 1)?;
        Some((first.token.span.start, last.token.span.end))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("document `{id}`: {message}")]
    Document { id: String, message: String },
}

struct Timer {
    timings: Vec<StageTiming>,
    at: Instant,
}

impl Timer {
    fn new() -> Self {
        Timer {
            timings: Vec::new(),
            at: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.push(StageTiming {
            stage: stage.to_string(),
            micros: now.duration_since(self.at).as_micros(),
        });
        self.at = now;
    }
}

fn run_grammar(kb: &KnowledgeBase, name: &str, tokens: &[TaggedToken], cache: &ItemCache) -> Vec<TextItem> {
    let Some(g) = kb.grammars.get(name) else {
        return Vec::new();
    };
    let stream = TokenStream::new(tokens, &kb.resources).with_items(cache.items());
    g.fst.scan_all(&stream)
}

/// Runs every configured stage over one document. The configuration must
/// have been validated against `kb`.
pub fn run_validated(doc: &Document, kb: &KnowledgeBase, config: &PipelineConfig) -> RunResult {
    let mut timer = Timer::new();
    let scanner = Scanner::with_abbreviations(&kb.abbreviations);
    let tokens = expand_abbreviations(scanner.scan(&doc.text), &kb.abbreviations);
    timer.lap("scan");

    let morph = kb.with_morph_config(config.morphology.into());
    let rules: &[FilterRule] = if config.filter_rules { &kb.tagger_rules } else { &[] };
    let tagged = tag_document(&tokens, &morph, rules);
    timer.lap("tag");

    let mut cache = ItemCache::new();
    for stage in &config.stages {
        match stage.mode {
            StageMode::Cascade => {
                for g in &stage.grammars {
                    for item in run_grammar(kb, g, &tagged, &cache) {
                        cache.put(item, &stage.name);
                    }
                }
            }
            StageMode::Interleave => {
                for _ in 0..MAX_SWEEPS {
                    let before = cache.len();
                    for g in &stage.grammars {
                        for item in run_grammar(kb, g, &tagged, &cache) {
                            cache.put(item, &stage.name);
                        }
                    }
                    if cache.len() == before {
                        break;
                    }
                }
            }
        }
        timer.lap(&stage.name);
    }

    let mut templates = Vec::new();
    if config.combine {
        let fragments: Vec<TextItem> = cache.items().cloned().collect();
        let stream = apply_lexical_rules(build_item_stream(&fragments, &tagged), &kb.fcp_anchors);
        timer.lap("lexical-rules");
        templates = combine(&stream, &kb.fcps, &kb.resources.aliases);
        timer.lap("combine");
    }

    RunResult {
        id: doc.id.clone(),
        text: doc.text.clone(),
        tokens: tagged,
        cache,
        templates,
        timings: timer.timings,
    }
}

/// Validates `config` against `kb` and runs the pipeline on `doc`.
pub fn run_pipeline(doc: &Document, kb: &KnowledgeBase, config: &PipelineConfig) -> Result<RunResult, PipelineError> {
    config.validate(kb)?;
    Ok(run_validated(doc, kb, config))
}

/// Runs documents concurrently on up to `workers` threads (0 picks a
/// default); results keep input order.
pub fn run_documents(
    docs: &[Document],
    kb: &KnowledgeBase,
    config: &PipelineConfig,
    workers: usize,
) -> Result<Vec<Result<RunResult, PipelineError>>, PipelineError> {
    use rayon::prelude::*;
    config.validate(kb)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PipelineError::Document {
            id: String::new(),
            message: e.to_string(),
        })?;
    Ok(pool.install(|| {
        docs.par_iter()
            .map(|d| {
                std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run_validated(d, kb, config))).map_err(|_| {
                    PipelineError::Document {
                        id: d.id.clone(),
                        message: "internal error while processing".into(),
                    }
                })
            })
            .collect()
    }))
}

/// Learns filter rules from plain-text corpus documents.
pub fn train_tagger(texts: &[String], kb: &KnowledgeBase, max_rules: usize) -> Vec<FilterRule> {
    let scanner = Scanner::with_abbreviations(&kb.abbreviations);
    let corpus: Vec<Vec<Token>> = texts
        .iter()
        .flat_map(|t| sentences(&expand_abbreviations(scanner.scan(t), &kb.abbreviations)))
        .collect();
    crate::tagger::learn_filter_rules(&corpus, &kb.morphology, max_rules)
}
