use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Diagnostic, KnowledgeBase};
use crate::fst::EdgeTest;
use crate::morphology::{CompoundLimits, MorphConfig};

/// Upper bound on interleaved sweeps per stage.
pub const MAX_SWEEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageMode {
    /// Each grammar runs once, in order, over everything cached so far.
    #[default]
    Cascade,
    /// All grammars of the stage are re-run until nothing new appears.
    Interleave,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub name: String,
    pub grammars: Vec<String>,
    #[serde(default)]
    pub mode: StageMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MorphologySection {
    pub compounds: bool,
    pub min_segment: usize,
    pub max_segments: usize,
}

impl Default for MorphologySection {
    fn default() -> Self {
        let l = CompoundLimits::default();
        MorphologySection {
            compounds: true,
            min_segment: l.min_segment,
            max_segments: l.max_segments,
        }
    }
}

impl From<MorphologySection> for MorphConfig {
    fn from(m: MorphologySection) -> Self {
        MorphConfig {
            compounds: m.compounds,
            limits: CompoundLimits {
                min_segment: m.min_segment,
                max_segments: m.max_segments,
            },
        }
    }
}

fn yes() -> bool {
    true
}

/// Stage list and switches for one pipeline run, read from TOML.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub morphology: MorphologySection,
    /// Apply the knowledge base's learned filter rules.
    #[serde(default = "yes")]
    pub filter_rules: bool,
    /// Run verb grouping and fragment combination after the stages.
    #[serde(default = "yes")]
    pub combine: bool,
    #[serde(default, rename = "stage")]
    pub stages: Vec<Stage>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            morphology: MorphologySection::default(),
            filter_rules: true,
            combine: true,
            stages: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Syntax { path: String, message: String },
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

impl PipelineConfig {
    pub fn parse(src: &str, path: &str) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|e| ConfigError::Syntax {
            path: path.to_string(),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let p = path.display().to_string();
        let src = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: p.clone(),
            message: e.to_string(),
        })?;
        Self::parse(&src, &p)
    }

    /// One cascade stage per grammar, in knowledge-base order.
    pub fn all_grammars(kb: &KnowledgeBase) -> Self {
        PipelineConfig {
            stages: kb
                .grammar_order()
                .map(|g| Stage {
                    name: g.to_string(),
                    grammars: vec![g.to_string()],
                    mode: StageMode::Cascade,
                })
                .collect(),
            ..Default::default()
        }
    }

    /// Checks grammar names and that a cascade stage only consumes item
    /// types produced before the grammar runs.
    pub fn validate(&self, kb: &KnowledgeBase) -> Result<(), ConfigError> {
        let mut diags = Vec::new();
        let diag = |message: String| Diagnostic {
            file: "pipeline".into(),
            line: 0,
            message,
        };
        if self.morphology.min_segment == 0 || self.morphology.max_segments < 2 {
            diags.push(diag("morphology limits need min_segment >= 1 and max_segments >= 2".into()));
        }
        let mut names = BTreeSet::new();
        let mut produced: BTreeSet<String> = BTreeSet::new();
        let all_outputs: BTreeSet<String> = kb.grammars.values().map(|g| g.def.output.ty.clone()).collect();
        for stage in &self.stages {
            if !names.insert(&stage.name) {
                diags.push(diag(format!("stage `{}` is declared twice", stage.name)));
            }
            if stage.grammars.is_empty() {
                diags.push(diag(format!("stage `{}` names no grammars", stage.name)));
            }
            let stage_outputs: BTreeSet<String> = stage
                .grammars
                .iter()
                .filter_map(|g| kb.grammars.get(g))
                .map(|g| g.def.output.ty.clone())
                .collect();
            for g in &stage.grammars {
                let Some(entry) = kb.grammars.get(g) else {
                    diags.push(diag(format!("stage `{}` names unknown grammar `{g}`", stage.name)));
                    continue;
                };
                if stage.mode == StageMode::Cascade {
                    for e in entry.def.expr.edges() {
                        if let EdgeTest::Fragment { types } = &e.test {
                            for t in types {
                                if !produced.contains(t) && stage_outputs.contains(t) && all_outputs.contains(t) {
                                    diags.push(diag(format!(
                                        "cascade stage `{}`: grammar `{g}` consumes `{t}` produced later in the same stage; use mode = \"interleave\"",
                                        stage.name
                                    )));
                                }
                            }
                        }
                    }
                }
                if stage.mode == StageMode::Cascade {
                    produced.insert(entry.def.output.ty.clone());
                }
            }
            produced.extend(stage_outputs);
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(diags))
        }
    }
}
