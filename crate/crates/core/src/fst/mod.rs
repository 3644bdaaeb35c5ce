//! Declarative finite-state grammars over token and item streams.
//!
//! A grammar is a regular expression over basic edges. Compilation flattens
//! it into a small backtracking program in which sub-grammar calls are
//! inlined; running it collects every binding environment reaching the
//! preferred end, and `build-item` turns an environment into a text item.

mod build;
mod compile;
mod env;
mod expr;
mod parse;
mod stream;

pub use build::{build_generic, BuildCtx, BuildInput, BuilderFn, BuilderRegistry};
pub use compile::{compile, CompiledFst, STEP_LIMIT};
pub use env::{BindingEnv, Bound, Match};
pub use expr::{BasicEdge, EdgeTest, FstDef, MatchParams, OutputDesc, RegexExpr};
pub use parse::{parse_grammar_file, parse_regex};
pub(crate) use parse::{keywords, parse_expr, parse_output_desc, Ctx as ParseCtx};
pub use stream::{Resources, Stream, TokenStream};

use crate::sexpr::SourcePos;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FstError {
    #[error("{path}:{pos}: {message}")]
    Parse { path: String, pos: SourcePos, message: String },
    #[error("grammar `{grammar}` seeks unknown grammar `{target}`")]
    UnresolvedSeek { grammar: String, target: String },
    #[error("recursive seek: {}", .0.join(" -> "))]
    Recursion(Vec<String>),
    #[error("grammar `{grammar}`: output variable `{var}` is never bound")]
    UnboundOutputVar { grammar: String, var: String },
    #[error("grammar `{grammar}`: :star over an expression that can match the empty sequence")]
    NullableStar { grammar: String },
    #[error("grammar `{grammar}`: repeat bounds {min} > {max}")]
    BadBounds { grammar: String, min: usize, max: usize },
    #[error("grammar `{0}` is defined more than once")]
    Duplicate(String),
}
