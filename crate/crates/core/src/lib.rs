//! Information-extraction core: scanning, morphology, tagging, finite-state
//! fragment grammars, fragment combination and the end-to-end pipeline.

pub mod avs;
pub mod combiner;
pub mod feature;
pub mod morphology;
pub mod scanner;
pub mod sexpr;
pub mod tagger;
pub mod fst;
pub mod item;
pub mod kb;
pub mod pipeline;
