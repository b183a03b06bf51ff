//! Context-sensitive spelling correction.
//!
//! For each confusion set (`peace, piece`, `than, then`, ...) a model is
//! trained from correct text: context words within ±k positions and short
//! collocations of words and part-of-speech tags, pruned and ranked by
//! strength. Five methods predict which word of the set belongs at an
//! occurrence: the majority baseline, context words alone, collocations
//! alone, a decision list, and a Bayesian combination of both feature kinds.

pub mod classifiers;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod evalharness;
pub mod features;
pub mod modelfile;
pub mod stats;

pub use classifiers::{
    correct_text, predict, train, FeatureKinds, Method, Prediction, Suggestion, TrainConfig,
    TrainedModel,
};
pub use corpus::{
    find_occurrences, read_corpus, tokenize, ConfusionSet, Occurrence, Sentence, TagDictionary,
    Token,
};
pub use error::{Error, Result};
pub use evalharness::{evaluate, render_table, render_tsv, EvalRecord};
pub use features::{Collocation, Element, Feature, FeatureId, FeatureKind};
pub use stats::{FeatureStats, Metric, PruneConfig};
