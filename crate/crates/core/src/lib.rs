//! Holistic extractive multi-document summarization.
//!
//! Sentences of a document cluster are connected in a thresholded similarity
//! graph. Candidate summaries are scored as whole subsets with the Subset
//! Representative Index (subset importance minus weighted redundancy) and
//! selected by greedy, beam or exhaustive search. The [`eval`] module scores
//! summaries with ROUGE and unique n-gram ratios.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod importance;
pub mod inference;
mod jsonl;
pub mod pipeline;
pub mod similarity;
pub mod sri;

pub use error::{Error, Result};
