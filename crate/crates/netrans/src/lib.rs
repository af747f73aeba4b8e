//! File formats, corpus-level processing, evaluation, synthetic data and the
//! command line for named-entity translation and alignment.
//!
//! The algorithms live in `netrans-core`; this crate reads and writes the
//! plain-text formats around them and runs them over whole corpora.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod eval;
pub mod formats;
pub mod synth;
