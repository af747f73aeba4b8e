//! Character-level named-entity translation and alignment.
//!
//! This crate holds the algorithmic side of the toolkit and builds without
//! `std` (it needs `alloc`):
//!
//! - [`simdist`]: indel edit distance, longest common subsequence and the
//!   candidate/target similarity score used for matching.
//! - [`numnorm`]: digit-sequence normalization for numerical and temporal
//!   expressions, plus rule-based rendering of those expressions.
//! - [`neural`]: a character-level attention encoder-decoder with manual
//!   backpropagation, Adadelta training, beam search and a binary model format.
//! - [`ner`]: the recognizer interface, a gazetteer recognizer and replay of
//!   stand-off annotations.
//! - [`align`]: bidirectional matching of recognized entities against word
//!   n-grams on the other side of a sentence pair.
//! - [`pipeline`]: placeholder rewriting, lexical tables and restoration.
//!
//! File IO, parallel corpus processing and the command line live in the
//! `netrans` crate.

#![no_std]

extern crate alloc;

pub mod align;
pub mod ner;
pub mod neural;
pub mod numnorm;
pub mod pipeline;
pub mod simdist;
mod types;

pub use types::{
    NePair, NeSpan, NeType, Sentence, SentencePair, Side, TokenRange, TypeError, UnknownNeType,
};
