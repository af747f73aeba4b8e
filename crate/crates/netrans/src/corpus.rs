//! Corpus-wide operations spread over a fixed number of worker threads.
//!
//! Work is split per sentence pair and results are collected in corpus
//! order, so the output does not depend on the number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use netrans_core::align::{AlignError, AlignedPair, Aligner, CorpusAlignment, MatchDirection, Translator};
use netrans_core::ner::Recognizer;
use netrans_core::pipeline::{
    self, LexicalTable, PipelineError, RestoreConfig, RestoreReport, SymbolMap,
};
use netrans_core::simdist::SimScore;
use netrans_core::{NeSpan, Sentence, SentencePair, Side};

use crate::formats::AlignmentRecord;

/// Runs `f` on a pool of `jobs` threads (at least one).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(f)
}

pub fn align_corpus(
    aligner: &Aligner<'_>,
    corpus: &[SentencePair],
    src_recognizer: &dyn Recognizer,
    tgt_recognizer: &dyn Recognizer,
    jobs: usize,
) -> Result<CorpusAlignment, AlignError> {
    let per_sentence = with_jobs(jobs, || {
        corpus
            .par_iter()
            .map(|pair| aligner.align_with(pair, src_recognizer, tgt_recognizer))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(CorpusAlignment::from_sentences(per_sentence))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("alignment refers to sentence {found} but the corpus has {len} sentences")]
    UnknownSentence { found: usize, len: usize },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Rebuilds aligned pairs from alignment records and the corpus they refer to.
pub fn records_to_pairs(
    corpus: &[SentencePair],
    records: &[AlignmentRecord],
) -> Result<BTreeMap<usize, Vec<AlignedPair>>, RecordError> {
    let mut out: BTreeMap<usize, Vec<AlignedPair>> = BTreeMap::new();
    for r in records {
        let Some(pair) = corpus.get(r.sentence_id) else {
            return Err(RecordError::UnknownSentence {
                found: r.sentence_id,
                len: corpus.len(),
            });
        };
        let bounds = |side: &'static str, range: netrans_core::TokenRange, s: &Sentence| {
            if range.end > s.len() {
                Err(PipelineError::OutOfBounds {
                    sentence_id: r.sentence_id,
                    side,
                    range,
                    len: s.len(),
                })
            } else {
                Ok(())
            }
        };
        bounds("source", r.src, &pair.src)?;
        bounds("target", r.tgt, &pair.tgt)?;
        let src_span = NeSpan::in_sentence(&pair.src, r.sentence_id, Side::Source, r.src, r.ne_type)
            .expect("range checked");
        out.entry(r.sentence_id).or_default().push(AlignedPair {
            sentence_id: r.sentence_id,
            src_span,
            tgt_range: r.tgt,
            tgt_surface: pair.tgt.join(r.tgt).expect("range checked"),
            ne_type: r.ne_type,
            score: SimScore::new(r.score),
            direction: r.direction,
        });
    }
    Ok(out)
}

/// Rewrites every sentence pair with its aligned entities replaced.
pub fn replace_corpus(
    corpus: &[SentencePair],
    aligned: &BTreeMap<usize, Vec<AlignedPair>>,
    jobs: usize,
) -> Result<Vec<(SentencePair, SymbolMap)>, PipelineError> {
    with_jobs(jobs, || {
        corpus
            .par_iter()
            .map(|pair| {
                let links = aligned.get(&pair.id).map(Vec::as_slice).unwrap_or(&[]);
                pipeline::replace_training_pair(pair, links)
            })
            .collect()
    })
}

/// Replaces recognized entities in sentences to be translated.
pub fn replace_sentences(
    sentences: &[Sentence],
    recognizer: &dyn Recognizer,
    vocab: Option<&pipeline::Vocabulary>,
    oov_only: bool,
    jobs: usize,
) -> Result<Vec<(Sentence, SymbolMap)>, netrans_core::ner::NerError> {
    with_jobs(jobs, || {
        sentences
            .par_iter()
            .enumerate()
            .map(|(id, s)| {
                let spans = recognizer.recognize(s, id, Side::Source)?;
                Ok(pipeline::replace_test_sentence(s, &spans, vocab, oov_only))
            })
            .collect()
    })
}

/// Restores every sentence; sentences without a symbol map are only
/// unescaped.
pub fn restore_corpus(
    output: &[Sentence],
    maps: &BTreeMap<usize, SymbolMap>,
    table: &LexicalTable,
    translator: &dyn Translator,
    cfg: &RestoreConfig,
    jobs: usize,
) -> (Vec<Sentence>, RestoreReport) {
    let empty = SymbolMap::new();
    let results: Vec<(Sentence, RestoreReport)> = with_jobs(jobs, || {
        output
            .par_iter()
            .enumerate()
            .map(|(id, s)| {
                let map = maps.get(&id).unwrap_or(&empty);
                pipeline::restore(s, map, table, translator, cfg)
            })
            .collect()
    });
    let mut report = RestoreReport::default();
    let mut sentences = Vec::with_capacity(results.len());
    for (s, r) in results {
        sentences.push(s);
        report.merge(r);
    }
    (sentences, report)
}

/// Aligned pairs per type and per direction.
pub fn summary(pairs: &[AlignedPair]) -> String {
    let mut by_type: BTreeMap<&str, usize> = BTreeMap::new();
    let mut by_dir: BTreeMap<MatchDirection, usize> = BTreeMap::new();
    for p in pairs {
        *by_type.entry(p.ne_type.as_str()).or_default() += 1;
        *by_dir.entry(p.direction).or_default() += 1;
    }
    let mut out = format!("aligned pairs: {}\n", pairs.len());
    for (t, n) in by_type {
        out.push_str(&format!("  {t}: {n}\n"));
    }
    for (d, n) in by_dir {
        out.push_str(&format!("  {d}: {n}\n"));
    }
    out
}
