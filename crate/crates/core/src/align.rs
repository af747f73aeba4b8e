//! Bidirectional entity alignment over sentence pairs.
//!
//! Each recognized entity is translated into the other language and the
//! candidates are compared with every word n-gram (up to `max_ngram` words)
//! on the other side. Numerical and temporal expressions skip translation and
//! are compared through their digit normalization. Matches from both
//! directions are merged, so an entity recognized on only one side can still
//! be aligned.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::neural::{self, Seq2SeqModel};
use crate::ner::{validate_spans, NerError, Recognizer};
use crate::numnorm::{self, RuleTable};
use crate::simdist::{self, SimScore};
use crate::{NePair, NeSpan, NeType, Sentence, SentencePair, Side, TokenRange};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("invalid alignment config: {0}")]
    Config(String),
    #[error("sentence {sentence_id}: {reason}")]
    Contract { sentence_id: usize, reason: String },
    #[error(transparent)]
    Recognition(#[from] NerError),
}

/// Produces translation candidates for an entity surface, best first.
pub trait Translator: Sync {
    fn candidates(&self, surface: &str, k: usize) -> Vec<String>;
}

impl Translator for Seq2SeqModel {
    fn candidates(&self, surface: &str, k: usize) -> Vec<String> {
        match neural::translate_default(self, surface, k) {
            Ok(kbest) => kbest
                .entries
                .into_iter()
                .map(|h| h.text)
                .filter(|t| !t.is_empty())
                .collect(),
            Err(_) => Vec::new(),
        }
    }
}

/// A translator that knows nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoTranslator;

impl Translator for NoTranslator {
    fn candidates(&self, _surface: &str, _k: usize) -> Vec<String> {
        Vec::new()
    }
}

/// Which matching directions to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Directions {
    Both,
    SrcToTgt,
    TgtToSrc,
}

impl Directions {
    fn src_to_tgt(self) -> bool {
        matches!(self, Directions::Both | Directions::SrcToTgt)
    }

    fn tgt_to_src(self) -> bool {
        matches!(self, Directions::Both | Directions::TgtToSrc)
    }
}

impl FromStr for Directions {
    type Err = AlignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(Directions::Both),
            "s2t" => Ok(Directions::SrcToTgt),
            "t2s" => Ok(Directions::TgtToSrc),
            other => Err(AlignError::Config(alloc::format!(
                "unknown directions `{other}` (expected both, s2t or t2s)"
            ))),
        }
    }
}

/// The direction(s) that produced an aligned pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchDirection {
    Both,
    SrcToTgt,
    TgtToSrc,
}

impl MatchDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchDirection::Both => "both",
            MatchDirection::SrcToTgt => "s2t",
            MatchDirection::TgtToSrc => "t2s",
        }
    }
}

impl fmt::Display for MatchDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatchDirection {
    type Err = AlignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(MatchDirection::Both),
            "s2t" => Ok(MatchDirection::SrcToTgt),
            "t2s" => Ok(MatchDirection::TgtToSrc),
            other => Err(AlignError::Config(alloc::format!(
                "unknown match direction `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlignConfig {
    /// Minimum similarity for a match, in `(0, 1]`.
    pub sim_threshold: f64,
    /// Longest word n-gram compared on the other side.
    pub max_ngram: usize,
    /// Translation candidates requested per entity.
    pub beam_width: usize,
    pub directions: Directions,
}

impl Default for AlignConfig {
    fn default() -> Self {
        AlignConfig {
            sim_threshold: 0.6,
            max_ngram: 3,
            beam_width: 5,
            directions: Directions::Both,
        }
    }
}

impl AlignConfig {
    pub fn validate(&self) -> Result<(), AlignError> {
        if !(self.sim_threshold > 0.0 && self.sim_threshold <= 1.0) {
            return Err(AlignError::Config(alloc::format!(
                "similarity threshold {} outside (0, 1]",
                self.sim_threshold
            )));
        }
        if self.max_ngram == 0 {
            return Err(AlignError::Config("max n-gram must be at least 1".into()));
        }
        if self.beam_width == 0 {
            return Err(AlignError::Config("beam width must be at least 1".into()));
        }
        Ok(())
    }
}

/// An entity linked across a sentence pair.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedPair {
    pub sentence_id: usize,
    /// Source-side span; recognized, or the matched n-gram for pairs found
    /// only from the target side.
    pub src_span: NeSpan,
    pub tgt_range: TokenRange,
    pub tgt_surface: String,
    pub ne_type: NeType,
    pub score: SimScore,
    pub direction: MatchDirection,
}

impl AlignedPair {
    pub fn to_ne_pair(&self) -> NePair {
        NePair {
            src_surface: self.src_span.surface.clone(),
            tgt_surface: self.tgt_surface.clone(),
            ne_type: self.ne_type,
            count: 1,
        }
    }
}

/// Best n-gram of `other` for an entity, with its score.
///
/// Every range of `1..=max_ngram` tokens is compared with every candidate
/// (or, for `NT`, with the entity surface through digit normalization). Ties
/// go to the shorter range, then the leftmost, then the earlier candidate.
pub fn match_span(
    ne: &NeSpan,
    ne_lang: &str,
    candidates: &[String],
    other: &Sentence,
    cfg: &AlignConfig,
    rules: &RuleTable,
) -> Option<(TokenRange, SimScore)> {
    let tokens = other.tokens();
    let candidate_chars: Vec<Vec<char>> = candidates
        .iter()
        .map(|c| simdist::normalize(c))
        .filter(|c| !c.is_empty())
        .collect();
    if ne.ne_type != NeType::Nt && candidate_chars.is_empty() {
        return None;
    }
    let mut best: Option<(TokenRange, SimScore)> = None;
    for len in 1..=cfg.max_ngram.min(tokens.len()) {
        for start in 0..=tokens.len() - len {
            let range = TokenRange::new(start, start + len);
            let joined = tokens[start..start + len].join(" ");
            let score = if ne.ne_type == NeType::Nt {
                numnorm::nt_similarity(rules, &ne.surface, ne_lang, &joined, other.lang())
            } else {
                let target = simdist::normalize(&joined);
                candidate_chars
                    .iter()
                    .filter_map(|c| simdist::similarity_chars(c, &target).ok())
                    .fold(SimScore::ZERO, |a, b| if b > a { b } else { a })
            };
            if score.value() >= cfg.sim_threshold
                && best.is_none_or(|(_, b)| score.value() > b.value())
            {
                best = Some((range, score));
            }
        }
    }
    best
}

/// Translators and settings for aligning sentence pairs.
pub struct Aligner<'a> {
    pub config: AlignConfig,
    pub src_to_tgt: &'a dyn Translator,
    pub tgt_to_src: &'a dyn Translator,
    pub rules: RuleTable,
}

/// Alignment of one sentence pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SentenceAlignment {
    pub pairs: Vec<AlignedPair>,
    /// Cross-direction matches not merged because their types differ.
    pub type_disagreements: usize,
}

#[derive(Clone, Debug)]
struct Match {
    src: TokenRange,
    tgt: TokenRange,
    ne_type: NeType,
    score: SimScore,
    direction: MatchDirection,
}

fn check_spans(
    spans: &[NeSpan],
    sentence: &Sentence,
    sentence_id: usize,
    side: Side,
) -> Result<Vec<NeSpan>, AlignError> {
    let contract = |reason: String| AlignError::Contract {
        sentence_id,
        reason,
    };
    if let Some(s) = spans
        .iter()
        .find(|s| s.sentence_id != sentence_id || s.side != side)
    {
        return Err(contract(alloc::format!(
            "span for sentence {} ({}) given as {side} span",
            s.sentence_id,
            s.side
        )));
    }
    let mut spans = spans.to_vec();
    validate_spans(&mut spans, sentence).map_err(|e| contract(alloc::format!("{e}")))?;
    Ok(spans)
}

impl<'a> Aligner<'a> {
    pub fn new(
        config: AlignConfig,
        src_to_tgt: &'a dyn Translator,
        tgt_to_src: &'a dyn Translator,
    ) -> Result<Self, AlignError> {
        config.validate()?;
        Ok(Aligner {
            config,
            src_to_tgt,
            tgt_to_src,
            rules: RuleTable::default(),
        })
    }

    fn one_direction(
        &self,
        spans: &[NeSpan],
        from: &Sentence,
        to: &Sentence,
        translator: &dyn Translator,
    ) -> Vec<(NeSpan, TokenRange, SimScore)> {
        spans
            .iter()
            .filter_map(|span| {
                let candidates = if span.ne_type == NeType::Nt {
                    Vec::new()
                } else {
                    translator.candidates(&span.surface, self.config.beam_width)
                };
                match_span(span, from.lang(), &candidates, to, &self.config, &self.rules)
                    .map(|(range, score)| (span.clone(), range, score))
            })
            .collect()
    }

    /// Aligns the recognized spans of one sentence pair.
    ///
    /// Source-to-target and target-to-source matches that link overlapping
    /// ranges on both sides (with the same type) collapse into one pair
    /// marked `both`, keeping the recognized span of each side and the
    /// higher score. Remaining conflicts are settled greedily by score, then
    /// by direction (`both`, `s2t`, `t2s`), so every token range is linked
    /// at most once.
    pub fn align_sentence_pair(
        &self,
        pair: &SentencePair,
        src_spans: &[NeSpan],
        tgt_spans: &[NeSpan],
    ) -> Result<SentenceAlignment, AlignError> {
        let src_spans = check_spans(src_spans, &pair.src, pair.id, Side::Source)?;
        let tgt_spans = check_spans(tgt_spans, &pair.tgt, pair.id, Side::Target)?;

        let forward: Vec<Match> = if self.config.directions.src_to_tgt() {
            self.one_direction(&src_spans, &pair.src, &pair.tgt, self.src_to_tgt)
                .into_iter()
                .map(|(span, range, score)| Match {
                    src: span.range(),
                    tgt: range,
                    ne_type: span.ne_type,
                    score,
                    direction: MatchDirection::SrcToTgt,
                })
                .collect()
        } else {
            Vec::new()
        };
        let backward: Vec<Match> = if self.config.directions.tgt_to_src() {
            self.one_direction(&tgt_spans, &pair.tgt, &pair.src, self.tgt_to_src)
                .into_iter()
                .map(|(span, range, score)| Match {
                    src: range,
                    tgt: span.range(),
                    ne_type: span.ne_type,
                    score,
                    direction: MatchDirection::TgtToSrc,
                })
                .collect()
        } else {
            Vec::new()
        };

        let mut type_disagreements = 0;
        let mut links: Vec<(f64, usize, usize)> = Vec::new();
        for (i, f) in forward.iter().enumerate() {
            for (j, b) in backward.iter().enumerate() {
                if f.src.overlaps(&b.src) && f.tgt.overlaps(&b.tgt) {
                    if f.ne_type == b.ne_type {
                        links.push((f.score.value().max(b.score.value()), i, j));
                    } else {
                        type_disagreements += 1;
                    }
                }
            }
        }
        links.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        let mut used_f = alloc::vec![false; forward.len()];
        let mut used_b = alloc::vec![false; backward.len()];
        let mut pool: Vec<Match> = Vec::new();
        for (score, i, j) in links {
            if used_f[i] || used_b[j] {
                continue;
            }
            used_f[i] = true;
            used_b[j] = true;
            pool.push(Match {
                src: forward[i].src,
                tgt: backward[j].tgt,
                ne_type: forward[i].ne_type,
                score: SimScore::new(score),
                direction: MatchDirection::Both,
            });
        }
        pool.extend(
            forward
                .into_iter()
                .zip(used_f)
                .filter(|(_, u)| !u)
                .map(|(m, _)| m),
        );
        pool.extend(
            backward
                .into_iter()
                .zip(used_b)
                .filter(|(_, u)| !u)
                .map(|(m, _)| m),
        );
        pool.sort_by(|a, b| {
            b.score
                .value()
                .total_cmp(&a.score.value())
                .then(a.direction.cmp(&b.direction))
                .then((a.src, a.tgt).cmp(&(b.src, b.tgt)))
        });

        let mut accepted: Vec<Match> = Vec::new();
        for m in pool {
            let clash = accepted
                .iter()
                .any(|a| a.src.overlaps(&m.src) || a.tgt.overlaps(&m.tgt));
            if !clash {
                accepted.push(m);
            }
        }
        accepted.sort_by_key(|m| (m.src, m.tgt));

        let mut pairs = Vec::with_capacity(accepted.len());
        for m in accepted {
            let src_span = NeSpan::in_sentence(&pair.src, pair.id, Side::Source, m.src, m.ne_type)
                .map_err(|e| AlignError::Contract {
                    sentence_id: pair.id,
                    reason: alloc::format!("{e}"),
                })?;
            let tgt_surface = pair.tgt.join(m.tgt).ok_or_else(|| AlignError::Contract {
                sentence_id: pair.id,
                reason: "target range out of bounds".into(),
            })?;
            pairs.push(AlignedPair {
                sentence_id: pair.id,
                src_span,
                tgt_range: m.tgt,
                tgt_surface,
                ne_type: m.ne_type,
                score: m.score,
                direction: m.direction,
            });
        }
        Ok(SentenceAlignment {
            pairs,
            type_disagreements,
        })
    }

    /// Recognizes and aligns one sentence pair.
    pub fn align_with(
        &self,
        pair: &SentencePair,
        src_recognizer: &dyn Recognizer,
        tgt_recognizer: &dyn Recognizer,
    ) -> Result<SentenceAlignment, AlignError> {
        let src_spans = src_recognizer.recognize(&pair.src, pair.id, Side::Source)?;
        let tgt_spans = tgt_recognizer.recognize(&pair.tgt, pair.id, Side::Target)?;
        self.align_sentence_pair(pair, &src_spans, &tgt_spans)
    }

    /// Aligns a whole corpus sequentially.
    pub fn align_corpus(
        &self,
        corpus: &[SentencePair],
        src_recognizer: &dyn Recognizer,
        tgt_recognizer: &dyn Recognizer,
    ) -> Result<CorpusAlignment, AlignError> {
        let mut per_sentence = Vec::with_capacity(corpus.len());
        for pair in corpus {
            per_sentence.push(self.align_with(pair, src_recognizer, tgt_recognizer)?);
        }
        Ok(CorpusAlignment::from_sentences(per_sentence))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusAlignment {
    /// Aligned pairs in corpus order.
    pub pairs: Vec<AlignedPair>,
    /// Extracted entity pairs, by count descending then lexicographically.
    pub ne_pairs: Vec<NePair>,
    pub type_disagreements: usize,
}

impl CorpusAlignment {
    /// Concatenates per-sentence results given in corpus order.
    pub fn from_sentences(sentences: impl IntoIterator<Item = SentenceAlignment>) -> Self {
        let mut pairs = Vec::new();
        let mut type_disagreements = 0;
        for s in sentences {
            pairs.extend(s.pairs);
            type_disagreements += s.type_disagreements;
        }
        let ne_pairs = aggregate_pairs(&pairs);
        CorpusAlignment {
            pairs,
            ne_pairs,
            type_disagreements,
        }
    }
}

/// Counts `(source, target, type)` occurrences; sorted by count descending,
/// then source, target and type.
pub fn aggregate_pairs(pairs: &[AlignedPair]) -> Vec<NePair> {
    let mut counts: BTreeMap<(String, String, NeType), u64> = BTreeMap::new();
    for p in pairs {
        *counts
            .entry((p.src_span.surface.clone(), p.tgt_surface.clone(), p.ne_type))
            .or_default() += 1;
    }
    let mut out: Vec<NePair> = counts
        .into_iter()
        .map(|((src_surface, tgt_surface, ne_type), count)| NePair {
            src_surface,
            tgt_surface,
            ne_type,
            count,
        })
        .collect();
    out.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.src_surface.cmp(&b.src_surface))
            .then_with(|| a.tgt_surface.cmp(&b.tgt_surface))
            .then_with(|| a.ne_type.cmp(&b.ne_type))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ner::AnnotationRecognizer;
    use crate::pipeline::extract_lexical_table;
    use alloc::vec;

    fn pair(id: usize, zh: &str, en: &str) -> SentencePair {
        SentencePair::new(id, Sentence::from_text(zh, "zh"), Sentence::from_text(en, "en")).unwrap()
    }

    fn span(pair: &SentencePair, side: Side, start: usize, end: usize, t: NeType) -> NeSpan {
        NeSpan::in_sentence(pair.side(side), pair.id, side, TokenRange::new(start, end), t).unwrap()
    }

    fn lex(rows: &[(&str, &str)]) -> Vec<NePair> {
        rows.iter()
            .map(|(a, b)| NePair::new(*a, *b, NeType::Loc, 1).unwrap())
            .collect()
    }

    #[test]
    fn near_miss_candidate_matches() {
        let p = pair(0, "柏林 很 美", "berlin is nice");
        let ne = span(&p, Side::Source, 0, 1, NeType::Loc);
        let cfg = AlignConfig::default();
        let rules = RuleTable::default();
        let got = match_span(&ne, "zh", &["bolin".into()], &p.tgt, &cfg, &rules).unwrap();
        assert_eq!(got.0, TokenRange::new(0, 1));
        assert_eq!(got.1.value(), 0.8);

        let exact = match_span(&ne, "zh", &["nice".into()], &p.tgt, &cfg, &rules).unwrap();
        assert_eq!(exact, (TokenRange::new(2, 3), SimScore::ONE));

        assert!(match_span(&ne, "zh", &["qqqq".into()], &p.tgt, &cfg, &rules).is_none());
        assert!(match_span(&ne, "zh", &[], &p.tgt, &cfg, &rules).is_none());
    }

    #[test]
    fn nt_matches_without_translation() {
        let p = pair(0, "增长 百分之四点二", "grew 4.2% in March");
        let ne = span(&p, Side::Source, 1, 2, NeType::Nt);
        let got = match_span(
            &ne,
            "zh",
            &[],
            &p.tgt,
            &AlignConfig::default(),
            &RuleTable::default(),
        )
        .unwrap();
        assert_eq!(got, (TokenRange::new(1, 2), SimScore::ONE));
    }

    #[test]
    fn mutual_matches_collapse_to_both() {
        let p = pair(0, "冰岛 重新 开放 驻 北京 大使馆", "iceland reopens embassy in beijing");
        let list = lex(&[("冰岛", "iceland"), ("北京", "beijing")]);
        let s2t = extract_lexical_table(&list);
        let t2s = extract_lexical_table(&list).reversed();
        let aligner = Aligner::new(AlignConfig::default(), &s2t, &t2s).unwrap();
        let src = vec![
            span(&p, Side::Source, 0, 1, NeType::Loc),
            span(&p, Side::Source, 4, 5, NeType::Loc),
        ];
        let tgt = vec![
            span(&p, Side::Target, 0, 1, NeType::Loc),
            span(&p, Side::Target, 4, 5, NeType::Loc),
        ];
        let out = aligner.align_sentence_pair(&p, &src, &tgt).unwrap();
        assert_eq!(out.pairs.len(), 2);
        for (a, (s, t)) in out.pairs.iter().zip([(0, 0), (4, 4)]) {
            assert_eq!(a.direction, MatchDirection::Both);
            assert_eq!(a.src_span.start, s);
            assert_eq!(a.tgt_range.start, t);
            assert_eq!(a.score, SimScore::ONE);
        }
        assert_eq!(out.pairs[1].tgt_surface, "beijing");
    }

    #[test]
    fn one_sided_recognition_is_kept() {
        let p = pair(0, "冰岛 重新 开放", "iceland reopens");
        let list = lex(&[("冰岛", "iceland")]);
        let s2t = extract_lexical_table(&list);
        let aligner = Aligner::new(AlignConfig::default(), &s2t, &NoTranslator).unwrap();
        let src = vec![span(&p, Side::Source, 0, 1, NeType::Loc)];
        let out = aligner.align_sentence_pair(&p, &src, &[]).unwrap();
        assert_eq!(out.pairs.len(), 1);
        assert_eq!(out.pairs[0].direction, MatchDirection::SrcToTgt);
    }

    #[test]
    fn competing_sources_resolved_by_score() {
        // both source entities translate to candidates matching "berlin";
        // the exact candidate wins, the near miss stays unmatched
        let p = pair(0, "甲 乙", "berlin");
        let list = lex(&[("甲", "bolin"), ("乙", "berlin")]);
        let s2t = extract_lexical_table(&list);
        let aligner = Aligner::new(AlignConfig::default(), &s2t, &NoTranslator).unwrap();
        let src = vec![
            span(&p, Side::Source, 0, 1, NeType::Loc),
            span(&p, Side::Source, 1, 2, NeType::Loc),
        ];
        let out = aligner.align_sentence_pair(&p, &src, &[]).unwrap();
        assert_eq!(out.pairs.len(), 1);
        assert_eq!(out.pairs[0].src_span.surface, "乙");
        assert_eq!(out.pairs[0].score, SimScore::ONE);
    }

    #[test]
    fn type_disagreement_is_not_merged() {
        let p = pair(0, "华盛顿", "washington");
        let list = lex(&[("华盛顿", "washington")]);
        let s2t = extract_lexical_table(&list);
        let t2s = extract_lexical_table(&list).reversed();
        let aligner = Aligner::new(AlignConfig::default(), &s2t, &t2s).unwrap();
        let src = vec![span(&p, Side::Source, 0, 1, NeType::Per)];
        let tgt = vec![span(&p, Side::Target, 0, 1, NeType::Loc)];
        let out = aligner.align_sentence_pair(&p, &src, &tgt).unwrap();
        assert_eq!(out.type_disagreements, 1);
        // s2t wins the tie on direction preference
        assert_eq!(out.pairs.len(), 1);
        assert_eq!(out.pairs[0].direction, MatchDirection::SrcToTgt);
        assert_eq!(out.pairs[0].ne_type, NeType::Per);
    }

    #[test]
    fn span_contract_violations() {
        let p = pair(2, "a b", "x y");
        let aligner = Aligner::new(AlignConfig::default(), &NoTranslator, &NoTranslator).unwrap();
        let wrong_id = NeSpan::new(5, Side::Source, 0, 1, NeType::Loc).unwrap();
        assert!(matches!(
            aligner.align_sentence_pair(&p, &[wrong_id], &[]),
            Err(AlignError::Contract { sentence_id: 2, .. })
        ));
        let oob = NeSpan::new(2, Side::Target, 1, 4, NeType::Loc).unwrap();
        assert!(aligner.align_sentence_pair(&p, &[], &[oob]).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = AlignConfig {
            sim_threshold: 1.01,
            ..AlignConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(AlignConfig { sim_threshold: 0.0, ..AlignConfig::default() }
            .validate()
            .is_err());
        assert!(AlignConfig { sim_threshold: 1.0, ..AlignConfig::default() }
            .validate()
            .is_ok());
        assert!(AlignConfig { max_ngram: 0, ..AlignConfig::default() }
            .validate()
            .is_err());
    }

    #[test]
    fn corpus_counts() {
        let list = lex(&[("冰岛", "iceland")]);
        let s2t = extract_lexical_table(&list);
        let aligner = Aligner::new(AlignConfig::default(), &s2t, &NoTranslator).unwrap();
        let corpus: Vec<SentencePair> = (0..4).map(|i| pair(i, "去 冰岛", "to iceland")).collect();
        let spans: Vec<NeSpan> = (0..4)
            .map(|i| NeSpan::new(i, Side::Source, 1, 2, NeType::Loc).unwrap())
            .collect();
        let rec = AnnotationRecognizer::new(spans);
        let out = aligner.align_corpus(&corpus, &rec, &rec).unwrap();
        assert_eq!(out.pairs.len(), 4);
        assert_eq!(out.ne_pairs, vec![NePair::new("冰岛", "iceland", NeType::Loc, 4).unwrap()]);

        let empty = aligner.align_corpus(&[], &rec, &rec).unwrap();
        assert!(empty.pairs.is_empty() && empty.ne_pairs.is_empty());
    }
}
