//! Entity recognition interface, a gazetteer recognizer and replay of
//! stand-off annotations.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::numnorm::RuleTable;
use crate::{NeSpan, NeType, Sentence, Side, TokenRange, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerError {
    #[error("sentence {sentence_id}: {source}")]
    Annotation {
        sentence_id: usize,
        #[source]
        source: TypeError,
    },
    #[error("sentence {sentence_id}: overlapping spans at tokens {first:?} and {second:?}")]
    Overlap {
        sentence_id: usize,
        first: TokenRange,
        second: TokenRange,
    },
    #[error("gazetteer entry has no tokens")]
    EmptyEntry,
}

/// Finds entities in one side of a sentence pair.
///
/// Implementations return spans that are in bounds, sorted by start and
/// pairwise non-overlapping, with surfaces filled in.
pub trait Recognizer: Sync {
    fn recognize(
        &self,
        sentence: &Sentence,
        sentence_id: usize,
        side: Side,
    ) -> Result<Vec<NeSpan>, NerError>;
}

/// Sorts `spans`, resolves their surfaces against `sentence` and rejects
/// out-of-bounds or overlapping spans.
pub fn validate_spans(spans: &mut [NeSpan], sentence: &Sentence) -> Result<(), NerError> {
    spans.sort_by_key(|s| (s.start, s.end));
    for span in spans.iter_mut() {
        span.resolve(sentence).map_err(|source| NerError::Annotation {
            sentence_id: span.sentence_id,
            source,
        })?;
    }
    for w in spans.windows(2) {
        if w[0].range().overlaps(&w[1].range()) {
            return Err(NerError::Overlap {
                sentence_id: w[0].sentence_id,
                first: w[0].range(),
                second: w[1].range(),
            });
        }
    }
    Ok(())
}

/// Dictionary recognizer with rule-based numeric/temporal detection.
///
/// Dictionary entries are matched longest-first, scanning left to right.
/// Tokens not covered by an entry are then grouped into maximal runs of
/// numeric tokens (those whose digit normalization is non-empty, or month
/// names), each run becoming one `NT` span.
#[derive(Clone, Debug)]
pub struct Gazetteer {
    entries: BTreeMap<Vec<String>, NeType>,
    longest: usize,
    numeric: Option<RuleTable>,
}

impl Default for Gazetteer {
    fn default() -> Self {
        Gazetteer {
            entries: BTreeMap::new(),
            longest: 0,
            numeric: Some(RuleTable::default()),
        }
    }
}

impl Gazetteer {
    pub fn new() -> Self {
        Gazetteer::default()
    }

    /// Disables numeric/temporal detection.
    pub fn without_numeric(mut self) -> Self {
        self.numeric = None;
        self
    }

    pub fn with_numeric_rules(mut self, rules: RuleTable) -> Self {
        self.numeric = Some(rules);
        self
    }

    /// Adds a space-separated surface. When a surface is added with two
    /// types the smaller one (`PER` < `LOC` < `NT`) is kept, so the result
    /// does not depend on insertion order.
    pub fn insert(&mut self, surface: &str, ne_type: NeType) -> Result<(), NerError> {
        let key: Vec<String> = surface.split_whitespace().map(String::from).collect();
        if key.is_empty() {
            return Err(NerError::EmptyEntry);
        }
        self.longest = self.longest.max(key.len());
        self.entries
            .entry(key)
            .and_modify(|t| *t = (*t).min(ne_type))
            .or_insert(ne_type);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn is_numeric_token(&self, rules: &RuleTable, token: &str, lang: &str) -> bool {
        !rules.normalize(token, lang).is_empty() || rules.is_month_token(token, lang)
    }

    /// Longest-match dictionary lookup followed by numeric runs.
    pub fn find(&self, sentence: &Sentence) -> Vec<(TokenRange, NeType)> {
        let tokens = sentence.tokens();
        let n = tokens.len();
        let mut covered = alloc::vec![false; n];
        let mut found = Vec::new();
        let mut i = 0;
        while i < n {
            let max = self.longest.min(n - i);
            let hit = (1..=max)
                .rev()
                .find_map(|len| self.entries.get(&tokens[i..i + len]).map(|t| (len, *t)));
            match hit {
                Some((len, t)) => {
                    found.push((TokenRange::new(i, i + len), t));
                    covered[i..i + len].iter_mut().for_each(|c| *c = true);
                    i += len;
                }
                None => i += 1,
            }
        }
        if let Some(rules) = &self.numeric {
            let mut i = 0;
            while i < n {
                if covered[i] || !self.is_numeric_token(rules, &tokens[i], sentence.lang()) {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < n
                    && !covered[i]
                    && self.is_numeric_token(rules, &tokens[i], sentence.lang())
                {
                    i += 1;
                }
                found.push((TokenRange::new(start, i), NeType::Nt));
            }
        }
        found.sort();
        found
    }
}

impl Recognizer for Gazetteer {
    fn recognize(
        &self,
        sentence: &Sentence,
        sentence_id: usize,
        side: Side,
    ) -> Result<Vec<NeSpan>, NerError> {
        self.find(sentence)
            .into_iter()
            .map(|(range, t)| {
                NeSpan::in_sentence(sentence, sentence_id, side, range, t)
                    .map_err(|source| NerError::Annotation {
                        sentence_id,
                        source,
                    })
            })
            .collect()
    }
}

/// Replays stored stand-off spans.
#[derive(Clone, Debug, Default)]
pub struct AnnotationRecognizer {
    spans: BTreeMap<(usize, Side), Vec<NeSpan>>,
}

impl AnnotationRecognizer {
    pub fn new(spans: impl IntoIterator<Item = NeSpan>) -> Self {
        let mut map: BTreeMap<(usize, Side), Vec<NeSpan>> = BTreeMap::new();
        for span in spans {
            map.entry((span.sentence_id, span.side)).or_default().push(span);
        }
        AnnotationRecognizer { spans: map }
    }

    pub fn len(&self) -> usize {
        self.spans.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }
}

impl Recognizer for AnnotationRecognizer {
    fn recognize(
        &self,
        sentence: &Sentence,
        sentence_id: usize,
        side: Side,
    ) -> Result<Vec<NeSpan>, NerError> {
        let mut spans = match self.spans.get(&(sentence_id, side)) {
            Some(s) => s.clone(),
            None => return Ok(Vec::new()),
        };
        validate_spans(&mut spans, sentence)?;
        Ok(spans)
    }
}
