//! Placeholder rewriting of parallel text, lexical tables, and restoration
//! of entity translations in translated output.
//!
//! Aligned entities are replaced on both sides by typed, indexed symbols
//! (`LOC1`, `PER2`, `NT1`, ...). Any corpus token that already looks like a
//! symbol is escaped with a leading backslash (one more per existing level),
//! so placeholders in rewritten text only ever come from replacement.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::align::{AlignedPair, Translator};
use crate::numnorm::render_nt;
use crate::{NePair, NeSpan, NeType, Sentence, SentencePair, TokenRange};

/// Words kept by [`Vocabulary::from_ranked`] by default.
pub const DEFAULT_VOCAB_SIZE: usize = 30_000;

const ESCAPE: char = '\\';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("sentence {sentence_id}: {side} ranges {first:?} and {second:?} overlap")]
    Overlap {
        sentence_id: usize,
        side: &'static str,
        first: TokenRange,
        second: TokenRange,
    },
    #[error("sentence {sentence_id}: range {range:?} outside {side} sentence of {len} tokens")]
    OutOfBounds {
        sentence_id: usize,
        side: &'static str,
        range: TokenRange,
        len: usize,
    },
    #[error("aligned pair belongs to sentence {found}, not {expected}")]
    WrongSentence { expected: usize, found: usize },
    #[error("invalid symbol `{0}`")]
    BadSymbol(String),
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(Symbol),
}

/// A typed, 1-based placeholder such as `LOC2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub ne_type: NeType,
    pub index: usize,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ne_type, self.index)
    }
}

impl FromStr for Symbol {
    type Err = PipelineError;

    /// Accepts canonical symbols only: a type name followed by a positive
    /// index without leading zeros.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PipelineError::BadSymbol(s.to_string());
        let (name, digits) = split_placeholder(s).ok_or_else(bad)?;
        if digits.starts_with('0') {
            return Err(bad());
        }
        let index = digits.parse::<usize>().map_err(|_| bad())?;
        let ne_type = match name {
            "PER" => NeType::Per,
            "LOC" => NeType::Loc,
            _ => NeType::Nt,
        };
        Ok(Symbol { ne_type, index })
    }
}

/// Splits a token of the form `^(PER|LOC|NT)[0-9]+$`.
fn split_placeholder(token: &str) -> Option<(&str, &str)> {
    let name = ["PER", "LOC", "NT"]
        .into_iter()
        .find(|n| token.starts_with(n))?;
    let digits = &token[name.len()..];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((name, digits))
}

/// Whether `token` has placeholder shape (`^(PER|LOC|NT)[0-9]+$`).
pub fn is_placeholder(token: &str) -> bool {
    split_placeholder(token).is_some()
}

/// Whether `token` is a placeholder behind zero or more escapes.
fn is_escapable(token: &str) -> bool {
    is_placeholder(token.trim_start_matches(ESCAPE))
}

/// Escapes a corpus token so it cannot be read as a placeholder.
pub fn escape_token(token: &str) -> String {
    if is_escapable(token) {
        let mut out = String::with_capacity(token.len() + 1);
        out.push(ESCAPE);
        out.push_str(token);
        out
    } else {
        token.to_string()
    }
}

/// Inverse of [`escape_token`] for tokens that are not placeholders.
pub fn unescape_token(token: &str) -> &str {
    match token.strip_prefix(ESCAPE) {
        Some(rest) if is_escapable(rest) => rest,
        _ => token,
    }
}

/// One replaced entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolEntry {
    pub symbol: Symbol,
    /// Original source-side surface.
    pub surface: String,
    pub ne_type: NeType,
    /// Target-side surface, known when the entity came from an alignment.
    pub translation: Option<String>,
}

/// Per-sentence placeholder table, in symbol order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolMap {
    entries: BTreeMap<Symbol, SymbolEntry>,
}

impl SymbolMap {
    pub fn new() -> Self {
        SymbolMap::default()
    }

    pub fn insert(&mut self, entry: SymbolEntry) -> Result<(), PipelineError> {
        if self.entries.contains_key(&entry.symbol) {
            return Err(PipelineError::DuplicateSymbol(entry.symbol));
        }
        self.entries.insert(entry.symbol, entry);
        Ok(())
    }

    pub fn get(&self, symbol: &Symbol) -> Option<&SymbolEntry> {
        self.entries.get(symbol)
    }

    pub fn entries(&self) -> impl Iterator<Item = &SymbolEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Assigns per-type indices in order of appearance.
#[derive(Default)]
struct Indexer {
    next: BTreeMap<NeType, usize>,
}

impl Indexer {
    fn next(&mut self, t: NeType) -> Symbol {
        let n = self.next.entry(t).or_insert(0);
        *n += 1;
        Symbol {
            ne_type: t,
            index: *n,
        }
    }
}

/// Rewrites `tokens`, putting `symbols[i]` in place of `ranges[i]` and
/// escaping everything else. `ranges` must be sorted and disjoint.
fn rewrite(tokens: &[String], ranges: &[(TokenRange, Symbol)]) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    for (range, symbol) in ranges {
        out.extend(tokens[i..range.start].iter().map(|t| escape_token(t)));
        out.push(symbol.to_string());
        i = range.end;
    }
    out.extend(tokens[i..].iter().map(|t| escape_token(t)));
    out
}

fn check_side(
    sentence_id: usize,
    side: &'static str,
    len: usize,
    ranges: &mut [(TokenRange, Symbol)],
) -> Result<(), PipelineError> {
    ranges.sort();
    for (range, _) in ranges.iter() {
        if range.start >= range.end || range.end > len {
            return Err(PipelineError::OutOfBounds {
                sentence_id,
                side,
                range: *range,
                len,
            });
        }
    }
    for w in ranges.windows(2) {
        if w[0].0.overlaps(&w[1].0) {
            return Err(PipelineError::Overlap {
                sentence_id,
                side,
                first: w[0].0,
                second: w[1].0,
            });
        }
    }
    Ok(())
}

fn new_sentence(tokens: Vec<String>, lang: &str) -> Sentence {
    Sentence::new(tokens, lang).expect("rewritten tokens are non-empty and whitespace-free")
}

/// Replaces every aligned entity on both sides with the same symbol.
///
/// Indices are assigned per type in source order of appearance.
pub fn replace_training_pair(
    pair: &SentencePair,
    aligned: &[AlignedPair],
) -> Result<(SentencePair, SymbolMap), PipelineError> {
    if let Some(a) = aligned.iter().find(|a| a.sentence_id != pair.id) {
        return Err(PipelineError::WrongSentence {
            expected: pair.id,
            found: a.sentence_id,
        });
    }
    let mut order: Vec<&AlignedPair> = aligned.iter().collect();
    order.sort_by_key(|a| (a.src_span.start, a.src_span.end));

    let mut indexer = Indexer::default();
    let mut map = SymbolMap::new();
    let mut src_ranges = Vec::with_capacity(order.len());
    let mut tgt_ranges = Vec::with_capacity(order.len());
    for a in order {
        let symbol = indexer.next(a.ne_type);
        src_ranges.push((a.src_span.range(), symbol));
        tgt_ranges.push((a.tgt_range, symbol));
    }
    check_side(pair.id, "source", pair.src.len(), &mut src_ranges)?;
    check_side(pair.id, "target", pair.tgt.len(), &mut tgt_ranges)?;

    for (range, symbol) in &src_ranges {
        let tgt = tgt_ranges
            .iter()
            .find(|(_, s)| s == symbol)
            .map(|(r, _)| *r)
            .expect("every symbol has a target range");
        map.insert(SymbolEntry {
            symbol: *symbol,
            surface: pair.src.join(*range).expect("range checked"),
            ne_type: symbol.ne_type,
            translation: pair.tgt.join(tgt),
        })?;
    }

    let src = new_sentence(rewrite(pair.src.tokens(), &src_ranges), pair.src.lang());
    let tgt = new_sentence(rewrite(pair.tgt.tokens(), &tgt_ranges), pair.tgt.lang());
    let rewritten = SentencePair {
        id: pair.id,
        src,
        tgt,
    };
    Ok((rewritten, map))
}

/// The most frequent words of a language.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: BTreeMap<String, ()>,
}

impl Vocabulary {
    /// Keeps the first `limit` words of a frequency-ranked list.
    pub fn from_ranked<'a>(words: impl IntoIterator<Item = &'a str>, limit: usize) -> Self {
        Vocabulary {
            words: words
                .into_iter()
                .take(limit)
                .map(|w| (w.to_string(), ()))
                .collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Replaces recognized entities in a sentence to be translated.
///
/// With `oov_only` and a vocabulary, a span is kept when all of its tokens
/// are in the vocabulary.
pub fn replace_test_sentence(
    sentence: &Sentence,
    spans: &[NeSpan],
    vocab: Option<&Vocabulary>,
    oov_only: bool,
) -> (Sentence, SymbolMap) {
    let mut order: Vec<&NeSpan> = spans
        .iter()
        .filter(|s| s.start < s.end && s.end <= sentence.len())
        .collect();
    order.sort_by_key(|s| (s.start, s.end));

    let mut indexer = Indexer::default();
    let mut map = SymbolMap::new();
    let mut ranges = Vec::new();
    let mut last_end = 0;
    for span in order {
        if span.start < last_end {
            continue;
        }
        let tokens = &sentence.tokens()[span.start..span.end];
        let known = match vocab {
            Some(v) if oov_only => tokens.iter().all(|t| v.contains(t)),
            _ => false,
        };
        if known {
            continue;
        }
        let symbol = indexer.next(span.ne_type);
        ranges.push((span.range(), symbol));
        last_end = span.end;
        map.entries.insert(
            symbol,
            SymbolEntry {
                symbol,
                surface: tokens.join(" "),
                ne_type: span.ne_type,
                translation: None,
            },
        );
    }
    let rewritten = new_sentence(rewrite(sentence.tokens(), &ranges), sentence.lang());
    (rewritten, map)
}

/// Entity translations with counts, most frequent first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LexicalTable {
    entries: BTreeMap<String, Vec<(String, u64)>>,
}

impl LexicalTable {
    pub fn new() -> Self {
        LexicalTable::default()
    }

    /// Translations for a source surface, by count descending then
    /// lexicographically.
    pub fn get(&self, src: &str) -> &[(String, u64)] {
        self.entries.get(src).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn top(&self, src: &str) -> Option<&str> {
        self.get(src).first().map(|(t, _)| t.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.entries
            .iter()
            .flat_map(|(s, list)| list.iter().map(move |(t, c)| (s.as_str(), t.as_str(), *c)))
    }

    /// Number of distinct source surfaces.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The same table read in the other direction.
    pub fn reversed(&self) -> LexicalTable {
        build_table(self.iter().map(|(s, t, c)| (t, s, c)))
    }
}

impl Translator for LexicalTable {
    fn candidates(&self, surface: &str, k: usize) -> Vec<String> {
        self.get(surface)
            .iter()
            .take(k)
            .map(|(t, _)| t.clone())
            .collect()
    }
}

fn build_table<'a>(rows: impl Iterator<Item = (&'a str, &'a str, u64)>) -> LexicalTable {
    let mut counts: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();
    for (s, t, c) in rows {
        if s.is_empty() || t.is_empty() || c == 0 {
            continue;
        }
        *counts.entry(s).or_default().entry(t).or_default() += c;
    }
    let entries = counts
        .into_iter()
        .map(|(s, tgts)| {
            let mut list: Vec<(String, u64)> =
                tgts.into_iter().map(|(t, c)| (t.to_string(), c)).collect();
            list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            (s.to_string(), list)
        })
        .collect();
    LexicalTable { entries }
}

/// Groups entity pairs by source surface and sums their counts.
pub fn extract_lexical_table(pairs: &[NePair]) -> LexicalTable {
    build_table(
        pairs
            .iter()
            .map(|p| (p.src_surface.as_str(), p.tgt_surface.as_str(), p.count)),
    )
}

/// Where a restored entity came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Table,
    Translator,
    Rules,
    /// Nothing produced a translation; the source surface was copied.
    Copied,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RestoreReport {
    pub from_table: usize,
    pub from_translator: usize,
    pub from_rules: usize,
    /// Placeholders restored by copying the source surface.
    pub copied: Vec<Symbol>,
    /// Placeholders in the output without a map entry; they are dropped.
    pub dropped: Vec<String>,
    /// Map entries whose placeholder never appears in the output.
    pub unrealized: Vec<Symbol>,
}

impl RestoreReport {
    pub fn warnings(&self) -> usize {
        self.copied.len() + self.dropped.len() + self.unrealized.len()
    }

    pub fn merge(&mut self, other: RestoreReport) {
        self.from_table += other.from_table;
        self.from_translator += other.from_translator;
        self.from_rules += other.from_rules;
        self.copied.extend(other.copied);
        self.dropped.extend(other.dropped);
        self.unrealized.extend(other.unrealized);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestoreConfig {
    /// Language of the original (pre-replacement) source text.
    pub src_lang: String,
}

/// Translation of one map entry through the backoff chain: lexical table,
/// then the translator's 1-best for `PER`/`LOC`, then rule-based rendering
/// for `NT`, then a copy of the source surface.
pub fn resolve(
    entry: &SymbolEntry,
    table: &LexicalTable,
    translator: &dyn Translator,
    src_lang: &str,
    tgt_lang: &str,
) -> (String, Resolution) {
    if let Some(t) = table.top(&entry.surface) {
        return (t.to_string(), Resolution::Table);
    }
    if entry.ne_type != NeType::Nt {
        if let Some(t) = translator
            .candidates(&entry.surface, 1)
            .into_iter()
            .find(|t| !t.trim().is_empty())
        {
            return (t, Resolution::Translator);
        }
    } else {
        let t = render_nt(&entry.surface, src_lang, tgt_lang);
        if !t.trim().is_empty() {
            return (t, Resolution::Rules);
        }
    }
    (entry.surface.clone(), Resolution::Copied)
}

/// Puts entity translations back in place of the placeholders of `output`
/// and unescapes all other tokens.
pub fn restore(
    output: &Sentence,
    map: &SymbolMap,
    table: &LexicalTable,
    translator: &dyn Translator,
    cfg: &RestoreConfig,
) -> (Sentence, RestoreReport) {
    let mut report = RestoreReport::default();
    let mut resolved: BTreeMap<Symbol, String> = BTreeMap::new();
    let mut tokens: Vec<String> = Vec::with_capacity(output.len());
    for token in output.tokens() {
        if !is_placeholder(token) {
            tokens.push(unescape_token(token).to_string());
            continue;
        }
        let entry = token.parse::<Symbol>().ok().and_then(|s| map.get(&s));
        let Some(entry) = entry else {
            report.dropped.push(token.clone());
            continue;
        };
        let text = resolved.entry(entry.symbol).or_insert_with(|| {
            let (text, how) = resolve(entry, table, translator, &cfg.src_lang, output.lang());
            match how {
                Resolution::Table => report.from_table += 1,
                Resolution::Translator => report.from_translator += 1,
                Resolution::Rules => report.from_rules += 1,
                Resolution::Copied => report.copied.push(entry.symbol),
            }
            text
        });
        tokens.extend(text.split_whitespace().map(String::from));
    }
    report.unrealized = map
        .entries()
        .map(|e| e.symbol)
        .filter(|s| !resolved.contains_key(s))
        .collect();
    (new_sentence(tokens, output.lang()), report)
}
