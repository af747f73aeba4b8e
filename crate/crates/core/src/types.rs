use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Named-entity categories handled by the toolkit.
///
/// Organization names are not represented: their recognition and
/// cross-lingual consistency are too poor to align reliably.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeType {
    /// Person name.
    Per,
    /// Location name.
    Loc,
    /// Numerical or temporal expression.
    Nt,
}

impl NeType {
    pub const ALL: [NeType; 3] = [NeType::Per, NeType::Loc, NeType::Nt];

    pub fn as_str(self) -> &'static str {
        match self {
            NeType::Per => "PER",
            NeType::Loc => "LOC",
            NeType::Nt => "NT",
        }
    }
}

impl fmt::Display for NeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown entity type `{token}` (expected PER, LOC or NT)")]
pub struct UnknownNeType {
    pub token: String,
}

impl UnknownNeType {
    /// Organization labels are common in recognizer output and are dropped
    /// rather than rejected by some readers.
    pub fn is_org(&self) -> bool {
        self.token.eq_ignore_ascii_case("ORG")
    }
}

impl FromStr for NeType {
    type Err = UnknownNeType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("PER") {
            Ok(NeType::Per)
        } else if s.eq_ignore_ascii_case("LOC") {
            Ok(NeType::Loc)
        } else if s.eq_ignore_ascii_case("NT") {
            Ok(NeType::Nt)
        } else {
            Err(UnknownNeType {
                token: s.to_string(),
            })
        }
    }
}

/// Which half of a sentence pair a span belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Source => "source",
            Side::Target => "target",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Source => Side::Target,
            Side::Target => Side::Source,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "source" | "src" => Ok(Side::Source),
            "target" | "tgt" => Ok(Side::Target),
            other => Err(TypeError::UnknownSide(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("empty token at position {0}")]
    EmptyToken(usize),
    #[error("token {0} contains whitespace")]
    WhitespaceInToken(usize),
    #[error("source and target share language tag `{0}`")]
    SameLanguage(String),
    #[error("empty span [{start}, {end})")]
    EmptySpan { start: usize, end: usize },
    #[error("span [{start}, {end}) exceeds sentence length {len}")]
    OutOfBounds { start: usize, end: usize, len: usize },
    #[error("unknown side `{0}` (expected source or target)")]
    UnknownSide(String),
    #[error("empty surface in entity pair")]
    EmptySurface,
    #[error("entity pair count must be at least 1")]
    ZeroCount,
}

/// A pre-tokenized sentence. Tokens are non-empty and whitespace-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<String>,
    lang: String,
}

impl Sentence {
    pub fn new(tokens: Vec<String>, lang: impl Into<String>) -> Result<Self, TypeError> {
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() {
                return Err(TypeError::EmptyToken(i));
            }
            if t.chars().any(char::is_whitespace) {
                return Err(TypeError::WhitespaceInToken(i));
            }
        }
        Ok(Sentence {
            tokens,
            lang: lang.into(),
        })
    }

    /// Splits on runs of whitespace.
    pub fn from_text(text: &str, lang: impl Into<String>) -> Self {
        Sentence {
            tokens: text.split_whitespace().map(String::from).collect(),
            lang: lang.into(),
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Space-joined tokens of `range`, or `None` when out of bounds.
    pub fn join(&self, range: TokenRange) -> Option<String> {
        if range.start >= range.end || range.end > self.tokens.len() {
            return None;
        }
        Some(self.tokens[range.start..range.end].join(" "))
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePair {
    pub id: usize,
    pub src: Sentence,
    pub tgt: Sentence,
}

impl SentencePair {
    pub fn new(id: usize, src: Sentence, tgt: Sentence) -> Result<Self, TypeError> {
        if src.lang == tgt.lang {
            return Err(TypeError::SameLanguage(src.lang));
        }
        Ok(SentencePair { id, src, tgt })
    }

    pub fn side(&self, side: Side) -> &Sentence {
        match side {
            Side::Source => &self.src,
            Side::Target => &self.tgt,
        }
    }
}

/// Half-open token range `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenRange {
    pub start: usize,
    pub end: usize,
}

impl TokenRange {
    pub fn new(start: usize, end: usize) -> Self {
        TokenRange { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &TokenRange) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// A typed entity occurrence anchored to token positions of one sentence.
///
/// `surface` is the space-joined tokens of the span. Spans read from
/// stand-off annotation files carry an empty surface until
/// [`NeSpan::resolve`] is called against the sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NeSpan {
    pub sentence_id: usize,
    pub side: Side,
    pub start: usize,
    pub end: usize,
    pub ne_type: NeType,
    pub surface: String,
}

impl NeSpan {
    /// A span without surface; only checks `start < end`.
    pub fn new(
        sentence_id: usize,
        side: Side,
        start: usize,
        end: usize,
        ne_type: NeType,
    ) -> Result<Self, TypeError> {
        if start >= end {
            return Err(TypeError::EmptySpan { start, end });
        }
        Ok(NeSpan {
            sentence_id,
            side,
            start,
            end,
            ne_type,
            surface: String::new(),
        })
    }

    /// A span anchored to `sentence`, with its surface filled in.
    pub fn in_sentence(
        sentence: &Sentence,
        sentence_id: usize,
        side: Side,
        range: TokenRange,
        ne_type: NeType,
    ) -> Result<Self, TypeError> {
        let mut span = NeSpan::new(sentence_id, side, range.start, range.end, ne_type)?;
        span.resolve(sentence)?;
        Ok(span)
    }

    pub fn range(&self) -> TokenRange {
        TokenRange::new(self.start, self.end)
    }

    /// Checks bounds against `sentence` and fills `surface`.
    pub fn resolve(&mut self, sentence: &Sentence) -> Result<(), TypeError> {
        if self.start >= self.end {
            return Err(TypeError::EmptySpan {
                start: self.start,
                end: self.end,
            });
        }
        match sentence.join(self.range()) {
            Some(surface) => {
                self.surface = surface;
                Ok(())
            }
            None => Err(TypeError::OutOfBounds {
                start: self.start,
                end: self.end,
                len: sentence.len(),
            }),
        }
    }
}

/// A bilingual entity pair with an occurrence count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NePair {
    pub src_surface: String,
    pub tgt_surface: String,
    pub ne_type: NeType,
    pub count: u64,
}

impl NePair {
    pub fn new(
        src_surface: impl Into<String>,
        tgt_surface: impl Into<String>,
        ne_type: NeType,
        count: u64,
    ) -> Result<Self, TypeError> {
        let (src_surface, tgt_surface) = (src_surface.into(), tgt_surface.into());
        if src_surface.trim().is_empty() || tgt_surface.trim().is_empty() {
            return Err(TypeError::EmptySurface);
        }
        if count == 0 {
            return Err(TypeError::ZeroCount);
        }
        Ok(NePair {
            src_surface,
            tgt_surface,
            ne_type,
            count,
        })
    }

    /// The same pair with source and target exchanged.
    pub fn swapped(&self) -> NePair {
        NePair {
            src_surface: self.tgt_surface.clone(),
            tgt_surface: self.src_surface.clone(),
            ne_type: self.ne_type,
            count: self.count,
        }
    }
}
