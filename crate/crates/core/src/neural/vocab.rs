use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::NeuralError;

pub const BOS: usize = 0;
pub const EOS: usize = 1;
pub const UNK: usize = 2;
pub const PAD: usize = 3;
pub const RESERVED: usize = 4;

/// Character inventory with the four reserved symbols at ids 0-3.
///
/// Ordinary characters follow in code-point order, so a vocabulary built from
/// the same text is always identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharVocab {
    chars: Vec<char>,
    index: BTreeMap<char, usize>,
}

impl CharVocab {
    pub fn from_chars<I: IntoIterator<Item = char>>(chars: I) -> Result<Self, NeuralError> {
        let set: BTreeSet<char> = chars.into_iter().collect();
        if set.is_empty() {
            return Err(NeuralError::EmptyVocab);
        }
        let chars: Vec<char> = set.into_iter().collect();
        let index = chars
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i + RESERVED))
            .collect();
        Ok(CharVocab { chars, index })
    }

    pub fn from_texts<'a, I: IntoIterator<Item = &'a str>>(texts: I) -> Result<Self, NeuralError> {
        CharVocab::from_chars(texts.into_iter().flat_map(str::chars))
    }

    /// Total size including reserved symbols.
    pub fn len(&self) -> usize {
        self.chars.len() + RESERVED
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ordinary characters in id order.
    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    /// Unseen characters map to the unknown-character id.
    pub fn id(&self, c: char) -> usize {
        self.index.get(&c).copied().unwrap_or(UNK)
    }

    pub fn char_of(&self, id: usize) -> Option<char> {
        id.checked_sub(RESERVED).and_then(|i| self.chars.get(i).copied())
    }

    pub fn encode(&self, s: &str) -> Vec<usize> {
        s.chars().map(|c| self.id(c)).collect()
    }

    /// Decodes ordinary character ids; reserved ids are skipped.
    pub fn decode(&self, ids: &[usize]) -> String {
        ids.iter().filter_map(|&i| self.char_of(i)).collect()
    }
}
