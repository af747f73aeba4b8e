//! Normalization of numerical and temporal expressions to digit strings.
//!
//! No translation model exists for numbers and dates, so they are compared
//! through a crude common form: number words one to nine (Chinese or
//! English) become digits, month names become month numbers, and everything
//! else, including `0`, separators, units and the multipliers 十/百/千, is
//! dropped. `百分之四点二` and `4,200` both become `42`.
//!
//! The rewriting rules are data: a TSV table of
//! `pattern<TAB>replacement<TAB>lang` rows applied longest-pattern-first.
//! The default table ships with the crate.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::simdist::{self, SimScore};

const DEFAULT_RULES: &str = include_str!("../rules/numeric.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("line {line}: expected 3 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: empty pattern")]
    EmptyPattern { line: usize },
    #[error("line {line}: pattern `{pattern}` contains an ASCII digit")]
    DigitInPattern { line: usize, pattern: String },
    #[error("line {line}: replacement `{replacement}` must be ASCII digits")]
    BadReplacement { line: usize, replacement: String },
}

/// A string over the digits `1`-`9`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitString(String);

impl DigitString {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug)]
struct Rule {
    pattern: Vec<char>,
    replacement: String,
    lang: String,
    // ASCII-letter patterns: case-insensitive, whole words only
    word: bool,
}

impl Rule {
    fn applies_to(&self, lang: &str) -> bool {
        lang_matches(&self.lang, lang)
    }

    fn matches_at(&self, text: &[char], at: usize) -> bool {
        let end = at + self.pattern.len();
        if end > text.len() {
            return false;
        }
        if !self.word {
            return text[at..end] == self.pattern[..];
        }
        let left_ok = at == 0 || !text[at - 1].is_ascii_alphabetic();
        let right_ok = end == text.len() || !text[end].is_ascii_alphabetic();
        left_ok
            && right_ok
            && text[at..end]
                .iter()
                .zip(&self.pattern)
                .all(|(a, b)| a.to_ascii_lowercase() == *b)
    }
}

fn lang_matches(rule_lang: &str, lang: &str) -> bool {
    if rule_lang == "*" || rule_lang == lang {
        return true;
    }
    // "zh" covers "zh-CN", "zh_TW", ...
    lang.len() > rule_lang.len()
        && lang.starts_with(rule_lang)
        && matches!(lang.as_bytes()[rule_lang.len()], b'-' | b'_')
}

/// Rewriting rules for [`RuleTable::normalize`].
#[derive(Clone, Debug)]
pub struct RuleTable {
    // longest pattern first; ties by pattern for determinism
    rules: Vec<Rule>,
}

impl Default for RuleTable {
    fn default() -> Self {
        RuleTable::parse(DEFAULT_RULES).expect("packaged numeric rule table is valid")
    }
}

impl RuleTable {
    /// Parses a TSV rule table. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 3 {
                return Err(RuleError::Columns {
                    line,
                    found: cols.len(),
                });
            }
            let (pattern, replacement, lang) = (cols[0].trim(), cols[1].trim(), cols[2].trim());
            if pattern.is_empty() {
                return Err(RuleError::EmptyPattern { line });
            }
            if pattern.chars().any(|c| c.is_ascii_digit()) {
                return Err(RuleError::DigitInPattern {
                    line,
                    pattern: pattern.to_owned(),
                });
            }
            if replacement.is_empty() || !replacement.chars().all(|c| c.is_ascii_digit()) {
                return Err(RuleError::BadReplacement {
                    line,
                    replacement: replacement.to_owned(),
                });
            }
            let word = pattern.chars().all(|c| c.is_ascii_alphabetic());
            let pattern = if word {
                pattern.to_ascii_lowercase().chars().collect()
            } else {
                pattern.chars().collect()
            };
            rules.push(Rule {
                pattern,
                replacement: replacement.to_owned(),
                lang: lang.to_owned(),
                word,
            });
        }
        rules.sort_by(|a, b| {
            b.pattern
                .len()
                .cmp(&a.pattern.len())
                .then_with(|| a.pattern.cmp(&b.pattern))
                .then_with(|| a.lang.cmp(&b.lang))
        });
        Ok(RuleTable { rules })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Applies the rules and keeps only the digits 1-9.
    pub fn normalize(&self, s: &str, lang: &str) -> DigitString {
        let text: Vec<char> = s.chars().collect();
        let active: Vec<&Rule> = self.rules.iter().filter(|r| r.applies_to(lang)).collect();
        let mut out = String::new();
        let mut i = 0;
        while i < text.len() {
            match active.iter().find(|r| r.matches_at(&text, i)) {
                Some(rule) => {
                    out.extend(rule.replacement.chars().filter(|c| is_kept_digit(*c)));
                    i += rule.pattern.len();
                }
                None => {
                    if is_kept_digit(text[i]) {
                        out.push(text[i]);
                    }
                    i += 1;
                }
            }
        }
        DigitString(out)
    }

    /// Whether a rule of this table rewrites the whole of `token` to a
    /// month number.
    pub fn is_month_token(&self, token: &str, lang: &str) -> bool {
        let text: Vec<char> = token.chars().collect();
        month_number(&text, lang).is_some()
    }
}

fn is_kept_digit(c: char) -> bool {
    matches!(c, '1'..='9')
}

/// Normalizes with the packaged rule table.
pub fn normalize_numeric(s: &str, lang: &str) -> DigitString {
    RuleTable::default().normalize(s, lang)
}

/// Similarity of two numeric expressions through their digit strings; 0 when
/// either side normalizes to nothing.
pub fn nt_similarity(
    table: &RuleTable,
    src: &str,
    src_lang: &str,
    tgt: &str,
    tgt_lang: &str,
) -> SimScore {
    let a = table.normalize(src, src_lang);
    let b = table.normalize(tgt, tgt_lang);
    if a.is_empty() || b.is_empty() {
        return SimScore::ZERO;
    }
    let a: Vec<char> = a.as_str().chars().collect();
    let b: Vec<char> = b.as_str().chars().collect();
    // digit strings past the DP length limit cannot be entity spans
    simdist::similarity_chars(&a, &b).unwrap_or(SimScore::ZERO)
}

const EN_MONTHS: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

const EN_MONTH_ABBR: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];

const EN_DIGIT_WORDS: [&str; 9] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
];

fn zh_digit(c: char) -> Option<u64> {
    Some(match c {
        '〇' | '零' => 0,
        '一' => 1,
        '二' | '两' => 2,
        '三' => 3,
        '四' => 4,
        '五' => 5,
        '六' => 6,
        '七' => 7,
        '八' => 8,
        '九' => 9,
        _ => return None,
    })
}

fn zh_multiplier(c: char) -> Option<u64> {
    Some(match c {
        '十' => 10,
        '百' => 100,
        '千' => 1_000,
        '万' => 10_000,
        '亿' => 100_000_000,
        _ => return None,
    })
}

fn is_zh_numeral(c: char) -> bool {
    zh_digit(c).is_some() || zh_multiplier(c).is_some()
}

/// Reads a run of Chinese numerals as a decimal string: positional
/// (`二〇一五` → `2015`) when no multiplier occurs, otherwise by value
/// (`一百零五` → `105`).
fn zh_integer(run: &[char]) -> String {
    if run.iter().all(|c| zh_digit(*c).is_some()) {
        return run.iter().filter_map(|c| zh_digit(*c)).map(|d| (b'0' + d as u8) as char).collect();
    }
    let (mut total, mut section, mut number) = (0u64, 0u64, 0u64);
    for &c in run {
        if let Some(d) = zh_digit(c) {
            number = d;
        } else if let Some(m) = zh_multiplier(c) {
            match m {
                10_000 | 100_000_000 => {
                    total = (total + section + number).saturating_mul(m);
                    section = 0;
                }
                _ => {
                    let n = if number == 0 { 1 } else { number };
                    section += n.saturating_mul(m);
                }
            }
            number = 0;
        }
    }
    (total + section + number).to_string()
}

fn month_number(text: &[char], lang: &str) -> Option<usize> {
    if lang_matches("zh", lang) {
        let (last, body) = text.split_last()?;
        if *last != '月' || body.is_empty() {
            return None;
        }
        let n: u64 = if body.iter().all(|c| c.is_ascii_digit()) {
            body.iter().collect::<String>().parse().ok()?
        } else if body.iter().all(|c| is_zh_numeral(*c)) {
            zh_integer(body).parse().ok()?
        } else {
            return None;
        };
        return (1..=12).contains(&n).then_some(n as usize);
    }
    if lang_matches("en", lang) {
        let word: String = text
            .iter()
            .collect::<String>()
            .trim_end_matches('.')
            .to_ascii_lowercase();
        if word.is_empty() {
            return None;
        }
        for (i, name) in EN_MONTHS.iter().enumerate() {
            if word == name.to_ascii_lowercase() || word == EN_MONTH_ABBR[i] {
                return Some(i + 1);
            }
        }
        if word == "sept" {
            return Some(9);
        }
    }
    None
}

/// Renders one Chinese token with Arabic digits: numeral runs become
/// numbers, `点` a decimal point, `百分之X` becomes `X%`, and the
/// day/year markers after a number are dropped.
fn render_zh_token(token: &str) -> String {
    let chars: Vec<char> = token.chars().collect();
    let (body, percent) = match token.strip_prefix("百分之") {
        Some(rest) => (rest.chars().collect::<Vec<_>>(), true),
        None => (chars, false),
    };
    let mut out = String::new();
    let mut i = 0;
    while i < body.len() {
        let c = body[i];
        if is_zh_numeral(c) {
            let start = i;
            while i < body.len() && is_zh_numeral(body[i]) {
                i += 1;
            }
            out.push_str(&zh_integer(&body[start..i]));
            continue;
        }
        let after_number = out.chars().last().is_some_and(|d| d.is_ascii_digit());
        match c {
            '点' if after_number => out.push('.'),
            '日' | '号' | '年' if after_number => {}
            _ => out.push(c),
        }
        i += 1;
    }
    if percent {
        out.push('%');
    }
    out
}

/// Rule-based rendering of a numerical/temporal expression into the other
/// language: digits are written as Arabic numerals and month names are
/// rendered in the target language. Unknown material is copied through.
pub fn render_nt(surface: &str, src_lang: &str, tgt_lang: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    for token in surface.split_whitespace() {
        let chars: Vec<char> = token.chars().collect();
        let after_number = out
            .last()
            .and_then(|t| t.chars().last())
            .is_some_and(|d| d.is_ascii_digit());
        if after_number && lang_matches("zh", src_lang) && matches!(token, "日" | "号" | "年") {
            continue;
        }
        let rendered = match month_number(&chars, src_lang) {
            Some(m) if lang_matches("en", tgt_lang) => EN_MONTHS[m - 1].to_string(),
            Some(m) if lang_matches("zh", tgt_lang) => alloc::format!("{m}月"),
            _ if lang_matches("zh", src_lang) => render_zh_token(token),
            _ if lang_matches("en", src_lang) => {
                let lower = token.to_ascii_lowercase();
                match EN_DIGIT_WORDS.iter().position(|w| *w == lower) {
                    Some(d) => (d + 1).to_string(),
                    None => token.to_string(),
                }
            }
            _ => token.to_string(),
        };
        if !rendered.is_empty() {
            out.push(rendered);
        }
    }
    out.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        assert_eq!(normalize_numeric("百分之四点二", "zh").as_str(), "42");
        assert_eq!(normalize_numeric("4,200", "en").as_str(), "42");
        assert_eq!(normalize_numeric("七", "zh").as_str(), "7");
        assert_eq!(normalize_numeric("三月", "zh").as_str(), "3");
    }

    #[test]
    fn months() {
        assert_eq!(normalize_numeric("三月 五 日", "zh").as_str(), "35");
        assert_eq!(normalize_numeric("March 5", "en").as_str(), "35");
        assert_eq!(normalize_numeric("十月", "zh").as_str(), "1");
        assert_eq!(normalize_numeric("十一月", "zh").as_str(), "11");
        assert_eq!(normalize_numeric("十二月", "zh").as_str(), "12");
        assert_eq!(normalize_numeric("Dec. 25", "en").as_str(), "1225");
        // month abbreviations only match whole words
        assert_eq!(normalize_numeric("Marco", "en").as_str(), "");
    }

    #[test]
    fn english_words_are_word_bounded() {
        assert_eq!(normalize_numeric("one", "en").as_str(), "1");
        assert_eq!(normalize_numeric("Seven", "en").as_str(), "7");
        assert_eq!(normalize_numeric("someone", "en").as_str(), "");
        assert_eq!(normalize_numeric("seventh", "en").as_str(), "7");
        assert_eq!(normalize_numeric("ten", "en").as_str(), "");
        assert_eq!(normalize_numeric("twenty-one", "en").as_str(), "21");
    }

    #[test]
    fn zero_and_multipliers_are_dropped() {
        assert_eq!(normalize_numeric("一百零五", "zh").as_str(), "15");
        assert_eq!(normalize_numeric("105", "en").as_str(), "15");
        assert_eq!(normalize_numeric("第一", "zh").as_str(), "1");
    }

    #[test]
    fn rules_are_scoped_by_language() {
        assert_eq!(normalize_numeric("三", "en").as_str(), "");
        assert_eq!(normalize_numeric("three", "zh").as_str(), "");
        assert_eq!(normalize_numeric("三", "zh-CN").as_str(), "3");
        assert_eq!(normalize_numeric("３", "de").as_str(), "3");
    }

    #[test]
    fn nt_similarity_examples() {
        let t = RuleTable::default();
        assert_eq!(nt_similarity(&t, "百分之四点二", "zh", "4.2%", "en"), SimScore::ONE);
        assert_eq!(nt_similarity(&t, "三月 五 日", "zh", "March 5", "en"), SimScore::ONE);
        assert_eq!(nt_similarity(&t, "第一", "zh", "seventh", "en"), SimScore::ZERO);
        assert_eq!(nt_similarity(&t, "大使馆", "zh", "7", "en"), SimScore::ZERO);
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            RuleTable::parse("a\t1\n"),
            Err(RuleError::Columns { line: 1, found: 2 })
        ));
        assert!(matches!(
            RuleTable::parse("# c\n1st\t1\ten\n"),
            Err(RuleError::DigitInPattern { line: 2, .. })
        ));
        assert!(matches!(
            RuleTable::parse("one\tx\ten\n"),
            Err(RuleError::BadReplacement { .. })
        ));
        let t = RuleTable::parse("eins\t1\tde\nzwei\t2\tde\n").unwrap();
        assert_eq!(t.normalize("Zwei und eins", "de").as_str(), "21");
    }

    #[test]
    fn month_tokens() {
        let t = RuleTable::default();
        assert!(t.is_month_token("三月", "zh"));
        assert!(t.is_month_token("12月", "zh"));
        assert!(t.is_month_token("Sept.", "en"));
        assert!(!t.is_month_token("十三月", "zh"));
        assert!(!t.is_month_token("Marco", "en"));
    }

    #[test]
    fn rendering() {
        assert_eq!(render_nt("百分之四点二", "zh", "en"), "4.2%");
        assert_eq!(render_nt("四点二", "zh", "en"), "4.2");
        assert_eq!(render_nt("三月 五 日", "zh", "en"), "March 5");
        assert_eq!(render_nt("二十三", "zh", "en"), "23");
        assert_eq!(render_nt("一百零五", "zh", "en"), "105");
        assert_eq!(render_nt("三万五千", "zh", "en"), "35000");
        assert_eq!(render_nt("二〇一五年", "zh", "en"), "2015");
        assert_eq!(render_nt("March 5", "en", "zh"), "3月 5");
        assert_eq!(render_nt("seven", "en", "zh"), "7");
    }

    proptest! {
        #[test]
        fn closed_alphabet_and_idempotent(s in "\\PC{0,24}", zh in any::<bool>()) {
            let lang = if zh { "zh" } else { "en" };
            let once = normalize_numeric(&s, lang);
            prop_assert!(once.as_str().chars().all(|c| ('1'..='9').contains(&c)));
            prop_assert_eq!(normalize_numeric(once.as_str(), lang), once);
        }
    }
}
