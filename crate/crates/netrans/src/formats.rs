//! Readers and writers for the toolkit's plain-text and binary files.
//!
//! Text files are UTF-8 with one record per line; a leading byte-order mark
//! is ignored. Tab-separated files reject fields containing tabs or line
//! breaks on write, so every write can be read back exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use netrans_core::align::{AlignedPair, MatchDirection};
use netrans_core::neural::{self, NeuralError, Seq2SeqModel};
use netrans_core::numnorm::{RuleError, RuleTable};
use netrans_core::pipeline::{LexicalTable, Symbol, SymbolEntry, SymbolMap, Vocabulary};
use netrans_core::{NePair, NeSpan, NeType, Sentence, SentencePair, Side, TokenRange};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not valid UTF-8")]
    Encoding { path: PathBuf },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{src_path} has {src_lines} lines but {tgt_path} has {tgt_lines}")]
    LineCount {
        src_path: PathBuf,
        tgt_path: PathBuf,
        src_lines: usize,
        tgt_lines: usize,
    },
    #[error("{path}:{line}: empty line")]
    EmptyLine { path: PathBuf, line: usize },
    #[error("cannot write field {field:?}: contains a tab or line break")]
    Field { field: String },
    #[error("{path}: {source}")]
    Model {
        path: PathBuf,
        #[source]
        source: NeuralError,
    },
    #[error("{path}: {source}")]
    Rules {
        path: PathBuf,
        #[source]
        source: RuleError,
    },
}

type Result<T> = std::result::Result<T, FormatError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a UTF-8 file, dropping a leading byte-order mark.
pub fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let text = String::from_utf8(bytes).map_err(|_| FormatError::Encoding {
        path: path.to_path_buf(),
    })?;
    Ok(match text.strip_prefix('\u{feff}') {
        Some(rest) => rest.to_string(),
        None => text,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

/// Lines of `text` with their 1-based numbers; a final line terminator does
/// not start another line and `\r\n` endings are accepted.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
}

/// Data lines of a TSV file: blank lines and `#` comments are skipped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    numbered_lines(text).filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn check_field(field: &str) -> Result<&str> {
    if field.contains(['\t', '\n', '\r']) {
        Err(FormatError::Field {
            field: field.to_string(),
        })
    } else {
        Ok(field)
    }
}

fn parse_usize(path: &Path, line: usize, what: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid {what} `{s}`")))
}

/// Sentences of one side of a corpus, one per line.
pub fn parse_sentences(path: &Path, text: &str, lang: &str) -> Result<Vec<Sentence>> {
    numbered_lines(text)
        .map(|(line, l)| {
            if l.trim().is_empty() {
                Err(FormatError::EmptyLine {
                    path: path.to_path_buf(),
                    line,
                })
            } else {
                Ok(Sentence::from_text(l, lang))
            }
        })
        .collect()
}

pub fn read_sentences(path: &Path, lang: &str) -> Result<Vec<Sentence>> {
    parse_sentences(path, &read_text(path)?, lang)
}

/// Reads a sentence-aligned corpus; line `i` of both files becomes pair `i`.
pub fn read_parallel_corpus(
    src_path: &Path,
    tgt_path: &Path,
    src_lang: &str,
    tgt_lang: &str,
) -> Result<Vec<SentencePair>> {
    let src_text = read_text(src_path)?;
    let tgt_text = read_text(tgt_path)?;
    let src_lines = numbered_lines(&src_text).count();
    let tgt_lines = numbered_lines(&tgt_text).count();
    if src_lines != tgt_lines {
        return Err(FormatError::LineCount {
            src_path: src_path.to_path_buf(),
            tgt_path: tgt_path.to_path_buf(),
            src_lines,
            tgt_lines,
        });
    }
    let src = parse_sentences(src_path, &src_text, src_lang)?;
    let tgt = parse_sentences(tgt_path, &tgt_text, tgt_lang)?;
    src.into_iter()
        .zip(tgt)
        .enumerate()
        .map(|(id, (s, t))| {
            SentencePair::new(id, s, t).map_err(|e| parse_err(src_path, id + 1, e.to_string()))
        })
        .collect()
}

/// One sentence per line, tokens joined by single spaces.
pub fn format_sentences<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&s.text());
        out.push('\n');
    }
    out
}

pub fn write_sentences<'a>(
    path: &Path,
    sentences: impl IntoIterator<Item = &'a Sentence>,
) -> Result<()> {
    write_text(path, &format_sentences(sentences))
}

/// Entity pairs: `src<TAB>tgt<TAB>type[<TAB>count]`.
pub fn parse_ne_pairs(path: &Path, text: &str) -> Result<Vec<NePair>> {
    data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected 3 or 4 tab-separated columns, found {}", cols.len()),
                ));
            }
            let ne_type: NeType = cols[2]
                .parse()
                .map_err(|e: netrans_core::UnknownNeType| parse_err(path, line, e.to_string()))?;
            let count = match cols.get(3) {
                Some(c) => c
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| parse_err(path, line, format!("invalid count `{c}`")))?,
                None => 1,
            };
            NePair::new(cols[0].trim(), cols[1].trim(), ne_type, count)
                .map_err(|e| parse_err(path, line, e.to_string()))
        })
        .collect()
}

pub fn read_ne_pairs(path: &Path) -> Result<Vec<NePair>> {
    parse_ne_pairs(path, &read_text(path)?)
}

pub fn format_ne_pairs(pairs: &[NePair]) -> Result<String> {
    let mut out = String::new();
    for p in pairs {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            check_field(&p.src_surface)?,
            check_field(&p.tgt_surface)?,
            p.ne_type,
            p.count
        )
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn write_ne_pairs(path: &Path, pairs: &[NePair]) -> Result<()> {
    write_text(path, &format_ne_pairs(pairs)?)
}

/// Stand-off annotations read from a file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Annotations {
    pub spans: Vec<NeSpan>,
    /// Lines labelled `ORG`, which are skipped.
    pub skipped_org: usize,
}

/// Annotations: `sentence_id<TAB>side<TAB>start<TAB>end<TAB>type`.
///
/// Organization spans are counted and skipped; any other unknown type is an
/// error.
pub fn parse_annotations(path: &Path, text: &str) -> Result<Annotations> {
    let mut out = Annotations::default();
    for (line, l) in data_lines(text) {
        let cols: Vec<&str> = l.split('\t').collect();
        if cols.len() != 5 {
            return Err(parse_err(
                path,
                line,
                format!("expected 5 tab-separated columns, found {}", cols.len()),
            ));
        }
        let sentence_id = parse_usize(path, line, "sentence id", cols[0])?;
        let side: Side = cols[1]
            .parse()
            .map_err(|e: netrans_core::TypeError| parse_err(path, line, e.to_string()))?;
        let start = parse_usize(path, line, "start", cols[2])?;
        let end = parse_usize(path, line, "end", cols[3])?;
        let ne_type: NeType = match cols[4].parse() {
            Ok(t) => t,
            Err(e) if e.is_org() => {
                out.skipped_org += 1;
                continue;
            }
            Err(e) => return Err(parse_err(path, line, e.to_string())),
        };
        let span = NeSpan::new(sentence_id, side, start, end, ne_type)
            .map_err(|e| parse_err(path, line, e.to_string()))?;
        out.spans.push(span);
    }
    Ok(out)
}

pub fn read_annotations(path: &Path) -> Result<Annotations> {
    parse_annotations(path, &read_text(path)?)
}

pub fn format_annotations(spans: &[NeSpan]) -> String {
    let mut out = String::new();
    for s in spans {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            s.sentence_id, s.side, s.start, s.end, s.ne_type
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_annotations(path: &Path, spans: &[NeSpan]) -> Result<()> {
    write_text(path, &format_annotations(spans))
}

/// Gazetteer entries: `surface<TAB>type`, surfaces space-tokenized. `ORG`
/// entries are counted and skipped.
pub fn parse_gazetteer(path: &Path, text: &str) -> Result<(Vec<(String, NeType)>, usize)> {
    let mut entries = Vec::new();
    let mut skipped_org = 0;
    for (line, l) in data_lines(text) {
        let cols: Vec<&str> = l.split('\t').collect();
        if cols.len() != 2 {
            return Err(parse_err(
                path,
                line,
                format!("expected 2 tab-separated columns, found {}", cols.len()),
            ));
        }
        match cols[1].parse::<NeType>() {
            Ok(t) => entries.push((cols[0].trim().to_string(), t)),
            Err(e) if e.is_org() => skipped_org += 1,
            Err(e) => return Err(parse_err(path, line, e.to_string())),
        }
        if cols[0].trim().is_empty() {
            return Err(parse_err(path, line, "empty surface"));
        }
    }
    Ok((entries, skipped_org))
}

pub fn read_gazetteer(path: &Path) -> Result<(Vec<(String, NeType)>, usize)> {
    parse_gazetteer(path, &read_text(path)?)
}

/// One line of an alignment file.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignmentRecord {
    pub sentence_id: usize,
    pub src: TokenRange,
    pub tgt: TokenRange,
    pub ne_type: NeType,
    pub score: f64,
    pub direction: MatchDirection,
}

impl From<&AlignedPair> for AlignmentRecord {
    fn from(a: &AlignedPair) -> Self {
        AlignmentRecord {
            sentence_id: a.sentence_id,
            src: a.src_span.range(),
            tgt: a.tgt_range,
            ne_type: a.ne_type,
            score: a.score.value(),
            direction: a.direction,
        }
    }
}

/// Alignments:
/// `sentence_id<TAB>src_start<TAB>src_end<TAB>tgt_start<TAB>tgt_end<TAB>type<TAB>score<TAB>direction`.
pub fn parse_alignments(path: &Path, text: &str) -> Result<Vec<AlignmentRecord>> {
    data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            if cols.len() != 8 {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected 8 tab-separated columns, found {}", cols.len()),
                ));
            }
            let n = |i: usize, what: &str| parse_usize(path, line, what, cols[i]);
            let src = TokenRange::new(n(1, "source start")?, n(2, "source end")?);
            let tgt = TokenRange::new(n(3, "target start")?, n(4, "target end")?);
            if src.is_empty() || tgt.is_empty() {
                return Err(parse_err(path, line, "empty range"));
            }
            let ne_type: NeType = cols[5]
                .parse()
                .map_err(|e: netrans_core::UnknownNeType| parse_err(path, line, e.to_string()))?;
            let score: f64 = cols[6]
                .trim()
                .parse()
                .ok()
                .filter(|s: &f64| (0.0..=1.0).contains(s))
                .ok_or_else(|| parse_err(path, line, format!("invalid score `{}`", cols[6])))?;
            let direction: MatchDirection = cols[7]
                .trim()
                .parse()
                .map_err(|e: netrans_core::align::AlignError| parse_err(path, line, e.to_string()))?;
            Ok(AlignmentRecord {
                sentence_id: n(0, "sentence id")?,
                src,
                tgt,
                ne_type,
                score,
                direction,
            })
        })
        .collect()
}

pub fn read_alignments(path: &Path) -> Result<Vec<AlignmentRecord>> {
    parse_alignments(path, &read_text(path)?)
}

pub fn format_alignments<'a>(records: impl IntoIterator<Item = &'a AlignmentRecord>) -> String {
    let mut out = String::new();
    for r in records {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.sentence_id,
            r.src.start,
            r.src.end,
            r.tgt.start,
            r.tgt.end,
            r.ne_type,
            r.score,
            r.direction
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_alignments<'a>(
    path: &Path,
    records: impl IntoIterator<Item = &'a AlignmentRecord>,
) -> Result<()> {
    write_text(path, &format_alignments(records))
}

/// Symbol sidecar:
/// `sentence_id<TAB>symbol<TAB>surface<TAB>type[<TAB>translation]`, one line
/// per replaced entity.
pub fn parse_symbols(path: &Path, text: &str) -> Result<BTreeMap<usize, SymbolMap>> {
    let mut maps: BTreeMap<usize, SymbolMap> = BTreeMap::new();
    for (line, l) in data_lines(text) {
        let cols: Vec<&str> = l.split('\t').collect();
        if !(4..=5).contains(&cols.len()) {
            return Err(parse_err(
                path,
                line,
                format!("expected 4 or 5 tab-separated columns, found {}", cols.len()),
            ));
        }
        let sentence_id = parse_usize(path, line, "sentence id", cols[0])?;
        let symbol: Symbol = cols[1]
            .parse()
            .map_err(|e: netrans_core::pipeline::PipelineError| parse_err(path, line, e.to_string()))?;
        let ne_type: NeType = cols[3]
            .parse()
            .map_err(|e: netrans_core::UnknownNeType| parse_err(path, line, e.to_string()))?;
        if ne_type != symbol.ne_type {
            return Err(parse_err(path, line, format!("type {ne_type} does not match {symbol}")));
        }
        if cols[2].trim().is_empty() {
            return Err(parse_err(path, line, "empty surface"));
        }
        let entry = SymbolEntry {
            symbol,
            surface: cols[2].to_string(),
            ne_type,
            translation: cols.get(4).filter(|t| !t.is_empty()).map(|t| t.to_string()),
        };
        maps.entry(sentence_id)
            .or_default()
            .insert(entry)
            .map_err(|e| parse_err(path, line, e.to_string()))?;
    }
    Ok(maps)
}

pub fn read_symbols(path: &Path) -> Result<BTreeMap<usize, SymbolMap>> {
    parse_symbols(path, &read_text(path)?)
}

pub fn format_symbols<'a>(
    maps: impl IntoIterator<Item = (usize, &'a SymbolMap)>,
) -> Result<String> {
    let mut out = String::new();
    for (id, map) in maps {
        for e in map.entries() {
            write!(out, "{id}\t{}\t{}\t{}", e.symbol, check_field(&e.surface)?, e.ne_type)
                .expect("writing to a String");
            if let Some(t) = &e.translation {
                write!(out, "\t{}", check_field(t)?).expect("writing to a String");
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Lexical table: `src<TAB>tgt<TAB>count`.
pub fn parse_lexical_table(path: &Path, text: &str) -> Result<LexicalTable> {
    let mut pairs = Vec::new();
    for (line, l) in data_lines(text) {
        let cols: Vec<&str> = l.split('\t').collect();
        if cols.len() != 3 {
            return Err(parse_err(
                path,
                line,
                format!("expected 3 tab-separated columns, found {}", cols.len()),
            ));
        }
        let count: u64 = cols[2]
            .trim()
            .parse()
            .ok()
            .filter(|c| *c > 0)
            .ok_or_else(|| parse_err(path, line, format!("invalid count `{}`", cols[2])))?;
        // the table does not keep types; any type serves for construction
        let pair = NePair::new(cols[0], cols[1], NeType::Loc, count)
            .map_err(|e| parse_err(path, line, e.to_string()))?;
        pairs.push(pair);
    }
    Ok(netrans_core::pipeline::extract_lexical_table(&pairs))
}

pub fn read_lexical_table(path: &Path) -> Result<LexicalTable> {
    parse_lexical_table(path, &read_text(path)?)
}

pub fn format_lexical_table(table: &LexicalTable) -> Result<String> {
    let mut out = String::new();
    for (s, t, c) in table.iter() {
        writeln!(out, "{}\t{}\t{c}", check_field(s)?, check_field(t)?).expect("writing to a String");
    }
    Ok(out)
}

/// A frequency-ranked word list, one word per line (further tab-separated
/// columns, such as counts, are ignored).
pub fn read_vocabulary(path: &Path, limit: usize) -> Result<Vocabulary> {
    let text = read_text(path)?;
    let words: Vec<&str> = data_lines(&text)
        .filter_map(|(_, l)| l.split('\t').next())
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .collect();
    Ok(Vocabulary::from_ranked(words, limit))
}

pub fn read_rule_table(path: &Path) -> Result<RuleTable> {
    RuleTable::parse(&read_text(path)?).map_err(|source| FormatError::Rules {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_model(path: &Path, model: &Seq2SeqModel) -> Result<()> {
    fs::write(path, neural::to_bytes(model)).map_err(io_err(path))
}

pub fn load_model(path: &Path) -> Result<Seq2SeqModel> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    neural::from_bytes(&bytes).map_err(|source| FormatError::Model {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("mem.tsv")
    }

    #[test]
    fn ne_pair_lines() {
        let pairs = parse_ne_pairs(p(), "柏林\tberlin\tLOC\n四点二\t4.2\tnt\t7\n").unwrap();
        assert_eq!(pairs[0], NePair::new("柏林", "berlin", NeType::Loc, 1).unwrap());
        assert_eq!(pairs[1].count, 7);
        assert_eq!(pairs[1].ne_type, NeType::Nt);
        let err = parse_ne_pairs(p(), "a\tb\tLOC\nx\ty\tORG\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
        assert!(parse_ne_pairs(p(), "x\ty\n").is_err());
        assert!(parse_ne_pairs(p(), "x\ty\tPER\t0\n").is_err());
    }

    #[test]
    fn annotation_lines() {
        let a = parse_annotations(p(), "0\tsource\t0\t1\tLOC\n5\ttarget\t1\t3\tNT\n1\tsource\t0\t1\tORG\n")
            .unwrap();
        assert_eq!(a.spans.len(), 2);
        assert_eq!(a.skipped_org, 1);
        assert_eq!(a.spans[1], NeSpan::new(5, Side::Target, 1, 3, NeType::Nt).unwrap());
        for bad in ["0\tsource\t2\t2\tPER", "0\tleft\t0\t1\tPER", "x\tsource\t0\t1\tPER", "0\tsource\t0\t1\tMISC"] {
            assert!(parse_annotations(p(), bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sentences_and_bom() {
        let s = parse_sentences(p(), "\u{feff}a  b\nc\n".trim_start_matches('\u{feff}'), "en").unwrap();
        assert_eq!(s[0].tokens(), ["a", "b"]);
        assert!(matches!(
            parse_sentences(p(), "a\n\nb\n", "en"),
            Err(FormatError::EmptyLine { line: 2, .. })
        ));
        assert!(parse_sentences(p(), "", "en").unwrap().is_empty());
    }

    #[test]
    fn tabs_rejected_on_write() {
        let pair = NePair::new("a\tb", "c", NeType::Per, 1).unwrap();
        assert!(format_ne_pairs(&[pair]).is_err());
    }

    #[test]
    fn alignment_round_trip() {
        let records = vec![AlignmentRecord {
            sentence_id: 3,
            src: TokenRange::new(0, 2),
            tgt: TokenRange::new(4, 5),
            ne_type: NeType::Per,
            score: 0.8,
            direction: MatchDirection::TgtToSrc,
        }];
        let text = format_alignments(&records);
        assert_eq!(text, "3\t0\t2\t4\t5\tPER\t0.8\tt2s\n");
        assert_eq!(parse_alignments(p(), &text).unwrap(), records);
        assert!(parse_alignments(p(), "3\t0\t2\t4\t5\tPER\t1.5\tboth\n").is_err());
    }
}
