use std::path::Path;

use proptest::prelude::*;

use netrans::formats::{self, AlignmentRecord, FormatError};
use netrans::synth::{self, SynthConfig};
use netrans_core::align::MatchDirection;
use netrans_core::pipeline::{self, Symbol, SymbolEntry, SymbolMap};
use netrans_core::{NePair, NeType, Sentence, TokenRange};

fn p() -> &'static Path {
    Path::new("mem.tsv")
}

fn word() -> impl Strategy<Value = String> {
    "[a-z柏林巴黎0-9%.]{1,6}"
}

fn ne_type() -> impl Strategy<Value = NeType> {
    prop_oneof![Just(NeType::Per), Just(NeType::Loc), Just(NeType::Nt)]
}

fn direction() -> impl Strategy<Value = MatchDirection> {
    prop_oneof![
        Just(MatchDirection::Both),
        Just(MatchDirection::SrcToTgt),
        Just(MatchDirection::TgtToSrc)
    ]
}

proptest! {
    #[test]
    fn sentences_round_trip(lines in prop::collection::vec(prop::collection::vec(word(), 1..6), 0..8)) {
        let sentences: Vec<Sentence> = lines
            .iter()
            .map(|ws| Sentence::new(ws.clone(), "zh").unwrap())
            .collect();
        let text = formats::format_sentences(&sentences);
        prop_assert_eq!(formats::parse_sentences(p(), &text, "zh").unwrap(), sentences);
    }

    #[test]
    fn ne_pairs_round_trip(rows in prop::collection::vec((word(), word(), ne_type(), 1u64..50), 0..10)) {
        let pairs: Vec<NePair> = rows
            .iter()
            .map(|(s, t, ty, c)| NePair::new(s, t, *ty, *c).unwrap())
            .collect();
        let text = formats::format_ne_pairs(&pairs).unwrap();
        prop_assert_eq!(formats::parse_ne_pairs(p(), &text).unwrap(), pairs);
    }

    #[test]
    fn alignments_round_trip(
        rows in prop::collection::vec(
            (0usize..50, 0usize..10, 1usize..4, 0usize..10, 1usize..4, ne_type(), 0.0f64..=1.0, direction()),
            0..10,
        )
    ) {
        let records: Vec<AlignmentRecord> = rows
            .iter()
            .map(|&(id, s, sl, t, tl, ne_type, score, direction)| AlignmentRecord {
                sentence_id: id,
                src: TokenRange::new(s, s + sl),
                tgt: TokenRange::new(t, t + tl),
                ne_type,
                score,
                direction,
            })
            .collect();
        let text = formats::format_alignments(&records);
        prop_assert_eq!(formats::parse_alignments(p(), &text).unwrap(), records);
    }

    #[test]
    fn symbols_round_trip(
        rows in prop::collection::btree_map(0usize..20, prop::collection::vec((ne_type(), word(), prop::option::of(word())), 1..4), 0..6)
    ) {
        let mut maps = std::collections::BTreeMap::new();
        for (id, entries) in &rows {
            let mut map = SymbolMap::new();
            for (i, (ne_type, surface, translation)) in entries.iter().enumerate() {
                map.insert(SymbolEntry {
                    symbol: Symbol { ne_type: *ne_type, index: i + 1 },
                    surface: surface.clone(),
                    ne_type: *ne_type,
                    translation: translation.clone(),
                })
                .unwrap();
            }
            maps.insert(*id, map);
        }
        let text = formats::format_symbols(maps.iter().map(|(i, m)| (*i, m))).unwrap();
        prop_assert_eq!(formats::parse_symbols(p(), &text).unwrap(), maps);
    }

    #[test]
    fn lexical_table_round_trip(rows in prop::collection::vec((word(), word(), 1u64..9), 0..10)) {
        let pairs: Vec<NePair> = rows
            .iter()
            .map(|(s, t, c)| NePair::new(s, t, NeType::Per, *c).unwrap())
            .collect();
        let table = pipeline::extract_lexical_table(&pairs);
        let text = formats::format_lexical_table(&table).unwrap();
        let back = formats::parse_lexical_table(p(), &text).unwrap();
        prop_assert_eq!(formats::format_lexical_table(&back).unwrap(), text);
    }
}

#[test]
fn corpus_files_must_be_line_aligned() {
    let dir = tempfile::tempdir().unwrap();
    let (zh, en) = (dir.path().join("c.zh"), dir.path().join("c.en"));
    std::fs::write(&zh, "\u{feff}德国 重新 开放\n利比亚\n").unwrap();
    std::fs::write(&en, "Germany reopens\n").unwrap();
    let err = formats::read_parallel_corpus(&zh, &en, "zh", "en").unwrap_err();
    assert!(matches!(err, FormatError::LineCount { src_lines: 2, tgt_lines: 1, .. }), "{err}");
    std::fs::write(&en, "Germany reopens\r\nLibya\r\n").unwrap();
    let corpus = formats::read_parallel_corpus(&zh, &en, "zh", "en").unwrap();
    assert_eq!(corpus[0].src.tokens()[0], "德国");
    assert_eq!(corpus[1].tgt.text(), "Libya");

    let missing = dir.path().join("absent.zh");
    let err = formats::read_parallel_corpus(&missing, &en, "zh", "en").unwrap_err();
    assert!(err.to_string().contains("absent.zh"));
}

#[test]
fn organization_labels() {
    // annotations and gazetteers skip ORG; entity-pair lists reject it
    let ann = formats::parse_annotations(p(), "0\tsource\t0\t1\tORG\n0\ttarget\t0\t1\tLOC\n").unwrap();
    assert_eq!((ann.spans.len(), ann.skipped_org), (1, 1));
    let (entries, skipped) = formats::parse_gazetteer(p(), "联合国\tORG\n德国\tLOC\n").unwrap();
    assert_eq!((entries.len(), skipped), (1, 1));
    let err = formats::parse_ne_pairs(p(), "联合国\tUN\tORG\n").unwrap_err();
    assert!(matches!(err, FormatError::Parse { line: 1, .. }));
    assert!(formats::parse_annotations(p(), "0\tsource\t0\t1\tMISC\n").is_err());
}

#[test]
fn model_files_round_trip_and_reject_damage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bin");
    let pairs = [NePair::new("柏林", "berlin", NeType::Loc, 1).unwrap()];
    let config = netrans_core::neural::ModelConfig {
        hidden_size: 4,
        embed_size: 3,
        ..Default::default()
    };
    let model = netrans_core::neural::init_model(&pairs, netrans_core::neural::Direction::SrcToTgt, &config).unwrap();
    formats::save_model(&path, &model).unwrap();
    let back = formats::load_model(&path).unwrap();
    assert_eq!(netrans_core::neural::to_bytes(&back), netrans_core::neural::to_bytes(&model));

    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    std::fs::write(&path, &bytes).unwrap();
    let err = formats::load_model(&path).unwrap_err();
    assert!(matches!(err, FormatError::Model { .. }), "{err}");
}

#[test]
fn synthetic_data_is_seeded() {
    let a = synth::generate(&SynthConfig::default());
    let b = synth::generate(&SynthConfig::default());
    let c = synth::generate(&SynthConfig {
        seed: 7,
        ..SynthConfig::default()
    });
    assert_eq!(a.corpus, b.corpus);
    assert_eq!(a.lexicon_s2t, b.lexicon_s2t);
    assert_ne!(a.corpus, c.corpus);
    // gold links point at the planted surfaces
    for g in &a.gold {
        let pair = &a.corpus[g.sentence_id];
        let src = pair.src.join(g.src).unwrap();
        let tgt = pair.tgt.join(g.tgt).unwrap();
        assert!(a
            .plants
            .iter()
            .any(|p| p.src_surface == src && p.tgt_surface == tgt && p.ne_type == g.ne_type));
    }
}
