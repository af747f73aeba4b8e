use netrans_core::align::{AlignConfig, Aligner, Directions, MatchDirection, NoTranslator};
use netrans_core::ner::{AnnotationRecognizer, Gazetteer};
use netrans_core::pipeline::{extract_lexical_table, LexicalTable};
use netrans_core::{NePair, NeSpan, NeType, Sentence, SentencePair, Side, TokenRange};
use proptest::prelude::*;

const NAMES: &[(&str, &str)] = &[
    ("柏林", "berlin"),
    ("巴黎", "paris"),
    ("冰岛", "iceland"),
    ("北京", "beijing"),
    ("伦敦", "london"),
];

fn table() -> LexicalTable {
    // slightly wrong spellings, as a learned translator would produce
    let noisy = ["bolin", "pari", "icelnd", "beijing", "londn"];
    let pairs: Vec<NePair> = NAMES
        .iter()
        .zip(noisy)
        .map(|((zh, _), en)| NePair::new(*zh, en, NeType::Loc, 1).unwrap())
        .collect();
    extract_lexical_table(&pairs)
}

fn reverse_table() -> LexicalTable {
    let pairs: Vec<NePair> = NAMES
        .iter()
        .map(|(zh, en)| NePair::new(*zh, *en, NeType::Loc, 1).unwrap())
        .collect();
    extract_lexical_table(&pairs).reversed()
}

/// "X 和 Y 合作" / "X and Y cooperate" with named entities from `NAMES`.
fn sentence(id: usize, a: usize, b: usize) -> SentencePair {
    let zh = format!("{} 和 {} 合作", NAMES[a].0, NAMES[b].0);
    let en = format!("{} and {} cooperate", NAMES[a].1, NAMES[b].1);
    SentencePair::new(id, Sentence::from_text(&zh, "zh"), Sentence::from_text(&en, "en")).unwrap()
}

fn spans(id: usize, side: Side, which: &[usize]) -> Vec<NeSpan> {
    which
        .iter()
        .map(|&pos| NeSpan::new(id, side, pos, pos + 1, NeType::Loc).unwrap())
        .collect()
}

fn count(
    corpus: &[SentencePair],
    rec_src: &AnnotationRecognizer,
    rec_tgt: &AnnotationRecognizer,
    cfg: AlignConfig,
) -> usize {
    let fwd = table();
    let bwd = reverse_table();
    let aligner = Aligner::new(cfg, &fwd, &bwd).unwrap();
    aligner.align_corpus(corpus, rec_src, rec_tgt).unwrap().pairs.len()
}

proptest! {
    #[test]
    fn raising_threshold_never_adds_pairs(
        picks in proptest::collection::vec((0usize..5, 0usize..5, any::<bool>(), any::<bool>()), 1..12),
        t1 in 0.05f64..1.0,
        t2 in 0.05f64..1.0,
    ) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let corpus: Vec<SentencePair> =
            picks.iter().enumerate().map(|(i, (a, b, _, _))| sentence(i, *a, *b)).collect();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for (i, (_, _, s, t)) in picks.iter().enumerate() {
            src.extend(spans(i, Side::Source, if *s { &[0, 2] } else { &[0] }));
            tgt.extend(spans(i, Side::Target, if *t { &[0, 2] } else { &[2] }));
        }
        let rs = AnnotationRecognizer::new(src);
        let rt = AnnotationRecognizer::new(tgt);
        let cfg = |t| AlignConfig { sim_threshold: t, ..AlignConfig::default() };
        prop_assert!(count(&corpus, &rs, &rt, cfg(hi)) <= count(&corpus, &rs, &rt, cfg(lo)));
    }

    #[test]
    fn union_covers_each_direction(
        picks in proptest::collection::vec((0usize..5, 0usize..5, 0u8..3, 0u8..3), 1..12),
    ) {
        // entities are distinct per sentence so directions cannot conflict
        let corpus: Vec<SentencePair> = picks
            .iter()
            .enumerate()
            .map(|(i, (a, b, _, _))| sentence(i, *a, if a == b { (b + 1) % 5 } else { *b }))
            .collect();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for (i, (_, _, s, t)) in picks.iter().enumerate() {
            // 0: first entity only, 1: second only, 2: both
            let pick = |k: u8| -> &'static [usize] { match k { 0 => &[0], 1 => &[2], _ => &[0, 2] } };
            src.extend(spans(i, Side::Source, pick(*s)));
            tgt.extend(spans(i, Side::Target, pick(*t)));
        }
        let rs = AnnotationRecognizer::new(src);
        let rt = AnnotationRecognizer::new(tgt);
        let with = |d| AlignConfig { directions: d, ..AlignConfig::default() };
        let both = count(&corpus, &rs, &rt, with(Directions::Both));
        prop_assert!(both >= count(&corpus, &rs, &rt, with(Directions::SrcToTgt)));
        prop_assert!(both >= count(&corpus, &rs, &rt, with(Directions::TgtToSrc)));
    }

    #[test]
    fn scores_respect_threshold(a in 0usize..5, b in 0usize..5, t in 0.05f64..1.0) {
        let p = sentence(0, a, b);
        let fwd = table();
        let cfg = AlignConfig { sim_threshold: t, ..AlignConfig::default() };
        let aligner = Aligner::new(cfg, &fwd, &NoTranslator).unwrap();
        let out = aligner
            .align_sentence_pair(&p, &spans(0, Side::Source, &[0, 2]), &[])
            .unwrap();
        for pair in out.pairs {
            prop_assert!(pair.score.value() >= t);
        }
    }
}

#[test]
fn context_outside_ngrams_does_not_matter() {
    let fwd = table();
    let aligner = Aligner::new(AlignConfig::default(), &fwd, &NoTranslator).unwrap();
    let make = |tail: &str| {
        SentencePair::new(
            0,
            Sentence::from_text("柏林 很 美", "zh"),
            Sentence::from_text(&format!("berlin is nice {tail}"), "en"),
        )
        .unwrap()
    };
    let span = spans(0, Side::Source, &[0]);
    let a = aligner.align_sentence_pair(&make("indeed"), &span, &[]).unwrap();
    let b = aligner.align_sentence_pair(&make("says the guide"), &span, &[]).unwrap();
    assert_eq!(a.pairs.len(), 1);
    assert_eq!(a.pairs[0].tgt_range, b.pairs[0].tgt_range);
    assert_eq!(a.pairs[0].score, b.pairs[0].score);
}

#[test]
fn direction_restriction() {
    let p = sentence(0, 0, 1);
    let fwd = table();
    let bwd = reverse_table();
    let src = spans(0, Side::Source, &[0, 2]);
    let tgt = spans(0, Side::Target, &[0, 2]);
    for (dirs, expected) in [
        (Directions::SrcToTgt, MatchDirection::SrcToTgt),
        (Directions::TgtToSrc, MatchDirection::TgtToSrc),
        (Directions::Both, MatchDirection::Both),
    ] {
        let cfg = AlignConfig {
            directions: dirs,
            ..AlignConfig::default()
        };
        let out = Aligner::new(cfg, &fwd, &bwd)
            .unwrap()
            .align_sentence_pair(&p, &src, &tgt)
            .unwrap();
        assert_eq!(out.pairs.len(), 2);
        assert!(out.pairs.iter().all(|a| a.direction == expected));
    }
}

#[test]
fn gazetteer_and_numbers_end_to_end() {
    let p = SentencePair::new(
        0,
        Sentence::from_text("柏林 增长 百分之四点二", "zh"),
        Sentence::from_text("berlin grew 4.2 %", "en"),
    )
    .unwrap();
    let mut zh = Gazetteer::new();
    zh.insert("柏林", NeType::Loc).unwrap();
    let en = Gazetteer::new().without_numeric();
    let fwd = table();
    let aligner = Aligner::new(AlignConfig::default(), &fwd, &NoTranslator).unwrap();
    let out = aligner.align_with(&p, &zh, &en).unwrap();
    assert_eq!(out.pairs.len(), 2);
    assert_eq!(out.pairs[0].tgt_surface, "berlin");
    assert_eq!(out.pairs[1].ne_type, NeType::Nt);
    // "4.2" and "4.2 %" both normalize to 42; the shorter range wins
    assert_eq!(out.pairs[1].tgt_range, TokenRange::new(2, 3));
}

#[test]
fn recall_similarity_can_prefer_longer_ranges() {
    // sim is LCS / |candidate|, so extra words can only raise a range's score:
    // "bolin" scores 0.8 on "berlin" but 1.0 on "berlin population"
    let p = SentencePair::new(
        0,
        Sentence::from_text("柏林 人口", "zh"),
        Sentence::from_text("berlin population", "en"),
    )
    .unwrap();
    let fwd = table();
    let aligner = Aligner::new(AlignConfig::default(), &fwd, &NoTranslator).unwrap();
    let out = aligner
        .align_sentence_pair(&p, &spans(0, Side::Source, &[0]), &[])
        .unwrap();
    assert_eq!(out.pairs[0].tgt_range, TokenRange::new(0, 2));
    assert_eq!(out.pairs[0].score.value(), 1.0);
}
