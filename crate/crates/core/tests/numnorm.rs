use netrans_core::numnorm::{normalize_numeric, nt_similarity, render_nt, RuleTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIECES: &[&str] = &[
    "一", "二", "三", "十", "百", "千", "万", "零", "〇", "两", "点", "月", "日", "年", "百分之", "3", "0",
    "9", ",", ".", "%", " ", "one", "Two", "seventh", "twenty", "March", "Dec.", "may", "ten", "x", "柏",
    "１", "5", "\u{00a0}",
];

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(0..8);
    (0..n).map(|_| PIECES[rng.random_range(0..PIECES.len())]).collect()
}

#[test]
fn worked_examples() {
    assert_eq!(normalize_numeric("百分之四点二", "zh").as_str(), "42");
    assert_eq!(normalize_numeric("4,200", "en").as_str(), "42");
}

#[test]
fn closed_alphabet_and_idempotence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let s = random_text(&mut rng);
        for lang in ["zh", "en"] {
            let once = normalize_numeric(&s, lang);
            assert!(once.as_str().bytes().all(|b| (b'1'..=b'9').contains(&b)), "{s:?} -> {once:?}");
            assert_eq!(normalize_numeric(once.as_str(), lang), once, "{s:?}");
        }
    }
}

#[test]
fn custom_rule_table() {
    let table = RuleTable::parse("# pattern\treplacement\tlang\nneun\t9\tde\nzwei\t2\tde\n").unwrap();
    assert_eq!(table.normalize("Zwei neun", "de").as_str(), "29");
    assert_eq!(table.normalize("zwei", "en").as_str(), "");
    assert!(RuleTable::parse("a\tb\n").is_err());
    assert!(RuleTable::parse("x1\t1\tde\n").is_err());
}

#[test]
fn nt_matching_and_rendering() {
    let t = RuleTable::default();
    assert_eq!(nt_similarity(&t, "二〇一五年", "zh", "2015", "en").value(), 1.0);
    assert_eq!(nt_similarity(&t, "", "zh", "2015", "en").value(), 0.0);
    assert_eq!(render_nt("十二月", "zh", "en"), "December");
    assert_eq!(render_nt("2015", "en", "zh"), "2015");
}
