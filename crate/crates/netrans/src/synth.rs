//! Deterministic synthetic bilingual data.
//!
//! Names are built from a fixed table of Han syllables and their Latin
//! spellings, so every Chinese name has exactly one rule-given
//! transliteration. Planted entities (names plus percentages and dates) are
//! filled into sentence templates; gold alignments and stand-off annotations
//! come out alongside, together with deliberately noisy translation lists
//! standing in for an imperfect translator.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netrans_core::align::MatchDirection;
use netrans_core::{NePair, NeSpan, NeType, Sentence, SentencePair, Side, TokenRange};

use crate::formats::AlignmentRecord;

pub const SYLLABLES: &[(char, &str)] = &[
    ('阿', "a"),
    ('巴', "ba"),
    ('贝', "bei"),
    ('波', "bo"),
    ('布', "bu"),
    ('达', "da"),
    ('德', "de"),
    ('多', "duo"),
    ('菲', "fei"),
    ('格', "ge"),
    ('哈', "ha"),
    ('基', "ji"),
    ('卡', "ka"),
    ('科', "ke"),
    ('拉', "la"),
    ('莱', "lai"),
    ('林', "lin"),
    ('罗', "luo"),
    ('马', "ma"),
    ('蒙', "meng"),
    ('米', "mi"),
    ('纳', "na"),
    ('尼', "ni"),
    ('帕', "pa"),
    ('萨', "sa"),
    ('森', "sen"),
    ('斯', "si"),
    ('塔', "ta"),
    ('图', "tu"),
    ('瓦', "wa"),
    ('维', "wei"),
    ('扎', "za"),
];

const ZH_DIGITS: [&str; 9] = ["一", "二", "三", "四", "五", "六", "七", "八", "九"];
const EN_MONTHS: [&str; 9] = [
    "January", "February", "March", "April", "May", "June", "July", "August", "September",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Per,
    Loc,
    Percent,
    Date,
}

impl Slot {
    fn ne_type(self) -> NeType {
        match self {
            Slot::Per => NeType::Per,
            Slot::Loc => NeType::Loc,
            Slot::Percent | Slot::Date => NeType::Nt,
        }
    }
}

/// Sentence frames; `{0}` and `{1}` are entity slots.
const TEMPLATES: &[(&str, &str, [Slot; 2])] = &[
    ("{0} 重新 开放 驻 {1} 大使馆", "{0} reopens embassy in {1}", [Slot::Loc, Slot::Loc]),
    ("{0} 访问 了 {1}", "{0} visited {1}", [Slot::Per, Slot::Loc]),
    ("{0} 会见 了 {1}", "{0} met {1}", [Slot::Per, Slot::Per]),
    ("{0} 经济 增长 {1}", "the economy of {0} grew {1}", [Slot::Loc, Slot::Percent]),
    ("{0} 于 {1} 抵达", "{0} arrived on {1}", [Slot::Per, Slot::Date]),
    ("{0} 的 失业率 为 {1}", "unemployment in {0} was {1}", [Slot::Loc, Slot::Percent]),
    ("{0} 出生 于 {1}", "{0} was born in {1}", [Slot::Per, Slot::Loc]),
    ("{0} 与 {1} 签署 协议", "{0} and {1} signed an agreement", [Slot::Loc, Slot::Loc]),
    ("{0} 获得 {1} 的 选票", "{0} won {1} of the vote", [Slot::Per, Slot::Percent]),
    ("{0} 将 于 {1} 举行 选举", "{0} holds elections on {1}", [Slot::Loc, Slot::Date]),
];

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub plants: usize,
    pub sentences: usize,
    /// Per-character corruption probability of the noisy translation lists.
    pub noise: f64,
    /// Fraction of planted occurrences annotated on one side only.
    pub one_sided: f64,
    /// Size of the stand-alone transliteration list.
    pub translit: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            plants: 50,
            sentences: 200,
            noise: 0.1,
            one_sided: 0.0,
            translit: 100,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthData {
    pub corpus: Vec<SentencePair>,
    pub annotations: Vec<NeSpan>,
    /// Gold links for every planted occurrence.
    pub gold: Vec<AlignmentRecord>,
    /// Planted pairs with their occurrence counts.
    pub plants: Vec<NePair>,
    /// Chinese name to noisy Latin spelling.
    pub lexicon_s2t: Vec<NePair>,
    /// Noisy Chinese spelling to Latin name (so read in reverse for
    /// target-to-source translation).
    pub lexicon_t2s: Vec<NePair>,
    /// Clean name transliterations.
    pub translit: Vec<NePair>,
}

#[derive(Clone, Debug)]
struct Plant {
    zh: String,
    en: String,
    slot: Slot,
}

/// A name of 2 or 3 syllables as (Chinese, Latin).
fn random_name(rng: &mut ChaCha8Rng) -> (String, String) {
    let n = rng.random_range(2..=3);
    let mut zh = String::new();
    let mut en = String::new();
    for _ in 0..n {
        let (h, l) = SYLLABLES[rng.random_range(0..SYLLABLES.len())];
        zh.push(h);
        en.push_str(l);
    }
    (zh, en)
}

/// `count` distinct names, none colliding with `taken` on either side.
fn names(rng: &mut ChaCha8Rng, count: usize, taken: &mut BTreeSet<String>) -> Vec<(String, String)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (zh, en) = random_name(rng);
        if taken.contains(&zh) || taken.contains(&en) {
            continue;
        }
        taken.insert(zh.clone());
        taken.insert(en.clone());
        out.push((zh, en));
    }
    out
}

/// Corrupts each character with probability `p` by substitution, deletion
/// or insertion of a character from `alphabet`.
fn corrupt(rng: &mut ChaCha8Rng, s: &str, p: f64, alphabet: &[char]) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if !rng.random_bool(p) {
            out.push(c);
            continue;
        }
        match rng.random_range(0..4) {
            0 | 1 => out.push(alphabet[rng.random_range(0..alphabet.len())]),
            2 => {}
            _ => {
                out.push(c);
                out.push(alphabet[rng.random_range(0..alphabet.len())]);
            }
        }
    }
    if out.is_empty() {
        s.to_string()
    } else {
        out
    }
}

fn numeric_plants(rng: &mut ChaCha8Rng, count: usize) -> Vec<Plant> {
    let mut percents: Vec<(usize, usize)> =
        (1..=9).flat_map(|a| (1..=9).map(move |b| (a, b))).collect();
    let mut dates = percents.clone();
    percents.shuffle(rng);
    dates.shuffle(rng);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let (a, b) = percents[i / 2];
                Plant {
                    zh: format!("百分之{}点{}", ZH_DIGITS[a - 1], ZH_DIGITS[b - 1]),
                    en: format!("{a}.{b}%"),
                    slot: Slot::Percent,
                }
            } else {
                let (m, d) = dates[i / 2];
                Plant {
                    zh: format!("{}月 {}日", ZH_DIGITS[m - 1], ZH_DIGITS[d - 1]),
                    en: format!("{} {d}", EN_MONTHS[m - 1]),
                    slot: Slot::Date,
                }
            }
        })
        .collect()
}

/// Fills `template` and returns the sentence text and each slot's token range.
fn fill(template: &str, fillers: [&str; 2]) -> (String, [TokenRange; 2]) {
    let mut tokens: Vec<String> = Vec::new();
    let mut ranges = [TokenRange::new(0, 0); 2];
    for word in template.split(' ') {
        match word {
            "{0}" | "{1}" => {
                let k = usize::from(word == "{1}");
                let start = tokens.len();
                tokens.extend(fillers[k].split(' ').map(String::from));
                ranges[k] = TokenRange::new(start, tokens.len());
            }
            w => tokens.push(w.to_string()),
        }
    }
    (tokens.join(" "), ranges)
}

pub fn generate(cfg: &SynthConfig) -> SynthData {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut taken: BTreeSet<String> = TEMPLATES
        .iter()
        .flat_map(|(zh, en, _)| zh.split(' ').chain(en.split(' ')))
        .map(String::from)
        .collect();

    // roughly a fifth numeric, the rest split between persons and places
    let n_numeric = cfg.plants / 5;
    let n_names = cfg.plants - n_numeric;
    let mut plants: Vec<Plant> = names(&mut rng, n_names, &mut taken)
        .into_iter()
        .enumerate()
        .map(|(i, (zh, en))| Plant {
            zh,
            en,
            slot: if i % 2 == 0 { Slot::Per } else { Slot::Loc },
        })
        .collect();
    plants.extend(numeric_plants(&mut rng, n_numeric));

    let pool = |slot: Slot| -> Vec<usize> {
        plants
            .iter()
            .enumerate()
            .filter(|(_, p)| p.slot == slot)
            .map(|(i, _)| i)
            .collect()
    };
    let mut pools: Vec<(Slot, Vec<usize>, usize)> = [Slot::Per, Slot::Loc, Slot::Percent, Slot::Date]
        .into_iter()
        .map(|s| {
            let mut p = pool(s);
            p.shuffle(&mut rng);
            (s, p, 0)
        })
        .collect();
    // cycling through shuffled pools uses every plant before repeating one
    let mut draw = |slot: Slot, avoid: Option<usize>, rng: &mut ChaCha8Rng| -> Option<usize> {
        let (_, items, next) = pools.iter_mut().find(|(s, _, _)| *s == slot)?;
        if items.is_empty() {
            return None;
        }
        for _ in 0..items.len() {
            if *next == items.len() {
                items.shuffle(rng);
                *next = 0;
            }
            let item = items[*next];
            *next += 1;
            if Some(item) != avoid {
                return Some(item);
            }
        }
        None
    };

    let mut corpus = Vec::with_capacity(cfg.sentences);
    let mut annotations = Vec::new();
    let mut gold = Vec::new();
    let mut counts = vec![0u64; plants.len()];
    let mut id = 0;
    let mut t = 0;
    while id < cfg.sentences {
        let (zh_t, en_t, slots) = TEMPLATES[t % TEMPLATES.len()];
        t += 1;
        let Some(first) = draw(slots[0], None, &mut rng) else { continue };
        let Some(second) = draw(slots[1], Some(first), &mut rng) else { continue };
        let chosen = [first, second];
        let (zh, zh_ranges) = fill(zh_t, [&plants[first].zh, &plants[second].zh]);
        let (en, en_ranges) = fill(en_t, [&plants[first].en, &plants[second].en]);
        corpus.push(
            SentencePair::new(id, Sentence::from_text(&zh, "zh"), Sentence::from_text(&en, "en"))
                .expect("languages differ"),
        );
        for k in 0..2 {
            let ne_type = slots[k].ne_type();
            counts[chosen[k]] += 1;
            gold.push(AlignmentRecord {
                sentence_id: id,
                src: zh_ranges[k],
                tgt: en_ranges[k],
                ne_type,
                score: 1.0,
                direction: MatchDirection::Both,
            });
            let dropped = if rng.random_bool(cfg.one_sided.clamp(0.0, 1.0)) {
                Some(if rng.random_bool(0.5) { Side::Source } else { Side::Target })
            } else {
                None
            };
            for (side, range) in [(Side::Source, zh_ranges[k]), (Side::Target, en_ranges[k])] {
                if dropped != Some(side) {
                    annotations.push(
                        NeSpan::new(id, side, range.start, range.end, ne_type)
                            .expect("filled ranges are non-empty"),
                    );
                }
            }
        }
        id += 1;
    }
    annotations.sort_by_key(|s| (s.sentence_id, s.side, s.start));

    let han: Vec<char> = SYLLABLES.iter().map(|(h, _)| *h).collect();
    let latin: Vec<char> = ('a'..='z').collect();
    let mut lexicon_s2t = Vec::new();
    let mut lexicon_t2s = Vec::new();
    let mut planted = Vec::new();
    for (p, &count) in plants.iter().zip(&counts) {
        let ne_type = p.slot.ne_type();
        if count > 0 {
            planted.push(NePair::new(&p.zh, &p.en, ne_type, count).expect("non-empty"));
        }
        if ne_type == NeType::Nt {
            continue;
        }
        let noisy_en = corrupt(&mut rng, &p.en, cfg.noise, &latin);
        let noisy_zh = corrupt(&mut rng, &p.zh, cfg.noise, &han);
        lexicon_s2t.push(NePair::new(&p.zh, noisy_en, ne_type, 1).expect("non-empty"));
        lexicon_t2s.push(NePair::new(noisy_zh, &p.en, ne_type, 1).expect("non-empty"));
    }

    let translit = names(&mut rng, cfg.translit, &mut taken)
        .into_iter()
        .enumerate()
        .map(|(i, (zh, en))| {
            let t = if i % 2 == 0 { NeType::Per } else { NeType::Loc };
            NePair::new(zh, en, t, 1).expect("non-empty")
        })
        .collect();

    SynthData {
        corpus,
        annotations,
        gold,
        plants: planted,
        lexicon_s2t,
        lexicon_t2s,
        translit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_complete() {
        let cfg = SynthConfig::default();
        let a = generate(&cfg);
        let b = generate(&cfg);
        assert_eq!(a.corpus, b.corpus);
        assert_eq!(a.lexicon_s2t, b.lexicon_s2t);
        assert_eq!(a.corpus.len(), 200);
        assert_eq!(a.plants.len(), 50);
        assert_eq!(a.gold.len(), 400);
        assert_eq!(a.annotations.len(), 800);
        assert_eq!(a.translit.len(), 100);
        let total: u64 = a.plants.iter().map(|p| p.count).sum();
        assert_eq!(total, 400);
        assert_ne!(generate(&SynthConfig { seed: 1, ..cfg }).corpus, a.corpus);
    }

    #[test]
    fn gold_ranges_hold_the_plants() {
        let data = generate(&SynthConfig::default());
        for g in &data.gold {
            let pair = &data.corpus[g.sentence_id];
            let zh = pair.src.join(g.src).unwrap();
            let en = pair.tgt.join(g.tgt).unwrap();
            assert!(data.plants.iter().any(|p| p.src_surface == zh && p.tgt_surface == en));
        }
    }

    #[test]
    fn one_sided_fraction() {
        let cfg = SynthConfig {
            one_sided: 0.3,
            ..SynthConfig::default()
        };
        let data = generate(&cfg);
        let missing = 2 * data.gold.len() - data.annotations.len();
        assert!((80..=160).contains(&missing), "{missing}");
    }

    #[test]
    fn corruption_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let latin: Vec<char> = ('a'..='z').collect();
        assert_eq!(corrupt(&mut rng, "berlin", 0.0, &latin), "berlin");
        let changed = (0..1000)
            .filter(|_| corrupt(&mut rng, "abcdefghij", 0.1, &latin) != "abcdefghij")
            .count();
        // 1 - 0.9^10 ≈ 0.65, less same-letter substitutions
        assert!((550..750).contains(&changed), "{changed}");
    }
}
