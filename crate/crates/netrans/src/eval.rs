//! Translation accuracy and alignment precision/recall.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use netrans_core::simdist;
use netrans_core::{NePair, NeType, TokenRange};

use crate::formats::AlignmentRecord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{hyp} hypotheses but {reference} references")]
    LengthMismatch { hyp: usize, reference: usize },
    #[error("nothing to evaluate")]
    Empty,
}

/// Correct/total counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AccuracyReport {
    pub per_type: BTreeMap<NeType, Tally>,
    pub overall: Tally,
}

/// Exact-match accuracy of hypothesis target surfaces against references,
/// line by line, after case folding. A single differing character makes a
/// translation wrong. Types come from the references.
pub fn exact_match_accuracy(hyp: &[NePair], reference: &[NePair]) -> Result<AccuracyReport, EvalError> {
    if hyp.len() != reference.len() {
        return Err(EvalError::LengthMismatch {
            hyp: hyp.len(),
            reference: reference.len(),
        });
    }
    if reference.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut report = AccuracyReport::default();
    for (h, r) in hyp.iter().zip(reference) {
        let ok = simdist::normalize(&h.tgt_surface) == simdist::normalize(&r.tgt_surface);
        for tally in [report.per_type.entry(r.ne_type).or_default(), &mut report.overall] {
            tally.total += 1;
            tally.correct += usize::from(ok);
        }
    }
    Ok(report)
}

/// One row per labelled report; columns per type and overall.
pub fn format_accuracy_table(rows: &[(String, AccuracyReport)]) -> String {
    let mut out = String::from("system\tPER\tLOC\tNT\tall\n");
    for (label, r) in rows {
        out.push_str(label);
        for t in NeType::ALL {
            match r.per_type.get(&t) {
                Some(tally) => write!(out, "\t{:.4}", tally.accuracy()),
                None => write!(out, "\t-"),
            }
            .expect("writing to a String");
        }
        writeln!(out, "\t{:.4}", r.overall.accuracy()).expect("writing to a String");
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Prf {
    pub true_pos: usize,
    pub predicted: usize,
    pub gold: usize,
}

impl Prf {
    pub fn precision(&self) -> f64 {
        ratio(self.true_pos, self.predicted)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.true_pos, self.gold)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrfReport {
    pub per_type: BTreeMap<NeType, Prf>,
    pub overall: Prf,
}

impl PrfReport {
    pub fn format(&self) -> String {
        let mut out = String::from("type\tprecision\trecall\tf1\tpredicted\tgold\tcorrect\n");
        let rows = self
            .per_type
            .iter()
            .map(|(t, p)| (t.as_str(), p))
            .chain([("all", &self.overall)]);
        for (name, p) in rows {
            writeln!(
                out,
                "{name}\t{:.4}\t{:.4}\t{:.4}\t{}\t{}\t{}",
                p.precision(),
                p.recall(),
                p.f1(),
                p.predicted,
                p.gold,
                p.true_pos
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Scores `predicted` items against `gold` as sets. Per-type rows group
/// predictions by their own type and gold items by theirs.
fn set_prf<K: Ord + Clone>(predicted: &[(K, NeType)], gold: &[(K, NeType)]) -> PrfReport {
    let gold_keys: BTreeSet<&K> = gold.iter().map(|(k, _)| k).collect();
    let mut report = PrfReport::default();
    let mut seen = BTreeSet::new();
    for (k, t) in predicted {
        if !seen.insert(k) {
            continue;
        }
        let hit = gold_keys.contains(k);
        for p in [report.per_type.entry(*t).or_default(), &mut report.overall] {
            p.predicted += 1;
            p.true_pos += usize::from(hit);
        }
    }
    let mut seen = BTreeSet::new();
    for (k, t) in gold {
        if seen.insert(k) {
            report.per_type.entry(*t).or_default().gold += 1;
            report.overall.gold += 1;
        }
    }
    report
}

/// A predicted link is correct when its source span and target range both
/// match a gold link exactly.
pub fn alignment_prf(predicted: &[AlignmentRecord], gold: &[AlignmentRecord]) -> PrfReport {
    let key = |r: &AlignmentRecord| -> ((usize, TokenRange, TokenRange), NeType) {
        ((r.sentence_id, r.src, r.tgt), r.ne_type)
    };
    set_prf(
        &predicted.iter().map(key).collect::<Vec<_>>(),
        &gold.iter().map(key).collect::<Vec<_>>(),
    )
}

/// Precision/recall of an extracted pair list against a reference list,
/// comparing distinct `(source, target, type)` triples.
pub fn pair_prf(predicted: &[NePair], gold: &[NePair]) -> PrfReport {
    let key = |p: &NePair| ((p.src_surface.clone(), p.tgt_surface.clone(), p.ne_type), p.ne_type);
    set_prf(
        &predicted.iter().map(key).collect::<Vec<_>>(),
        &gold.iter().map(key).collect::<Vec<_>>(),
    )
}
