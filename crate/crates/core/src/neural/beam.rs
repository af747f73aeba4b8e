use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::model::{is_masked, Seq2SeqModel};
use super::vocab::{BOS, EOS};
use super::NeuralError;

#[derive(Clone, Debug, PartialEq)]
pub struct Hypothesis {
    pub text: String,
    /// Sum of the step log-probabilities, including the end-of-sequence step
    /// unless the hypothesis was cut at the length limit.
    pub logprob: f64,
}

/// Best translations, in non-increasing log-probability order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KBest {
    pub entries: Vec<Hypothesis>,
}

impl KBest {
    pub fn best(&self) -> Option<&Hypothesis> {
        self.entries.first()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|h| h.text.as_str())
    }
}

struct Live {
    tokens: Vec<usize>,
    logprob: f64,
    state: Vec<f64>,
}

struct Finished {
    tokens: Vec<usize>,
    logprob: f64,
}

fn by_score(a: (f64, &[usize]), b: (f64, &[usize])) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

/// Beam search over target characters.
///
/// Each step expands every live hypothesis by every emittable character and
/// keeps the `beam_width` best expansions; those ending in end-of-sequence
/// are set aside as finished. Hypotheses still live after `max_len`
/// characters are finished as they are. Ties are broken towards the smaller
/// id sequence, so a beam of width one is exactly greedy decoding.
pub fn translate(
    model: &Seq2SeqModel,
    src: &str,
    beam_width: usize,
    max_len: usize,
) -> Result<KBest, NeuralError> {
    if beam_width == 0 {
        return Err(NeuralError::InvalidBeam);
    }
    if src.is_empty() {
        return Err(NeuralError::EmptyInput);
    }
    let enc = model.encode_str(src)?;
    let mut live = alloc::vec![Live {
        tokens: Vec::new(),
        logprob: 0.0,
        state: enc.init_state.clone(),
    }];
    let mut finished: Vec<Finished> = Vec::new();

    for _ in 0..max_len {
        if live.is_empty() {
            break;
        }
        let mut states: Vec<Vec<f64>> = Vec::with_capacity(live.len());
        let mut candidates: Vec<(f64, Vec<usize>, usize)> = Vec::new();
        for (parent, hyp) in live.iter().enumerate() {
            let prev = hyp.tokens.last().copied().unwrap_or(BOS);
            let step = model.decode_step(&enc, &hyp.state, prev);
            for (id, lp) in step.log_probs.iter().enumerate() {
                if is_masked(id) || !lp.is_finite() {
                    continue;
                }
                let mut tokens = hyp.tokens.clone();
                tokens.push(id);
                candidates.push((hyp.logprob + lp, tokens, parent));
            }
            states.push(step.state().to_vec());
        }
        candidates.sort_by(|a, b| by_score((a.0, &a.1), (b.0, &b.1)));
        candidates.truncate(beam_width);

        let mut next = Vec::with_capacity(beam_width);
        for (logprob, mut tokens, parent) in candidates {
            if tokens.last() == Some(&EOS) {
                tokens.pop();
                finished.push(Finished { tokens, logprob });
            } else {
                next.push(Live {
                    tokens,
                    logprob,
                    state: states[parent].clone(),
                });
            }
        }
        live = next;
    }
    finished.extend(live.into_iter().map(|h| Finished {
        tokens: h.tokens,
        logprob: h.logprob,
    }));
    finished.sort_by(|a, b| by_score((a.logprob, &a.tokens), (b.logprob, &b.tokens)));
    finished.truncate(beam_width);

    Ok(KBest {
        entries: finished
            .into_iter()
            .map(|f| Hypothesis {
                text: model.tgt_vocab.decode(&f.tokens),
                logprob: f.logprob,
            })
            .collect(),
    })
}
