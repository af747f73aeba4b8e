//! Forward computation of the attention encoder-decoder.
//!
//! The encoder is a bidirectional GRU over source character embeddings; the
//! annotation of position `j` is the forward state after `j` concatenated
//! with the backward state after reading `m..j`. The decoder starts from
//! `tanh(W_init · backward_0 + b_init)` and at each step:
//!
//! 1. scores every annotation with `vᵀ tanh(W_q s + W_k a_j)` and
//!    normalizes the scores with a softmax,
//! 2. feeds `[embed(previous char); context]` to its GRU,
//! 3. projects `[state; context; embed(previous char)]` to target logits.
//!
//! The reserved `bos`, `pad` and unknown-character ids can never be emitted;
//! their probability is exactly zero.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gru::GruStep;
use super::params::Params;
use super::tensor::{axpy, dot, tanh};
use super::vocab::{CharVocab, BOS, EOS, PAD, UNK};
use super::{ModelConfig, NeuralError};

/// A trained or freshly initialized character-level translator.
#[derive(Clone, Debug, PartialEq)]
pub struct Seq2SeqModel {
    pub config: ModelConfig,
    pub src_vocab: CharVocab,
    pub tgt_vocab: CharVocab,
    pub params: Params,
}

/// Encoder output for one source string.
#[derive(Clone, Debug)]
pub struct Encoding {
    /// Annotations, one `2 * hidden` vector per source position.
    pub states: Vec<Vec<f64>>,
    /// Initial decoder state.
    pub init_state: Vec<f64>,
    pub(crate) keys: Vec<Vec<f64>>,
    pub(crate) src_ids: Vec<usize>,
    pub(crate) fwd: Vec<GruStep>,
    // bwd[j] is the step that read position j
    pub(crate) bwd: Vec<GruStep>,
}

/// One decoder step, with everything backpropagation needs.
#[derive(Clone, Debug)]
pub struct DecodeStep {
    pub(crate) prev_state: Vec<f64>,
    pub(crate) prev_token: usize,
    pub(crate) att_hidden: Vec<Vec<f64>>,
    /// Attention weights over source positions.
    pub weights: Vec<f64>,
    pub(crate) gru: GruStep,
    pub(crate) out_in: Vec<f64>,
    /// Natural-log probabilities over the target vocabulary; masked ids are
    /// `-inf`.
    pub log_probs: Vec<f64>,
}

impl DecodeStep {
    pub fn state(&self) -> &[f64] {
        &self.gru.h
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| libm::exp(*l)).collect()
    }
}

pub(crate) fn is_masked(id: usize) -> bool {
    matches!(id, BOS | UNK | PAD)
}

impl Seq2SeqModel {
    /// A model with parameters drawn from `config.seed`.
    pub fn new(
        config: ModelConfig,
        src_vocab: CharVocab,
        tgt_vocab: CharVocab,
    ) -> Result<Self, NeuralError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let params = Params::init(
            src_vocab.len(),
            tgt_vocab.len(),
            config.hidden_size,
            config.embed_size,
            &mut rng,
        );
        Ok(Seq2SeqModel {
            config,
            src_vocab,
            tgt_vocab,
            params,
        })
    }

    /// Assembles a model, checking every tensor shape against the config
    /// and vocabularies.
    pub fn from_parts(
        config: ModelConfig,
        src_vocab: CharVocab,
        tgt_vocab: CharVocab,
        params: Params,
    ) -> Result<Self, NeuralError> {
        config.validate()?;
        let expected = Params::zeros(
            src_vocab.len(),
            tgt_vocab.len(),
            config.hidden_size,
            config.embed_size,
        );
        for ((name, want), got) in Params::names()
            .into_iter()
            .zip(expected.tensors())
            .zip(params.tensors())
        {
            if (want.rows, want.cols) != (got.rows, got.cols) || got.data.len() != want.data.len()
            {
                return Err(NeuralError::Shape {
                    what: name,
                    expected: (want.rows, want.cols),
                    found: (got.rows, got.cols),
                });
            }
        }
        if !params.all_finite() {
            return Err(NeuralError::NonFinite);
        }
        Ok(Seq2SeqModel {
            config,
            src_vocab,
            tgt_vocab,
            params,
        })
    }

    pub fn hidden(&self) -> usize {
        self.config.hidden_size
    }

    pub fn encode_str(&self, src: &str) -> Result<Encoding, NeuralError> {
        self.encode(&self.src_vocab.encode(src))
    }

    pub fn encode(&self, src_ids: &[usize]) -> Result<Encoding, NeuralError> {
        if src_ids.is_empty() {
            return Err(NeuralError::EmptyInput);
        }
        if let Some(&id) = src_ids.iter().find(|&&id| id >= self.src_vocab.len()) {
            return Err(NeuralError::UnknownId {
                id,
                vocab: self.src_vocab.len(),
            });
        }
        let p = &self.params;
        let h = self.hidden();
        let m = src_ids.len();

        let mut fwd = Vec::with_capacity(m);
        let mut state = vec![0.0; h];
        for &id in src_ids {
            let step = p.enc_fwd.step(p.src_embed.row(id), &state);
            state.clone_from(&step.h);
            fwd.push(step);
        }

        let mut bwd: Vec<Option<GruStep>> = vec![None; m];
        let mut state = vec![0.0; h];
        for j in (0..m).rev() {
            let step = p.enc_bwd.step(p.src_embed.row(src_ids[j]), &state);
            state.clone_from(&step.h);
            bwd[j] = Some(step);
        }
        let bwd: Vec<GruStep> = bwd.into_iter().map(|s| s.expect("filled")).collect();

        let states: Vec<Vec<f64>> = (0..m)
            .map(|j| {
                let mut a = Vec::with_capacity(2 * h);
                a.extend_from_slice(&fwd[j].h);
                a.extend_from_slice(&bwd[j].h);
                a
            })
            .collect();
        let keys = states
            .iter()
            .map(|a| {
                let mut k = vec![0.0; h];
                p.att_key.mv_add(a, &mut k);
                k
            })
            .collect();

        let mut init_state = p.init_b.data.clone();
        p.init_w.mv_add(&bwd[0].h, &mut init_state);
        init_state.iter_mut().for_each(|v| *v = tanh(*v));

        Ok(Encoding {
            states,
            init_state,
            keys,
            src_ids: src_ids.to_vec(),
            fwd,
            bwd,
        })
    }

    /// Attention weights of `decoder_state` over `encoder_states`.
    pub fn attention(
        &self,
        decoder_state: &[f64],
        encoder_states: &[Vec<f64>],
    ) -> Result<Vec<f64>, NeuralError> {
        let h = self.hidden();
        if decoder_state.len() != h {
            return Err(NeuralError::Shape {
                what: "decoder state".into(),
                expected: (1, h),
                found: (1, decoder_state.len()),
            });
        }
        if encoder_states.is_empty() {
            return Err(NeuralError::EmptyInput);
        }
        if let Some(bad) = encoder_states.iter().find(|s| s.len() != 2 * h) {
            return Err(NeuralError::Shape {
                what: "encoder state".into(),
                expected: (1, 2 * h),
                found: (1, bad.len()),
            });
        }
        let keys: Vec<Vec<f64>> = encoder_states
            .iter()
            .map(|a| {
                let mut k = vec![0.0; h];
                self.params.att_key.mv_add(a, &mut k);
                k
            })
            .collect();
        let (_, _, weights) = self.attend(decoder_state, &keys);
        Ok(weights)
    }

    /// Returns (query, tanh(query + key_j) per position, weights).
    fn attend(&self, state: &[f64], keys: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
        let h = self.hidden();
        let mut query = vec![0.0; h];
        self.params.att_query.mv_add(state, &mut query);
        let hidden: Vec<Vec<f64>> = keys
            .iter()
            .map(|k| k.iter().zip(&query).map(|(a, b)| tanh(a + b)).collect())
            .collect();
        let scores: Vec<f64> = hidden
            .iter()
            .map(|t: &Vec<f64>| dot(&self.params.att_score.data, t))
            .collect();
        let weights = super::tensor::softmax(&scores);
        (query, hidden, weights)
    }

    /// One decoder step from `state` after emitting `prev_token`.
    pub fn decode_step(&self, enc: &Encoding, state: &[f64], prev_token: usize) -> DecodeStep {
        let p = &self.params;
        let h = self.hidden();
        let (_, att_hidden, weights) = self.attend(state, &enc.keys);
        let mut context = vec![0.0; 2 * h];
        for (w, a) in weights.iter().zip(&enc.states) {
            axpy(*w, a, &mut context);
        }
        let emb = p.tgt_embed.row(prev_token);
        let mut x = Vec::with_capacity(emb.len() + 2 * h);
        x.extend_from_slice(emb);
        x.extend_from_slice(&context);
        let gru = p.dec.step(&x, state);

        let mut out_in = Vec::with_capacity(p.out_w.cols);
        out_in.extend_from_slice(&gru.h);
        out_in.extend_from_slice(&context);
        out_in.extend_from_slice(emb);
        let mut logits = p.out_b.data.clone();
        p.out_w.mv_add(&out_in, &mut logits);
        let log_probs = masked_log_softmax(&logits);

        DecodeStep {
            prev_state: state.to_vec(),
            prev_token,
            att_hidden,
            weights,
            gru,
            out_in,
            log_probs,
        }
    }

    /// Runs the decoder teacher-forced over `targets` (which should end in
    /// `EOS` for a complete sequence).
    pub fn decode_forced(&self, enc: &Encoding, targets: &[usize]) -> Vec<DecodeStep> {
        let mut steps: Vec<DecodeStep> = Vec::with_capacity(targets.len());
        let mut prev = BOS;
        for &t in targets {
            let state = match steps.last() {
                Some(s) => s.gru.h.clone(),
                None => enc.init_state.clone(),
            };
            steps.push(self.decode_step(enc, &state, prev));
            prev = t;
        }
        steps
    }

    /// `log p(tgt | src)` including the final end-of-sequence step.
    ///
    /// Unseen characters map to the unknown-character id, which the decoder
    /// never emits, so a target containing one has log-probability `-inf`.
    pub fn sequence_logprob(&self, src: &str, tgt: &str) -> Result<f64, NeuralError> {
        let mut ids = self.tgt_vocab.encode(tgt);
        ids.push(EOS);
        self.forced_logprob(src, &ids)
    }

    /// `log p` of `prefix` as the first characters of the output, without
    /// ending the sequence.
    pub fn prefix_logprob(&self, src: &str, prefix: &str) -> Result<f64, NeuralError> {
        let ids = self.tgt_vocab.encode(prefix);
        self.forced_logprob(src, &ids)
    }

    fn forced_logprob(&self, src: &str, targets: &[usize]) -> Result<f64, NeuralError> {
        let enc = self.encode_str(src)?;
        let steps = self.decode_forced(&enc, targets);
        Ok(steps
            .iter()
            .zip(targets)
            .map(|(s, &t)| s.log_probs[t])
            .sum())
    }

    /// Greedy decoding: the most probable character at each step.
    pub fn greedy(&self, src: &str, max_len: usize) -> Result<(alloc::string::String, f64), NeuralError> {
        let enc = self.encode_str(src)?;
        let mut state = enc.init_state.clone();
        let mut prev = BOS;
        let mut out = Vec::new();
        let mut logprob = 0.0;
        while out.len() < max_len {
            let step = self.decode_step(&enc, &state, prev);
            let (best, lp) = argmax(&step.log_probs);
            logprob += lp;
            if best == EOS {
                break;
            }
            out.push(best);
            prev = best;
            state = step.gru.h;
        }
        Ok((self.tgt_vocab.decode(&out), logprob))
    }
}

/// Index and value of the largest entry; ties go to the lowest index.
pub(crate) fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

fn masked_log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_masked(*i))
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logits
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_masked(*i))
        .map(|(_, v)| libm::exp(v - max))
        .sum();
    let log_z = max + libm::log(sum);
    logits
        .iter()
        .enumerate()
        .map(|(i, v)| if is_masked(i) { f64::NEG_INFINITY } else { v - log_z })
        .collect()
}
