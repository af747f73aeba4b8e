//! Adadelta training with dev-set early stopping.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grad::{accumulate_gradient, pair_loss};
use super::model::Seq2SeqModel;
use super::params::Params;
use super::vocab::{CharVocab, EOS, UNK};
use super::{ModelConfig, NeuralError};
use crate::NePair;

/// Which side of the entity pairs is the model's input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    SrcToTgt,
    TgtToSrc,
}

impl Direction {
    /// Returns (input, output) surfaces of `pair` for this direction.
    pub fn orient(self, pair: &NePair) -> (&str, &str) {
        match self {
            Direction::SrcToTgt => (&pair.src_surface, &pair.tgt_surface),
            Direction::TgtToSrc => (&pair.tgt_surface, &pair.src_surface),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub max_epochs: usize,
    /// Epochs without dev-loss improvement before stopping.
    pub patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 100,
            patience: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    /// Mean per-character loss over the epoch's updates.
    pub train_loss: f64,
    /// Mean per-character loss on the dev set after the epoch (on the
    /// training set when no dev pairs are usable).
    pub dev_loss: f64,
}

#[derive(Clone, Debug)]
pub struct Trained {
    pub model: Seq2SeqModel,
    pub log: Vec<EpochStats>,
    pub best_epoch: usize,
}

/// Adadelta with a step multiplier:
///
/// ```text
/// E[g²]  ← ρ E[g²] + (1 − ρ) g²
/// Δ      ← √(E[Δ²] + ε) / √(E[g²] + ε) · g
/// E[Δ²]  ← ρ E[Δ²] + (1 − ρ) Δ²
/// θ      ← θ − lr · Δ
/// ```
#[derive(Clone, Debug)]
pub struct Adadelta {
    pub rho: f64,
    pub eps: f64,
    pub lr: f64,
    sq_grad: Params,
    sq_update: Params,
}

impl Adadelta {
    pub fn new(params: &Params, lr: f64, rho: f64, eps: f64) -> Self {
        Adadelta {
            rho,
            eps,
            lr,
            sq_grad: params.zeros_like(),
            sq_update: params.zeros_like(),
        }
    }

    pub fn step(&mut self, params: &mut Params, grad: &Params) {
        let (rho, eps, lr) = (self.rho, self.eps, self.lr);
        let groups = params
            .tensors_mut()
            .into_iter()
            .zip(grad.tensors())
            .zip(self.sq_grad.tensors_mut())
            .zip(self.sq_update.tensors_mut());
        for (((theta, g), eg), ed) in groups {
            for i in 0..theta.data.len() {
                let gi = g.data[i];
                eg.data[i] = rho * eg.data[i] + (1.0 - rho) * gi * gi;
                let delta = libm::sqrt(ed.data[i] + eps) / libm::sqrt(eg.data[i] + eps) * gi;
                ed.data[i] = rho * ed.data[i] + (1.0 - rho) * delta * delta;
                theta.data[i] -= lr * delta;
            }
        }
    }
}

/// Input ids and target ids (ending in the end-of-sequence id) per pair.
pub type Encoded = Vec<(Vec<usize>, Vec<usize>)>;

/// Encodes pairs for `model`; target strings with characters outside the
/// target vocabulary are skipped because their likelihood is zero.
pub fn encode_pairs(model: &Seq2SeqModel, pairs: &[NePair], direction: Direction) -> Encoded {
    pairs
        .iter()
        .filter_map(|p| {
            let (src, tgt) = direction.orient(p);
            let src_ids = model.src_vocab.encode(src);
            let mut tgt_ids = model.tgt_vocab.encode(tgt);
            if src_ids.is_empty() || tgt_ids.contains(&UNK) {
                return None;
            }
            tgt_ids.push(EOS);
            Some((src_ids, tgt_ids))
        })
        .collect()
}

/// Mean per-character loss over encoded pairs.
pub fn mean_loss(model: &Seq2SeqModel, data: &Encoded) -> Result<f64, NeuralError> {
    let mut total = 0.0;
    let mut steps = 0usize;
    for (src, tgt) in data {
        total += pair_loss(model, src, tgt)? * tgt.len() as f64;
        steps += tgt.len();
    }
    if steps == 0 {
        return Ok(0.0);
    }
    Ok(total / steps as f64)
}

/// Builds vocabularies from `pairs` and initializes a model for `direction`.
pub fn init_model(
    pairs: &[NePair],
    direction: Direction,
    config: &ModelConfig,
) -> Result<Seq2SeqModel, NeuralError> {
    if pairs.is_empty() {
        return Err(NeuralError::EmptyTrainingSet);
    }
    let src_vocab = CharVocab::from_texts(pairs.iter().map(|p| direction.orient(p).0))?;
    let tgt_vocab = CharVocab::from_texts(pairs.iter().map(|p| direction.orient(p).1))?;
    Seq2SeqModel::new(config.clone(), src_vocab, tgt_vocab)
}

/// Trains a translator on `pairs`, returning the checkpoint with the best
/// dev loss. `on_epoch` sees each epoch's statistics as they are produced.
///
/// Updates are per pair, in an order shuffled each epoch from the config
/// seed, so a run is bit-for-bit reproducible.
pub fn train(
    pairs: &[NePair],
    direction: Direction,
    config: &ModelConfig,
    train_config: &TrainConfig,
    dev_pairs: &[NePair],
    mut on_epoch: impl FnMut(&EpochStats),
) -> Result<Trained, NeuralError> {
    config.validate()?;
    let mut model = init_model(pairs, direction, config)?;
    let data = encode_pairs(&model, pairs, direction);
    let dev = encode_pairs(&model, dev_pairs, direction);
    // a different stream from parameter initialization
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x005e_ed0f_0de5);
    let mut opt = Adadelta::new(
        &model.params,
        config.learning_rate,
        config.adadelta_rho,
        config.adadelta_eps,
    );
    let mut grad = model.params.zeros_like();
    let mut order: Vec<usize> = (0..data.len()).collect();

    let mut best_loss = f64::INFINITY;
    let mut best_params = model.params.clone();
    let mut best_epoch = 0;
    let mut since_best = 0;
    let mut log = Vec::new();

    for epoch in 1..=train_config.max_epochs {
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let mut nll = 0.0;
        let mut steps = 0usize;
        for &idx in &order {
            let (src, tgt) = &data[idx];
            for t in grad.tensors_mut() {
                t.data.iter_mut().for_each(|v| *v = 0.0);
            }
            nll += accumulate_gradient(&model, src, tgt, &mut grad)?;
            steps += tgt.len();
            opt.step(&mut model.params, &grad);
        }
        let train_loss = nll / steps.max(1) as f64;
        if !train_loss.is_finite() || !model.params.all_finite() {
            return Err(NeuralError::Divergence { epoch });
        }
        let dev_loss = if dev.is_empty() {
            mean_loss(&model, &data)?
        } else {
            mean_loss(&model, &dev)?
        };
        if !dev_loss.is_finite() {
            return Err(NeuralError::Divergence { epoch });
        }
        let stats = EpochStats {
            epoch,
            train_loss,
            dev_loss,
        };
        on_epoch(&stats);
        log.push(stats);

        if dev_loss < best_loss {
            best_loss = dev_loss;
            best_params.clone_from(&model.params);
            best_epoch = epoch;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= train_config.patience {
                break;
            }
        }
    }

    model.params = best_params;
    Ok(Trained {
        model,
        log,
        best_epoch,
    })
}
