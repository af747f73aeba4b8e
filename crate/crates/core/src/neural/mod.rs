//! Character-level attention encoder-decoder for entity translation.
//!
//! A source entity is read character by character by a bidirectional GRU
//! encoder; a GRU decoder with additive attention emits the target entity one
//! character at a time, so `p(t | s) = Π_i p(t_i | t_<i, s)`. Everything,
//! including backpropagation, is implemented here on plain `f64` buffers.

mod beam;
mod format;
mod grad;
mod gradcheck;
mod gru;
mod model;
mod params;
mod tensor;
mod train;
mod vocab;

use alloc::string::String;

use thiserror::Error;

pub use beam::{translate, Hypothesis, KBest};
pub use format::{from_bytes, to_bytes, FormatError, FORMAT_VERSION, MAGIC};
pub use grad::{accumulate_gradient, pair_loss};
pub use gradcheck::{check_gradients, relative_error, GradCheckReport, TensorCheck, REL_FLOOR};
pub use gru::{Gru, GruStep};
pub use model::{DecodeStep, Encoding, Seq2SeqModel};
pub use params::{Params, INIT_SCALE};
pub use tensor::Tensor;
pub use train::{
    encode_pairs, init_model, mean_loss, train, Adadelta, Direction, EpochStats, TrainConfig,
    Trained,
};
pub use vocab::{CharVocab, BOS, EOS, PAD, RESERVED, UNK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeuralError {
    #[error("vocabulary has no characters")]
    EmptyVocab,
    #[error("empty input sequence")]
    EmptyInput,
    #[error("id {id} outside vocabulary of size {vocab}")]
    UnknownId { id: usize, vocab: usize },
    #[error("shape mismatch for {what}: expected {expected:?}, found {found:?}")]
    Shape {
        what: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("parameters contain non-finite values")]
    NonFinite,
    #[error("invalid model configuration: {0}")]
    Config(String),
    #[error("no training pairs")]
    EmptyTrainingSet,
    #[error("training diverged (non-finite loss) in epoch {epoch}")]
    Divergence { epoch: usize },
    #[error("beam width must be at least 1")]
    InvalidBeam,
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Network sizes and optimizer settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub hidden_size: usize,
    pub embed_size: usize,
    pub max_decode_len: usize,
    /// Multiplier on the Adadelta step; 1.0 is unscaled Adadelta.
    pub learning_rate: f64,
    pub adadelta_rho: f64,
    pub adadelta_eps: f64,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            hidden_size: 64,
            embed_size: 32,
            max_decode_len: 64,
            learning_rate: 1.0,
            adadelta_rho: 0.95,
            adadelta_eps: 1e-6,
            seed: 42,
        }
    }
}

impl ModelConfig {
    /// Sizes used for the full-scale system: 1000 hidden units and
    /// 500-dimensional embeddings.
    pub fn full_scale() -> Self {
        ModelConfig {
            hidden_size: 1000,
            embed_size: 500,
            ..ModelConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        let fail = |msg: &str| Err(NeuralError::Config(msg.into()));
        if self.hidden_size == 0 || self.embed_size == 0 || self.max_decode_len == 0 {
            return fail("sizes must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning rate must be positive");
        }
        if !(self.adadelta_rho > 0.0 && self.adadelta_rho < 1.0) {
            return fail("adadelta rho must lie in (0, 1)");
        }
        if !(self.adadelta_eps > 0.0 && self.adadelta_eps.is_finite()) {
            return fail("adadelta epsilon must be positive");
        }
        Ok(())
    }
}

/// Convenience wrapper: translations of `src` with the model's own length
/// limit.
pub fn translate_default(
    model: &Seq2SeqModel,
    src: &str,
    beam_width: usize,
) -> Result<KBest, NeuralError> {
    translate(model, src, beam_width, model.config.max_decode_len)
}
