use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::gru::{Gru, GRU_TENSOR_NAMES};
use super::tensor::Tensor;

/// Uniform initialization range for weight matrices.
pub const INIT_SCALE: f64 = 0.08;

/// All trainable tensors of the encoder-decoder.
///
/// Shapes, with `h` hidden size, `e` embedding size, `V` vocab sizes:
///
/// | tensor | shape |
/// |---|---|
/// | `src_embed` | `V_src x e` |
/// | `tgt_embed` | `V_tgt x e` |
/// | `enc_fwd`, `enc_bwd` | GRU, input `e`, state `h` |
/// | `att_query` | `h x h` |
/// | `att_key` | `h x 2h` |
/// | `att_score` | `1 x h` |
/// | `init_w`, `init_b` | `h x h`, `1 x h` |
/// | `dec` | GRU, input `e + 2h`, state `h` |
/// | `out_w`, `out_b` | `V_tgt x (h + 2h + e)`, `1 x V_tgt` |
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub src_embed: Tensor,
    pub tgt_embed: Tensor,
    pub enc_fwd: Gru,
    pub enc_bwd: Gru,
    pub att_query: Tensor,
    pub att_key: Tensor,
    pub att_score: Tensor,
    pub init_w: Tensor,
    pub init_b: Tensor,
    pub dec: Gru,
    pub out_w: Tensor,
    pub out_b: Tensor,
}

impl Params {
    pub fn zeros(src_vocab: usize, tgt_vocab: usize, hidden: usize, embed: usize) -> Self {
        Params {
            src_embed: Tensor::zeros(src_vocab, embed),
            tgt_embed: Tensor::zeros(tgt_vocab, embed),
            enc_fwd: Gru::zeros(embed, hidden),
            enc_bwd: Gru::zeros(embed, hidden),
            att_query: Tensor::zeros(hidden, hidden),
            att_key: Tensor::zeros(hidden, 2 * hidden),
            att_score: Tensor::zeros(1, hidden),
            init_w: Tensor::zeros(hidden, hidden),
            init_b: Tensor::zeros(1, hidden),
            dec: Gru::zeros(embed + 2 * hidden, hidden),
            out_w: Tensor::zeros(tgt_vocab, 3 * hidden + embed),
            out_b: Tensor::zeros(1, tgt_vocab),
        }
    }

    /// Weights uniform in `[-INIT_SCALE, INIT_SCALE]`, biases zero.
    pub fn init<R: Rng>(
        src_vocab: usize,
        tgt_vocab: usize,
        hidden: usize,
        embed: usize,
        rng: &mut R,
    ) -> Self {
        let s = INIT_SCALE;
        Params {
            src_embed: Tensor::uniform(src_vocab, embed, s, rng),
            tgt_embed: Tensor::uniform(tgt_vocab, embed, s, rng),
            enc_fwd: Gru::uniform(embed, hidden, s, rng),
            enc_bwd: Gru::uniform(embed, hidden, s, rng),
            att_query: Tensor::uniform(hidden, hidden, s, rng),
            att_key: Tensor::uniform(hidden, 2 * hidden, s, rng),
            att_score: Tensor::uniform(1, hidden, s, rng),
            init_w: Tensor::uniform(hidden, hidden, s, rng),
            init_b: Tensor::zeros(1, hidden),
            dec: Gru::uniform(embed + 2 * hidden, hidden, s, rng),
            out_w: Tensor::uniform(tgt_vocab, 3 * hidden + embed, s, rng),
            out_b: Tensor::zeros(1, tgt_vocab),
        }
    }

    pub fn zeros_like(&self) -> Self {
        let mut p = self.clone();
        for t in p.tensors_mut() {
            t.data.iter_mut().for_each(|v| *v = 0.0);
        }
        p
    }

    /// Tensors in canonical order; [`Params::names`] and
    /// [`Params::tensors_mut`] use the same order.
    pub fn tensors(&self) -> Vec<&Tensor> {
        let mut out = Vec::with_capacity(36);
        out.push(&self.src_embed);
        out.push(&self.tgt_embed);
        out.extend(self.enc_fwd.tensors());
        out.extend(self.enc_bwd.tensors());
        out.push(&self.att_query);
        out.push(&self.att_key);
        out.push(&self.att_score);
        out.push(&self.init_w);
        out.push(&self.init_b);
        out.extend(self.dec.tensors());
        out.push(&self.out_w);
        out.push(&self.out_b);
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut out = Vec::with_capacity(36);
        out.push(&mut self.src_embed);
        out.push(&mut self.tgt_embed);
        out.extend(self.enc_fwd.tensors_mut());
        out.extend(self.enc_bwd.tensors_mut());
        out.push(&mut self.att_query);
        out.push(&mut self.att_key);
        out.push(&mut self.att_score);
        out.push(&mut self.init_w);
        out.push(&mut self.init_b);
        out.extend(self.dec.tensors_mut());
        out.push(&mut self.out_w);
        out.push(&mut self.out_b);
        out
    }

    pub fn names() -> Vec<String> {
        let mut out: Vec<String> = Vec::with_capacity(36);
        out.push("src_embed".into());
        out.push("tgt_embed".into());
        for prefix in ["enc_fwd", "enc_bwd"] {
            out.extend(GRU_TENSOR_NAMES.iter().map(|n| format!("{prefix}.{n}")));
        }
        for n in ["att_query", "att_key", "att_score", "init_w", "init_b"] {
            out.push(n.into());
        }
        out.extend(GRU_TENSOR_NAMES.iter().map(|n| format!("dec.{n}")));
        out.push("out_w".into());
        out.push("out_b".into());
        out
    }

    pub fn num_values(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn all_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.all_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn names_align_with_tensors() {
        let p = Params::zeros(6, 7, 4, 3);
        assert_eq!(p.tensors().len(), Params::names().len());
        assert_eq!(p.tensors().len(), 36);
        assert_eq!(p.out_w.cols, 3 * 4 + 3);
        assert_eq!(p.dec.input(), 3 + 8);
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = Params::init(6, 7, 4, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let b = Params::init(6, 7, 4, 3, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        for t in a.tensors() {
            assert!(t.data.iter().all(|v| v.abs() <= INIT_SCALE));
        }
        assert!(a.init_b.data.iter().all(|v| *v == 0.0));
        assert!(a.dec.b_z.data.iter().all(|v| *v == 0.0));
    }
}
