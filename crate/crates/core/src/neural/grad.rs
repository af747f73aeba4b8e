//! Loss and its gradient by backpropagation through the decoder, the
//! attention and both encoder recurrences.

use alloc::vec;
use alloc::vec::Vec;

use super::model::{is_masked, Seq2SeqModel};
use super::params::Params;
use super::tensor::{add_assign, axpy, dot};
use super::NeuralError;

/// Mean negative log-likelihood per target step of `targets` (which end in
/// the end-of-sequence id) given `src_ids`.
pub fn pair_loss(
    model: &Seq2SeqModel,
    src_ids: &[usize],
    targets: &[usize],
) -> Result<f64, NeuralError> {
    if targets.is_empty() {
        return Err(NeuralError::EmptyInput);
    }
    let enc = model.encode(src_ids)?;
    let steps = model.decode_forced(&enc, targets);
    let nll: f64 = steps
        .iter()
        .zip(targets)
        .map(|(s, &t)| -s.log_probs[t])
        .sum();
    Ok(nll / targets.len() as f64)
}

/// Adds the gradient of [`pair_loss`] to `grad` and returns the summed
/// negative log-likelihood of the pair.
pub fn accumulate_gradient(
    model: &Seq2SeqModel,
    src_ids: &[usize],
    targets: &[usize],
    grad: &mut Params,
) -> Result<f64, NeuralError> {
    if targets.is_empty() {
        return Err(NeuralError::EmptyInput);
    }
    if let Some(&t) = targets.iter().find(|&&t| is_masked(t) || t >= model.tgt_vocab.len()) {
        return Err(NeuralError::UnknownId {
            id: t,
            vocab: model.tgt_vocab.len(),
        });
    }
    let p = &model.params;
    let h = model.hidden();
    let e = model.config.embed_size;
    let enc = model.encode(src_ids)?;
    let steps = model.decode_forced(&enc, targets);
    let m = enc.states.len();
    let scale = 1.0 / targets.len() as f64;

    let mut d_ann = vec![vec![0.0; 2 * h]; m];
    let mut d_keys = vec![vec![0.0; h]; m];
    let mut ds_next = vec![0.0; h];
    let mut nll = 0.0;

    let vocab = model.tgt_vocab.len();
    let mut dlogits = vec![0.0; vocab];
    for (step, &y) in steps.iter().zip(targets).rev() {
        nll -= step.log_probs[y];
        for (k, d) in dlogits.iter_mut().enumerate() {
            *d = if is_masked(k) {
                0.0
            } else {
                let target = if k == y { 1.0 } else { 0.0 };
                scale * (libm::exp(step.log_probs[k]) - target)
            };
        }
        grad.out_w.outer_add(&dlogits, &step.out_in);
        add_assign(&mut grad.out_b.data, &dlogits);
        let mut d_out_in = vec![0.0; p.out_w.cols];
        p.out_w.mtv_add(&dlogits, &mut d_out_in);

        let mut ds = ds_next.clone();
        add_assign(&mut ds, &d_out_in[..h]);
        let mut dctx = d_out_in[h..3 * h].to_vec();
        let mut demb = d_out_in[3 * h..].to_vec();

        let mut dx = vec![0.0; e + 2 * h];
        let mut ds_prev = vec![0.0; h];
        p.dec.backward(&step.gru, &ds, &mut grad.dec, &mut dx, &mut ds_prev);
        add_assign(&mut demb, &dx[..e]);
        add_assign(&mut dctx, &dx[e..]);
        add_assign(grad.tgt_embed.row_mut(step.prev_token), &demb);

        // context = Σ_j α_j a_j
        let dalpha: Vec<f64> = enc.states.iter().map(|a| dot(a, &dctx)).collect();
        for (w, da) in step.weights.iter().zip(d_ann.iter_mut()) {
            axpy(*w, &dctx, da);
        }
        let mean: f64 = step.weights.iter().zip(&dalpha).map(|(w, d)| w * d).sum();
        let mut dq = vec![0.0; h];
        for j in 0..m {
            let de = step.weights[j] * (dalpha[j] - mean);
            if de == 0.0 {
                continue;
            }
            let t = &step.att_hidden[j];
            axpy(de, t, &mut grad.att_score.data);
            for k in 0..h {
                let dpre = de * p.att_score.data[k] * (1.0 - t[k] * t[k]);
                dq[k] += dpre;
                d_keys[j][k] += dpre;
            }
        }
        grad.att_query.outer_add(&dq, &step.prev_state);
        p.att_query.mtv_add(&dq, &mut ds_prev);
        ds_next = ds_prev;
    }

    // s_0 = tanh(W_init · backward_0 + b_init)
    let dpre: Vec<f64> = ds_next
        .iter()
        .zip(&enc.init_state)
        .map(|(d, s)| d * (1.0 - s * s))
        .collect();
    grad.init_w.outer_add(&dpre, &enc.bwd[0].h);
    add_assign(&mut grad.init_b.data, &dpre);
    let mut d_bwd0 = vec![0.0; h];
    p.init_w.mtv_add(&dpre, &mut d_bwd0);

    for j in 0..m {
        grad.att_key.outer_add(&d_keys[j], &enc.states[j]);
        p.att_key.mtv_add(&d_keys[j], &mut d_ann[j]);
    }

    let mut dh = vec![0.0; h];
    for j in (0..m).rev() {
        add_assign(&mut dh, &d_ann[j][..h]);
        let mut dx = vec![0.0; e];
        let mut dprev = vec![0.0; h];
        p.enc_fwd
            .backward(&enc.fwd[j], &dh, &mut grad.enc_fwd, &mut dx, &mut dprev);
        add_assign(grad.src_embed.row_mut(enc.src_ids[j]), &dx);
        dh = dprev;
    }

    let mut dh = d_bwd0;
    for (j, ann) in d_ann.iter().enumerate().take(m) {
        add_assign(&mut dh, &ann[h..]);
        let mut dx = vec![0.0; e];
        let mut dprev = vec![0.0; h];
        p.enc_bwd
            .backward(&enc.bwd[j], &dh, &mut grad.enc_bwd, &mut dx, &mut dprev);
        add_assign(grad.src_embed.row_mut(enc.src_ids[j]), &dx);
        dh = dprev;
    }

    Ok(nll)
}
