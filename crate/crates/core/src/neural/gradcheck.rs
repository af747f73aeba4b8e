//! Central finite-difference check of the backpropagated gradient.

use alloc::string::String;
use alloc::vec::Vec;

use super::grad::{accumulate_gradient, pair_loss};
use super::model::Seq2SeqModel;
use super::NeuralError;

/// Gradients smaller than this in magnitude are compared absolutely.
pub const REL_FLOOR: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct TensorCheck {
    pub name: String,
    pub values: usize,
    pub max_rel_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckReport {
    pub tensors: Vec<TensorCheck>,
    pub checked: usize,
    pub max_rel_error: f64,
    /// Tensor name and flat index of the worst entry.
    pub worst: Option<(String, usize)>,
}

impl GradCheckReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_rel_error <= tolerance
    }
}

/// `|a - n| / max(|a|, |n|, REL_FLOOR)`
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(REL_FLOOR)
}

/// Compares the analytic gradient of the summed per-pair loss over `data`
/// with `(L(θ + ε) − L(θ − ε)) / 2ε` for every parameter value.
pub fn check_gradients(
    model: &Seq2SeqModel,
    data: &[(Vec<usize>, Vec<usize>)],
    epsilon: f64,
) -> Result<GradCheckReport, NeuralError> {
    let mut grad = model.params.zeros_like();
    for (src, tgt) in data {
        accumulate_gradient(model, src, tgt, &mut grad)?;
    }
    let loss = |m: &Seq2SeqModel| -> Result<f64, NeuralError> {
        data.iter().map(|(s, t)| pair_loss(m, s, t)).sum()
    };

    let mut probe = model.clone();
    let names = super::params::Params::names();
    let mut report = GradCheckReport {
        tensors: Vec::new(),
        checked: 0,
        max_rel_error: 0.0,
        worst: None,
    };
    for (ti, name) in names.iter().enumerate() {
        let n = grad.tensors()[ti].len();
        let mut worst_here = 0.0f64;
        for i in 0..n {
            let original = probe.params.tensors()[ti].data[i];
            probe.params.tensors_mut()[ti].data[i] = original + epsilon;
            let plus = loss(&probe)?;
            probe.params.tensors_mut()[ti].data[i] = original - epsilon;
            let minus = loss(&probe)?;
            probe.params.tensors_mut()[ti].data[i] = original;
            let numeric = (plus - minus) / (2.0 * epsilon);
            let err = relative_error(grad.tensors()[ti].data[i], numeric);
            worst_here = worst_here.max(err);
            if err > report.max_rel_error || report.worst.is_none() {
                report.max_rel_error = report.max_rel_error.max(err);
                report.worst = Some((name.clone(), i));
            }
        }
        report.checked += n;
        report.tensors.push(TensorCheck {
            name: name.clone(),
            values: n,
            max_rel_error: worst_here,
        });
    }
    Ok(report)
}
