//! Gated recurrent unit with update and reset gates.
//!
//! ```text
//! z  = σ(W_z x + U_z h + b_z)
//! r  = σ(W_r x + U_r h + b_r)
//! h~ = tanh(W_h x + U_h (r ⊙ h) + b_h)
//! h' = (1 - z) ⊙ h + z ⊙ h~
//! ```

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::tensor::{sigmoid, tanh, Tensor};

#[derive(Clone, Debug, PartialEq)]
pub struct Gru {
    pub w_z: Tensor,
    pub w_r: Tensor,
    pub w_h: Tensor,
    pub u_z: Tensor,
    pub u_r: Tensor,
    pub u_h: Tensor,
    pub b_z: Tensor,
    pub b_r: Tensor,
    pub b_h: Tensor,
}

pub(crate) const GRU_TENSOR_NAMES: [&str; 9] =
    ["w_z", "w_r", "w_h", "u_z", "u_r", "u_h", "b_z", "b_r", "b_h"];

/// Values kept from a forward step for backpropagation.
#[derive(Clone, Debug)]
pub struct GruStep {
    pub x: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    pub cand: Vec<f64>,
    pub h: Vec<f64>,
}

impl Gru {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        Gru {
            w_z: Tensor::zeros(hidden, input),
            w_r: Tensor::zeros(hidden, input),
            w_h: Tensor::zeros(hidden, input),
            u_z: Tensor::zeros(hidden, hidden),
            u_r: Tensor::zeros(hidden, hidden),
            u_h: Tensor::zeros(hidden, hidden),
            b_z: Tensor::zeros(1, hidden),
            b_r: Tensor::zeros(1, hidden),
            b_h: Tensor::zeros(1, hidden),
        }
    }

    /// Uniform weights in `[-scale, scale]`, zero biases.
    pub fn uniform<R: Rng>(input: usize, hidden: usize, scale: f64, rng: &mut R) -> Self {
        Gru {
            w_z: Tensor::uniform(hidden, input, scale, rng),
            w_r: Tensor::uniform(hidden, input, scale, rng),
            w_h: Tensor::uniform(hidden, input, scale, rng),
            u_z: Tensor::uniform(hidden, hidden, scale, rng),
            u_r: Tensor::uniform(hidden, hidden, scale, rng),
            u_h: Tensor::uniform(hidden, hidden, scale, rng),
            b_z: Tensor::zeros(1, hidden),
            b_r: Tensor::zeros(1, hidden),
            b_h: Tensor::zeros(1, hidden),
        }
    }

    pub fn hidden(&self) -> usize {
        self.u_z.rows
    }

    pub fn input(&self) -> usize {
        self.w_z.cols
    }

    pub fn tensors(&self) -> [&Tensor; 9] {
        [
            &self.w_z, &self.w_r, &self.w_h, &self.u_z, &self.u_r, &self.u_h, &self.b_z,
            &self.b_r, &self.b_h,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut Tensor; 9] {
        [
            &mut self.w_z,
            &mut self.w_r,
            &mut self.w_h,
            &mut self.u_z,
            &mut self.u_r,
            &mut self.u_h,
            &mut self.b_z,
            &mut self.b_r,
            &mut self.b_h,
        ]
    }

    pub fn step(&self, x: &[f64], h_prev: &[f64]) -> GruStep {
        let n = self.hidden();
        let mut z = self.b_z.data.clone();
        self.w_z.mv_add(x, &mut z);
        self.u_z.mv_add(h_prev, &mut z);
        z.iter_mut().for_each(|v| *v = sigmoid(*v));

        let mut r = self.b_r.data.clone();
        self.w_r.mv_add(x, &mut r);
        self.u_r.mv_add(h_prev, &mut r);
        r.iter_mut().for_each(|v| *v = sigmoid(*v));

        let gated: Vec<f64> = r.iter().zip(h_prev).map(|(a, b)| a * b).collect();
        let mut cand = self.b_h.data.clone();
        self.w_h.mv_add(x, &mut cand);
        self.u_h.mv_add(&gated, &mut cand);
        cand.iter_mut().for_each(|v| *v = tanh(*v));

        let h = (0..n)
            .map(|k| (1.0 - z[k]) * h_prev[k] + z[k] * cand[k])
            .collect();
        GruStep {
            x: x.to_vec(),
            h_prev: h_prev.to_vec(),
            z,
            r,
            cand,
            h,
        }
    }

    /// Accumulates parameter gradients into `grad` and input/state gradients
    /// into `dx` and `dh_prev`, given `dh` = ∂L/∂h'.
    pub fn backward(
        &self,
        step: &GruStep,
        dh: &[f64],
        grad: &mut Gru,
        dx: &mut [f64],
        dh_prev: &mut [f64],
    ) {
        let n = self.hidden();
        let mut dz_pre = vec![0.0; n];
        let mut dcand_pre = vec![0.0; n];
        for k in 0..n {
            let z = step.z[k];
            let c = step.cand[k];
            dh_prev[k] += dh[k] * (1.0 - z);
            dz_pre[k] = dh[k] * (c - step.h_prev[k]) * z * (1.0 - z);
            dcand_pre[k] = dh[k] * z * (1.0 - c * c);
        }

        // candidate path
        let gated: Vec<f64> = step.r.iter().zip(&step.h_prev).map(|(a, b)| a * b).collect();
        grad.w_h.outer_add(&dcand_pre, &step.x);
        grad.u_h.outer_add(&dcand_pre, &gated);
        super::tensor::add_assign(&mut grad.b_h.data, &dcand_pre);
        self.w_h.mtv_add(&dcand_pre, dx);
        let mut dgated = vec![0.0; n];
        self.u_h.mtv_add(&dcand_pre, &mut dgated);
        let mut dr_pre = vec![0.0; n];
        for k in 0..n {
            dh_prev[k] += dgated[k] * step.r[k];
            let r = step.r[k];
            dr_pre[k] = dgated[k] * step.h_prev[k] * r * (1.0 - r);
        }

        // update gate
        grad.w_z.outer_add(&dz_pre, &step.x);
        grad.u_z.outer_add(&dz_pre, &step.h_prev);
        super::tensor::add_assign(&mut grad.b_z.data, &dz_pre);
        self.w_z.mtv_add(&dz_pre, dx);
        self.u_z.mtv_add(&dz_pre, dh_prev);

        // reset gate
        grad.w_r.outer_add(&dr_pre, &step.x);
        grad.u_r.outer_add(&dr_pre, &step.h_prev);
        super::tensor::add_assign(&mut grad.b_r.data, &dr_pre);
        self.w_r.mtv_add(&dr_pre, dx);
        self.u_r.mtv_add(&dr_pre, dh_prev);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_closed_form() {
        let mut gru = Gru::zeros(2, 3);
        gru.b_z.data = vec![0.5, -1.0, 0.0];
        gru.b_h.data = vec![0.3, 0.2, -0.4];
        let h0 = vec![0.0; 3];
        let s1 = gru.step(&[1.0, -1.0], &h0);
        for k in 0..3 {
            let z = sigmoid(gru.b_z.data[k]);
            let c = libm::tanh(gru.b_h.data[k]);
            assert!((s1.h[k] - z * c).abs() < 1e-15);
            let s2 = gru.step(&[0.0, 0.0], &s1.h);
            assert!((s2.h[k] - ((1.0 - z) * z * c + z * c)).abs() < 1e-15);
        }
    }
}
