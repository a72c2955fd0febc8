//! Adam with a stepwise learning-rate decay.

use pecl_nn::{Module, Param};
use serde::{Deserialize, Serialize};

use crate::TrainError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates for one tensor.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn zeros(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }
}

/// One bias-corrected Adam update at step `t ≥ 1`.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    t: u64,
    lr: f64,
    cfg: &AdamConfig,
) -> Result<(), TrainError> {
    let n = params.len();
    if grads.len() != n || state.m.len() != n || state.v.len() != n {
        return Err(TrainError::ShapeMismatch(format!(
            "adam: {n} params, {} grads, {}/{} moments",
            grads.len(),
            state.m.len(),
            state.v.len()
        )));
    }
    if t == 0 {
        return Err(TrainError::InvalidConfig("adam step counter starts at 1".into()));
    }
    let c1 = 1.0 - cfg.beta1.powi(t as i32);
    let c2 = 1.0 - cfg.beta2.powi(t as i32);
    for i in 0..n {
        let g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + cfg.eps);
    }
    Ok(())
}

/// `lr0 · factor^floor(epoch / every)` for a zero-based epoch index.
pub fn learning_rate(lr0: f64, decay_factor: f64, decay_every: usize, epoch: usize) -> f64 {
    lr0 * decay_factor.powi((epoch / decay_every.max(1)) as i32)
}

/// Adam over every trainable parameter of a module, in visiting order.
#[derive(Debug, Clone, Default)]
pub struct Adam {
    pub cfg: AdamConfig,
    pub t: u64,
    states: Vec<AdamState>,
}

impl Adam {
    pub fn new(cfg: AdamConfig) -> Self {
        Self {
            cfg,
            t: 0,
            states: Vec::new(),
        }
    }

    pub fn step<M: Module>(&mut self, module: &mut M, lr: f64) -> Result<(), TrainError> {
        self.t += 1;
        let (t, cfg) = (self.t, self.cfg);
        let states = &mut self.states;
        let mut k = 0;
        let mut result = Ok(());
        module.visit_mut(&mut |p: &mut Param| {
            if !p.trainable || result.is_err() {
                return;
            }
            if states.len() == k {
                states.push(AdamState::zeros(p.len()));
            }
            let grad = p.grad().into_owned();
            result = adam_step(&mut p.value, &grad, &mut states[k], t, lr, &cfg);
            k += 1;
        });
        result
    }
}
