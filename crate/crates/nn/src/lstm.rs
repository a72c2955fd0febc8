//! Single-layer LSTM returning the last hidden state.
//!
//! Gate order in the stacked weights is input, forget, cell, output, with
//! separate input and recurrent biases. State starts at zero.

use crate::layers::sigmoid;
use crate::param::{Init, Module, Param};
use crate::tensor::{Matrix, Sequence};
use crate::NnError;

#[derive(Debug, Clone)]
pub struct Lstm {
    pub input_dim: usize,
    pub hidden: usize,
    pub w_ih: Param,
    pub w_hh: Param,
    pub b_ih: Param,
    pub b_hh: Param,
    cache: Option<Cache>,
}

#[derive(Debug, Clone)]
struct Cache {
    input: Sequence,
    /// Activated gates `[i, f, g, o]` per `(sample, step)`, `4H` each.
    gates: Vec<f64>,
    /// Cell state after each step.
    cells: Vec<f64>,
    /// Hidden state after each step.
    hiddens: Vec<f64>,
}

fn matvec_add(w: &[f64], cols: usize, x: &[f64], out: &mut [f64]) {
    for (r, o) in out.iter_mut().enumerate() {
        *o += w[r * cols..(r + 1) * cols].iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }
}

/// `out += Wᵀ d` and `grad += d xᵀ` in one sweep over the rows of `W`.
fn outer_and_transpose(w: &[f64], grad: &mut [f64], cols: usize, d: &[f64], x: &[f64], out: &mut [f64]) {
    for (r, &dv) in d.iter().enumerate() {
        if dv == 0.0 {
            continue;
        }
        let wr = &w[r * cols..(r + 1) * cols];
        let gr = &mut grad[r * cols..(r + 1) * cols];
        for k in 0..cols {
            gr[k] += dv * x[k];
            out[k] += dv * wr[k];
        }
    }
}

impl Lstm {
    pub fn new(name: &str, input_dim: usize, hidden: usize, init: &mut Init) -> Self {
        let g = 4 * hidden;
        let bound = 1.0 / (hidden.max(1) as f64).sqrt();
        Self {
            input_dim,
            hidden,
            w_ih: Param::new(format!("{name}.w_ih"), vec![g, input_dim], init.uniform(g * input_dim, bound), true),
            w_hh: Param::new(format!("{name}.w_hh"), vec![g, hidden], init.uniform(g * hidden, bound), true),
            b_ih: Param::new(format!("{name}.b_ih"), vec![g], init.uniform(g, bound), true),
            b_hh: Param::new(format!("{name}.b_hh"), vec![g], init.uniform(g, bound), true),
            cache: None,
        }
    }

    pub fn param_count(input_dim: usize, hidden: usize) -> usize {
        4 * hidden * (input_dim + hidden) + 8 * hidden
    }

    pub fn macs(input_dim: usize, hidden: usize, steps: usize) -> usize {
        steps * 4 * hidden * (input_dim + hidden)
    }

    /// Returns `h_T` as `(batch, hidden)`.
    pub fn forward(&mut self, x: &Sequence) -> Result<Matrix, NnError> {
        if x.dim != self.input_dim {
            return Err(NnError::shape(
                &self.w_ih.name,
                vec![x.batch, x.steps, self.input_dim],
                x.shape().to_vec(),
            ));
        }
        let (b, t_len, h) = (x.batch, x.steps, self.hidden);
        let g4 = 4 * h;
        let mut gates = vec![0.0; b * t_len * g4];
        let mut cells = vec![0.0; b * t_len * h];
        let mut hiddens = vec![0.0; b * t_len * h];
        let zero = vec![0.0; h];
        let mut out = Matrix::zeros(b, h);
        for s in 0..b {
            for t in 0..t_len {
                let idx = s * t_len + t;
                let (h_prev, c_prev) = if t == 0 {
                    (&zero[..], &zero[..])
                } else {
                    let p = (idx - 1) * h;
                    (&hiddens[p..p + h], &cells[p..p + h])
                };
                let mut z: Vec<f64> = self.b_ih.value.iter().zip(&self.b_hh.value).map(|(a, c)| a + c).collect();
                matvec_add(&self.w_ih.value, self.input_dim, x.step(s, t), &mut z);
                matvec_add(&self.w_hh.value, h, h_prev, &mut z);
                let mut c_new = vec![0.0; h];
                let mut h_new = vec![0.0; h];
                for k in 0..h {
                    let i = sigmoid(z[k]);
                    let f = sigmoid(z[h + k]);
                    let g = z[2 * h + k].tanh();
                    let o = sigmoid(z[3 * h + k]);
                    z[k] = i;
                    z[h + k] = f;
                    z[2 * h + k] = g;
                    z[3 * h + k] = o;
                    c_new[k] = f * c_prev[k] + i * g;
                    h_new[k] = o * c_new[k].tanh();
                }
                gates[idx * g4..(idx + 1) * g4].copy_from_slice(&z);
                cells[idx * h..(idx + 1) * h].copy_from_slice(&c_new);
                hiddens[idx * h..(idx + 1) * h].copy_from_slice(&h_new);
            }
            if t_len > 0 {
                let last = (s * t_len + t_len - 1) * h;
                out.row_mut(s).copy_from_slice(&hiddens[last..last + h]);
            }
        }
        self.cache = Some(Cache {
            input: x.clone(),
            gates,
            cells,
            hiddens,
        });
        Ok(out)
    }

    /// Backpropagation through time from `dL/dh_T`.
    pub fn backward(&mut self, dh_last: &Matrix) -> Result<Sequence, NnError> {
        let cache = self.cache.as_ref().ok_or(NnError::NoForward("lstm"))?;
        let x = &cache.input;
        let (b, t_len, h) = (x.batch, x.steps, self.hidden);
        if dh_last.shape() != [b, h] {
            return Err(NnError::shape(&self.w_ih.name, vec![b, h], dh_last.shape().to_vec()));
        }
        let g4 = 4 * h;
        let d = self.input_dim;
        let mut dx = Sequence::zeros(b, t_len, d);
        let mut gw_ih = vec![0.0; g4 * d];
        let mut gw_hh = vec![0.0; g4 * h];
        let mut gb = vec![0.0; g4];
        let zero = vec![0.0; h];
        for s in 0..b {
            let mut dh = dh_last.row(s).to_vec();
            let mut dc = vec![0.0; h];
            for t in (0..t_len).rev() {
                let idx = s * t_len + t;
                let gate = &cache.gates[idx * g4..(idx + 1) * g4];
                let c = &cache.cells[idx * h..(idx + 1) * h];
                let (h_prev, c_prev) = if t == 0 {
                    (&zero[..], &zero[..])
                } else {
                    let p = (idx - 1) * h;
                    (&cache.hiddens[p..p + h], &cache.cells[p..p + h])
                };
                let mut dz = vec![0.0; g4];
                for k in 0..h {
                    let (i, f, g, o) = (gate[k], gate[h + k], gate[2 * h + k], gate[3 * h + k]);
                    let tc = c[k].tanh();
                    let dct = dc[k] + dh[k] * o * (1.0 - tc * tc);
                    dz[k] = dct * g * i * (1.0 - i);
                    dz[h + k] = dct * c_prev[k] * f * (1.0 - f);
                    dz[2 * h + k] = dct * i * (1.0 - g * g);
                    dz[3 * h + k] = dh[k] * tc * o * (1.0 - o);
                    dc[k] = dct * f;
                }
                for (a, v) in gb.iter_mut().zip(&dz) {
                    *a += v;
                }
                outer_and_transpose(&self.w_ih.value, &mut gw_ih, d, &dz, x.step(s, t), dx.step_mut(s, t));
                let mut dh_prev = vec![0.0; h];
                outer_and_transpose(&self.w_hh.value, &mut gw_hh, h, &dz, h_prev, &mut dh_prev);
                dh = dh_prev;
            }
        }
        for (p, g) in [
            (&mut self.w_ih, &gw_ih),
            (&mut self.w_hh, &gw_hh),
            (&mut self.b_ih, &gb),
            (&mut self.b_hh, &gb),
        ] {
            for (a, v) in p.grad_mut().iter_mut().zip(g) {
                *a += v;
            }
        }
        Ok(dx)
    }
}

impl Module for Lstm {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        f(&self.w_ih);
        f(&self.w_hh);
        f(&self.b_ih);
        f(&self.b_hh);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.w_ih);
        f(&mut self.w_hh);
        f(&mut self.b_ih);
        f(&mut self.b_hh);
    }
}
