use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::param::{Init, Module, Param};
use crate::tensor::Matrix;
use crate::NnError;

/// Fully connected layer `y = x Wᵀ + b` applied to every row.
#[derive(Debug, Clone)]
pub struct Linear {
    pub in_features: usize,
    pub out_features: usize,
    pub weight: Param,
    pub bias: Param,
    input: Option<Matrix>,
}

impl Linear {
    pub fn new(name: &str, in_features: usize, out_features: usize, init: &mut Init) -> Self {
        let weight = Param::new(
            format!("{name}.weight"),
            vec![out_features, in_features],
            init.fan_in(in_features * out_features, in_features),
            true,
        );
        let bias = Param::new(
            format!("{name}.bias"),
            vec![out_features],
            init.fan_in(out_features, in_features),
            true,
        );
        Self {
            in_features,
            out_features,
            weight,
            bias,
            input: None,
        }
    }

    pub fn param_count(in_features: usize, out_features: usize) -> usize {
        in_features * out_features + out_features
    }

    pub fn forward(&mut self, x: &Matrix) -> Result<Matrix, NnError> {
        if x.cols != self.in_features {
            return Err(NnError::shape(
                &self.weight.name,
                vec![x.rows, self.in_features],
                x.shape().to_vec(),
            ));
        }
        let mut y = Matrix::zeros(x.rows, self.out_features);
        for r in 0..x.rows {
            let xr = x.row(r);
            let yr = y.row_mut(r);
            for (o, yv) in yr.iter_mut().enumerate() {
                let wr = &self.weight.value[o * self.in_features..(o + 1) * self.in_features];
                *yv = self.bias.value[o] + wr.iter().zip(xr).map(|(a, b)| a * b).sum::<f64>();
            }
        }
        self.input = Some(x.clone());
        Ok(y)
    }

    pub fn backward(&mut self, dy: &Matrix) -> Result<Matrix, NnError> {
        let x = self.input.as_ref().ok_or(NnError::NoForward("linear"))?;
        if dy.shape() != [x.rows, self.out_features] {
            return Err(NnError::shape(
                &self.weight.name,
                vec![x.rows, self.out_features],
                dy.shape().to_vec(),
            ));
        }
        let n_in = self.in_features;
        let mut dx = Matrix::zeros(x.rows, n_in);
        {
            let gb = self.bias.grad_mut();
            for r in 0..dy.rows {
                for (g, d) in gb.iter_mut().zip(dy.row(r)) {
                    *g += d;
                }
            }
        }
        let (wv, gw) = self.weight.value_and_grad();
        for r in 0..x.rows {
            let xr = x.row(r);
            let dyr = dy.row(r);
            let dxr = &mut dx.data[r * n_in..(r + 1) * n_in];
            for (o, &d) in dyr.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                let wr = &wv[o * n_in..(o + 1) * n_in];
                let gr = &mut gw[o * n_in..(o + 1) * n_in];
                for i in 0..n_in {
                    gr[i] += d * xr[i];
                    dxr[i] += d * wr[i];
                }
            }
        }
        Ok(dx)
    }
}

impl Module for Linear {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        f(&self.weight);
        f(&self.bias);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.weight);
        f(&mut self.bias);
    }
}

/// Inverted dropout: kept units are scaled by `1/(1-p)` in training so the
/// expected output equals the inference output.
#[derive(Debug, Clone)]
pub struct Dropout {
    pub p: f64,
    rng: ChaCha8Rng,
    mask: Option<Vec<f64>>,
    /// Reuse the previous mask instead of drawing a new one.
    pub hold_mask: bool,
}

impl Dropout {
    pub fn new(p: f64, seed: u64) -> Self {
        Self {
            p,
            rng: ChaCha8Rng::seed_from_u64(seed),
            mask: None,
            hold_mask: false,
        }
    }

    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    pub fn forward(&mut self, x: &Matrix, train: bool) -> Matrix {
        if !train || self.p == 0.0 {
            self.mask = None;
            return x.clone();
        }
        let reuse = self.hold_mask && self.mask.as_ref().is_some_and(|m| m.len() == x.data.len());
        if !reuse {
            let keep = 1.0 - self.p;
            let mask = (0..x.data.len())
                .map(|_| {
                    if self.rng.random::<f64>() < self.p {
                        0.0
                    } else {
                        1.0 / keep
                    }
                })
                .collect();
            self.mask = Some(mask);
        }
        let mask = self.mask.as_ref().expect("mask drawn above");
        Matrix {
            rows: x.rows,
            cols: x.cols,
            data: x.data.iter().zip(mask).map(|(a, m)| a * m).collect(),
        }
    }

    pub fn backward(&self, dy: &Matrix) -> Matrix {
        match &self.mask {
            None => dy.clone(),
            Some(mask) => Matrix {
                rows: dy.rows,
                cols: dy.cols,
                data: dy.data.iter().zip(mask).map(|(a, m)| a * m).collect(),
            },
        }
    }
}
