//! Range-Doppler readout and the fusion classifier.

use crate::layers::{Dropout, Linear};
use crate::param::{Init, Module, Param};
use crate::tensor::{Matrix, Sequence};
use crate::NnError;

/// Per-step linear map followed by a max over time.
#[derive(Debug, Clone)]
pub struct RdHead {
    pub linear: Linear,
    cache: Option<([usize; 3], Vec<usize>)>,
}

impl RdHead {
    pub fn new(name: &str, input_dim: usize, out: usize, init: &mut Init) -> Self {
        Self {
            linear: Linear::new(&format!("{name}.linear"), input_dim, out, init),
            cache: None,
        }
    }

    pub fn param_count(input_dim: usize, out: usize) -> usize {
        Linear::param_count(input_dim, out)
    }

    pub fn macs(input_dim: usize, out: usize, steps: usize) -> usize {
        steps * input_dim * out
    }

    pub fn forward(&mut self, x: &Sequence) -> Result<Matrix, NnError> {
        let (b, t_len) = (x.batch, x.steps);
        if t_len == 0 {
            return Err(NnError::shape("rd head steps", vec![b, 1, x.dim], x.shape().to_vec()));
        }
        let z = self.linear.forward(&x.clone().into_matrix())?;
        let o = self.linear.out_features;
        let mut out = Matrix::zeros(b, o);
        let mut arg = vec![0; b * o];
        for s in 0..b {
            for k in 0..o {
                let mut best = 0;
                for t in 1..t_len {
                    if z.get(s * t_len + t, k) > z.get(s * t_len + best, k) {
                        best = t;
                    }
                }
                out.data[s * o + k] = z.get(s * t_len + best, k);
                arg[s * o + k] = best;
            }
        }
        self.cache = Some((x.shape(), arg));
        Ok(out)
    }

    /// The gradient of each output goes to the earliest maximizing step.
    pub fn backward(&mut self, dy: &Matrix) -> Result<Sequence, NnError> {
        let ([b, t_len, d], arg) = self.cache.as_ref().ok_or(NnError::NoForward("rd head"))?;
        let o = self.linear.out_features;
        if dy.shape() != [*b, o] {
            return Err(NnError::shape("rd head grad", vec![*b, o], dy.shape().to_vec()));
        }
        let mut dz = Matrix::zeros(b * t_len, o);
        for s in 0..*b {
            for k in 0..o {
                dz.data[(s * t_len + arg[s * o + k]) * o + k] = dy.data[s * o + k];
            }
        }
        let (b, t_len, d) = (*b, *t_len, *d);
        let dx = self.linear.backward(&dz)?;
        Sequence::from_vec(b, t_len, d, dx.data)
    }
}

impl Module for RdHead {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.linear.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.linear.visit_mut(f);
    }
}

/// `[RT ‖ DT ‖ RD]` then dropout then a linear classifier.
#[derive(Debug, Clone)]
pub struct Fusion {
    pub dropout: Dropout,
    pub classifier: Linear,
    widths: [usize; 3],
}

impl Fusion {
    pub fn new(name: &str, widths: [usize; 3], classes: usize, dropout_p: f64, seed: u64, init: &mut Init) -> Self {
        Self {
            dropout: Dropout::new(dropout_p, seed),
            classifier: Linear::new(&format!("{name}.classifier"), widths.iter().sum(), classes, init),
            widths,
        }
    }

    pub fn param_count(fused: usize, classes: usize) -> usize {
        Linear::param_count(fused, classes)
    }

    pub fn forward(&mut self, parts: [&Matrix; 3], train: bool) -> Result<Matrix, NnError> {
        let b = parts[0].rows;
        for (p, &w) in parts.iter().zip(&self.widths) {
            if p.shape() != [b, w] {
                return Err(NnError::shape("fusion input", vec![b, w], p.shape().to_vec()));
            }
        }
        let total: usize = self.widths.iter().sum();
        let mut cat = Matrix::zeros(b, total);
        for s in 0..b {
            let row = cat.row_mut(s);
            let mut off = 0;
            for p in parts {
                row[off..off + p.cols].copy_from_slice(p.row(s));
                off += p.cols;
            }
        }
        let dropped = self.dropout.forward(&cat, train);
        self.classifier.forward(&dropped)
    }

    pub fn backward(&mut self, dlogits: &Matrix) -> Result<[Matrix; 3], NnError> {
        let dcat = self.dropout.backward(&self.classifier.backward(dlogits)?);
        let mut out = self.widths.map(|w| Matrix::zeros(dcat.rows, w));
        for s in 0..dcat.rows {
            let mut off = 0;
            for m in out.iter_mut() {
                let w = m.cols;
                m.row_mut(s).copy_from_slice(&dcat.row(s)[off..off + w]);
                off += w;
            }
        }
        Ok(out)
    }
}

impl Module for Fusion {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.classifier.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.classifier.visit_mut(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominant_step_is_selected() {
        let mut head = RdHead::new("rd", 3, 4, &mut Init::new(0));
        head.linear.weight.value.iter_mut().for_each(|w| *w = w.abs());
        let mut x = Sequence::zeros(1, 5, 3);
        x.step_mut(0, 2).copy_from_slice(&[10.0, 20.0, 30.0]);
        let y = head.forward(&x).unwrap();
        let single = Matrix::from_vec(1, 3, vec![10.0, 20.0, 30.0]).unwrap();
        assert_eq!(y, head.linear.forward(&single).unwrap());
    }

    #[test]
    fn ties_route_gradient_to_first_step() {
        let mut head = RdHead::new("rd", 2, 1, &mut Init::new(0));
        let x = Sequence::from_vec(1, 3, 2, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        head.forward(&x).unwrap();
        let dx = head.backward(&Matrix::from_vec(1, 1, vec![1.0]).unwrap()).unwrap();
        assert_eq!(dx.step(0, 0), &head.linear.weight.value[..]);
        assert!(dx.step(0, 1).iter().chain(dx.step(0, 2)).all(|&v| v == 0.0));
    }

    #[test]
    fn fusion_eval_and_zero_inputs() {
        let mut f = Fusion::new("fusion", [128; 3], 6, 0.2, 1, &mut Init::new(2));
        assert_eq!(f.param_counts().0, 2310);
        let z = Matrix::zeros(2, 128);
        let y = f.forward([&z, &z, &z], false).unwrap();
        assert_eq!(y.row(1), &f.classifier.bias.value[..]);
        let a = Matrix::from_vec(1, 128, (0..128).map(|v| v as f64 / 64.0).collect()).unwrap();
        let y1 = f.forward([&a, &a, &a], false).unwrap();
        let y2 = f.forward([&a, &a, &a], false).unwrap();
        assert_eq!(y1, y2);
        assert!(f.forward([&a, &z, &a], false).is_err());
    }
}
