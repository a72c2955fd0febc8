use crate::param::{Module, Param};
use crate::tensor::Tensor4;
use crate::NnError;

pub const BN_MOMENTUM: f64 = 0.1;
pub const BN_EPS: f64 = 1e-5;

/// Per-channel batch normalization over `(batch, height, width)`.
///
/// Training mode normalizes with the biased batch variance and folds the
/// unbiased one into the running estimate; inference mode uses the running
/// estimates only.
#[derive(Debug, Clone)]
pub struct BatchNorm2d {
    pub gamma: Param,
    pub beta: Param,
    pub running_mean: Param,
    pub running_var: Param,
    pub momentum: f64,
    pub eps: f64,
    cache: Option<Cache>,
}

#[derive(Debug, Clone)]
struct Cache {
    xhat: Tensor4,
    inv_std: Vec<f64>,
    train: bool,
}

impl BatchNorm2d {
    pub fn new(name: &str, channels: usize) -> Self {
        Self {
            gamma: Param::filled(format!("{name}.gamma"), vec![channels], 1.0, true),
            beta: Param::filled(format!("{name}.beta"), vec![channels], 0.0, true),
            running_mean: Param::filled(format!("{name}.running_mean"), vec![channels], 0.0, false),
            running_var: Param::filled(format!("{name}.running_var"), vec![channels], 1.0, false),
            momentum: BN_MOMENTUM,
            eps: BN_EPS,
            cache: None,
        }
    }

    pub fn channels(&self) -> usize {
        self.gamma.len()
    }

    pub fn forward(&mut self, x: &Tensor4, train: bool) -> Result<Tensor4, NnError> {
        let (b, c, h, w) = x.dims();
        if c != self.channels() {
            return Err(NnError::shape(
                &self.gamma.name,
                vec![b, self.channels(), h, w],
                x.shape().to_vec(),
            ));
        }
        let count = (b * h * w) as f64;
        let mut mean = vec![0.0; c];
        let mut var = vec![0.0; c];
        if train {
            for ch in 0..c {
                let s: f64 = (0..b).map(|n| x.plane(n, ch).iter().sum::<f64>()).sum();
                mean[ch] = s / count;
                let sq: f64 = (0..b)
                    .map(|n| x.plane(n, ch).iter().map(|v| (v - mean[ch]).powi(2)).sum::<f64>())
                    .sum();
                var[ch] = sq / count;
            }
            let unbias = if count > 1.0 { count / (count - 1.0) } else { 1.0 };
            let m = self.momentum;
            for ch in 0..c {
                let rm = &mut self.running_mean.value[ch];
                *rm = (1.0 - m) * *rm + m * mean[ch];
                let rv = &mut self.running_var.value[ch];
                *rv = (1.0 - m) * *rv + m * var[ch] * unbias;
            }
        } else {
            mean.copy_from_slice(&self.running_mean.value);
            var.copy_from_slice(&self.running_var.value);
        }
        let inv_std: Vec<f64> = var.iter().map(|v| 1.0 / (v + self.eps).sqrt()).collect();
        let mut xhat = x.clone();
        let mut y = Tensor4::zeros(x.shape());
        for n in 0..b {
            for ch in 0..c {
                let (g, be) = (self.gamma.value[ch], self.beta.value[ch]);
                let xh = xhat.plane_mut(n, ch);
                for v in xh.iter_mut() {
                    *v = (*v - mean[ch]) * inv_std[ch];
                }
                for (yv, &xv) in y.plane_mut(n, ch).iter_mut().zip(xhat.plane(n, ch)) {
                    *yv = g * xv + be;
                }
            }
        }
        self.cache = Some(Cache {
            xhat,
            inv_std,
            train,
        });
        Ok(y)
    }

    pub fn backward(&mut self, dy: &Tensor4) -> Result<Tensor4, NnError> {
        let cache = self.cache.as_ref().ok_or(NnError::NoForward("batchnorm"))?;
        dy.expect_shape(&self.gamma.name, cache.xhat.shape())?;
        let (b, c, h, w) = dy.dims();
        let count = (b * h * w) as f64;
        let mut dgamma = vec![0.0; c];
        let mut dbeta = vec![0.0; c];
        for n in 0..b {
            for ch in 0..c {
                for (d, xh) in dy.plane(n, ch).iter().zip(cache.xhat.plane(n, ch)) {
                    dgamma[ch] += d * xh;
                    dbeta[ch] += d;
                }
            }
        }
        let mut dx = Tensor4::zeros(dy.shape());
        for n in 0..b {
            for ch in 0..c {
                let scale = self.gamma.value[ch] * cache.inv_std[ch];
                let dxp = dx.plane_mut(n, ch);
                let dyp = dy.plane(n, ch);
                if cache.train {
                    let xh = cache.xhat.plane(n, ch);
                    for i in 0..dxp.len() {
                        dxp[i] = scale / count * (count * dyp[i] - dbeta[ch] - xh[i] * dgamma[ch]);
                    }
                } else {
                    for (o, d) in dxp.iter_mut().zip(dyp) {
                        *o = scale * d;
                    }
                }
            }
        }
        for (g, d) in self.gamma.grad_mut().iter_mut().zip(&dgamma) {
            *g += d;
        }
        for (g, d) in self.beta.grad_mut().iter_mut().zip(&dbeta) {
            *g += d;
        }
        Ok(dx)
    }
}

impl Module for BatchNorm2d {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        f(&self.gamma);
        f(&self.beta);
        f(&self.running_mean);
        f(&self.running_var);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.gamma);
        f(&mut self.beta);
        f(&mut self.running_mean);
        f(&mut self.running_var);
    }
}
