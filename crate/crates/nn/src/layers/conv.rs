use serde::{Deserialize, Serialize};

use crate::param::{Init, Module, Param};
use crate::tensor::Tensor4;
use crate::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conv2dSpec {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
    pub groups: usize,
    pub bias: bool,
}

impl Conv2dSpec {
    /// Square kernel with `(k - 1) / 2` padding, no bias, one group.
    pub fn same(in_channels: usize, out_channels: usize, kernel: usize, stride: usize) -> Self {
        Self {
            in_channels,
            out_channels,
            kernel,
            stride,
            padding: (kernel - 1) / 2,
            groups: 1,
            bias: false,
        }
    }

    pub fn depthwise(channels: usize, kernel: usize, stride: usize) -> Self {
        Self {
            groups: channels,
            ..Self::same(channels, channels, kernel, stride)
        }
    }

    pub fn with_bias(self) -> Self {
        Self { bias: true, ..self }
    }

    pub fn out_size(&self, h: usize, w: usize) -> (usize, usize) {
        let f = |n: usize| (n + 2 * self.padding - self.kernel) / self.stride + 1;
        (f(h), f(w))
    }

    pub fn weight_len(&self) -> usize {
        self.out_channels * (self.in_channels / self.groups) * self.kernel * self.kernel
    }

    pub fn param_count(&self) -> usize {
        self.weight_len() + if self.bias { self.out_channels } else { 0 }
    }

    /// Multiply-accumulates for one sample at input size `h × w`.
    pub fn macs(&self, h: usize, w: usize) -> usize {
        let (oh, ow) = self.out_size(h, w);
        oh * ow * self.weight_len()
    }

    fn validate(&self) -> Result<(), NnError> {
        let ok = self.groups > 0
            && self.kernel > 0
            && self.stride > 0
            && self.in_channels % self.groups == 0
            && self.out_channels % self.groups == 0;
        if !ok {
            return Err(NnError::InvalidConfig(format!("bad convolution {self:?}")));
        }
        Ok(())
    }
}

/// Output positions `o` for which `o·stride + k - pad` falls inside
/// `[0, in_len)`.
fn valid_range(k: usize, pad: usize, stride: usize, in_len: usize, out_len: usize) -> (usize, usize) {
    let lo = if k >= pad { 0 } else { (pad - k).div_ceil(stride).min(out_len) };
    let hi = if in_len + pad > k {
        ((in_len - 1 + pad - k) / stride + 1).min(out_len)
    } else {
        0
    };
    (lo, hi.max(lo))
}

/// 2-D convolution with grouped channels (`groups == channels` is depthwise).
#[derive(Debug, Clone)]
pub struct Conv2d {
    pub spec: Conv2dSpec,
    pub weight: Param,
    pub bias: Option<Param>,
    input: Option<Tensor4>,
}

impl Conv2d {
    pub fn new(name: &str, spec: Conv2dSpec, init: &mut Init) -> Result<Self, NnError> {
        spec.validate()?;
        let fan_in = (spec.in_channels / spec.groups) * spec.kernel * spec.kernel;
        let weight = Param::new(
            format!("{name}.weight"),
            vec![
                spec.out_channels,
                spec.in_channels / spec.groups,
                spec.kernel,
                spec.kernel,
            ],
            init.fan_in(spec.weight_len(), fan_in),
            true,
        );
        let bias = spec.bias.then(|| {
            Param::new(
                format!("{name}.bias"),
                vec![spec.out_channels],
                init.fan_in(spec.out_channels, fan_in),
                true,
            )
        });
        Ok(Self {
            spec,
            weight,
            bias,
            input: None,
        })
    }

    pub fn forward(&mut self, x: &Tensor4) -> Result<Tensor4, NnError> {
        let s = self.spec;
        let (b, c, h, w) = x.dims();
        if c != s.in_channels {
            return Err(NnError::shape(
                &self.weight.name,
                vec![b, s.in_channels, h, w],
                x.shape().to_vec(),
            ));
        }
        if h + 2 * s.padding < s.kernel || w + 2 * s.padding < s.kernel {
            return Err(NnError::InvalidConfig(format!(
                "{}: input {h}x{w} smaller than kernel",
                self.weight.name
            )));
        }
        let (oh, ow) = s.out_size(h, w);
        let mut y = Tensor4::zeros([b, s.out_channels, oh, ow]);
        let cin_g = s.in_channels / s.groups;
        let cout_g = s.out_channels / s.groups;
        let k = s.kernel;
        let wv = &self.weight.value;
        for n in 0..b {
            for oc in 0..s.out_channels {
                let g = oc / cout_g;
                let yp = y.plane_mut(n, oc);
                if let Some(bias) = &self.bias {
                    yp.fill(bias.value[oc]);
                }
                for icg in 0..cin_g {
                    let xp = x.plane(n, g * cin_g + icg);
                    for kh in 0..k {
                        let (h_lo, h_hi) = valid_range(kh, s.padding, s.stride, h, oh);
                        for kw in 0..k {
                            let wk = wv[((oc * cin_g + icg) * k + kh) * k + kw];
                            let (w_lo, w_hi) = valid_range(kw, s.padding, s.stride, w, ow);
                            if w_lo == w_hi {
                                continue;
                            }
                            for o_h in h_lo..h_hi {
                                let ih = o_h * s.stride + kh - s.padding;
                                let xrow = &xp[ih * w..(ih + 1) * w];
                                let yrow = &mut yp[o_h * ow..(o_h + 1) * ow];
                                if s.stride == 1 {
                                    let off = kw + w_lo - s.padding;
                                    for (yv, xv) in yrow[w_lo..w_hi].iter_mut().zip(&xrow[off..]) {
                                        *yv += wk * xv;
                                    }
                                } else {
                                    for o_w in w_lo..w_hi {
                                        yrow[o_w] += wk * xrow[o_w * s.stride + kw - s.padding];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        self.input = Some(x.clone());
        Ok(y)
    }

    pub fn backward(&mut self, dy: &Tensor4) -> Result<Tensor4, NnError> {
        let x = self.input.as_ref().ok_or(NnError::NoForward("conv2d"))?;
        let s = self.spec;
        let (b, _, h, w) = x.dims();
        let (oh, ow) = s.out_size(h, w);
        dy.expect_shape(&self.weight.name, [b, s.out_channels, oh, ow])?;
        let mut dx = Tensor4::zeros(x.shape());
        let cin_g = s.in_channels / s.groups;
        let cout_g = s.out_channels / s.groups;
        let k = s.kernel;
        if let Some(bias) = &mut self.bias {
            let gb = bias.grad_mut();
            for n in 0..b {
                for (oc, g) in gb.iter_mut().enumerate() {
                    *g += dy.plane(n, oc).iter().sum::<f64>();
                }
            }
        }
        let (wv, gw) = self.weight.value_and_grad();
        for n in 0..b {
            for oc in 0..s.out_channels {
                let g = oc / cout_g;
                let dyp = dy.plane(n, oc);
                for icg in 0..cin_g {
                    let ic = g * cin_g + icg;
                    let xp = x.plane(n, ic);
                    let dxp = dx.plane_mut(n, ic);
                    for kh in 0..k {
                        let (h_lo, h_hi) = valid_range(kh, s.padding, s.stride, h, oh);
                        for kw in 0..k {
                            let widx = ((oc * cin_g + icg) * k + kh) * k + kw;
                            let wk = wv[widx];
                            let (w_lo, w_hi) = valid_range(kw, s.padding, s.stride, w, ow);
                            let mut acc = 0.0;
                            for o_h in h_lo..h_hi {
                                let ih = o_h * s.stride + kh - s.padding;
                                let dyrow = &dyp[o_h * ow..(o_h + 1) * ow];
                                for o_w in w_lo..w_hi {
                                    let iw = o_w * s.stride + kw - s.padding;
                                    acc += dyrow[o_w] * xp[ih * w + iw];
                                    dxp[ih * w + iw] += wk * dyrow[o_w];
                                }
                            }
                            gw[widx] += acc;
                        }
                    }
                }
            }
        }
        Ok(dx)
    }
}

impl Module for Conv2d {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        f(&self.weight);
        if let Some(b) = &self.bias {
            f(b);
        }
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.weight);
        if let Some(b) = &mut self.bias {
            f(b);
        }
    }
}
