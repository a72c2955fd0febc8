//! Channel/spatial attention (CBAM) and squeeze-and-excitation.

use crate::layers::pool;
use crate::layers::{sigmoid, Act, Conv2d, Conv2dSpec, Linear};
use crate::param::{Init, Module, Param};
use crate::tensor::{Matrix, Tensor4};
use crate::NnError;

pub const SPATIAL_KERNEL: usize = 7;

/// Multiplies every plane `(b, c)` by `m[b·C + c]`.
fn scale_channels(x: &Tensor4, m: &[f64]) -> Tensor4 {
    let (b, c, _, _) = x.dims();
    let mut y = x.clone();
    for s in 0..b {
        for ch in 0..c {
            let g = m[s * c + ch];
            y.plane_mut(s, ch).iter_mut().for_each(|v| *v *= g);
        }
    }
    y
}

/// Multiplies every channel of sample `b` by the `(b, 0)` plane of `m`.
fn scale_pixels(x: &Tensor4, m: &Tensor4) -> Tensor4 {
    let (b, c, _, _) = x.dims();
    let mut y = x.clone();
    for s in 0..b {
        let g = m.plane(s, 0);
        for ch in 0..c {
            for (v, gv) in y.plane_mut(s, ch).iter_mut().zip(g) {
                *v *= gv;
            }
        }
    }
    y
}

/// `Σ_pixels a·b` per `(sample, channel)`.
fn plane_dot(a: &Tensor4, b: &Tensor4) -> Vec<f64> {
    let (n, c, _, _) = a.dims();
    let mut out = vec![0.0; n * c];
    for s in 0..n {
        for ch in 0..c {
            out[s * c + ch] = a.plane(s, ch).iter().zip(b.plane(s, ch)).map(|(x, y)| x * y).sum();
        }
    }
    out
}

pub fn cbam_hidden_width(channels: usize, reduction: usize) -> usize {
    channels.div_ceil(reduction.max(1)).max(1)
}

/// `M_c = σ(MLP(avgpool F) + MLP(maxpool F))`, one shared two-layer MLP.
#[derive(Debug, Clone)]
pub struct ChannelAttention {
    pub fc1: Linear,
    pub fc2: Linear,
    act: Act,
    cache: Option<ChannelCache>,
}

#[derive(Debug, Clone)]
struct ChannelCache {
    shape: [usize; 4],
    arg: Vec<usize>,
    mc: Vec<f64>,
}

impl ChannelAttention {
    pub fn new(
        name: &str,
        channels: usize,
        reduction: usize,
        act: &str,
        init: &mut Init,
    ) -> Result<Self, NnError> {
        let hidden = cbam_hidden_width(channels, reduction);
        Ok(Self {
            fc1: Linear::new(&format!("{name}.fc1"), channels, hidden, init),
            fc2: Linear::new(&format!("{name}.fc2"), hidden, channels, init),
            act: Act::by_name(act)?,
            cache: None,
        })
    }

    pub fn param_count(channels: usize, reduction: usize) -> usize {
        let h = cbam_hidden_width(channels, reduction);
        Linear::param_count(channels, h) + Linear::param_count(h, channels)
    }

    /// Both pooled vectors pass through the MLP.
    pub fn macs(channels: usize, reduction: usize) -> usize {
        2 * 2 * channels * cbam_hidden_width(channels, reduction)
    }

    /// Returns `M_c` with shape `(batch, channels, 1, 1)`.
    pub fn forward(&mut self, x: &Tensor4) -> Result<Tensor4, NnError> {
        let (b, c, _, _) = x.dims();
        let avg = pool::global_avg(x);
        let (max, arg) = pool::global_max(x);
        let mut both = avg.data;
        both.extend_from_slice(&max.data);
        let z1 = self.fc1.forward(&Matrix::from_vec(2 * b, c, both)?)?;
        let a = Matrix::from_vec(z1.rows, z1.cols, self.act.forward(&z1.data))?;
        let z2 = self.fc2.forward(&a)?;
        let mc: Vec<f64> = (0..b * c).map(|i| sigmoid(z2.data[i] + z2.data[b * c + i])).collect();
        self.cache = Some(ChannelCache {
            shape: x.shape(),
            arg,
            mc: mc.clone(),
        });
        Tensor4::from_vec([b, c, 1, 1], mc)
    }

    pub fn backward(&mut self, dmc: &Tensor4) -> Result<Tensor4, NnError> {
        let cache = self.cache.as_ref().ok_or(NnError::NoForward("channel attention"))?;
        let [b, c, _, _] = cache.shape;
        dmc.expect_shape("channel attention grad", [b, c, 1, 1])?;
        let ds: Vec<f64> = dmc
            .data()
            .iter()
            .zip(&cache.mc)
            .map(|(d, m)| d * m * (1.0 - m))
            .collect();
        let mut dz2 = ds.clone();
        dz2.extend_from_slice(&ds);
        let da = self.fc2.backward(&Matrix::from_vec(2 * b, c, dz2)?)?;
        let dz1 = Matrix::from_vec(da.rows, da.cols, self.act.backward(&da.data)?)?;
        let dboth = self.fc1.backward(&dz1)?;
        let davg = Matrix::from_vec(b, c, dboth.data[..b * c].to_vec())?;
        let dmax = Matrix::from_vec(b, c, dboth.data[b * c..].to_vec())?;
        let mut dx = pool::global_avg_backward(&davg, cache.shape);
        dx.add_assign(&pool::global_max_backward(&dmax, &cache.arg, cache.shape));
        Ok(dx)
    }
}

impl Module for ChannelAttention {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.fc1.visit(f);
        self.fc2.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.fc1.visit_mut(f);
        self.fc2.visit_mut(f);
    }
}

/// `M_s = σ(conv7×7([mean_c F; max_c F]))`.
#[derive(Debug, Clone)]
pub struct SpatialAttention {
    pub conv: Conv2d,
    cache: Option<SpatialCache>,
}

#[derive(Debug, Clone)]
struct SpatialCache {
    shape: [usize; 4],
    arg: Vec<usize>,
    ms: Tensor4,
}

impl SpatialAttention {
    pub fn spec() -> Conv2dSpec {
        Conv2dSpec::same(2, 1, SPATIAL_KERNEL, 1).with_bias()
    }

    pub fn new(name: &str, init: &mut Init) -> Result<Self, NnError> {
        Ok(Self {
            conv: Conv2d::new(&format!("{name}.conv"), Self::spec(), init)?,
            cache: None,
        })
    }

    /// Returns `M_s` with shape `(batch, 1, h, w)`.
    pub fn forward(&mut self, x: &Tensor4) -> Result<Tensor4, NnError> {
        let (pooled, arg) = pool::channel_avg_max(x);
        let mut ms = self.conv.forward(&pooled)?;
        ms.data_mut().iter_mut().for_each(|v| *v = sigmoid(*v));
        self.cache = Some(SpatialCache {
            shape: x.shape(),
            arg,
            ms: ms.clone(),
        });
        Ok(ms)
    }

    pub fn backward(&mut self, dms: &Tensor4) -> Result<Tensor4, NnError> {
        let cache = self.cache.as_ref().ok_or(NnError::NoForward("spatial attention"))?;
        dms.expect_shape("spatial attention grad", cache.ms.shape())?;
        let mut dz = dms.clone();
        for (d, m) in dz.data_mut().iter_mut().zip(cache.ms.data()) {
            *d *= m * (1.0 - m);
        }
        let dpooled = self.conv.backward(&dz)?;
        Ok(pool::channel_avg_max_backward(&dpooled, &cache.arg, cache.shape))
    }
}

impl Module for SpatialAttention {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.conv.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.conv.visit_mut(f);
    }
}

/// Channel attention, then spatial attention computed on the
/// channel-refined features: `F' = M_s ⊙ (M_c ⊙ F)`.
#[derive(Debug, Clone)]
pub struct Cbam {
    pub channel: ChannelAttention,
    pub spatial: SpatialAttention,
    cache: Option<CbamCache>,
}

#[derive(Debug, Clone)]
struct CbamCache {
    x: Tensor4,
    mc: Tensor4,
    x1: Tensor4,
    ms: Tensor4,
}

impl Cbam {
    pub fn new(
        name: &str,
        channels: usize,
        reduction: usize,
        act: &str,
        init: &mut Init,
    ) -> Result<Self, NnError> {
        Ok(Self {
            channel: ChannelAttention::new(&format!("{name}.channel"), channels, reduction, act, init)?,
            spatial: SpatialAttention::new(&format!("{name}.spatial"), init)?,
            cache: None,
        })
    }

    pub fn param_count(channels: usize, reduction: usize) -> usize {
        ChannelAttention::param_count(channels, reduction) + SpatialAttention::spec().param_count()
    }

    pub fn macs(channels: usize, reduction: usize, h: usize, w: usize) -> usize {
        ChannelAttention::macs(channels, reduction) + SpatialAttention::spec().macs(h, w)
    }

    pub fn forward(&mut self, x: &Tensor4) -> Result<Tensor4, NnError> {
        let mc = self.channel.forward(x)?;
        let x1 = scale_channels(x, mc.data());
        let ms = self.spatial.forward(&x1)?;
        let out = scale_pixels(&x1, &ms);
        self.cache = Some(CbamCache {
            x: x.clone(),
            mc,
            x1,
            ms,
        });
        Ok(out)
    }

    /// Attention maps from the last forward pass.
    pub fn maps(&self) -> Option<(&Tensor4, &Tensor4)> {
        self.cache.as_ref().map(|c| (&c.mc, &c.ms))
    }

    pub fn backward(&mut self, dout: &Tensor4) -> Result<Tensor4, NnError> {
        let cache = self.cache.take().ok_or(NnError::NoForward("cbam"))?;
        dout.expect_shape("cbam grad", cache.x.shape())?;
        let (b, c, h, w) = dout.dims();
        let hw = h * w;
        let mut dms = Tensor4::zeros([b, 1, h, w]);
        for s in 0..b {
            for ch in 0..c {
                let (d, x1) = (dout.plane(s, ch), cache.x1.plane(s, ch));
                let out = dms.plane_mut(s, 0);
                for p in 0..hw {
                    out[p] += d[p] * x1[p];
                }
            }
        }
        let mut dx1 = scale_pixels(dout, &cache.ms);
        dx1.add_assign(&self.spatial.backward(&dms)?);
        let dmc = Tensor4::from_vec([b, c, 1, 1], plane_dot(&dx1, &cache.x))?;
        let mut dx = scale_channels(&dx1, cache.mc.data());
        dx.add_assign(&self.channel.backward(&dmc)?);
        self.cache = Some(cache);
        Ok(dx)
    }
}

impl Module for Cbam {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.channel.visit(f);
        self.spatial.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.channel.visit_mut(f);
        self.spatial.visit_mut(f);
    }
}

/// Squeeze-and-excitation: `F ⊙ σ(W2 act(W1 avgpool F))`.
#[derive(Debug, Clone)]
pub struct SqueezeExcite {
    pub fc1: Linear,
    pub fc2: Linear,
    act: Act,
    cache: Option<(Tensor4, Vec<f64>)>,
}

impl SqueezeExcite {
    pub fn new(
        name: &str,
        channels: usize,
        squeeze: usize,
        act: &str,
        init: &mut Init,
    ) -> Result<Self, NnError> {
        Ok(Self {
            fc1: Linear::new(&format!("{name}.fc1"), channels, squeeze, init),
            fc2: Linear::new(&format!("{name}.fc2"), squeeze, channels, init),
            act: Act::by_name(act)?,
            cache: None,
        })
    }

    pub fn param_count(channels: usize, squeeze: usize) -> usize {
        Linear::param_count(channels, squeeze) + Linear::param_count(squeeze, channels)
    }

    pub fn macs(channels: usize, squeeze: usize) -> usize {
        2 * channels * squeeze
    }

    pub fn forward(&mut self, x: &Tensor4) -> Result<Tensor4, NnError> {
        let z1 = self.fc1.forward(&pool::global_avg(x))?;
        let a = Matrix::from_vec(z1.rows, z1.cols, self.act.forward(&z1.data))?;
        let z2 = self.fc2.forward(&a)?;
        let gate: Vec<f64> = z2.data.iter().map(|&v| sigmoid(v)).collect();
        let out = scale_channels(x, &gate);
        self.cache = Some((x.clone(), gate));
        Ok(out)
    }

    pub fn backward(&mut self, dout: &Tensor4) -> Result<Tensor4, NnError> {
        let (x, gate) = self.cache.take().ok_or(NnError::NoForward("squeeze-excite"))?;
        dout.expect_shape("squeeze-excite grad", x.shape())?;
        let (b, c, _, _) = x.dims();
        let dz: Vec<f64> = plane_dot(dout, &x)
            .iter()
            .zip(&gate)
            .map(|(d, g)| d * g * (1.0 - g))
            .collect();
        let da = self.fc2.backward(&Matrix::from_vec(b, c, dz)?)?;
        let dz1 = Matrix::from_vec(da.rows, da.cols, self.act.backward(&da.data)?)?;
        let dp = self.fc1.backward(&dz1)?;
        let mut dx = scale_channels(dout, &gate);
        dx.add_assign(&pool::global_avg_backward(&dp, x.shape()));
        self.cache = Some((x, gate));
        Ok(dx)
    }
}

impl Module for SqueezeExcite {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.fc1.visit(f);
        self.fc2.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.fc1.visit_mut(f);
        self.fc2.visit_mut(f);
    }
}
