//! Inverted-bottleneck block with pluggable channel attention.

use crate::attention::{Cbam, SqueezeExcite};
use crate::config::{AttentionKind, BlockSpec, ModelConfig};
use crate::layers::{Act, BatchNorm2d, Conv2d, Conv2dSpec};
use crate::param::{Init, Module, Param};
use crate::tensor::Tensor4;
use crate::NnError;

#[derive(Debug, Clone)]
pub enum Attention {
    Cbam(Cbam),
    Se(SqueezeExcite),
    None,
}

impl Attention {
    fn forward(&mut self, x: &Tensor4) -> Result<Tensor4, NnError> {
        match self {
            Self::Cbam(a) => a.forward(x),
            Self::Se(a) => a.forward(x),
            Self::None => Ok(x.clone()),
        }
    }

    fn backward(&mut self, dy: &Tensor4) -> Result<Tensor4, NnError> {
        match self {
            Self::Cbam(a) => a.backward(dy),
            Self::Se(a) => a.backward(dy),
            Self::None => Ok(dy.clone()),
        }
    }
}

impl Module for Attention {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        match self {
            Self::Cbam(a) => a.visit(f),
            Self::Se(a) => a.visit(f),
            Self::None => {}
        }
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        match self {
            Self::Cbam(a) => a.visit_mut(f),
            Self::Se(a) => a.visit_mut(f),
            Self::None => {}
        }
    }
}

/// Conv, batch norm and optional activation.
#[derive(Debug, Clone)]
pub struct ConvBnAct {
    pub conv: Conv2d,
    pub bn: BatchNorm2d,
    act: Option<Act>,
}

impl ConvBnAct {
    pub fn new(name: &str, spec: Conv2dSpec, act: Option<&str>, init: &mut Init) -> Result<Self, NnError> {
        Ok(Self {
            conv: Conv2d::new(&format!("{name}.conv"), spec, init)?,
            bn: BatchNorm2d::new(&format!("{name}.bn"), spec.out_channels),
            act: act.map(Act::by_name).transpose()?,
        })
    }

    pub fn forward(&mut self, x: &Tensor4, train: bool) -> Result<Tensor4, NnError> {
        let y = self.bn.forward(&self.conv.forward(x)?, train)?;
        match &mut self.act {
            Some(a) => Tensor4::from_vec(y.shape(), a.forward(y.data())),
            None => Ok(y),
        }
    }

    pub fn backward(&mut self, dy: &Tensor4) -> Result<Tensor4, NnError> {
        let dz = match &self.act {
            Some(a) => Tensor4::from_vec(dy.shape(), a.backward(dy.data())?)?,
            None => dy.clone(),
        };
        self.conv.backward(&self.bn.backward(&dz)?)
    }
}

impl Module for ConvBnAct {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.conv.visit(f);
        self.bn.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.conv.visit_mut(f);
        self.bn.visit_mut(f);
    }
}

/// expand 1×1 → depthwise k×k → attention → project 1×1, with a residual
/// connection when the shape is preserved.
#[derive(Debug, Clone)]
pub struct MbConv {
    pub spec: BlockSpec,
    pub expand: Option<ConvBnAct>,
    pub depthwise: ConvBnAct,
    pub attention: Attention,
    pub project: ConvBnAct,
}

impl MbConv {
    pub fn new(name: &str, spec: BlockSpec, cfg: &ModelConfig, init: &mut Init) -> Result<Self, NnError> {
        let mid = spec.expanded();
        let act = cfg.activation.as_str();
        let expand = (spec.expand_ratio != 1)
            .then(|| ConvBnAct::new(&format!("{name}.expand"), Conv2dSpec::same(spec.in_channels, mid, 1, 1), Some(act), init))
            .transpose()?;
        let depthwise = ConvBnAct::new(
            &format!("{name}.depthwise"),
            Conv2dSpec::depthwise(mid, spec.kernel, spec.stride),
            Some(act),
            init,
        )?;
        let attention = match cfg.attention {
            AttentionKind::Cbam => Attention::Cbam(Cbam::new(
                &format!("{name}.cbam"),
                mid,
                cfg.cbam_reduction,
                &cfg.cbam_activation,
                init,
            )?),
            AttentionKind::Se => Attention::Se(SqueezeExcite::new(
                &format!("{name}.se"),
                mid,
                cfg.se_channels(spec.in_channels),
                act,
                init,
            )?),
            AttentionKind::None => Attention::None,
        };
        let project = ConvBnAct::new(
            &format!("{name}.project"),
            Conv2dSpec::same(mid, spec.out_channels, 1, 1),
            None,
            init,
        )?;
        Ok(Self {
            spec,
            expand,
            depthwise,
            attention,
            project,
        })
    }

    pub fn forward(&mut self, x: &Tensor4, train: bool) -> Result<Tensor4, NnError> {
        let mut h = match &mut self.expand {
            Some(e) => e.forward(x, train)?,
            None => x.clone(),
        };
        h = self.depthwise.forward(&h, train)?;
        h = self.attention.forward(&h)?;
        let mut y = self.project.forward(&h, train)?;
        if self.spec.has_residual() {
            y.add_assign(x);
        }
        Ok(y)
    }

    pub fn backward(&mut self, dy: &Tensor4) -> Result<Tensor4, NnError> {
        let mut d = self.project.backward(dy)?;
        d = self.attention.backward(&d)?;
        d = self.depthwise.backward(&d)?;
        if let Some(e) = &mut self.expand {
            d = e.backward(&d)?;
        }
        if self.spec.has_residual() {
            d.add_assign(dy);
        }
        Ok(d)
    }
}

impl Module for MbConv {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        if let Some(e) = &self.expand {
            e.visit(f);
        }
        self.depthwise.visit(f);
        self.attention.visit(f);
        self.project.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        if let Some(e) = &mut self.expand {
            e.visit_mut(f);
        }
        self.depthwise.visit_mut(f);
        self.attention.visit_mut(f);
        self.project.visit_mut(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    fn spec(in_c: usize, out_c: usize, e: usize, k: usize, s: usize) -> BlockSpec {
        BlockSpec {
            stage: 1,
            in_channels: in_c,
            out_channels: out_c,
            expand_ratio: e,
            kernel: k,
            stride: s,
        }
    }

    #[test]
    fn zero_weights_leave_residual_identity() {
        let cfg = preset("toy").unwrap();
        let mut block = MbConv::new("b", spec(4, 4, 2, 3, 1), &cfg, &mut Init::new(0)).unwrap();
        block.visit_mut(&mut |p| {
            if p.trainable {
                p.value.iter_mut().for_each(|v| *v = 0.0);
            }
        });
        let x = Tensor4::from_vec([1, 4, 5, 5], Init::new(1).normal(100)).unwrap();
        assert_eq!(block.forward(&x, false).unwrap(), x);
    }

    #[test]
    fn stage_two_shape() {
        let cfg = preset("b0").unwrap();
        let mut block = MbConv::new("b", spec(16, 24, 6, 3, 2), &cfg, &mut Init::new(0)).unwrap();
        let y = block.forward(&Tensor4::zeros([1, 16, 112, 112]), false).unwrap();
        assert_eq!(y.shape(), [1, 24, 56, 56]);
    }

    #[test]
    fn expand_skipped_at_ratio_one() {
        let cfg = preset("b0").unwrap();
        let block = MbConv::new("b", spec(32, 16, 1, 3, 1), &cfg, &mut Init::new(0)).unwrap();
        assert!(block.expand.is_none());
        assert!(!block.spec.has_residual());
    }
}
