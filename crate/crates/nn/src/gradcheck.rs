//! Finite-difference gradient checks.
//!
//! Each case builds a small module with random weights and input, takes
//! the scalar loss `L = Σ r·y` for a fixed random projection `r`, and
//! compares the analytic gradients of `L` with central differences for
//! the input and every trainable parameter tensor.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::index::sample;
use serde::Serialize;

use crate::attention::{ChannelAttention, Cbam, SpatialAttention, SqueezeExcite};
use crate::config::{preset, AttentionKind, BlockSpec, ModelConfig};
use crate::heads::{Fusion, RdHead};
use crate::layers::{Act, BatchNorm2d, Conv2d, Conv2dSpec, Linear};
use crate::lstm::Lstm;
use crate::mbconv::MbConv;
use crate::model::{Pecl, PeclInput};
use crate::param::{Init, Module, Param};
use crate::sequence::{from_sequence, to_sequence, SequenceRule};
use crate::tensor::{Matrix, Sequence, Tensor4};
use crate::NnError;

pub const TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub eps: f64,
    pub seed: u64,
    /// Elements probed per tensor; larger tensors are subsampled.
    pub max_probes: usize,
    /// Denominator floor of the relative error.
    pub floor: f64,
    /// Extra floor as a fraction of the largest analytic gradient anywhere
    /// in the module. Deep compositions have early-layer gradients far
    /// below the central-difference noise level; this keeps those from
    /// reading as failures while still comparing them on the global scale.
    pub relative_floor: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            seed: 20_240_601,
            max_probes: 64,
            floor: 1e-6,
            relative_floor: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorCheck {
    pub tensor: String,
    pub probed: usize,
    pub max_abs_error: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub case: String,
    pub tensors: Vec<TensorCheck>,
    pub max_rel_error: f64,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(case: &str, tensors: Vec<TensorCheck>) -> Self {
        let max_rel_error = tensors.iter().map(|t| t.rel_error).fold(0.0, f64::max);
        Self {
            case: case.to_string(),
            tensors,
            max_rel_error,
            passed: max_rel_error < TOLERANCE,
        }
    }
}

/// One registered gradient check.
pub trait GradCheck: Send + Sync {
    fn name(&self) -> &str;
    fn run(&self, cfg: &CheckConfig) -> Result<CheckReport, NnError>;
}

/// A check backed by a plain function.
pub struct FnCheck {
    pub name: &'static str,
    pub run: fn(&CheckConfig) -> Result<CheckReport, NnError>,
}

impl GradCheck for FnCheck {
    fn name(&self) -> &str {
        self.name
    }
    fn run(&self, cfg: &CheckConfig) -> Result<CheckReport, NnError> {
        (self.run)(cfg)
    }
}

#[derive(Clone)]
pub struct GradCheckRegistry {
    entries: BTreeMap<String, Arc<dyn GradCheck>>,
}

impl Default for GradCheckRegistry {
    fn default() -> Self {
        let mut r = Self {
            entries: BTreeMap::new(),
        };
        let cases: [FnCheck; 21] = [
            FnCheck { name: "conv", run: case_conv },
            FnCheck { name: "conv_stride", run: case_conv_stride },
            FnCheck { name: "depthwise", run: case_depthwise },
            FnCheck { name: "bn_eval", run: case_bn_eval },
            FnCheck { name: "bn_train", run: case_bn_train },
            FnCheck { name: "act_swish", run: |c| case_act(c, "swish") },
            FnCheck { name: "act_relu", run: |c| case_act(c, "relu") },
            FnCheck { name: "act_sigmoid", run: |c| case_act(c, "sigmoid") },
            FnCheck { name: "linear", run: case_linear },
            FnCheck { name: "cbam_channel", run: case_cbam_channel },
            FnCheck { name: "cbam_spatial", run: case_cbam_spatial },
            FnCheck { name: "cbam", run: case_cbam },
            FnCheck { name: "se", run: case_se },
            FnCheck { name: "mbconv", run: case_mbconv },
            FnCheck { name: "mbconv_stride", run: case_mbconv_stride },
            FnCheck { name: "sequence_hxc", run: |c| case_sequence(c, SequenceRule::HxC) },
            FnCheck { name: "sequence_c_only", run: |c| case_sequence(c, SequenceRule::COnly) },
            FnCheck { name: "lstm", run: case_lstm },
            FnCheck { name: "rd_head", run: case_rd_head },
            FnCheck { name: "fusion", run: case_fusion },
            FnCheck { name: "pecl_toy", run: case_pecl_toy },
        ];
        for c in cases {
            r.register(Arc::new(c));
        }
        r
    }
}

impl GradCheckRegistry {
    pub fn register(&mut self, check: Arc<dyn GradCheck>) {
        self.entries.insert(check.name().to_string(), check);
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    /// `all`, an exact case name, or a prefix (`cbam` selects every CBAM case).
    pub fn select(&self, module: &str) -> Result<Vec<Arc<dyn GradCheck>>, NnError> {
        let picked: Vec<_> = self
            .entries
            .iter()
            .filter(|(k, _)| module == "all" || k.as_str() == module || k.starts_with(module))
            .map(|(_, v)| v.clone())
            .collect();
        if picked.is_empty() {
            return Err(NnError::Unknown {
                kind: "gradient check",
                name: module.to_string(),
            });
        }
        Ok(picked)
    }
}

/// Compares analytic and numeric gradients over probe sets.
fn compare(name: &str, analytic: &[f64], numeric: &[f64], floor: f64) -> TensorCheck {
    let max_abs_error = analytic.iter().zip(numeric).map(|(a, n)| (a - n).abs()).fold(0.0, f64::max);
    let scale = analytic
        .iter()
        .chain(numeric)
        .map(|v| v.abs())
        .fold(floor, f64::max);
    TensorCheck {
        tensor: name.to_string(),
        probed: analytic.len(),
        max_abs_error,
        rel_error: max_abs_error / scale,
    }
}

/// Indices probed in a tensor of length `n`: all of them when small,
/// otherwise a seeded sample that always includes the largest analytic entry.
fn probe_indices(n: usize, analytic: &[f64], cfg: &CheckConfig, salt: u64) -> Vec<usize> {
    if n <= cfg.max_probes {
        return (0..n).collect();
    }
    let mut init = Init::new(cfg.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut idx = sample(init.rng(), n, cfg.max_probes - 1).into_vec();
    let top = (0..n)
        .max_by(|&a, &b| analytic[a].abs().total_cmp(&analytic[b].abs()))
        .unwrap_or(0);
    if !idx.contains(&top) {
        idx.push(top);
    }
    idx.sort_unstable();
    idx
}

/// Generic driver over a module with a flat input.
///
/// `forward` maps the flat input to a flat output; `backward` maps the
/// output gradient to the input gradient, accumulating parameter
/// gradients.
pub fn check<M, F, B>(
    case: &str,
    module: &mut M,
    input: Vec<f64>,
    mut forward: F,
    mut backward: B,
    cfg: &CheckConfig,
) -> Result<CheckReport, NnError>
where
    M: Module,
    F: FnMut(&mut M, &[f64]) -> Result<Vec<f64>, NnError>,
    B: FnMut(&mut M, &[f64]) -> Result<Vec<f64>, NnError>,
{
    let y = forward(module, &input)?;
    let r = Init::new(cfg.seed ^ 0x5EED).normal(y.len());
    let loss = |y: &[f64]| y.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>();
    module.zero_grad();
    let dx = backward(module, &r)?;
    if dx.len() != input.len() {
        return Err(NnError::shape(case, vec![input.len()], vec![dx.len()]));
    }
    let mut params: Vec<(String, Vec<f64>)> = Vec::new();
    module.visit(&mut |p: &Param| {
        if p.trainable {
            params.push((p.name.clone(), p.grad().into_owned()));
        }
    });
    let global = params
        .iter()
        .flat_map(|(_, g)| g.iter())
        .chain(&dx)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = cfg.floor.max(cfg.relative_floor * global);
    let mut reports = Vec::new();

    let idx = probe_indices(input.len(), &dx, cfg, 0);
    let mut num = Vec::with_capacity(idx.len());
    let mut x = input.clone();
    for &i in &idx {
        x[i] = input[i] + cfg.eps;
        let lp = loss(&forward(module, &x)?);
        x[i] = input[i] - cfg.eps;
        let lm = loss(&forward(module, &x)?);
        x[i] = input[i];
        num.push((lp - lm) / (2.0 * cfg.eps));
    }
    let ana: Vec<f64> = idx.iter().map(|&i| dx[i]).collect();
    reports.push(compare("input", &ana, &num, floor));

    for (k, (pname, grad)) in params.iter().enumerate() {
        let idx = probe_indices(grad.len(), grad, cfg, k as u64 + 1);
        let mut num = Vec::with_capacity(idx.len());
        for &i in &idx {
            let mut l = [0.0; 2];
            for (slot, sign) in [(0, 1.0), (1, -1.0)] {
                nudge(module, pname, i, sign * cfg.eps);
                l[slot] = loss(&forward(module, &input)?);
                nudge(module, pname, i, -sign * cfg.eps);
            }
            num.push((l[0] - l[1]) / (2.0 * cfg.eps));
        }
        let ana: Vec<f64> = idx.iter().map(|&i| grad[i]).collect();
        reports.push(compare(pname, &ana, &num, floor));
    }
    Ok(CheckReport::new(case, reports))
}

fn nudge<M: Module>(module: &mut M, name: &str, i: usize, delta: f64) {
    module.visit_mut(&mut |p: &mut Param| {
        if p.name == name {
            p.value[i] += delta;
        }
    });
}

/// Module wrapper for checks whose subject owns no parameters.
struct NoParams<T>(T);

impl<T> Module for NoParams<T> {
    fn visit(&self, _: &mut dyn FnMut(&Param)) {}
    fn visit_mut(&mut self, _: &mut dyn FnMut(&mut Param)) {}
}

fn random(n: usize, seed: u64) -> Vec<f64> {
    Init::new(seed).normal(n)
}

fn t4(shape: [usize; 4], x: &[f64]) -> Result<Tensor4, NnError> {
    Tensor4::from_vec(shape, x.to_vec())
}

fn conv_case(name: &str, spec: Conv2dSpec, shape: [usize; 4], cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let mut conv = Conv2d::new("conv", spec, &mut Init::new(cfg.seed))?;
    check(
        name,
        &mut conv,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?)?.into_data()),
        |m, dy| {
            let s = m.spec;
            let (oh, ow) = s.out_size(shape[2], shape[3]);
            Ok(m.backward(&t4([shape[0], s.out_channels, oh, ow], dy)?)?.into_data())
        },
        cfg,
    )
}

fn case_conv(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    conv_case("conv", Conv2dSpec::same(3, 4, 3, 1).with_bias(), [2, 3, 8, 8], cfg)
}

fn case_conv_stride(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    conv_case("conv_stride", Conv2dSpec::same(2, 3, 5, 2), [1, 2, 9, 7], cfg)
}

fn case_depthwise(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    conv_case("depthwise", Conv2dSpec::depthwise(4, 3, 2), [2, 4, 8, 8], cfg)
}

fn bn_case(name: &str, train: bool, cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let shape = [3, 4, 3, 5];
    let mut bn = BatchNorm2d::new("bn", 4);
    let mut init = Init::new(cfg.seed);
    bn.gamma.value = init.uniform(4, 1.0).iter().map(|v| v + 1.5).collect();
    bn.beta.value = init.normal(4);
    bn.running_mean.value = init.normal(4);
    bn.running_var.value = init.uniform(4, 0.5).iter().map(|v| v + 1.0).collect();
    check(
        name,
        &mut bn,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?, train)?.into_data()),
        |m, dy| Ok(m.backward(&t4(shape, dy)?)?.into_data()),
        cfg,
    )
}

fn case_bn_eval(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    bn_case("bn_eval", false, cfg)
}

fn case_bn_train(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    bn_case("bn_train", true, cfg)
}

fn case_act(cfg: &CheckConfig, name: &str) -> Result<CheckReport, NnError> {
    check(
        &format!("act_{name}"),
        &mut NoParams(Act::by_name(name)?),
        random(40, cfg.seed + 1).iter().map(|v| 2.0 * v).collect(),
        |m, x| Ok(m.0.forward(x)),
        |m, dy| m.0.backward(dy),
        cfg,
    )
}

fn case_linear(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let mut l = Linear::new("linear", 7, 5, &mut Init::new(cfg.seed));
    check(
        "linear",
        &mut l,
        random(21, cfg.seed + 1),
        |m, x| Ok(m.forward(&Matrix::from_vec(3, 7, x.to_vec())?)?.data),
        |m, dy| Ok(m.backward(&Matrix::from_vec(3, 5, dy.to_vec())?)?.data),
        cfg,
    )
}

fn case_cbam_channel(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let shape = [2, 20, 4, 5];
    let mut ch = ChannelAttention::new("cbam.channel", 20, 16, "relu", &mut Init::new(cfg.seed))?;
    check(
        "cbam_channel",
        &mut ch,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?)?.into_data()),
        |m, dy| Ok(m.backward(&t4([2, 20, 1, 1], dy)?)?.into_data()),
        cfg,
    )
}

fn case_cbam_spatial(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let shape = [2, 3, 6, 5];
    let mut sp = SpatialAttention::new("cbam.spatial", &mut Init::new(cfg.seed))?;
    check(
        "cbam_spatial",
        &mut sp,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?)?.into_data()),
        |m, dy| Ok(m.backward(&t4([2, 1, 6, 5], dy)?)?.into_data()),
        cfg,
    )
}

fn case_cbam(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let shape = [2, 6, 5, 4];
    let mut cbam = Cbam::new("cbam", 6, 4, "relu", &mut Init::new(cfg.seed))?;
    check(
        "cbam",
        &mut cbam,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?)?.into_data()),
        |m, dy| Ok(m.backward(&t4(shape, dy)?)?.into_data()),
        cfg,
    )
}

fn case_se(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let shape = [2, 8, 3, 3];
    let mut se = SqueezeExcite::new("se", 8, 2, "swish", &mut Init::new(cfg.seed))?;
    check(
        "se",
        &mut se,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?)?.into_data()),
        |m, dy| Ok(m.backward(&t4(shape, dy)?)?.into_data()),
        cfg,
    )
}

fn randomize_bn_stats<M: Module>(m: &mut M, seed: u64) {
    let mut init = Init::new(seed);
    m.visit_mut(&mut |p| {
        if p.name.ends_with("running_var") {
            p.value = init.uniform(p.len(), 0.5).iter().map(|v| v + 1.0).collect();
        } else if p.name.ends_with("running_mean") {
            p.value = init.uniform(p.len(), 0.2);
        } else if p.name.ends_with("gamma") {
            p.value = init.uniform(p.len(), 0.5).iter().map(|v| v + 1.0).collect();
        }
    });
}

fn mbconv_case(name: &str, block: BlockSpec, attention: AttentionKind, cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let mut model_cfg = preset("toy")?;
    model_cfg.attention = attention;
    model_cfg.cbam_reduction = 4;
    let mut m = MbConv::new("mbconv", block, &model_cfg, &mut Init::new(cfg.seed))?;
    randomize_bn_stats(&mut m, cfg.seed + 2);
    let shape = [1, block.in_channels, 8, 8];
    let oh = ModelConfig::conv_out(8, block.kernel, block.stride);
    check(
        name,
        &mut m,
        random(shape.iter().product(), cfg.seed + 1),
        |m, x| Ok(m.forward(&t4(shape, x)?, false)?.into_data()),
        |m, dy| Ok(m.backward(&t4([1, block.out_channels, oh, oh], dy)?)?.into_data()),
        cfg,
    )
}

fn case_mbconv(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let block = BlockSpec {
        stage: 1,
        in_channels: 4,
        out_channels: 4,
        expand_ratio: 2,
        kernel: 3,
        stride: 1,
    };
    mbconv_case("mbconv", block, AttentionKind::Cbam, cfg)
}

fn case_mbconv_stride(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let block = BlockSpec {
        stage: 2,
        in_channels: 4,
        out_channels: 6,
        expand_ratio: 3,
        kernel: 5,
        stride: 2,
    };
    mbconv_case("mbconv_stride", block, AttentionKind::Se, cfg)
}

fn case_sequence(cfg: &CheckConfig, rule: SequenceRule) -> Result<CheckReport, NnError> {
    let shape = [2, 3, 4, 5];
    let d = rule.feature_dim(3, 4);
    check(
        &format!("sequence_{}", rule.name()),
        &mut NoParams(()),
        random(shape.iter().product(), cfg.seed + 1),
        |_, x| Ok(to_sequence(&t4(shape, x)?, rule).data),
        |_, dy| Ok(from_sequence(&Sequence::from_vec(2, 5, d, dy.to_vec())?, rule, shape)?.into_data()),
        cfg,
    )
}

fn case_lstm(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let (b, t, d, h) = (2, 5, 6, 4);
    let mut l = Lstm::new("lstm", d, h, &mut Init::new(cfg.seed));
    check(
        "lstm",
        &mut l,
        random(b * t * d, cfg.seed + 1),
        |m, x| Ok(m.forward(&Sequence::from_vec(b, t, d, x.to_vec())?)?.data),
        |m, dy| Ok(m.backward(&Matrix::from_vec(b, h, dy.to_vec())?)?.data),
        cfg,
    )
}

fn case_rd_head(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let (b, t, d, o) = (2, 4, 6, 5);
    let mut head = RdHead::new("rd_head", d, o, &mut Init::new(cfg.seed));
    check(
        "rd_head",
        &mut head,
        random(b * t * d, cfg.seed + 1),
        |m, x| Ok(m.forward(&Sequence::from_vec(b, t, d, x.to_vec())?)?.data),
        |m, dy| Ok(m.backward(&Matrix::from_vec(b, o, dy.to_vec())?)?.data),
        cfg,
    )
}

fn case_fusion(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let (b, w) = (3, [4, 4, 4]);
    let mut f = Fusion::new("fusion", w, 6, 0.2, cfg.seed, &mut Init::new(cfg.seed));
    f.dropout.hold_mask = true;
    let split = |x: &[f64]| -> Result<[Matrix; 3], NnError> {
        let mut parts = [Matrix::zeros(b, 4), Matrix::zeros(b, 4), Matrix::zeros(b, 4)];
        for (k, p) in parts.iter_mut().enumerate() {
            for s in 0..b {
                let off = s * 12 + k * 4;
                p.row_mut(s).copy_from_slice(&x[off..off + 4]);
            }
        }
        Ok(parts)
    };
    check(
        "fusion",
        &mut f,
        random(b * 12, cfg.seed + 1),
        |m, x| {
            let [p, q, r] = split(x)?;
            Ok(m.forward([&p, &q, &r], true)?.data)
        },
        |m, dy| {
            let parts = m.backward(&Matrix::from_vec(b, 6, dy.to_vec())?)?;
            let mut out = vec![0.0; b * 12];
            for (k, p) in parts.iter().enumerate() {
                for s in 0..b {
                    out[s * 12 + k * 4..s * 12 + k * 4 + 4].copy_from_slice(p.row(s));
                }
            }
            Ok(out)
        },
        cfg,
    )
}

fn case_pecl_toy(cfg: &CheckConfig) -> Result<CheckReport, NnError> {
    let mut model_cfg = preset("toy")?;
    model_cfg.input_hw = [32, 32];
    model_cfg.lstm_hidden = 8;
    model_cfg.rd_linear_out = 8;
    model_cfg.fused_dim = 24;
    let mut net = Pecl::new(&model_cfg, cfg.seed)?;
    randomize_bn_stats(&mut net, cfg.seed + 2);
    let shape = [1, 1, 32, 32];
    let n = 32 * 32;
    let local = CheckConfig {
        max_probes: cfg.max_probes.min(6),
        relative_floor: cfg.relative_floor.max(1e-3),
        ..*cfg
    };
    check(
        "pecl_toy",
        &mut net,
        random(3 * n, cfg.seed + 1),
        |m, x| {
            let input = PeclInput {
                rt: t4(shape, &x[..n])?,
                dt: t4(shape, &x[n..2 * n])?,
                rd: t4(shape, &x[2 * n..])?,
            };
            Ok(m.forward(&input, false)?.data)
        },
        |m, dy| {
            let d = m.backward(&Matrix::from_vec(1, 6, dy.to_vec())?)?;
            let mut out = d.rt.into_data();
            out.extend(d.dt.into_data());
            out.extend(d.rd.into_data());
            Ok(out)
        },
        &local,
    )
}

/// Runs the selected checks in name order.
pub fn run_selected(registry: &GradCheckRegistry, module: &str, cfg: &CheckConfig) -> Result<Vec<CheckReport>, NnError> {
    registry.select(module)?.iter().map(|c| c.run(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        let r = GradCheckRegistry::default();
        assert_eq!(r.select("cbam").unwrap().len(), 3);
        assert_eq!(r.select("lstm").unwrap().len(), 1);
        assert_eq!(r.select("all").unwrap().len(), r.names().len());
        assert!(r.select("transformer").is_err());
    }

    #[test]
    fn detects_wrong_gradient() {
        let mut l = Linear::new("l", 3, 2, &mut Init::new(0));
        let report = check(
            "broken",
            &mut l,
            random(6, 1),
            |m, x| Ok(m.forward(&Matrix::from_vec(2, 3, x.to_vec())?)?.data),
            |m, dy| {
                let mut dx = m.backward(&Matrix::from_vec(2, 2, dy.to_vec())?)?.data;
                dx[0] *= 1.01;
                Ok(dx)
            },
            &CheckConfig::default(),
        )
        .unwrap();
        assert!(!report.passed);
        assert_eq!(report.tensors[0].tensor, "input");
    }

    #[test]
    fn probe_sampling_includes_peak() {
        let cfg = CheckConfig {
            max_probes: 4,
            ..CheckConfig::default()
        };
        let mut g = vec![0.0; 100];
        g[37] = 5.0;
        let idx = probe_indices(100, &g, &cfg, 3);
        assert!(idx.contains(&37));
        assert!(idx.len() <= 4);
    }
}
