//! Static parameter, multiply-accumulate and shape accounting.
//!
//! Walks the configuration without allocating weights. MACs count
//! convolutions, linear layers and LSTM matrix products; batch norm,
//! activations, pooling and elementwise products are free.

use serde::Serialize;

use crate::attention::{Cbam, SqueezeExcite};
use crate::config::{AttentionKind, BlockSpec, ModelConfig, Topology};
use crate::heads::{Fusion, RdHead};
use crate::layers::{Conv2dSpec, Linear};
use crate::lstm::Lstm;
use crate::model::ShapeTrace;

/// Published totals for the three-branch network.
pub const REFERENCE_PARAMS: f64 = 23.42e6;
pub const REFERENCE_MACS: f64 = 1324.82e6;
/// Published trainable count of one EfficientNet-B0 backbone.
pub const REFERENCE_BASELINE_TRAINABLE: f64 = 5.29e6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Count {
    pub trainable: usize,
    /// Batch-norm running statistics.
    pub buffers: usize,
    pub macs: usize,
}

impl Count {
    pub fn total_params(&self) -> usize {
        self.trainable + self.buffers
    }

    fn conv(spec: Conv2dSpec, h: usize, w: usize) -> Self {
        Self {
            trainable: spec.param_count(),
            buffers: 0,
            macs: spec.macs(h, w),
        }
    }

    fn bn(c: usize) -> Self {
        Self {
            trainable: 2 * c,
            buffers: 2 * c,
            macs: 0,
        }
    }

    fn params(trainable: usize, macs: usize) -> Self {
        Self {
            trainable,
            buffers: 0,
            macs,
        }
    }
}

impl std::ops::Add for Count {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            trainable: self.trainable + o.trainable,
            buffers: self.buffers + o.buffers,
            macs: self.macs + o.macs,
        }
    }
}

impl std::iter::Sum for Count {
    fn sum<I: Iterator<Item = Self>>(it: I) -> Self {
        it.fold(Self::default(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    pub module: String,
    #[serde(flatten)]
    pub count: Count,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub config: String,
    pub rule: String,
    pub rows: Vec<CountRow>,
    pub total: Count,
}

impl CountReport {
    pub fn row(&self, name: &str) -> Option<&Count> {
        self.rows.iter().find(|r| r.module == name).map(|r| &r.count)
    }

    /// Sum over rows whose name starts with `prefix`.
    pub fn sum_prefix(&self, prefix: &str) -> Count {
        self.rows.iter().filter(|r| r.module.starts_with(prefix)).map(|r| r.count).sum()
    }
}

fn conv_bn(spec: Conv2dSpec, h: usize, w: usize) -> Count {
    Count::conv(spec, h, w) + Count::bn(spec.out_channels)
}

/// Cost of one MBConv block at input size `h × w`; returns the output size.
pub fn block_count(cfg: &ModelConfig, b: &BlockSpec, h: usize, w: usize) -> (Count, usize, usize) {
    let mid = b.expanded();
    let mut c = Count::default();
    if b.expand_ratio != 1 {
        c = c + conv_bn(Conv2dSpec::same(b.in_channels, mid, 1, 1), h, w);
    }
    let dw = Conv2dSpec::depthwise(mid, b.kernel, b.stride);
    let (oh, ow) = dw.out_size(h, w);
    c = c + conv_bn(dw, h, w);
    c = c + match cfg.attention {
        AttentionKind::Cbam => Count::params(
            Cbam::param_count(mid, cfg.cbam_reduction),
            Cbam::macs(mid, cfg.cbam_reduction, oh, ow),
        ),
        AttentionKind::Se => {
            let s = cfg.se_channels(b.in_channels);
            Count::params(SqueezeExcite::param_count(mid, s), SqueezeExcite::macs(mid, s))
        }
        AttentionKind::None => Count::default(),
    };
    c = c + conv_bn(Conv2dSpec::same(mid, b.out_channels, 1, 1), oh, ow);
    (c, oh, ow)
}

/// Rows `stem`, `stage1..N`, `head_conv` for one backbone, plus the final
/// feature map `(C, H, W)`.
pub fn backbone_rows(cfg: &ModelConfig, prefix: &str) -> (Vec<CountRow>, [usize; 3]) {
    let [mut h, mut w] = cfg.input_hw;
    let mut rows = Vec::new();
    let stem = Conv2dSpec::same(cfg.in_channels, cfg.stem_channels, 3, 2);
    rows.push(CountRow {
        module: format!("{prefix}stem"),
        count: conv_bn(stem, h, w),
    });
    (h, w) = stem.out_size(h, w);
    let mut c = cfg.stem_channels;
    for b in cfg.blocks() {
        let (cnt, oh, ow) = block_count(cfg, &b, h, w);
        (h, w, c) = (oh, ow, b.out_channels);
        let name = format!("{prefix}stage{}", b.stage);
        match rows.last_mut() {
            Some(r) if r.module == name => r.count = r.count + cnt,
            _ => rows.push(CountRow { module: name, count: cnt }),
        }
    }
    rows.push(CountRow {
        module: format!("{prefix}head_conv"),
        count: conv_bn(Conv2dSpec::same(c, cfg.head_channels, 1, 1), h, w),
    });
    (rows, [cfg.head_channels, h, w])
}

/// Per-module parameter and MAC counts for one input sample.
pub fn count(cfg: &ModelConfig) -> CountReport {
    let mut rows = Vec::new();
    match cfg.topology {
        Topology::Pecl => {
            let (t, d_lstm, d_rd) = {
                let (_, [_, _, w]) = backbone_rows(cfg, "");
                (w, cfg.lstm_input_dim(), cfg.rd_input_dim())
            };
            for br in ["rt", "dt"] {
                rows.extend(backbone_rows(cfg, &format!("{br}.")).0);
                rows.push(CountRow {
                    module: format!("{br}.lstm"),
                    count: Count::params(
                        Lstm::param_count(d_lstm, cfg.lstm_hidden),
                        Lstm::macs(d_lstm, cfg.lstm_hidden, t),
                    ),
                });
            }
            rows.extend(backbone_rows(cfg, "rd.").0);
            rows.push(CountRow {
                module: "rd.head".into(),
                count: Count::params(
                    RdHead::param_count(d_rd, cfg.rd_linear_out),
                    RdHead::macs(d_rd, cfg.rd_linear_out, t),
                ),
            });
            rows.push(CountRow {
                module: "fusion".into(),
                count: Count::params(
                    Fusion::param_count(cfg.fused_dim, cfg.num_classes),
                    cfg.fused_dim * cfg.num_classes,
                ),
            });
        }
        Topology::Classifier => {
            rows.extend(backbone_rows(cfg, "").0);
            rows.push(CountRow {
                module: "classifier".into(),
                count: Count::params(
                    Linear::param_count(cfg.head_channels, cfg.num_classes),
                    cfg.head_channels * cfg.num_classes,
                ),
            });
        }
    }
    let total = rows.iter().map(|r| r.count).sum();
    CountReport {
        config: cfg.name.clone(),
        rule: cfg.lstm_feature_dim_rule.name().into(),
        rows,
        total,
    }
}

/// Output shapes of the RT branch and the shared heads at batch size `b`,
/// in the order a traced forward pass records them.
pub fn shape_trace(cfg: &ModelConfig, b: usize) -> ShapeTrace {
    let mut out = ShapeTrace::new();
    let [mut h, mut w] = cfg.input_hw;
    h = ModelConfig::conv_out(h, 3, 2);
    w = ModelConfig::conv_out(w, 3, 2);
    out.push(("stem".into(), vec![b, cfg.stem_channels, h, w]));
    let blocks = cfg.blocks();
    for (i, blk) in blocks.iter().enumerate() {
        h = ModelConfig::conv_out(h, blk.kernel, blk.stride);
        w = ModelConfig::conv_out(w, blk.kernel, blk.stride);
        if i + 1 == blocks.len() || blocks[i + 1].stage != blk.stage {
            out.push((format!("stage{}", blk.stage), vec![b, blk.out_channels, h, w]));
        }
    }
    out.push(("head_conv".into(), vec![b, cfg.head_channels, h, w]));
    if cfg.topology == Topology::Pecl {
        out.push(("lstm".into(), vec![b, cfg.lstm_hidden]));
        out.push(("rd_head".into(), vec![b, cfg.rd_linear_out]));
        out.push(("concat".into(), vec![b, cfg.fused_dim]));
    }
    out.push(("logits".into(), vec![b, cfg.num_classes]));
    out
}

/// Relative deviation `(ours - reference) / reference`.
pub fn relative_delta(ours: usize, reference: f64) -> f64 {
    (ours as f64 - reference) / reference
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;

    #[test]
    fn linear_counts() {
        let r = count(&preset("b0").unwrap());
        assert_eq!(r.row("fusion").unwrap().trainable, 2310);
        assert_eq!(r.row("rd.head").unwrap().trainable, 1_147_008);
    }

    #[test]
    fn baseline_matches_reference_backbone() {
        let r = count(&preset("baseline_se").unwrap());
        // Stock EfficientNet-B0 with a 1000-way head.
        assert_eq!(r.total.trainable, 5_288_548);
        assert!(relative_delta(r.total.trainable, REFERENCE_BASELINE_TRAINABLE).abs() < 0.02);
    }

    #[test]
    fn trace_ends_in_logits() {
        let t = shape_trace(&preset("b0").unwrap(), 4);
        assert_eq!(t.first().unwrap().1, vec![4, 32, 112, 112]);
        assert_eq!(t.last().unwrap().1, vec![4, 6]);
        assert_eq!(t.len(), 1 + 7 + 1 + 3 + 1);
    }

    #[test]
    fn rows_sum_to_total() {
        for name in ["b0", "toy", "single_repeat", "baseline_se"] {
            let r = count(&preset(name).unwrap());
            assert_eq!(r.rows.iter().map(|x| x.count).sum::<Count>(), r.total);
        }
    }
}
