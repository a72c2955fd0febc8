//! Declarative network description and named presets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::NnError;
pub use crate::sequence::SequenceRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageConfig {
    pub expand_ratio: usize,
    pub kernel: usize,
    pub stride: usize,
    pub out_channels: usize,
    pub repeats: usize,
}

impl StageConfig {
    pub const fn new(expand_ratio: usize, kernel: usize, stride: usize, out_channels: usize, repeats: usize) -> Self {
        Self {
            expand_ratio,
            kernel,
            stride,
            out_channels,
            repeats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttentionKind {
    Cbam,
    Se,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Three backbones (RT, DT, RD) with LSTM/LSTM/linear-max heads and late fusion.
    Pecl,
    /// One backbone, global average pool, dropout, linear classifier.
    Classifier,
}

/// One MBConv block after expanding stage repeats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockSpec {
    pub stage: usize,
    pub in_channels: usize,
    pub out_channels: usize,
    pub expand_ratio: usize,
    pub kernel: usize,
    pub stride: usize,
}

impl BlockSpec {
    pub fn expanded(&self) -> usize {
        self.in_channels * self.expand_ratio
    }

    pub fn has_residual(&self) -> bool {
        self.stride == 1 && self.in_channels == self.out_channels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub name: String,
    pub in_channels: usize,
    /// Input `[height, width]`.
    pub input_hw: [usize; 2],
    pub stem_channels: usize,
    pub stages: Vec<StageConfig>,
    pub head_channels: usize,
    pub attention: AttentionKind,
    pub cbam_reduction: usize,
    /// Squeeze width of SE blocks as a fraction of the block input channels.
    pub se_ratio: f64,
    pub activation: String,
    pub cbam_activation: String,
    pub lstm_hidden: usize,
    pub rd_linear_out: usize,
    pub fused_dim: usize,
    pub num_classes: usize,
    pub dropout_p: f64,
    pub lstm_feature_dim_rule: SequenceRule,
    pub topology: Topology,
}

pub const B0_STAGES: [StageConfig; 7] = [
    StageConfig::new(1, 3, 1, 16, 1),
    StageConfig::new(6, 3, 2, 24, 2),
    StageConfig::new(6, 5, 2, 40, 2),
    StageConfig::new(6, 3, 2, 80, 3),
    StageConfig::new(6, 5, 1, 112, 3),
    StageConfig::new(6, 5, 2, 192, 4),
    StageConfig::new(6, 3, 1, 320, 1),
];

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            name: "b0".into(),
            in_channels: 1,
            input_hw: [224, 224],
            stem_channels: 32,
            stages: B0_STAGES.to_vec(),
            head_channels: 1280,
            attention: AttentionKind::Cbam,
            cbam_reduction: 16,
            se_ratio: 0.25,
            activation: "swish".into(),
            cbam_activation: "relu".into(),
            lstm_hidden: 128,
            rd_linear_out: 128,
            fused_dim: 384,
            num_classes: 6,
            dropout_p: 0.2,
            lstm_feature_dim_rule: SequenceRule::HxC,
            topology: Topology::Pecl,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        let bad = |m: String| Err(NnError::InvalidConfig(m));
        if self.stages.is_empty() {
            return bad("no stages".into());
        }
        for (i, s) in self.stages.iter().enumerate() {
            if s.expand_ratio == 0 || s.out_channels == 0 || s.repeats == 0 || s.stride == 0 || s.kernel % 2 == 0 {
                return bad(format!("stage {} is malformed: {s:?}", i + 1));
            }
        }
        if [self.in_channels, self.stem_channels, self.head_channels, self.num_classes, self.cbam_reduction]
            .contains(&0)
        {
            return bad("zero channel count".into());
        }
        if !(0.0..1.0).contains(&self.dropout_p) {
            return bad(format!("dropout {} outside [0, 1)", self.dropout_p));
        }
        if !(self.se_ratio > 0.0 && self.se_ratio <= 1.0) {
            return bad(format!("se_ratio {} outside (0, 1]", self.se_ratio));
        }
        let (h, w) = self.feature_hw();
        if h == 0 || w == 0 {
            return bad(format!("input {:?} collapses to nothing", self.input_hw));
        }
        if self.topology == Topology::Pecl {
            if self.lstm_hidden != self.rd_linear_out {
                return bad("lstm_hidden and rd_linear_out must match".into());
            }
            if self.fused_dim != 3 * self.rd_linear_out {
                return bad(format!("fused_dim {} != 3 x {}", self.fused_dim, self.rd_linear_out));
            }
        }
        Ok(())
    }

    pub fn blocks(&self) -> Vec<BlockSpec> {
        let mut out = Vec::new();
        let mut c = self.stem_channels;
        for (i, s) in self.stages.iter().enumerate() {
            for r in 0..s.repeats {
                out.push(BlockSpec {
                    stage: i + 1,
                    in_channels: c,
                    out_channels: s.out_channels,
                    expand_ratio: s.expand_ratio,
                    kernel: s.kernel,
                    stride: if r == 0 { s.stride } else { 1 },
                });
                c = s.out_channels;
            }
        }
        out
    }

    /// Output size of a `k × k` convolution with `(k - 1) / 2` padding.
    pub fn conv_out(n: usize, kernel: usize, stride: usize) -> usize {
        let padded = n + 2 * ((kernel - 1) / 2);
        if n == 0 || padded < kernel {
            return 0;
        }
        (padded - kernel) / stride + 1
    }

    /// Spatial size of the final feature map `(H, W)`.
    pub fn feature_hw(&self) -> (usize, usize) {
        let [mut h, mut w] = self.input_hw;
        h = Self::conv_out(h, 3, 2);
        w = Self::conv_out(w, 3, 2);
        for b in self.blocks() {
            h = Self::conv_out(h, b.kernel, b.stride);
            w = Self::conv_out(w, b.kernel, b.stride);
        }
        (h, w)
    }

    pub fn se_channels(&self, block_in: usize) -> usize {
        ((block_in as f64 * self.se_ratio).floor() as usize).max(1)
    }

    pub fn lstm_input_dim(&self) -> usize {
        self.lstm_feature_dim_rule.feature_dim(self.head_channels, self.feature_hw().0)
    }

    pub fn rd_input_dim(&self) -> usize {
        SequenceRule::HxC.feature_dim(self.head_channels, self.feature_hw().0)
    }

    pub fn with_rule(mut self, rule: SequenceRule) -> Self {
        self.lstm_feature_dim_rule = rule;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, NnError> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| NnError::Format(format!("model config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn preset_b0() -> ModelConfig {
    ModelConfig::default()
}

fn preset_single_repeat() -> ModelConfig {
    ModelConfig {
        name: "single_repeat".into(),
        stages: B0_STAGES.iter().map(|s| StageConfig { repeats: 1, ..*s }).collect(),
        ..ModelConfig::default()
    }
}

fn preset_toy() -> ModelConfig {
    ModelConfig {
        name: "toy".into(),
        input_hw: [64, 64],
        stem_channels: 8,
        stages: vec![
            StageConfig::new(1, 3, 1, 8, 1),
            StageConfig::new(2, 3, 2, 8, 1),
            StageConfig::new(2, 5, 2, 8, 1),
            StageConfig::new(2, 3, 2, 8, 1),
        ],
        head_channels: 16,
        ..ModelConfig::default()
    }
}

/// Stock single-branch EfficientNet-B0 with squeeze-excitation, RGB input
/// and a 1000-way head.
fn preset_baseline_se() -> ModelConfig {
    ModelConfig {
        name: "baseline_se".into(),
        in_channels: 3,
        attention: AttentionKind::Se,
        num_classes: 1000,
        topology: Topology::Classifier,
        ..ModelConfig::default()
    }
}

/// Named configurations.
#[derive(Debug, Clone)]
pub struct PresetRegistry {
    entries: BTreeMap<&'static str, fn() -> ModelConfig>,
}

impl Default for PresetRegistry {
    fn default() -> Self {
        let mut r = Self {
            entries: BTreeMap::new(),
        };
        r.register("b0", preset_b0);
        r.register("single_repeat", preset_single_repeat);
        r.register("toy", preset_toy);
        r.register("baseline_se", preset_baseline_se);
        r
    }
}

impl PresetRegistry {
    pub fn register(&mut self, name: &'static str, build: fn() -> ModelConfig) {
        self.entries.insert(name, build);
    }

    pub fn get(&self, name: &str) -> Result<ModelConfig, NnError> {
        self.entries.get(name).map(|f| f()).ok_or_else(|| NnError::Unknown {
            kind: "preset",
            name: name.to_string(),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

pub fn preset(name: &str) -> Result<ModelConfig, NnError> {
    PresetRegistry::default().get(name)
}
