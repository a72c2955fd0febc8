//! Backbones and the full networks built from a [`ModelConfig`].

use crate::config::{ModelConfig, Topology};
use crate::heads::{Fusion, RdHead};
use crate::layers::{pool, Conv2dSpec, Dropout, Linear};
use crate::lstm::Lstm;
use crate::mbconv::{ConvBnAct, MbConv};
use crate::param::{Init, Module, Param};
use crate::sequence::{from_sequence, to_sequence, SequenceRule};
use crate::tensor::{Matrix, Tensor4};
use crate::NnError;

/// Named output shape recorded during a traced forward pass.
pub type ShapeTrace = Vec<(String, Vec<usize>)>;

/// Stem conv, MBConv stages, 1×1 head conv.
#[derive(Debug, Clone)]
pub struct Backbone {
    pub stem: ConvBnAct,
    pub blocks: Vec<MbConv>,
    pub head: ConvBnAct,
}

impl Backbone {
    pub fn new(name: &str, cfg: &ModelConfig, init: &mut Init) -> Result<Self, NnError> {
        let act = Some(cfg.activation.as_str());
        let stem = ConvBnAct::new(
            &format!("{name}.stem"),
            Conv2dSpec::same(cfg.in_channels, cfg.stem_channels, 3, 2),
            act,
            init,
        )?;
        let specs = cfg.blocks();
        let mut blocks = Vec::with_capacity(specs.len());
        for (i, spec) in specs.iter().enumerate() {
            blocks.push(MbConv::new(&format!("{name}.block{i}"), *spec, cfg, init)?);
        }
        let last = specs.last().map_or(cfg.stem_channels, |b| b.out_channels);
        let head = ConvBnAct::new(
            &format!("{name}.head"),
            Conv2dSpec::same(last, cfg.head_channels, 1, 1),
            act,
            init,
        )?;
        Ok(Self { stem, blocks, head })
    }

    pub fn forward(&mut self, x: &Tensor4, train: bool) -> Result<Tensor4, NnError> {
        self.forward_impl(x, train, None)
    }

    /// Forward pass that records the output shape of the stem, of every
    /// stage and of the head conv.
    pub fn forward_traced(&mut self, x: &Tensor4, train: bool, trace: &mut ShapeTrace) -> Result<Tensor4, NnError> {
        self.forward_impl(x, train, Some(trace))
    }

    fn forward_impl(&mut self, x: &Tensor4, train: bool, mut trace: Option<&mut ShapeTrace>) -> Result<Tensor4, NnError> {
        let mut record = |name: String, t: &Tensor4| {
            if let Some(tr) = trace.as_deref_mut() {
                tr.push((name, t.shape().to_vec()));
            }
        };
        let mut h = self.stem.forward(x, train)?;
        record("stem".into(), &h);
        let n = self.blocks.len();
        for i in 0..n {
            h = self.blocks[i].forward(&h, train)?;
            let stage = self.blocks[i].spec.stage;
            if i + 1 == n || self.blocks[i + 1].spec.stage != stage {
                record(format!("stage{stage}"), &h);
            }
        }
        h = self.head.forward(&h, train)?;
        record("head_conv".into(), &h);
        Ok(h)
    }

    pub fn backward(&mut self, dy: &Tensor4) -> Result<Tensor4, NnError> {
        let mut d = self.head.backward(dy)?;
        for b in self.blocks.iter_mut().rev() {
            d = b.backward(&d)?;
        }
        self.stem.backward(&d)
    }
}

impl Module for Backbone {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.stem.visit(f);
        for b in &self.blocks {
            b.visit(f);
        }
        self.head.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.stem.visit_mut(f);
        for b in &mut self.blocks {
            b.visit_mut(f);
        }
        self.head.visit_mut(f);
    }
}

/// The three spectrogram inputs of one batch.
#[derive(Debug, Clone, PartialEq)]
pub struct PeclInput {
    pub rt: Tensor4,
    pub dt: Tensor4,
    pub rd: Tensor4,
}

/// Backbone plus a sequence readout producing one feature vector.
#[derive(Debug, Clone)]
pub struct Branch {
    pub backbone: Backbone,
    pub readout: Readout,
    rule: SequenceRule,
    feature_shape: Option<[usize; 4]>,
}

#[derive(Debug, Clone)]
pub enum Readout {
    Lstm(Lstm),
    LinearMax(RdHead),
}

impl Branch {
    fn forward_impl(&mut self, x: &Tensor4, train: bool, trace: Option<&mut ShapeTrace>) -> Result<Matrix, NnError> {
        let f = match trace {
            Some(tr) => self.backbone.forward_traced(x, train, tr)?,
            None => self.backbone.forward(x, train)?,
        };
        self.feature_shape = Some(f.shape());
        let seq = to_sequence(&f, self.rule);
        match &mut self.readout {
            Readout::Lstm(l) => l.forward(&seq),
            Readout::LinearMax(h) => h.forward(&seq),
        }
    }

    pub fn forward(&mut self, x: &Tensor4, train: bool) -> Result<Matrix, NnError> {
        self.forward_impl(x, train, None)
    }

    pub fn backward(&mut self, dy: &Matrix) -> Result<Tensor4, NnError> {
        let shape = self.feature_shape.ok_or(NnError::NoForward("branch"))?;
        let dseq = match &mut self.readout {
            Readout::Lstm(l) => l.backward(dy)?,
            Readout::LinearMax(h) => h.backward(dy)?,
        };
        let df = from_sequence(&dseq, self.rule, shape)?;
        self.backbone.backward(&df)
    }
}

impl Module for Branch {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.backbone.visit(f);
        match &self.readout {
            Readout::Lstm(l) => l.visit(f),
            Readout::LinearMax(h) => h.visit(f),
        }
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.backbone.visit_mut(f);
        match &mut self.readout {
            Readout::Lstm(l) => l.visit_mut(f),
            Readout::LinearMax(h) => h.visit_mut(f),
        }
    }
}

/// Three parallel branches (range-time, Doppler-time, range-Doppler) and
/// late fusion.
#[derive(Debug, Clone)]
pub struct Pecl {
    pub cfg: ModelConfig,
    pub rt: Branch,
    pub dt: Branch,
    pub rd: Branch,
    pub fusion: Fusion,
}

impl Pecl {
    pub fn new(cfg: &ModelConfig, seed: u64) -> Result<Self, NnError> {
        cfg.validate()?;
        if cfg.topology != Topology::Pecl {
            return Err(NnError::InvalidConfig(format!("{} is not a three-branch config", cfg.name)));
        }
        let mut init = Init::new(seed);
        let rule = cfg.lstm_feature_dim_rule;
        let lstm_branch = |name: &str, init: &mut Init| -> Result<Branch, NnError> {
            Ok(Branch {
                backbone: Backbone::new(name, cfg, init)?,
                readout: Readout::Lstm(Lstm::new(&format!("{name}.lstm"), cfg.lstm_input_dim(), cfg.lstm_hidden, init)),
                rule,
                feature_shape: None,
            })
        };
        let rt = lstm_branch("rt", &mut init)?;
        let dt = lstm_branch("dt", &mut init)?;
        let rd = Branch {
            backbone: Backbone::new("rd", cfg, &mut init)?,
            readout: Readout::LinearMax(RdHead::new("rd.head", cfg.rd_input_dim(), cfg.rd_linear_out, &mut init)),
            rule: SequenceRule::HxC,
            feature_shape: None,
        };
        let widths = [cfg.lstm_hidden, cfg.lstm_hidden, cfg.rd_linear_out];
        let fusion = Fusion::new("fusion", widths, cfg.num_classes, cfg.dropout_p, seed ^ 0xD0, &mut init);
        Ok(Self {
            cfg: cfg.clone(),
            rt,
            dt,
            rd,
            fusion,
        })
    }

    fn check_input(&self, x: &PeclInput) -> Result<(), NnError> {
        let b = x.rt.shape()[0];
        let [h, w] = self.cfg.input_hw;
        let want = [b, self.cfg.in_channels, h, w];
        for t in [&x.rt, &x.dt, &x.rd] {
            t.expect_shape("network input", want)?;
        }
        Ok(())
    }

    pub fn forward(&mut self, x: &PeclInput, train: bool) -> Result<Matrix, NnError> {
        self.check_input(x)?;
        let a = self.rt.forward(&x.rt, train)?;
        let b = self.dt.forward(&x.dt, train)?;
        let c = self.rd.forward(&x.rd, train)?;
        self.fusion.forward([&a, &b, &c], train)
    }

    /// Inference pass recording every intermediate shape of the RT branch
    /// and of the shared heads.
    pub fn forward_traced(&mut self, x: &PeclInput) -> Result<(Matrix, ShapeTrace), NnError> {
        self.check_input(x)?;
        let mut trace = ShapeTrace::new();
        let a = self.rt.forward_impl(&x.rt, false, Some(&mut trace))?;
        trace.push(("lstm".into(), a.shape().to_vec()));
        let b = self.dt.forward(&x.dt, false)?;
        let c = self.rd.forward(&x.rd, false)?;
        trace.push(("rd_head".into(), c.shape().to_vec()));
        trace.push(("concat".into(), vec![a.rows, a.cols + b.cols + c.cols]));
        let logits = self.fusion.forward([&a, &b, &c], false)?;
        trace.push(("logits".into(), logits.shape().to_vec()));
        Ok((logits, trace))
    }

    /// Accumulates parameter gradients; returns input gradients.
    pub fn backward(&mut self, dlogits: &Matrix) -> Result<PeclInput, NnError> {
        let [da, db, dc] = self.fusion.backward(dlogits)?;
        Ok(PeclInput {
            rt: self.rt.backward(&da)?,
            dt: self.dt.backward(&db)?,
            rd: self.rd.backward(&dc)?,
        })
    }

    pub fn set_dropout_seed(&mut self, seed: u64) {
        self.fusion.dropout.reseed(seed);
    }
}

impl Module for Pecl {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.rt.visit(f);
        self.dt.visit(f);
        self.rd.visit(f);
        self.fusion.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.rt.visit_mut(f);
        self.dt.visit_mut(f);
        self.rd.visit_mut(f);
        self.fusion.visit_mut(f);
    }
}

/// Single backbone with average pooling and a linear classifier.
#[derive(Debug, Clone)]
pub struct ImageClassifier {
    pub cfg: ModelConfig,
    pub backbone: Backbone,
    pub dropout: Dropout,
    pub classifier: Linear,
    feature_shape: Option<[usize; 4]>,
}

impl ImageClassifier {
    pub fn new(cfg: &ModelConfig, seed: u64) -> Result<Self, NnError> {
        cfg.validate()?;
        let mut init = Init::new(seed);
        Ok(Self {
            cfg: cfg.clone(),
            backbone: Backbone::new("backbone", cfg, &mut init)?,
            dropout: Dropout::new(cfg.dropout_p, seed ^ 0xD0),
            classifier: Linear::new("classifier", cfg.head_channels, cfg.num_classes, &mut init),
            feature_shape: None,
        })
    }

    pub fn forward(&mut self, x: &Tensor4, train: bool) -> Result<Matrix, NnError> {
        let f = self.backbone.forward(x, train)?;
        self.feature_shape = Some(f.shape());
        let pooled = self.dropout.forward(&pool::global_avg(&f), train);
        self.classifier.forward(&pooled)
    }

    pub fn backward(&mut self, dlogits: &Matrix) -> Result<Tensor4, NnError> {
        let shape = self.feature_shape.ok_or(NnError::NoForward("classifier"))?;
        let dp = self.dropout.backward(&self.classifier.backward(dlogits)?);
        self.backbone.backward(&pool::global_avg_backward(&dp, shape))
    }
}

impl Module for ImageClassifier {
    fn visit(&self, f: &mut dyn FnMut(&Param)) {
        self.backbone.visit(f);
        self.classifier.visit(f);
    }
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param)) {
        self.backbone.visit_mut(f);
        self.classifier.visit_mut(f);
    }
}
