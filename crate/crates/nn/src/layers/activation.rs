use std::collections::BTreeMap;
use std::sync::Arc;

use crate::NnError;

/// Elementwise nonlinearity.
pub trait Activation: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    fn apply(&self, x: f64) -> f64;
    /// `d apply / dx` at `x`.
    fn derivative(&self, x: f64) -> f64;
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Swish;

impl Activation for Swish {
    fn name(&self) -> &'static str {
        "swish"
    }
    fn apply(&self, x: f64) -> f64 {
        x * sigmoid(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        let s = sigmoid(x);
        s * (1.0 + x * (1.0 - s))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Relu;

impl Activation for Relu {
    fn name(&self) -> &'static str {
        "relu"
    }
    fn apply(&self, x: f64) -> f64 {
        x.max(0.0)
    }
    fn derivative(&self, x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sigmoid;

impl Activation for Sigmoid {
    fn name(&self) -> &'static str {
        "sigmoid"
    }
    fn apply(&self, x: f64) -> f64 {
        sigmoid(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        let s = sigmoid(x);
        s * (1.0 - s)
    }
}

/// Activations selectable by name from configuration.
#[derive(Debug, Clone)]
pub struct ActivationRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Activation>>,
}

impl Default for ActivationRegistry {
    fn default() -> Self {
        let mut r = Self {
            entries: BTreeMap::new(),
        };
        r.register(Arc::new(Swish));
        r.register(Arc::new(Relu));
        r.register(Arc::new(Sigmoid));
        r
    }
}

impl ActivationRegistry {
    pub fn register(&mut self, act: Arc<dyn Activation>) {
        self.entries.insert(act.name(), act);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Activation>, NnError> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| NnError::Unknown {
                kind: "activation",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

pub fn activation(name: &str) -> Result<Arc<dyn Activation>, NnError> {
    ActivationRegistry::default().get(name)
}

/// Activation layer over flat buffers; caches its input for the backward pass.
#[derive(Debug, Clone)]
pub struct Act {
    f: Arc<dyn Activation>,
    input: Option<Vec<f64>>,
}

impl Act {
    pub fn new(f: Arc<dyn Activation>) -> Self {
        Self { f, input: None }
    }

    pub fn by_name(name: &str) -> Result<Self, NnError> {
        Ok(Self::new(activation(name)?))
    }

    pub fn name(&self) -> &'static str {
        self.f.name()
    }

    pub fn forward(&mut self, x: &[f64]) -> Vec<f64> {
        self.input = Some(x.to_vec());
        x.iter().map(|&v| self.f.apply(v)).collect()
    }

    pub fn backward(&self, dy: &[f64]) -> Result<Vec<f64>, NnError> {
        let x = self.input.as_ref().ok_or(NnError::NoForward("activation"))?;
        if x.len() != dy.len() {
            return Err(NnError::shape(self.f.name(), vec![x.len()], vec![dy.len()]));
        }
        Ok(x.iter().zip(dy).map(|(&v, d)| d * self.f.derivative(v)).collect())
    }
}
