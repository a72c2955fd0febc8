use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A named weight tensor. The gradient buffer is allocated on first use so
/// that forward-only models do not pay for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub shape: Vec<usize>,
    pub value: Vec<f64>,
    grad: Vec<f64>,
    /// Running statistics are parameters too, but are never optimized.
    pub trainable: bool,
}

impl Param {
    pub fn new(name: impl Into<String>, shape: Vec<usize>, value: Vec<f64>, trainable: bool) -> Self {
        debug_assert_eq!(shape.iter().product::<usize>(), value.len());
        Self {
            name: name.into(),
            shape,
            value,
            grad: Vec::new(),
            trainable,
        }
    }

    pub fn filled(name: impl Into<String>, shape: Vec<usize>, v: f64, trainable: bool) -> Self {
        let n = shape.iter().product();
        Self::new(name, shape, vec![v; n], trainable)
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    /// Accumulated gradient; all zeros if nothing has been accumulated.
    pub fn grad(&self) -> std::borrow::Cow<'_, [f64]> {
        if self.grad.is_empty() {
            std::borrow::Cow::Owned(vec![0.0; self.value.len()])
        } else {
            std::borrow::Cow::Borrowed(&self.grad)
        }
    }

    pub fn grad_mut(&mut self) -> &mut [f64] {
        if self.grad.len() != self.value.len() {
            self.grad = vec![0.0; self.value.len()];
        }
        &mut self.grad
    }

    /// Value and gradient buffers borrowed together.
    pub fn value_and_grad(&mut self) -> (&[f64], &mut [f64]) {
        if self.grad.len() != self.value.len() {
            self.grad = vec![0.0; self.value.len()];
        }
        (&self.value, &mut self.grad)
    }

    pub fn zero_grad(&mut self) {
        self.grad.iter_mut().for_each(|g| *g = 0.0);
    }
}

/// Anything that owns parameters. Visiting order is fixed by construction
/// and is the order used for initialization, checkpoints and optimizers.
pub trait Module {
    fn visit(&self, f: &mut dyn FnMut(&Param));
    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut Param));

    fn param_counts(&self) -> (usize, usize) {
        let (mut t, mut n) = (0, 0);
        self.visit(&mut |p| {
            if p.trainable {
                t += p.len();
            } else {
                n += p.len();
            }
        });
        (t, n)
    }

    fn zero_grad(&mut self) {
        self.visit_mut(&mut |p| p.zero_grad());
    }

    fn param_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |p| out.push(p.name.clone()));
        out
    }
}

/// Seeded weight initializer.
pub struct Init {
    rng: ChaCha8Rng,
}

impl Init {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `n` draws from `U(-bound, bound)`.
    pub fn uniform(&mut self, n: usize, bound: f64) -> Vec<f64> {
        (0..n).map(|_| self.rng.random_range(-bound..=bound)).collect()
    }

    /// Fan-in scaled uniform, `bound = 1/sqrt(fan_in)`.
    pub fn fan_in(&mut self, n: usize, fan_in: usize) -> Vec<f64> {
        self.uniform(n, 1.0 / (fan_in.max(1) as f64).sqrt())
    }

    pub fn normal(&mut self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u1: f64 = 1.0 - self.rng.random::<f64>();
                let u2: f64 = self.rng.random();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
