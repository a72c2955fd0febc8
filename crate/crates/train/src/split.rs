//! Per-class stratified train/validation/test split.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::TrainError;

/// Sample indices of each partition, ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Smallest class size that leaves at least one sample in every partition
/// at 60/20/20.
pub const MIN_PER_CLASS: usize = 5;

/// Shuffles each class with `seed` and cuts it at the cumulative fractions.
/// A class of `n` gives `round(n·f0)` train and `round(n·(f0+f1)) - round(n·f0)`
/// validation samples; the rest go to test.
pub fn stratified_split(labels: &[usize], fractions: [f64; 3], seed: u64) -> Result<Split, TrainError> {
    let sum: f64 = fractions.iter().sum();
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) || (sum - 1.0).abs() > 1e-9 {
        return Err(TrainError::InvalidConfig(format!("split fractions {fractions:?} must sum to 1")));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Split::default();
    for class in 0..classes {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.is_empty() {
            continue;
        }
        if idx.len() < MIN_PER_CLASS {
            return Err(TrainError::TooFewSamples {
                class,
                count: idx.len(),
                min: MIN_PER_CLASS,
            });
        }
        idx.shuffle(&mut rng);
        let n = idx.len() as f64;
        let a = (n * fractions[0]).round() as usize;
        let b = ((n * (fractions[0] + fractions[1])).round() as usize).max(a);
        out.train.extend_from_slice(&idx[..a]);
        out.val.extend_from_slice(&idx[a..b]);
        out.test.extend_from_slice(&idx[b..]);
    }
    out.train.sort_unstable();
    out.val.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}
