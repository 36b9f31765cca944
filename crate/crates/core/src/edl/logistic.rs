use serde::{Deserialize, Serialize};

use super::{TrainError, FEATURE_COUNT};

/// A feature row and its gold label.
pub type Sample = ([f64; FEATURE_COUNT], bool);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: [f64; FEATURE_COUNT],
    pub bias: f64,
}

impl Default for LogisticModel {
    fn default() -> Self {
        LogisticModel {
            weights: [0.0; FEATURE_COUNT],
            bias: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticHyper {
    pub learning_rate: f64,
    pub epochs: usize,
    /// L2 penalty on the weights (the bias is not penalized).
    pub l2: f64,
}

impl Default for LogisticHyper {
    fn default() -> Self {
        LogisticHyper {
            learning_rate: 0.5,
            epochs: 2000,
            l2: 1e-3,
        }
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

impl LogisticModel {
    pub fn logit(&self, x: &[f64; FEATURE_COUNT]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn predict(&self, x: &[f64; FEATURE_COUNT]) -> f64 {
        sigmoid(self.logit(x))
    }
}

/// Mean negative log likelihood plus `l2 / 2 * |w|^2`.
pub fn logistic_loss(model: &LogisticModel, batch: &[Sample], l2: f64) -> f64 {
    if batch.is_empty() {
        return 0.0;
    }
    let nll: f64 = batch
        .iter()
        .map(|(x, y)| {
            let z = model.logit(x);
            softplus(z) - if *y { z } else { 0.0 }
        })
        .sum::<f64>()
        / batch.len() as f64;
    let penalty: f64 = model.weights.iter().map(|w| w * w).sum::<f64>() * l2 / 2.0;
    nll + penalty
}

/// Analytic gradient of [`logistic_loss`]: `(d/dw, d/db)`.
pub fn logistic_gradient(model: &LogisticModel, batch: &[Sample], l2: f64) -> ([f64; FEATURE_COUNT], f64) {
    let mut gw = [0.0; FEATURE_COUNT];
    let mut gb = 0.0;
    if batch.is_empty() {
        return (gw, gb);
    }
    let n = batch.len() as f64;
    for (x, y) in batch {
        let r = model.predict(x) - if *y { 1.0 } else { 0.0 };
        for (g, v) in gw.iter_mut().zip(x) {
            *g += r * v / n;
        }
        gb += r / n;
    }
    for (g, w) in gw.iter_mut().zip(&model.weights) {
        *g += l2 * w;
    }
    (gw, gb)
}

/// Full-batch gradient descent from zero weights. Deterministic.
pub fn train_logistic(batch: &[Sample], hyper: &LogisticHyper) -> Result<LogisticModel, TrainError> {
    let positives = batch.iter().filter(|(_, y)| *y).count();
    if positives == 0 || positives == batch.len() {
        return Err(TrainError::DegenerateData);
    }
    let mut model = LogisticModel::default();
    for _ in 0..hyper.epochs {
        let (gw, gb) = logistic_gradient(&model, batch, hyper.l2);
        for (w, g) in model.weights.iter_mut().zip(gw) {
            *w -= hyper.learning_rate * g;
        }
        model.bias -= hyper.learning_rate * gb;
    }
    Ok(model)
}
