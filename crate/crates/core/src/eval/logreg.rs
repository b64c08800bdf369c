//! L2-regularized binary logistic regression.
//!
//! Minimizes `sum_i logloss_i + (l2 / 2) ||w||^2` (intercept unpenalized) by
//! full-batch gradient descent. The trial step comes from the
//! Barzilai-Borwein rule and is shrunk by Armijo backtracking, so every
//! accepted iterate decreases the objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sgns::{log_sigmoid, sigmoid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub l2: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            l2: 1.0,
            tolerance: 1e-6,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: LogRegConfig,
    /// Objective value after each accepted iterate, starting at the origin.
    pub loss_history: Vec<f64>,
    pub gradient_norm: f64,
    pub converged: bool,
}

impl LogRegModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.bias + x.iter().zip(&self.weights).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.decision(x))
    }
}

/// Row-major design matrix view.
#[derive(Debug, Clone, Copy)]
pub struct Features<'a> {
    pub data: &'a [f64],
    pub cols: usize,
}

impl<'a> Features<'a> {
    pub fn new(data: &'a [f64], cols: usize) -> Result<Self> {
        if cols == 0 || !data.len().is_multiple_of(cols) {
            return Err(Error::Invalid(
                "feature matrix shape is inconsistent".into(),
            ));
        }
        Ok(Features { data, cols })
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.cols
    }

    pub fn row(&self, i: usize) -> &'a [f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Objective at `(w, b)`.
pub fn objective(x: Features<'_>, y: &[bool], w: &[f64], b: f64, l2: f64) -> f64 {
    let data: f64 = (0..x.rows())
        .map(|i| {
            let m = b + dot(x.row(i), w);
            if y[i] {
                -log_sigmoid(m)
            } else {
                -log_sigmoid(-m)
            }
        })
        .sum();
    data + 0.5 * l2 * dot(w, w)
}

/// Gradient at `(w, b)`; the last entry is the intercept component.
pub fn gradient(x: Features<'_>, y: &[bool], w: &[f64], b: f64, l2: f64) -> Vec<f64> {
    let p = x.cols;
    let mut g = vec![0.0; p + 1];
    for (i, &yi) in y.iter().enumerate().take(x.rows()) {
        let row = x.row(i);
        let r = sigmoid(b + dot(row, w)) - if yi { 1.0 } else { 0.0 };
        for (gj, xj) in g[..p].iter_mut().zip(row) {
            *gj += r * xj;
        }
        g[p] += r;
    }
    for (gj, wj) in g[..p].iter_mut().zip(w) {
        *gj += l2 * wj;
    }
    g
}

pub fn fit_logreg(x: Features<'_>, y: &[bool], config: &LogRegConfig) -> Result<LogRegModel> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            actual: y.len(),
        });
    }
    if !y.iter().any(|&v| v) {
        return Err(Error::SingleClass {
            present: "negative",
        });
    }
    if y.iter().all(|&v| v) {
        return Err(Error::SingleClass {
            present: "positive",
        });
    }
    let p = x.cols;
    let l2 = config.l2;
    // theta = (w, b)
    let mut theta = vec![0.0; p + 1];
    let f = |t: &[f64]| objective(x, y, &t[..p], t[p], l2);
    let grad = |t: &[f64]| gradient(x, y, &t[..p], t[p], l2);

    let mut loss = f(&theta);
    let mut g = grad(&theta);
    let mut history = vec![loss];
    let mut step = 1.0 / (x.rows() as f64 + l2);
    let mut converged = norm(&g) < config.tolerance;

    let mut trial = vec![0.0; p + 1];
    for _ in 0..config.max_iter {
        if converged {
            break;
        }
        let gg = dot(&g, &g);
        let mut accepted = false;
        for _ in 0..60 {
            for ((t, th), gi) in trial.iter_mut().zip(&theta).zip(&g) {
                *t = th - step * gi;
            }
            let candidate = f(&trial);
            if candidate <= loss - 1e-4 * step * gg {
                accepted = true;
                let g_new = grad(&trial);
                // Barzilai-Borwein step for the next iteration.
                let s: Vec<f64> = trial.iter().zip(&theta).map(|(a, b)| a - b).collect();
                let yv: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &yv);
                let yy = dot(&yv, &yv);
                if sy > 0.0 && yy > 0.0 {
                    step = sy / yy;
                }
                std::mem::swap(&mut theta, &mut trial);
                g = g_new;
                loss = candidate;
                history.push(loss);
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No representable decrease along the gradient: stationary to
            // machine precision.
            break;
        }
        converged = norm(&g) < config.tolerance;
    }

    let gradient_norm = norm(&g);
    let bias = theta.pop().unwrap();
    Ok(LogRegModel {
        weights: theta,
        bias,
        config: *config,
        loss_history: history,
        gradient_norm,
        converged,
    })
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
