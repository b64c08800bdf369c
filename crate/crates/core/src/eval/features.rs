use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary operator combining two node vectors into an edge vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeFeatureOp {
    /// `(u_i + v_i) / 2`
    Average,
    /// `u_i * v_i`
    Hadamard,
    /// `|u_i - v_i|`
    WeightedL1,
    /// `|u_i - v_i|^2`
    WeightedL2,
}

impl EdgeFeatureOp {
    pub const ALL: [EdgeFeatureOp; 4] = [
        EdgeFeatureOp::Hadamard,
        EdgeFeatureOp::Average,
        EdgeFeatureOp::WeightedL1,
        EdgeFeatureOp::WeightedL2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EdgeFeatureOp::Average => "average",
            EdgeFeatureOp::Hadamard => "hadamard",
            EdgeFeatureOp::WeightedL1 => "weighted-l1",
            EdgeFeatureOp::WeightedL2 => "weighted-l2",
        }
    }

    #[inline]
    pub fn combine(&self, a: f64, b: f64) -> f64 {
        match self {
            EdgeFeatureOp::Average => 0.5 * (a + b),
            EdgeFeatureOp::Hadamard => a * b,
            EdgeFeatureOp::WeightedL1 => (a - b).abs(),
            EdgeFeatureOp::WeightedL2 => (a - b) * (a - b),
        }
    }

    pub(crate) fn extend(&self, u: &[f64], v: &[f64], out: &mut Vec<f64>) {
        out.extend(u.iter().zip(v).map(|(&a, &b)| self.combine(a, b)));
    }
}

impl fmt::Display for EdgeFeatureOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeFeatureOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeFeatureOp::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown edge operator `{s}`")))
    }
}

pub fn edge_feature(op: EdgeFeatureOp, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    let mut out = Vec::with_capacity(u.len());
    op.extend(u, v, &mut out);
    Ok(out)
}
