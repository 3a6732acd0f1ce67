//! Finite probability distributions and the information measures of a single
//! random variable. All logarithms in this crate are base 2; every entropy
//! and information value is in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Space;

/// Probability-sum tolerance used by every validating constructor.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// A finite probability mass function over labeled outcomes.
///
/// Invariants (enforced on construction, never silently repaired):
/// every probability is >= 0 and the total is 1 within [`PROB_SUM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    space: Space,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validate `weights` as a probability vector over `labels`.
    ///
    /// Rejects rather than renormalizes, so input mistakes surface early.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        weights: impl Into<Vec<f64>>,
    ) -> Result<Self> {
        let space = Space::new(labels)?;
        Self::over(space, weights)
    }

    /// Same validation as [`Distribution::new`], over an existing space.
    pub fn over(space: Space, weights: impl Into<Vec<f64>>) -> Result<Self> {
        let probs = weights.into();
        if probs.len() != space.len() {
            return Err(Error::LengthMismatch {
                weights: probs.len(),
                labels: space.len(),
            });
        }
        for (index, &value) in probs.iter().enumerate() {
            if value < 0.0 || value.is_nan() {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::SumNotOne {
                sum,
                tolerance: PROB_SUM_TOL,
            });
        }
        Ok(Distribution { space, probs })
    }

    /// Uniform distribution over `space`.
    pub fn uniform(space: Space) -> Self {
        let n = space.len();
        Distribution {
            probs: vec![1.0 / n as f64; n],
            space,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn prob_of(&self, label: &str) -> Result<f64> {
        Ok(self.probs[self.space.index_of(label)?])
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `n`-fold IID product distribution on the product space.
    pub fn product(&self, n: usize) -> Distribution {
        let space = self.space.product(n);
        let mut probs = vec![1.0];
        for _ in 0..n {
            let mut next = Vec::with_capacity(probs.len() * self.len());
            for &p in &probs {
                for &q in &self.probs {
                    next.push(p * q);
                }
            }
            probs = next;
        }
        Distribution { space, probs }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DistributionJson =
            serde_json::from_str(text).map_err(|e| Error::space_mismatch(e.to_string()))?;
        Distribution::new(raw.labels, raw.probs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DistributionJson {
            labels: self.space.labels().to_vec(),
            probs: self.probs.clone(),
        })
        .expect("distribution serializes")
    }
}

/// Information content of an outcome with probability `p`: log2(1/p) bits.
pub fn self_information(p: f64) -> Result<f64> {
    if !(p > 0.0) || p > 1.0 {
        return Err(Error::NonPositiveProbability { p });
    }
    Ok(-p.log2())
}

/// One entropy term, with the 0 * log(1/0) = 0 convention.
#[inline]
pub(crate) fn entropy_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy: the probability-weighted average self-information, in bits.
pub fn entropy(d: &Distribution) -> f64 {
    entropy_of(d.probs())
}

/// Entropy of a bare probability vector (assumed valid), e.g. a marginal.
pub fn entropy_of(probs: &[f64]) -> f64 {
    probs.iter().copied().map(entropy_term).sum()
}

/// Entropy of a {p, 1-p} coin, in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_term(p) + entropy_term(1.0 - p)
}

/// Largest entropy attainable on a space of `n` outcomes: log2 n.
pub fn max_entropy(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroStates);
    }
    Ok((n as f64).log2())
}

/// Gap between the maximum entropy of the space and the actual entropy; >= 0.
pub fn redundancy(d: &Distribution) -> f64 {
    max_entropy(d.len()).expect("nonempty space") - entropy(d)
}

/// Discrete entropy of a sampled density: bins of width `delta` centered at
/// the given points, each carrying mass `density * delta`.
///
/// For a smooth density this equals the analytic differential entropy minus
/// log2(delta), so halving `delta` raises the value by one bit.
pub fn discretized_entropy(density: &[(f64, f64)], delta: f64) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    let mut mass = 0.0;
    for (i, &(_, value)) in density.iter().enumerate() {
        if value < 0.0 || value.is_nan() {
            return Err(Error::NegativeProbability { index: i, value });
        }
        mass += value * delta;
    }
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { mass });
    }
    Ok(density
        .iter()
        .map(|&(_, value)| entropy_term(value * delta))
        .sum())
}
