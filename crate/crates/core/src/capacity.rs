//! Channel capacity and the optimal input distribution via projected
//! gradient ascent on the probability simplex.
//!
//! Mutual information is concave in the input probabilities, so ascent with
//! projection finds the global maximum. The update is
//! `p <- proj(p + step * grad I)`; a trial step that would lower MI is
//! rejected and the working step halved, and accepted steps grow back toward
//! the configured learning rate, so accepted iterates never descend.

use serde::Serialize;

use crate::channel::{conditional_entropy, joint_distribution, Channel, Direction};
use crate::dist::{entropy_of, Distribution};
use crate::error::{Error, Result};

/// Smallest output mass used when forming divergences; keeps gradients finite
/// at the simplex boundary where unused outputs have zero probability.
const OUTPUT_FLOOR: f64 = 1e-300;

/// How the ascent iterate is returned to the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projection {
    /// Exact nearest point on the simplex in Euclidean norm (sort-based).
    #[default]
    Euclidean,
    /// Clamp negatives to zero, then shift uniformly so the total is 1,
    /// repeated to a fixed point. One clamp-and-shift pass can leave negative
    /// entries, so the pass is iterated; the negative part shrinks
    /// geometrically.
    ClampShift,
}

#[derive(Debug, Clone, Copy)]
pub struct AscentConfig {
    /// Gradient step in probability per (bit per unit probability).
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Stop once the accepted MI improvement falls below this, in bits.
    pub tolerance: f64,
    pub projection: Projection,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            learning_rate: 0.05,
            max_iterations: 100_000,
            tolerance: 1e-9,
            projection: Projection::Euclidean,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityResult {
    pub capacity_bits: f64,
    #[serde(skip)]
    pub optimal_input: Distribution,
    pub iterations: usize,
    /// Norm of the projected gradient mapping ||proj(p + lr g) - p|| / lr at
    /// the final iterate; near zero at a constrained stationary point.
    pub final_gradient_norm: f64,
    pub converged: bool,
}

/// One row of the optimization trace (`--trace` CSV).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub mi_bits: f64,
    pub grad_norm: f64,
}

/// Mutual information of `ch` driven by the bare probability vector `probs`.
pub(crate) fn mi_of(ch: &Channel, probs: &[f64]) -> f64 {
    let m = ch.matrix();
    let q = output_probs(ch, probs);
    let mut mi = 0.0;
    for (j, &pj) in probs.iter().enumerate() {
        if pj <= 0.0 {
            continue;
        }
        for (i, row) in m.iter().enumerate() {
            let c = row[j];
            if c > 0.0 {
                mi += pj * c * (c / q[i]).log2();
            }
        }
    }
    mi
}

fn output_probs(ch: &Channel, probs: &[f64]) -> Vec<f64> {
    ch.matrix()
        .iter()
        .map(|row| {
            let mut acc = 0.0;
            for (j, &c) in row.iter().enumerate() {
                acc += c * probs[j];
            }
            acc
        })
        .collect()
}

/// Relative entropy D(p(.|x_j) || p_Y) in bits for every input, at input
/// distribution `px`. Infinite when an input reaches outputs that currently
/// have zero probability.
pub fn input_divergences(ch: &Channel, px: &Distribution) -> Result<Vec<f64>> {
    if ch.input_space() != px.space() {
        return Err(Error::space_mismatch(
            "input distribution is not on the channel's input space",
        ));
    }
    Ok(divergences(ch, px.probs()))
}

fn divergences(ch: &Channel, probs: &[f64]) -> Vec<f64> {
    let m = ch.matrix();
    let q = output_probs(ch, probs);
    (0..probs.len())
        .map(|j| {
            let mut d = 0.0;
            for (i, row) in m.iter().enumerate() {
                let c = row[j];
                if c > 0.0 {
                    d += c * (c / q[i].max(OUTPUT_FLOOR)).log2();
                }
            }
            d
        })
        .collect()
}

/// Gradient of I(X;Y) with respect to the input probabilities, in bits per
/// unit probability: component j is D(p(.|x_j) || p_Y) - log2 e.
pub fn mi_gradient(ch: &Channel, px: &Distribution) -> Result<Vec<f64>> {
    Ok(input_divergences(ch, px)?
        .into_iter()
        .map(|d| d - std::f64::consts::LOG2_E)
        .collect())
}

fn gradient(ch: &Channel, probs: &[f64]) -> Vec<f64> {
    divergences(ch, probs)
        .into_iter()
        .map(|d| d - std::f64::consts::LOG2_E)
        .collect()
}

/// Project an arbitrary real vector onto the probability simplex.
pub fn project_simplex(v: &[f64], method: Projection) -> Vec<f64> {
    assert!(!v.is_empty(), "cannot project an empty vector");
    match method {
        Projection::Euclidean => project_euclidean(v),
        Projection::ClampShift => project_clamp_shift(v),
    }
}

fn project_euclidean(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    let mut support = 0usize;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
            support = i + 1;
        }
    }
    if support == 0 {
        // Only reachable through degenerate float input; fall back to the
        // vertex nearest the largest coordinate.
        let argmax = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite values"))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut out = vec![0.0; v.len()];
        out[argmax] = 1.0;
        return out;
    }
    v.iter().map(|&u| (u - theta).max(0.0)).collect()
}

fn project_clamp_shift(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mut w = v.to_vec();
    for _ in 0..20_000 {
        for x in &mut w {
            *x = x.max(0.0);
        }
        let sum: f64 = w.iter().sum();
        let shift = (1.0 - sum) / n;
        for x in &mut w {
            *x += shift;
        }
        if w.iter().all(|&x| x >= -1e-15) {
            break;
        }
    }
    for x in &mut w {
        *x = x.max(0.0);
    }
    let sum: f64 = w.iter().sum();
    for x in &mut w {
        *x /= sum;
    }
    w
}

/// Channel capacity and maximizing input distribution.
pub fn channel_capacity(ch: &Channel, cfg: &AscentConfig) -> Result<CapacityResult> {
    Ok(channel_capacity_traced(ch, cfg, false)?.0)
}

/// As [`channel_capacity`], optionally recording one trace row per accepted
/// iteration.
pub fn channel_capacity_traced(
    ch: &Channel,
    cfg: &AscentConfig,
    record: bool,
) -> Result<(CapacityResult, Vec<TracePoint>)> {
    assert!(cfg.learning_rate > 0.0 && cfg.tolerance > 0.0);
    let k = ch.input_space().len();
    let mut probs = vec![1.0 / k as f64; k];
    let mut mi = mi_of(ch, &probs);
    let mut step = cfg.learning_rate;
    let mut converged = false;
    let mut iterations = 0usize;
    let mut trace = Vec::new();

    let grad_norm_at = |p: &[f64], g: &[f64]| {
        let moved: Vec<f64> = p
            .iter()
            .zip(g.iter())
            .map(|(&pi, &gi)| pi + cfg.learning_rate * gi)
            .collect();
        let proj = project_simplex(&moved, cfg.projection);
        proj.iter()
            .zip(p.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            / cfg.learning_rate
    };

    let mut g = gradient(ch, &probs);
    if record {
        trace.push(TracePoint {
            iteration: 0,
            mi_bits: mi,
            grad_norm: grad_norm_at(&probs, &g),
        });
    }
    while iterations < cfg.max_iterations {
        let moved: Vec<f64> = probs
            .iter()
            .zip(g.iter())
            .map(|(&pi, &gi)| pi + step * gi)
            .collect();
        let candidate = project_simplex(&moved, cfg.projection);
        let candidate_mi = mi_of(ch, &candidate);
        if candidate_mi >= mi - 1e-15 {
            let improvement = candidate_mi - mi;
            probs = candidate;
            mi = candidate_mi;
            iterations += 1;
            g = gradient(ch, &probs);
            if record {
                trace.push(TracePoint {
                    iteration: iterations,
                    mi_bits: mi,
                    grad_norm: grad_norm_at(&probs, &g),
                });
            }
            step = (step * 2.0).min(cfg.learning_rate);
            if improvement < cfg.tolerance {
                converged = true;
                break;
            }
        } else {
            step *= 0.5;
            if step < 1e-18 {
                converged = true;
                break;
            }
        }
    }

    let final_gradient_norm = grad_norm_at(&probs, &g);
    let optimal_input = Distribution::over(ch.input_space().clone(), normalize(probs))?;
    Ok((
        CapacityResult {
            capacity_bits: mi,
            optimal_input,
            iterations,
            final_gradient_norm,
            converged,
        },
        trace,
    ))
}

fn normalize(mut probs: Vec<f64>) -> Vec<f64> {
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    probs
}

/// The two competing terms of the throughput objective at a given input.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MiDecomposition {
    pub mi_bits: f64,
    pub h_y_bits: f64,
    pub h_y_given_x_bits: f64,
}

/// I(X;Y) = H(Y) - H(Y|X) evaluated term by term.
pub fn decomposition_report(ch: &Channel, px: &Distribution) -> Result<MiDecomposition> {
    let joint = joint_distribution(ch, px)?;
    let h_y_bits = entropy_of(&joint.marginal_y());
    let h_y_given_x_bits = conditional_entropy(&joint, Direction::YGivenX);
    Ok(MiDecomposition {
        mi_bits: h_y_bits - h_y_given_x_bits,
        h_y_bits,
        h_y_given_x_bits,
    })
}
