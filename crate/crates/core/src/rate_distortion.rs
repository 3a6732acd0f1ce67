//! Rate-distortion computation for discrete sources: the minimum information
//! rate achieving a given average distortion, traced out by slope-
//! parameterized alternating minimization.
//!
//! For a slope s < 0 (bits per unit distortion) the alternation fixes the
//! kernel A = 2^(s d(x, xhat)) and repeats
//!   q(xhat|x) <- r(xhat) A / sum_xhat' r(xhat') A
//!   r(xhat)   <- sum_x p(x) q(xhat|x)
//! until rate and distortion both move less than the tolerance; the
//! converged (D, R) pair lies on the curve where the tangent has slope s.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::Channel;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::space::Space;

pub const CONVERGENCE_TOL: f64 = 1e-9;
pub const MAX_ALTERNATIONS: usize = 200_000;
/// Reconstruction symbols whose marginal falls below this are pruned and the
/// alternation restarted once; the alternation can otherwise park vanishing
/// mass on unused symbols at low distortion.
const SUPPORT_FLOOR: f64 = 1e-12;

/// Pairwise distortion d(x, xhat) >= 0, finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix {
    source: Space,
    reconstruction: Space,
    /// rows[i][j] = d(source i, reconstruction j)
    rows: Vec<Vec<f64>>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct DistortionJson {
    sources: Vec<String>,
    reconstructions: Vec<String>,
    /// Row-major, rows = sources, columns = reconstructions.
    matrix: Vec<Vec<f64>>,
}

impl DistortionMatrix {
    pub fn new(source: Space, reconstruction: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != source.len() || rows.iter().any(|r| r.len() != reconstruction.len()) {
            return Err(Error::BadShape);
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        column: j,
                        value,
                    });
                }
            }
        }
        Ok(DistortionMatrix {
            source,
            reconstruction,
            rows,
        })
    }

    /// 0/1 distortion on a shared alphabet: wrong symbol costs 1.
    pub fn hamming(space: Space) -> Self {
        let n = space.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        DistortionMatrix {
            source: space.clone(),
            reconstruction: space,
            rows,
        }
    }

    pub fn source_space(&self) -> &Space {
        &self.source
    }

    pub fn reconstruction_space(&self) -> &Space {
        &self.reconstruction
    }

    pub fn value(&self, source: usize, reconstruction: usize) -> f64 {
        self.rows[source][reconstruction]
    }

    /// Distortion of the best constant reconstruction, min over xhat of
    /// E[d(X, xhat)]; the point where the curve reaches rate zero.
    pub fn zero_rate_distortion(&self, source: &Distribution) -> Result<f64> {
        if source.space() != &self.source {
            return Err(Error::space_mismatch(
                "source distribution is not on the distortion matrix's source space",
            ));
        }
        Ok((0..self.reconstruction.len())
            .map(|j| {
                source
                    .probs()
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| p * self.rows[i][j])
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DistortionJson =
            serde_json::from_str(text).map_err(|e| Error::space_mismatch(e.to_string()))?;
        DistortionMatrix::new(
            Space::new(raw.sources)?,
            Space::new(raw.reconstructions)?,
            raw.matrix,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DistortionJson {
            sources: self.source.labels().to_vec(),
            reconstructions: self.reconstruction.labels().to_vec(),
            matrix: self.rows.clone(),
        })
        .expect("distortion matrix serializes")
    }
}

/// Average distortion E[d(X, Xhat)] of a joint source/reconstruction law.
/// Joint orientation: x = source, y = reconstruction.
pub fn average_distortion(
    joint: &crate::channel::JointDistribution,
    d: &DistortionMatrix,
) -> Result<f64> {
    if joint.x_space() != &d.source || joint.y_space() != &d.reconstruction {
        return Err(Error::space_mismatch(
            "joint distribution spaces differ from the distortion matrix spaces",
        ));
    }
    let mut total = 0.0;
    for (y, row) in joint.matrix().iter().enumerate() {
        for (x, &p) in row.iter().enumerate() {
            total += p * d.rows[x][y];
        }
    }
    Ok(total)
}

/// One point on the rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RDPoint {
    pub rate_bits: f64,
    pub distortion: f64,
    /// Tangent slope this point was solved at, bits per distortion unit.
    pub slope: f64,
}

/// A solved tangent point plus the test channel that achieves it.
#[derive(Debug, Clone)]
pub struct RDSolve {
    pub point: RDPoint,
    /// q(xhat | x): columns are source symbols.
    pub encoder: Channel,
    pub iterations: usize,
    pub converged: bool,
}

/// Solve for the rate-distortion tangent point at `slope` < 0.
pub fn rd_point(source: &Distribution, d: &DistortionMatrix, slope: f64) -> Result<RDSolve> {
    if !(slope < 0.0) {
        return Err(Error::OutOfRange {
            name: "slope",
            value: slope,
            min: f64::NEG_INFINITY,
            max: -f64::MIN_POSITIVE,
        });
    }
    if source.space() != &d.source {
        return Err(Error::space_mismatch(
            "source distribution is not on the distortion matrix's source space",
        ));
    }
    let mut active: Vec<usize> = (0..d.reconstruction.len()).collect();
    let mut solve = alternate(source, d, slope, &active)?;
    // Prune starved reconstruction symbols once and re-run. Starvation shows
    // either as marginal mass already below the floor or as an update
    // multiplier pinned under 1 (each alternation scales r_j by the
    // multiplier, so persistently sub-unit symbols vanish in the limit, just
    // too slowly for the tolerance stop at gentle slopes).
    let starved: Vec<usize> = (0..active.len())
        .filter(|&pos| {
            solve.marginal[pos] < SUPPORT_FLOOR || solve.multiplier[pos] < 1.0 - 1e-9
        })
        .map(|pos| active[pos])
        .collect();
    if !starved.is_empty() && starved.len() < active.len() {
        active.retain(|j| !starved.contains(j));
        solve = alternate(source, d, slope, &active)?;
    }

    let k = d.reconstruction.len();
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            (0..source.len())
                .map(|i| {
                    active
                        .iter()
                        .position(|&a| a == j)
                        .map(|pos| solve.conditional[i][pos])
                        .unwrap_or(0.0)
                })
                .collect()
        })
        .collect();
    let encoder = Channel::over(d.source.clone(), d.reconstruction.clone(), rows)?;
    Ok(RDSolve {
        point: RDPoint {
            rate_bits: solve.rate,
            distortion: solve.distortion,
            slope,
        },
        encoder,
        iterations: solve.iterations,
        converged: solve.converged,
    })
}

struct Alternation {
    /// conditional[i][pos] = q(active[pos] | x_i)
    conditional: Vec<Vec<f64>>,
    marginal: Vec<f64>,
    /// Final per-symbol update factor r'_j / r_j; 1 on the limit support.
    multiplier: Vec<f64>,
    rate: f64,
    distortion: f64,
    iterations: usize,
    converged: bool,
}

fn alternate(
    source: &Distribution,
    d: &DistortionMatrix,
    slope: f64,
    active: &[usize],
) -> Result<Alternation> {
    let n = source.len();
    let m = active.len();
    let kernel: Vec<Vec<f64>> = (0..n)
        .map(|i| active.iter().map(|&j| (slope * d.rows[i][j]).exp2()).collect())
        .collect();
    let mut marginal = vec![1.0 / m as f64; m];
    let mut conditional = vec![vec![0.0; m]; n];
    let mut multiplier = vec![1.0; m];
    let mut rate = f64::INFINITY;
    let mut distortion = f64::INFINITY;
    let mut iterations = 0usize;
    let mut converged = false;

    while iterations < MAX_ALTERNATIONS {
        iterations += 1;
        for i in 0..n {
            let denom: f64 = (0..m).map(|j| marginal[j] * kernel[i][j]).sum();
            for j in 0..m {
                conditional[i][j] = if denom > 0.0 {
                    marginal[j] * kernel[i][j] / denom
                } else {
                    1.0 / m as f64
                };
            }
        }
        for j in 0..m {
            let updated: f64 = (0..n).map(|i| source.prob(i) * conditional[i][j]).sum();
            multiplier[j] = if marginal[j] > 0.0 {
                updated / marginal[j]
            } else {
                0.0
            };
            marginal[j] = updated;
        }
        let mut new_rate = 0.0;
        let mut new_distortion = 0.0;
        for i in 0..n {
            let p = source.prob(i);
            if p <= 0.0 {
                continue;
            }
            for j in 0..m {
                let q = conditional[i][j];
                if q > 0.0 {
                    new_rate += p * q * (q / marginal[j]).log2();
                    new_distortion += p * q * d.rows[i][active[j]];
                }
            }
        }
        let moved = (new_rate - rate).abs().max((new_distortion - distortion).abs());
        rate = new_rate;
        distortion = new_distortion;
        if moved < CONVERGENCE_TOL {
            converged = true;
            break;
        }
    }
    Ok(Alternation {
        conditional,
        marginal,
        multiplier,
        rate: rate.max(0.0),
        distortion,
        iterations,
        converged,
    })
}

/// Sweep `n_points` log-spaced slopes and return the curve sorted by
/// distortion. The slope grid spans |s| in [1e-6, 50], so the emitted
/// endpoints land at (D_max, 0) and (0, H) to within 1e-6.
pub fn rd_curve(
    source: &Distribution,
    d: &DistortionMatrix,
    n_points: usize,
) -> Result<Vec<RDPoint>> {
    if n_points < 2 {
        return Err(Error::OutOfRange {
            name: "n_points",
            value: n_points as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let (lo, hi) = (1e-6f64, 50.0f64);
    let slopes: Vec<f64> = (0..n_points)
        .map(|i| {
            let t = i as f64 / (n_points - 1) as f64;
            -(lo.ln() + t * (hi.ln() - lo.ln())).exp()
        })
        .collect();
    let mut points: Vec<RDPoint> = slopes
        .par_iter()
        .map(|&s| rd_point(source, d, s).map(|r| r.point))
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| {
        a.distortion
            .partial_cmp(&b.distortion)
            .unwrap()
            .then(a.slope.partial_cmp(&b.slope).unwrap())
    });
    Ok(points)
}
