//! Channel matrices, joint distributions, and the two-variable information
//! measures, plus channel composition and N-fold extension.
//!
//! Matrix orientation follows one fixed convention everywhere: columns are
//! inputs. A channel matrix is |Y| x |X| with entry (i, j) = p(y_i | x_j),
//! each column summing to 1; a joint matrix is |Y| x |X| with entry
//! (i, j) = p(x_j, y_i), all entries together summing to 1.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comb::{compositions, log2_biguint, multinomial};
use crate::dist::{entropy_of, entropy_term, Distribution, PROB_SUM_TOL};
use crate::error::{Error, Result};
use crate::hist::Histogram;
use crate::space::{unrank_tuple, Space};

/// Default cap on dense extended-channel matrices (total entries).
pub const EXTEND_ENTRY_CAP: u128 = 1 << 20;
/// Largest extended input count for which the spectrum lists every input.
pub const SPECTRUM_EXPLICIT_CAP: u128 = 1 << 16;
/// Cap on composition classes in spectrum enumeration.
pub const SPECTRUM_CLASS_CAP: u128 = 10_000_000;
/// Default spectrum histogram resolution.
pub const SPECTRUM_BINS: usize = 64;

/// A discrete memoryless channel: column-stochastic matrix p(y | x).
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input: Space,
    output: Space,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    inputs: Vec<String>,
    outputs: Vec<String>,
    /// Row-major, rows = outputs, columns = inputs.
    matrix: Vec<Vec<f64>>,
}

impl Channel {
    /// Validate a row-major matrix (rows = outputs) as a channel.
    pub fn new<S: Into<String>>(
        input_labels: impl IntoIterator<Item = S>,
        output_labels: impl IntoIterator<Item = S>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let input = Space::new(input_labels)?;
        let output = Space::new(output_labels)?;
        Self::over(input, output, rows)
    }

    pub fn over(input: Space, output: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != output.len() || rows.iter().any(|r| r.len() != input.len()) {
            return Err(Error::BadShape);
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if value < 0.0 || value.is_nan() {
                    return Err(Error::NegativeEntry {
                        row: i,
                        column: j,
                        value,
                    });
                }
            }
        }
        for j in 0..input.len() {
            let sum: f64 = rows.iter().map(|r| r[j]).sum();
            if (sum - 1.0).abs() > PROB_SUM_TOL {
                return Err(Error::ColumnSumNotOne { column: j, sum });
            }
        }
        Ok(Channel {
            input,
            output,
            rows,
        })
    }

    /// Noiseless one-to-one channel on `space`.
    pub fn identity(space: Space) -> Self {
        let n = space.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Channel {
            input: space.clone(),
            output: space,
            rows,
        }
    }

    pub fn input_space(&self) -> &Space {
        &self.input
    }

    pub fn output_space(&self) -> &Space {
        &self.output
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// p(y_row | x_column)
    pub fn prob(&self, row: usize, column: usize) -> f64 {
        self.rows[row][column]
    }

    /// Conditional distribution p(y | x_j) as a vector over outputs.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Noise entropy H(Y | x_j) of one input, in bits.
    pub fn column_entropy(&self, j: usize) -> f64 {
        self.rows.iter().map(|r| entropy_term(r[j])).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ChannelJson =
            serde_json::from_str(text).map_err(|e| Error::space_mismatch(e.to_string()))?;
        Channel::new(raw.inputs, raw.outputs, raw.matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChannelJson {
            inputs: self.input.labels().to_vec(),
            outputs: self.output.labels().to_vec(),
            matrix: self.rows.clone(),
        })
        .expect("channel serializes")
    }
}

/// A joint distribution p(x, y) over two labeled spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    x_space: Space,
    y_space: Space,
    /// rows[i][j] = p(x_j, y_i)
    rows: Vec<Vec<f64>>,
}

impl JointDistribution {
    pub fn new(x_space: Space, y_space: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != y_space.len() || rows.iter().any(|r| r.len() != x_space.len()) {
            return Err(Error::BadShape);
        }
        let mut sum = 0.0;
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if value < 0.0 || value.is_nan() {
                    return Err(Error::NegativeEntry {
                        row: i,
                        column: j,
                        value,
                    });
                }
                sum += value;
            }
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::SumNotOne {
                sum,
                tolerance: PROB_SUM_TOL,
            });
        }
        Ok(JointDistribution {
            x_space,
            y_space,
            rows,
        })
    }

    /// Independent joint p(x, y) = p(x) p(y).
    pub fn independent(px: &Distribution, py: &Distribution) -> Self {
        let rows = py
            .probs()
            .iter()
            .map(|&qy| px.probs().iter().map(|&qx| qx * qy).collect())
            .collect();
        JointDistribution {
            x_space: px.space().clone(),
            y_space: py.space().clone(),
            rows,
        }
    }

    pub fn x_space(&self) -> &Space {
        &self.x_space
    }

    pub fn y_space(&self) -> &Space {
        &self.y_space
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[y][x]
    }

    /// Marginal over y, leaving p(x); summation order matches
    /// [`output_distribution`] so the two agree bit for bit.
    pub fn marginal_x(&self) -> Vec<f64> {
        let mut px = vec![0.0; self.x_space.len()];
        for row in &self.rows {
            for (j, &value) in row.iter().enumerate() {
                px[j] += value;
            }
        }
        px
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = 0.0;
                for &value in row {
                    acc += value;
                }
                acc
            })
            .collect()
    }
}

/// Output distribution p_Y = P_{Y|X} p_X.
pub fn output_distribution(ch: &Channel, px: &Distribution) -> Result<Distribution> {
    check_input_space(ch, px)?;
    let probs: Vec<f64> = ch
        .rows
        .iter()
        .map(|row| {
            let mut acc = 0.0;
            for (j, &q) in row.iter().enumerate() {
                acc += q * px.prob(j);
            }
            acc
        })
        .collect();
    Distribution::over(ch.output.clone(), probs)
}

/// Joint distribution P_{X,Y} = P_{Y|X} diag(p_X).
pub fn joint_distribution(ch: &Channel, px: &Distribution) -> Result<JointDistribution> {
    check_input_space(ch, px)?;
    let rows = ch
        .rows
        .iter()
        .map(|row| row.iter().enumerate().map(|(j, &q)| q * px.prob(j)).collect())
        .collect();
    Ok(JointDistribution {
        x_space: ch.input.clone(),
        y_space: ch.output.clone(),
        rows,
    })
}

fn check_input_space(ch: &Channel, px: &Distribution) -> Result<()> {
    if ch.input != *px.space() {
        return Err(Error::space_mismatch(
            "input distribution is not defined on the channel's input space",
        ));
    }
    Ok(())
}

/// Average information shared between the two variables of a joint, in bits.
///
/// I(X;Y) = sum p(x,y) log2[p(x,y) / (p(x) p(y))], zero-probability terms
/// contributing zero.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    let px = joint.marginal_x();
    let py = joint.marginal_y();
    let mut mi = 0.0;
    for (i, row) in joint.rows.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (px[j] * py[i])).log2();
            }
        }
    }
    mi
}

/// Which conditional entropy to take from a joint distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    XGivenY,
    YGivenX,
}

/// H(X|Y) or H(Y|X) in bits: sum p(x,y) log2[1 / p(x|y)] (or transposed).
pub fn conditional_entropy(joint: &JointDistribution, direction: Direction) -> f64 {
    let mut h = 0.0;
    match direction {
        Direction::XGivenY => {
            let py = joint.marginal_y();
            for (i, row) in joint.rows.iter().enumerate() {
                for &p in row {
                    if p > 0.0 {
                        h += p * (py[i] / p).log2();
                    }
                }
            }
        }
        Direction::YGivenX => {
            let px = joint.marginal_x();
            for row in &joint.rows {
                for (j, &p) in row.iter().enumerate() {
                    if p > 0.0 {
                        h += p * (px[j] / p).log2();
                    }
                }
            }
        }
    }
    h
}

/// Uncertainty of the pair as a whole: H(X,Y) = sum p(x,y) log2[1/p(x,y)].
pub fn joint_entropy(joint: &JointDistribution) -> f64 {
    joint
        .rows
        .iter()
        .flat_map(|row| row.iter().copied())
        .map(entropy_term)
        .sum()
}

/// Point-wise quantities for one (x, y) outcome pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseQuantities {
    /// log2[p(x,y) / (p(x)p(y))]; negative infinity when p(x,y) = 0.
    pub pmi_bits: f64,
    /// Entropy of the slice p(x | y), in bits.
    pub h_x_given_y_bits: f64,
    /// Entropy of the slice p(y | x), in bits.
    pub h_y_given_x_bits: f64,
}

/// Point-wise mutual information and conditional-slice entropies for the
/// outcome pair named by `x_label`, `y_label`.
pub fn pointwise_quantities(
    joint: &JointDistribution,
    x_label: &str,
    y_label: &str,
) -> Result<PointwiseQuantities> {
    let xi = joint.x_space.index_of(x_label)?;
    let yi = joint.y_space.index_of(y_label)?;
    let px = joint.marginal_x();
    let py = joint.marginal_y();
    if px[xi] <= 0.0 {
        return Err(Error::ZeroMarginal {
            label: x_label.to_string(),
        });
    }
    if py[yi] <= 0.0 {
        return Err(Error::ZeroMarginal {
            label: y_label.to_string(),
        });
    }
    let p = joint.rows[yi][xi];
    let pmi_bits = if p > 0.0 {
        (p / (px[xi] * py[yi])).log2()
    } else {
        f64::NEG_INFINITY
    };
    let x_slice: Vec<f64> = joint.rows[yi].iter().map(|&v| v / py[yi]).collect();
    let y_slice: Vec<f64> = joint.rows.iter().map(|row| row[xi] / px[xi]).collect();
    Ok(PointwiseQuantities {
        pmi_bits,
        h_x_given_y_bits: entropy_of(&x_slice),
        h_y_given_x_bits: entropy_of(&y_slice),
    })
}

/// Chain two channels A -> B into one channel: matrix product b * a.
pub fn compose_channels(a: &Channel, b: &Channel) -> Result<Channel> {
    if a.output != b.input {
        return Err(Error::space_mismatch(
            "first channel's output space differs from second channel's input space",
        ));
    }
    let rows: Vec<Vec<f64>> = (0..b.output.len())
        .map(|i| {
            (0..a.input.len())
                .map(|j| {
                    let mut acc = 0.0;
                    for k in 0..a.output.len() {
                        acc += b.rows[i][k] * a.rows[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Channel::over(a.input.clone(), b.output.clone(), rows)
}

/// Treat `n` uses of a channel as a single channel on tuple spaces.
/// The dense matrix is the n-fold Kronecker power; refuses to materialize
/// more than [`EXTEND_ENTRY_CAP`] entries.
pub fn extend_channel(ch: &Channel, n: usize) -> Result<Channel> {
    assert!(n >= 1, "extension needs n >= 1");
    let inputs = (ch.input.len() as u128).pow(n as u32);
    let outputs = (ch.output.len() as u128).pow(n as u32);
    let need = inputs.saturating_mul(outputs);
    if need > EXTEND_ENTRY_CAP {
        return Err(Error::SizeCapExceeded {
            need,
            cap: EXTEND_ENTRY_CAP,
            context: format!("dense {n}-fold channel extension"),
        });
    }
    if n == 1 {
        return Ok(ch.clone());
    }
    let in_space = ch.input.product(n);
    let out_space = ch.output.product(n);
    let k_in = ch.input.len();
    let k_out = ch.output.len();
    let rows: Vec<Vec<f64>> = (0..out_space.len())
        .map(|i| {
            let oy = unrank_tuple(i, k_out, n);
            (0..in_space.len())
                .map(|j| {
                    let ox = unrank_tuple(j, k_in, n);
                    oy.iter()
                        .zip(ox.iter())
                        .map(|(&y, &x)| ch.rows[y][x])
                        .product()
                })
                .collect()
        })
        .collect();
    Channel::over(in_space, out_space, rows)
}

/// One composition class of extended inputs: every input whose per-use symbol
/// counts equal `counts` has the same per-symbol noise entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumClass {
    /// How many times each base input occurs in the tuple.
    pub counts: Vec<usize>,
    /// Exact number of extended inputs in this class.
    pub multiplicity: BigUint,
    /// H(Y|x) / n for any input in the class, in bits.
    pub entropy_per_symbol_bits: f64,
    /// Probability of landing in this class under a uniform input.
    pub uniform_mass: f64,
}

/// Distribution of per-input noise across the inputs of an extended channel.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySpectrum {
    pub block_length: usize,
    /// Explicit (input label, H(Y|x)/n) pairs; populated only while the
    /// extended input count stays within [`SPECTRUM_EXPLICIT_CAP`].
    pub per_input: Vec<(String, f64)>,
    /// Composition classes, always present; lexicographic count order.
    pub classes: Vec<SpectrumClass>,
    pub histogram: Histogram,
    /// Mean of H(Y|x)/n under a uniform input; equals H(Y|X) of the base
    /// channel at every block length.
    pub weighted_mean_bits: f64,
    /// Standard deviation of H(Y|x)/n under a uniform input.
    pub weighted_std_bits: f64,
}

/// Per-input conditional entropy of the `n`-fold extended channel, computed
/// without materializing the extended matrix: point-wise conditional
/// entropies add across independent uses, so H(Y|x)/n depends only on the
/// input's composition class.
pub fn conditional_entropy_spectrum(ch: &Channel, n: usize, bins: usize) -> Result<EntropySpectrum> {
    assert!(n >= 1, "spectrum needs n >= 1");
    let k = ch.input.len();
    let per_use: Vec<f64> = (0..k).map(|j| ch.column_entropy(j)).collect();
    let log2_k = (k as f64).log2();

    let class_values: Vec<SpectrumClass> = compositions(n, k, SPECTRUM_CLASS_CAP)?
        .into_par_iter()
        .map(|counts| {
            let multiplicity = multinomial(&counts);
            let value = counts
                .iter()
                .zip(per_use.iter())
                .map(|(&c, &h)| c as f64 * h)
                .sum::<f64>()
                / n as f64;
            let uniform_mass = (log2_biguint(&multiplicity) - n as f64 * log2_k).exp2();
            SpectrumClass {
                counts,
                multiplicity,
                entropy_per_symbol_bits: value,
                uniform_mass,
            }
        })
        .collect();

    let weighted_mean_bits: f64 = class_values
        .iter()
        .map(|c| c.uniform_mass * c.entropy_per_symbol_bits)
        .sum();
    let variance: f64 = class_values
        .iter()
        .map(|c| {
            let d = c.entropy_per_symbol_bits - weighted_mean_bits;
            c.uniform_mass * d * d
        })
        .sum();
    let weighted_std_bits = variance.max(0.0).sqrt();

    let items: Vec<(f64, BigUint, f64)> = class_values
        .iter()
        .map(|c| {
            (
                c.entropy_per_symbol_bits,
                c.multiplicity.clone(),
                c.uniform_mass,
            )
        })
        .collect();
    let histogram = Histogram::build(&items, bins);

    let mut per_input = Vec::new();
    if (k as u128).pow(n as u32) <= SPECTRUM_EXPLICIT_CAP {
        let space = ch.input.product(n);
        per_input = (0..space.len())
            .map(|j| {
                let tuple = unrank_tuple(j, k, n);
                let value = tuple.iter().map(|&x| per_use[x]).sum::<f64>() / n as f64;
                (space.label(j).to_string(), value)
            })
            .collect();
    }

    Ok(EntropySpectrum {
        block_length: n,
        per_input,
        classes: class_values,
        histogram,
        weighted_mean_bits,
        weighted_std_bits,
    })
}
