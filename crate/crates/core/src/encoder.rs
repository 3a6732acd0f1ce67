//! Encoder design: exhaustive search over deterministic encoders, gradient
//! optimization of stochastic encoders, and source-channel matching tables.
//!
//! Throughout, the figure of merit for an encoder is the information the
//! channel output carries about the source message, I(S;Y). For a
//! deterministic encoder this equals I(f(S);Y), computed on the pushforward
//! input distribution; for a stochastic encoder it is the mutual information
//! through the composed channel (channel after encoder), which never exceeds
//! H(S).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{channel_capacity, mi_of, project_simplex, AscentConfig, CapacityResult};
use crate::channel::{compose_channels, joint_distribution, mutual_information, Channel};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::space::Space;

/// Cap on exhaustive encoder searches.
pub const SEARCH_CAP: u128 = 10_000_000;

/// A total map from source symbols to channel inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicEncoder {
    source: Space,
    inputs: Space,
    /// map[s] = input index fed when message s is drawn.
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DeterministicEncoderJson {
    map: BTreeMap<String, String>,
}

impl DeterministicEncoder {
    pub fn new(source: Space, inputs: Space, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::LengthMismatch {
                weights: map.len(),
                labels: source.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= inputs.len()) {
            return Err(Error::space_mismatch(format!(
                "encoder maps to input index {bad} outside the channel input space"
            )));
        }
        Ok(DeterministicEncoder {
            source,
            inputs,
            map,
        })
    }

    pub fn source_space(&self) -> &Space {
        &self.source
    }

    pub fn input_space(&self) -> &Space {
        &self.inputs
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut used = vec![false; self.inputs.len()];
        self.map.iter().all(|&x| !std::mem::replace(&mut used[x], true))
    }

    /// Distribution the encoder induces on the channel inputs.
    pub fn pushforward(&self, source: &Distribution) -> Result<Distribution> {
        if source.space() != &self.source {
            return Err(Error::space_mismatch(
                "source distribution is not on the encoder's source space",
            ));
        }
        let mut probs = vec![0.0; self.inputs.len()];
        for (s, &x) in self.map.iter().enumerate() {
            probs[x] += source.prob(s);
        }
        Distribution::over(self.inputs.clone(), probs)
    }

    pub fn from_json(text: &str, source: Space, inputs: Space) -> Result<Self> {
        let raw: DeterministicEncoderJson =
            serde_json::from_str(text).map_err(|e| Error::space_mismatch(e.to_string()))?;
        let mut map = vec![0usize; source.len()];
        for (s_label, x_label) in &raw.map {
            map[source.index_of(s_label)?] = inputs.index_of(x_label)?;
        }
        if raw.map.len() != source.len() {
            return Err(Error::LengthMismatch {
                weights: raw.map.len(),
                labels: source.len(),
            });
        }
        DeterministicEncoder::new(source, inputs, map)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, String> = self
            .map
            .iter()
            .enumerate()
            .map(|(s, &x)| {
                (
                    self.source.label(s).to_string(),
                    self.inputs.label(x).to_string(),
                )
            })
            .collect();
        serde_json::to_string_pretty(&DeterministicEncoderJson { map })
            .expect("encoder serializes")
    }
}

/// Either encoder kind. A stochastic encoder is a column-stochastic matrix
/// p(x | s), i.e. a channel from messages to channel inputs.
#[derive(Debug, Clone)]
pub enum Encoder {
    Deterministic(DeterministicEncoder),
    Stochastic(Channel),
}

/// Information transmitted about the source through `encoder` then `ch`, in
/// bits: I(S;Y).
pub fn encoder_mi(source: &Distribution, encoder: &Encoder, ch: &Channel) -> Result<f64> {
    match encoder {
        Encoder::Deterministic(enc) => {
            if enc.input_space() != ch.input_space() {
                return Err(Error::space_mismatch(
                    "encoder targets a different space than the channel inputs",
                ));
            }
            let px = enc.pushforward(source)?;
            Ok(mutual_information(&joint_distribution(ch, &px)?))
        }
        Encoder::Stochastic(enc) => {
            if enc.input_space() != source.space() {
                return Err(Error::space_mismatch(
                    "stochastic encoder is not defined on the source space",
                ));
            }
            let composed = compose_channels(enc, ch)?;
            Ok(mutual_information(&joint_distribution(&composed, source)?))
        }
    }
}

/// Exhaustive search over deterministic encoders, returning one achieving
/// the maximum I(S;Y); ties resolve to the lexicographically smallest map.
///
/// With `injective` set the search runs over arrangements (every message on
/// its own input; requires |X| >= |S|), otherwise over all |X|^|S| maps.
pub fn brute_force_encoder(
    source: &Distribution,
    ch: &Channel,
    injective: bool,
) -> Result<(DeterministicEncoder, f64)> {
    let s = source.len();
    let x = ch.input_space().len();
    let total: u128 = if injective {
        if x < s {
            return Err(Error::space_mismatch(format!(
                "injective search needs at least {s} channel inputs, channel has {x}"
            )));
        }
        falling_factorial(x, s)
    } else {
        (x as u128).pow(s as u32)
    };
    if total > SEARCH_CAP {
        return Err(Error::SearchSpaceTooLarge {
            arrangements: total,
            cap: SEARCH_CAP,
        });
    }

    let chunk: u128 = 8192;
    let chunks = total.div_ceil(chunk);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = total.min(start + chunk);
            let mut best_index = start;
            let mut best_mi = f64::NEG_INFINITY;
            let mut probs = vec![0.0; x];
            let mut map = vec![0usize; s];
            for index in start..end {
                if injective {
                    unrank_arrangement(index, x, s, &mut map);
                } else {
                    unrank_digits(index, x, &mut map);
                }
                probs.iter_mut().for_each(|p| *p = 0.0);
                for (msg, &input) in map.iter().enumerate() {
                    probs[input] += source.prob(msg);
                }
                let mi = mi_of(ch, &probs);
                if mi > best_mi {
                    best_mi = mi;
                    best_index = index;
                }
            }
            (best_mi, best_index)
        })
        // Strictly-greater keeps the earliest (lexicographically smallest)
        // maximizer regardless of chunk scheduling.
        .reduce(
            || (f64::NEG_INFINITY, 0u128),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let mut map = vec![0usize; s];
    if injective {
        unrank_arrangement(best.1, x, s, &mut map);
    } else {
        unrank_digits(best.1, x, &mut map);
    }
    let encoder =
        DeterministicEncoder::new(source.space().clone(), ch.input_space().clone(), map)?;
    Ok((encoder, best.0))
}

fn falling_factorial(x: usize, s: usize) -> u128 {
    (0..s).fold(1u128, |acc, i| acc.saturating_mul((x - i) as u128))
}

/// index -> s-digit base-x representation, most significant digit first, so
/// enumeration order is lexicographic in the map.
fn unrank_digits(mut index: u128, x: usize, map: &mut [usize]) {
    for slot in map.iter_mut().rev() {
        *slot = (index % x as u128) as usize;
        index /= x as u128;
    }
}

/// index -> lexicographic arrangement of s distinct inputs out of x.
fn unrank_arrangement(mut index: u128, x: usize, s: usize, map: &mut [usize]) {
    let mut remaining: Vec<usize> = (0..x).collect();
    for slot in 0..s {
        let tail = falling_factorial(x - slot - 1, s - slot - 1);
        let pick = (index / tail) as usize;
        index %= tail;
        map[slot] = remaining.remove(pick);
    }
}

#[derive(Debug, Clone)]
pub struct StochasticOptResult {
    /// Column-stochastic p(x | s) over (source -> channel inputs).
    pub encoder: Channel,
    pub mi_bits: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// I(S;Y) as a function of the raw encoder columns, plus its gradient.
/// With M = QE (the composed channel) and q = M p_S:
/// dI/dE[x][s] = p_s * sum_y Q[y][x] log2(M[y][s] / q[y]).
fn stochastic_mi(q: &[Vec<f64>], cols: &[Vec<f64>], ps: &[f64]) -> f64 {
    let outs = q.len();
    let mut mi = 0.0;
    let m = composed(q, cols);
    let qy = out_probs(&m, ps);
    for (s, &p) in ps.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        for y in 0..outs {
            let v = m[y][s];
            if v > 0.0 {
                mi += p * v * (v / qy[y]).log2();
            }
        }
    }
    mi
}

fn composed(q: &[Vec<f64>], cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let outs = q.len();
    let s = cols.len();
    (0..outs)
        .map(|y| {
            (0..s)
                .map(|j| {
                    cols[j]
                        .iter()
                        .enumerate()
                        .map(|(x, &e)| q[y][x] * e)
                        .sum()
                })
                .collect()
        })
        .collect()
}

fn out_probs(m: &[Vec<f64>], ps: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(ps).map(|(&v, &p)| v * p).sum())
        .collect()
}

fn stochastic_gradient(q: &[Vec<f64>], cols: &[Vec<f64>], ps: &[f64]) -> Vec<Vec<f64>> {
    let m = composed(q, cols);
    let qy = out_probs(&m, ps);
    let x_count = cols[0].len();
    cols.iter()
        .enumerate()
        .map(|(s, _)| {
            (0..x_count)
                .map(|x| {
                    let mut g = 0.0;
                    for (y, row) in q.iter().enumerate() {
                        if row[x] > 0.0 {
                            let ratio = (m[y][s].max(1e-300)) / qy[y].max(1e-300);
                            g += row[x] * ratio.log2();
                        }
                    }
                    ps[s] * g
                })
                .collect()
        })
        .collect()
}

/// Seeded ascent starts per optimization; I(S;Y) is convex in the encoder
/// matrix, so single gradient runs can park on a suboptimal face.
const ASCENT_RESTARTS: u64 = 6;

/// Projected gradient ascent over all encoder columns jointly.
///
/// Each restart starts from the uniform mixture plus a small seeded
/// perturbation (exact uniformity is a symmetric saddle) and finishes with a
/// column-snapping pass: because the objective is convex in the encoder, its
/// maximum sits at a vertex, so each column is greedily replaced by its best
/// deterministic assignment whenever that does not lower I(S;Y). The best
/// run wins; everything is deterministic in `seed`.
pub fn optimize_stochastic_encoder(
    source: &Distribution,
    ch: &Channel,
    cfg: &AscentConfig,
    seed: u64,
) -> Result<StochasticOptResult> {
    let q = ch.matrix();
    let ps = source.probs();
    let mut best: Option<(Vec<Vec<f64>>, f64, usize, bool)> = None;
    for restart in 0..ASCENT_RESTARTS {
        let (cols, mi, iterations, converged) =
            ascend_once(q, ps, ch.input_space().len(), cfg, seed, restart);
        if best.as_ref().map_or(true, |b| mi > b.1) {
            best = Some((cols, mi, iterations, converged));
        }
    }
    let (cols, mi, iterations, converged) = best.expect("at least one restart");

    let x = ch.input_space().len();
    let s = source.len();
    let rows: Vec<Vec<f64>> = (0..x).map(|i| (0..s).map(|j| cols[j][i]).collect()).collect();
    let encoder = Channel::over(source.space().clone(), ch.input_space().clone(), rows)?;
    Ok(StochasticOptResult {
        encoder,
        mi_bits: mi,
        iterations,
        converged,
    })
}

fn ascend_once(
    q: &[Vec<f64>],
    ps: &[f64],
    x: usize,
    cfg: &AscentConfig,
    seed: u64,
    restart: u64,
) -> (Vec<Vec<f64>>, f64, usize, bool) {
    let s = ps.len();
    let mut rng = CounterRng::substream(seed, restart);
    let mut cols: Vec<Vec<f64>> = (0..s)
        .map(|_| {
            let col: Vec<f64> = (0..x)
                .map(|_| 1.0 / x as f64 + 0.1 * (rng.next_f64() - 0.5))
                .collect();
            project_simplex(&col, cfg.projection)
        })
        .collect();

    let mut mi = stochastic_mi(q, &cols, ps);
    let mut step = cfg.learning_rate;
    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        let grad = stochastic_gradient(q, &cols, ps);
        let candidate: Vec<Vec<f64>> = cols
            .iter()
            .zip(grad.iter())
            .map(|(col, g)| {
                let moved: Vec<f64> = col
                    .iter()
                    .zip(g.iter())
                    .map(|(&c, &gi)| c + step * gi)
                    .collect();
                project_simplex(&moved, cfg.projection)
            })
            .collect();
        let candidate_mi = stochastic_mi(q, &candidate, ps);
        if candidate_mi >= mi - 1e-15 {
            let improvement = candidate_mi - mi;
            cols = candidate;
            mi = candidate_mi;
            iterations += 1;
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

    // Vertex polish: coordinate ascent over deterministic columns.
    loop {
        let mut improved = false;
        for col in 0..s {
            let mut best_mi = mi;
            let mut best_vertex = None;
            for vertex in 0..x {
                if cols[col][vertex] == 1.0 {
                    continue;
                }
                let saved = std::mem::replace(&mut cols[col], unit(x, vertex));
                let trial = stochastic_mi(q, &cols, ps);
                cols[col] = saved;
                if trial > best_mi + 1e-15 {
                    best_mi = trial;
                    best_vertex = Some(vertex);
                }
            }
            if let Some(vertex) = best_vertex {
                cols[col] = unit(x, vertex);
                mi = best_mi;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    // Tie snap: a column split across inputs that tie (noiseless channels
    // make these common) collapses to its heaviest vertex when that costs
    // nothing, so optima come back deterministic where a deterministic
    // optimum exists.
    for col in 0..s {
        let heaviest = cols[col]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("nonempty column");
        if cols[col][heaviest] == 1.0 {
            continue;
        }
        let saved = std::mem::replace(&mut cols[col], unit(x, heaviest));
        let trial = stochastic_mi(q, &cols, ps);
        if trial >= mi - 1e-12 {
            mi = trial;
        } else {
            cols[col] = saved;
        }
    }
    (cols, mi, iterations, converged)
}

fn unit(len: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[at] = 1.0;
    v
}

/// Gradient of I(S;Y) with respect to a stochastic encoder's entries, for
/// finite-difference verification. Entry [s][x] pairs with column s, input x.
pub fn stochastic_encoder_gradient(
    source: &Distribution,
    encoder: &Channel,
    ch: &Channel,
) -> Result<Vec<Vec<f64>>> {
    if encoder.input_space() != source.space() || encoder.output_space() != ch.input_space() {
        return Err(Error::space_mismatch(
            "encoder must map the source space onto the channel input space",
        ));
    }
    let cols: Vec<Vec<f64>> = (0..source.len()).map(|j| encoder.column(j)).collect();
    Ok(stochastic_gradient(ch.matrix(), &cols, source.probs()))
}

/// Raw I(S;Y) for arbitrary (not necessarily normalized) encoder columns;
/// the off-simplex extension used by gradient checks.
pub fn stochastic_encoder_mi_raw(cols: &[Vec<f64>], source: &Distribution, ch: &Channel) -> f64 {
    stochastic_mi(ch.matrix(), cols, source.probs())
}

/// One row of a source-channel matching table.
#[derive(Debug, Clone, Serialize)]
pub struct MatchEntry {
    pub source: String,
    pub channel: String,
    /// Best deterministic encoder found, as label pairs.
    pub encoder: BTreeMap<String, String>,
    pub best_mi_bits: f64,
    pub capacity_bits: f64,
    /// capacity - best_mi; how far one-message-at-a-time encoding falls
    /// short of the channel's limit.
    pub gap_bits: f64,
}

/// Cross every source with every channel: exhaustive encoder search per pair
/// plus the channel capacity for context. Injective search when the channel
/// has enough inputs, unrestricted maps otherwise.
pub fn matching_experiment(
    sources: &[(String, Distribution)],
    channels: &[(String, Channel)],
    cfg: &AscentConfig,
) -> Result<Vec<MatchEntry>> {
    let mut capacities: Vec<CapacityResult> = Vec::with_capacity(channels.len());
    for (_, ch) in channels {
        capacities.push(channel_capacity(ch, cfg)?);
    }
    let mut table = Vec::new();
    for (source_name, source) in sources {
        for ((channel_name, ch), cap) in channels.iter().zip(capacities.iter()) {
            let injective = ch.input_space().len() >= source.len();
            let (encoder, mi) = brute_force_encoder(source, ch, injective)?;
            let map = encoder
                .map()
                .iter()
                .enumerate()
                .map(|(s, &x)| {
                    (
                        source.space().label(s).to_string(),
                        ch.input_space().label(x).to_string(),
                    )
                })
                .collect();
            table.push(MatchEntry {
                source: source_name.clone(),
                channel: channel_name.clone(),
                encoder: map,
                best_mi_bits: mi,
                capacity_bits: cap.capacity_bits,
                gap_bits: cap.capacity_bits - mi,
            });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::entropy;
    use crate::gallery;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Three noisy inputs landing on disjoint output pairs: information-
    /// preserving despite the noise.
    fn disjoint_noisy_channel() -> Channel {
        Channel::new(
            ["x1", "x2", "x3"],
            ["y1", "y2", "y3", "y4", "y5", "y6"],
            vec![
                vec![0.5, 0.0, 0.0],
                vec![0.5, 0.0, 0.0],
                vec![0.0, 0.5, 0.0],
                vec![0.0, 0.5, 0.0],
                vec![0.0, 0.0, 0.5],
                vec![0.0, 0.0, 0.5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_encoder_reproduces_direct_mi() {
        let ch = gallery::asymmetric_match_channel();
        let source = gallery::skewed_colors_on(ch.input_space().clone());
        let enc = DeterministicEncoder::new(
            source.space().clone(),
            ch.input_space().clone(),
            vec![0, 1, 2, 3],
        )
        .unwrap();
        let via_encoder = encoder_mi(&source, &Encoder::Deterministic(enc), &ch).unwrap();
        let direct = mutual_information(&joint_distribution(&ch, &source).unwrap());
        close(via_encoder, direct, 1e-15);
    }

    #[test]
    fn constant_channel_transmits_nothing() {
        let constant = Channel::new(
            ["x1", "x2"],
            ["y"],
            vec![vec![1.0, 1.0]],
        )
        .unwrap();
        let source = Distribution::new(["a", "b"], [0.5, 0.5]).unwrap();
        let enc = DeterministicEncoder::new(
            source.space().clone(),
            constant.input_space().clone(),
            vec![0, 1],
        )
        .unwrap();
        close(
            encoder_mi(&source, &Encoder::Deterministic(enc), &constant).unwrap(),
            0.0,
            1e-15,
        );
    }

    #[test]
    fn disjoint_outputs_preserve_all_source_information() {
        let ch = disjoint_noisy_channel();
        let source = gallery::symmetric_match_source();
        let enc = DeterministicEncoder::new(
            source.space().clone(),
            ch.input_space().clone(),
            vec![0, 1, 2],
        )
        .unwrap();
        let mi = encoder_mi(&source, &Encoder::Deterministic(enc), &ch).unwrap();
        close(mi, entropy(&source), 1e-12);
    }

    #[test]
    fn brute_force_on_noiseless_channel_reaches_source_entropy() {
        let ch = Channel::identity(gallery::color_space());
        let source = Distribution::new(["m1", "m2", "m3"], [0.5, 0.25, 0.25]).unwrap();
        let (enc, mi) = brute_force_encoder(&source, &ch, true).unwrap();
        close(mi, entropy(&source), 1e-12);
        // Every injection ties, so the lexicographically smallest map wins.
        assert_eq!(enc.map(), &[0, 1, 2]);
        assert!(enc.is_injective());
    }

    #[test]
    fn brute_force_single_message_source() {
        let ch = gallery::asymmetric_match_channel();
        let source = Distribution::new(["only"], [1.0]).unwrap();
        let (_, mi) = brute_force_encoder(&source, &ch, true).unwrap();
        close(mi, 0.0, 1e-12);
    }

    #[test]
    fn asymmetric_source_wins_on_the_paired_channel() {
        let ch = gallery::asymmetric_match_channel();
        let (_, mi_sym) = brute_force_encoder(&gallery::symmetric_match_source(), &ch, true).unwrap();
        let (_, mi_asym) =
            brute_force_encoder(&gallery::asymmetric_match_source(), &ch, true).unwrap();
        assert!(
            mi_asym > mi_sym + 1e-3,
            "paired-overlap channel should favor the asymmetric source: {mi_asym} vs {mi_sym}"
        );
    }

    #[test]
    fn search_space_cap_is_enforced() {
        let big = Channel::identity(Space::indexed("x", 14));
        let source = Distribution::uniform(Space::indexed("s", 14));
        assert!(matches!(
            brute_force_encoder(&source, &big, true),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn non_injective_search_handles_more_messages_than_inputs() {
        let ch = Channel::identity(Space::new(["x0", "x1"]).unwrap());
        let source = Distribution::new(["a", "b", "c"], [0.5, 0.25, 0.25]).unwrap();
        let (enc, mi) = brute_force_encoder(&source, &ch, false).unwrap();
        assert!(!enc.is_injective());
        // Best split keeps the heavy message alone: I = H(0.5, 0.5) = 1 bit.
        close(mi, 1.0, 1e-12);
    }

    #[test]
    fn stochastic_optimum_on_noiseless_channel_is_deterministic() {
        let ch = Channel::identity(gallery::color_space());
        let source = Distribution::new(["m1", "m2", "m3"], [0.5, 0.25, 0.25]).unwrap();
        let r = optimize_stochastic_encoder(&source, &ch, &AscentConfig::default(), 13).unwrap();
        close(r.mi_bits, entropy(&source), 1e-6);
        // Columns land on (a relabeling of) an injection.
        for j in 0..source.len() {
            let col = r.encoder.column(j);
            let max = col.iter().cloned().fold(0.0, f64::max);
            assert!(max > 1.0 - 1e-6, "column {j} is not deterministic: {col:?}");
        }
    }

    #[test]
    fn stochastic_optimum_matches_capacity_for_uniform_source() {
        let ch = gallery::asymmetric_match_channel();
        let source = Distribution::new(
            ["m1", "m2", "m3", "m4"],
            [0.25; 4],
        )
        .unwrap();
        let r = optimize_stochastic_encoder(&source, &ch, &AscentConfig::default(), 3).unwrap();
        let cap = channel_capacity(&ch, &AscentConfig::default()).unwrap();
        close(r.mi_bits, cap.capacity_bits, 1e-5);
    }

    #[test]
    fn stochastic_beats_or_ties_brute_force() {
        for (source, ch) in [
            (
                gallery::symmetric_match_source(),
                gallery::symmetric_match_channel(),
            ),
            (
                gallery::asymmetric_match_source(),
                gallery::asymmetric_match_channel(),
            ),
            (
                gallery::asymmetric_match_source(),
                gallery::symmetric_match_channel(),
            ),
        ] {
            let (_, det) = brute_force_encoder(&source, &ch, true).unwrap();
            let sto =
                optimize_stochastic_encoder(&source, &ch, &AscentConfig::default(), 17).unwrap();
            assert!(
                sto.mi_bits >= det - 1e-6,
                "stochastic {} < deterministic {det}",
                sto.mi_bits
            );
        }
    }

    #[test]
    fn stochastic_gradient_matches_finite_differences() {
        let ch = gallery::asymmetric_match_channel();
        let source = gallery::asymmetric_match_source();
        let mut rng = CounterRng::new(29);
        for _ in 0..10 {
            let cols: Vec<Vec<f64>> = (0..source.len())
                .map(|_| {
                    let mut col: Vec<f64> =
                        (0..ch.input_space().len()).map(|_| rng.next_f64() + 0.25).collect();
                    let s: f64 = col.iter().sum();
                    col.iter_mut().for_each(|v| *v /= s);
                    col
                })
                .collect();
            let rows: Vec<Vec<f64>> = (0..ch.input_space().len())
                .map(|i| (0..source.len()).map(|j| cols[j][i]).collect())
                .collect();
            let enc = Channel::over(source.space().clone(), ch.input_space().clone(), rows)
                .unwrap();
            let grad = stochastic_encoder_gradient(&source, &enc, &ch).unwrap();
            let h = 1e-6;
            for s in 0..source.len() {
                let fd: Vec<f64> = (0..ch.input_space().len())
                    .map(|x| {
                        let mut plus = cols.clone();
                        let mut minus = cols.clone();
                        plus[s][x] += h;
                        minus[s][x] -= h;
                        (stochastic_encoder_mi_raw(&plus, &source, &ch)
                            - stochastic_encoder_mi_raw(&minus, &source, &ch))
                            / (2.0 * h)
                    })
                    .collect();
                let gm = grad[s].iter().sum::<f64>() / fd.len() as f64;
                let fm = fd.iter().sum::<f64>() / fd.len() as f64;
                for x in 0..fd.len() {
                    close(grad[s][x] - gm, fd[x] - fm, 1e-4);
                }
            }
        }
    }

    #[test]
    fn matching_table_orders_sources_as_expected() {
        let sources = vec![
            ("symmetric".to_string(), gallery::symmetric_match_source()),
            ("asymmetric".to_string(), gallery::asymmetric_match_source()),
        ];
        let channels = vec![
            ("symmetric".to_string(), gallery::symmetric_match_channel()),
            ("asymmetric".to_string(), gallery::asymmetric_match_channel()),
        ];
        let table = matching_experiment(&sources, &channels, &AscentConfig::default()).unwrap();
        let mi = |s: &str, c: &str| {
            table
                .iter()
                .find(|e| e.source == s && e.channel == c)
                .unwrap()
                .best_mi_bits
        };
        assert!(mi("symmetric", "symmetric") > mi("asymmetric", "symmetric") + 1e-3);
        assert!(mi("asymmetric", "asymmetric") > mi("symmetric", "asymmetric") + 1e-3);
        for entry in &table {
            assert!(entry.best_mi_bits <= entry.capacity_bits + 1e-6);
            assert!(entry.gap_bits >= -1e-6);
        }
    }

    #[test]
    fn relabeling_the_source_does_not_change_the_optimum() {
        let ch = gallery::symmetric_match_channel();
        let a = Distribution::new(["r", "s", "t", "u"], [0.375, 0.375, 0.125, 0.125]).unwrap();
        let b = Distribution::new(["r", "s", "t", "u"], [0.125, 0.375, 0.375, 0.125]).unwrap();
        let (_, mi_a) = brute_force_encoder(&a, &ch, true).unwrap();
        let (_, mi_b) = brute_force_encoder(&b, &ch, true).unwrap();
        close(mi_a, mi_b, 1e-9);
    }

    #[test]
    fn encoder_json_round_trips() {
        let source = Space::new(["a", "b", "c"]).unwrap();
        let inputs = Space::new(["x", "y", "z", "w"]).unwrap();
        let enc = DeterministicEncoder::new(source.clone(), inputs.clone(), vec![2, 0, 3]).unwrap();
        let parsed = DeterministicEncoder::from_json(&enc.to_json(), source, inputs).unwrap();
        assert_eq!(parsed, enc);
    }
}
