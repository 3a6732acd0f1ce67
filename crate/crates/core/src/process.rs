//! Stochastic processes: IID and Markov sequence models, entropy rates,
//! typical-set analysis, and per-sequence information histograms.
//!
//! Sequence-level quantities are computed by composition (type-class)
//! enumeration: an IID sequence's probability depends only on its symbol
//! counts, so sums over |X|^n sequences collapse to sums over the
//! compositions of n, with exact big-integer multiplicities.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::comb::{compositions, log2_biguint, multinomial};
use crate::dist::{entropy, entropy_of, max_entropy, Distribution};
use crate::error::{Error, Result};
use crate::hist::Histogram;
use crate::rng::CounterRng;

/// Cap on composition classes enumerated per call.
pub const CLASS_CAP: u128 = 10_000_000;

/// A time-homogeneous Markov chain: an initial distribution plus a
/// transition channel on the same space (column j = p(next | current = x_j)).
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    initial: Distribution,
    transition: Channel,
}

#[derive(Serialize, Deserialize)]
struct MarkovChainJson {
    labels: Vec<String>,
    initial: Vec<f64>,
    /// Row-major, rows = next state, columns = current state.
    transition: Vec<Vec<f64>>,
}

impl MarkovChain {
    pub fn new(initial: Distribution, transition: Channel) -> Result<Self> {
        if transition.input_space() != initial.space()
            || transition.output_space() != initial.space()
        {
            return Err(Error::space_mismatch(
                "transition must map the initial distribution's space to itself",
            ));
        }
        Ok(MarkovChain {
            initial,
            transition,
        })
    }

    pub fn initial(&self) -> &Distribution {
        &self.initial
    }

    pub fn transition(&self) -> &Channel {
        &self.transition
    }

    pub fn space(&self) -> &crate::space::Space {
        self.initial.space()
    }

    /// Marginal distribution of draw `k` (1-based; draw 1 is the initial).
    pub fn marginal_at(&self, k: usize) -> Vec<f64> {
        assert!(k >= 1);
        let mut m = self.initial.probs().to_vec();
        for _ in 1..k {
            m = self.step(&m);
        }
        m
    }

    fn step(&self, m: &[f64]) -> Vec<f64> {
        self.transition
            .matrix()
            .iter()
            .map(|row| row.iter().zip(m).map(|(&t, &p)| t * p).sum())
            .collect()
    }

    /// Average uncertainty of the next draw given the current one, with the
    /// current marginal `m`.
    fn conditional_bits(&self, m: &[f64]) -> f64 {
        m.iter()
            .enumerate()
            .map(|(j, &p)| p * self.transition.column_entropy(j))
            .sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MarkovChainJson =
            serde_json::from_str(text).map_err(|e| Error::space_mismatch(e.to_string()))?;
        let initial = Distribution::new(raw.labels.clone(), raw.initial)?;
        let transition = Channel::new(raw.labels.clone(), raw.labels, raw.transition)?;
        MarkovChain::new(initial, transition)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MarkovChainJson {
            labels: self.space().labels().to_vec(),
            initial: self.initial.probs().to_vec(),
            transition: self.transition.matrix().to_vec(),
        })
        .expect("chain serializes")
    }
}

/// A sequence source: independent draws or a Markov chain.
#[derive(Debug, Clone)]
pub enum ProcessModel {
    Iid(Distribution),
    Markov(MarkovChain),
}

/// A sampled symbol sequence, tagged with the seed that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceSample {
    pub symbols: Vec<usize>,
    pub seed: u64,
}

/// Draw `n` symbols from `model`; identical seeds give identical sequences.
pub fn sample_sequence(model: &ProcessModel, n: usize, seed: u64) -> SequenceSample {
    assert!(n >= 1);
    let mut rng = CounterRng::new(seed);
    let mut symbols = Vec::with_capacity(n);
    match model {
        ProcessModel::Iid(d) => {
            for _ in 0..n {
                symbols.push(rng.next_index(d.probs()));
            }
        }
        ProcessModel::Markov(chain) => {
            let mut current = rng.next_index(chain.initial.probs());
            symbols.push(current);
            for _ in 1..n {
                current = rng.next_index(&chain.transition.column(current));
                symbols.push(current);
            }
        }
    }
    SequenceSample { symbols, seed }
}

/// Averaged-joint entropy rate over the first `n` draws, bits per symbol:
/// (1/n) [H(X_1) + sum_{k=2..n} H(X_k | X_{k-1})], with marginals propagated
/// exactly through the chain rule.
pub fn joint_entropy_rate(chain: &MarkovChain, n: usize) -> f64 {
    assert!(n >= 1);
    let mut m = chain.initial.probs().to_vec();
    let mut total = entropy_of(&m);
    for _ in 2..=n {
        total += chain.conditional_bits(&m);
        m = chain.step(&m);
    }
    total / n as f64
}

/// Conditional entropy rate H(X_{n+1} | X_n), bits per symbol.
pub fn conditional_entropy_rate(chain: &MarkovChain, n: usize) -> f64 {
    assert!(n >= 1);
    chain.conditional_bits(&chain.marginal_at(n))
}

/// Per-symbol redundancy of the first `n` draws: log2 |X| minus the
/// averaged-joint entropy rate.
pub fn process_redundancy(chain: &MarkovChain, n: usize) -> f64 {
    max_entropy(chain.space().len()).expect("nonempty space") - joint_entropy_rate(chain, n)
}

/// One composition class of length-`n` sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceClass {
    /// Symbol counts; the class holds every sequence with these counts.
    pub counts: Vec<usize>,
    /// Exact number of sequences in the class.
    pub multiplicity: BigUint,
    /// Per-symbol information -(1/n) log2 p(sequence); infinite if the class
    /// uses a zero-probability symbol.
    pub info_per_symbol_bits: f64,
    /// Total probability of the class.
    pub mass: f64,
}

/// Enumerate every composition class of length-`n` sequences from `d`.
pub fn sequence_classes(d: &Distribution, n: usize) -> Result<Vec<SequenceClass>> {
    assert!(n >= 1);
    let log2_probs: Vec<f64> = d.probs().iter().map(|&p| p.log2()).collect();
    Ok(compositions(n, d.len(), CLASS_CAP)?
        .into_par_iter()
        .map(|counts| {
            let multiplicity = multinomial(&counts);
            let mut log2_seq_prob = 0.0;
            for (&c, &lp) in counts.iter().zip(log2_probs.iter()) {
                if c > 0 {
                    log2_seq_prob += c as f64 * lp;
                }
            }
            let info_per_symbol_bits = -log2_seq_prob / n as f64;
            let mass = if log2_seq_prob.is_finite() {
                (log2_biguint(&multiplicity) + log2_seq_prob).exp2()
            } else {
                0.0
            };
            SequenceClass {
                counts,
                multiplicity,
                info_per_symbol_bits,
                mass,
            }
        })
        .collect())
}

/// Typicality census of length-`n` sequences: which sequences have
/// per-symbol information within epsilon of the entropy, how many there are
/// exactly, and how much probability they carry.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSetReport {
    pub n: usize,
    pub epsilon: f64,
    /// Entropy of the source, the center of the band, in bits per symbol.
    pub entropy_bits: f64,
    /// The band (H - eps, H + eps]; half-open so class membership is
    /// unambiguous at the boundary.
    pub band: (f64, f64),
    pub typical_class_count: usize,
    pub typical_sequence_count: BigUint,
    pub total_sequence_count: BigUint,
    pub typical_probability_mass: f64,
}

/// Count the typical set of IID length-`n` sequences via class enumeration.
pub fn typical_set(d: &Distribution, n: usize, epsilon: f64) -> Result<TypicalSetReport> {
    assert!(epsilon > 0.0);
    let h = entropy(d);
    let band = (h - epsilon, h + epsilon);
    let classes = sequence_classes(d, n)?;
    let mut typical_class_count = 0usize;
    let mut typical_sequence_count = BigUint::zero();
    let mut total_sequence_count = BigUint::zero();
    let mut typical_probability_mass = 0.0;
    for class in &classes {
        total_sequence_count += &class.multiplicity;
        let v = class.info_per_symbol_bits;
        if v > band.0 && v <= band.1 {
            typical_class_count += 1;
            typical_sequence_count += &class.multiplicity;
            typical_probability_mass += class.mass;
        }
    }
    Ok(TypicalSetReport {
        n,
        epsilon,
        entropy_bits: h,
        band,
        typical_class_count,
        typical_sequence_count,
        total_sequence_count,
        typical_probability_mass,
    })
}

/// Histograms of per-symbol information across all length-`n` sequences:
/// exact sequence counts per band and probability mass per band, plus the
/// exact (unbinned) mean and standard deviation of the mass-weighted value.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoHistogram {
    pub n: usize,
    pub histogram: Histogram,
    pub class_count: usize,
    pub total_sequence_count: BigUint,
    /// Mass-weighted mean of the per-symbol information; equals the source
    /// entropy for every n.
    pub mean_bits: f64,
    /// Mass-weighted standard deviation; shrinks as 1/sqrt(n).
    pub std_bits: f64,
}

pub fn information_histogram(d: &Distribution, n: usize, bins: usize) -> Result<InfoHistogram> {
    let classes = sequence_classes(d, n)?;
    let mean_bits: f64 = classes
        .iter()
        .filter(|c| c.mass > 0.0)
        .map(|c| c.mass * c.info_per_symbol_bits)
        .sum();
    let variance: f64 = classes
        .iter()
        .filter(|c| c.mass > 0.0)
        .map(|c| {
            let dlt = c.info_per_symbol_bits - mean_bits;
            c.mass * dlt * dlt
        })
        .sum();
    let total_sequence_count: BigUint = classes.iter().map(|c| c.multiplicity.clone()).sum();
    let items: Vec<(f64, BigUint, f64)> = classes
        .iter()
        .map(|c| (c.info_per_symbol_bits, c.multiplicity.clone(), c.mass))
        .collect();
    Ok(InfoHistogram {
        n,
        histogram: Histogram::build(&items, bins),
        class_count: classes.len(),
        total_sequence_count,
        mean_bits,
        std_bits: variance.max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use num_traits::One;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Entropy of the stay-5/8 transition column, the conditional-rate oracle.
    fn stay_chain_rate_oracle() -> f64 {
        entropy_of(&[0.625, 0.125, 0.125, 0.125])
    }

    #[test]
    fn degenerate_iid_sampling_is_constant() {
        let d = Distribution::new(["a", "b", "c", "d"], [1.0, 0.0, 0.0, 0.0]).unwrap();
        let s = sample_sequence(&ProcessModel::Iid(d), 5, 3);
        assert_eq!(s.symbols, vec![0, 0, 0, 0, 0]);
    }

    #[test]
    fn identity_transition_freezes_the_first_draw() {
        let space = gallery::color_space();
        let chain = MarkovChain::new(
            Distribution::uniform(space.clone()),
            Channel::identity(space),
        )
        .unwrap();
        let s = sample_sequence(&ProcessModel::Markov(chain), 6, 41);
        assert!(s.symbols.iter().all(|&x| x == s.symbols[0]));
    }

    #[test]
    fn stay_chain_repeat_frequency_matches_stay_probability() {
        let chain = gallery::stay_chain(0.625);
        let n = 100_000;
        let s = sample_sequence(&ProcessModel::Markov(chain), n, 7);
        let repeats = s
            .symbols
            .windows(2)
            .filter(|w| w[0] == w[1])
            .count();
        close(repeats as f64 / (n - 1) as f64, 0.625, 0.01);
    }

    #[test]
    fn sampling_is_reproducible() {
        let model = ProcessModel::Iid(gallery::skewed_colors());
        assert_eq!(sample_sequence(&model, 64, 9), sample_sequence(&model, 64, 9));
        assert_ne!(
            sample_sequence(&model, 64, 9).symbols,
            sample_sequence(&model, 64, 10).symbols
        );
    }

    #[test]
    fn entropy_rates_of_the_stay_chain() {
        let chain = gallery::stay_chain(0.625);
        let oracle = stay_chain_rate_oracle();
        close(joint_entropy_rate(&chain, 1), 2.0, 1e-15);
        for n in [1usize, 2, 7, 64] {
            close(conditional_entropy_rate(&chain, n), oracle, 1e-12);
        }
        for n in [2usize, 16, 64] {
            let expected = (2.0 + (n - 1) as f64 * oracle) / n as f64;
            close(joint_entropy_rate(&chain, n), expected, 1e-12);
        }
        // The two definitions converge; the gap is exactly (H(X1) - rate)/n.
        let gap = joint_entropy_rate(&chain, 64) - conditional_entropy_rate(&chain, 64);
        close(gap, (2.0 - oracle) / 64.0, 1e-12);
        assert!(gap < 0.01);
    }

    #[test]
    fn iid_chain_rates_equal_marginal_entropy() {
        let space = gallery::color_space();
        let d = gallery::skewed_colors();
        let cols = vec![d.probs().to_vec(); 4];
        let rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| cols[j][i]).collect()).collect();
        let chain = MarkovChain::new(
            d.clone(),
            Channel::over(space.clone(), space, rows).unwrap(),
        )
        .unwrap();
        for n in [1usize, 3, 10] {
            close(joint_entropy_rate(&chain, n), 1.75, 1e-12);
            close(conditional_entropy_rate(&chain, n), 1.75, 1e-12);
        }
    }

    #[test]
    fn identity_transition_has_zero_conditional_rate() {
        let space = gallery::color_space();
        let chain = MarkovChain::new(
            Distribution::uniform(space.clone()),
            Channel::identity(space),
        )
        .unwrap();
        close(conditional_entropy_rate(&chain, 5), 0.0, 0.0);
        // Joint rate decays as H(X1)/n, so redundancy climbs toward log2|X|.
        close(joint_entropy_rate(&chain, 64), 2.0 / 64.0, 1e-15);
        close(process_redundancy(&chain, 64), 2.0 - 2.0 / 64.0, 1e-12);
    }

    #[test]
    fn redundancy_of_processes() {
        let space = gallery::color_space();
        let uniform = Distribution::uniform(space.clone());
        let cols = vec![uniform.probs().to_vec(); 4];
        let rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| cols[j][i]).collect()).collect();
        let iid_uniform = MarkovChain::new(
            uniform,
            Channel::over(space.clone(), space, rows).unwrap(),
        )
        .unwrap();
        close(process_redundancy(&iid_uniform, 16), 0.0, 1e-12);

        let chain = gallery::stay_chain(0.625);
        let oracle = stay_chain_rate_oracle();
        let n = 4096;
        close(process_redundancy(&chain, n), 2.0 - oracle, 1e-3);
    }

    #[test]
    fn uniform_source_makes_every_sequence_typical() {
        let d = gallery::uniform_colors();
        for n in [1usize, 4, 9] {
            let r = typical_set(&d, n, 0.05).unwrap();
            assert_eq!(r.typical_sequence_count, r.total_sequence_count);
            close(r.typical_probability_mass, 1.0, 1e-12);
            assert_eq!(r.total_sequence_count, BigUint::from(4u32).pow(n as u32));
        }
    }

    #[test]
    fn expected_count_class_sits_at_the_entropy() {
        // Counts (8,4,2,2) from (1/2,1/4,1/8,1/8): information is exactly H,
        // so those 900900 sequences are typical in any band.
        let d = gallery::skewed_colors();
        let r = typical_set(&d, 16, 1e-9).unwrap();
        assert!(r.typical_sequence_count >= BigUint::from(5_405_400u64));
        let info = -(8.0 * (0.5f64).log2()
            + 4.0 * (0.25f64).log2()
            + 2.0 * (0.125f64).log2()
            + 2.0 * (0.125f64).log2())
            / 16.0;
        close(info, r.entropy_bits, 0.0);
    }

    #[test]
    fn typical_mass_grows_with_length_and_matches_brute_force() {
        let d = gallery::skewed_colors();
        let eps = 0.2;
        let mut last = 0.0;
        for n in [4usize, 8, 16, 32] {
            let r = typical_set(&d, n, eps).unwrap();
            assert!(
                r.typical_probability_mass > last,
                "mass must grow: {} at n={n}",
                r.typical_probability_mass
            );
            last = r.typical_probability_mass;
        }
        for n in [4usize, 8] {
            let r = typical_set(&d, n, eps).unwrap();
            let (count, mass) = brute_force_typical(&d, n, eps);
            assert_eq!(r.typical_sequence_count, BigUint::from(count));
            close(r.typical_probability_mass, mass, 1e-12);
        }
    }

    #[test]
    fn band_sandwich_bounds_hold_exactly() {
        let d = gallery::skewed_colors();
        for n in [4usize, 16, 64] {
            let r = typical_set(&d, n, 0.2).unwrap();
            let count_log2 = log2_biguint(&r.typical_sequence_count);
            let lower = (count_log2 - n as f64 * (r.entropy_bits + 0.2)).exp2();
            let upper = (count_log2 - n as f64 * (r.entropy_bits - 0.2)).exp2();
            assert!(r.typical_probability_mass >= lower * (1.0 - 1e-9));
            assert!(r.typical_probability_mass <= upper * (1.0 + 1e-9));
        }
    }

    #[test]
    fn most_probable_sequence_is_not_typical() {
        let d = gallery::skewed_colors();
        let r = typical_set(&d, 16, 0.2).unwrap();
        // The all-blue run has per-symbol information 1 bit, below the band.
        let info_most_probable = -(0.5f64).log2();
        assert!(info_most_probable <= r.band.0);
    }

    #[test]
    fn histogram_at_n1_is_the_pointwise_information() {
        let d = gallery::skewed_colors();
        let h = information_histogram(&d, 1, 8).unwrap();
        assert_eq!(h.class_count, 4);
        assert_eq!(h.total_sequence_count, BigUint::from(4u32));
        close(h.histogram.masses.iter().sum::<f64>(), 1.0, 1e-12);
        close(h.mean_bits, 1.75, 1e-12);
    }

    #[test]
    fn weighted_mean_is_the_entropy_for_every_length() {
        let d = gallery::skewed_colors();
        for n in [1usize, 2, 8, 32] {
            let h = information_histogram(&d, n, 32).unwrap();
            close(h.mean_bits, 1.75, 1e-9);
        }
    }

    #[test]
    fn weighted_std_shrinks_as_inverse_sqrt_n() {
        let d = gallery::skewed_colors();
        // Var[-log2 p(X)] = E[i^2] - H^2 = 3.75 - 1.75^2.
        let sigma = (3.75f64 - 1.75 * 1.75).sqrt();
        for n in [1usize, 4, 16, 64] {
            let h = information_histogram(&d, n, 32).unwrap();
            close(h.std_bits, sigma / (n as f64).sqrt(), 1e-9);
        }
    }

    #[test]
    fn class_cap_is_enforced() {
        let d = Distribution::new(
            ["a", "b", "c", "d", "e", "f", "g", "h"],
            [0.125; 8],
        )
        .unwrap();
        assert!(matches!(
            typical_set(&d, 2000, 0.1),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn chain_json_round_trips() {
        let chain = gallery::stay_chain(0.625);
        let parsed = MarkovChain::from_json(&chain.to_json()).unwrap();
        assert_eq!(parsed, chain);
    }

    fn brute_force_typical(d: &Distribution, n: usize, eps: f64) -> (u64, f64) {
        let h = entropy(d);
        let k = d.len();
        let mut count = 0u64;
        let mut mass = 0.0;
        for mut idx in 0..k.pow(n as u32) {
            let mut p = 1.0;
            for _ in 0..n {
                p *= d.prob(idx % k);
                idx /= k;
            }
            if p <= 0.0 {
                continue;
            }
            let info = -p.log2() / n as f64;
            if info > h - eps && info <= h + eps {
                count += 1;
                mass += p;
            }
        }
        (count, mass)
    }

    #[test]
    fn class_masses_sum_to_one() {
        let d = gallery::skewed_colors();
        let classes = sequence_classes(&d, 12).unwrap();
        let total: f64 = classes.iter().map(|c| c.mass).sum();
        close(total, 1.0, 1e-12);
        let count: BigUint = classes.iter().map(|c| c.multiplicity.clone()).sum();
        assert_eq!(count, BigUint::from(4u32).pow(12));
        assert!(classes.iter().all(|c| c.multiplicity >= BigUint::one()));
    }
}
