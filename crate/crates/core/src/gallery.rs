//! Curated example distributions, channels, and chains used by the
//! experiment recipes and the test suites.

use crate::channel::Channel;
use crate::dist::Distribution;
use crate::process::MarkovChain;
use crate::space::Space;

/// The four marble colors used across the worked examples.
pub fn color_space() -> Space {
    Space::new(["blue", "gray", "yellow", "green"]).unwrap()
}

/// Equal probability of each color; entropy 2 bits.
pub fn uniform_colors() -> Distribution {
    Distribution::uniform(color_space())
}

/// (1/2, 1/4, 1/8, 1/8) over the colors; entropy 1.75 bits.
pub fn skewed_colors() -> Distribution {
    Distribution::over(color_space(), [0.5, 0.25, 0.125, 0.125]).unwrap()
}

/// Same weights as [`skewed_colors`] over an arbitrary 4-outcome space.
pub fn skewed_colors_on(space: Space) -> Distribution {
    Distribution::over(space, [0.5, 0.25, 0.125, 0.125]).unwrap()
}

/// Markov chain on the colors: uniform first draw, then repeat the previous
/// color with probability `stay` and switch to each other color with equal
/// probability.
pub fn stay_chain(stay: f64) -> MarkovChain {
    let space = color_space();
    let other = (1.0 - stay) / 3.0;
    let rows = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| if i == j { stay } else { other })
                .collect()
        })
        .collect();
    let transition = Channel::over(space.clone(), space.clone(), rows).unwrap();
    MarkovChain::new(Distribution::uniform(space), transition).unwrap()
}

/// Four-input channel whose inputs have clearly different noise levels
/// (per-input entropies 0, 1, 2 and about 1.357 bits).
pub fn heterogeneous_noise_channel() -> Channel {
    Channel::new(
        ["a", "b", "c", "d"],
        ["0", "1", "2", "3"],
        vec![
            vec![1.0, 0.5, 0.25, 0.7],
            vec![0.0, 0.5, 0.25, 0.1],
            vec![0.0, 0.0, 0.25, 0.1],
            vec![0.0, 0.0, 0.25, 0.1],
        ],
    )
    .unwrap()
}

/// Three-input channel mixing two competing optimization pressures: inputs
/// `u` and `v` are noisy but land on disjoint output pairs, while `w` is much
/// cleaner but overlaps everything. Putting mass only on {u, v} maximizes
/// output entropy (1 bit through); mass only on `w` minimizes noise (0 bits
/// through); the capacity-achieving mixture beats both.
pub fn tradeoff_channel() -> Channel {
    Channel::new(
        ["u", "v", "w"],
        ["0", "1", "2", "3"],
        vec![
            vec![0.5, 0.0, 0.02],
            vec![0.5, 0.0, 0.02],
            vec![0.0, 0.5, 0.02],
            vec![0.0, 0.5, 0.94],
        ],
    )
    .unwrap()
}

/// Source with three equally probable messages.
pub fn symmetric_match_source() -> Distribution {
    Distribution::new(["r", "s", "t"], [1.0 / 3.0; 3]).unwrap()
}

/// Source with two more probable and two less probable messages.
pub fn asymmetric_match_source() -> Distribution {
    Distribution::new(["r", "s", "t", "u"], [0.375, 0.375, 0.125, 0.125]).unwrap()
}

/// Matching-experiment channel in which every input is equally noisy and the
/// columns are permutations of one noise profile over a shared 3-output
/// space. Any three-way uniform input over {x1, x2, x3} drives the output
/// exactly uniform, which no 4-message arrangement can.
pub fn symmetric_match_channel() -> Channel {
    let (a, b, c) = (0.7, 0.2, 0.1);
    Channel::new(
        ["x1", "x2", "x3", "x4"],
        ["y1", "y2", "y3"],
        vec![
            vec![a, b, c, a],
            vec![b, c, a, c],
            vec![c, a, b, b],
        ],
    )
    .unwrap()
}

/// Matching-experiment channel with equally noisy inputs forming two pairs;
/// outputs overlap heavily within a pair and only weakly across pairs.
pub fn asymmetric_match_channel() -> Channel {
    let (a, b, c) = (0.5, 0.4, 0.05);
    Channel::new(
        ["x1", "x2", "x3", "x4"],
        ["y1", "y2", "y3", "y4"],
        vec![
            vec![a, b, c, c],
            vec![b, a, c, c],
            vec![c, c, a, b],
            vec![c, c, b, a],
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_objects_validate() {
        uniform_colors();
        skewed_colors();
        stay_chain(0.625);
        heterogeneous_noise_channel();
        tradeoff_channel();
        symmetric_match_source();
        asymmetric_match_source();
        symmetric_match_channel();
        asymmetric_match_channel();
    }

    #[test]
    fn match_channels_have_equally_noisy_inputs() {
        for ch in [symmetric_match_channel(), asymmetric_match_channel()] {
            let h0 = ch.column_entropy(0);
            for j in 1..ch.input_space().len() {
                assert!((ch.column_entropy(j) - h0).abs() < 1e-12);
            }
        }
    }
}
