//! Binary-channel coding experiments: repetition and Hamming(7,4) codes over
//! binary symmetric channels, with exact error probabilities by error-pattern
//! enumeration and seeded Monte-Carlo estimates.
//!
//! Code words are packed into `u32` with bit 0 as the first transmitted bit
//! counted from the most significant end: bit i of an n-bit word is
//! `(word >> (n - 1 - i)) & 1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::Channel;
use crate::dist::binary_entropy;
use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Cap on exhaustive error-pattern enumeration (2^n patterns).
pub const EXACT_BLOCK_CAP: usize = 20;
/// Monte-Carlo blocks per seeded partition; fixed so results are identical
/// for any worker count.
const PARTITION_BLOCKS: u64 = 1 << 14;

/// Binary symmetric channel flipping each bit with probability `f`.
pub fn bsc(f: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange {
            name: "flip probability",
            value: f,
            min: 0.0,
            max: 1.0,
        });
    }
    Channel::new(
        ["0", "1"],
        ["0", "1"],
        vec![vec![1.0 - f, f], vec![f, 1.0 - f]],
    )
}

/// A fixed-rate binary block code with hard-decision decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryCode {
    /// Send each source bit `reps` times; decode by majority vote.
    Repetition { reps: usize },
    /// The (7,4) single-error-correcting code, systematic layout
    /// [d1 d2 d3 d4 p1 p2 p3] with p1 = d1^d2^d4, p2 = d1^d3^d4,
    /// p3 = d2^d3^d4.
    Hamming74,
}

/// Repetition code with an odd repeat count (majority needs a tie-breaker).
pub fn repetition_code(reps: usize) -> Result<BinaryCode> {
    if reps == 0 || reps % 2 == 0 {
        return Err(Error::EvenRepetition { got: reps });
    }
    Ok(BinaryCode::Repetition { reps })
}

pub fn hamming74() -> BinaryCode {
    BinaryCode::Hamming74
}

impl BinaryCode {
    pub fn parse(name: &str) -> Result<BinaryCode> {
        if name == "hamming74" {
            return Ok(BinaryCode::Hamming74);
        }
        if let Some(r) = name.strip_prefix("rep") {
            if let Ok(reps) = r.parse::<usize>() {
                return repetition_code(reps);
            }
        }
        Err(Error::UnknownLabel {
            label: name.to_string(),
        })
    }

    pub fn name(&self) -> String {
        match self {
            BinaryCode::Repetition { reps } => format!("rep{reps}"),
            BinaryCode::Hamming74 => "hamming74".to_string(),
        }
    }

    /// Source bits per block.
    pub fn k(&self) -> usize {
        match self {
            BinaryCode::Repetition { .. } => 1,
            BinaryCode::Hamming74 => 4,
        }
    }

    /// Transmitted bits per block.
    pub fn n(&self) -> usize {
        match self {
            BinaryCode::Repetition { reps } => *reps,
            BinaryCode::Hamming74 => 7,
        }
    }

    /// Source bits per transmitted bit, k/n.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn encode_word(&self, word: u32) -> u32 {
        match self {
            BinaryCode::Repetition { reps } => {
                if word & 1 == 1 {
                    (1u32 << reps) - 1
                } else {
                    0
                }
            }
            BinaryCode::Hamming74 => {
                let d1 = (word >> 3) & 1;
                let d2 = (word >> 2) & 1;
                let d3 = (word >> 1) & 1;
                let d4 = word & 1;
                let p1 = d1 ^ d2 ^ d4;
                let p2 = d1 ^ d3 ^ d4;
                let p3 = d2 ^ d3 ^ d4;
                (word << 3) | (p1 << 2) | (p2 << 1) | p3
            }
        }
    }

    pub fn decode_word(&self, received: u32) -> u32 {
        match self {
            BinaryCode::Repetition { reps } => {
                let ones = received.count_ones() as usize;
                (ones > reps / 2) as u32
            }
            BinaryCode::Hamming74 => {
                let bit = |i: u32| (received >> (6 - i)) & 1;
                let (d1, d2, d3, d4) = (bit(0), bit(1), bit(2), bit(3));
                let (p1, p2, p3) = (bit(4), bit(5), bit(6));
                let s1 = p1 ^ d1 ^ d2 ^ d4;
                let s2 = p2 ^ d1 ^ d3 ^ d4;
                let s3 = p3 ^ d2 ^ d3 ^ d4;
                // Syndrome pattern (s1 s2 s3) -> flipped position, counted
                // from the first transmitted bit; 0 means clean.
                const POSITION: [u32; 8] = [0, 7, 6, 3, 5, 2, 1, 4];
                let syndrome = (s1 << 2) | (s2 << 1) | s3;
                let mut corrected = received;
                if syndrome != 0 {
                    corrected ^= 1 << (7 - POSITION[syndrome as usize]);
                }
                (corrected >> 3) & 0xF
            }
        }
    }
}

/// Exact block and per-source-bit error probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactError {
    pub block_error: f64,
    pub bit_error: f64,
}

/// Exhaustively enumerate the 2^n error patterns, weighted
/// f^w (1-f)^(n-w), averaged over uniform source words.
pub fn exact_error(code: BinaryCode, f: f64) -> Result<ExactError> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange {
            name: "flip probability",
            value: f,
            min: 0.0,
            max: 1.0,
        });
    }
    let n = code.n();
    let k = code.k();
    if n > EXACT_BLOCK_CAP {
        return Err(Error::SizeCapExceeded {
            need: 1u128 << n,
            cap: 1u128 << EXACT_BLOCK_CAP,
            context: "exact error-pattern enumeration".to_string(),
        });
    }
    let weight_prob: Vec<f64> = (0..=n)
        .map(|w| f.powi(w as i32) * (1.0 - f).powi((n - w) as i32))
        .collect();
    let mut block_error = 0.0;
    let mut bit_error = 0.0;
    let words = 1u32 << k;
    for word in 0..words {
        let sent = code.encode_word(word);
        for pattern in 0..(1u32 << n) {
            let p = weight_prob[pattern.count_ones() as usize];
            if p == 0.0 {
                continue;
            }
            let decoded = code.decode_word(sent ^ pattern);
            if decoded != word {
                block_error += p;
                bit_error += p * (decoded ^ word).count_ones() as f64 / k as f64;
            }
        }
    }
    Ok(ExactError {
        block_error: block_error / words as f64,
        bit_error: bit_error / words as f64,
    })
}

/// A seeded Monte-Carlo transmission experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    /// Number of blocks transmitted.
    pub trials: u64,
    pub source_bits: u64,
    pub bit_error_rate: f64,
    pub block_error_rate: f64,
    /// 1.96 sqrt(p(1-p)/trials) around the bit error rate; conservative for
    /// block codes, where bit errors inside one block are correlated.
    pub confidence_halfwidth_95: f64,
    pub seed: u64,
}

/// Push `source_bits` uniform bits through encoder, BSC(f), decoder.
/// Deterministic for a given seed, independent of worker count: trials are
/// split into fixed-size partitions that each draw their own substream.
pub fn simulate_transmission(
    code: BinaryCode,
    f: f64,
    source_bits: u64,
    seed: u64,
) -> Result<ErrorReport> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange {
            name: "flip probability",
            value: f,
            min: 0.0,
            max: 1.0,
        });
    }
    let k = code.k() as u64;
    if source_bits == 0 || source_bits % k != 0 {
        return Err(Error::OutOfRange {
            name: "source_bits",
            value: source_bits as f64,
            min: k as f64,
            max: f64::INFINITY,
        });
    }
    let blocks = source_bits / k;
    let partitions = blocks.div_ceil(PARTITION_BLOCKS);
    let (bit_errors, block_errors): (u64, u64) = (0..partitions)
        .into_par_iter()
        .map(|p| {
            let start = p * PARTITION_BLOCKS;
            let count = PARTITION_BLOCKS.min(blocks - start);
            let mut rng = CounterRng::substream(seed, p);
            let mut bit_errors = 0u64;
            let mut block_errors = 0u64;
            let n = code.n();
            let kk = code.k();
            for _ in 0..count {
                let mut word = 0u32;
                for _ in 0..kk {
                    word = (word << 1) | rng.next_bool(0.5) as u32;
                }
                let mut received = code.encode_word(word);
                for bit in 0..n {
                    if rng.next_bool(f) {
                        received ^= 1 << (n - 1 - bit);
                    }
                }
                let decoded = code.decode_word(received);
                if decoded != word {
                    block_errors += 1;
                    bit_errors += u64::from((decoded ^ word).count_ones());
                }
            }
            (bit_errors, block_errors)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let bit_error_rate = bit_errors as f64 / source_bits as f64;
    let block_error_rate = block_errors as f64 / blocks as f64;
    Ok(ErrorReport {
        trials: blocks,
        source_bits,
        bit_error_rate,
        block_error_rate,
        confidence_halfwidth_95: 1.96
            * (bit_error_rate * (1.0 - bit_error_rate) / blocks as f64).sqrt(),
        seed,
    })
}

/// A family of codes to sweep along the rate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    /// Repetition codes r = 1, 3, 5, ... up to `max_reps`.
    Repetition { max_reps: usize },
    Hamming,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateErrorPoint {
    pub code: String,
    pub rate: f64,
    pub bit_error: f64,
    pub block_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateErrorCurve {
    pub points: Vec<RateErrorPoint>,
    /// Channel capacity 1 - H2(f) of the underlying BSC, the rate above
    /// which no code family can drive errors to zero.
    pub capacity_bits: f64,
}

/// Exact rate/error trade-off for every member of `family` on BSC(f).
pub fn rate_error_curve(family: CodeFamily, f: f64) -> Result<RateErrorCurve> {
    let codes: Vec<BinaryCode> = match family {
        CodeFamily::Repetition { max_reps } => {
            if max_reps == 0 {
                return Err(Error::OutOfRange {
                    name: "max_reps",
                    value: 0.0,
                    min: 1.0,
                    max: EXACT_BLOCK_CAP as f64,
                });
            }
            (1..=max_reps.min(EXACT_BLOCK_CAP))
                .filter(|r| r % 2 == 1)
                .map(|reps| BinaryCode::Repetition { reps })
                .collect()
        }
        CodeFamily::Hamming => vec![BinaryCode::Hamming74],
    };
    let points = codes
        .into_iter()
        .map(|code| {
            let e = exact_error(code, f)?;
            Ok(RateErrorPoint {
                code: code.name(),
                rate: code.rate(),
                bit_error: e.bit_error,
                block_error: e.block_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateErrorCurve {
        points,
        capacity_bits: 1.0 - binary_entropy(f),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CliffPoint {
    pub f_actual: f64,
    pub bit_error: f64,
    pub block_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliffSweep {
    /// Noise level the deployment assumed; syndrome and majority decoders do
    /// not depend on it, so the sweep charts pure mismatch degradation.
    pub f_design: f64,
    pub points: Vec<CliffPoint>,
}

/// Exact error rates of a fixed code across a range of actual noise levels.
pub fn cliff_sweep(
    code: BinaryCode,
    f_design: f64,
    f_min: f64,
    f_max: f64,
    steps: usize,
) -> Result<CliffSweep> {
    if steps < 2 || f_min > f_max {
        return Err(Error::OutOfRange {
            name: "steps",
            value: steps as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let points = (0..steps)
        .map(|i| {
            let f = f_min + (f_max - f_min) * i as f64 / (steps - 1) as f64;
            let e = exact_error(code, f)?;
            Ok(CliffPoint {
                f_actual: f,
                bit_error: e.bit_error,
                block_error: e.block_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CliffSweep { f_design, points })
}
