//! A discrete information-theory laboratory.
//!
//! Finite distributions and their entropies, channels and mutual
//! information, channel capacity by projected gradient ascent, typical-set
//! and entropy-rate analysis of stochastic processes, lossless source codes,
//! binary channel-coding experiments, encoder optimization, and
//! rate-distortion curves. Everything is exact-arithmetic where counting is
//! involved and deterministic under a fixed seed everywhere randomness is.
//!
//! All logarithms are base 2; every information quantity is in bits.

pub mod capacity;
pub mod channel;
pub mod comb;
pub mod coding_sim;
pub mod dist;
pub mod encoder;
pub mod error;
pub mod gallery;
pub mod hist;
pub mod process;
pub mod rate_distortion;
pub mod rng;
pub mod source_coding;
pub mod space;

pub use capacity::{
    channel_capacity, channel_capacity_traced, decomposition_report, input_divergences,
    mi_gradient, project_simplex, AscentConfig, CapacityResult, MiDecomposition, Projection,
    TracePoint,
};
pub use channel::{
    compose_channels, conditional_entropy, conditional_entropy_spectrum, extend_channel,
    joint_distribution, joint_entropy, mutual_information, output_distribution,
    pointwise_quantities, Channel, Direction, EntropySpectrum, JointDistribution,
    PointwiseQuantities, SpectrumClass,
};
pub use coding_sim::{
    bsc, cliff_sweep, exact_error, hamming74, rate_error_curve, repetition_code,
    simulate_transmission, BinaryCode, CliffPoint, CliffSweep, CodeFamily, ErrorReport,
    ExactError, RateErrorCurve, RateErrorPoint,
};
pub use dist::{entropy_of, 
    binary_entropy, discretized_entropy, entropy, max_entropy, redundancy, self_information,
    Distribution,
};
pub use encoder::{
    brute_force_encoder, encoder_mi, matching_experiment, optimize_stochastic_encoder,
    DeterministicEncoder, Encoder, MatchEntry, StochasticOptResult,
};
pub use error::{Error, Result};
pub use hist::Histogram;
pub use process::{
    conditional_entropy_rate, information_histogram, joint_entropy_rate, process_redundancy,
    sample_sequence, typical_set, InfoHistogram, MarkovChain, ProcessModel, SequenceSample,
    TypicalSetReport,
};
pub use rate_distortion::{
    average_distortion, rd_curve, rd_point, DistortionMatrix, RDPoint, RDSolve,
};
pub use rng::CounterRng;
pub use source_coding::{
    block_code, code_diagnostics, decode, encode, huffman_code, CodeBook, CodeDiagnostics,
};
pub use space::{Outcome, Space};
