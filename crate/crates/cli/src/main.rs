//! `itlab`: command-line surface for the information-theory laboratory.
//!
//! One subcommand per experiment family; inputs are the JSON formats the
//! library defines, outputs are JSON reports or plot-ready CSV. All numeric
//! output carries 12 significant digits and identical invocations (same
//! seed) produce byte-identical files.

mod figures;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use itlab_core::capacity::{channel_capacity_traced, AscentConfig, Projection};
use itlab_core::coding_sim::{
    cliff_sweep, rate_error_curve, simulate_transmission, BinaryCode, CodeFamily,
};
use itlab_core::dist::{entropy, max_entropy, redundancy, Distribution};
use itlab_core::encoder::matching_experiment;
use itlab_core::process::{
    conditional_entropy_rate, information_histogram, joint_entropy_rate, typical_set, MarkovChain,
};
use itlab_core::rate_distortion::{rd_curve, DistortionMatrix};
use itlab_core::source_coding::{block_code, decode, encode, huffman_code, CodeBook};
use itlab_core::Channel;

use output::{emit, fmt_sig, json_text};

#[derive(Parser)]
#[command(name = "itlab", version, about = "discrete information-theory laboratory")]
struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Output file; `figure` and `extend-spectrum` treat it as a directory.
    /// Defaults to stdout (or `.` for directory outputs).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output encoding, where a command supports more than one.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProjectionArg {
    Euclidean,
    ClampShift,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Repetition,
    Hamming,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of a distribution, in bits.
    Entropy {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Channel capacity by projected gradient ascent.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        /// Learning rate of the ascent.
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        /// Stop when the MI improvement per accepted step drops below this.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "euclidean")]
        projection: ProjectionArg,
        /// Write an `iteration,mi_bits,grad_norm` trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Typical-set census of IID sequences.
    Typical {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Histogram of per-symbol information across all length-n sequences.
    InfoHist {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        bins: usize,
    },
    /// Joint and conditional entropy rates of a Markov chain.
    EntropyRate {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        n_max: usize,
    },
    /// Optimal prefix code (optionally over blocks of symbols).
    Huffman {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        block: Option<usize>,
    },
    /// Encode a JSON array of symbols to an ASCII bit string.
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Decode an ASCII bit string back to a JSON array of symbols.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Monte-Carlo transmission experiment over a binary symmetric channel.
    Simulate {
        /// rep1, rep3, rep5, ... or hamming74.
        #[arg(long)]
        code: String,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        bits: u64,
    },
    /// Exact rate/error trade-off for a code family.
    RateCurve {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 11)]
        r_max: usize,
        #[arg(long)]
        f: f64,
    },
    /// Error rates of a fixed code across a range of actual noise levels.
    Cliff {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 0.0)]
        f_min: f64,
        #[arg(long, default_value_t = 0.5)]
        f_max: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
        /// Noise level the code was nominally deployed for.
        #[arg(long, default_value_t = 0.2)]
        design_f: f64,
    },
    /// Source-channel matching table via exhaustive encoder search.
    Match {
        #[arg(long, num_args = 1..)]
        sources: Vec<PathBuf>,
        #[arg(long, num_args = 1..)]
        channels: Vec<PathBuf>,
    },
    /// Rate-distortion curve of a discrete source.
    RdCurve {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        distortion: PathBuf,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Per-input conditional entropy spectrum of an extended channel.
    ExtendSpectrum {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        bins: usize,
    },
    /// Emit a named experiment bundle (CSV/JSON plus a manifest).
    Figure {
        /// One of: 2, 3, 4, 6, 7, 9-analog, 10-analog, 12, 13.
        #[arg(long)]
        id: String,
    },
}

enum CliError {
    Usage(String),
    Run(String),
}

type CliResult<T> = Result<T, CliError>;

fn run_err(message: impl Into<String>) -> CliError {
    CliError::Run(message.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Run(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// ITLAB_THREADS caps internal parallelism; default is machine parallelism.
fn init_threads() {
    if let Ok(text) = std::env::var("ITLAB_THREADS") {
        if let Ok(threads) = text.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| run_err(format!("{}: {e}", path.display())))
}

fn load_distribution(path: &Path) -> CliResult<Distribution> {
    Distribution::from_json(&read_text(path)?)
        .map_err(|e| run_err(format!("{}: {e}", path.display())))
}

fn load_channel(path: &Path) -> CliResult<Channel> {
    Channel::from_json(&read_text(path)?).map_err(|e| run_err(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, contents: &str) -> CliResult<()> {
    emit(out, contents).map_err(|e| run_err(format!("writing output: {e}")))
}

fn csv(header: &str, rows: Vec<String>) -> String {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    text
}

fn run(cli: Cli) -> CliResult<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Entropy { dist } => {
            let d = load_distribution(&dist)?;
            let text = match cli.format {
                Some(Format::Json) => json_text(json!({
                    "entropy_bits": entropy(&d),
                    "max_entropy_bits": max_entropy(d.len()).map_err(|e| run_err(e.to_string()))?,
                    "redundancy_bits": redundancy(&d),
                })),
                Some(Format::Csv) => csv(
                    "entropy_bits,max_entropy_bits,redundancy_bits",
                    vec![format!(
                        "{},{},{}",
                        fmt_sig(entropy(&d)),
                        fmt_sig(max_entropy(d.len()).unwrap()),
                        fmt_sig(redundancy(&d))
                    )],
                ),
                _ => format!("{}\n", fmt_sig(entropy(&d))),
            };
            write_out(out, &text)
        }

        Command::Capacity {
            channel,
            lr,
            tol,
            max_iter,
            projection,
            trace,
        } => {
            let ch = load_channel(&channel)?;
            let cfg = AscentConfig {
                learning_rate: lr,
                tolerance: tol,
                max_iterations: max_iter,
                projection: match projection {
                    ProjectionArg::Euclidean => Projection::Euclidean,
                    ProjectionArg::ClampShift => Projection::ClampShift,
                },
            };
            let (result, points) = channel_capacity_traced(&ch, &cfg, trace.is_some())
                .map_err(|e| run_err(e.to_string()))?;
            if let Some(trace_path) = trace {
                let rows = points
                    .iter()
                    .map(|p| {
                        format!(
                            "{},{},{}",
                            p.iteration,
                            fmt_sig(p.mi_bits),
                            fmt_sig(p.grad_norm)
                        )
                    })
                    .collect();
                write_out(Some(&trace_path), &csv("iteration,mi_bits,grad_norm", rows))?;
            }
            let text = json_text(json!({
                "capacity_bits": result.capacity_bits,
                "optimal_input": {
                    "labels": result.optimal_input.space().labels(),
                    "probs": result.optimal_input.probs(),
                },
                "iterations": result.iterations,
                "final_gradient_norm": result.final_gradient_norm,
                "converged": result.converged,
            }));
            write_out(out, &text)
        }

        Command::Typical { dist, n, eps } => {
            let d = load_distribution(&dist)?;
            let report = typical_set(&d, n, eps).map_err(|e| run_err(e.to_string()))?;
            let value = json!({
                "n": report.n,
                "epsilon": report.epsilon,
                "entropy_bits": report.entropy_bits,
                "band_low": report.band.0,
                "band_high": report.band.1,
                "typical_class_count": report.typical_class_count,
                "typical_sequence_count": report.typical_sequence_count.to_string(),
                "total_sequence_count": report.total_sequence_count.to_string(),
                "typical_probability_mass": report.typical_probability_mass,
            });
            write_out(out, &json_text(value))
        }

        Command::InfoHist { dist, n, bins } => {
            let d = load_distribution(&dist)?;
            let hist = information_histogram(&d, n, bins).map_err(|e| run_err(e.to_string()))?;
            let rows = (0..hist.histogram.bins())
                .map(|b| {
                    format!(
                        "{},{},{},{}",
                        fmt_sig(hist.histogram.edges[b]),
                        fmt_sig(hist.histogram.edges[b + 1]),
                        hist.histogram.counts[b],
                        fmt_sig(hist.histogram.masses[b])
                    )
                })
                .collect();
            write_out(out, &csv("bin_left,bin_right,seq_count,prob_mass", rows))
        }

        Command::EntropyRate { chain, n_max } => {
            let chain = MarkovChain::from_json(&read_text(&chain)?)
                .map_err(|e| run_err(e.to_string()))?;
            if n_max < 1 {
                return Err(CliError::Usage("--n-max must be at least 1".into()));
            }
            let rows = (1..=n_max)
                .map(|n| {
                    format!(
                        "{},{},{}",
                        n,
                        fmt_sig(joint_entropy_rate(&chain, n)),
                        fmt_sig(conditional_entropy_rate(&chain, n))
                    )
                })
                .collect();
            write_out(out, &csv("n,joint_rate,cond_rate", rows))
        }

        Command::Huffman { dist, block } => {
            let d = load_distribution(&dist)?;
            let cb = match block {
                None | Some(1) => huffman_code(&d),
                Some(n) => block_code(&d, n).map_err(|e| run_err(e.to_string()))?,
            };
            write_out(out, &format!("{}\n", cb.to_json()))
        }

        Command::Encode { code, input } => {
            let cb = CodeBook::from_json(&read_text(&code)?)
                .map_err(|e| run_err(format!("{}: {e}", code.display())))?;
            let symbols: Vec<String> = serde_json::from_str(&read_text(&input)?)
                .map_err(|e| run_err(format!("{}: {e}", input.display())))?;
            let bits = encode(&cb, &symbols).map_err(|e| run_err(e.to_string()))?;
            write_out(out, &format!("{bits}\n"))
        }

        Command::Decode { code, input } => {
            let cb = CodeBook::from_json(&read_text(&code)?)
                .map_err(|e| run_err(format!("{}: {e}", code.display())))?;
            let bits_text = read_text(&input)?;
            let symbols =
                decode(&cb, bits_text.trim()).map_err(|e| run_err(e.to_string()))?;
            let text = serde_json::to_string_pretty(&symbols).expect("symbols serialize");
            write_out(out, &format!("{text}\n"))
        }

        Command::Simulate { code, f, bits } => {
            let code = BinaryCode::parse(&code).map_err(|e| run_err(e.to_string()))?;
            let report = simulate_transmission(code, f, bits, cli.seed)
                .map_err(|e| run_err(e.to_string()))?;
            let value = json!({
                "code": code.name(),
                "flip_probability": f,
                "trials": report.trials,
                "source_bits": report.source_bits,
                "bit_error_rate": report.bit_error_rate,
                "block_error_rate": report.block_error_rate,
                "confidence_halfwidth_95": report.confidence_halfwidth_95,
                "seed": report.seed,
            });
            write_out(out, &json_text(value))
        }

        Command::RateCurve { family, r_max, f } => {
            let family = match family {
                FamilyArg::Repetition => CodeFamily::Repetition { max_reps: r_max },
                FamilyArg::Hamming => CodeFamily::Hamming,
            };
            let curve = rate_error_curve(family, f).map_err(|e| run_err(e.to_string()))?;
            let rows = curve
                .points
                .iter()
                .map(|p| {
                    format!(
                        "{},{},{},{},{}",
                        p.code,
                        fmt_sig(p.rate),
                        fmt_sig(p.bit_error),
                        fmt_sig(p.block_error),
                        fmt_sig(curve.capacity_bits)
                    )
                })
                .collect();
            write_out(
                out,
                &csv("code,rate,bit_error,block_error,capacity_bits", rows),
            )
        }

        Command::Cliff {
            code,
            f_min,
            f_max,
            steps,
            design_f,
        } => {
            let code = BinaryCode::parse(&code).map_err(|e| run_err(e.to_string()))?;
            let sweep = cliff_sweep(code, design_f, f_min, f_max, steps)
                .map_err(|e| run_err(e.to_string()))?;
            let rows = sweep
                .points
                .iter()
                .map(|p| {
                    format!(
                        "{},{},{}",
                        fmt_sig(p.f_actual),
                        fmt_sig(p.bit_error),
                        fmt_sig(p.block_error)
                    )
                })
                .collect();
            write_out(out, &csv("f_actual,bit_error,block_error", rows))
        }

        Command::Match { sources, channels } => {
            let named_sources = sources
                .iter()
                .map(|p| Ok((stem(p), load_distribution(p)?)))
                .collect::<CliResult<Vec<_>>>()?;
            let named_channels = channels
                .iter()
                .map(|p| Ok((stem(p), load_channel(p)?)))
                .collect::<CliResult<Vec<_>>>()?;
            // Tight capacity tolerance keeps gap = capacity - best_mi from
            // dipping below zero when exhaustive search lands exactly on the
            // capacity-achieving input.
            let cfg = AscentConfig {
                tolerance: 1e-12,
                ..AscentConfig::default()
            };
            let table = matching_experiment(&named_sources, &named_channels, &cfg)
                .map_err(|e| run_err(e.to_string()))?;
            let rows = table
                .iter()
                .map(|e| {
                    format!(
                        "{},{},{},{},{}",
                        e.source,
                        e.channel,
                        fmt_sig(e.best_mi_bits),
                        fmt_sig(e.capacity_bits),
                        fmt_sig(e.gap_bits)
                    )
                })
                .collect();
            write_out(out, &csv("source,channel,best_mi,capacity,gap", rows))
        }

        Command::RdCurve {
            source,
            distortion,
            points,
        } => {
            let s = load_distribution(&source)?;
            let d = DistortionMatrix::from_json(&read_text(&distortion)?)
                .map_err(|e| run_err(format!("{}: {e}", distortion.display())))?;
            let curve = rd_curve(&s, &d, points).map_err(|e| run_err(e.to_string()))?;
            let rows = curve
                .iter()
                .map(|p| {
                    format!(
                        "{},{},{}",
                        fmt_sig(p.distortion),
                        fmt_sig(p.rate_bits),
                        fmt_sig(p.slope)
                    )
                })
                .collect();
            write_out(out, &csv("distortion,rate_bits,slope", rows))
        }

        Command::ExtendSpectrum { channel, n, bins } => {
            let ch = load_channel(&channel)?;
            let dir = out.unwrap_or(Path::new("."));
            figures::write_spectrum_files(&ch, n, bins, dir)
        }

        Command::Figure { id } => {
            let dir = cli
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("figure-{id}")));
            figures::run_figure(&id, &dir, cli.seed)
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
