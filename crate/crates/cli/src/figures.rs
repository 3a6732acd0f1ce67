//! Named experiment bundles: each id produces one directory of CSV/JSON
//! files plus a manifest recording every parameter and seed, so a plotting
//! tool can regenerate the corresponding picture from the data alone.

use std::path::Path;

use serde_json::json;

use itlab_core::capacity::{channel_capacity_traced, decomposition_report, AscentConfig};
use itlab_core::channel::conditional_entropy_spectrum;
use itlab_core::coding_sim::{
    cliff_sweep, hamming74, rate_error_curve, simulate_transmission, CodeFamily,
};
use itlab_core::dist::{entropy, max_entropy, redundancy, Distribution};
use itlab_core::encoder::matching_experiment;
use itlab_core::gallery;
use itlab_core::process::{
    conditional_entropy_rate, information_histogram, joint_entropy_rate, sample_sequence,
    ProcessModel,
};
use itlab_core::rate_distortion::{rd_curve, DistortionMatrix};
use itlab_core::source_coding::{code_diagnostics, encode, huffman_code};
use itlab_core::Channel;

use crate::output::{atomic_write, fmt_sig, json_text};
use crate::{run_err, CliError, CliResult};

struct Bundle<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl<'a> Bundle<'a> {
    fn new(dir: &'a Path) -> Self {
        Bundle {
            dir,
            files: Vec::new(),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        atomic_write(&self.dir.join(name), contents)
            .map_err(|e| run_err(format!("{}: {e}", self.dir.join(name).display())))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn finish(mut self, id: &str, parameters: serde_json::Value) -> CliResult<()> {
        let manifest = json!({
            "figure": id,
            "parameters": parameters,
            "files": self.files,
        });
        self.files.clear();
        atomic_write(&self.dir.join("manifest.json"), &json_text(manifest))
            .map_err(|e| run_err(format!("manifest: {e}")))
    }
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

pub fn run_figure(id: &str, dir: &Path, seed: u64) -> CliResult<()> {
    match id {
        "2" => entropy_and_codes(id, dir),
        "3" => information_histograms(id, dir),
        "4" => redundancy_and_typicality(id, dir, seed),
        "6" => entropy_rate_convergence(id, dir, seed),
        "7" => rate_distortion_curve(id, dir),
        "9-analog" => capacity_tradeoff(id, dir),
        "10-analog" => source_channel_matching(id, dir),
        "12" => coding_experiment(id, dir, seed),
        "13" => extended_channel_spectra(id, dir),
        other => Err(CliError::Usage(format!(
            "--id: unknown figure id {other:?} (known: 2, 3, 4, 6, 7, 9-analog, 10-analog, 12, 13)"
        ))),
    }
}

/// The two four-color sources with their optimal codes and the cost of
/// encoding a counts-matched 16-draw sequence under each.
fn entropy_and_codes(id: &str, dir: &Path) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let cases = [
        ("uniform", gallery::uniform_colors(), uniform_sequence()),
        ("skewed", gallery::skewed_colors(), skewed_sequence()),
    ];
    let mut encodings = Vec::new();
    for (name, dist, sequence) in cases {
        let code = huffman_code(&dist);
        let diag = code_diagnostics(&code, &dist).map_err(|e| run_err(e.to_string()))?;
        let bits = encode(&code, &sequence).map_err(|e| run_err(e.to_string()))?;
        bundle.write(&format!("{name}_dist.json"), &format!("{}\n", dist.to_json()))?;
        bundle.write(&format!("{name}_code.json"), &format!("{}\n", code.to_json()))?;
        encodings.push(json!({
            "distribution": name,
            "entropy_bits": entropy(&dist),
            "expected_length_bits": diag.expected_length_bits,
            "kraft_sum": diag.kraft_sum,
            "redundancy_of_code_bits": diag.redundancy_of_code_bits,
            "sequence": sequence,
            "bits": bits,
            "bit_count": bits.len(),
        }));
    }
    bundle.write("encodings.json", &json_text(json!(encodings)))?;
    bundle.finish(id, json!({ "sequence_length": 16 }))
}

fn uniform_sequence() -> Vec<String> {
    ["blue", "gray", "yellow", "green"]
        .iter()
        .cycle()
        .take(16)
        .map(|s| s.to_string())
        .collect()
}

/// 16 draws with the expected counts (8, 4, 2, 2).
fn skewed_sequence() -> Vec<String> {
    ["blue", "gray", "blue", "yellow", "blue", "gray", "blue", "green"]
        .iter()
        .cycle()
        .take(16)
        .map(|s| s.to_string())
        .collect()
}

/// Per-sequence information histograms at growing block lengths: the mass
/// concentrates on the typical band.
fn information_histograms(id: &str, dir: &Path) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let dist = gallery::skewed_colors();
    let bins = 64;
    let lengths = [2usize, 4, 8, 16, 32];
    bundle.write("dist.json", &format!("{}\n", dist.to_json()))?;
    for n in lengths {
        let hist = information_histogram(&dist, n, bins).map_err(|e| run_err(e.to_string()))?;
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
        bundle.write(
            &format!("info_hist_n{n}.csv"),
            &csv("bin_left,bin_right,seq_count,prob_mass", rows),
        )?;
    }
    bundle.finish(id, json!({ "bins": bins, "lengths": lengths }))
}

/// Entropy, maximum entropy, and redundancy of the two sources, with a
/// sampled sequence from each.
fn redundancy_and_typicality(id: &str, dir: &Path, seed: u64) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let mut summary = Vec::new();
    let mut samples = Vec::new();
    for (name, dist) in [
        ("uniform", gallery::uniform_colors()),
        ("skewed", gallery::skewed_colors()),
    ] {
        summary.push(json!({
            "distribution": name,
            "entropy_bits": entropy(&dist),
            "max_entropy_bits": max_entropy(dist.len()).unwrap(),
            "redundancy_bits": redundancy(&dist),
        }));
        let sample = sample_sequence(&ProcessModel::Iid(dist.clone()), 16, seed);
        let labels: Vec<&str> = sample
            .symbols
            .iter()
            .map(|&i| dist.space().label(i))
            .collect();
        samples.push(json!({ "distribution": name, "sequence": labels, "seed": seed }));
        bundle.write(&format!("{name}_dist.json"), &format!("{}\n", dist.to_json()))?;
    }
    bundle.write("summary.json", &json_text(json!(summary)))?;
    bundle.write("samples.json", &json_text(json!(samples)))?;
    bundle.finish(id, json!({ "seed": seed, "sample_length": 16 }))
}

/// Joint vs conditional entropy rate of the stay-probability chain.
fn entropy_rate_convergence(id: &str, dir: &Path, seed: u64) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let stay = 0.625;
    let chain = gallery::stay_chain(stay);
    bundle.write("chain.json", &format!("{}\n", chain.to_json()))?;
    let rows = (1..=64)
        .map(|n| {
            format!(
                "{},{},{}",
                n,
                fmt_sig(joint_entropy_rate(&chain, n)),
                fmt_sig(conditional_entropy_rate(&chain, n))
            )
        })
        .collect();
    bundle.write("entropy_rate.csv", &csv("n,joint_rate,cond_rate", rows))?;
    let sample = sample_sequence(&ProcessModel::Markov(chain.clone()), 32, seed);
    let labels: Vec<&str> = sample
        .symbols
        .iter()
        .map(|&i| chain.space().label(i))
        .collect();
    bundle.write(
        "sample.json",
        &json_text(json!({ "sequence": labels, "seed": seed })),
    )?;
    bundle.finish(id, json!({ "stay_probability": stay, "n_max": 64, "seed": seed }))
}

/// Rate-distortion curve of the uniform four-color source under 0/1 loss.
fn rate_distortion_curve(id: &str, dir: &Path) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let source = gallery::uniform_colors();
    let d = DistortionMatrix::hamming(gallery::color_space());
    let points = 50;
    bundle.write("source.json", &format!("{}\n", source.to_json()))?;
    bundle.write("distortion.json", &format!("{}\n", d.to_json()))?;
    let curve = rd_curve(&source, &d, points).map_err(|e| run_err(e.to_string()))?;
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
    bundle.write("rd_curve.csv", &csv("distortion,rate_bits,slope", rows))?;
    bundle.finish(id, json!({ "points": points }))
}

/// Capacity optimization on the disjoint-plus-clean channel: the full
/// objective beats both single-term strategies.
fn capacity_tradeoff(id: &str, dir: &Path) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let ch = gallery::tradeoff_channel();
    bundle.write("channel.json", &format!("{}\n", ch.to_json()))?;
    let cfg = AscentConfig::default();
    let (result, trace) =
        channel_capacity_traced(&ch, &cfg, true).map_err(|e| run_err(e.to_string()))?;
    let rows = trace
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
    bundle.write("trace.csv", &csv("iteration,mi_bits,grad_norm", rows))?;

    let strategy = |name: &str, probs: Vec<f64>| -> CliResult<serde_json::Value> {
        let px = Distribution::over(ch.input_space().clone(), probs)
            .map_err(|e| run_err(e.to_string()))?;
        let report = decomposition_report(&ch, &px).map_err(|e| run_err(e.to_string()))?;
        Ok(json!({
            "strategy": name,
            "input": px.probs(),
            "mi_bits": report.mi_bits,
            "h_y_bits": report.h_y_bits,
            "h_y_given_x_bits": report.h_y_given_x_bits,
        }))
    };
    let strategies = json!([
        strategy("output_entropy_only", vec![0.5, 0.5, 0.0])?,
        strategy("least_noise_only", vec![0.0, 0.0, 1.0])?,
        strategy("full_objective", result.optimal_input.probs().to_vec())?,
    ]);
    bundle.write("strategies.json", &json_text(strategies))?;
    bundle.write(
        "capacity.json",
        &json_text(json!({
            "capacity_bits": result.capacity_bits,
            "optimal_input": {
                "labels": result.optimal_input.space().labels(),
                "probs": result.optimal_input.probs(),
            },
            "iterations": result.iterations,
            "final_gradient_norm": result.final_gradient_norm,
            "converged": result.converged,
        })),
    )?;
    bundle.finish(
        id,
        json!({ "learning_rate": cfg.learning_rate, "tolerance": cfg.tolerance }),
    )
}

/// The matching table over the reconstructed symmetric/asymmetric sources
/// and channels.
fn source_channel_matching(id: &str, dir: &Path) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let sources = vec![
        ("symmetric_source".to_string(), gallery::symmetric_match_source()),
        (
            "asymmetric_source".to_string(),
            gallery::asymmetric_match_source(),
        ),
    ];
    let channels = vec![
        (
            "symmetric_channel".to_string(),
            gallery::symmetric_match_channel(),
        ),
        (
            "asymmetric_channel".to_string(),
            gallery::asymmetric_match_channel(),
        ),
    ];
    for (name, dist) in &sources {
        bundle.write(&format!("{name}.json"), &format!("{}\n", dist.to_json()))?;
    }
    for (name, ch) in &channels {
        bundle.write(&format!("{name}.json"), &format!("{}\n", ch.to_json()))?;
    }
    let cfg = AscentConfig {
        tolerance: 1e-12,
        ..AscentConfig::default()
    };
    let table = matching_experiment(&sources, &channels, &cfg).map_err(|e| run_err(e.to_string()))?;
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
    bundle.write("match.csv", &csv("source,channel,best_mi,capacity,gap", rows))?;
    bundle.finish(id, json!({ "search": "exhaustive injective" }))
}

/// Repetition and Hamming codes on the f = 0.2 binary symmetric channel:
/// exact rate/error curves, Monte-Carlo checks, and the mismatch sweep.
fn coding_experiment(id: &str, dir: &Path, seed: u64) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let f = 0.2;
    let bits = 1_000_000u64;

    let mut rows = Vec::new();
    for family in [CodeFamily::Repetition { max_reps: 11 }, CodeFamily::Hamming] {
        let curve = rate_error_curve(family, f).map_err(|e| run_err(e.to_string()))?;
        for p in &curve.points {
            rows.push(format!(
                "{},{},{},{},{}",
                p.code,
                fmt_sig(p.rate),
                fmt_sig(p.bit_error),
                fmt_sig(p.block_error),
                fmt_sig(curve.capacity_bits)
            ));
        }
    }
    bundle.write(
        "rate_error.csv",
        &csv("code,rate,bit_error,block_error,capacity_bits", rows),
    )?;

    for code in [
        itlab_core::coding_sim::repetition_code(3).map_err(|e| run_err(e.to_string()))?,
        hamming74(),
    ] {
        let report =
            simulate_transmission(code, f, bits, seed).map_err(|e| run_err(e.to_string()))?;
        bundle.write(
            &format!("sim_{}.json", code.name()),
            &json_text(json!({
                "code": code.name(),
                "flip_probability": f,
                "trials": report.trials,
                "source_bits": report.source_bits,
                "bit_error_rate": report.bit_error_rate,
                "block_error_rate": report.block_error_rate,
                "confidence_halfwidth_95": report.confidence_halfwidth_95,
                "seed": report.seed,
            })),
        )?;
    }

    let sweep =
        cliff_sweep(hamming74(), f, 0.0, 0.5, 26).map_err(|e| run_err(e.to_string()))?;
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
    bundle.write("cliff_hamming74.csv", &csv("f_actual,bit_error,block_error", rows))?;
    bundle.finish(
        id,
        json!({ "flip_probability": f, "monte_carlo_bits": bits, "seed": seed }),
    )
}

/// Conditional-entropy spectra of a heterogeneous channel at growing block
/// lengths: the per-input noise concentrates at the average.
fn extended_channel_spectra(id: &str, dir: &Path) -> CliResult<()> {
    let mut bundle = Bundle::new(dir);
    let ch = gallery::heterogeneous_noise_channel();
    let bins = 64;
    let lengths = [1usize, 2, 4, 8];
    bundle.write("channel.json", &format!("{}\n", ch.to_json()))?;
    for n in lengths {
        for name in spectrum_files(&ch, n, bins, dir, &format!("n{n}_"))? {
            bundle.files.push(name);
        }
    }
    bundle.finish(id, json!({ "bins": bins, "lengths": lengths }))
}

/// Write `<prefix>spectrum.csv` (when the input space is small enough to
/// list), `<prefix>classes.csv` and `<prefix>histogram.csv` into `dir`;
/// returns the file names written.
pub fn spectrum_files(
    ch: &Channel,
    n: usize,
    bins: usize,
    dir: &Path,
    prefix: &str,
) -> CliResult<Vec<String>> {
    let spectrum = conditional_entropy_spectrum(ch, n, bins).map_err(|e| run_err(e.to_string()))?;
    let mut written = Vec::new();
    let mut put = |name: String, contents: String| -> CliResult<()> {
        atomic_write(&dir.join(&name), &contents)
            .map_err(|e| run_err(format!("{}: {e}", dir.join(&name).display())))?;
        written.push(name);
        Ok(())
    };

    if !spectrum.per_input.is_empty() {
        let rows = spectrum
            .per_input
            .iter()
            .map(|(label, value)| format!("{label},{}", fmt_sig(*value)))
            .collect();
        put(
            format!("{prefix}spectrum.csv"),
            csv("input_label,cond_entropy_bits", rows),
        )?;
    }

    let rows = spectrum
        .classes
        .iter()
        .map(|c| {
            let counts = c
                .counts
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("|");
            format!(
                "{counts},{},{},{}",
                c.multiplicity,
                fmt_sig(c.entropy_per_symbol_bits),
                fmt_sig(c.uniform_mass)
            )
        })
        .collect();
    put(
        format!("{prefix}classes.csv"),
        csv("counts,multiplicity,cond_entropy_bits,uniform_mass", rows),
    )?;

    let rows = (0..spectrum.histogram.bins())
        .map(|b| {
            format!(
                "{},{},{}",
                fmt_sig(spectrum.histogram.edges[b]),
                fmt_sig(spectrum.histogram.edges[b + 1]),
                spectrum.histogram.counts[b]
            )
        })
        .collect();
    put(
        format!("{prefix}histogram.csv"),
        csv("bin_left,bin_right,count", rows),
    )?;
    Ok(written)
}

/// The `extend-spectrum` command body: unprefixed spectrum files in `dir`.
pub fn write_spectrum_files(ch: &Channel, n: usize, bins: usize, dir: &Path) -> CliResult<()> {
    spectrum_files(ch, n, bins, dir, "")?;
    Ok(())
}
