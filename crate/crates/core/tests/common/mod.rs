//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use aquanode::device::{ScheduleTrace, TraceEvent};
use aquanode::dsp::InputPlane;
use aquanode::nn::Model;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `|X[k]|` for `k = 0..=n/2` by the defining sum.
pub fn naive_dft_magnitudes(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let a = -2.0 * PI * (k * t) as f64 / n as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            re.hypot(im)
        })
        .collect()
}

pub fn periodic_hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Frames of Hann-windowed naive DFT magnitudes.
pub fn naive_stft(x: &[f64], w: usize, s: usize) -> Vec<Vec<f64>> {
    let win = periodic_hann(w);
    let mut frames = Vec::new();
    let mut start = 0;
    while start + w <= x.len() {
        let seg: Vec<f64> = x[start..start + w]
            .iter()
            .zip(&win)
            .map(|(a, b)| a * b)
            .collect();
        frames.push(naive_dft_magnitudes(&seg));
        start += s;
    }
    frames
}

/// Class probabilities computed directly from the layer definitions.
pub fn naive_forward(model: &Model<f64>, x: &InputPlane) -> Vec<f64> {
    let c = model.config;
    let n = c.n;
    let side = (n - c.kernel) / c.stride + 1;
    let w = |f: usize, u: usize, v: usize| {
        model.conv_weights.data()[f * c.kernel * c.kernel + u * c.kernel + v]
    };
    let mut flat = vec![0.0; side * side * c.num_filters];
    for i in 0..side {
        for j in 0..side {
            for f in 0..c.num_filters {
                let mut z = model.conv_bias.data()[f];
                for u in 0..c.kernel {
                    for v in 0..c.kernel {
                        z += w(f, u, v) * x.get(i * c.stride + u, j * c.stride + v);
                    }
                }
                flat[(i * side + j) * c.num_filters + f] = z.max(0.0);
            }
        }
    }
    let logits: Vec<f64> = (0..c.num_classes)
        .map(|k| {
            model.dense_bias.data()[k]
                + flat
                    .iter()
                    .enumerate()
                    .map(|(idx, h)| h * model.dense_weights.data()[idx * c.num_classes + k])
                    .sum::<f64>()
        })
        .collect();
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|v| v / total).collect()
}

/// Conv pre-activations, for spotting inputs that sit on the ReLU kink.
pub fn conv_pre_activations(model: &Model<f64>, x: &InputPlane) -> Vec<f64> {
    let c = model.config;
    let side = (c.n - c.kernel) / c.stride + 1;
    let mut out = Vec::new();
    for i in 0..side {
        for j in 0..side {
            for f in 0..c.num_filters {
                let mut z = model.conv_bias.data()[f];
                for u in 0..c.kernel {
                    for v in 0..c.kernel {
                        z += model.conv_weights.data()[(f * c.kernel + u) * c.kernel + v]
                            * x.get(i * c.stride + u, j * c.stride + v);
                    }
                }
                out.push(z);
            }
        }
    }
    out
}

pub fn random_plane(rng: &mut ChaCha8Rng, n: usize) -> InputPlane {
    InputPlane::new((0..n * n).map(|_| rng.random_range(0.0..1.0)).collect(), n).unwrap()
}

/// Linearly separable planes: class `c` lights up row band `c`.
pub fn banded_dataset(
    n: usize,
    classes: usize,
    per_class: usize,
    seed: u64,
) -> Vec<(InputPlane, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let band = n / classes;
    let mut out = Vec::new();
    for label in 0..classes {
        for _ in 0..per_class {
            let values = (0..n * n)
                .map(|idx| {
                    let row = idx / n;
                    let base = if row / band == label { 0.8 } else { 0.0 };
                    base + rng.random_range(0.0..0.2)
                })
                .collect();
            out.push((InputPlane::new(values, n).unwrap(), label));
        }
    }
    out
}

/// Checks per-interval energy balance, continuity and affordability.
/// Returns the worst balance residual in mJ.
pub fn audit_trace(trace: &ScheduleTrace, floor_mj: f64) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    let mut prev_end = (0.0, None::<f64>);
    for (i, iv) in trace.intervals.iter().enumerate() {
        let residual =
            (iv.stored_after_mj - (iv.stored_before_mj + iv.harvested_mj - iv.consumed_mj)).abs();
        worst = worst.max(residual);
        if iv.end_s < iv.start_s {
            return Err(format!("interval {i} runs backwards"));
        }
        if (iv.start_s - prev_end.0).abs() > 1e-9 {
            return Err(format!(
                "interval {i} starts at {} after a gap from {}",
                iv.start_s, prev_end.0
            ));
        }
        if let Some(prev_after) = prev_end.1 {
            if (prev_after - iv.stored_before_mj).abs() > 1e-9 {
                return Err(format!("stored energy jumps at interval {i}"));
            }
        }
        if iv.harvested_mj < -1e-12 || iv.consumed_mj < -1e-12 || iv.spilled_mj < -1e-12 {
            return Err(format!("negative flow in interval {i}"));
        }
        if let TraceEvent::Run(_) = iv.event {
            if iv.stored_before_mj - floor_mj < iv.consumed_mj - 1e-12 {
                return Err(format!(
                    "interval {i} ran with {} mJ usable for a {} mJ stage",
                    iv.stored_before_mj - floor_mj,
                    iv.consumed_mj
                ));
            }
            if iv.stored_after_mj < floor_mj - 1e-9 {
                return Err(format!(
                    "stage in interval {i} drains below the operating floor"
                ));
            }
        }
        prev_end = (iv.end_s, Some(iv.stored_after_mj));
    }
    Ok(worst)
}

/// Step used for central differences.
pub const FD_STEP: f64 = 1e-4;

pub struct GradCheck {
    pub components: usize,
    pub worst_rel_err: f64,
    pub worst_at: (usize, usize),
}

/// A random (model, input, label) triple whose conv pre-activations all sit
/// further than one step from the ReLU kink, drawn from `seed` and retried
/// with successive sub-seeds.
pub fn gradient_triple(seed: u64) -> (Model<f64>, InputPlane, usize) {
    use aquanode::nn::ModelConfig;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = [8usize, 12, 16][rng.random_range(0..3)];
        let classes = rng.random_range(2..=6);
        let mut model =
            Model::<f64>::init(ModelConfig::new(n, classes).unwrap(), rng.random()).unwrap();
        for b in model
            .conv_bias
            .data_mut()
            .iter_mut()
            .chain(model.dense_bias.data_mut())
        {
            *b = rng.random_range(-0.2..0.2);
        }
        let x = random_plane(&mut rng, n);
        let label = rng.random_range(0..classes);
        // inputs are in [0, 1), so one step moves any pre-activation by < FD_STEP
        let clear = conv_pre_activations(&model, &x)
            .iter()
            .all(|z| z.abs() > 2.0 * FD_STEP);
        if clear {
            return (model, x, label);
        }
    }
}

pub fn check_gradients(model: &Model<f64>, x: &InputPlane, label: usize) -> GradCheck {
    use aquanode::nn::{backward, loss};
    let grads = backward(model, x, label).unwrap();
    let analytic: Vec<Vec<f64>> = grads.tensors().iter().map(|t| t.data().to_vec()).collect();
    let mut probe = model.clone();
    let mut out = GradCheck {
        components: 0,
        worst_rel_err: 0.0,
        worst_at: (0, 0),
    };
    for (ti, g) in analytic.iter().enumerate() {
        for (i, &a) in g.iter().enumerate() {
            let orig = probe.tensors()[ti].data()[i];
            probe.tensors_mut()[ti].data_mut()[i] = orig + FD_STEP;
            let up = loss(&probe, x, label).unwrap();
            probe.tensors_mut()[ti].data_mut()[i] = orig - FD_STEP;
            let down = loss(&probe, x, label).unwrap();
            probe.tensors_mut()[ti].data_mut()[i] = orig;
            let numeric = (up - down) / (2.0 * FD_STEP);
            let scale = a.abs().max(numeric.abs());
            // both exactly zero for units that never fire
            let rel = if scale == 0.0 {
                0.0
            } else {
                (a - numeric).abs() / scale
            };
            out.components += 1;
            if rel > out.worst_rel_err {
                out.worst_rel_err = rel;
                out.worst_at = (ti, i);
            }
        }
    }
    out
}

pub struct CliRun {
    pub success: bool,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(dir: &std::path::Path, args: &[&str]) -> CliRun {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_aquanode"))
        .args(args)
        .current_dir(dir)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs");
    CliRun {
        success: out.status.success(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Report text with the timestamp header field removed.
pub fn without_timestamp(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"generated_at\""))
        .map(|l| match l.find(" report, generated ") {
            Some(i) => &l[..i],
            None => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Every subcommand in order, in `dir`, with reports written to files.
/// Returns `(subcommand, report text)` pairs plus the produced artifacts.
pub fn cli_pipeline(dir: &std::path::Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let steps: [(&str, &[&str]); 7] = [
        (
            "synth",
            &[
                "synth",
                "--out",
                "train_set",
                "--clips-per-class",
                "20",
                "--seed",
                "1",
                "--report",
                "synth.json",
            ],
        ),
        (
            "synth",
            &[
                "synth",
                "--out",
                "field_set",
                "--clips-per-class",
                "4",
                "--seed",
                "2",
                "--report",
                "field.json",
            ],
        ),
        (
            "train",
            &[
                "train",
                "--dataset",
                "train_set",
                "--out",
                "model.aqnn",
                "--epochs",
                "15",
                "--report",
                "train.json",
            ],
        ),
        (
            "convert",
            &[
                "convert",
                "--model",
                "model.aqnn",
                "--out",
                "model_q.aqnn",
                "--report",
                "convert.json",
            ],
        ),
        (
            "mission",
            &[
                "mission",
                "--model",
                "model_q.aqnn",
                "--dataset",
                "field_set",
                "--trials",
                "16",
                "--seed",
                "4",
                "--attenuation",
                "0.6",
                "--noise",
                "0.08",
                "--channel-seed",
                "5",
                "--report",
                "mission.json",
            ],
        ),
        ("tradeoff", &["tradeoff", "--report", "tradeoff.json"]),
        (
            "report",
            &["report", "mission.json", "--out", "mission.txt"],
        ),
    ];
    for (name, args) in steps {
        let r = run_cli(dir, args);
        if !r.success {
            return Err(format!("{name} failed: {}", r.stderr));
        }
    }
    let mut artifacts = Vec::new();
    for f in [
        "synth.json",
        "field.json",
        "train.json",
        "convert.json",
        "mission.json",
        "tradeoff.json",
        "mission.txt",
    ] {
        let text = std::fs::read_to_string(dir.join(f)).map_err(|e| e.to_string())?;
        artifacts.push((f.to_string(), without_timestamp(&text).into_bytes()));
    }
    for f in [
        "model.aqnn",
        "model_q.aqnn",
        "train_set/00_tone_25hz/0000.wav",
        "field_set/03_noise_130_160hz/0003.wav",
    ] {
        artifacts.push((
            f.to_string(),
            std::fs::read(dir.join(f)).map_err(|e| e.to_string())?,
        ));
    }
    Ok(artifacts)
}
