//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p circbin --test acceptance` (add `--release` for
//! representative timings).

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use circbin::gates::{flat_orthogonal_pair, max_growth, perturbation_violations};
use circbin::io::{generate_pointset, GenerateParams, PointSetKind};
use circbin_core::rng::derive_seed;
use circbin_core::transforms::{circulant_apply, fwht};
use circbin_core::validation::{
    conditioning_experiment, decomposition_experiment, distortion_experiment, hadamard_coherence_experiment,
    DistortionParams,
};
use circbin_core::{CirculantOperator, Operator, OperatorKind, RandomizedOperator, Rng};

type Outcome = (bool, String);

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(C_h x)[i] = Σ_j h[(i + j) mod n] x[j]`.
fn naive_circulant(h: &[f64], x: &[f64]) -> Vec<f64> {
    let n = h.len();
    (0..n).map(|i| (0..n).map(|j| h[(i + j) % n] * x[j]).sum()).collect()
}

fn dense_circulant_rows(op: &CirculantOperator) -> Vec<Vec<f64>> {
    let h = op.generator();
    let n = h.len();
    op.selection()
        .indices()
        .iter()
        .map(|&i| (0..n).map(|j| h[(i + j) % n] * op.modulator()[j]).collect())
        .collect()
}

fn dense_randomized_rows(op: &RandomizedOperator) -> Vec<Vec<f64>> {
    let n = op.padded_dim();
    let s = 1.0 / (n as f64).sqrt();
    let hadamard = |l: usize, j: usize| if (l & j).count_ones().is_multiple_of(2) { s } else { -s };
    dense_circulant_rows(op.inner())
        .into_iter()
        .map(|row| {
            (0..n)
                .map(|j| (0..n).map(|l| row[l] * hadamard(l, j)).sum::<f64>() * op.signs()[j])
                .collect()
        })
        .collect()
}

/// Compares signs on every coordinate where the dense product is clearly nonzero.
fn sign_mismatches(rows: &[Vec<f64>], x: &[f64], code: &[i8]) -> usize {
    let mut padded = x.to_vec();
    padded.resize(rows[0].len(), 0.0);
    rows.iter()
        .zip(code)
        .filter(|(row, &bit)| {
            let v = dot(row, &padded);
            v.abs() > 1e-9 && (v > 0.0) != (bit > 0)
        })
        .count()
}

fn kernel_oracle() -> Outcome {
    let mut rng = Rng::stream(101, 0);
    let mut worst = 0.0f64;
    for n in [4, 64, 1024, 4096] {
        for _ in 0..100 {
            let h = rng.normal_vec(n);
            let x = rng.normal_vec(n);
            let fast = circulant_apply(&h, &x).unwrap();
            let slow = naive_circulant(&h, &x);
            worst = fast.iter().zip(&slow).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
        }
    }
    (worst <= 1e-10, format!("max abs diff {worst:.3e} <= 1e-10"))
}

fn fwht_unitary() -> Outcome {
    let mut rng = Rng::stream(102, 0);
    let (mut norm_dev, mut inv_dev) = (0.0f64, 0.0f64);
    for n in [2, 256, 1 << 20] {
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
            let y = fwht(&x).unwrap();
            norm_dev = norm_dev.max((dot(&y, &y).sqrt() / dot(&x, &x).sqrt() - 1.0).abs());
            let z = fwht(&y).unwrap();
            inv_dev = z.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(inv_dev, f64::max);
        }
    }
    (
        norm_dev <= 1e-12 && inv_dev <= 1e-12,
        format!("norm ratio deviation {norm_dev:.3e}, involution error {inv_dev:.3e}, both <= 1e-12"),
    )
}

fn dense_equivalence() -> Outcome {
    let (n, k) = (64, 16);
    let mut rng = Rng::stream(103, 0);
    let mut mismatches = 0;
    for t in 0..100u64 {
        let x = rng.normal_vec(n);
        let circ = CirculantOperator::sample(n, k, t).unwrap();
        let code = Operator::from(circ.clone()).embed(&x).unwrap();
        mismatches += sign_mismatches(&dense_circulant_rows(&circ), &x, code.bits());
        let rand = RandomizedOperator::sample(n, k, t).unwrap();
        let code = Operator::from(rand.clone()).embed(&x).unwrap();
        mismatches += sign_mismatches(&dense_randomized_rows(&rand), &x, code.bits());
    }
    (
        mismatches == 0,
        format!("{mismatches} sign mismatches over 2 x 100 operator/input pairs"),
    )
}

fn gaussian_concentration() -> Outcome {
    let (n, k, ops) = (64, 256, 200u64);
    let mut rng = Rng::stream(104, 0);
    let mut ok = true;
    let mut detail = Vec::new();
    for theta in [0.1, 0.25, 0.5] {
        let x = normalize(rng.normal_vec(n));
        let b = rng.normal_vec(n);
        let proj = dot(&x, &b);
        let b = normalize(b.iter().zip(&x).map(|(p, q)| p - proj * q).collect());
        let phi = theta * PI;
        let y: Vec<f64> = x.iter().zip(&b).map(|(p, q)| phi.cos() * p + phi.sin() * q).collect();
        let mean = (0..ops)
            .map(|s| {
                let op = Operator::sample(OperatorKind::Gaussian, n, k, derive_seed(104, &[s])).unwrap();
                let (cx, cy) = (op.embed(&x).unwrap(), op.embed(&y).unwrap());
                cx.bits().iter().zip(cy.bits()).filter(|(a, b)| a != b).count() as f64 / k as f64
            })
            .sum::<f64>()
            / ops as f64;
        let tol = 4.0 * (theta * (1.0 - theta) / (k as f64 * ops as f64)).sqrt();
        ok &= (mean - theta).abs() <= tol;
        detail.push(format!("theta {theta}: |{mean:.5} - theta| <= {tol:.5}"));
    }
    (ok, detail.join("; "))
}

fn distortion_gate() -> Outcome {
    let ps = generate_pointset(PointSetKind::FlatSigns, 1024, 32, 105, GenerateParams::default()).unwrap();
    let run = |kind| {
        let params = DistortionParams {
            kind,
            k: 1024,
            trials: 50,
            seed: 105,
            delta_target: 0.15,
            record_pairs: false,
        };
        distortion_experiment(&ps, &params).unwrap()
    };
    let gauss = run(OperatorKind::Gaussian);
    let rand = run(OperatorKind::Randomized);
    (
        rand.success_fraction >= 0.90 && gauss.success_fraction >= 0.95,
        format!(
            "randomized success {:.2} >= 0.90 (max distortion {:.4}), gaussian success {:.2} >= 0.95 (max distortion {:.4})",
            rand.success_fraction, rand.max_distortion, gauss.success_fraction, gauss.max_distortion
        ),
    )
}

fn conditioning_rate() -> Outcome {
    let (x, y) = flat_orthogonal_pair(256);
    let medians: Vec<f64> = [8, 32, 128]
        .iter()
        .map(|&k| conditioning_experiment(&x, &y, k, 200, 106).unwrap().median())
        .collect();
    let growth = max_growth(&medians);
    (
        growth <= 6.0,
        format!("medians {medians:.4?} at k = 8, 32, 128; largest step ratio {growth:.3} <= 6"),
    )
}

fn hadamard_gates() -> Outcome {
    let ps = generate_pointset(PointSetKind::UniformSphere, 1024, 1000, 107, GenerateParams::default()).unwrap();
    let rep = hadamard_coherence_experiment(&ps, 100, 107, 2.0).unwrap();
    let within = rep.fraction_within_bound(2.0);
    let floor = 1.0 - 10.0 / 1024.0;
    (
        within >= 0.99 && rep.fraction_good >= floor,
        format!(
            "bound x2 held in {within:.2} of trials (>= 0.99); fraction_good {:.4} >= {floor:.4}",
            rep.fraction_good
        ),
    )
}

fn decomposition_gates() -> Outcome {
    let (x, y) = flat_orthogonal_pair(256);
    let rep = decomposition_experiment(&x, &y, 8, 0.2, 100, 108).unwrap();
    let spectral = rep.fraction_spectral_at_most(7.0);
    let medians: Vec<f64> = [8, 32, 128]
        .iter()
        .map(|&k| {
            decomposition_experiment(&x, &y, k, 0.2, 100, 108)
                .unwrap()
                .median_max_projection()
        })
        .collect();
    let growth = max_growth(&medians);
    (
        spectral >= 0.99 && growth <= 6.0,
        format!("norm <= 7 in {spectral:.2} of trials (>= 0.99); max projection medians {medians:.4?}, step ratio {growth:.3} <= 6"),
    )
}

fn perturbation() -> Outcome {
    let violations = perturbation_violations(32, 10_000, 109).unwrap();
    (violations == 0, format!("{violations} violations in 10000 quadruples"))
}

/// Runs gen, embed, eval and sweep inside `dir` with a fixed configuration
/// and returns every artifact.
fn pipeline(dir: &Path, threads: &str) -> Vec<Vec<u8>> {
    std::fs::create_dir_all(dir).unwrap();
    let steps: [&[&str]; 4] = [
        &[
            "gen",
            "--kind",
            "uniform_sphere",
            "--n",
            "300",
            "--N",
            "24",
            "--seed",
            "7",
            "--out",
            "ps.bin",
            "--summary",
            "gen.json",
        ],
        &[
            "embed",
            "--input",
            "ps.bin",
            "--kind",
            "randomized",
            "--k",
            "128",
            "--seed",
            "7",
            "--out",
            "codes.csv",
            "--summary",
            "embed.json",
        ],
        &[
            "eval",
            "--input",
            "ps.bin",
            "--codes",
            "codes.csv",
            "--operator",
            "codes.csv.beop",
            "--out",
            "eval.json",
        ],
        &[
            "sweep",
            "--input",
            "ps.bin",
            "--kind",
            "circulant",
            "--k",
            "64,128",
            "--delta",
            "0.3,0.2",
            "--trials",
            "16",
            "--seed",
            "7",
            "--out",
            "sweep.csv",
            "--summary",
            "sweep.json",
        ],
    ];
    for step in steps {
        let status = Command::new(env!("CARGO_BIN_EXE_circbin"))
            .current_dir(dir)
            .args(["--threads", threads])
            .args(step)
            .status()
            .expect("binary runs");
        assert!(status.success(), "circbin {step:?} failed");
    }
    [
        "ps.bin",
        "gen.json",
        "codes.csv",
        "codes.csv.beop",
        "embed.json",
        "eval.json",
        "sweep.csv",
        "sweep.json",
    ]
    .iter()
    .map(|name| std::fs::read(dir.join(name)).unwrap())
    .collect()
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs =
        [("a", "1"), ("b", "1"), ("c", "8"), ("d", "8")].map(|(sub, threads)| pipeline(&dir.path().join(sub), threads));
    let identical = runs.iter().all(|r| *r == runs[0]);
    (
        identical,
        format!(
            "{} artifacts byte-identical across 2 runs x threads {{1, 8}}",
            runs[0].len()
        ),
    )
}

fn mean_embed_time(op: &Operator, x: &[f64], calls: usize) -> Duration {
    let start = Instant::now();
    for _ in 0..calls {
        std::hint::black_box(op.embed(std::hint::black_box(x)).unwrap());
    }
    start.elapsed() / calls as u32
}

fn scaling() -> Outcome {
    let setups: Vec<(Operator, Vec<f64>)> = [18u64, 19, 20]
        .iter()
        .map(|&p| {
            let n = 1usize << p;
            let op = Operator::sample(OperatorKind::Randomized, n, 1024, 111).unwrap();
            let x = normalize(Rng::stream(111, p).normal_vec(n));
            mean_embed_time(&op, &x, 2);
            (op, x)
        })
        .collect();
    // Sizes take turns so that a burst of machine load hits all of them; each
    // keeps its best 20-call average.
    let mut times = [f64::INFINITY; 3];
    for _ in 0..5 {
        for ((op, x), best) in setups.iter().zip(times.iter_mut()) {
            *best = best.min(mean_embed_time(op, x, 20).as_secs_f64());
        }
    }
    let ratios = [times[1] / times[0], times[2] / times[1]];
    (
        ratios.iter().all(|&r| r <= 2.5),
        format!(
            "mean times {:.2} / {:.2} / {:.2} ms at n = 2^18 / 2^19 / 2^20; ratios {:.2}, {:.2} <= 2.5",
            times[0] * 1e3,
            times[1] * 1e3,
            times[2] * 1e3,
            ratios[0],
            ratios[1]
        ),
    )
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            name: "circulant kernel matches naive oracle",
            limit: secs(10),
            check: kernel_oracle,
        },
        Criterion {
            id: 2,
            name: "FWHT unitarity and involution",
            limit: secs(10),
            check: fwht_unitary,
        },
        Criterion {
            id: 3,
            name: "embedders match dense matrices",
            limit: None,
            check: dense_equivalence,
        },
        Criterion {
            id: 4,
            name: "Gaussian baseline concentration",
            limit: None,
            check: gaussian_concentration,
        },
        Criterion {
            id: 5,
            name: "desk-scale distortion gate",
            limit: secs(60),
            check: distortion_gate,
        },
        Criterion {
            id: 6,
            name: "conditioning growth rate",
            limit: secs(60),
            check: conditioning_rate,
        },
        Criterion {
            id: 7,
            name: "Hadamard modulation gates",
            limit: secs(30),
            check: hadamard_gates,
        },
        Criterion {
            id: 8,
            name: "decomposition gates",
            limit: None,
            check: decomposition_gates,
        },
        Criterion {
            id: 9,
            name: "angular perturbation property",
            limit: None,
            check: perturbation,
        },
        Criterion {
            id: 10,
            name: "reproducibility",
            limit: None,
            check: reproducibility,
        },
        Criterion {
            id: 11,
            name: "n log n scaling of randomized embedding",
            limit: None,
            check: scaling,
        },
    ];
    let mut failures = 0;
    for c in criteria {
        let start = Instant::now();
        let (ok, detail) = (c.check)();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|limit| elapsed <= limit);
        let limit = c.limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
        let passed = ok && in_time;
        failures += usize::from(!passed);
        println!(
            "{} criterion {:>2} {}: {detail}; {:.2}s{limit}",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
