//! Frozen Monte Carlo gates run by `circbin validate`.
//!
//! Thresholds are regression values measured on the reference implementation
//! and sized so that a change of seed does not change the verdict.

use std::fmt;

use circbin_core::geometry::angular_perturbation_bound;
use circbin_core::rng::{derive_seed, Rng};
use circbin_core::validation::{
    conditioning_experiment, decomposition_experiment, distortion_experiment, hadamard_coherence_experiment,
    DistortionParams,
};
use circbin_core::{OperatorKind, Result};
use serde::Serialize;

use crate::io::{generate_pointset, GenerateParams, PointSetKind};

/// Largest allowed growth of a median statistic per 4× step in `k` (4× with 1.5 slack).
pub const GROWTH_LIMIT: f64 = 6.0;
pub const SPECTRAL_LIMIT: f64 = 7.0;
pub const HADAMARD_MULTIPLIER: f64 = 2.0;
pub const HADAMARD_CONSTANT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AtMost => "<=",
            Self::AtLeast => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateResult {
    pub name: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl GateResult {
    pub fn new(name: &str, measured: f64, comparison: Comparison, threshold: f64, detail: String) -> Self {
        let passed = match comparison {
            Comparison::AtMost => measured <= threshold,
            Comparison::AtLeast => measured >= threshold,
        };
        Self {
            name: name.to_owned(),
            measured,
            comparison,
            threshold,
            passed,
            detail,
        }
    }
}

impl fmt::Display for GateResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} {:.6} {} {:.6}  ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.comparison,
            self.threshold,
            self.detail
        )
    }
}

/// Problem sizes for the gate suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateSizes {
    pub distortion_n: usize,
    pub distortion_points: usize,
    pub distortion_k: usize,
    pub distortion_delta: f64,
    pub distortion_trials: usize,
    pub conditioning_n: usize,
    pub conditioning_trials: usize,
    pub growth_ks: [usize; 3],
    pub hadamard_n: usize,
    pub hadamard_points: usize,
    pub hadamard_trials: usize,
    pub decomposition_n: usize,
    pub decomposition_k: usize,
    pub decomposition_trials: usize,
    pub perturbation_n: usize,
    pub perturbation_quadruples: usize,
}

impl GateSizes {
    pub const FULL: GateSizes = GateSizes {
        distortion_n: 1024,
        distortion_points: 32,
        distortion_k: 1024,
        distortion_delta: 0.15,
        distortion_trials: 50,
        conditioning_n: 256,
        conditioning_trials: 200,
        growth_ks: [8, 32, 128],
        hadamard_n: 1024,
        hadamard_points: 1000,
        hadamard_trials: 100,
        decomposition_n: 256,
        decomposition_k: 8,
        decomposition_trials: 100,
        perturbation_n: 32,
        perturbation_quadruples: 10_000,
    };

    pub const QUICK: GateSizes = GateSizes {
        distortion_n: 512,
        distortion_points: 16,
        distortion_k: 512,
        distortion_delta: 0.15,
        distortion_trials: 20,
        conditioning_n: 256,
        conditioning_trials: 60,
        growth_ks: [8, 32, 128],
        hadamard_n: 256,
        hadamard_points: 200,
        hadamard_trials: 50,
        decomposition_n: 256,
        decomposition_k: 8,
        decomposition_trials: 50,
        perturbation_n: 16,
        perturbation_quadruples: 2_000,
    };
}

/// `x = 1/√n`, `y` alternating `±1/√n`: orthogonal and maximally incoherent.
pub fn flat_orthogonal_pair(n: usize) -> (Vec<f64>, Vec<f64>) {
    let s = 1.0 / (n as f64).sqrt();
    let x = vec![s; n];
    let y = (0..n).map(|i| if i % 2 == 0 { s } else { -s }).collect();
    (x, y)
}

/// Largest ratio between consecutive entries.
pub fn max_growth(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

fn gate_seed(seed: u64, gate: u64) -> u64 {
    derive_seed(seed, &[gate])
}

pub fn distortion_gate(kind: OperatorKind, threshold: f64, sizes: &GateSizes, seed: u64) -> Result<GateResult> {
    let ps = generate_pointset(
        PointSetKind::UniformSphere,
        sizes.distortion_n,
        sizes.distortion_points,
        gate_seed(seed, 0),
        GenerateParams::default(),
    )?;
    let params = DistortionParams {
        kind,
        k: sizes.distortion_k,
        trials: sizes.distortion_trials,
        seed: gate_seed(seed, 1 + kind.code() as u64),
        delta_target: sizes.distortion_delta,
        record_pairs: false,
    };
    let rep = distortion_experiment(&ps, &params)?;
    Ok(GateResult::new(
        &format!("distortion_success_{}", kind.name()),
        rep.success_fraction,
        Comparison::AtLeast,
        threshold,
        format!(
            "max distortion {:.4}, mean {:.4}",
            rep.max_distortion, rep.mean_distortion
        ),
    ))
}

pub fn conditioning_growth_gate(sizes: &GateSizes, seed: u64) -> Result<GateResult> {
    let (x, y) = flat_orthogonal_pair(sizes.conditioning_n);
    let medians = sizes
        .growth_ks
        .iter()
        .map(|&k| Ok(conditioning_experiment(&x, &y, k, sizes.conditioning_trials, gate_seed(seed, 10))?.median()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(GateResult::new(
        "conditioning_growth",
        max_growth(&medians),
        Comparison::AtMost,
        GROWTH_LIMIT,
        format!("medians {medians:.4?} at k = {:?}", sizes.growth_ks),
    ))
}

pub fn hadamard_gates(sizes: &GateSizes, seed: u64) -> Result<[GateResult; 2]> {
    let ps = generate_pointset(
        PointSetKind::UniformSphere,
        sizes.hadamard_n,
        sizes.hadamard_points,
        gate_seed(seed, 20),
        GenerateParams::default(),
    )?;
    let rep = hadamard_coherence_experiment(&ps, sizes.hadamard_trials, gate_seed(seed, 21), HADAMARD_CONSTANT)?;
    let within = GateResult::new(
        "hadamard_sup_within_bound",
        rep.fraction_within_bound(HADAMARD_MULTIPLIER),
        Comparison::AtLeast,
        0.99,
        format!(
            "largest sup {:.4} vs {:.4}",
            rep.sup_inf_norm,
            HADAMARD_MULTIPLIER * rep.bound
        ),
    );
    let good = GateResult::new(
        "hadamard_fraction_good",
        rep.fraction_good,
        Comparison::AtLeast,
        1.0 - 10.0 / rep.padded_dim as f64,
        format!("threshold {:.4}", rep.good_threshold),
    );
    Ok([within, good])
}

pub fn decomposition_gates(sizes: &GateSizes, seed: u64) -> Result<[GateResult; 2]> {
    let (x, y) = flat_orthogonal_pair(sizes.decomposition_n);
    let delta = 0.2;
    let rep = decomposition_experiment(
        &x,
        &y,
        sizes.decomposition_k,
        delta,
        sizes.decomposition_trials,
        gate_seed(seed, 30),
    )?;
    let spectral = GateResult::new(
        "decomposition_spectral_norm",
        rep.fraction_spectral_at_most(SPECTRAL_LIMIT),
        Comparison::AtLeast,
        0.99,
        format!("largest norm {:.4} vs {SPECTRAL_LIMIT}", rep.p_spectral_norm),
    );
    let medians = sizes
        .growth_ks
        .iter()
        .map(|&k| {
            Ok(
                decomposition_experiment(&x, &y, k, delta, sizes.decomposition_trials, gate_seed(seed, 31))?
                    .median_max_projection(),
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    let growth = GateResult::new(
        "decomposition_projection_growth",
        max_growth(&medians),
        Comparison::AtMost,
        GROWTH_LIMIT,
        format!("medians {medians:.4?} at k = {:?}", sizes.growth_ks),
    );
    Ok([spectral, growth])
}

/// Counts quadruples where `|ang(x, y) − ang(x', y')| > 5 √α`. Perturbation
/// sizes are spread log-uniformly over `[1e-4, 1]`.
pub fn perturbation_violations(n: usize, quadruples: usize, seed: u64) -> Result<usize> {
    fn unit(v: Vec<f64>) -> Vec<f64> {
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.into_iter().map(|a| a / norm).collect()
    }
    let mut rng = Rng::stream(seed, 0);
    let mut violations = 0;
    for _ in 0..quadruples {
        let x = unit(rng.normal_vec(n));
        let y = unit(rng.normal_vec(n));
        let eps = 10f64.powf(-4.0 * rng.uniform());
        let xp = unit(x.iter().map(|v| v + eps * rng.normal()).collect());
        let yp = unit(y.iter().map(|v| v + eps * rng.normal()).collect());
        let (lhs, rhs) = angular_perturbation_bound(&x, &xp, &y, &yp)?;
        violations += usize::from(lhs > rhs);
    }
    Ok(violations)
}

pub fn perturbation_gate(sizes: &GateSizes, seed: u64) -> Result<GateResult> {
    let violations = perturbation_violations(sizes.perturbation_n, sizes.perturbation_quadruples, gate_seed(seed, 40))?;
    Ok(GateResult::new(
        "angular_perturbation_violations",
        violations as f64,
        Comparison::AtMost,
        0.0,
        format!("{} quadruples", sizes.perturbation_quadruples),
    ))
}

/// Runs every gate in a fixed order.
pub fn run_gates(sizes: &GateSizes, seed: u64) -> Result<Vec<GateResult>> {
    let mut out = vec![
        distortion_gate(OperatorKind::Gaussian, 0.95, sizes, seed)?,
        distortion_gate(OperatorKind::Randomized, 0.90, sizes, seed)?,
        conditioning_growth_gate(sizes, seed)?,
    ];
    out.extend(hadamard_gates(sizes, seed)?);
    out.extend(decomposition_gates(sizes, seed)?);
    out.push(perturbation_gate(sizes, seed)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(GateResult::new("a", 1.0, Comparison::AtMost, 1.0, String::new()).passed);
        assert!(!GateResult::new("a", 1.1, Comparison::AtMost, 1.0, String::new()).passed);
        assert!(!GateResult::new("a", 0.9, Comparison::AtLeast, 1.0, String::new()).passed);
        assert!(!GateResult::new("a", f64::NAN, Comparison::AtLeast, 1.0, String::new()).passed);
    }

    #[test]
    fn growth_is_largest_step_ratio() {
        assert_eq!(max_growth(&[1.0, 3.0, 6.0]), 3.0);
    }
}
