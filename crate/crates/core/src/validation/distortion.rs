use alloc::vec::Vec;

use crate::embedders::{Operator, OperatorKind};
use crate::error::{invalid, Result};
use crate::geometry::{angle_unchecked, hamming_normalized, BinaryCode, PointSet};
use crate::math;
use crate::par;
use crate::rng::derive_seed;

/// Parameters of one distortion experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistortionParams {
    pub kind: OperatorKind,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub delta_target: f64,
    /// Keep the per-pair table of trial 0.
    pub record_pairs: bool,
}

/// `|hamming − angular|` for one pair of points.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairDistortion {
    pub i: usize,
    pub j: usize,
    pub hamming: f64,
    pub angular: f64,
    pub distortion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialDistortion {
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistortionReport {
    pub kind: OperatorKind,
    pub n: usize,
    pub points: usize,
    pub k: usize,
    pub delta_target: f64,
    pub trials: usize,
    pub seed: u64,
    /// Largest pair distortion over all trials.
    pub max_distortion: f64,
    /// Mean over trials of the per-trial mean pair distortion.
    pub mean_distortion: f64,
    /// Fraction of trials whose largest distortion is at most `delta_target`.
    pub success_fraction: f64,
    pub per_trial: Vec<TrialDistortion>,
    pub per_pair: Option<Vec<PairDistortion>>,
}

impl DistortionReport {
    /// Mean over trials of the per-trial maximum.
    pub fn mean_of_max(&self) -> f64 {
        if self.per_trial.is_empty() {
            return 0.0;
        }
        self.per_trial.iter().map(|t| t.max).sum::<f64>() / self.per_trial.len() as f64
    }
}

/// Pair distortions for precomputed codes, in `(i, j)` lexicographic order.
pub fn pair_distortions(ps: &PointSet, codes: &[BinaryCode]) -> Result<Vec<PairDistortion>> {
    if codes.len() != ps.len() {
        return Err(invalid!("{} codes for {} points", codes.len(), ps.len()));
    }
    let mut out = Vec::with_capacity(ps.len() * ps.len().saturating_sub(1) / 2);
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let hamming = hamming_normalized(&codes[i], &codes[j])?;
            let angular = angle_unchecked(ps.point(i), ps.point(j));
            out.push(PairDistortion {
                i,
                j,
                hamming,
                angular,
                distortion: math::abs(hamming - angular),
            });
        }
    }
    Ok(out)
}

fn summarize(pairs: &[PairDistortion]) -> TrialDistortion {
    if pairs.is_empty() {
        return TrialDistortion { max: 0.0, mean: 0.0 };
    }
    let max = pairs.iter().map(|p| p.distortion).fold(0.0, f64::max);
    let mean = pairs.iter().map(|p| p.distortion).sum::<f64>() / pairs.len() as f64;
    TrialDistortion { max, mean }
}

/// Samples a fresh operator per trial, embeds every point and measures all
/// `N(N−1)/2` pair distortions against angular distances in the input space.
pub fn distortion_experiment(ps: &PointSet, params: &DistortionParams) -> Result<DistortionReport> {
    if params.trials == 0 {
        return Err(invalid!("distortion experiment needs at least one trial"));
    }
    let trial_results = par::map_indexed(
        params.trials,
        |t| -> Result<(TrialDistortion, Option<Vec<PairDistortion>>)> {
            let op = Operator::sample(params.kind, ps.dim(), params.k, derive_seed(params.seed, &[t as u64]))?;
            let codes: Vec<BinaryCode> = ps.points().map(|x| op.embed(x)).collect::<Result<_>>()?;
            let pairs = pair_distortions(ps, &codes)?;
            let summary = summarize(&pairs);
            Ok((summary, (params.record_pairs && t == 0).then_some(pairs)))
        },
    );
    let mut per_trial = Vec::with_capacity(params.trials);
    let mut per_pair = None;
    for result in trial_results {
        let (summary, pairs) = result?;
        per_trial.push(summary);
        if pairs.is_some() {
            per_pair = pairs;
        }
    }
    let trials = per_trial.len() as f64;
    let max_distortion = per_trial.iter().map(|t| t.max).fold(0.0, f64::max);
    let mean_distortion = per_trial.iter().map(|t| t.mean).sum::<f64>() / trials;
    let successes = per_trial.iter().filter(|t| t.max <= params.delta_target).count();
    Ok(DistortionReport {
        kind: params.kind,
        n: ps.dim(),
        points: ps.len(),
        k: params.k,
        delta_target: params.delta_target,
        trials: params.trials,
        seed: params.seed,
        max_distortion,
        mean_distortion,
        success_fraction: successes as f64 / trials,
        per_trial,
        per_pair,
    })
}

/// One cell of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub k: usize,
    pub delta: f64,
    pub cell_seed: u64,
    pub report: DistortionReport,
}

/// Seed of the sweep cell `(k, δ)`.
pub fn sweep_cell_seed(seed: u64, k: usize, delta: f64) -> u64 {
    derive_seed(seed, &[k as u64, delta.to_bits()])
}

/// Distortion experiments over the Cartesian product `k_values × delta_values`,
/// rows ordered by `k` then `δ` as given.
pub fn sweep(
    ps: &PointSet,
    kind: OperatorKind,
    k_values: &[usize],
    delta_values: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(k_values.len() * delta_values.len());
    for &k in k_values {
        for &delta in delta_values {
            let cell_seed = sweep_cell_seed(seed, k, delta);
            let params = DistortionParams {
                kind,
                k,
                trials,
                seed: cell_seed,
                delta_target: delta,
                record_pairs: false,
            };
            rows.push(SweepRow {
                k,
                delta,
                cell_seed,
                report: distortion_experiment(ps, &params)?,
            });
        }
    }
    Ok(rows)
}
