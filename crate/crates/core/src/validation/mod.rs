//! Monte Carlo experiments for the distortion, coherence and conditioning
//! behaviour of circulant sign projections.
//!
//! Every experiment draws trial `t` from `derive_seed(seed, [t])`, so a run is
//! fully determined by its parameters, extending `trials` never changes the
//! earlier trials, and the result does not depend on thread count.

mod condition;
mod conditioning;
mod decomposition;
mod distortion;
mod modulation;

pub use condition::{check_sufficient_condition, ConditionCheck, ConditionConstants};
pub use conditioning::{conditioning_experiment, shift_gram, shift_gram_deviation, ConditioningReport};
pub use decomposition::{decomposition_experiment, orthogonal_decomposition, Decomposition, DecompositionReport};
pub use distortion::{
    distortion_experiment, pair_distortions, sweep, sweep_cell_seed, DistortionParams, DistortionReport,
    PairDistortion, SweepRow, TrialDistortion,
};
pub use modulation::{hadamard_coherence_experiment, modulated_inf_norms, HadamardCoherenceReport};

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::geometry::UNIT_INPUT_TOLERANCE;
use crate::math;
use crate::rng::{derive_seed, stream, Rng};
use crate::transforms::shift_into;

/// Sample quantile with linear interpolation between order statistics.
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = libm::ceil(pos) as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(samples: &[f64]) -> f64 {
    quantile(samples, 0.5)
}

fn check_unit_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.is_empty() {
        return Err(invalid!(
            "x and y must share a positive dimension, got {} and {}",
            x.len(),
            y.len()
        ));
    }
    for (v, name) in [(x, "x"), (y, "y")] {
        if v.iter().any(|a| !a.is_finite()) {
            return Err(invalid!("{name} has a non-finite entry"));
        }
        let norm = math::norm2(v);
        if math::abs(norm - 1.0) > UNIT_INPUT_TOLERANCE {
            return Err(invalid!("{name} has norm {norm}, expected a unit vector"));
        }
    }
    Ok(())
}

/// Random shift vectors for one trial: modulation `r` and selected shifts `S`.
struct ShiftDraw {
    modulator: Vec<f64>,
    selection: Vec<usize>,
}

impl ShiftDraw {
    fn sample(seed: u64, trial: usize, n: usize, k: usize) -> Self {
        let trial_seed = derive_seed(seed, &[trial as u64]);
        let modulator = Rng::stream(trial_seed, stream::MODULATION).normal_vec(n);
        let selection = Rng::stream(trial_seed, stream::SELECTION).choose_without_replacement(n, k);
        Self { modulator, selection }
    }
}

/// Columns `shift(r ⊙ v, s)` for each selected shift `s`.
fn shift_columns(v: &[f64], modulator: &[f64], selection: &[usize]) -> Vec<Vec<f64>> {
    let modulated: Vec<f64> = v.iter().zip(modulator).map(|(a, r)| a * r).collect();
    selection
        .iter()
        .map(|&s| {
            let mut col = alloc::vec![0.0; v.len()];
            shift_into(&modulated, s, &mut col);
            col
        })
        .collect()
}
