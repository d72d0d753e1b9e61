use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::geometry::PointSet;
use crate::math;
use crate::par;
use crate::rng::{derive_seed, stream, Rng};
use crate::transforms::fwht_in_place;

/// Infinity norms of `w_i = H · diag(b) · pad(v_i)` across trials.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HadamardCoherenceReport {
    pub n: usize,
    pub padded_dim: usize,
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
    pub constant: f64,
    /// `(√ln n′ + √ln N) / √n′`.
    pub bound: f64,
    /// `C · √(ln n′ / n′)`.
    pub good_threshold: f64,
    /// Largest `sup_i ‖w_i‖_∞` over all trials.
    pub sup_inf_norm: f64,
    /// Smallest per-trial fraction of points with `‖w_i‖_∞ ≤ good_threshold`.
    pub fraction_good: f64,
    pub per_trial_sup: Vec<f64>,
    pub per_trial_fraction_good: Vec<f64>,
}

impl HadamardCoherenceReport {
    /// Fraction of trials with `sup_i ‖w_i‖_∞ ≤ multiplier · bound`.
    pub fn fraction_within_bound(&self, multiplier: f64) -> f64 {
        let hits = self
            .per_trial_sup
            .iter()
            .filter(|&&s| s <= multiplier * self.bound)
            .count();
        hits as f64 / self.per_trial_sup.len().max(1) as f64
    }
}

/// `‖H · diag(b) · pad(v_i)‖_∞` for every point, with `b` given (length `n′`).
pub fn modulated_inf_norms(ps: &PointSet, signs: &[f64]) -> Result<Vec<f64>> {
    let padded = signs.len();
    if padded < ps.dim() || !padded.is_power_of_two() {
        return Err(invalid!(
            "sign vector length {padded} must be a power of two at least the dimension {}",
            ps.dim()
        ));
    }
    let mut buf = vec![0.0; padded];
    ps.points()
        .map(|v| {
            buf.iter_mut().for_each(|s| *s = 0.0);
            for ((slot, &a), &b) in buf.iter_mut().zip(v).zip(signs) {
                *slot = a * b;
            }
            fwht_in_place(&mut buf)?;
            Ok(math::norm_inf(&buf))
        })
        .collect()
}

/// Per trial, draws Rademacher `b` and records the largest infinity norm of the
/// rotated points and the fraction below `constant · √(ln n′ / n′)`.
pub fn hadamard_coherence_experiment(
    ps: &PointSet,
    trials: usize,
    seed: u64,
    constant: f64,
) -> Result<HadamardCoherenceReport> {
    if trials == 0 {
        return Err(invalid!("coherence experiment needs at least one trial"));
    }
    let padded = ps.dim().next_power_of_two();
    let count = ps.len();
    let n_f = padded as f64;
    let bound = (math::sqrt(math::ln(n_f)) + math::sqrt(math::ln(count as f64))) / math::sqrt(n_f);
    let good_threshold = constant * math::sqrt(math::ln(n_f) / n_f);
    let per_trial = par::map_indexed(trials, |t| -> Result<(f64, f64)> {
        let signs = Rng::stream(derive_seed(seed, &[t as u64]), stream::SIGNS).rademacher_vec(padded);
        let norms = modulated_inf_norms(ps, &signs)?;
        let sup = norms.iter().copied().fold(0.0, f64::max);
        let good = norms.iter().filter(|&&w| w <= good_threshold).count();
        Ok((sup, good as f64 / count as f64))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (per_trial_sup, per_trial_fraction_good): (Vec<f64>, Vec<f64>) = per_trial.into_iter().unzip();
    Ok(HadamardCoherenceReport {
        n: ps.dim(),
        padded_dim: padded,
        points: count,
        trials,
        seed,
        constant,
        bound,
        good_threshold,
        sup_inf_norm: per_trial_sup.iter().copied().fold(0.0, f64::max),
        fraction_good: per_trial_fraction_good.iter().copied().fold(1.0, f64::min),
        per_trial_sup,
        per_trial_fraction_good,
    })
}
