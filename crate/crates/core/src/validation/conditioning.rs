use alloc::vec;
use alloc::vec::Vec;

use super::{check_unit_pair, ShiftDraw};
use crate::error::{invalid, Result};
use crate::geometry::{angle_unchecked, pair_coherence};
use crate::linalg;
use crate::math;
use crate::par;
use crate::transforms::circulant_apply;

/// Samples of `σ_max(MᵀM − I_θ)` for stacked random shift vectors.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditioningReport {
    pub samples: Vec<f64>,
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Pair coherence `max(‖x‖_∞, ‖y‖_∞, ‖x − y‖_∞ / ‖x − y‖₂)`.
    pub rho: f64,
    /// Angular distance between `x` and `y`, in `[0, 1]`.
    pub theta: f64,
    /// `k · ρ · ln n`, the rate without its constant.
    pub bound_value: f64,
}

impl ConditioningReport {
    pub fn median(&self) -> f64 {
        super::median(&self.samples)
    }

    pub fn quantile(&self, q: f64) -> f64 {
        super::quantile(&self.samples, q)
    }
}

/// Gram matrix of `M = [X_{s_1} … X_{s_k} Y_{s_1} … Y_{s_k}]` with
/// `X_s = shift(r ⊙ x, s)` and `Y_s = shift(r ⊙ y, s)`, row-major `2k × 2k`.
///
/// Shifted inner products only depend on the lag, `X_s · Y_t = c_xy[(t − s) mod n]`
/// with `c_xy = C_{r⊙y} (r⊙x)`, so three circulant products give every entry.
pub fn shift_gram(x: &[f64], y: &[f64], modulator: &[f64], selection: &[usize]) -> Result<Vec<f64>> {
    let n = x.len();
    if y.len() != n || modulator.len() != n {
        return Err(invalid!("x, y and r must share one dimension"));
    }
    if let Some(&s) = selection.iter().find(|&&s| s >= n) {
        return Err(invalid!("shift {s} out of range for dimension {n}"));
    }
    let u: Vec<f64> = x.iter().zip(modulator).map(|(a, r)| a * r).collect();
    let v: Vec<f64> = y.iter().zip(modulator).map(|(a, r)| a * r).collect();
    let c_uu = circulant_apply(&u, &u)?;
    let c_vv = circulant_apply(&v, &v)?;
    let c_uv = circulant_apply(&v, &u)?;
    let k = selection.len();
    let m = 2 * k;
    let mut g = vec![0.0; m * m];
    for (a, &s) in selection.iter().enumerate() {
        for (b, &t) in selection.iter().enumerate() {
            let lag = (t + n - s) % n;
            g[a * m + b] = c_uu[lag];
            g[(k + a) * m + k + b] = c_vv[lag];
            g[a * m + k + b] = c_uv[lag];
            g[(k + b) * m + a] = c_uv[lag];
        }
    }
    Ok(g)
}

/// `σ_max(MᵀM − I_θ)` for explicit `r` and shifts, where `I_θ` has identity
/// diagonal blocks and `⟨x, y⟩ · I` off-diagonal blocks.
pub fn shift_gram_deviation(x: &[f64], y: &[f64], modulator: &[f64], selection: &[usize]) -> Result<f64> {
    let k = selection.len();
    let m = 2 * k;
    let cos_theta = math::dot(x, y).clamp(-1.0, 1.0);
    let mut g = shift_gram(x, y, modulator, selection)?;
    for a in 0..k {
        g[a * m + a] -= 1.0;
        g[(k + a) * m + k + a] -= 1.0;
        g[a * m + k + a] -= cos_theta;
        g[(k + a) * m + a] -= cos_theta;
    }
    Ok(linalg::symmetric_spectral_norm(m, &g))
}

/// Per trial, draws `r` and `k` shifts without replacement and records
/// `σ_max(MᵀM − I_θ)`.
pub fn conditioning_experiment(x: &[f64], y: &[f64], k: usize, trials: usize, seed: u64) -> Result<ConditioningReport> {
    check_unit_pair(x, y)?;
    let n = x.len();
    if k == 0 || k > n {
        return Err(invalid!("conditioning experiment needs 1 ≤ k ≤ n, got k={k}, n={n}"));
    }
    let samples = par::map_indexed(trials, |t| {
        let draw = ShiftDraw::sample(seed, t, n, k);
        shift_gram_deviation(x, y, &draw.modulator, &draw.selection)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let rho = pair_coherence(x, y);
    Ok(ConditioningReport {
        samples,
        k,
        n,
        trials,
        seed,
        rho,
        theta: angle_unchecked(x, y),
        bound_value: k as f64 * rho * math::ln(n as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::super::shift_columns;
    use super::*;

    #[test]
    fn gram_matches_dense_columns() {
        let n = 12;
        let x: Vec<f64> = (0..n).map(|i| libm::sin(i as f64 + 0.5)).collect();
        let y: Vec<f64> = (0..n).map(|i| libm::cos(2.0 * i as f64)).collect();
        let r: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let sel = [3usize, 0, 7, 11];
        let mut cols = shift_columns(&x, &r, &sel);
        cols.extend(shift_columns(&y, &r, &sel));
        let dense = linalg::gram(&cols);
        let fast = shift_gram(&x, &y, &r, &sel).unwrap();
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn orthonormal_columns_have_zero_deviation() {
        let d = shift_gram_deviation(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0], &[0]).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = [1.0, 0.0];
        assert!(conditioning_experiment(&x, &[0.0, 1.0], 3, 1, 0).is_err());
        assert!(conditioning_experiment(&x, &[0.0, 2.0], 1, 1, 0).is_err());
    }

    #[test]
    fn report_parameters() {
        let n = 16;
        let x = vec![0.25; n];
        let y: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.25 } else { -0.25 }).collect();
        let rep = conditioning_experiment(&x, &y, 4, 5, 1).unwrap();
        assert_eq!(rep.samples.len(), 5);
        assert!(rep.samples.iter().all(|&s| s >= 0.0));
        assert!((rep.theta - 0.5).abs() < 1e-12);
        // ‖x − y‖_∞ / ‖x − y‖₂ = 0.5 / √(8 · 0.25) = 1/(2√2) > 0.25.
        assert!((rep.rho - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        assert!((rep.bound_value - 4.0 * rep.rho * (16f64).ln()).abs() < 1e-12);
    }
}
