use alloc::vec;
use alloc::vec::Vec;

use super::{check_unit_pair, shift_columns, ShiftDraw};
use crate::error::{invalid, Result};
use crate::linalg;
use crate::math;
use crate::par;

/// Relative residual below which a column counts as already spanned.
const RANK_TOLERANCE: f64 = 1e-10;

/// Projections of interleaved shift columns onto the span of earlier pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `‖p_i‖`, projection of `X_i` onto `span{X_j, Y_j : j < i}`.
    pub x_projection_norms: Vec<f64>,
    /// `‖p′_i‖`, projection of `Y_i` onto the same span.
    pub y_projection_norms: Vec<f64>,
    /// `‖P‖` for `P = [p_1 … p_k p′_1 … p′_k]`.
    pub spectral_norm: f64,
    /// Some column was (numerically) inside the span of the earlier ones.
    pub degenerate: bool,
}

impl Decomposition {
    pub fn max_projection_norm(&self) -> f64 {
        self.x_projection_norms
            .iter()
            .chain(&self.y_projection_norms)
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Removes the components along the orthonormal `basis` (two passes of
/// modified Gram–Schmidt) and returns the residual.
fn residual(col: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = col.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = math::dot(q, &w);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
    }
    w
}

fn push_if_independent(basis: &mut Vec<Vec<f64>>, mut w: Vec<f64>, scale: f64) -> bool {
    let norm = math::norm2(&w);
    if norm <= RANK_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return false;
    }
    w.iter_mut().for_each(|a| *a /= norm);
    basis.push(w);
    true
}

/// Walks the pairs `(X_1, Y_1), (X_2, Y_2), …` in order. At step `i` both
/// columns are projected onto the span of all earlier pairs, then `X_i` and
/// `Y_i` are orthogonalized into the basis.
pub fn orthogonal_decomposition(xs: &[Vec<f64>], ys: &[Vec<f64>]) -> Result<Decomposition> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(invalid!("need the same positive number of X and Y columns"));
    }
    let n = xs[0].len();
    if xs.iter().chain(ys).any(|c| c.len() != n) {
        return Err(invalid!("all columns must share one dimension"));
    }
    let k = xs.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(2 * k);
    let mut projections: Vec<Vec<f64>> = vec![Vec::new(); 2 * k];
    let mut x_norms = Vec::with_capacity(k);
    let mut y_norms = Vec::with_capacity(k);
    let mut degenerate = false;
    for i in 0..k {
        let rx = residual(&xs[i], &basis);
        let ry = residual(&ys[i], &basis);
        let px: Vec<f64> = xs[i].iter().zip(&rx).map(|(a, b)| a - b).collect();
        let py: Vec<f64> = ys[i].iter().zip(&ry).map(|(a, b)| a - b).collect();
        x_norms.push(math::norm2(&px));
        y_norms.push(math::norm2(&py));
        projections[i] = px;
        projections[k + i] = py;

        degenerate |= !push_if_independent(&mut basis, rx, math::norm2(&xs[i]));
        // `ry` is already orthogonal to the earlier pairs; only the new X direction remains.
        let ry = residual(&ry, &basis[basis.len().saturating_sub(1)..]);
        degenerate |= !push_if_independent(&mut basis, ry, math::norm2(&ys[i]));
    }
    Ok(Decomposition {
        x_projection_norms: x_norms,
        y_projection_norms: y_norms,
        spectral_norm: linalg::largest_singular_value(&projections),
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionReport {
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub delta: f64,
    pub rho_direct: f64,
    /// Largest `max_i max(‖p_i‖, ‖p′_i‖)` over trials.
    pub max_projection_norm: f64,
    /// Largest `‖P‖` over trials.
    #[cfg_attr(feature = "serde", serde(rename = "P_spectral_norm"))]
    pub p_spectral_norm: f64,
    pub per_trial_max_projection: Vec<f64>,
    pub per_trial_spectral_norm: Vec<f64>,
    /// Some trial had a column inside the span of earlier columns (e.g. `x = y`).
    pub degenerate: bool,
}

impl DecompositionReport {
    pub fn fraction_spectral_at_most(&self, limit: f64) -> f64 {
        let hits = self.per_trial_spectral_norm.iter().filter(|&&s| s <= limit).count();
        hits as f64 / self.per_trial_spectral_norm.len().max(1) as f64
    }

    pub fn median_max_projection(&self) -> f64 {
        super::median(&self.per_trial_max_projection)
    }
}

/// Per trial, draws `r` and `k` shifts and decomposes the random shift
/// columns of `x` and `y`. `delta` is recorded for reference only.
pub fn decomposition_experiment(
    x: &[f64],
    y: &[f64],
    k: usize,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<DecompositionReport> {
    check_unit_pair(x, y)?;
    let n = x.len();
    if k == 0 || 2 * k > n {
        return Err(invalid!(
            "decomposition experiment needs 1 ≤ k and 2k ≤ n, got k={k}, n={n}"
        ));
    }
    let per_trial = par::map_indexed(trials, |t| {
        let draw = ShiftDraw::sample(seed, t, n, k);
        let xs = shift_columns(x, &draw.modulator, &draw.selection);
        let ys = shift_columns(y, &draw.modulator, &draw.selection);
        orthogonal_decomposition(&xs, &ys)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let per_trial_max_projection: Vec<f64> = per_trial.iter().map(Decomposition::max_projection_norm).collect();
    let per_trial_spectral_norm: Vec<f64> = per_trial.iter().map(|d| d.spectral_norm).collect();
    Ok(DecompositionReport {
        k,
        n,
        trials,
        seed,
        delta,
        rho_direct: math::norm_inf(x).max(math::norm_inf(y)),
        max_projection_norm: per_trial_max_projection.iter().copied().fold(0.0, f64::max),
        p_spectral_norm: per_trial_spectral_norm.iter().copied().fold(0.0, f64::max),
        degenerate: per_trial.iter().any(|d| d.degenerate),
        per_trial_max_projection,
        per_trial_spectral_norm,
    })
}
