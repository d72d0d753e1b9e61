use crate::math;

/// The absolute constants of the sufficient condition. They are unknown, so
/// the defaults of 1 expose the rate rather than a calibrated threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for ConditionConstants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
        }
    }
}

/// Outcome of the three-clause sufficient condition on `(n, k, N, δ, ρ_cross)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionCheck {
    pub constants: ConditionConstants,
    /// `c1 · δ⁻³ · ln N`; clause 1 requires `k` to exceed it.
    pub sample_threshold: f64,
    /// `c2 · δ · k · ρ_cross · ln n`; clause 2 requires it below 1.
    pub conditioning_value: f64,
    /// `c3 · k · ρ_cross`; clause 3 requires `δ` at least this large.
    pub distortion_floor: f64,
    pub enough_rows: bool,
    pub well_conditioned: bool,
    pub distortion_attainable: bool,
    pub satisfied: bool,
}

/// Evaluates the three clauses literally with natural logarithms. `points`
/// is the point count `N`, taken as a float so huge sets can be described.
pub fn check_sufficient_condition(
    n: usize,
    k: usize,
    points: f64,
    delta: f64,
    rho_cross: f64,
    constants: ConditionConstants,
) -> ConditionCheck {
    let k_f = k as f64;
    let sample_threshold = constants.c1 * math::ln(points) / (delta * delta * delta);
    let conditioning_value = constants.c2 * delta * k_f * rho_cross * math::ln(n as f64);
    let distortion_floor = constants.c3 * k_f * rho_cross;
    let enough_rows = k_f > sample_threshold;
    let well_conditioned = conditioning_value < 1.0;
    let distortion_attainable = delta >= distortion_floor;
    ConditionCheck {
        constants,
        sample_threshold,
        conditioning_value,
        distortion_floor,
        enough_rows,
        well_conditioned,
        distortion_attainable,
        satisfied: enough_rows && well_conditioned && distortion_attainable,
    }
}
