//! Angles, Hamming distances and coherence of point sets.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::math;
use crate::par;

/// Tolerance on `‖v‖₂ = 1` accepted by the angle routines.
pub const UNIT_INPUT_TOLERANCE: f64 = 1e-6;
/// Tolerance on `‖v‖₂ = 1` for rows stored in a [`PointSet`].
pub const UNIT_STORED_TOLERANCE: f64 = 1e-9;
/// Pairs closer than this are treated as duplicates by [`coherence`].
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// `N` unit vectors in `R^n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

/// Which rows were rescaled when building a [`PointSet`] from raw data.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Normalization {
    /// Rows whose norm was off by more than [`UNIT_STORED_TOLERANCE`].
    pub rescaled: Vec<usize>,
    /// Rows whose norm was off by more than [`UNIT_INPUT_TOLERANCE`], with the original norm.
    pub far_from_unit: Vec<(usize, f64)>,
}

impl PointSet {
    /// Wraps rows that are already unit length (within [`UNIT_STORED_TOLERANCE`]).
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        Self::check_shape(dim, &data)?;
        for (i, row) in data.chunks_exact(dim).enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(invalid!("row {i} has a non-finite entry"));
            }
            let norm = math::norm2(row);
            if math::abs(norm - 1.0) > UNIT_STORED_TOLERANCE {
                return Err(invalid!("row {i} has norm {norm}, expected 1"));
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a point set, rescaling every row that is not already unit length.
    /// Zero or non-finite rows are rejected.
    pub fn normalized(dim: usize, mut data: Vec<f64>) -> Result<(Self, Normalization)> {
        Self::check_shape(dim, &data)?;
        let mut report = Normalization::default();
        for (i, row) in data.chunks_exact_mut(dim).enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(invalid!("row {i} has a non-finite entry"));
            }
            let norm = math::norm2(row);
            if norm == 0.0 {
                return Err(invalid!("row {i} is zero"));
            }
            let off = math::abs(norm - 1.0);
            if off > UNIT_STORED_TOLERANCE {
                row.iter_mut().for_each(|v| *v /= norm);
                report.rescaled.push(i);
            }
            if off > UNIT_INPUT_TOLERANCE {
                report.far_from_unit.push((i, norm));
            }
        }
        Ok((Self { dim, data }, report))
    }

    fn check_shape(dim: usize, data: &[f64]) -> Result<()> {
        if dim < 2 {
            return Err(invalid!("point dimension must be at least 2, got {dim}"));
        }
        if data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(invalid!(
                "point data of length {} is not a positive multiple of dimension {dim}",
                data.len()
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points `N`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// A sign code in `{±1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinaryCode(Vec<i8>);

impl BinaryCode {
    pub fn new(bits: Vec<i8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(invalid!("binary code must have at least one bit"));
        }
        if let Some(t) = bits.iter().position(|&b| b != 1 && b != -1) {
            return Err(invalid!("binary code entry {t} is {}, expected ±1", bits[t]));
        }
        Ok(Self(bits))
    }

    /// Elementwise sign with `sgn(0) = +1`.
    pub fn from_signs(values: &[f64]) -> Self {
        Self(values.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn bits(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Coherence summary of a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoherenceStats {
    /// `max_i ‖v_i‖_∞`.
    pub rho_direct: f64,
    /// `max(rho_direct, max_{i≠j} ‖v_i − v_j‖_∞ / ‖v_i − v_j‖₂)`.
    pub rho_cross: f64,
    /// Smallest pairwise angular distance; 1 when there is a single point.
    pub theta_min: f64,
}

fn check_unit(x: &[f64], what: &str) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid!("{what} has a non-finite entry"));
    }
    let norm = math::norm2(x);
    if norm == 0.0 {
        return Err(invalid!("{what} is the zero vector"));
    }
    if math::abs(norm - 1.0) > UNIT_INPUT_TOLERANCE {
        return Err(invalid!("{what} has norm {norm}, expected a unit vector"));
    }
    Ok(())
}

/// `arccos(⟨x, y⟩) / π` with the inner product clamped to `[-1, 1]`. No checks.
#[inline]
pub fn angle_unchecked(x: &[f64], y: &[f64]) -> f64 {
    math::acos(math::dot(x, y).clamp(-1.0, 1.0)) / PI
}

/// Angular distance between unit vectors, normalized to `[0, 1]`.
pub fn angular_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(invalid!("dimension mismatch: {} vs {}", x.len(), y.len()));
    }
    check_unit(x, "first vector")?;
    check_unit(y, "second vector")?;
    Ok(angle_unchecked(x, y))
}

/// Fraction of positions where the codes disagree.
pub fn hamming_normalized(a: &BinaryCode, b: &BinaryCode) -> Result<f64> {
    if a.len() != b.len() {
        return Err(invalid!("code length mismatch: {} vs {}", a.len(), b.len()));
    }
    let differ = a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count();
    Ok(differ as f64 / a.len() as f64)
}

/// `‖x − y‖_∞ / ‖x − y‖₂`, or `None` for (near-)duplicates.
fn cross_ratio(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mut inf, mut sq) = (0.0f64, 0.0f64);
    for (a, b) in x.iter().zip(y) {
        let d = math::abs(a - b);
        inf = inf.max(d);
        sq += d * d;
    }
    let two = math::sqrt(sq);
    (two >= DUPLICATE_TOLERANCE).then(|| inf / two)
}

/// Coherence of a single pair: `max(‖x‖_∞, ‖y‖_∞, ‖x − y‖_∞ / ‖x − y‖₂)`.
pub fn pair_coherence(x: &[f64], y: &[f64]) -> f64 {
    let direct = math::norm_inf(x).max(math::norm_inf(y));
    cross_ratio(x, y).map_or(direct, |c| direct.max(c))
}

/// Exact `O(N² n)` coherence statistics.
pub fn coherence(ps: &PointSet) -> CoherenceStats {
    let count = ps.len();
    let rho_direct = ps.points().map(math::norm_inf).fold(0.0, f64::max);
    // (max cross ratio, min angle) for pairs (i, j > i).
    let per_row = par::map_indexed(count, |i| {
        let x = ps.point(i);
        let mut cross = 0.0f64;
        let mut theta = 1.0f64;
        for j in i + 1..count {
            let y = ps.point(j);
            if let Some(c) = cross_ratio(x, y) {
                cross = cross.max(c);
            }
            theta = theta.min(angle_unchecked(x, y));
        }
        (cross, theta)
    });
    let (cross, theta_min) = per_row
        .into_iter()
        .fold((0.0f64, 1.0f64), |(c, t), (ci, ti)| (c.max(ci), t.min(ti)));
    CoherenceStats {
        rho_direct,
        rho_cross: rho_direct.max(cross),
        theta_min,
    }
}

/// Both sides of the angular perturbation inequality:
/// `lhs = |ang(x, y) − ang(x', y')|`, `rhs = 5 √|⟨x, y⟩ − ⟨x', y'⟩|`.
pub fn angular_perturbation_bound(
    x: &[f64],
    x_perturbed: &[f64],
    y: &[f64],
    y_perturbed: &[f64],
) -> Result<(f64, f64)> {
    let n = x.len();
    if [x_perturbed.len(), y.len(), y_perturbed.len()].iter().any(|&m| m != n) {
        return Err(invalid!("all four vectors must share one dimension"));
    }
    check_unit(x, "x")?;
    check_unit(x_perturbed, "x'")?;
    check_unit(y, "y")?;
    check_unit(y_perturbed, "y'")?;
    let lhs = math::abs(angle_unchecked(x, y) - angle_unchecked(x_perturbed, y_perturbed));
    let alpha = math::abs(math::dot(x, y) - math::dot(x_perturbed, y_perturbed));
    Ok((lhs, 5.0 * math::sqrt(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn angular_distance_examples() {
        let x = [0.6, 0.8];
        assert_eq!(angular_distance(&x, &x).unwrap(), 0.0);
        assert_eq!(angular_distance(&x, &[-0.6, -0.8]).unwrap(), 1.0);
        assert!((angular_distance(&e(3, 0), &e(3, 1)).unwrap() - 0.5).abs() < 1e-15);
        assert!(angular_distance(&[0.0, 0.0], &x).is_err());
        assert!(angular_distance(&[1.0, 1.0], &x).is_err());
    }

    #[test]
    fn hamming_examples() {
        let a = BinaryCode::new(vec![1, 1, -1, -1]).unwrap();
        let b = BinaryCode::new(vec![1, -1, -1, 1]).unwrap();
        let neg = BinaryCode::new(vec![-1, -1, 1, 1]).unwrap();
        assert_eq!(hamming_normalized(&a, &a).unwrap(), 0.0);
        assert_eq!(hamming_normalized(&a, &neg).unwrap(), 1.0);
        assert_eq!(hamming_normalized(&a, &b).unwrap(), 0.5);
        let short = BinaryCode::new(vec![1]).unwrap();
        assert!(hamming_normalized(&a, &short).is_err());
        assert!(BinaryCode::new(vec![1, 0]).is_err());
        assert!(BinaryCode::new(vec![]).is_err());
    }

    #[test]
    fn hamming_is_metric_exhaustive() {
        for k in 1..=6usize {
            let codes: Vec<BinaryCode> = (0..1u32 << k)
                .map(|m| BinaryCode::new((0..k).map(|t| if m >> t & 1 == 1 { -1 } else { 1 }).collect()).unwrap())
                .collect();
            for a in &codes {
                assert_eq!(hamming_normalized(a, a).unwrap(), 0.0);
                for b in &codes {
                    let ab = hamming_normalized(a, b).unwrap();
                    assert_eq!(ab, hamming_normalized(b, a).unwrap());
                    if a != b {
                        assert!(ab > 0.0);
                    }
                    for c in &codes {
                        let bc = hamming_normalized(b, c).unwrap();
                        let ac = hamming_normalized(a, c).unwrap();
                        assert!(ac <= ab + bc + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn coherence_examples() {
        let single = PointSet::new(4, e(4, 0)).unwrap();
        let s = coherence(&single);
        assert_eq!((s.rho_direct, s.rho_cross, s.theta_min), (1.0, 1.0, 1.0));

        let mut two = e(4, 0);
        two.extend(e(4, 1));
        let s = coherence(&PointSet::new(4, two).unwrap());
        assert_eq!(s.rho_direct, 1.0);
        assert_eq!(s.rho_cross, 1.0);
        assert!((s.theta_min - 0.5).abs() < 1e-15);

        let n = 16;
        let q = 0.25;
        let flat: Vec<f64> = (0..3 * n)
            .map(|i| if (i * 7 + i / 3) % 2 == 0 { q } else { -q })
            .collect();
        let s = coherence(&PointSet::new(n, flat).unwrap());
        assert_eq!(s.rho_direct, 0.25);
        assert!(s.rho_direct <= s.rho_cross);
    }

    #[test]
    fn coherence_skips_duplicates() {
        let v = [0.6, 0.8, 0.0];
        let mut data = v.to_vec();
        data.extend_from_slice(&v);
        let s = coherence(&PointSet::new(3, data).unwrap());
        assert_eq!(s.rho_cross, 0.8);
        assert_eq!(s.theta_min, 0.0);
    }

    #[test]
    fn perturbation_closed_form() {
        let r = 1.0 / 2f64.sqrt();
        let (lhs, rhs) = angular_perturbation_bound(&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[r, r]).unwrap();
        assert!((lhs - 0.25).abs() < 1e-15);
        assert!((rhs - 5.0 * r.sqrt()).abs() < 1e-12);
        let (lhs, rhs) = angular_perturbation_bound(&[1.0, 0.0], &[1.0, 0.0], &[r, r], &[r, r]).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn normalized_rescales_and_rejects_zero() {
        let (ps, report) = PointSet::normalized(2, vec![3.0, 4.0, 1.0, 0.0]).unwrap();
        assert_eq!(ps.point(0), &[0.6, 0.8]);
        assert_eq!(report.rescaled, vec![0]);
        assert_eq!(report.far_from_unit, vec![(0, 5.0)]);
        assert!(PointSet::normalized(2, vec![1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(PointSet::new(1, vec![1.0]).is_err());
        assert!(PointSet::new(2, vec![1.0, 1.0]).is_err());
    }
}
