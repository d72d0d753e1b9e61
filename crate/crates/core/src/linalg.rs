//! Small dense linear algebra helpers for the validation experiments.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::math;

/// Above this dimension spectral norms use power iteration instead of a
/// dense symmetric eigensolve.
pub const DENSE_EIGEN_LIMIT: usize = 512;
pub const POWER_ITERATION_TOLERANCE: f64 = 1e-8;
const POWER_ITERATION_MAX_STEPS: usize = 100_000;

/// Row-major Gram matrix `Mᵀ M` of the given columns.
pub fn gram(columns: &[Vec<f64>]) -> Vec<f64> {
    let m = columns.len();
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = math::dot(&columns[i], &columns[j]);
            out[i * m + j] = v;
            out[j * m + i] = v;
        }
    }
    out
}

/// Eigenvalues of a symmetric row-major matrix.
pub fn symmetric_eigenvalues(dim: usize, data: &[f64]) -> Vec<f64> {
    assert_eq!(data.len(), dim * dim);
    if dim == 0 {
        return Vec::new();
    }
    DMatrix::from_row_slice(dim, dim, data)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect()
}

/// `σ_max` of a symmetric matrix, i.e. its largest absolute eigenvalue.
pub fn symmetric_spectral_norm(dim: usize, data: &[f64]) -> f64 {
    if dim <= DENSE_EIGEN_LIMIT {
        symmetric_eigenvalues(dim, data)
            .into_iter()
            .map(math::abs)
            .fold(0.0, f64::max)
    } else {
        power_iteration_norm(dim, data, POWER_ITERATION_TOLERANCE)
    }
}

/// Largest absolute eigenvalue of a symmetric matrix by power iteration,
/// stopping once successive estimates agree to `tolerance` (relative).
pub fn power_iteration_norm(dim: usize, data: &[f64], tolerance: f64) -> f64 {
    assert_eq!(data.len(), dim * dim);
    if dim == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..dim).map(|i| 1.0 + 1.0 / (i as f64 + 1.0)).collect();
    let scale = math::norm2(&v);
    v.iter_mut().for_each(|x| *x /= scale);
    let mut estimate = 0.0;
    let mut w = vec![0.0; dim];
    for _ in 0..POWER_ITERATION_MAX_STEPS {
        for (slot, row) in w.iter_mut().zip(data.chunks_exact(dim)) {
            *slot = math::dot(row, &v);
        }
        let next = math::norm2(&w);
        if next == 0.0 {
            return 0.0;
        }
        v.iter_mut().zip(&w).for_each(|(a, b)| *a = b / next);
        if math::abs(next - estimate) <= tolerance * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Largest singular value of the matrix whose columns are given.
pub fn largest_singular_value(columns: &[Vec<f64>]) -> f64 {
    let g = gram(columns);
    let top = symmetric_spectral_norm(columns.len(), &g);
    math::sqrt(top.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn eigenvalues_of_diagonal() {
        let d = [3.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0, 0.0, 1.0];
        assert!((symmetric_spectral_norm(3, &d) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        let mut rng = Rng::stream(4, 0);
        for dim in [5usize, 20, 60] {
            let a = rng.normal_vec(dim * dim);
            let mut s = vec![0.0; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    s[i * dim + j] = a[i * dim + j] + a[j * dim + i];
                }
            }
            let dense = symmetric_eigenvalues(dim, &s)
                .into_iter()
                .map(f64::abs)
                .fold(0.0, f64::max);
            let power = power_iteration_norm(dim, &s, 1e-12);
            assert!((dense - power).abs() <= 1e-6 * dense, "dim={dim}: {dense} vs {power}");
        }
    }

    #[test]
    fn singular_value_of_orthonormal_columns() {
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert!((largest_singular_value(&cols) - 1.0).abs() < 1e-12);
        let cols = vec![vec![3.0, 4.0]];
        assert!((largest_singular_value(&cols) - 5.0).abs() < 1e-12);
    }
}
