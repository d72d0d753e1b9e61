#![allow(dead_code)]
//! Independent oracles shared by the integration tests.

use circbin_core::{CirculantOperator, RandomizedOperator};

/// `(C_h x)[i] = Σ_j h[(i + j) mod n] x[j]`, straight from the definition.
pub fn naive_circulant(h: &[f64], x: &[f64]) -> Vec<f64> {
    let n = h.len();
    (0..n).map(|i| (0..n).map(|j| h[(i + j) % n] * x[j]).sum()).collect()
}

/// Unitary Sylvester–Hadamard matrix, row-major.
pub fn hadamard_matrix(n: usize) -> Vec<f64> {
    let s = 1.0 / (n as f64).sqrt();
    (0..n * n)
        .map(|idx| {
            if ((idx / n) & (idx % n)).count_ones().is_multiple_of(2) {
                s
            } else {
                -s
            }
        })
        .collect()
}

fn shifted(h: &[f64], i: usize) -> Vec<f64> {
    let n = h.len();
    (0..n).map(|j| h[(i + j) % n]).collect()
}

/// Rows of `R · C_h · diag(r)`.
pub fn dense_circulant(op: &CirculantOperator) -> Vec<Vec<f64>> {
    op.selection()
        .indices()
        .iter()
        .map(|&i| {
            shifted(op.generator(), i)
                .iter()
                .zip(op.modulator())
                .map(|(a, b)| a * b)
                .collect()
        })
        .collect()
}

/// Rows of `R · C_h · diag(r) · H · diag(b)` acting on padded inputs.
pub fn dense_randomized(op: &RandomizedOperator) -> Vec<Vec<f64>> {
    let n = op.padded_dim();
    let h = hadamard_matrix(n);
    dense_circulant(op.inner())
        .into_iter()
        .map(|row| {
            (0..n)
                .map(|j| (0..n).map(|l| row[l] * h[l * n + j]).sum::<f64>() * op.signs()[j])
                .collect()
        })
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Two unit vectors at angular distance `theta` (in units of π), spanned by
/// random orthonormal directions in `R^n`.
pub fn pair_at_angle(n: usize, theta: f64, rng: &mut circbin_core::Rng) -> (Vec<f64>, Vec<f64>) {
    let a = normalize(rng.normal_vec(n));
    let b = rng.normal_vec(n);
    let proj = dot(&a, &b);
    let b = normalize(b.iter().zip(&a).map(|(x, y)| x - proj * y).collect());
    let phi = theta * std::f64::consts::PI;
    let y = a.iter().zip(&b).map(|(p, q)| phi.cos() * p + phi.sin() * q).collect();
    (a, y)
}
