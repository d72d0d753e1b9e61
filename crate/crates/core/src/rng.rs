//! Reproducible random streams.
//!
//! Every random object is drawn from a ChaCha8 keystream addressed by a
//! `(seed, stream)` pair, so two objects drawn from different streams never
//! influence each other. Normals come from Box–Muller with `libm`
//! transcendentals, which keeps draws bit-identical across platforms.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

/// Stream tags. Adding a draw to one stream never perturbs another.
pub mod stream {
    pub const GENERATOR: u64 = 1;
    pub const MODULATION: u64 = 2;
    pub const SELECTION: u64 = 3;
    pub const SIGNS: u64 = 4;
    pub const GAUSSIAN_MATRIX: u64 = 5;
    pub const POINTS: u64 = 6;
}

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a path of integer labels.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(seed ^ 0x9e37_79b9_7f4a_7c15), |acc, &label| {
        mix64(acc.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix64(label.wrapping_add(0x632b_e59b_d9b4_e019)))
    })
}

/// A deterministic random stream.
#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
    seed: u64,
}

impl Rng {
    /// Opens stream `tag` of `seed`.
    pub fn stream(seed: u64, tag: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(tag);
        Self {
            inner,
            spare_normal: None,
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    fn uniform_open_zero(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        let radius = math::sqrt(-2.0 * math::ln(u1));
        let angle = 2.0 * PI * u2;
        self.spare_normal = Some(radius * math::sin(angle));
        radius * math::cos(angle)
    }

    pub fn normal_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.normal()).collect()
    }

    /// ±1 with equal probability.
    pub fn rademacher(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn rademacher_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.rademacher()).collect()
    }

    /// Uniform integer in `[0, bound)`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.inner.random_range(0..bound)
    }

    /// `k` distinct indices drawn uniformly without replacement from `[0, n)`,
    /// in draw order (partial Fisher–Yates).
    pub fn choose_without_replacement(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot choose {k} of {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for t in 0..k {
            let j = t + self.below((n - t) as u64) as usize;
            pool.swap(t, j);
        }
        pool.truncate(k);
        pool
    }
}
