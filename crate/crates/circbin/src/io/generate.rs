//! Synthetic point sets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use circbin_core::rng::{stream, Rng};
use circbin_core::{Error, PointSet};

/// Families of synthetic point sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSetKind {
    /// Normalized Gaussian rows.
    UniformSphere,
    /// Rows of `±1/√n`, the least coherent case.
    FlatSigns,
    /// Signed basis vectors plus small noise, renormalized.
    Spiky,
    /// Consecutive pairs at a fixed angular distance.
    ClusteredPairs,
}

impl PointSetKind {
    pub const ALL: [PointSetKind; 4] = [Self::UniformSphere, Self::FlatSigns, Self::Spiky, Self::ClusteredPairs];

    pub fn name(self) -> &'static str {
        match self {
            Self::UniformSphere => "uniform_sphere",
            Self::FlatSigns => "flat_signs",
            Self::Spiky => "spiky",
            Self::ClusteredPairs => "clustered_pairs",
        }
    }
}

impl fmt::Display for PointSetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PointSetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown point-set kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GenerateParams {
    /// Angular distance (in `[0, 1]`) inside each clustered pair.
    pub theta: f64,
    /// Noise scale added to spiky points before renormalization.
    pub noise: f64,
}

impl Default for GenerateParams {
    fn default() -> Self {
        Self {
            theta: 0.1,
            noise: 0.01,
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
}

fn sphere_point(rng: &mut Rng, n: usize) -> Vec<f64> {
    loop {
        let mut v = rng.normal_vec(n);
        if v.iter().any(|&a| a != 0.0) {
            normalize(&mut v);
            return v;
        }
    }
}

/// `N` unit vectors in `R^n` of the given family, fully determined by `seed`.
pub fn generate_pointset(
    kind: PointSetKind,
    n: usize,
    count: usize,
    seed: u64,
    params: GenerateParams,
) -> Result<PointSet, Error> {
    if n < 2 || count == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 2 and N ≥ 1, got n={n}, N={count}"
        )));
    }
    let mut rng = Rng::stream(seed, stream::POINTS);
    let mut data = Vec::with_capacity(n * count);
    match kind {
        PointSetKind::UniformSphere => {
            for _ in 0..count {
                data.extend(sphere_point(&mut rng, n));
            }
        }
        PointSetKind::FlatSigns => {
            let s = 1.0 / (n as f64).sqrt();
            data.extend((0..n * count).map(|_| rng.rademacher() * s));
        }
        PointSetKind::Spiky => {
            if !(params.noise >= 0.0 && params.noise < 0.5) {
                return Err(Error::InvalidArgument(format!(
                    "spiky noise must lie in [0, 0.5), got {}",
                    params.noise
                )));
            }
            for _ in 0..count {
                let mut v: Vec<f64> = (0..n).map(|_| params.noise * rng.normal()).collect();
                let spike = rng.below(n as u64) as usize;
                v[spike] += rng.rademacher();
                normalize(&mut v);
                data.extend(v);
            }
        }
        PointSetKind::ClusteredPairs => {
            if !(0.0..=1.0).contains(&params.theta) {
                return Err(Error::InvalidArgument(format!(
                    "pair angle must lie in [0, 1], got {}",
                    params.theta
                )));
            }
            let phi = params.theta * PI;
            for i in 0..count {
                if i % 2 == 0 {
                    data.extend(sphere_point(&mut rng, n));
                    continue;
                }
                let base = data[(i - 1) * n..i * n].to_vec();
                // Unit direction orthogonal to the base point.
                let mut dir = sphere_point(&mut rng, n);
                let proj: f64 = dir.iter().zip(&base).map(|(a, b)| a * b).sum();
                dir.iter_mut().zip(&base).for_each(|(a, b)| *a -= proj * b);
                normalize(&mut dir);
                let mut v: Vec<f64> = base
                    .iter()
                    .zip(&dir)
                    .map(|(b, d)| phi.cos() * b + phi.sin() * d)
                    .collect();
                normalize(&mut v);
                data.extend(v);
            }
        }
    }
    PointSet::normalized(n, data).map(|(ps, _)| ps)
}
