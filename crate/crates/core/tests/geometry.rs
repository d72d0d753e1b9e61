mod common;

use circbin_core::geometry::{angular_distance, angular_perturbation_bound, coherence};
use circbin_core::{PointSet, Rng};
use common::normalize;
use proptest::prelude::*;

#[test]
fn angular_distance_is_a_metric_on_random_triples() {
    let mut rng = Rng::stream(10, 0);
    for _ in 0..10_000 {
        let x = normalize(rng.normal_vec(16));
        let y = normalize(rng.normal_vec(16));
        let z = normalize(rng.normal_vec(16));
        let xy = angular_distance(&x, &y).unwrap();
        assert_eq!(xy, angular_distance(&y, &x).unwrap());
        let xz = angular_distance(&x, &z).unwrap();
        let yz = angular_distance(&y, &z).unwrap();
        assert!(xz <= xy + yz + 1e-12);
    }
}

#[test]
fn perturbation_bound_holds_on_random_quadruples() {
    let mut rng = Rng::stream(11, 0);
    let n = 32;
    for trial in 0..10_000 {
        let x = normalize(rng.normal_vec(n));
        let y = normalize(rng.normal_vec(n));
        let eps = 10f64.powf(-4.0 * rng.uniform());
        let xp = normalize(x.iter().map(|v| v + eps * rng.normal()).collect());
        let yp = normalize(y.iter().map(|v| v + eps * rng.normal()).collect());
        let (lhs, rhs) = angular_perturbation_bound(&x, &xp, &y, &yp).unwrap();
        assert!(lhs <= rhs, "trial {trial}: {lhs} > {rhs}");
    }
}

proptest! {
    #[test]
    fn coherence_within_unit_bounds(seed in any::<u64>(), n in 2usize..40, count in 1usize..12) {
        let mut rng = Rng::stream(seed, 0);
        let data: Vec<f64> = (0..count).flat_map(|_| normalize(rng.normal_vec(n))).collect();
        let ps = PointSet::new(n, data).unwrap();
        let c = coherence(&ps);
        prop_assert!(c.rho_direct >= 1.0 / (n as f64).sqrt() - 1e-12);
        prop_assert!(c.rho_direct <= 1.0);
        prop_assert!(c.rho_direct <= c.rho_cross);
        prop_assert!(c.rho_cross <= 1.0);
        prop_assert!((0.0..=1.0).contains(&c.theta_min));
    }
}
