use std::f64::consts::PI;

use dwell_core::thermo::{
    mean_energy, partition_continuum_closed, partition_continuum_sum, partition_theta, Cutoff,
};
use dwell_core::{LatticeSpec, ParticleSpec, PartitionRegistry, Spectrum};
use proptest::prelude::*;

/// Natural-unit width with `mu = 1 / (beta = 1)` scaled to `mu`.
fn width_for_mu(mu: f64) -> f64 {
    (PI * PI / (2.0 * mu)).sqrt()
}

fn system(big_n: usize, width: f64) -> Spectrum {
    Spectrum::new(
        LatticeSpec::with_width(big_n, width).unwrap(),
        ParticleSpec::natural(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn log_partition_is_convex_decreasing(
        big_n in 5usize..200,
        width in 1.0f64..50.0,
        beta in 0.05f64..5.0,
    ) {
        let s = system(big_n, width);
        let registry = PartitionRegistry::builtin();
        let h = 1e-3 * beta;
        for method in registry.iter() {
            let ln = |b: f64| method.partition(&s, b).unwrap().z.ln();
            let (lo, mid, hi) = (ln(beta - h), ln(beta), ln(beta + h));
            prop_assert!(hi < lo, "{}: not decreasing", method.name());
            // relative to the slope, curvature must not be negative beyond rounding
            let curvature = hi - 2.0 * mid + lo;
            prop_assert!(curvature >= -1e-9 * (hi - lo).abs(), "{}: {}", method.name(), curvature);
        }
    }

    #[test]
    fn energy_variance_is_nonnegative(big_n in 5usize..200, beta in 0.01f64..50.0) {
        let s = system(big_n, big_n as f64);
        let h = 1e-4 * beta;
        let slope = (mean_energy(&s, beta + h).unwrap() - mean_energy(&s, beta - h).unwrap()) / (2.0 * h);
        prop_assert!(-slope >= -1e-12 * s.energy_scale().powi(2));
    }
}

proptest! {
    #[test]
    fn theta_form_equals_level_sum(mu in 0.05f64..5.0) {
        let p = ParticleSpec::natural();
        let w = width_for_mu(mu);
        let sum = partition_continuum_sum(w, &p, 1.0, Cutoff::Auto).unwrap().z;
        let theta = partition_theta(w, &p, 1.0).unwrap().z;
        prop_assert!((theta - sum).abs() <= 1e-9 * sum);
    }

    #[test]
    fn closed_form_exceeds_sum_by_half(mu in 1e-4f64..0.15) {
        let p = ParticleSpec::natural();
        let w = width_for_mu(mu);
        let sum = partition_continuum_sum(w, &p, 1.0, Cutoff::Auto).unwrap().z;
        let closed = partition_continuum_closed(w, &p, 1.0).unwrap().z;
        prop_assert!((closed - sum - 0.5).abs() <= 1e-4);
    }
}
