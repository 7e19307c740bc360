use dwell_core::calculus::definite_integral;
use dwell_core::spectrum::{
    build_hamiltonian_matrix, eigenfunction, energy_continuum, numeric_spectrum,
};
use dwell_core::{LatticeSpec, ParticleSpec, Spectrum};
use proptest::prelude::*;

fn spectrum(big_n: usize, a: f64) -> Spectrum {
    Spectrum::new(LatticeSpec::new(big_n, a).unwrap(), ParticleSpec::natural())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mirror_modes_are_degenerate(big_n in 2usize..400, a in 0.01f64..10.0) {
        let s = spectrum(big_n, a);
        for j in 1..big_n {
            let e = s.mode(j).unwrap().energy;
            let mirror = s.mode(big_n - j).unwrap().energy;
            prop_assert!((e - mirror).abs() <= 1e-15 * s.energy_scale());
        }
    }

    #[test]
    fn band_is_bounded_by_scale_and_continuum(big_n in 2usize..400, a in 0.01f64..10.0) {
        let s = spectrum(big_n, a);
        let eps0 = s.energy_scale();
        for m in s.modes() {
            prop_assert!(m.energy > 0.0 && m.energy <= eps0 * (1.0 + 1e-15));
            let cont = energy_continuum(m.n_e, s.lattice().width(), s.particle()).unwrap();
            prop_assert!(m.energy <= cont * (1.0 + 1e-15));
        }
    }

    #[test]
    fn eigenfunctions_solve_the_lattice_equation(big_n in 4usize..120) {
        let s = spectrum(big_n, 1.0);
        for m in s.modes() {
            let psi = eigenfunction(m, s.lattice());
            let peak = psi.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            for n in 2..=(big_n as i64 - 2) {
                let r = 0.25 * (psi.at(n + 2) - 2.0 * psi.at(n) + psi.at(n - 2)) + m.e_tilde * psi.at(n);
                prop_assert!(r.abs() <= 1e-12 * peak);
            }
        }
    }

    #[test]
    fn orthonormal_except_mirror_pairs(big_n in 2usize..60, width in 0.5f64..20.0) {
        let lattice = LatticeSpec::with_width(big_n, width).unwrap();
        let s = Spectrum::new(lattice, ParticleSpec::natural());
        let psis: Vec<_> = s.modes().iter().map(|m| eigenfunction(m, &lattice)).collect();
        for j in 0..psis.len() {
            for k in j..psis.len() {
                if j != k && (j + 1) + (k + 1) == big_n {
                    continue;
                }
                let prod = psis[j].product(&psis[k]).unwrap();
                let v = definite_integral(&prod, 0, big_n as i64, lattice.spacing()).unwrap();
                let expected = if j == k { 1.0 } else { 0.0 };
                prop_assert!((v - expected).abs() <= 1e-12, "j={} k={} v={}", j + 1, k + 1, v);
            }
        }
    }
}

#[test]
fn matrix_spectrum_matches_formula() {
    for big_n in [4usize, 10, 101, 200] {
        let s = spectrum(big_n, 1.0);
        let mut exact: Vec<f64> = s.modes().iter().map(|m| m.e_tilde).collect();
        exact.sort_by(f64::total_cmp);
        let numeric = numeric_spectrum(&build_hamiltonian_matrix(s.lattice())).unwrap();
        assert_eq!(numeric.len(), exact.len());
        for (x, y) in numeric.iter().zip(&exact) {
            assert!((x - y).abs() <= 1e-10, "N={big_n}: {x} vs {y}");
        }
    }
}
