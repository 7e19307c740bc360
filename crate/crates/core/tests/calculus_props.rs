use std::f64::consts::PI;

use dwell_core::calculus::{
    antiderivative_series, centered_diff1, centered_diff2, closed_form_antiderivative, translate,
};
use dwell_core::{ClosedFormKind, LatticeFunction, LatticeSpec};
use proptest::prelude::*;

/// Random values on `0..=N` vanishing outside `[2, N-2]`.
fn interior_function() -> impl Strategy<Value = LatticeFunction> {
    (6usize..80).prop_flat_map(|big_n| {
        prop::collection::vec(-1.0f64..1.0, big_n + 1).prop_map(move |mut v| {
            let last = v.len() - 1;
            for (n, x) in v.iter_mut().enumerate() {
                if n < 2 || n > last - 2 {
                    *x = 0.0;
                }
            }
            LatticeFunction::from_values(v).unwrap()
        })
    })
}

/// `(N, j, n1, n2)` with `j` avoiding `0`, `N/2`, `N` and `n1 <= n2` of equal parity.
fn alpha_and_sites() -> impl Strategy<Value = (usize, usize, i64, i64)> {
    (4usize..=200)
        .prop_flat_map(|big_n| (Just(big_n), 1..big_n, 0..=big_n as i64, 0..=big_n as i64))
        .prop_filter("j must avoid N/2", |(big_n, j, _, _)| 2 * j != *big_n)
        .prop_map(|(big_n, j, n1, n2)| {
            let (lo, mut hi) = (n1.min(n2), n1.max(n2));
            if (hi - lo) % 2 != 0 {
                hi -= 1;
            }
            (big_n, j, lo, hi.max(lo))
        })
}

fn kind() -> impl Strategy<Value = ClosedFormKind> {
    prop_oneof![
        Just(ClosedFormKind::One),
        Just(ClosedFormKind::Cos),
        Just(ClosedFormKind::Sin),
        Just(ClosedFormKind::SinSquared),
    ]
}

proptest! {
    #[test]
    fn difference_inverts_antiderivative(f in interior_function(), a in 0.05f64..3.0) {
        let last = f.last_site();
        let anti = LatticeFunction::from_values(
            (0..=last as i64).map(|n| antiderivative_series(&f, n, a)).collect(),
        ).unwrap();
        for n in 1..last as i64 {
            let d = centered_diff1(&anti, n, a).unwrap();
            prop_assert!((d - f.at(n)).abs() <= 1e-12, "n={} d={} f={}", n, d, f.at(n));
        }
    }

    #[test]
    fn closed_forms_match_series_between_equal_parity_sites(
        (big_n, j, n1, n2) in alpha_and_sites(),
        kind in kind(),
    ) {
        let alpha = PI * j as f64 / big_n as f64;
        let lattice = LatticeSpec::new(big_n, 1.0).unwrap();
        let f = LatticeFunction::from_fn(&lattice, |n| kind.integrand(alpha, n as f64));
        let series = antiderivative_series(&f, n2, 1.0) - antiderivative_series(&f, n1, 1.0);
        let closed = closed_form_antiderivative(kind, alpha, n2).unwrap()
            - closed_form_antiderivative(kind, alpha, n1).unwrap();
        prop_assert!((series - closed).abs() <= 1e-10, "series={} closed={}", series, closed);
    }

    #[test]
    fn closed_forms_invert_the_difference(
        (big_n, j, n, _) in alpha_and_sites(),
        kind in kind(),
    ) {
        let alpha = PI * j as f64 / big_n as f64;
        let up = closed_form_antiderivative(kind, alpha, n + 1).unwrap();
        let down = closed_form_antiderivative(kind, alpha, n - 1).unwrap();
        let d = 0.5 * (up - down);
        prop_assert!((d - kind.integrand(alpha, n as f64)).abs() <= 1e-10);
    }

    #[test]
    fn exact_on_low_degree_polynomials(
        c in prop::array::uniform4(-2.0f64..2.0),
        a in 0.1f64..2.0,
        n in 3i64..17,
    ) {
        let lattice = LatticeSpec::new(20, a).unwrap();
        let x = |n: usize| n as f64 * a;
        let quad = LatticeFunction::from_fn(&lattice, |n| c[0] + c[1] * x(n) + c[2] * x(n).powi(2));
        let cubic = LatticeFunction::from_fn(&lattice, |n| {
            c[0] + c[1] * x(n) + c[2] * x(n).powi(2) + c[3] * x(n).powi(3)
        });
        let xn = n as f64 * a;
        let d1 = centered_diff1(&quad, n, a).unwrap();
        prop_assert!((d1 - (c[1] + 2.0 * c[2] * xn)).abs() <= 1e-9);
        let d2 = centered_diff2(&cubic, n, a).unwrap();
        prop_assert!((d2 - (2.0 * c[2] + 6.0 * c[3] * xn)).abs() <= 1e-8);
    }

    #[test]
    fn translation_group_law(
        values in prop::collection::vec(-5.0f64..5.0, 11..40),
        m1 in -4i64..=4,
        m2 in -4i64..=4,
    ) {
        // pad with 8 zeros on each side so no shift clips the support
        let mut padded = vec![0.0; 8];
        padded.extend(values);
        padded.extend(vec![0.0; 8]);
        let f = LatticeFunction::from_values(padded).unwrap();
        let twice = translate(&translate(&f, m1), m2);
        let once = translate(&f, m1 + m2);
        prop_assert_eq!(twice.values(), once.values());
        let identity = translate(&f, 0);
        prop_assert_eq!(identity.values(), f.values());
    }
}
