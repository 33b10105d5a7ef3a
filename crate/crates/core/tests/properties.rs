use approx::assert_relative_eq;
use proptest::prelude::*;

use numrad_core::inequalities::variants;
use numrad_core::io::{matrix_to_json, parse_matrix};
use numrad_core::matcore::{dot, vec_norm};
use numrad_core::{
    abs_parts, catalog_list, crawford, evaluate, numerical_radius, op_norm, spectral_radius,
    CMatrix, Complex64, EvalConfig,
};

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        CMatrix::from_vec(n, data).unwrap()
    })
}

fn sized_matrix() -> impl Strategy<Value = CMatrix> {
    (1usize..=5).prop_flat_map(matrix)
}

fn matrices(k: usize) -> impl Strategy<Value = Vec<CMatrix>> {
    (1usize..=4).prop_flat_map(move |n| prop::collection::vec(matrix(n), k))
}

fn tol(x: f64) -> f64 {
    1e-9 * x.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radius_between_half_norm_and_norm(a in sized_matrix()) {
        let w = numerical_radius(&a).value;
        let n = op_norm(&a);
        prop_assert!(0.5 * n <= w + tol(n));
        prop_assert!(w <= n + tol(n));
        prop_assert!(spectral_radius(&a) <= w + tol(n));
        prop_assert!(crawford(&a).value <= w + tol(n));
    }

    #[test]
    fn radius_dominates_sampled_field_values(
        a in matrix(3),
        xs in prop::collection::vec(prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3), 20),
    ) {
        let w = numerical_radius(&a).value;
        for x in xs {
            let x: Vec<Complex64> = x.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
            let len = vec_norm(&x);
            if len < 1e-3 {
                continue;
            }
            let value = dot(&x, &a.apply(&x)).norm() / (len * len);
            prop_assert!(value <= w + tol(w), "{value} > {w}");
        }
    }

    #[test]
    fn radius_invariances(a in sized_matrix(), phi in 0.0..std::f64::consts::TAU) {
        let w = numerical_radius(&a).value;
        assert_relative_eq!(numerical_radius(&a.adjoint()).value, w, max_relative = 1e-9, epsilon = 1e-12);
        let rotated = a.scale(Complex64::from_polar(1.0, phi));
        assert_relative_eq!(numerical_radius(&rotated).value, w, max_relative = 1e-9, epsilon = 1e-12);
        assert_relative_eq!(numerical_radius(&a.scale_real(2.0)).value, 2.0 * w, max_relative = 1e-9, epsilon = 1e-12);
    }

    #[test]
    fn abs_parts_square_to_gram_matrices(a in sized_matrix()) {
        let (p, q) = abs_parts(&a);
        let scale = op_norm(&a).powi(2).max(1.0);
        let ata = &a.adjoint() * &a;
        let aat = &a * &a.adjoint();
        prop_assert!((&(&p * &p) - &ata).max_abs() <= 1e-10 * scale);
        prop_assert!((&(&q * &q) - &aat).max_abs() <= 1e-10 * scale);
        prop_assert!(p.is_hermitian(1e-12 * scale) && q.is_hermitian(1e-12 * scale));
    }

    #[test]
    fn unary_entries_hold(a in sized_matrix()) {
        check_all(&[a], 1)?;
    }

    #[test]
    fn binary_entries_hold(ab in matrices(2)) {
        check_all(&ab, 2)?;
    }

    #[test]
    fn four_input_entries_hold(m in matrices(4)) {
        check_all(&m, 4)?;
    }

    #[test]
    fn json_round_trip(a in sized_matrix()) {
        let text = matrix_to_json(&a);
        prop_assert_eq!(parse_matrix(&text).unwrap(), a);
    }
}

fn check_all(inputs: &[CMatrix], arity: usize) -> Result<(), TestCaseError> {
    let cfg = EvalConfig::default();
    for e in catalog_list().iter().filter(|e| e.arity == arity) {
        let rows = evaluate(e.id, inputs, &cfg).unwrap();
        prop_assert_eq!(rows.len(), variants(e, &cfg, None).len());
        for r in rows {
            prop_assert!(r.holds, "{}", r);
            if !r.applicable {
                prop_assert!(r.lhs.is_none() && r.details.contains_key("reason"));
            }
        }
    }
    Ok(())
}
