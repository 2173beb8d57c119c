use heckespec_core::corner::{verify_defining_relations, verify_cyclic_conjugation};
use heckespec_core::hamiltonian::{build_hamiltonian, verify_intertwiner, verify_l1_closed_form, verify_trace_identity};
use heckespec_core::spectrum::{numeric_eigenvalues, predicted_spectrum, sorted_deviation, verify_spectrum};
use heckespec_core::wedge::{prop43_corner_instance, WedgeModule};
use heckespec_core::{CornerRep, CornerShape, Matrix, QParam, Rational, Scalar};
use proptest::prelude::*;

fn shape_strategy(max_n: usize) -> impl Strategy<Value = CornerShape> {
    (1..=max_n).prop_flat_map(|n| (0..=n).prop_map(move |l| CornerShape::new(n - l, l)))
}

fn rational_q() -> impl Strategy<Value = QParam<Rational>> {
    (1i64..=9, 1i64..=9, any::<bool>())
        .prop_map(|(n, d, neg)| QParam::from_ratio(if neg { -n } else { n }, d).unwrap())
}

fn all_exact_zero(report: &heckespec_core::VerificationReport) -> bool {
    report.checks.iter().all(|c| c.residual.is_exact_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn defining_relations_hold_exactly(shape in shape_strategy(6), q in rational_q()) {
        let rep = CornerRep::new(shape, q).unwrap();
        prop_assert!(all_exact_zero(&verify_defining_relations(&rep)));
    }

    #[test]
    fn generators_have_eigenvalues_q_and_minus_q_inverse(shape in shape_strategy(6), q in rational_q()) {
        let rep = CornerRep::new(shape, q.clone()).unwrap();
        for g in rep.generators() {
            let minus_q = -q.value().clone();
            let factor = g.add_identity(&minus_q).matmul(&g.add_identity(q.inverse()));
            prop_assert!(factor.is_zero());
        }
    }

    #[test]
    fn generator_sparsity(shape in shape_strategy(7), q in rational_q()) {
        let rep = CornerRep::new(shape, q).unwrap();
        let gens = rep.generators();
        let first = &gens[0];
        for i in 0..rep.dim() {
            for j in 0..rep.dim() {
                if i != j {
                    prop_assert!(Scalar::is_zero(&first[(i, j)]));
                }
            }
        }
        for g in &gens {
            prop_assert!(g.column_nonzeros().into_iter().all(|n| n <= 2));
        }
    }

    #[test]
    fn traceless_and_cyclic(shape in shape_strategy(6), q in rational_q()) {
        let rep = CornerRep::new(shape, q).unwrap();
        prop_assert!(all_exact_zero(&verify_trace_identity(&rep)));
        prop_assert!(all_exact_zero(&verify_cyclic_conjugation(&rep).unwrap()));
    }

    #[test]
    fn l1_closed_form_and_intertwiner(k in 0usize..=8, q in rational_q()) {
        prop_assert!(all_exact_zero(&verify_l1_closed_form(k, &q).unwrap()));
        let report = verify_intertwiner(k, &q).unwrap();
        prop_assert!(report.passed());
        prop_assert!(report.get("intertwiner").unwrap().residual.is_exact_zero());
    }

    #[test]
    fn backends_agree(shape in shape_strategy(6), n in 1i64..=9, d in 1i64..=9) {
        let exact = CornerRep::new(shape, QParam::<Rational>::from_ratio(n, d).unwrap()).unwrap();
        let approx = CornerRep::new(shape, QParam::new(n as f64 / d as f64).unwrap()).unwrap();
        let a = build_hamiltonian(&exact).matrix.to_f64();
        let b = build_hamiltonian(&approx).matrix;
        prop_assert!((&a - &b).max_abs() < 1e-12 * a.max_abs().max(1.0));
    }

    #[test]
    fn spectrum_matches_prediction(shape in shape_strategy(6), q in 0.3f64..4.0) {
        let q = QParam::new(q).unwrap();
        prop_assert!(verify_spectrum(shape, &q).unwrap().passed());
    }

    #[test]
    fn spectrum_is_q_independent(shape in shape_strategy(6), q1 in 0.3f64..4.0, q2 in -4.0f64..-0.3) {
        let spectrum = |q: f64| {
            let rep = CornerRep::new(shape, QParam::new(q).unwrap()).unwrap();
            numeric_eigenvalues(&build_hamiltonian(&rep).matrix.to_f64()).unwrap().values
        };
        prop_assert!(sorted_deviation(&spectrum(q1), &spectrum(q2)).unwrap() < 1e-8);
        let predicted = predicted_spectrum(shape).unwrap().values();
        prop_assert!(sorted_deviation(&predicted, &spectrum(q2)).unwrap() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn wedge_realisation_is_exact(shape in shape_strategy(6).prop_filter("1 <= l <= 3", |s| (1..=3).contains(&s.l())), q in rational_q()) {
        let module = WedgeModule::new(shape.k(), shape.l(), q).unwrap();
        let report = module.verify_all().unwrap();
        prop_assert!(all_exact_zero(&report), "{:?}", report.failures().collect::<Vec<_>>());
        if shape.l() >= 2 {
            for p in 1..=shape.generators() {
                prop_assert!(all_exact_zero(&module.verify_sum_product_identity(p).unwrap()));
            }
        }
    }

    #[test]
    fn prodtosum_rejects_perturbed_alpha(base_k in 1usize..=4, q in rational_q(), num in 1i64..=20, den in 1i64..=10) {
        prop_assert!(prop43_corner_instance(base_k, &q, q.value()).unwrap().passed());
        let alpha = q.value().clone() + Rational::from_ratio(num, den);
        prop_assume!(alpha != -q.inverse().clone() && !alpha.is_zero());
        let report = prop43_corner_instance(base_k, &q, &alpha).unwrap();
        let residual = &report.get("prop43.annihilates").unwrap().residual;
        prop_assert!(residual.magnitude() > 1e-3, "alpha = {alpha}, residual {residual:?}");
    }
}

#[test]
fn identity_is_not_a_valid_idempotent() {
    let q = QParam::<Rational>::from_ratio(3, 2).unwrap();
    let rep = CornerRep::new(CornerShape::new(2, 1), q.clone()).unwrap();
    let gens = rep.generators();
    let report =
        heckespec_core::wedge::verify_general_idempotent_condition(&gens, &gens, &Matrix::identity(9), q.value(), &q)
            .unwrap();
    assert!(!report.passed());
    assert!(report.get("prop43.braid").is_none());
}
