mod common;

use hermloc::form::{HVector, HermForm};
use hermloc::json::FormBody;
use hermloc::sample;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn axioms_hold_on_random_forms(seed: u64, n in 1usize..=4) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let f = sample::form(&r, n, &mut rng);
            let (m, w) = (sample::vector(&r, n, &mut rng), sample::vector(&r, n, &mut rng));
            let x = sample::qelt(&r, &mut rng);
            let q = |v: &HVector| f.eval_q(v).unwrap();
            let bf = |a: &HVector, b: &HVector| f.bilinear_f(a, b).unwrap();
            prop_assert_eq!(q(&m.scale(&x)), &x.norm() * &q(&m));
            prop_assert_eq!(bf(&m, &w), &(&q(&(&m + &w)) - &q(&m)) - &q(&w));
            prop_assert_eq!(bf(&m.scale(&x), &w), bf(&m, &w.scale(&x.conj())));
            prop_assert_eq!(bf(&m.scale(&x), &m), &x.trace() * &q(&m));
            prop_assert_eq!(bf(&m, &w), bf(&w, &m));
        }
    }

    #[test]
    fn codec_round_trip(seed: u64, n in 1usize..=4) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let f = sample::form(&r, n, &mut rng);
            let again = HermForm::from_matrices(&r, f.a().clone(), f.b().clone()).unwrap();
            prop_assert_eq!(&again, &f);
            let body: FormBody = serde_json::from_value(serde_json::to_value(FormBody::from_form(&f)).unwrap()).unwrap();
            prop_assert_eq!(body.to_form(&r).unwrap(), f);
        }
    }

    #[test]
    fn gram_matrix_is_symmetric(seed: u64, n in 1usize..=5) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let g = sample::form(&r, n, &mut rng).gram_matrix();
            for (i, row) in g.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    prop_assert_eq!(x, &g[j][i]);
                }
            }
        }
    }
}

#[test]
fn constraint_violations_are_rejected() {
    let r = &common::rings()[0];
    let z = || r.zero();
    // B_11 must equal t * A_11.
    let err = HermForm::from_matrices(r, vec![vec![r.one()]], vec![vec![z()]]).unwrap_err();
    assert_eq!(err.kind(), "ConstraintViolation");
}
