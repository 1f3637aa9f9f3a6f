mod common;

use hermloc::form::{HVector, HermForm};
use hermloc::lift;
use hermloc::linalg;
use hermloc::reduction::{
    are_similar, lift_similitude, make_isotropic_pair, newton_limit, pair_gram, reduce_to_standard,
    standard_block,
};
use hermloc::ring::{QElt, Scalar};
use hermloc::sample;
use proptest::prelude::*;

fn pi_basis(x: &HVector, y: &HVector) -> Vec<HVector> {
    let pi = QElt::uniformizer(x.0[0].ring());
    vec![x.clone(), y.clone(), x.scale(&pi), y.scale(&pi)]
}

/// `R`-coordinates of `v` in `basis` when `v` lies in its span, found by
/// inverting the Gram matrix of `f` on the basis.
fn coords(f: &HermForm, basis: &[HVector], v: &HVector) -> Option<Vec<Scalar>> {
    let r = f.ring();
    let gram: linalg::QMatrix = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| QElt::from_base(f.bilinear_f(a, b).unwrap()))
                .collect()
        })
        .collect();
    let inv = linalg::inverse(&gram, r).ok()?;
    let rhs = HVector(
        basis
            .iter()
            .map(|b| QElt::from_base(f.bilinear_f(b, v).unwrap()))
            .collect(),
    );
    let c: Vec<Scalar> = linalg::apply(&inv, &rhs, r)
        .0
        .into_iter()
        .map(|q| q.a)
        .collect();
    let back = basis
        .iter()
        .zip(&c)
        .fold(HVector::zero(r, v.len()), |acc, (b, k)| {
            &acc + &b.scale_base(k)
        });
    (back == *v).then_some(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hyperbolic_pair_is_exact_and_spans_the_same_module(seed: u64, n in 2usize..=4) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let (f, x, y) = sample::pairing(&r, n, &mut rng);
            let p = make_isotropic_pair(&f, &x, &y).unwrap();
            prop_assert_eq!(pair_gram(&f, &p.x, &p.y).unwrap(), standard_block(&r));
            prop_assert!(p.newton_steps <= newton_limit(r.precision()));

            let new_basis = pi_basis(&p.x, &p.y);
            let t: Vec<Vec<Scalar>> = pi_basis(&x, &y)
                .iter()
                .map(|v| coords(&f, &new_basis, v).expect("old pair lies in the new span"))
                .collect();
            prop_assert!(lift::det(&t).unwrap().is_unit());
        }
    }

    #[test]
    fn scrambled_standard_forms_reduce(seed: u64, n in 1usize..=5) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let sc = sample::scrambled_standard(&r, n, &mut rng);
            let std = HermForm::standard(&r, n).unwrap();
            let s = reduce_to_standard(&sc.form).unwrap();
            prop_assert!(s.verify(&std, &sc.form).unwrap());
            for _ in 0..20 {
                let m = sample::vector(&r, n, &mut rng);
                prop_assert!(s.holds_at(&std, &sc.form, &m).unwrap());
            }
        }
    }

    #[test]
    fn nondegenerate_forms_have_a_unit_pivot(seed: u64, n in 2usize..=5) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let f = sample::scrambled_standard(&r, n, &mut rng).form;
            let unit_off_diagonal = (0..n).any(|i| (0..n).any(|j| i != j && f.b()[i][j].is_unit()));
            prop_assert!(unit_off_diagonal);
            prop_assert!((0..n).all(|i| !f.b()[i][i].is_unit()));
        }
    }

    #[test]
    fn lifting_is_coherent(seed: u64, n in 2usize..=3, low_n in 2u32..=3) {
        let mut rng = common::rng(seed);
        for base in common::rings() {
            let high = base.change_precision(6).unwrap();
            let low = high.change_precision(low_n).unwrap();
            let f = sample::scrambled_standard(&high, n, &mut rng).form;
            let s_low = reduce_to_standard(&f.change_precision(&low).unwrap()).unwrap();
            let s = lift_similitude(&f, &s_low).unwrap();
            prop_assert_eq!(s.change_precision(&low).unwrap(), s_low);
            prop_assert!(s.verify(&HermForm::standard(&high, n).unwrap(), &f).unwrap());
        }
    }

    #[test]
    fn similarity_is_symmetric(seed: u64, n in 1usize..=4) {
        let mut rng = common::rng(seed);
        for r in common::rings() {
            let f1 = sample::scrambled_standard(&r, n, &mut rng).form;
            let f2 = sample::scrambled_standard(&r, n, &mut rng).form;
            let s12 = are_similar(&f1, &f2).unwrap().expect("same class");
            let s21 = are_similar(&f2, &f1).unwrap().expect("same class");
            prop_assert!(s12.verify(&f1, &f2).unwrap());
            prop_assert!(s21.verify(&f2, &f1).unwrap());
        }
    }
}

#[test]
fn degenerate_forms_are_reported() {
    for r in common::rings() {
        for n in 1..=3 {
            let err = reduce_to_standard(&HermForm::zero(&r, n)).unwrap_err();
            assert_eq!(err.kind(), "Degenerate");
            let std = HermForm::standard(&r, n).unwrap();
            assert!(are_similar(&std, &HermForm::zero(&r, n)).unwrap().is_none());
        }
    }
}
