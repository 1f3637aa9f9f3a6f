mod common;

use hermloc::sample;
use hermloc::teich::{coset_invariant, AeRing, OcModel, PiPoly};
use num_rational::Rational64;
use proptest::prelude::*;

fn rings() -> Vec<AeRing> {
    vec![
        AeRing::new(OcModel::new(9, 9, 8).unwrap(), 8).unwrap(),
        AeRing::new(OcModel::new(4, 4, 8).unwrap(), 6).unwrap(),
        AeRing::new(OcModel::new(5, 5, 6).unwrap(), 5).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn primitivity_is_unit_invariant(seed: u64, d in 0usize..=3) {
        let mut rng = common::rng(seed);
        for ring in rings() {
            let a = sample::primitive_series(&ring, d, &mut rng);
            let u = sample::series_unit(&ring, &mut rng);
            let ua = ring.series_mul(&u, &a).unwrap();
            prop_assert_eq!(ring.is_primitive(&a), Some(d));
            prop_assert_eq!(ring.is_primitive(&ua), Some(d));
        }
    }

    #[test]
    fn weierstrass_reconstructs_and_is_deterministic(seed: u64, d in 0usize..=3) {
        let mut rng = common::rng(seed);
        for ring in rings() {
            let a = sample::primitive_series(&ring, d, &mut rng);
            let w = ring.weierstrass_prep(&a).unwrap();
            let poly = ring.series(w.poly.coeffs.clone());
            prop_assert_eq!(ring.series_mul(&w.unit, &poly).unwrap(), a.clone());
            prop_assert_eq!(w.poly.degree(), d);
            prop_assert!(w.poly.coeffs[..d].iter().all(|c| ring.oc.in_max_ideal(c)));
            prop_assert_eq!(ring.weierstrass_prep(&a).unwrap(), w.clone());

            // Coefficients beyond pi^N never reach the truncated ring.
            let mut longer = a.coeffs.clone();
            longer.push(sample::mono(&ring.oc, 2, false, &mut rng));
            prop_assert_eq!(ring.weierstrass_prep(&ring.series(longer)).unwrap(), w);
        }
    }

    #[test]
    fn distinguished_implies_primitive_of_degree_one(seed: u64) {
        let mut rng = common::rng(seed);
        for ring in rings() {
            let u = sample::series_unit(&ring, &mut rng);
            let w = sample::mono(&ring.oc, 3, true, &mut rng);
            let a = ring.series_mul(&u, &ring.series(ring.linear(&w).coeffs)).unwrap();
            prop_assert!(ring.is_distinguished_deg1(&a));
            if !a.coeffs[0].is_zero() {
                prop_assert_eq!(ring.is_primitive(&a), Some(1));
            }
            let c = sample::crystalline_series(&ring, &mut rng);
            prop_assert!(!ring.is_distinguished_deg1(&c));
            prop_assert!(ring.in_crystalline_ideal(&c));
        }
    }

    #[test]
    fn split_polynomials_factor_completely(seed: u64, k in 1usize..=3) {
        let mut rng = common::rng(seed);
        let ring = &rings()[0];
        let oc = &ring.oc;
        // Distinct root valuations keep every Newton segment simple.
        let mut p = PiPoly { coeffs: vec![oc.one()] };
        let mut roots = Vec::new();
        for i in 0..k {
            let e = Rational64::new(rng.gen_range(1..=3) + 3 * i as i64, 9);
            let w = oc.add(
                &oc.monomial(1 + rng.gen_range(0..8), e).unwrap(),
                &oc.monomial(rng.gen_range(0..9), e + Rational64::new(rng.gen_range(1..=27), 9)).unwrap(),
            );
            p = ring.poly_product(&p, &ring.linear(&w));
            roots.push(w);
        }
        let f = ring.factor_linear(&p).unwrap();
        prop_assert!(f.complete);
        prop_assert_eq!(ring.reconstruct(&f), p);
        let mut got: Vec<_> = f.roots.iter().flat_map(|(w, m)| vec![w.clone(); *m]).collect();
        got.sort_by_key(|w| oc.valuation(w));
        prop_assert_eq!(got.len(), k);
        // In O_C / (t^V) a root is only determined modulo t^(V - v(P'(w))).
        let cap = Rational64::from_integer(oc.vprec() as i64);
        for (i, (g, w)) in got.iter().zip(&roots).enumerate() {
            let vd: Rational64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, x)| oc.valuation(&oc.sub(w, x)).unwrap())
                .sum();
            prop_assert!(oc.valuation(&oc.sub(g, w)).is_none_or(|v| v >= cap - vd));
        }
    }

    #[test]
    fn factor_linear_is_sound(seed: u64, d in 1usize..=3) {
        let mut rng = common::rng(seed);
        for ring in rings() {
            let a = sample::primitive_series(&ring, d, &mut rng);
            let p = ring.weierstrass_prep(&a).unwrap().poly;
            let f = ring.factor_linear(&p).unwrap();
            prop_assert_eq!(ring.reconstruct(&f), p);
        }
    }

    #[test]
    fn coset_invariant_is_a_homomorphism(seed: u64) {
        let mut rng = common::rng(seed);
        for ring in rings() {
            let oc = &ring.oc;
            let half = Rational64::from_integer(oc.vprec() as i64) / 2;
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
                let c = sample::mono(oc, 3, false, rng);
                if oc.valuation(&c).is_some_and(|v| v < half) {
                    return c;
                }
            };
            let (c, c2) = (draw(&mut rng), draw(&mut rng));
            let lhs = coset_invariant(oc, &oc.mul(&c, &c2)).unwrap();
            prop_assert_eq!(lhs, coset_invariant(oc, &c).unwrap() + coset_invariant(oc, &c2).unwrap());
        }
    }
}

use rand::Rng;
