//! Random test data: scalars, units, valid forms, unimodular changes of
//! basis, scrambled standard forms, hyperbolic pairings, truncated series and
//! integer lattice actions.
//!
//! Everything takes an explicit RNG so that seeded runs are reproducible.

use num_rational::Rational64;
use rand::Rng;

use crate::form::{HVector, HermForm, Matrix};
use crate::linalg::{self, QMatrix};
use crate::ring::{QElt, RawScalar, RingKind, RingSpec, Scalar};
use crate::teich::{AeRing, MonoElt, OcModel, TeichSeries};

pub fn scalar<G: Rng + ?Sized>(ring: &RingSpec, rng: &mut G) -> Scalar {
    match ring.kind() {
        RingKind::IntModPrimePower { p, n } => {
            let modulus = p.pow(n);
            ring.int(rng.gen_range(0..modulus) as i64)
        }
        RingKind::PolyTrunc { q, n } => {
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(0..q) as i64).collect();
            ring.scalar(&RawScalar::Poly(c))
                .expect("valid coefficients")
        }
    }
}

pub fn unit<G: Rng + ?Sized>(ring: &RingSpec, rng: &mut G) -> Scalar {
    loop {
        let s = scalar(ring, rng);
        if s.is_unit() {
            return s;
        }
    }
}

/// A random element of the maximal ideal.
pub fn nonunit<G: Rng + ?Sized>(ring: &RingSpec, rng: &mut G) -> Scalar {
    loop {
        let s = scalar(ring, rng);
        if !s.is_unit() {
            return s;
        }
    }
}

pub fn qelt<G: Rng + ?Sized>(ring: &RingSpec, rng: &mut G) -> QElt {
    QElt::from_base(scalar(ring, rng)) + QElt::uniformizer(ring).scale(&scalar(ring, rng))
}

pub fn qunit<G: Rng + ?Sized>(ring: &RingSpec, rng: &mut G) -> QElt {
    QElt::from_base(unit(ring, rng)) + QElt::uniformizer(ring).scale(&scalar(ring, rng))
}

pub fn vector<G: Rng + ?Sized>(ring: &RingSpec, n: usize, rng: &mut G) -> HVector {
    HVector((0..n).map(|_| qelt(ring, rng)).collect())
}

/// A valid form with uniformly random free entries.
pub fn form<G: Rng + ?Sized>(ring: &RingSpec, n: usize, rng: &mut G) -> HermForm {
    let mut rand_matrix = || -> Matrix {
        (0..n)
            .map(|_| (0..n).map(|_| scalar(ring, rng)).collect())
            .collect()
    };
    let a = rand_matrix();
    let b = rand_matrix();
    HermForm::from_free_entries(ring, &a, &b).expect("free entries always give a valid form")
}

/// `P L D U` with `L`, `U` unitriangular, `D` diagonal of units and `P` a
/// permutation; always invertible over `R[Pi]`.
pub fn unimodular<G: Rng + ?Sized>(ring: &RingSpec, n: usize, rng: &mut G) -> QMatrix {
    let mut l = linalg::identity(ring, n);
    let mut u = linalg::identity(ring, n);
    let mut d = linalg::identity(ring, n);
    for i in 0..n {
        d[i][i] = qunit(ring, rng);
        for j in 0..i {
            l[i][j] = qelt(ring, rng);
            u[j][i] = qelt(ring, rng);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let ldu = linalg::mul(&linalg::mul(&l, &d, ring), &u, ring);
    perm.iter().map(|&i| ldu[i].clone()).collect()
}

/// `u * M_std,n` expressed in the basis given by the columns of a random
/// unimodular `S`.
pub struct Scrambled {
    pub form: HermForm,
    pub s: QMatrix,
    pub u: Scalar,
}

pub fn scrambled_standard<G: Rng + ?Sized>(ring: &RingSpec, n: usize, rng: &mut G) -> Scrambled {
    let s = unimodular(ring, n, rng);
    let u = unit(ring, rng);
    let cols: Vec<HVector> = (0..n).map(|j| linalg::column(&s, j)).collect();
    let form = HermForm::standard(ring, n)
        .and_then(|f| f.pullback(&cols))
        .expect("pullback of a valid form")
        .scale(&u);
    Scrambled { form, s, u }
}

/// A random valid form of rank `n >= 2` and vectors `x`, `y` with
/// `f(x, Pi y) = 1`. The form is a random perturbation of a scrambled
/// standard form, so a unit pairing exists.
pub fn pairing<G: Rng + ?Sized>(
    ring: &RingSpec,
    n: usize,
    rng: &mut G,
) -> (HermForm, HVector, HVector) {
    assert!(n >= 2);
    let pi_elt = QElt::uniformizer(ring);
    loop {
        let base = scrambled_standard(ring, n, rng).form;
        let noise = form(ring, n, rng);
        let scale = nonunit(ring, rng);
        let f = perturb(&base, &noise, &scale);
        for _ in 0..16 {
            let x = vector(ring, n, rng);
            let y = vector(ring, n, rng);
            let c = f.bilinear_f(&x, &y.scale(&pi_elt)).expect("same ring");
            if let Ok(ci) = c.inverse() {
                return (f, x.scale_base(&ci), y);
            }
        }
    }
}

/// `base + scale * noise` entrywise, still a valid form.
fn perturb(base: &HermForm, noise: &HermForm, scale: &Scalar) -> HermForm {
    let add = |x: &Matrix, y: &Matrix| -> Matrix {
        x.iter()
            .zip(y)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b * scale).collect())
            .collect()
    };
    HermForm::from_matrices(
        base.ring(),
        add(base.a(), noise.a()),
        add(base.b(), noise.b()),
    )
    .expect("constraints are linear")
}

/// A random element of the truncated `O_C` with at most `terms` monomials;
/// of positive valuation when `in_max_ideal`.
pub fn mono<G: Rng + ?Sized>(
    oc: &OcModel,
    terms: usize,
    in_max_ideal: bool,
    rng: &mut G,
) -> MonoElt {
    let cap = (oc.maxden() * oc.vprec()) as i64;
    let lo = i64::from(in_max_ideal);
    let mut x = oc.zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let c = rng.gen_range(1..oc.q());
        let e = Rational64::new(rng.gen_range(lo..cap), oc.maxden() as i64);
        x = oc.add(&x, &oc.monomial(c, e).expect("grid exponent"));
    }
    x
}

pub fn mono_unit<G: Rng + ?Sized>(oc: &OcModel, terms: usize, rng: &mut G) -> MonoElt {
    let c = oc.constant(rng.gen_range(1..oc.q()));
    oc.add(&c, &mono(oc, terms, true, rng))
}

/// A series with unit constant term.
pub fn series_unit<G: Rng + ?Sized>(ring: &AeRing, rng: &mut G) -> TeichSeries {
    let mut s = ring.zero();
    s.coeffs[0] = mono_unit(&ring.oc, 3, rng);
    for c in s.coeffs.iter_mut().skip(1) {
        if rng.gen_bool(0.5) {
            *c = mono(&ring.oc, 2, false, rng);
        }
    }
    s
}

/// A primitive series of degree `d`: `a_0 != 0`, `a_i in m_C` for `i < d`,
/// `a_d` a unit, arbitrary above.
pub fn primitive_series<G: Rng + ?Sized>(ring: &AeRing, d: usize, rng: &mut G) -> TeichSeries {
    let oc = &ring.oc;
    let mut s = ring.zero();
    for (i, c) in s.coeffs.iter_mut().enumerate() {
        *c = if i < d {
            if i == 0 {
                loop {
                    let x = mono(oc, 3, true, rng);
                    if !x.is_zero() {
                        break x;
                    }
                }
            } else if rng.gen_bool(0.7) {
                mono(oc, 3, true, rng)
            } else {
                oc.zero()
            }
        } else if i == d {
            mono_unit(oc, 3, rng)
        } else if rng.gen_bool(0.5) {
            mono(oc, 2, false, rng)
        } else {
            oc.zero()
        };
    }
    s
}

/// All coefficients in `m_C`.
pub fn crystalline_series<G: Rng + ?Sized>(ring: &AeRing, rng: &mut G) -> TeichSeries {
    let mut s = ring.zero();
    for c in s.coeffs.iter_mut() {
        if rng.gen_bool(0.7) {
            *c = mono(&ring.oc, 3, true, rng);
        }
    }
    s
}

/// A random `Z`-matrix with entries in `[-bound, bound]` and determinant
/// `+-1`, by rejection.
pub fn unimodular_int<G: Rng + ?Sized>(r: usize, bound: i64, rng: &mut G) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..r).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        if int_det(&m).abs() == 1 {
            return m;
        }
    }
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * int_det(&minor)
            })
            .sum(),
    }
}
