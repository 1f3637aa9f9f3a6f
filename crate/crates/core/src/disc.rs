//! Discriminant, divided discriminant and non-degeneracy.
//!
//! Both discriminants come from one determinant computed in the exact lift
//! (`Z` or `F_q[s]`). The Gram matrix is lifted *constraint-exactly*: only the
//! free entries `A_ij (i <= j)` and `B_ij (i < j)` are lifted and the rest is
//! rebuilt from `B + B^T = t A~`, `B_ii = t A_ii` in the lift. The lifted
//! determinant is then a specialization of the universal one, which is
//! divisible by `4 pi - t^2` as a polynomial, so dividing by the lift of
//! `theta` is exact.

use crate::error::{Error, Result};
use crate::form::HermForm;
use crate::lift::{bareiss, fq_polys, integers, ExactDomain};
use crate::ring::{RingKind, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscResult {
    pub value: Scalar,
    /// Absolute precision of `value`: `N` for `disc`, `N - v(theta)` for `disc'`.
    pub precision: u32,
    pub divided: bool,
}

impl DiscResult {
    pub fn is_unit(&self) -> bool {
        self.value.is_unit()
    }
}

struct Lifted<E> {
    det: E,
    theta: E,
}

fn lifted<D: ExactDomain>(d: &D, form: &HermForm) -> Lifted<D::El> {
    let n = form.rank();
    let ring = form.ring();
    let t = d.lift(&ring.t());
    let pi = d.lift(&ring.pi());
    let a: Vec<Vec<D::El>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = d.lift(&form.a()[i.min(j)][i.max(j)]);
                    if i == j {
                        d.add(&x, &x)
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut b = vec![vec![d.zero(); n]; n];
    for i in 0..n {
        // a[i][i] is already 2*A_ii; B_ii = t*A_ii
        b[i][i] = d.mul(&t, &d.lift(&form.a()[i][i]));
        for j in i + 1..n {
            b[i][j] = d.lift(&form.b()[i][j]);
            b[j][i] = d.sub(&d.mul(&t, &a[i][j]), &b[i][j]);
        }
    }
    let mut g = vec![vec![d.zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = a[i][j].clone();
            g[i][n + j] = b[i][j].clone();
            g[n + i][j] = b[j][i].clone();
            g[n + i][n + j] = d.mul(&pi, &a[i][j]);
        }
    }
    let four = d.add(&d.add(&d.one(), &d.one()), &d.add(&d.one(), &d.one()));
    let theta = d.sub(&d.mul(&four, &pi), &d.mul(&t, &t));
    Lifted {
        det: bareiss(d, g),
        theta,
    }
}

fn disc_in<D: ExactDomain>(d: &D, form: &HermForm, divided: bool) -> Result<DiscResult> {
    let ring = form.ring();
    let l = lifted(d, form);
    let n = ring.precision();
    if !divided {
        return Ok(DiscResult {
            value: d.reduce(ring, &l.det),
            precision: n,
            divided: false,
        });
    }
    let e = match ring.theta_valuation() {
        Some(e) if e < n => e,
        _ => {
            return Err(Error::InsufficientPrecision {
                precision: n,
                needed: d.valuation(&l.theta).unwrap_or(n),
            })
        }
    };
    let quotient = d.div_exact(&l.det, &l.theta).ok_or(Error::NotDivisible)?;
    let reduced_ring = ring.change_precision(n - e)?;
    Ok(DiscResult {
        value: d.reduce(&reduced_ring, &quotient),
        precision: n - e,
        divided: true,
    })
}

fn dispatch(form: &HermForm, divided: bool) -> Result<DiscResult> {
    match form.ring().kind() {
        RingKind::IntModPrimePower { p, .. } => disc_in(&integers(p), form, divided),
        RingKind::PolyTrunc { .. } => {
            let gf = form.ring().field().expect("field");
            disc_in(&fq_polys(gf), form, divided)
        }
    }
}

/// `det` of the `2n x 2n` Gram matrix, at full precision.
pub fn disc(form: &HermForm) -> DiscResult {
    dispatch(form, false).expect("undivided discriminant cannot fail")
}

/// `disc / theta` for odd rank, at precision `N - v(theta)`.
pub fn disc_divided(form: &HermForm) -> Result<DiscResult> {
    if form.rank().is_multiple_of(2) {
        return Err(Error::EvenRank(form.rank()));
    }
    dispatch(form, true)
}

/// Even rank: `disc` is a unit. Odd rank: `disc'` is a unit.
pub fn is_nondegenerate(form: &HermForm) -> Result<bool> {
    if form.rank().is_multiple_of(2) {
        Ok(disc(form).is_unit())
    } else {
        Ok(disc_divided(form)?.is_unit())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::det;
    use crate::ring::RingSpec;

    fn presets() -> Vec<RingSpec> {
        vec![
            RingSpec::preset("q2i", None).unwrap(),
            RingSpec::preset("q2sqrt2", None).unwrap(),
            RingSpec::preset("qp-sqrt-p:3", None).unwrap(),
            RingSpec::polytrunc(9, 6, &[0], &[0, 1]).unwrap(),
            RingSpec::polytrunc(4, 6, &[0, 1], &[0, 1]).unwrap(),
        ]
    }

    #[test]
    fn rank_one_norm_form() {
        for r in presets() {
            let f = HermForm::standard(&r, 1).unwrap();
            assert_eq!(disc(&f).value, r.theta());
            let d = disc_divided(&f).unwrap();
            assert!(d.value.is_one());
            assert_eq!(d.precision, r.precision() - r.theta_valuation().unwrap());
        }
    }

    #[test]
    fn standard_forms_are_nondegenerate() {
        for r in presets() {
            assert!(disc(&HermForm::standard(&r, 2).unwrap()).value.is_one());
            for n in 1..=5 {
                assert!(is_nondegenerate(&HermForm::standard(&r, n).unwrap()).unwrap());
            }
            let s3 = disc_divided(&HermForm::standard(&r, 3).unwrap()).unwrap();
            assert!(s3.value.is_one());
        }
    }

    #[test]
    fn pi_times_norm_form() {
        let r = RingSpec::preset("q2i", None).unwrap();
        let f = HermForm::scaled_norm_form(&r.pi());
        let d = disc_divided(&f).unwrap();
        let low = r.change_precision(d.precision).unwrap();
        assert_eq!(d.value, low.pi() * low.pi());
        assert!(!is_nondegenerate(&f).unwrap());
    }

    #[test]
    fn zero_forms() {
        let r = RingSpec::preset("q2sqrt2", None).unwrap();
        for n in 1..=4 {
            let z = HermForm::zero(&r, n);
            assert!(disc(&z).value.is_zero());
            assert!(!is_nondegenerate(&z).unwrap());
        }
    }

    #[test]
    fn errors() {
        let r = RingSpec::preset("q2i", None).unwrap();
        assert_eq!(
            disc_divided(&HermForm::standard(&r, 2).unwrap()),
            Err(Error::EvenRank(2))
        );
        let low = RingSpec::zmod(2, 2, 2, 2).unwrap(); // theta = 4 = 0 mod 4
        assert!(matches!(
            disc_divided(&HermForm::standard(&low, 1).unwrap()),
            Err(Error::InsufficientPrecision {
                precision: 2,
                needed: 2
            })
        ));
    }

    #[test]
    fn undivided_matches_in_ring_determinant() {
        for r in presets() {
            let f = HermForm::standard(&r, 3)
                .unwrap()
                .scale(&(r.one() + r.pi()));
            assert_eq!(disc(&f).value, det(&f.gram_matrix()).unwrap());
        }
    }
}
