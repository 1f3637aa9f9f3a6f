//! Exact lifts of truncated rings and fraction-free determinants.
//!
//! `Z/p^N` lifts to `Z` and `F_q[s]/(s^N)` lifts to `F_q[s]`; both are
//! integral domains with exact division, which is all Bareiss elimination
//! needs. Determinants computed in the lift reduce to the determinant in the
//! truncation, and they can additionally be divided exactly by elements that
//! are zero divisors downstairs (such as `theta`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::ring::{RawScalar, RingKind, RingSpec, Scalar};

pub(crate) trait ExactDomain {
    type El: Clone + PartialEq;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El {
        self.sub(&self.zero(), a)
    }
    /// `a / b` when `b` divides `a` exactly.
    fn div_exact(&self, a: &Self::El, b: &Self::El) -> Option<Self::El>;
    /// Valuation at the uniformizer (`p` resp. `s`); `None` for zero.
    fn valuation(&self, a: &Self::El) -> Option<u32>;
    fn lift(&self, s: &Scalar) -> Self::El;
    fn reduce(&self, ring: &RingSpec, a: &Self::El) -> Scalar;
}

pub(crate) struct Integers {
    p: BigInt,
}

impl ExactDomain for Integers {
    type El = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn valuation(&self, a: &BigInt) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut a = a.abs();
        let mut v = 0;
        loop {
            let (q, r) = a.div_rem(&self.p);
            if !r.is_zero() {
                return Some(v);
            }
            a = q;
            v += 1;
        }
    }
    fn lift(&self, s: &Scalar) -> BigInt {
        BigInt::from(s.as_u64().expect("integer ring"))
    }
    fn reduce(&self, ring: &RingSpec, a: &BigInt) -> Scalar {
        ring.scalar(&RawScalar::Int(a.clone()))
            .expect("integer reduction")
    }
}

/// `F_q[s]`, polynomials as coefficient vectors without trailing zeros.
pub(crate) struct FqPolys<'a> {
    gf: &'a Gf,
}

impl FqPolys<'_> {
    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

impl ExactDomain for FqPolys<'_> {
    type El = Vec<u32>;
    fn zero(&self) -> Vec<u32> {
        Vec::new()
    }
    fn one(&self) -> Vec<u32> {
        vec![1]
    }
    fn is_zero(&self, a: &Vec<u32>) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                self.gf.add(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::trim(out)
    }
    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let nb: Vec<u32> = b.iter().map(|&x| self.gf.neg(x)).collect();
        self.add(a, &nb)
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.gf.add(out[i + j], self.gf.mul(x, y));
            }
        }
        Self::trim(out)
    }
    fn div_exact(&self, a: &Vec<u32>, b: &Vec<u32>) -> Option<Vec<u32>> {
        let lead_inv = self.gf.inv(*b.last()?)?;
        if a.is_empty() {
            return Some(Vec::new());
        }
        if a.len() < b.len() {
            return None;
        }
        let mut rem = a.clone();
        let mut quot = vec![0u32; a.len() - b.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = self.gf.mul(rem[k + b.len() - 1], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                rem[k + j] = self.gf.sub(rem[k + j], self.gf.mul(c, y));
            }
        }
        rem.iter().all(|&x| x == 0).then(|| Self::trim(quot))
    }
    fn valuation(&self, a: &Vec<u32>) -> Option<u32> {
        a.iter().position(|&x| x != 0).map(|i| i as u32)
    }
    fn lift(&self, s: &Scalar) -> Vec<u32> {
        let c = s.poly_coeffs().expect("polynomial ring");
        Self::trim(c.iter().map(|&x| x as u32).collect())
    }
    fn reduce(&self, ring: &RingSpec, a: &Vec<u32>) -> Scalar {
        let raw = RawScalar::Poly(a.iter().map(|&x| x as i64).collect());
        ring.scalar(&raw).expect("polynomial reduction")
    }
}

/// Bareiss fraction-free determinant. Consumes the matrix.
pub(crate) fn bareiss<D: ExactDomain>(d: &D, mut m: Vec<Vec<D::El>>) -> D::El {
    let n = m.len();
    if n == 0 {
        return d.one();
    }
    let mut sign_flip = false;
    let mut prev = d.one();
    for k in 0..n - 1 {
        if d.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !d.is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return d.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = d.sub(&d.mul(&m[k][k], &m[i][j]), &d.mul(&m[i][k], &m[k][j]));
                m[i][j] = d
                    .div_exact(&num, &prev)
                    .expect("Bareiss step is an exact division");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg(&det)
    } else {
        det
    }
}

/// Determinant of a matrix over `R`, computed in the exact lift and reduced.
pub fn det(m: &[Vec<Scalar>]) -> Result<Scalar> {
    let ring = match m.first().and_then(|r| r.first()) {
        Some(s) => s.ring().clone(),
        None => return Err(Error::Input("determinant of an empty matrix".into())),
    };
    for row in m {
        if row.len() != m.len() {
            return Err(Error::LengthMismatch {
                expected: m.len(),
                got: row.len(),
            });
        }
        if row.iter().any(|s| s.ring() != &ring) {
            return Err(Error::RingMismatch);
        }
    }
    Ok(match ring.kind() {
        RingKind::IntModPrimePower { p, .. } => {
            let d = Integers { p: BigInt::from(p) };
            let lifted = m
                .iter()
                .map(|r| r.iter().map(|s| d.lift(s)).collect())
                .collect();
            d.reduce(&ring, &bareiss(&d, lifted))
        }
        RingKind::PolyTrunc { .. } => {
            let d = FqPolys {
                gf: ring.field().expect("field"),
            };
            let lifted = m
                .iter()
                .map(|r| r.iter().map(|s| d.lift(s)).collect())
                .collect();
            d.reduce(&ring, &bareiss(&d, lifted))
        }
    })
}

pub(crate) fn integers(p: u64) -> Integers {
    Integers { p: BigInt::from(p) }
}

pub(crate) fn fq_polys(gf: &Gf) -> FqPolys<'_> {
    FqPolys { gf }
}
