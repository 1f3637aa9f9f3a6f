//! Truncated local base rings `R` and the ramified quadratic extension
//! `R[Pi] / (Pi^2 - t Pi + pi)`.
//!
//! Two families of base ring are supported:
//!
//! * `Z / p^N` (a truncation of a mixed-characteristic `O_K`), and
//! * `F_q[s] / (s^N)` (a truncation of an equal-characteristic `O_K`).
//!
//! Both are chain rings: every ideal is generated by a power of the base
//! uniformizer (`p` resp. `s`). Valuations and precisions are always counted
//! in powers of that uniformizer.
//!
//! The extension is described purely by the images `t = Tr(Pi)` and
//! `pi = N(Pi)` in `R`; nothing else about `L/K` is ever needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gf::{is_prime, Gf};

/// Largest modulus accepted for `Z / p^N`, so that products fit in `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    IntModPrimePower { p: u64, n: u32 },
    PolyTrunc { q: u32, n: u32 },
}

/// Canonical representative of a base-ring element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    /// Integer in `[0, p^N)`.
    Int(u64),
    /// Coefficients of `1, s, .., s^(N-1)` as field-element codes.
    Poly(Vec<u16>),
}

#[derive(Debug)]
struct RingInner {
    kind: RingKind,
    modulus: u64,
    field: Option<Arc<Gf>>,
    t: Repr,
    pi: Repr,
    theta: Repr,
}

impl PartialEq for RingInner {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.t == other.t && self.pi == other.pi
    }
}

/// A truncated base ring together with the data `(t, pi)` of the extension.
///
/// Cheap to clone; all clones share the same immutable description.
#[derive(Clone, Debug)]
pub struct RingSpec(Arc<RingInner>);

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for RingSpec {}

/// Raw integer data for a base-ring element, before reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawScalar {
    Int(BigInt),
    Poly(Vec<i64>),
}

impl From<i64> for RawScalar {
    fn from(v: i64) -> Self {
        RawScalar::Int(BigInt::from(v))
    }
}

impl RingSpec {
    /// Builds `Z / p^n` with the given images of `t` and `pi`.
    pub fn zmod(p: u64, n: u32, t: i64, pi: i64) -> Result<Self> {
        Self::new(
            RingKind::IntModPrimePower { p, n },
            &RawScalar::from(t),
            &RawScalar::from(pi),
        )
    }

    /// Builds `F_q[s] / (s^n)`; `t` and `pi` are coefficient lists.
    pub fn polytrunc(q: u32, n: u32, t: &[i64], pi: &[i64]) -> Result<Self> {
        Self::new(
            RingKind::PolyTrunc { q, n },
            &RawScalar::Poly(t.to_vec()),
            &RawScalar::Poly(pi.to_vec()),
        )
    }

    pub fn new(kind: RingKind, t: &RawScalar, pi: &RawScalar) -> Result<Self> {
        let (modulus, field) = match kind {
            RingKind::IntModPrimePower { p, n } => {
                if !is_prime(p) {
                    return Err(Error::InvalidRing(format!("{p} is not prime")));
                }
                if n == 0 {
                    return Err(Error::InvalidRing("precision must be at least 1".into()));
                }
                let mut m: u64 = 1;
                for _ in 0..n {
                    m = m
                        .checked_mul(p)
                        .filter(|&m| m <= MAX_MODULUS)
                        .ok_or_else(|| {
                            Error::InvalidRing(format!("{p}^{n} exceeds the supported modulus"))
                        })?;
                }
                (m, None)
            }
            RingKind::PolyTrunc { q, n } => {
                if n == 0 {
                    return Err(Error::InvalidRing("precision must be at least 1".into()));
                }
                (0, Some(Arc::new(Gf::new(q)?)))
            }
        };
        let mut inner = RingInner {
            kind,
            modulus,
            field,
            t: Repr::Int(0),
            pi: Repr::Int(0),
            theta: Repr::Int(0),
        };
        inner.t = inner.reduce_raw(t)?;
        inner.pi = inner.reduce_raw(pi)?;
        let four = inner.repr_of(4);
        let t2 = inner.mul(&inner.t, &inner.t);
        inner.theta = inner.sub(&inner.mul(&four, &inner.pi), &t2);

        let n = inner.precision();
        let vt = inner.valuation(&inner.t).unwrap_or(n);
        let vpi = inner.valuation(&inner.pi).unwrap_or(n);
        let vtheta = inner.valuation(&inner.theta).unwrap_or(n);
        if vt == 0 {
            return Err(Error::InvalidRing(
                "t must be a non-unit (ramified extension)".into(),
            ));
        }
        if vpi == 0 {
            return Err(Error::InvalidRing("pi must be a non-unit".into()));
        }
        if vtheta < vpi {
            return Err(Error::InvalidRing(
                "theta = 4*pi - t^2 is not divisible by pi".into(),
            ));
        }
        Ok(RingSpec(Arc::new(inner)))
    }

    /// Named presets: `q2i` (`Q_2(i)`: p=2, t=2, pi=2, N=6), `q2sqrt2`
    /// (`Q_2(sqrt 2)`: p=2, t=0, pi=-2, N=8) and `qp-sqrt-p:<p>`
    /// (`Q_p(sqrt -p)`: p odd, t=0, pi=p, N=5). `precision` overrides N.
    pub fn preset(name: &str, precision: Option<u32>) -> Result<Self> {
        match name {
            "q2i" => Self::zmod(2, precision.unwrap_or(6), 2, 2),
            "q2sqrt2" => Self::zmod(2, precision.unwrap_or(8), 0, -2),
            _ => {
                let p = name
                    .strip_prefix("qp-sqrt-p:")
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| Error::Input(format!("unknown ring preset `{name}`")))?;
                if p == 2 || !is_prime(p) {
                    return Err(Error::InvalidRing(format!(
                        "qp-sqrt-p needs an odd prime, got {p}"
                    )));
                }
                Self::zmod(p, precision.unwrap_or(5), 0, p as i64)
            }
        }
    }

    pub fn kind(&self) -> RingKind {
        self.0.kind
    }

    pub fn precision(&self) -> u32 {
        self.0.precision()
    }

    /// Characteristic of the residue field.
    pub fn residue_char(&self) -> u64 {
        match self.0.kind {
            RingKind::IntModPrimePower { p, .. } => p,
            RingKind::PolyTrunc { .. } => self.field().unwrap().characteristic() as u64,
        }
    }

    pub(crate) fn field(&self) -> Option<&Gf> {
        self.0.field.as_deref()
    }

    pub fn t(&self) -> Scalar {
        self.wrap(self.0.t.clone())
    }

    pub fn pi(&self) -> Scalar {
        self.wrap(self.0.pi.clone())
    }

    pub fn theta(&self) -> Scalar {
        self.wrap(self.0.theta.clone())
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Scalar {
        self.wrap(self.0.repr_of(v))
    }

    /// Reduces raw data into the ring. For `F_q[s]/(s^N)` a bare integer maps
    /// into the prime field; coefficient lists must hold codes in `0..q` (or
    /// any integer when `q` is prime).
    pub fn scalar(&self, raw: &RawScalar) -> Result<Scalar> {
        Ok(self.wrap(self.0.reduce_raw(raw)?))
    }

    /// Same ring description at another precision (the only coercion).
    pub fn change_precision(&self, n: u32) -> Result<RingSpec> {
        if n == self.precision() {
            return Ok(self.clone());
        }
        let kind = match self.0.kind {
            RingKind::IntModPrimePower { p, .. } => RingKind::IntModPrimePower { p, n },
            RingKind::PolyTrunc { q, .. } => RingKind::PolyTrunc { q, n },
        };
        let t = self.t().to_raw();
        let pi = self.pi().to_raw();
        RingSpec::new(kind, &t, &pi)
    }

    /// `v(theta)`, or `None` if theta vanishes at this precision.
    pub fn theta_valuation(&self) -> Option<u32> {
        self.0.valuation(&self.0.theta)
    }

    fn wrap(&self, repr: Repr) -> Scalar {
        Scalar {
            ring: self.clone(),
            repr,
        }
    }

    pub(crate) fn same(&self, other: &RingSpec) -> bool {
        self == other
    }
}

impl RingInner {
    fn precision(&self) -> u32 {
        match self.kind {
            RingKind::IntModPrimePower { n, .. } | RingKind::PolyTrunc { n, .. } => n,
        }
    }

    fn gf(&self) -> &Gf {
        self.field
            .as_deref()
            .expect("polynomial ring without field")
    }

    fn repr_of(&self, v: i64) -> Repr {
        match self.kind {
            RingKind::IntModPrimePower { .. } => {
                Repr::Int((v as i128).rem_euclid(self.modulus as i128) as u64)
            }
            RingKind::PolyTrunc { n, .. } => {
                let mut c = vec![0u16; n as usize];
                c[0] = self.gf().from_int(v) as u16;
                Repr::Poly(c)
            }
        }
    }

    fn reduce_raw(&self, raw: &RawScalar) -> Result<Repr> {
        match (self.kind, raw) {
            (RingKind::IntModPrimePower { .. }, RawScalar::Int(v)) => {
                let m = BigInt::from(self.modulus);
                let r = ((v % &m) + &m) % &m;
                Ok(Repr::Int(u64::try_from(r).expect("reduced value fits")))
            }
            (RingKind::IntModPrimePower { .. }, RawScalar::Poly(_)) => Err(Error::Input(
                "coefficient list given for an integer ring".into(),
            )),
            (RingKind::PolyTrunc { n, .. }, RawScalar::Int(v)) => {
                let p = BigInt::from(self.gf().characteristic());
                let r = ((v % &p) + &p) % &p;
                let mut c = vec![0u16; n as usize];
                c[0] = u16::try_from(r).expect("fits");
                Ok(Repr::Poly(c))
            }
            (RingKind::PolyTrunc { n, q }, RawScalar::Poly(cs)) => {
                let gf = self.gf();
                let mut c = vec![0u16; n as usize];
                for (i, &x) in cs.iter().enumerate().take(n as usize) {
                    let code = if gf.degree() == 1 {
                        gf.from_int(x)
                    } else if (0..q as i64).contains(&x) {
                        x as u32
                    } else {
                        return Err(Error::Input(format!(
                            "field element code {x} out of range 0..{q}"
                        )));
                    };
                    c[i] = code as u16;
                }
                Ok(Repr::Poly(c))
            }
        }
    }

    fn add(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Int(x), Repr::Int(y)) => {
                Repr::Int(((*x as u128 + *y as u128) % self.modulus as u128) as u64)
            }
            (Repr::Poly(x), Repr::Poly(y)) => {
                let gf = self.gf();
                Repr::Poly(
                    x.iter()
                        .zip(y)
                        .map(|(&u, &v)| gf.add(u as u32, v as u32) as u16)
                        .collect(),
                )
            }
            _ => unreachable!("representation mismatch"),
        }
    }

    fn neg(&self, a: &Repr) -> Repr {
        match a {
            Repr::Int(x) => Repr::Int((self.modulus - x) % self.modulus),
            Repr::Poly(x) => {
                let gf = self.gf();
                Repr::Poly(x.iter().map(|&u| gf.neg(u as u32) as u16).collect())
            }
        }
    }

    fn sub(&self, a: &Repr, b: &Repr) -> Repr {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Int(x), Repr::Int(y)) => {
                Repr::Int(((*x as u128 * *y as u128) % self.modulus as u128) as u64)
            }
            (Repr::Poly(x), Repr::Poly(y)) => {
                let gf = self.gf();
                let n = x.len();
                let mut out = vec![0u32; n];
                for (i, &u) in x.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (j, &v) in y.iter().enumerate().take(n - i) {
                        out[i + j] = gf.add(out[i + j], gf.mul(u as u32, v as u32));
                    }
                }
                Repr::Poly(out.into_iter().map(|c| c as u16).collect())
            }
            _ => unreachable!("representation mismatch"),
        }
    }

    fn valuation(&self, a: &Repr) -> Option<u32> {
        match (self.kind, a) {
            (RingKind::IntModPrimePower { p, .. }, Repr::Int(x)) => {
                if *x == 0 {
                    return None;
                }
                let (mut x, mut v) = (*x, 0);
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                Some(v)
            }
            (_, Repr::Poly(c)) => c.iter().position(|&u| u != 0).map(|i| i as u32),
            _ => unreachable!("representation mismatch"),
        }
    }

    fn inverse(&self, a: &Repr) -> Option<Repr> {
        if self.valuation(a) != Some(0) {
            return None;
        }
        match a {
            Repr::Int(x) => {
                let (mut r0, mut r1) = (self.modulus as i128, *x as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1);
                Some(Repr::Int(s0.rem_euclid(self.modulus as i128) as u64))
            }
            Repr::Poly(c) => {
                // a = a0 (1 + m) with m in (s); invert the geometric series.
                let gf = self.gf();
                let a0inv = gf.inv(c[0] as u32)?;
                let scaled: Vec<u16> = c.iter().map(|&u| gf.mul(u as u32, a0inv) as u16).collect();
                let one = self.repr_of(1);
                let minus_m = self.sub(&one, &Repr::Poly(scaled));
                let mut acc = one.clone();
                let mut term = one;
                for _ in 1..self.precision() {
                    term = self.mul(&term, &minus_m);
                    acc = self.add(&acc, &term);
                }
                let mut inv = vec![0u16; c.len()];
                inv[0] = a0inv as u16;
                Some(self.mul(&acc, &Repr::Poly(inv)))
            }
        }
    }
}

/// An element of the base ring `R`, always held as its canonical representative.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    ring: RingSpec,
    repr: Repr,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Int(x) => write!(f, "{x}"),
            Repr::Poly(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &u)| u != 0)
                    .map(|(i, u)| match i {
                        0 => format!("{u}"),
                        1 => format!("{u}*s"),
                        _ => format!("{u}*s^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
        }
    }
}

impl Scalar {
    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Int(x) => *x == 0,
            Repr::Poly(c) => c.iter().all(|&u| u == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Valuation in powers of the base uniformizer; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.ring.0.valuation(&self.repr)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.0.add(&self.repr, &other.repr)))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.0.sub(&self.repr, &other.repr)))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.0.mul(&self.repr, &other.repr)))
    }

    pub fn inverse(&self) -> Result<Scalar> {
        self.ring
            .0
            .inverse(&self.repr)
            .map(|r| self.ring.wrap(r))
            .ok_or_else(|| Error::NotAUnit(self.to_string()))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Reinterprets this element in `target`, which must describe the same
    /// extension at some precision. Lowering truncates; raising takes the
    /// canonical lift.
    pub fn change_precision(&self, target: &RingSpec) -> Result<Scalar> {
        let same_family = match (self.ring.kind(), target.kind()) {
            (RingKind::IntModPrimePower { p: a, .. }, RingKind::IntModPrimePower { p: b, .. }) => {
                a == b
            }
            (RingKind::PolyTrunc { q: a, .. }, RingKind::PolyTrunc { q: b, .. }) => a == b,
            _ => false,
        };
        if !same_family {
            return Err(Error::RingMismatch);
        }
        target.scalar(&self.to_raw())
    }

    /// The canonical representative as raw data (lossless).
    pub fn to_raw(&self) -> RawScalar {
        match &self.repr {
            Repr::Int(x) => RawScalar::Int(BigInt::from(*x)),
            Repr::Poly(c) => RawScalar::Poly(c.iter().map(|&u| u as i64).collect()),
        }
    }

    /// Integer representative in `[0, p^N)`; `None` for polynomial rings.
    pub fn as_u64(&self) -> Option<u64> {
        match &self.repr {
            Repr::Int(x) => Some(*x),
            Repr::Poly(_) => None,
        }
    }

    pub(crate) fn poly_coeffs(&self) -> Option<&[u16]> {
        match &self.repr {
            Repr::Poly(c) => Some(c),
            Repr::Int(_) => None,
        }
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar ring mismatch")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.ring.wrap(self.ring.0.neg(&self.repr))
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// An element `a + b*Pi` of `R[Pi] / (Pi^2 - t Pi + pi)`.
#[derive(Clone, PartialEq, Eq)]
pub struct QElt {
    pub a: Scalar,
    pub b: Scalar,
}

impl fmt::Debug for QElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*Pi", self.a, self.b)
    }
}

impl QElt {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        a.check(&b)?;
        Ok(QElt { a, b })
    }

    pub fn from_base(a: Scalar) -> Self {
        let b = a.ring.zero();
        QElt { a, b }
    }

    pub fn zero(ring: &RingSpec) -> Self {
        QElt::from_base(ring.zero())
    }

    pub fn one(ring: &RingSpec) -> Self {
        QElt::from_base(ring.one())
    }

    /// The uniformizer `Pi`.
    pub fn uniformizer(ring: &RingSpec) -> Self {
        QElt {
            a: ring.zero(),
            b: ring.one(),
        }
    }

    /// `Pi^* = t - Pi`.
    pub fn uniformizer_conj(ring: &RingSpec) -> Self {
        QElt {
            a: ring.t(),
            b: -ring.one(),
        }
    }

    pub fn ring(&self) -> &RingSpec {
        self.a.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    pub fn checked_add(&self, other: &QElt) -> Result<QElt> {
        Ok(QElt {
            a: self.a.checked_add(&other.a)?,
            b: self.b.checked_add(&other.b)?,
        })
    }

    pub fn checked_sub(&self, other: &QElt) -> Result<QElt> {
        Ok(QElt {
            a: self.a.checked_sub(&other.a)?,
            b: self.b.checked_sub(&other.b)?,
        })
    }

    /// `(a1 + b1 Pi)(a2 + b2 Pi) = (a1 a2 - pi b1 b2) + (a1 b2 + a2 b1 + t b1 b2) Pi`.
    pub fn checked_mul(&self, other: &QElt) -> Result<QElt> {
        self.a.check(&other.a)?;
        let ring = self.ring();
        let bb = &self.b * &other.b;
        Ok(QElt {
            a: &self.a * &other.a - ring.pi() * &bb,
            b: &self.a * &other.b + &other.a * &self.b + ring.t() * bb,
        })
    }

    pub fn scale(&self, c: &Scalar) -> QElt {
        QElt {
            a: &self.a * c,
            b: &self.b * c,
        }
    }

    /// Galois involution: `(a + b Pi)^* = (a + t b) - b Pi`.
    pub fn conj(&self) -> QElt {
        QElt {
            a: &self.a + self.ring().t() * &self.b,
            b: -&self.b,
        }
    }

    /// `N(x) = x x^* = a^2 + t a b + pi b^2`.
    pub fn norm(&self) -> Scalar {
        let ring = self.ring();
        &self.a * &self.a + ring.t() * &self.a * &self.b + ring.pi() * &self.b * &self.b
    }

    /// `Tr(x) = x + x^* = 2a + t b`.
    pub fn trace(&self) -> Scalar {
        &self.a + &self.a + self.ring().t() * &self.b
    }

    pub fn norm_trace(&self) -> (Scalar, Scalar) {
        (self.norm(), self.trace())
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_unit()
    }

    /// `x^{-1} = x^* / N(x)`.
    pub fn inverse(&self) -> Result<QElt> {
        let n = self.norm();
        let ninv = n.inverse().map_err(|_| Error::NotAUnit(self.to_string()))?;
        Ok(self.conj().scale(&ninv))
    }

    pub fn change_precision(&self, target: &RingSpec) -> Result<QElt> {
        Ok(QElt {
            a: self.a.change_precision(target)?,
            b: self.b.change_precision(target)?,
        })
    }
}

macro_rules! qelt_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QElt> for &QElt {
            type Output = QElt;
            fn $method(self, rhs: &QElt) -> QElt {
                self.$checked(rhs).expect("extension ring mismatch")
            }
        }
        impl $tr<QElt> for QElt {
            type Output = QElt;
            fn $method(self, rhs: QElt) -> QElt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QElt> for QElt {
            type Output = QElt;
            fn $method(self, rhs: &QElt) -> QElt {
                (&self).$method(rhs)
            }
        }
        impl $tr<QElt> for &QElt {
            type Output = QElt;
            fn $method(self, rhs: QElt) -> QElt {
                self.$method(&rhs)
            }
        }
    };
}

qelt_binop!(Add, add, checked_add);
qelt_binop!(Sub, sub, checked_sub);
qelt_binop!(Mul, mul, checked_mul);

impl Neg for &QElt {
    type Output = QElt;
    fn neg(self) -> QElt {
        QElt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for QElt {
    type Output = QElt;
    fn neg(self) -> QElt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z16() -> RingSpec {
        RingSpec::zmod(2, 4, 2, 2).unwrap()
    }

    fn q(r: &RingSpec, a: i64, b: i64) -> QElt {
        QElt::new(r.int(a), r.int(b)).unwrap()
    }

    #[test]
    fn pi_squared_is_t_pi_minus_pi() {
        let r = z16();
        let p = QElt::uniformizer(&r);
        assert_eq!(&p * &p, q(&r, -2, 2));
    }

    #[test]
    fn multiplication_example_over_z16() {
        let r = z16();
        let x = q(&r, 1, 1);
        assert_eq!(&x * &x, q(&r, 15, 4));
        assert_eq!(&x * &QElt::one(&r), x);
    }

    #[test]
    fn conjugation_examples() {
        let r = z16();
        assert_eq!(QElt::uniformizer(&r).conj(), QElt::uniformizer_conj(&r));
        assert_eq!(q(&r, 3, 5).conj(), q(&r, 13, 11));
        assert_eq!(q(&r, 7, 0).conj(), q(&r, 7, 0));
    }

    #[test]
    fn norm_and_trace_examples() {
        let r = z16();
        assert_eq!(QElt::uniformizer(&r).norm_trace(), (r.pi(), r.t()));
        assert_eq!(QElt::one(&r).norm_trace(), (r.int(1), r.int(2)));
        assert_eq!(q(&r, 1, 1).norm_trace(), (r.int(5), r.int(4)));
    }

    #[test]
    fn inversion() {
        let r = z16();
        assert_eq!(QElt::one(&r).inverse().unwrap(), QElt::one(&r));
        assert_eq!(q(&r, 3, 0).inverse().unwrap(), q(&r, 11, 0));
        assert!(matches!(
            QElt::uniformizer(&r).inverse(),
            Err(Error::NotAUnit(_))
        ));
        let x = q(&r, 3, 7);
        assert_eq!(&x * &x.inverse().unwrap(), QElt::one(&r));
    }

    #[test]
    fn presets_and_theta() {
        let a = RingSpec::preset("q2i", None).unwrap();
        assert_eq!(a.theta(), a.int(4));
        assert_eq!(a.theta_valuation(), Some(2));
        let b = RingSpec::preset("q2sqrt2", None).unwrap();
        assert_eq!(b.theta(), b.int(-8));
        assert_eq!(b.theta_valuation(), Some(3));
        let c = RingSpec::preset("qp-sqrt-p:3", None).unwrap();
        assert_eq!(c.theta(), c.int(12));
        assert_eq!(c.theta_valuation(), Some(1));
        assert!(RingSpec::preset("qp-sqrt-p:2", None).is_err());
        assert!(RingSpec::preset("nope", None).is_err());
    }

    #[test]
    fn rejects_unit_t_or_pi() {
        assert!(RingSpec::zmod(2, 4, 1, 2).is_err());
        assert!(RingSpec::zmod(3, 4, 0, 1).is_err());
        assert!(RingSpec::zmod(4, 4, 0, 2).is_err());
        // t = 3 is a non-unit mod 9 but theta = 4*3 - 9 = 3 ... still divisible by pi = 3
        assert!(RingSpec::zmod(3, 2, 3, 3).is_ok());
        // pi = 4, t = 2: theta = 16 - 4 = 12 has valuation 2 >= 2, accepted
        assert!(RingSpec::zmod(2, 6, 2, 4).is_ok());
        // pi = 8, t = 2: theta = 28 has valuation 2 < 3
        assert!(RingSpec::zmod(2, 6, 2, 8).is_err());
    }

    #[test]
    fn polytrunc_arithmetic() {
        let r = RingSpec::polytrunc(9, 6, &[0], &[0, 1]).unwrap();
        assert_eq!(r.theta().valuation(), Some(1));
        let u = r.scalar(&RawScalar::Poly(vec![2, 5, 0, 7])).unwrap();
        let inv = u.inverse().unwrap();
        assert!((&u * &inv).is_one());
        let s = r.pi();
        assert!(s.pow(6).is_zero());
        assert_eq!(s.pow(5).valuation(), Some(5));
        let x = QElt::new(u.clone(), s.clone()).unwrap();
        assert_eq!(&x * &x.inverse().unwrap(), QElt::one(&r));
    }

    #[test]
    fn change_precision_truncates_and_lifts() {
        let r6 = RingSpec::preset("q2i", None).unwrap();
        let r3 = r6.change_precision(3).unwrap();
        let x = r6.int(45);
        let y = x.change_precision(&r3).unwrap();
        assert_eq!(y.as_u64(), Some(5));
        assert_eq!(y.change_precision(&r6).unwrap().as_u64(), Some(5));
        assert!(x.checked_add(&y).is_err());
    }
}
