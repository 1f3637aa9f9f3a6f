//! A desk-scale model of `A = O_C[[pi]]` in equal characteristic.
//!
//! `O_C` is replaced by finite sums `sum c_k t^(k / D)` with `c_k in F_q` and
//! `D` (the `maxden`) a power of `p`, truncated at valuation `V` (the
//! `vprec`): terms `t^e` with `e >= V` are dropped. This is the ring
//! `F_q[t^(1/D)] / (t^V)`, so every operation is exact modulo `t^V`, just as
//! base-ring arithmetic is exact modulo `pi^N`. Coefficients are their own
//! Teichmueller representatives.
//!
//! Series are truncated at `pi^N` and multiply coefficientwise (no carries).

use std::sync::Arc;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::gf::Gf;

/// Default valuation cap `V`.
pub const DEFAULT_VPREC: u32 = 8;
/// Default bound on the number of monomials in one coefficient.
pub const DEFAULT_MAX_TERMS: usize = 1 << 16;

/// An element of the truncated `O_C`, stored densely on the exponent grid
/// `k / D`, `0 <= k < V D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoElt {
    c: Vec<u32>,
}

impl MonoElt {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn first(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    pub fn support_len(&self) -> usize {
        self.c.iter().filter(|&&x| x != 0).count()
    }
}

#[derive(Clone, Debug)]
pub struct OcModel {
    gf: Arc<Gf>,
    maxden: u32,
    vprec: u32,
    cap: usize,
    max_terms: usize,
}

impl PartialEq for OcModel {
    fn eq(&self, o: &Self) -> bool {
        self.gf.order() == o.gf.order() && self.maxden == o.maxden && self.vprec == o.vprec
    }
}

impl OcModel {
    pub fn new(q: u32, maxden: u32, vprec: u32) -> Result<Self> {
        let gf = Gf::new(q)?;
        let p = gf.characteristic();
        let mut d = maxden;
        while d > 1 && d.is_multiple_of(p) {
            d /= p;
        }
        if maxden == 0 || d != 1 {
            return Err(Error::Input(format!(
                "maxden {maxden} is not a power of {p}"
            )));
        }
        if vprec == 0 {
            return Err(Error::Input("vprec must be positive".into()));
        }
        let cap = (maxden as usize)
            .checked_mul(vprec as usize)
            .filter(|&c| c <= 1 << 20)
            .ok_or_else(|| Error::Input("maxden * vprec is too large".into()))?;
        Ok(OcModel {
            gf: Arc::new(gf),
            maxden,
            vprec,
            cap,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn field(&self) -> &Gf {
        &self.gf
    }

    pub fn q(&self) -> u32 {
        self.gf.order()
    }

    pub fn p(&self) -> u32 {
        self.gf.characteristic()
    }

    pub fn maxden(&self) -> u32 {
        self.maxden
    }

    pub fn vprec(&self) -> u32 {
        self.vprec
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn zero(&self) -> MonoElt {
        MonoElt {
            c: vec![0; self.cap],
        }
    }

    pub fn one(&self) -> MonoElt {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> MonoElt {
        let mut z = self.zero();
        z.c[0] = c;
        z
    }

    /// `c t^e`; zero if `e >= V`.
    pub fn monomial(&self, c: u32, e: Rational64) -> Result<MonoElt> {
        let k = self.grid_index(e)?;
        if !self.gf.contains(c) {
            return Err(Error::Input(format!(
                "{c} is not an element of F_{}",
                self.q()
            )));
        }
        let mut z = self.zero();
        if k < self.cap {
            z.c[k] = c;
        }
        Ok(z)
    }

    fn grid_index(&self, e: Rational64) -> Result<usize> {
        let scaled = e * Rational64::from_integer(self.maxden as i64);
        if *e.numer() < 0 || !scaled.is_integer() {
            return Err(Error::Input(format!(
                "exponent {e} is not a nonnegative multiple of 1/{}",
                self.maxden
            )));
        }
        Ok(usize::try_from(scaled.to_integer()).unwrap_or(usize::MAX))
    }

    pub fn from_terms(&self, terms: &[(u32, Rational64)]) -> Result<MonoElt> {
        let mut z = self.zero();
        for &(c, e) in terms {
            z = self.add(&z, &self.monomial(c, e)?);
        }
        Ok(z)
    }

    /// Nonzero terms `(c, e)`, ascending in `e`.
    pub fn terms(&self, a: &MonoElt) -> Vec<(u32, Rational64)> {
        a.c.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (c, self.exponent(k)))
            .collect()
    }

    fn exponent(&self, k: usize) -> Rational64 {
        Rational64::new(k as i64, self.maxden as i64)
    }

    pub fn add(&self, a: &MonoElt, b: &MonoElt) -> MonoElt {
        MonoElt {
            c: a.c
                .iter()
                .zip(&b.c)
                .map(|(&x, &y)| self.gf.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &MonoElt, b: &MonoElt) -> MonoElt {
        MonoElt {
            c: a.c
                .iter()
                .zip(&b.c)
                .map(|(&x, &y)| self.gf.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &MonoElt) -> MonoElt {
        MonoElt {
            c: a.c.iter().map(|&x| self.gf.neg(x)).collect(),
        }
    }

    pub fn scale(&self, a: &MonoElt, c: u32) -> MonoElt {
        MonoElt {
            c: a.c.iter().map(|&x| self.gf.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &MonoElt, b: &MonoElt) -> MonoElt {
        let mut out = vec![0u32; self.cap];
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c[..self.cap - i].iter().enumerate() {
                if y != 0 {
                    out[i + j] = self.gf.add(out[i + j], self.gf.mul(x, y));
                }
            }
        }
        MonoElt { c: out }
    }

    /// Valuation as a rational; `None` for zero (i.e. valuation `>= V`).
    pub fn valuation(&self, a: &MonoElt) -> Option<Rational64> {
        a.first().map(|k| self.exponent(k))
    }

    pub fn is_unit(&self, a: &MonoElt) -> bool {
        a.c[0] != 0
    }

    /// Zero or of positive valuation.
    pub fn in_max_ideal(&self, a: &MonoElt) -> bool {
        a.c[0] == 0
    }

    pub fn inverse(&self, a: &MonoElt) -> Result<MonoElt> {
        let c0 = self
            .gf
            .inv(a.c[0])
            .ok_or_else(|| Error::NotAUnit(format!("{:?}", self.terms(a))))?;
        // x <- x (2 - a x); the error squares each round and t^V = 0.
        let mut x = self.constant(c0);
        let two = self.constant(self.gf.from_int(2));
        loop {
            let ax = self.mul(a, &x);
            if ax == self.one() {
                return Ok(x);
            }
            x = self.mul(&x, &self.sub(&two, &ax));
        }
    }

    /// `t^(-k/D) a`, known only below `V - k/D`. `None` if `v(a) < k/D`.
    fn shift_down(&self, a: &MonoElt, k: usize) -> Option<MonoElt> {
        if a.first().is_some_and(|f| f < k) {
            return None;
        }
        let mut out = vec![0u32; self.cap];
        out[..self.cap - k].copy_from_slice(&a.c[k..]);
        Some(MonoElt { c: out })
    }

    /// `a / b` for `v(a) >= v(b)`; the result is exact below `V - v(b)`.
    pub fn div_lossy(&self, a: &MonoElt, b: &MonoElt) -> Option<MonoElt> {
        let k = b.first()?;
        let unit = self.shift_down(b, k)?;
        let a = self.shift_down(a, k)?;
        // Terms of `a` above V - v(b) are unknown; keep them dropped.
        let mut q = self.mul(&a, &self.inverse(&unit).ok()?);
        for x in &mut q.c[self.cap - k..] {
            *x = 0;
        }
        Some(q)
    }

    pub(crate) fn check_support(&self, a: &MonoElt) -> Result<()> {
        let n = a.support_len();
        if n > self.max_terms {
            Err(Error::SupportOverflow(self.max_terms))
        } else {
            Ok(())
        }
    }
}

/// `sum_{i < N} [a_i] pi^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TeichSeries {
    pub coeffs: Vec<MonoElt>,
}

impl TeichSeries {
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }
}

/// A polynomial in `pi` over the truncated `O_C`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiPoly {
    pub coeffs: Vec<MonoElt>,
}

impl PiPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassFactorization {
    pub unit: TeichSeries,
    pub poly: PiPoly,
    /// Newton rounds used.
    pub iterations: usize,
}

/// One segment of a Newton polygon: `length` roots of valuation `slope`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational64,
    pub length: usize,
}

/// `P = pi^pi_power * P'` with `P'(0) != 0`; `segments` describe `P'`,
/// ascending in root valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub pi_power: usize,
    pub segments: Vec<Segment>,
}

/// `P = pi^pi_power * prod (pi - [root])^mult * remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactorization {
    pub pi_power: usize,
    pub roots: Vec<(MonoElt, usize)>,
    pub remainder: PiPoly,
    pub complete: bool,
}

/// `O_C[[pi]] / (pi^N)` over a given coefficient model.
#[derive(Clone, Debug, PartialEq)]
pub struct AeRing {
    pub oc: OcModel,
    pub prec: usize,
}

const MAX_ROUNDS: usize = 64;

impl AeRing {
    pub fn new(oc: OcModel, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::Input("series precision must be positive".into()));
        }
        Ok(AeRing { oc, prec })
    }

    pub fn zero(&self) -> TeichSeries {
        TeichSeries {
            coeffs: vec![self.oc.zero(); self.prec],
        }
    }

    pub fn one(&self) -> TeichSeries {
        self.teich(&self.oc.one())
    }

    /// `[c]`.
    pub fn teich(&self, c: &MonoElt) -> TeichSeries {
        let mut s = self.zero();
        s.coeffs[0] = c.clone();
        s
    }

    pub fn pi_power(&self, k: usize) -> TeichSeries {
        let mut s = self.zero();
        if k < self.prec {
            s.coeffs[k] = self.oc.one();
        }
        s
    }

    /// Pads with zeros or truncates to `N`.
    pub fn series(&self, mut coeffs: Vec<MonoElt>) -> TeichSeries {
        coeffs.resize(self.prec, self.oc.zero());
        TeichSeries { coeffs }
    }

    fn check(&self, a: &TeichSeries) -> Result<()> {
        if a.prec() != self.prec {
            return Err(Error::PrecisionMismatch(a.prec() as u32, self.prec as u32));
        }
        Ok(())
    }

    pub fn add(&self, a: &TeichSeries, b: &TeichSeries) -> Result<TeichSeries> {
        self.check(a)?;
        self.check(b)?;
        Ok(TeichSeries {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.oc.add(x, y))
                .collect(),
        })
    }

    pub fn sub(&self, a: &TeichSeries, b: &TeichSeries) -> Result<TeichSeries> {
        self.check(a)?;
        self.check(b)?;
        Ok(TeichSeries {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.oc.sub(x, y))
                .collect(),
        })
    }

    /// Cauchy product truncated at `pi^N`.
    pub fn series_mul(&self, a: &TeichSeries, b: &TeichSeries) -> Result<TeichSeries> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs[..self.prec - i].iter().enumerate() {
                out.coeffs[i + j] = self.oc.add(&out.coeffs[i + j], &self.oc.mul(x, y));
            }
        }
        Ok(out)
    }

    /// Degree (least index of a unit coefficient) when `a_0 != 0` and some
    /// coefficient is a unit.
    pub fn is_primitive(&self, a: &TeichSeries) -> Option<usize> {
        if a.coeffs.first().is_none_or(|c| c.is_zero()) {
            return None;
        }
        self.unit_index(a)
    }

    fn unit_index(&self, a: &TeichSeries) -> Option<usize> {
        a.coeffs.iter().position(|c| self.oc.is_unit(c))
    }

    /// `a_0 in m_C` and `a_1` a unit, i.e. `a = u (pi - [w])`.
    pub fn is_distinguished_deg1(&self, a: &TeichSeries) -> bool {
        a.prec() >= 2 && self.oc.in_max_ideal(&a.coeffs[0]) && self.oc.is_unit(&a.coeffs[1])
    }

    pub fn in_crystalline_ideal(&self, a: &TeichSeries) -> bool {
        a.coeffs.iter().all(|c| self.oc.in_max_ideal(c))
    }

    /// `a = unit * poly` with `poly` monic of degree `d`, `d` the least index
    /// of a unit coefficient, and lower coefficients in `m_C`.
    ///
    /// Accepts `a_0 = 0` as well (e.g. `a = pi`); only a unit coefficient
    /// below `N` is required.
    pub fn weierstrass_prep(&self, a: &TeichSeries) -> Result<WeierstrassFactorization> {
        self.check(a)?;
        let d = self.unit_index(a).ok_or(Error::NotPrimitive)?;
        let oc = &self.oc;
        let mut p: Vec<MonoElt> = a.coeffs[..d].to_vec();
        p.push(oc.one());
        for rounds in 1..=MAX_ROUNDS {
            let (q, r) = self.divrem_monic(&a.coeffs, &p);
            if r.iter().all(|c| c.is_zero()) {
                return Ok(WeierstrassFactorization {
                    unit: self.series(q),
                    poly: PiPoly { coeffs: p },
                    iterations: rounds,
                });
            }
            let qm = self.rem_monic(&q, &p);
            let s = self.inverse_mod_monic(&qm, &p)?;
            let delta = self.rem_monic(&self.poly_mul(&r, &s), &p);
            for (pi, di) in p.iter_mut().zip(&delta) {
                *pi = oc.add(pi, di);
                oc.check_support(pi)?;
            }
        }
        Err(Error::NoConvergence(MAX_ROUNDS))
    }

    fn poly_mul(&self, a: &[MonoElt], b: &[MonoElt]) -> Vec<MonoElt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.oc.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.oc.add(&out[i + j], &self.oc.mul(x, y));
            }
        }
        out
    }

    /// Long division by a monic polynomial.
    fn divrem_monic(&self, a: &[MonoElt], p: &[MonoElt]) -> (Vec<MonoElt>, Vec<MonoElt>) {
        let d = p.len() - 1;
        let mut rem = a.to_vec();
        if rem.len() <= d {
            rem.resize(d, self.oc.zero());
            return (Vec::new(), rem);
        }
        let mut q = vec![self.oc.zero(); rem.len() - d];
        for k in (0..q.len()).rev() {
            let c = rem[k + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate() {
                rem[k + j] = self.oc.sub(&rem[k + j], &self.oc.mul(&c, pj));
            }
            q[k] = c;
        }
        rem.truncate(d);
        (q, rem)
    }

    fn rem_monic(&self, a: &[MonoElt], p: &[MonoElt]) -> Vec<MonoElt> {
        self.divrem_monic(a, p).1
    }

    /// Inverse of `u` in `O_C[pi] / (P)`, for `u(0)` a unit.
    fn inverse_mod_monic(&self, u: &[MonoElt], p: &[MonoElt]) -> Result<Vec<MonoElt>> {
        let d = p.len() - 1;
        let mut one = vec![self.oc.zero(); d];
        if d == 0 {
            return Ok(one);
        }
        one[0] = self.oc.one();
        let mut s = vec![self.oc.zero(); d];
        s[0] = self.oc.inverse(&u[0])?;
        for _ in 0..MAX_ROUNDS {
            let us = self.rem_monic(&self.poly_mul(u, &s), p);
            if us == one {
                return Ok(s);
            }
            let two_minus: Vec<MonoElt> = one
                .iter()
                .zip(&us)
                .map(|(o, x)| self.oc.sub(&self.oc.add(o, o), x))
                .collect();
            s = self.rem_monic(&self.poly_mul(&s, &two_minus), p);
        }
        Err(Error::NoConvergence(MAX_ROUNDS))
    }

    pub fn poly_product(&self, a: &PiPoly, b: &PiPoly) -> PiPoly {
        PiPoly {
            coeffs: self.poly_mul(&a.coeffs, &b.coeffs),
        }
    }

    /// `pi - [w]`.
    pub fn linear(&self, w: &MonoElt) -> PiPoly {
        PiPoly {
            coeffs: vec![self.oc.neg(w), self.oc.one()],
        }
    }

    fn check_monic(&self, p: &PiPoly) -> Result<()> {
        match p.coeffs.last() {
            Some(c) if *c == self.oc.one() => Ok(()),
            _ => Err(Error::NotMonic),
        }
    }

    pub fn newton_polygon(&self, p: &PiPoly) -> Result<NewtonPolygon> {
        self.check_monic(p)?;
        let oc = &self.oc;
        let pi_power = p.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let pts: Vec<(i64, Rational64)> = p.coeffs[pi_power..]
            .iter()
            .enumerate()
            .filter_map(|(i, c)| oc.valuation(c).map(|v| (i as i64, v)))
            .collect();
        // Lower convex hull, left to right.
        let mut hull: Vec<(i64, Rational64)> = Vec::new();
        for &pt in &pts {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.1 - a.1) * Rational64::from_integer(pt.0 - a.0)
                    - (pt.1 - a.1) * Rational64::from_integer(b.0 - a.0);
                if cross >= Rational64::from_integer(0) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let mut segments: Vec<Segment> = hull
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                Segment {
                    slope: (w[0].1 - w[1].1) / Rational64::from_integer(len),
                    length: len as usize,
                }
            })
            .collect();
        segments.reverse();
        Ok(NewtonPolygon { pi_power, segments })
    }

    fn eval(&self, p: &[MonoElt], x: &MonoElt) -> MonoElt {
        p.iter().rev().fold(self.oc.zero(), |acc, c| {
            self.oc.add(&self.oc.mul(&acc, x), c)
        })
    }

    fn derivative(&self, p: &[MonoElt]) -> Vec<MonoElt> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.oc.scale(c, self.oc.field().from_int(i as i64)))
            .collect()
    }

    /// Newton root iteration from `w0`; `None` when the Hensel step is not
    /// available (vanishing derivative, valuation drop) or does not settle.
    fn newton_root(&self, p: &[MonoElt], w0: MonoElt) -> Result<Option<MonoElt>> {
        let oc = &self.oc;
        let dp = self.derivative(p);
        if self.eval(&dp, &w0).is_zero() {
            return Ok(None);
        }
        let lead = oc.valuation(&w0);
        let mut w = w0;
        for _ in 0..MAX_ROUNDS {
            let val = self.eval(p, &w);
            if val.is_zero() {
                return Ok(Some(w));
            }
            let der = self.eval(&dp, &w);
            let Some(step) = oc.div_lossy(&val, &der) else {
                return Ok(None);
            };
            w = oc.sub(&w, &step);
            oc.check_support(&w)?;
            if oc.valuation(&w) != lead {
                return Ok(None);
            }
        }
        Ok(None)
    }

    /// `P / (pi - [w])` for `P(w) = 0`.
    fn deflate(&self, p: &[MonoElt], w: &MonoElt) -> Vec<MonoElt> {
        let d = p.len() - 1;
        let mut out = vec![self.oc.zero(); d];
        let mut acc = self.oc.zero();
        for i in (1..=d).rev() {
            acc = self.oc.add(&p[i], &self.oc.mul(&acc, w));
            out[i - 1] = acc.clone();
        }
        out
    }

    /// Residual polynomial of a segment ending at index `i0 + length`:
    /// coefficient `j` is the `F_q`-coefficient of `t^(v_{i0} - j * slope)`
    /// in `c_{i0 + j}`.
    fn residual(&self, p: &[MonoElt], i0: usize, v0: Rational64, seg: &Segment) -> Vec<u32> {
        let oc = &self.oc;
        (0..=seg.length)
            .map(|j| {
                let e = v0 - seg.slope * Rational64::from_integer(j as i64);
                match oc.grid_index(e) {
                    Ok(k) if k < oc.cap => p[i0 + j].c[k],
                    _ => 0,
                }
            })
            .collect()
    }

    /// Splits off linear factors `pi - [w]` whose roots Newton iteration can
    /// reach. Whatever is left is returned as `remainder`.
    pub fn factor_linear(&self, p: &PiPoly) -> Result<LinearFactorization> {
        self.check_monic(p)?;
        let oc = &self.oc;
        let d = p.degree();
        if p.coeffs[..d].iter().any(|c| !oc.in_max_ideal(c)) {
            return Err(Error::NotMonic);
        }
        let gf = oc.field();
        let pi_power = p.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(d);
        let mut rem: Vec<MonoElt> = p.coeffs[pi_power..].to_vec();
        let mut roots: Vec<(MonoElt, usize)> = Vec::new();
        'outer: while rem.len() > 1 {
            let poly = self.newton_polygon(&PiPoly {
                coeffs: rem.clone(),
            })?;
            // Segment start indices, right to left since slopes ascend.
            let mut end = rem.len() - 1;
            for seg in &poly.segments {
                let i0 = end - seg.length;
                end = i0;
                let Some(v0) = oc.valuation(&rem[i0]) else {
                    continue;
                };
                if oc.grid_index(seg.slope).is_err() {
                    continue;
                }
                let res = self.residual(&rem, i0, v0, seg);
                let dres: Vec<u32> = res
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, &c)| gf.mul(c, gf.from_int(j as i64)))
                    .collect();
                let ev = |poly: &[u32], x: u32| {
                    poly.iter()
                        .rev()
                        .fold(0, |acc, &c| gf.add(gf.mul(acc, x), c))
                };
                for x in 1..gf.order() {
                    if ev(&res, x) != 0 || ev(&dres, x) == 0 {
                        continue;
                    }
                    let w0 = oc.monomial(x, seg.slope)?;
                    if let Some(w) = self.newton_root(&rem, w0)? {
                        rem = self.deflate(&rem, &w);
                        match roots.iter_mut().find(|(r, _)| *r == w) {
                            Some((_, m)) => *m += 1,
                            None => roots.push((w, 1)),
                        }
                        continue 'outer;
                    }
                }
            }
            break;
        }
        let complete = rem.len() == 1;
        Ok(LinearFactorization {
            pi_power,
            roots,
            remainder: PiPoly { coeffs: rem },
            complete,
        })
    }

    /// `pi^pi_power * prod (pi - [w])^m * remainder`.
    pub fn reconstruct(&self, f: &LinearFactorization) -> PiPoly {
        let mut out = f.remainder.clone();
        for (w, m) in &f.roots {
            for _ in 0..*m {
                out = self.poly_product(&out, &self.linear(w));
            }
        }
        let mut coeffs = vec![self.oc.zero(); f.pi_power];
        coeffs.extend(out.coeffs);
        PiPoly { coeffs }
    }
}

/// Valuation of a nonzero element, the invariant of its class in
/// `C^x / O_C^x`.
pub fn coset_invariant(oc: &OcModel, c: &MonoElt) -> Result<Rational64> {
    oc.valuation(c).ok_or(Error::ZeroInput)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn setup(q: u32, maxden: u32) -> AeRing {
        AeRing::new(OcModel::new(q, maxden, DEFAULT_VPREC).unwrap(), 6).unwrap()
    }

    fn t(a: &AeRing, e: i64) -> MonoElt {
        a.oc.monomial(1, r(e, 1)).unwrap()
    }

    #[test]
    fn oc_inverse() {
        let a = setup(9, 9);
        let oc = &a.oc;
        let u = oc.add(&oc.one(), &t(&a, 1));
        let v = oc.inverse(&u).unwrap();
        assert_eq!(oc.mul(&u, &v), oc.one());
        assert!(oc.inverse(&t(&a, 1)).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let a = setup(9, 9);
        let oc = &a.oc;
        let x = a.series(vec![oc.neg(&t(&a, 1)), oc.one()]);
        assert_eq!(a.series_mul(&x, &a.one()).unwrap(), x);
        let y = a.series(vec![oc.neg(&t(&a, 2)), oc.one()]);
        let prod = a.series_mul(&x, &y).unwrap();
        let expect = a.series(vec![
            t(&a, 3),
            oc.neg(&oc.add(&t(&a, 1), &t(&a, 2))),
            oc.one(),
        ]);
        assert_eq!(prod, expect);
        assert_eq!(
            a.series_mul(&a.pi_power(5), &a.pi_power(1)).unwrap(),
            a.zero()
        );
    }

    #[test]
    fn detectors() {
        let a = setup(9, 9);
        let oc = &a.oc;
        let xi = a.series(vec![oc.neg(&t(&a, 1)), oc.one()]);
        assert_eq!(a.is_primitive(&xi), Some(1));
        assert!(a.is_distinguished_deg1(&xi));
        let cris = a.series(vec![t(&a, 1), t(&a, 1)]);
        assert_eq!(a.is_primitive(&cris), None);
        assert!(a.in_crystalline_ideal(&cris));
        assert_eq!(a.is_primitive(&a.pi_power(1)), None);
        assert!(!a.in_crystalline_ideal(&a.pi_power(1)));
        assert!(a.in_crystalline_ideal(&a.zero()));
        let deg2 = a.series(vec![oc.zero(), oc.neg(&t(&a, 1)), oc.one()]);
        assert!(!a.is_distinguished_deg1(&deg2));
        let one_plus_pi = a.series(vec![oc.one(), oc.one()]);
        assert!(!a.is_distinguished_deg1(&one_plus_pi));
    }

    #[test]
    fn weierstrass_examples() {
        let a = setup(9, 9);
        let oc = &a.oc;
        let w = a.weierstrass_prep(&a.pi_power(1)).unwrap();
        assert_eq!(w.unit, a.one());
        assert_eq!(
            w.poly,
            PiPoly {
                coeffs: vec![oc.zero(), oc.one()]
            }
        );

        let xi = a.series(vec![oc.neg(&t(&a, 1)), oc.one()]);
        let u = a.series(vec![oc.one(), oc.one()]);
        let input = a.series_mul(&u, &xi).unwrap();
        let w = a.weierstrass_prep(&input).unwrap();
        assert_eq!(w.poly, a.linear(&t(&a, 1)));
        assert_eq!(w.unit, u);

        let prepared = a.series(vec![oc.neg(&t(&a, 3)), oc.zero(), oc.one()]);
        let w = a.weierstrass_prep(&prepared).unwrap();
        assert_eq!(w.unit, a.one());
        assert_eq!(w.poly.coeffs, prepared.coeffs[..3].to_vec());

        let cris = a.series(vec![t(&a, 1)]);
        assert_eq!(a.weierstrass_prep(&cris), Err(Error::NotPrimitive));
    }

    #[test]
    fn weierstrass_with_unit_tail() {
        let a = setup(9, 9);
        let oc = &a.oc;
        // (1 + [t] pi + pi^3) * (pi^2 + [t^(1/3)] pi + [t^2])
        let u = a.series(vec![oc.one(), t(&a, 1), oc.zero(), oc.one()]);
        let p = PiPoly {
            coeffs: vec![t(&a, 2), oc.monomial(1, r(1, 3)).unwrap(), oc.one()],
        };
        let input = a.series_mul(&u, &a.series(p.coeffs.clone())).unwrap();
        let w = a.weierstrass_prep(&input).unwrap();
        let back = a
            .series_mul(&w.unit, &a.series(w.poly.coeffs.clone()))
            .unwrap();
        assert_eq!(back, input);
        assert_eq!(w.poly.degree(), 2);
    }

    #[test]
    fn newton_polygons() {
        let a = setup(9, 9);
        let oc = &a.oc;
        let np = a.newton_polygon(&a.linear(&t(&a, 1))).unwrap();
        assert_eq!(
            np.segments,
            vec![Segment {
                slope: r(1, 1),
                length: 1
            }]
        );
        let p = PiPoly {
            coeffs: vec![t(&a, 3), oc.neg(&oc.add(&t(&a, 1), &t(&a, 2))), oc.one()],
        };
        let np = a.newton_polygon(&p).unwrap();
        assert_eq!(
            np.segments,
            vec![
                Segment {
                    slope: r(1, 1),
                    length: 1
                },
                Segment {
                    slope: r(2, 1),
                    length: 1
                }
            ]
        );
        let p = PiPoly {
            coeffs: vec![oc.zero(), oc.neg(&t(&a, 2)), oc.one()],
        };
        let np = a.newton_polygon(&p).unwrap();
        assert_eq!(np.pi_power, 1);
        assert_eq!(
            np.segments,
            vec![Segment {
                slope: r(2, 1),
                length: 1
            }]
        );
    }

    #[test]
    fn factorization_examples() {
        let a = setup(9, 9);
        let oc = &a.oc;
        let f = a.factor_linear(&a.linear(&t(&a, 1))).unwrap();
        assert!(f.complete);
        assert_eq!(f.roots, vec![(t(&a, 1), 1)]);

        let p = PiPoly {
            coeffs: vec![t(&a, 3), oc.neg(&oc.add(&t(&a, 1), &t(&a, 2))), oc.one()],
        };
        let f = a.factor_linear(&p).unwrap();
        assert!(f.complete);
        let mut found: Vec<MonoElt> = f.roots.iter().map(|(w, _)| w.clone()).collect();
        found.sort_by_key(|w| oc.valuation(w));
        assert_eq!(found, vec![t(&a, 1), t(&a, 2)]);
        assert_eq!(a.reconstruct(&f), p);
    }

    #[test]
    fn inseparable_case_is_partial() {
        let a = AeRing::new(OcModel::new(2, 2, DEFAULT_VPREC).unwrap(), 6).unwrap();
        let oc = &a.oc;
        let p = PiPoly {
            coeffs: vec![oc.neg(&t(&a, 1)), oc.zero(), oc.one()],
        };
        let f = a.factor_linear(&p).unwrap();
        assert!(!f.complete);
        assert!(f.roots.is_empty());
        assert_eq!(f.remainder, p);
        // The root t^(1/2) does exist in the model.
        let half = oc.monomial(1, r(1, 2)).unwrap();
        assert!(a.eval(&p.coeffs, &half).is_zero());
    }

    #[test]
    fn coset_invariants() {
        let a = setup(9, 9);
        let oc = &a.oc;
        assert_eq!(
            coset_invariant(oc, &oc.add(&oc.one(), &t(&a, 1))).unwrap(),
            r(0, 1)
        );
        let a2 = setup(4, 2);
        let x = a2.oc.monomial(1, r(3, 2)).unwrap();
        assert_eq!(coset_invariant(&a2.oc, &x).unwrap(), r(3, 2));
        let y = oc.mul(&t(&a, 2), &oc.add(&oc.one(), &t(&a, 1)));
        assert_eq!(coset_invariant(oc, &y).unwrap(), r(2, 1));
        assert_eq!(coset_invariant(oc, &oc.zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn model_validation() {
        assert!(OcModel::new(9, 6, 8).is_err());
        assert!(OcModel::new(9, 27, 8).is_ok());
        let oc = OcModel::new(9, 3, 8).unwrap();
        assert!(oc.monomial(1, r(1, 2)).is_err());
        assert!(oc.monomial(9, r(1, 1)).is_err());
        assert!(oc.monomial(1, r(9, 1)).unwrap().is_zero());
    }
}
