//! Small finite fields `F_q`, `q = p^k <= 256`, via log/exp tables.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of an integer
//! are the coefficients (constant term first) of a polynomial in `x`, taken
//! modulo the lexicographically first primitive polynomial of degree `k` over
//! `F_p`. For `k = 1` this is just `Z/p` with its usual representatives.

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 256;

#[derive(Clone, Debug)]
pub struct Gf {
    p: u32,
    k: u32,
    q: u32,
    /// `exp[i] = g^i` for `0 <= i < q - 1`.
    exp: Vec<u16>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Gf {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut m, mut k) = (q, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

impl Gf {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64)
            .ok_or_else(|| Error::InvalidRing(format!("{q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(Error::InvalidRing(format!(
                "field order {q} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        let p = p as u32;
        let digits = |mut a: u32| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);

        let mut add = vec![0u16; (q * q) as usize];
        let mut neg = vec![0u16; q as usize];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = encode(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>()) as u16;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s) as u16;
            }
        }

        // Multiplication by x modulo a monic f (lower coefficients `low`).
        let times_x = |a: u32, low: &[u32]| -> u32 {
            let mut d = digits(a);
            let top = d[k as usize - 1];
            d.rotate_right(1);
            d[0] = 0;
            for (c, l) in d.iter_mut().zip(low) {
                *c = (*c + p - (top * l) % p) % p;
            }
            encode(&d)
        };

        let order = q - 1;
        for cand in 0..q {
            let low = digits(cand);
            if low[0] == 0 && !(k == 1 && q == 2) {
                // x | f, never irreducible (except the degenerate F_2, k = 1 case).
                continue;
            }
            // For k = 1 the "generator" is the residue of x modulo x - c, i.e. c.
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                exp.push(cur as u16);
                cur = if k == 1 {
                    // x = -low[0] in F_p
                    (cur * ((p - low[0]) % p)) % p
                } else {
                    times_x(cur, &low)
                };
            }
            if !ok || cur != 1 {
                continue;
            }
            let mut log = vec![0u16; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u16;
            }
            return Ok(Gf {
                p,
                k,
                q,
                exp,
                log,
                add,
                neg,
            });
        }
        Err(Error::InvalidRing(format!(
            "no primitive polynomial found for q = {q}"
        )))
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u32 + self.log[b as usize] as u32;
        self.exp[(s % (self.q - 1)) as usize] as u32
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize] as u32;
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize] as u32)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_matches_modular_arithmetic() {
        let f = Gf::new(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn f9_is_a_field() {
        let f = Gf::new(9).unwrap();
        assert_eq!((f.characteristic(), f.degree()), (3, 2));
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn f2_and_f4() {
        let f2 = Gf::new(2).unwrap();
        assert_eq!(f2.mul(1, 1), 1);
        assert_eq!(f2.add(1, 1), 0);
        let f4 = Gf::new(4).unwrap();
        // every nonzero element satisfies a^3 = 1
        for a in 1..4 {
            assert_eq!(f4.mul(a, f4.mul(a, a)), 1);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Gf::new(6).is_err());
        assert!(Gf::new(1).is_err());
        assert!(Gf::new(512).is_err());
    }
}
