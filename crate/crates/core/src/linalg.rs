//! Square matrices over the extension `R[Pi]`.
//!
//! `R[Pi]` is local with maximal ideal `(Pi)`, so a matrix is invertible iff
//! every elimination step finds a unit pivot; Gauss-Jordan with unit pivots
//! is therefore both the invertibility test and the inverse.

use crate::error::{Error, Result};
use crate::form::HVector;
use crate::ring::{QElt, RingSpec};

/// Row-major; `m[i][j]` is coordinate `i` of the image of `e_j`.
pub type QMatrix = Vec<Vec<QElt>>;

pub fn identity(ring: &RingSpec, n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        QElt::one(ring)
                    } else {
                        QElt::zero(ring)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn from_columns(cols: &[HVector]) -> QMatrix {
    let n = cols.len();
    (0..n)
        .map(|i| cols.iter().map(|c| c.0[i].clone()).collect())
        .collect()
}

pub fn column(m: &QMatrix, j: usize) -> HVector {
    HVector(m.iter().map(|row| row[j].clone()).collect())
}

pub fn mul(a: &QMatrix, b: &QMatrix, ring: &RingSpec) -> QMatrix {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..k)
                .map(|j| {
                    a[i].iter()
                        .zip(b)
                        .fold(QElt::zero(ring), |acc, (x, row)| acc + x * &row[j])
                })
                .collect()
        })
        .collect()
}

pub fn apply(m: &QMatrix, v: &HVector, ring: &RingSpec) -> HVector {
    HVector(
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(&v.0)
                    .fold(QElt::zero(ring), |acc, (x, y)| acc + x * y)
            })
            .collect(),
    )
}

pub fn inverse(m: &QMatrix, ring: &RingSpec) -> Result<QMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(ring, n);
    for k in 0..n {
        let piv = (k..n).find(|&i| a[i][k].is_unit()).ok_or(Error::Singular)?;
        a.swap(k, piv);
        inv.swap(k, piv);
        let c = a[k][k].inverse()?;
        for j in 0..n {
            a[k][j] = &a[k][j] * &c;
            inv[k][j] = &inv[k][j] * &c;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                a[i][j] = &a[i][j] - &f * &a[k][j];
                inv[i][j] = &inv[i][j] - &f * &inv[k][j];
            }
        }
    }
    Ok(inv)
}

pub fn is_invertible(m: &QMatrix, ring: &RingSpec) -> bool {
    inverse(m, ring).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let r = RingSpec::preset("q2i", None).unwrap();
        let q = |a, b| QElt::new(r.int(a), r.int(b)).unwrap();
        let m = vec![vec![q(1, 1), q(2, 3)], vec![q(0, 1), q(3, 0)]];
        let inv = inverse(&m, &r).unwrap();
        assert_eq!(mul(&m, &inv, &r), identity(&r, 2));
        assert_eq!(mul(&inv, &m, &r), identity(&r, 2));
        let sing = vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(4, 0)]];
        assert_eq!(inverse(&sing, &r), Err(Error::Singular));
    }
}
