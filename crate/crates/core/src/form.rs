//! Hermitian quadratic forms on free modules `(R[Pi])^n`, stored as the pair
//! of `R`-matrices `(A, B)` with
//!
//! * `A` symmetric, `A_ii = q(e_i)` and `A_ij = f(e_i, e_j)` for `i != j`,
//! * `B_ij = f(e_i, Pi e_j)`, subject to `B + B^T = t A~` and `B_ii = t A_ii`,
//!
//! where `A~` is `A` with doubled diagonal. The diagonal of `A` stores `q`,
//! never `f/2`, so nothing here divides by 2.
//!
//! The induced `R`-basis of the underlying rank-`2n` module is always ordered
//! `(e_1, .., e_n, Pi e_1, .., Pi e_n)`.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::ring::{QElt, RingSpec, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Coordinates of a vector in the `e`-basis over the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector(pub Vec<QElt>);

impl HVector {
    pub fn zero(ring: &RingSpec, n: usize) -> Self {
        HVector(vec![QElt::zero(ring); n])
    }

    pub fn basis(ring: &RingSpec, n: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, n);
        v.0[i] = QElt::one(ring);
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x * self` for a scalar `x` of the extension.
    pub fn scale(&self, x: &QElt) -> HVector {
        HVector(self.0.iter().map(|c| x * c).collect())
    }

    pub fn scale_base(&self, c: &Scalar) -> HVector {
        HVector(self.0.iter().map(|x| x.scale(c)).collect())
    }

    /// Split `m = x + Pi y` into its two `R`-coordinate vectors.
    pub fn split(&self) -> (Vec<Scalar>, Vec<Scalar>) {
        self.0.iter().map(|c| (c.a.clone(), c.b.clone())).unzip()
    }

    pub fn change_precision(&self, target: &RingSpec) -> Result<HVector> {
        self.0
            .iter()
            .map(|c| c.change_precision(target))
            .collect::<Result<_>>()
            .map(HVector)
    }
}

impl Add<&HVector> for &HVector {
    type Output = HVector;
    fn add(self, rhs: &HVector) -> HVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        HVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&HVector> for &HVector {
    type Output = HVector;
    fn sub(self, rhs: &HVector) -> HVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        HVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermForm {
    ring: RingSpec,
    n: usize,
    a: Matrix,
    b: Matrix,
}

impl HermForm {
    /// Validates `(A, B)` against the three defining constraints.
    pub fn from_matrices(ring: &RingSpec, a: Matrix, b: Matrix) -> Result<Self> {
        let n = a.len();
        for m in [&a, &b] {
            if m.len() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    got: m.len(),
                });
            }
            for row in m.iter() {
                if row.len() != n {
                    return Err(Error::RankMismatch {
                        expected: n,
                        got: row.len(),
                    });
                }
                if row.iter().any(|s| s.ring() != ring) {
                    return Err(Error::RingMismatch);
                }
            }
        }
        let t = ring.t();
        for i in 0..n {
            for j in 0..n {
                if a[i][j] != a[j][i] {
                    return Err(Error::ConstraintViolation {
                        constraint: "A symmetric",
                        i,
                        j,
                    });
                }
            }
        }
        for i in 0..n {
            if b[i][i] != &t * &a[i][i] {
                return Err(Error::ConstraintViolation {
                    constraint: "B_ii = t*A_ii",
                    i,
                    j: i,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && &b[i][j] + &b[j][i] != &t * &a[i][j] {
                    return Err(Error::ConstraintViolation {
                        constraint: "B + B^T = t*A~",
                        i,
                        j,
                    });
                }
            }
        }
        Ok(HermForm {
            ring: ring.clone(),
            n,
            a,
            b,
        })
    }

    /// Builds the unique valid form with the given `A_ij` (`i <= j`) and
    /// `B_ij` (`i < j`); the remaining entries are read off the constraints
    /// and whatever the caller put there is ignored.
    pub fn from_free_entries(ring: &RingSpec, a: &Matrix, b: &Matrix) -> Result<Self> {
        let n = a.len();
        let t = ring.t();
        let mut a2 = vec![vec![ring.zero(); n]; n];
        let mut b2 = vec![vec![ring.zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                a2[i][j] = a[i][j].clone();
                a2[j][i] = a[i][j].clone();
            }
        }
        for i in 0..n {
            b2[i][i] = &t * &a2[i][i];
            for j in i + 1..n {
                b2[i][j] = b[i][j].clone();
                b2[j][i] = &t * &a2[i][j] - &b[i][j];
            }
        }
        Self::from_matrices(ring, a2, b2)
    }

    pub fn zero(ring: &RingSpec, n: usize) -> Self {
        HermForm {
            ring: ring.clone(),
            n,
            a: vec![vec![ring.zero(); n]; n],
            b: vec![vec![ring.zero(); n]; n],
        }
    }

    /// Rank one form `q(x e_1) = u N(x)`.
    pub fn scaled_norm_form(u: &Scalar) -> Self {
        let ring = u.ring().clone();
        HermForm {
            n: 1,
            a: vec![vec![u.clone()]],
            b: vec![vec![ring.t() * u]],
            ring,
        }
    }

    /// `M_std,2`: `q(e_1) = q(e_2) = 0`, `f(e_1, e_2) = 0`, `f(e_1, Pi e_2) = 1`.
    pub fn hyperbolic_plane(ring: &RingSpec) -> Self {
        HermForm {
            ring: ring.clone(),
            n: 2,
            a: vec![vec![ring.zero(); 2]; 2],
            b: vec![
                vec![ring.zero(), ring.one()],
                vec![-ring.one(), ring.zero()],
            ],
        }
    }

    /// `M_std,n`: `n/2` hyperbolic planes, plus the norm form when `n` is odd.
    pub fn standard(ring: &RingSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("standard form needs rank >= 1".into()));
        }
        let mut out = HermForm::zero(ring, 0);
        for _ in 0..n / 2 {
            out = out.orthogonal_sum(&HermForm::hyperbolic_plane(ring))?;
        }
        if n % 2 == 1 {
            out = out.orthogonal_sum(&HermForm::scaled_norm_form(&ring.one()))?;
        }
        Ok(out)
    }

    pub fn orthogonal_sum(&self, other: &HermForm) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let n = self.n + other.n;
        let block = |x: &Matrix, y: &Matrix| -> Matrix {
            let mut m = vec![vec![self.ring.zero(); n]; n];
            for i in 0..self.n {
                for j in 0..self.n {
                    m[i][j] = x[i][j].clone();
                }
            }
            for i in 0..other.n {
                for j in 0..other.n {
                    m[self.n + i][self.n + j] = y[i][j].clone();
                }
            }
            m
        };
        Ok(HermForm {
            ring: self.ring.clone(),
            n,
            a: block(&self.a, &other.a),
            b: block(&self.b, &other.b),
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// `A~`: `A` with doubled diagonal, i.e. the matrix of `f` on the `e_i`.
    pub fn a_tilde(&self) -> Matrix {
        let mut m = self.a.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = &row[i] + &row[i];
        }
        m
    }

    fn check_vec(&self, m: &HVector) -> Result<()> {
        if m.len() != self.n {
            return Err(Error::RankMismatch {
                expected: self.n,
                got: m.len(),
            });
        }
        if m.0.iter().any(|c| c.ring() != &self.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// `q(m) = sum_{i<=j} A_ij (x_i x_j + pi y_i y_j) + sum_{i,j} B_ij x_i y_j`
    /// for `m = x + Pi y`.
    pub fn eval_q(&self, m: &HVector) -> Result<Scalar> {
        self.check_vec(m)?;
        let (x, y) = m.split();
        let pi = self.ring.pi();
        let mut acc = self.ring.zero();
        for i in 0..self.n {
            for j in i..self.n {
                let aij = &self.a[i][j];
                if !aij.is_zero() {
                    acc = acc + aij * (&x[i] * &x[j] + &pi * &y[i] * &y[j]);
                }
            }
            for j in 0..self.n {
                let bij = &self.b[i][j];
                if !bij.is_zero() {
                    acc = acc + bij * &x[i] * &y[j];
                }
            }
        }
        Ok(acc)
    }

    /// The associated symmetric bilinear form, evaluated directly from `(A, B)`.
    pub fn bilinear_f(&self, m: &HVector, w: &HVector) -> Result<Scalar> {
        self.check_vec(m)?;
        self.check_vec(w)?;
        let (x, y) = m.split();
        let (x2, y2) = w.split();
        let pi = self.ring.pi();
        let mut acc = self.ring.zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let at = if i == j {
                    &self.a[i][i] + &self.a[i][i]
                } else {
                    self.a[i][j].clone()
                };
                if !at.is_zero() {
                    acc = acc + at * (&x[i] * &x2[j] + &pi * &y[i] * &y2[j]);
                }
                let bij = &self.b[i][j];
                if !bij.is_zero() {
                    acc = acc + bij * (&x[i] * &y2[j] + &x2[i] * &y[j]);
                }
            }
        }
        Ok(acc)
    }

    /// Matrix of `f` in the `R`-basis `(e_1..e_n, Pi e_1..Pi e_n)`:
    /// `[[A~, B], [t A~ - B, pi A~]]`.
    pub fn gram_matrix(&self) -> Matrix {
        let n = self.n;
        let at = self.a_tilde();
        let t = self.ring.t();
        let pi = self.ring.pi();
        let mut g = vec![vec![self.ring.zero(); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = at[i][j].clone();
                g[i][n + j] = self.b[i][j].clone();
                g[n + i][j] = &t * &at[i][j] - &self.b[i][j];
                g[n + i][n + j] = &pi * &at[i][j];
            }
        }
        g
    }

    /// The form `m -> q(sum m_i v_i)` in the new basis `v`.
    pub fn pullback(&self, basis: &[HVector]) -> Result<HermForm> {
        let k = basis.len();
        let pi_elt = QElt::uniformizer(&self.ring);
        let mut a = vec![vec![self.ring.zero(); k]; k];
        let mut b = vec![vec![self.ring.zero(); k]; k];
        let pi_basis: Vec<HVector> = basis.iter().map(|v| v.scale(&pi_elt)).collect();
        for i in 0..k {
            a[i][i] = self.eval_q(&basis[i])?;
            for j in 0..k {
                if i != j {
                    a[i][j] = self.bilinear_f(&basis[i], &basis[j])?;
                }
                b[i][j] = self.bilinear_f(&basis[i], &pi_basis[j])?;
            }
        }
        HermForm::from_matrices(&self.ring, a, b)
    }

    /// `u * q`.
    pub fn scale(&self, u: &Scalar) -> HermForm {
        let sc = |m: &Matrix| -> Matrix {
            m.iter()
                .map(|r| r.iter().map(|x| x * u).collect())
                .collect()
        };
        HermForm {
            ring: self.ring.clone(),
            n: self.n,
            a: sc(&self.a),
            b: sc(&self.b),
        }
    }

    pub fn change_precision(&self, target: &RingSpec) -> Result<HermForm> {
        let cp = |m: &Matrix| -> Result<Matrix> {
            m.iter()
                .map(|r| r.iter().map(|x| x.change_precision(target)).collect())
                .collect()
        };
        HermForm::from_matrices(target, cp(&self.a)?, cp(&self.b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn v(r: &RingSpec, coords: &[(i64, i64)]) -> HVector {
        HVector(
            coords
                .iter()
                .map(|&(a, b)| QElt::new(r.int(a), r.int(b)).unwrap())
                .collect(),
        )
    }

    #[test]
    fn constructors_validate() {
        let r = RingSpec::preset("q2i", None).unwrap();
        assert!(HermForm::from_matrices(&r, vec![vec![r.zero()]], vec![vec![r.zero()]]).is_ok());
        assert!(HermForm::from_matrices(&r, vec![vec![r.one()]], vec![vec![r.t()]]).is_ok());
        let std2 = HermForm::from_matrices(
            &r,
            vec![vec![r.zero(); 2]; 2],
            vec![vec![r.zero(), r.one()], vec![r.int(-1), r.zero()]],
        )
        .unwrap();
        assert_eq!(std2, HermForm::standard(&r, 2).unwrap());

        let err = HermForm::from_matrices(&r, vec![vec![r.one()]], vec![vec![r.zero()]]);
        assert!(matches!(
            err,
            Err(Error::ConstraintViolation {
                constraint: "B_ii = t*A_ii",
                ..
            })
        ));
        let err = HermForm::from_matrices(
            &r,
            vec![vec![r.zero(); 2]; 2],
            vec![vec![r.zero(), r.one()], vec![r.one(), r.zero()]],
        );
        assert!(matches!(
            err,
            Err(Error::ConstraintViolation {
                constraint: "B + B^T = t*A~",
                i: 0,
                j: 1
            })
        ));
        let err = HermForm::from_matrices(
            &r,
            vec![vec![r.zero(), r.one()], vec![r.zero(), r.zero()]],
            vec![vec![r.zero(); 2]; 2],
        );
        assert!(matches!(
            err,
            Err(Error::ConstraintViolation {
                constraint: "A symmetric",
                ..
            })
        ));
    }

    #[test]
    fn evaluation_examples() {
        let r = RingSpec::preset("q2i", None).unwrap();
        let std2 = HermForm::standard(&r, 2).unwrap();
        assert!(std2.eval_q(&v(&r, &[(1, 0), (0, 0)])).unwrap().is_zero());
        assert!(std2.eval_q(&v(&r, &[(1, 0), (0, 1)])).unwrap().is_one());
        let norm = HermForm::standard(&r, 1).unwrap();
        assert_eq!(norm.eval_q(&v(&r, &[(0, 1)])).unwrap(), r.pi());
        assert!(std2.eval_q(&v(&r, &[(1, 0)])).is_err());
    }

    #[test]
    fn bilinear_examples() {
        let r = RingSpec::preset("q2sqrt2", None).unwrap();
        let std2 = HermForm::standard(&r, 2).unwrap();
        let e1 = v(&r, &[(1, 0), (0, 0)]);
        let pe1 = v(&r, &[(0, 1), (0, 0)]);
        let pe2 = v(&r, &[(0, 0), (0, 1)]);
        assert!(std2.bilinear_f(&e1, &pe2).unwrap().is_one());
        assert!(std2.bilinear_f(&pe1, &pe2).unwrap().is_zero());
        let m = v(&r, &[(3, 5), (7, 1)]);
        assert_eq!(
            std2.bilinear_f(&m, &m).unwrap(),
            r.int(2) * std2.eval_q(&m).unwrap()
        );
    }

    #[test]
    fn gram_examples() {
        let r = RingSpec::preset("q2i", None).unwrap();
        let g = HermForm::standard(&r, 2).unwrap().gram_matrix();
        let expect = [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g[i][j], r.int(expect[i][j]));
            }
        }
        let g1 = HermForm::standard(&r, 1).unwrap().gram_matrix();
        assert_eq!(
            g1,
            vec![vec![r.int(2), r.t()], vec![r.t(), r.int(2) * r.pi()]]
        );
        let z = HermForm::zero(&r, 3).gram_matrix();
        assert!(z.iter().flatten().all(Scalar::is_zero));
    }

    #[test]
    fn standard_and_sums() {
        let r = RingSpec::preset("qp-sqrt-p:3", None).unwrap();
        let s3 = HermForm::standard(&r, 3).unwrap();
        let expect = HermForm::hyperbolic_plane(&r)
            .orthogonal_sum(&HermForm::scaled_norm_form(&r.one()))
            .unwrap();
        assert_eq!(s3, expect);
        let s2 = HermForm::standard(&r, 2).unwrap();
        assert_eq!(s2.orthogonal_sum(&HermForm::zero(&r, 0)).unwrap(), s2);
        assert_eq!(
            s2.orthogonal_sum(&s2).unwrap(),
            HermForm::standard(&r, 4).unwrap()
        );
        let other = RingSpec::preset("q2i", None).unwrap();
        assert!(s2
            .orthogonal_sum(&HermForm::standard(&other, 2).unwrap())
            .is_err());
    }
}
