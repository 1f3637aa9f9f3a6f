//! Coinvariants `X_*(T)_Gamma = Z^r / <gamma mu - mu>` of a cocharacter
//! lattice under a finite action, and the specialization map
//! `sp: X_*(T) -> X_*(T)_Gamma`.
//!
//! Only the sublattice spanned by the columns `(gamma - 1) e_j` matters, so
//! the generators never have to satisfy any group relations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lift::{bareiss, integers};
use crate::snf::{hnf_rows, mul_vec, smith, IMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAction {
    rank: usize,
    generators: Vec<IMatrix>,
}

impl LatticeAction {
    pub fn new(rank: usize, generators: Vec<IMatrix>) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            if g.len() != rank {
                return Err(Error::LengthMismatch {
                    expected: rank,
                    got: g.len(),
                });
            }
            if let Some(row) = g.iter().find(|r| r.len() != rank) {
                return Err(Error::LengthMismatch {
                    expected: rank,
                    got: row.len(),
                });
            }
            let det = bareiss(&integers(2), g.clone());
            if det.abs() != BigInt::one() {
                return Err(Error::NonUnimodular(k));
            }
        }
        Ok(LatticeAction { rank, generators })
    }

    pub fn from_i64(rank: usize, generators: &[Vec<Vec<i64>>]) -> Result<Self> {
        Self::new(
            rank,
            generators
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[IMatrix] {
        &self.generators
    }

    /// `r x (r * #generators)` matrix with columns `(gamma - 1) e_j`.
    pub fn relation_matrix(&self) -> IMatrix {
        let r = self.rank;
        (0..r)
            .map(|i| {
                self.generators
                    .iter()
                    .flat_map(|g| {
                        (0..r).map(move |j| {
                            let delta = if i == j {
                                BigInt::one()
                            } else {
                                BigInt::zero()
                            };
                            &g[i][j] - delta
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// `gamma nu - nu` for generator `k`.
    pub fn relation(&self, k: usize, nu: &[BigInt]) -> Vec<BigInt> {
        mul_vec(&self.generators[k], nu)
            .into_iter()
            .zip(nu)
            .map(|(a, b)| a - b)
            .collect()
    }
}

/// `X_*(T)_Gamma ~ Z^free_rank + sum Z/d_i`, with the rows that compute the
/// coordinates of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvResult {
    pub free_rank: usize,
    /// Invariant factors `> 1`, in divisibility order.
    pub torsion: Vec<BigInt>,
    /// Free coordinates: a row-HNF basis of the functionals killing the
    /// relations.
    pub free_rows: IMatrix,
    /// Torsion coordinates: `(row, d)`, read modulo `d`.
    pub torsion_rows: Vec<(Vec<BigInt>, BigInt)>,
}

/// A class in `X_*(T)_Gamma`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpValue {
    pub free: Vec<BigInt>,
    /// `(d, value in [0, d))`.
    pub torsion: Vec<(BigInt, BigInt)>,
}

pub fn coinvariants(act: &LatticeAction) -> CoinvResult {
    let r = act.rank;
    let m = act.relation_matrix();
    if m.first().is_none_or(|row| row.is_empty()) {
        return CoinvResult {
            free_rank: r,
            torsion: Vec::new(),
            free_rows: crate::snf::identity(r),
            torsion_rows: Vec::new(),
        };
    }
    let s = smith(&m);
    let rank = s.rank();
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..rank {
        if s.d[i] > BigInt::one() {
            torsion.push(s.d[i].clone());
            torsion_rows.push((s.u[i].clone(), s.d[i].clone()));
        }
    }
    let free: IMatrix = s.u[rank..].to_vec();
    CoinvResult {
        free_rank: r - rank,
        torsion,
        free_rows: if free.is_empty() {
            free
        } else {
            hnf_rows(&free)
        },
        torsion_rows,
    }
}

impl CoinvResult {
    pub fn project(&self, mu: &[BigInt]) -> Result<SpValue> {
        let r = self
            .free_rows
            .first()
            .or(self.torsion_rows.first().map(|(row, _)| row))
            .map_or(mu.len(), |row| row.len());
        if mu.len() != r {
            return Err(Error::LengthMismatch {
                expected: r,
                got: mu.len(),
            });
        }
        let dot = |row: &[BigInt]| -> BigInt { row.iter().zip(mu).map(|(a, b)| a * b).sum() };
        Ok(SpValue {
            free: self.free_rows.iter().map(|row| dot(row)).collect(),
            torsion: self
                .torsion_rows
                .iter()
                .map(|(row, d)| (d.clone(), dot(row).mod_floor(d)))
                .collect(),
        })
    }

    /// Number of torsion classes, `prod d_i`.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

/// The specialization map on one cocharacter.
pub fn sp(act: &LatticeAction, mu: &[BigInt]) -> Result<SpValue> {
    if mu.len() != act.rank {
        return Err(Error::LengthMismatch {
            expected: act.rank,
            got: mu.len(),
        });
    }
    coinvariants(act).project(mu)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub torsion_classes: BigInt,
    pub torsion_classes_hit: usize,
    /// Every free basis vector (and its negative) is an image of the box.
    pub free_basis_hit: bool,
    /// Box `[-radius, radius]^r` that was enumerated.
    pub radius: i64,
    pub samples: usize,
    pub coinvariance_failures: usize,
}

impl SurjectivityReport {
    pub fn ok(&self) -> bool {
        BigInt::from(self.torsion_classes_hit) == self.torsion_classes
            && self.free_basis_hit
            && self.coinvariance_failures == 0
    }
}

fn box_points(r: usize, radius: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(BigInt::from(x));
                    q
                })
            })
            .collect();
    }
    out
}

/// Enumerates a box of cocharacters to confirm that every torsion class and
/// every free basis vector is hit, then checks `sp(mu + gamma nu - nu) =
/// sp(mu)` on `samples` seeded random pairs.
pub fn verify_surjectivity(act: &LatticeAction, samples: usize) -> SurjectivityReport {
    let c = coinvariants(act);
    let r = act.rank;
    let max_d = c.torsion.iter().max().cloned().unwrap_or_else(BigInt::one);
    let radius = i64::try_from(&max_d).unwrap_or(i64::MAX).clamp(3, 12);
    let mut torsion_hit = BTreeSet::new();
    let mut free_hit = BTreeSet::new();
    for mu in box_points(r, radius) {
        let v = c.project(&mu).expect("length matches");
        torsion_hit.insert(v.torsion.clone());
        free_hit.insert(v.free);
    }
    let free_basis_hit = (0..c.free_rank).all(|i| {
        [1i64, -1].iter().all(|&s| {
            let e: Vec<BigInt> = (0..c.free_rank)
                .map(|j| BigInt::from(if i == j { s } else { 0 }))
                .collect();
            free_hit.contains(&e)
        })
    });

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = 0;
    let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<BigInt> {
        (0..r)
            .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
            .collect()
    };
    for _ in 0..samples {
        let mu = rand_vec(&mut rng);
        let nu = rand_vec(&mut rng);
        let base = c.project(&mu).expect("length matches");
        for k in 0..act.generators.len() {
            let shifted: Vec<BigInt> = mu
                .iter()
                .zip(act.relation(k, &nu))
                .map(|(a, b)| a + b)
                .collect();
            if c.project(&shifted).expect("length matches") != base {
                failures += 1;
            }
        }
    }
    SurjectivityReport {
        torsion_classes: c.torsion_order(),
        torsion_classes_hit: torsion_hit.len(),
        free_basis_hit,
        radius,
        samples,
        coinvariance_failures: failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gm_case() {
        let act = LatticeAction::from_i64(1, &[vec![vec![1]]]).unwrap();
        let c = coinvariants(&act);
        assert_eq!((c.free_rank, c.torsion.len()), (1, 0));
        for j in -4..=4 {
            assert_eq!(sp(&act, &bi(&[j])).unwrap().free, bi(&[j]));
        }
        let none = LatticeAction::from_i64(1, &[]).unwrap();
        assert_eq!(sp(&none, &bi(&[3])).unwrap().free, bi(&[3]));
    }

    #[test]
    fn swap_case() {
        let act = LatticeAction::from_i64(2, &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
        let c = coinvariants(&act);
        assert_eq!((c.free_rank, c.torsion.len()), (1, 0));
        for (a, b) in [(1, 0), (0, 1), (2, -5), (-3, 3)] {
            let v = sp(&act, &bi(&[a, b])).unwrap();
            assert_eq!(v.free, bi(&[a + b]));
            assert!(v.torsion.is_empty());
        }
        assert!(verify_surjectivity(&act, 100).ok());
    }

    #[test]
    fn norm_one_case() {
        let act = LatticeAction::from_i64(1, &[vec![vec![-1]]]).unwrap();
        let c = coinvariants(&act);
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.torsion, bi(&[2]));
        let v = sp(&act, &bi(&[1])).unwrap();
        assert_eq!(v.torsion, vec![(BigInt::from(2), BigInt::from(1))]);
        assert_eq!(
            sp(&act, &bi(&[-4])).unwrap().torsion,
            vec![(BigInt::from(2), BigInt::from(0))]
        );
        let rep = verify_surjectivity(&act, 50);
        assert_eq!(rep.torsion_classes_hit, 2);
        assert!(rep.ok());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            LatticeAction::from_i64(1, &[vec![vec![2]]]),
            Err(Error::NonUnimodular(0))
        );
        let act = LatticeAction::from_i64(1, &[vec![vec![1]]]).unwrap();
        assert!(matches!(
            sp(&act, &bi(&[1, 2])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn redundant_generator_changes_nothing() {
        let g = vec![vec![0, -1, 0], vec![1, -1, 0], vec![0, 0, 1]];
        let g2 = vec![vec![-1, 1, 0], vec![-1, 0, 0], vec![0, 0, 1]]; // g^2
        let a = coinvariants(&LatticeAction::from_i64(3, std::slice::from_ref(&g)).unwrap());
        let b = coinvariants(&LatticeAction::from_i64(3, &[g, g2]).unwrap());
        assert_eq!((a.free_rank, &a.torsion), (b.free_rank, &b.torsion));
    }
}
