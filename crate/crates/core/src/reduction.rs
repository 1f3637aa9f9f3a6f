//! Normal forms of non-degenerate hermitian quadratic forms.
//!
//! * [`make_isotropic_pair`] turns a pair with `f(x, Pi y) = 1` into a
//!   hyperbolic pair whose Gram block is exactly the standard one.
//! * [`reduce_to_standard`] splits off hyperbolic pairs until rank `<= 1` and
//!   returns a similitude from the standard form.
//! * [`lift_similitude`] lifts a similitude along `R/pi^N' <- R/pi^N`.
//! * [`are_similar`] composes two reductions.
//!
//! All iterations stop on an exactly zero residual; `pi` is nilpotent in a
//! truncated ring, so they terminate.

use crate::disc::is_nondegenerate;
use crate::error::{Error, Result};
use crate::form::{HVector, HermForm};
use crate::linalg::{self, QMatrix};
use crate::ring::{QElt, RingSpec, Scalar};

/// `gamma2 * q_src(m) = q_dst(gamma1 m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similitude {
    /// Columns are the images of the source basis vectors.
    pub gamma1: QMatrix,
    pub gamma2: Scalar,
}

impl Similitude {
    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        Similitude {
            gamma1: linalg::identity(ring, n),
            gamma2: ring.one(),
        }
    }

    pub fn ring(&self) -> &RingSpec {
        self.gamma2.ring()
    }

    pub fn rank(&self) -> usize {
        self.gamma1.len()
    }

    pub fn column(&self, j: usize) -> HVector {
        linalg::column(&self.gamma1, j)
    }

    pub fn apply(&self, m: &HVector) -> HVector {
        linalg::apply(&self.gamma1, m, self.ring())
    }

    /// Truncation (or canonical lift) of every entry.
    pub fn change_precision(&self, target: &RingSpec) -> Result<Similitude> {
        Ok(Similitude {
            gamma1: self
                .gamma1
                .iter()
                .map(|r| r.iter().map(|x| x.change_precision(target)).collect())
                .collect::<Result<_>>()?,
            gamma2: self.gamma2.change_precision(target)?,
        })
    }

    /// `self` after `first`: `src -> mid -> dst`.
    pub fn compose(&self, first: &Similitude) -> Similitude {
        Similitude {
            gamma1: linalg::mul(&self.gamma1, &first.gamma1, self.ring()),
            gamma2: &self.gamma2 * &first.gamma2,
        }
    }

    pub fn inverse(&self) -> Result<Similitude> {
        Ok(Similitude {
            gamma1: linalg::inverse(&self.gamma1, self.ring())?,
            gamma2: self.gamma2.inverse()?,
        })
    }

    /// Checks the similitude identity on the whole form, i.e. on the `A` and
    /// `B` entries, which determine `q`. Also requires `gamma1` invertible and
    /// `gamma2` a unit.
    pub fn verify(&self, src: &HermForm, dst: &HermForm) -> Result<bool> {
        if src.ring() != dst.ring() || self.ring() != src.ring() {
            return Err(Error::RingMismatch);
        }
        if src.rank() != dst.rank() || self.rank() != src.rank() {
            return Err(Error::RankMismatch {
                expected: src.rank(),
                got: dst.rank().min(self.rank()),
            });
        }
        if !self.gamma2.is_unit() || !linalg::is_invertible(&self.gamma1, self.ring()) {
            return Ok(false);
        }
        let cols: Vec<HVector> = (0..self.rank()).map(|j| self.column(j)).collect();
        Ok(dst.pullback(&cols)? == src.scale(&self.gamma2))
    }

    /// `gamma2 * q_src(m) == q_dst(gamma1 m)` for one vector.
    pub fn holds_at(&self, src: &HermForm, dst: &HermForm, m: &HVector) -> Result<bool> {
        Ok(&self.gamma2 * src.eval_q(m)? == dst.eval_q(&self.apply(m))?)
    }
}

/// A hyperbolic pair: `q(x) = q(y) = 0`, `f(x, y) = 0`, `f(x, Pi y) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicPair {
    pub x: HVector,
    pub y: HVector,
    /// Number of Newton iterates `r_1, r_2, ..` computed.
    pub newton_steps: usize,
}

fn pi_times(form: &HermForm, v: &HVector) -> HVector {
    v.scale(&QElt::uniformizer(form.ring()))
}

fn pistar_times(form: &HermForm, v: &HVector) -> HVector {
    v.scale(&QElt::uniformizer_conj(form.ring()))
}

/// Iteration budget `ceil(log2 N) + 2`.
pub fn newton_limit(precision: u32) -> usize {
    let mut k = 0;
    while (1u64 << k) < precision as u64 {
        k += 1;
    }
    k + 2
}

/// Gram matrix of `f` on `(x, y, Pi x, Pi y)`.
pub fn pair_gram(form: &HermForm, x: &HVector, y: &HVector) -> Result<Vec<Vec<Scalar>>> {
    let v = [x.clone(), y.clone(), pi_times(form, x), pi_times(form, y)];
    v.iter()
        .map(|a| v.iter().map(|b| form.bilinear_f(a, b)).collect())
        .collect()
}

/// The standard `4 x 4` block `[[0,0,0,1],[0,0,-1,0],[0,-1,0,0],[1,0,0,0]]`.
pub fn standard_block(ring: &RingSpec) -> Vec<Vec<Scalar>> {
    let mut g = vec![vec![ring.zero(); 4]; 4];
    g[0][3] = ring.one();
    g[1][2] = -ring.one();
    g[2][1] = -ring.one();
    g[3][0] = ring.one();
    g
}

pub fn make_isotropic_pair(form: &HermForm, x: &HVector, y: &HVector) -> Result<IsotropicPair> {
    let ring = form.ring().clone();
    let f = |a: &HVector, b: &HVector| form.bilinear_f(a, b);
    if !f(x, &pi_times(form, y))?.is_one() {
        return Err(Error::BadPairing);
    }
    let pi = ring.pi();
    let one = ring.one();

    // (1) r with q(x + r Pi y) = r + q(x) + r^2 pi q(y) = 0.
    let qx = form.eval_q(x)?;
    let qy = form.eval_q(y)?;
    let limit = newton_limit(ring.precision());
    let mut r = -&qx;
    let mut steps = 1;
    loop {
        let residual = &r + &qx + &r * &r * &pi * &qy;
        if residual.is_zero() {
            break;
        }
        if steps >= limit {
            return Err(Error::NewtonDivergence(steps));
        }
        let deriv = &one + (&r + &r) * &pi * &qy;
        r = &r - residual * deriv.inverse()?;
        steps += 1;
    }

    // (2) x <- (x + r Pi y) / (1 + r pi f(y, y)), so q(x) = 0, f(x, Pi y) = 1.
    let shifted = x + &pi_times(form, y).scale_base(&r);
    let x = shifted.scale_base(&(&one + &r * &pi * f(y, y)?).inverse()?);

    // (3) y <- y - q(y) Pi^* x kills q(y); renormalize by the new pairing.
    let qy = form.eval_q(y)?;
    let y = y - &pistar_times(form, &x).scale_base(&qy);
    let c = f(&x, &pi_times(form, &y))?;
    let y = y.scale_base(&c.inverse()?);

    // (4) x <- (a + b Pi^*) x kills f(x, y).
    let fxy = f(&x, &y)?;
    let pi2y = pi_times(form, &pi_times(form, &y));
    let a = (&one - &fxy * f(&x, &pi2y)?).inverse()?;
    let b = -(&a * &fxy);
    let coeff = &QElt::from_base(a) + &QElt::uniformizer_conj(&ring).scale(&b);
    let x = x.scale(&coeff);

    Ok(IsotropicPair {
        x,
        y,
        newton_steps: steps,
    })
}

/// Removes the components of `m` along the hyperbolic pair `(x, y)`.
fn project_off(form: &HermForm, pair: (&HVector, &HVector), m: &HVector) -> Result<HVector> {
    let (x, y) = pair;
    let f = |a: &HVector, b: &HVector| form.bilinear_f(a, b);
    // m' = m - alpha x - beta y with
    // alpha = f(m, Pi y) - f(m, y) Pi,  beta = -f(m, Pi x) + f(m, x) Pi.
    let alpha = QElt::new(f(m, &pi_times(form, y))?, -f(m, y)?)?;
    let beta = QElt::new(-f(m, &pi_times(form, x))?, f(m, x)?)?;
    Ok(&(m - &x.scale(&alpha)) - &y.scale(&beta))
}

/// A similitude from `M_std,n` onto `form`.
pub fn reduce_to_standard(form: &HermForm) -> Result<Similitude> {
    let ring = form.ring().clone();
    let n = form.rank();
    if n == 0 {
        return Ok(Similitude::identity(&ring, 0));
    }
    // When disc' is unavailable (theta = 0 at this precision) the reduction
    // itself decides: it succeeds only on forms similar to M_std,n.
    match is_nondegenerate(form) {
        Ok(false) => {
            let which = if n.is_multiple_of(2) { "disc" } else { "disc'" };
            return Err(Error::Degenerate(format!("{which} is not a unit")));
        }
        Ok(true) | Err(Error::InsufficientPrecision { .. }) => {}
        Err(e) => return Err(e),
    }
    let mut rest: Vec<HVector> = (0..n).map(|i| HVector::basis(&ring, n, i)).collect();
    let mut pairs: Vec<(HVector, HVector)> = Vec::new();
    while rest.len() >= 2 {
        let mut pivot = None;
        'search: for i in 0..rest.len() {
            for j in 0..rest.len() {
                if i == j {
                    continue;
                }
                let bij = form.bilinear_f(&rest[i], &pi_times(form, &rest[j]))?;
                if bij.is_unit() {
                    pivot = Some((i, j, bij));
                    break 'search;
                }
            }
        }
        let (i, j, bij) = pivot.ok_or_else(|| {
            Error::Degenerate(format!("no unit pivot among {} vectors", rest.len()))
        })?;
        let x = rest[i].scale_base(&bij.inverse()?);
        let pair = make_isotropic_pair(form, &x, &rest[j])?;
        rest = rest
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, m)| project_off(form, (&pair.x, &pair.y), m))
            .collect::<Result<_>>()?;
        pairs.push((pair.x, pair.y));
    }
    let gamma2 = match rest.first() {
        Some(v) => {
            let lambda = form.eval_q(v)?;
            if !lambda.is_unit() {
                return Err(Error::Degenerate(format!(
                    "q of the last vector is {lambda}"
                )));
            }
            lambda
        }
        None => ring.one(),
    };
    Ok(assemble(&pairs, rest.first(), gamma2))
}

fn assemble(pairs: &[(HVector, HVector)], last: Option<&HVector>, gamma2: Scalar) -> Similitude {
    let mut cols = Vec::new();
    for (x, y) in pairs {
        cols.push(x.scale_base(&gamma2));
        cols.push(y.clone());
    }
    cols.extend(last.cloned());
    Similitude {
        gamma1: linalg::from_columns(&cols),
        gamma2,
    }
}

/// Lifts a similitude `M_std,n -> form` valid modulo `pi^N'` to one valid
/// modulo `pi^N` that truncates back to `sim_low`.
pub fn lift_similitude(form_high: &HermForm, sim_low: &Similitude) -> Result<Similitude> {
    let high = form_high.ring().clone();
    let n = form_high.rank();
    let n_low = sim_low.ring().precision();
    if n_low > high.precision() {
        return Err(Error::PrecisionMismatch(n_low, high.precision()));
    }
    if sim_low.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: sim_low.rank(),
        });
    }
    let low = high.change_precision(n_low)?;
    if sim_low.ring() != &low {
        return Err(Error::RingMismatch);
    }
    let form_low = form_high.change_precision(&low)?;
    let std_low = HermForm::standard(&low, n)?;
    if !sim_low.verify(&std_low, &form_low)? {
        return Err(Error::NotASimilitudeModI(format!(
            "not a similitude modulo the base uniformizer to the {n_low}"
        )));
    }
    if n_low == high.precision() {
        return Ok(sim_low.clone());
    }

    let lifted = sim_low.change_precision(&high)?;
    let mut pairs: Vec<(HVector, HVector)> = Vec::new();
    for k in 0..n / 2 {
        let mut x1 = lifted.column(2 * k);
        let mut x2 = lifted.column(2 * k + 1);
        for (px, py) in &pairs {
            x1 = project_off(form_high, (px, py), &x1)?;
            x2 = project_off(form_high, (px, py), &x2)?;
        }
        let c = form_high.bilinear_f(&x1, &pi_times(form_high, &x2))?;
        let x1 = x1.scale_base(&c.inverse()?);
        let pair = make_isotropic_pair(form_high, &x1, &x2)?;
        pairs.push((pair.x, pair.y));
    }
    let (last, gamma2) = if n % 2 == 1 {
        let mut v = lifted.column(n - 1);
        for (px, py) in &pairs {
            v = project_off(form_high, (px, py), &v)?;
        }
        let lambda = form_high.eval_q(&v)?;
        (Some(v), lambda)
    } else {
        (None, lifted.gamma2.clone())
    };
    Ok(assemble(&pairs, last.as_ref(), gamma2))
}

/// A similitude `f1 -> f2`, or `None` if exactly one of them is degenerate
/// (or both are).
pub fn are_similar(f1: &HermForm, f2: &HermForm) -> Result<Option<Similitude>> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    if f1.rank() != f2.rank() {
        return Err(Error::RankMismatch {
            expected: f1.rank(),
            got: f2.rank(),
        });
    }
    let (s1, s2) = match (reduce_to_standard(f1), reduce_to_standard(f2)) {
        (Ok(s1), Ok(s2)) => (s1, s2),
        (Err(Error::Degenerate(_)), _) | (_, Err(Error::Degenerate(_))) => return Ok(None),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(Some(s2.compose(&s1.inverse()?)))
}
