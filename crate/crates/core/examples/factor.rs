//! Newton polygons and linear factors of monic pi-polynomials.

use hermloc::json::{factorization_value, newton_polygon_value};
use hermloc::teich::{AeRing, OcModel, PiPoly};
use num_rational::Rational64;

fn main() -> hermloc::error::Result<()> {
    let ring = AeRing::new(OcModel::new(9, 9, 8)?, 6)?;
    let oc = &ring.oc;
    let t = |n: i64, d: i64| oc.monomial(1, Rational64::new(n, d));

    let split = ring.poly_product(&ring.linear(&t(1, 1)?), &ring.linear(&t(2, 1)?));
    report(&ring, "(pi - [t])(pi - [t^2])", &split)?;

    let shifted = PiPoly {
        coeffs: vec![oc.zero(), oc.neg(&t(2, 1)?), oc.one()],
    };
    report(&ring, "pi^2 - [t^2] pi", &shifted)?;

    let fractional = ring.linear(&t(1, 3)?);
    report(&ring, "pi - [t^(1/3)]", &fractional)?;

    let f2 = AeRing::new(OcModel::new(2, 4, 8)?, 4)?;
    let inseparable = PiPoly {
        coeffs: vec![
            f2.oc.monomial(1, Rational64::from_integer(1))?,
            f2.oc.zero(),
            f2.oc.one(),
        ],
    };
    report(&f2, "pi^2 - [t] over F_2", &inseparable)
}

fn report(ring: &AeRing, label: &str, p: &PiPoly) -> hermloc::error::Result<()> {
    let np = ring.newton_polygon(p)?;
    let f = ring.factor_linear(p)?;
    println!("{label}");
    println!("  Newton polygon: {}", newton_polygon_value(&np));
    println!("  factors: {}", factorization_value(ring, &f));
    println!("  product reconstructs: {}", ring.reconstruct(&f) == *p);
    Ok(())
}
