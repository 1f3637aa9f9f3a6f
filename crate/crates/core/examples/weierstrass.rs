//! Detectors and Weierstrass preparation in O_C[[pi]] / (pi^8) over the F_9
//! monomial model.

use hermloc::json::coeffs_value;
use hermloc::sample;
use hermloc::teich::{AeRing, OcModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hermloc::error::Result<()> {
    let ring = AeRing::new(OcModel::new(9, 9, 8)?, 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for d in 0..=3 {
        let a = sample::primitive_series(&ring, d, &mut rng);
        let w = ring.weierstrass_prep(&a)?;
        let rebuilt = ring.series_mul(&w.unit, &ring.series(w.poly.coeffs.clone()))?;
        println!(
            "degree {:?}: distinguished {}, {} rounds, unit * poly == input: {}",
            ring.is_primitive(&a),
            ring.is_distinguished_deg1(&a),
            w.iterations,
            rebuilt == a
        );
        println!("  poly = {}", coeffs_value(&ring.oc, &w.poly.coeffs));
    }
    let c = sample::crystalline_series(&ring, &mut rng);
    println!(
        "all-positive series: crystalline {}, primitive {:?}",
        ring.in_crystalline_ideal(&c),
        ring.is_primitive(&c)
    );
    Ok(())
}
