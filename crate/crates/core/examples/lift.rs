//! Reduce a form modulo pi^2, then lift that similitude to precision 6.

use hermloc::form::HermForm;
use hermloc::reduction::{lift_similitude, reduce_to_standard};
use hermloc::ring::RingSpec;
use hermloc::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hermloc::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let high = RingSpec::preset("qp-sqrt-p:3", Some(6))?;
    let low = high.change_precision(2)?;
    let form = sample::scrambled_standard(&high, 3, &mut rng).form;

    let sim_low = reduce_to_standard(&form.change_precision(&low)?)?;
    let sim = lift_similitude(&form, &sim_low)?;
    println!(
        "low gamma2 = {}, lifted gamma2 = {}",
        sim_low.gamma2, sim.gamma2
    );
    println!(
        "agrees after truncation: {}",
        sim.change_precision(&low)? == sim_low
    );
    println!(
        "valid at precision 6: {}",
        sim.verify(&HermForm::standard(&high, 3)?, &form)?
    );
    Ok(())
}
