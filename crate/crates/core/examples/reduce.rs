//! Scramble a standard form by a random change of basis and a unit scale,
//! then recover a similitude back to it.

use hermloc::form::HermForm;
use hermloc::reduction::reduce_to_standard;
use hermloc::ring::RingSpec;
use hermloc::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hermloc::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ring = RingSpec::preset("q2sqrt2", None)?;
    for n in 1..=5 {
        let scrambled = sample::scrambled_standard(&ring, n, &mut rng);
        let sim = reduce_to_standard(&scrambled.form)?;
        let std = HermForm::standard(&ring, n)?;
        println!(
            "rank {n}: hidden scale {}, recovered gamma2 {}, similitude verified: {}",
            scrambled.u,
            sim.gamma2,
            sim.verify(&std, &scrambled.form)?
        );
    }

    let zero = HermForm::zero(&ring, 2);
    match reduce_to_standard(&zero) {
        Err(e) => println!("zero form: {} ({e})", e.kind()),
        Ok(_) => unreachable!("the zero form is degenerate"),
    }
    Ok(())
}
