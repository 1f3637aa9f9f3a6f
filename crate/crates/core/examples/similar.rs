//! Similarity of two forms, with a witness when they are similar.

use hermloc::form::HermForm;
use hermloc::reduction::are_similar;
use hermloc::ring::RingSpec;
use hermloc::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hermloc::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ring = RingSpec::preset("q2i", None)?;
    let f1 = sample::scrambled_standard(&ring, 4, &mut rng).form;
    let f2 = sample::scrambled_standard(&ring, 4, &mut rng).form;
    match are_similar(&f1, &f2)? {
        Some(s) => println!(
            "similar, gamma2 = {}, verified: {}",
            s.gamma2,
            s.verify(&f1, &f2)?
        ),
        None => println!("not similar"),
    }
    let degenerate = HermForm::zero(&ring, 4);
    println!(
        "against the zero form: {:?}",
        are_similar(&f1, &degenerate)?.map(|s| s.gamma2)
    );
    Ok(())
}
