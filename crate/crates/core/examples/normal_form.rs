//! Turning a pair with `f(x, Pi y) = 1` into a hyperbolic pair whose Gram
//! matrix is the standard 4x4 block.

use hermloc::reduction::{make_isotropic_pair, newton_limit, pair_gram, standard_block};
use hermloc::ring::RingSpec;
use hermloc::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hermloc::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["q2i", "q2sqrt2", "qp-sqrt-p:3"] {
        let ring = RingSpec::preset(name, None)?;
        let (form, x, y) = sample::pairing(&ring, 3, &mut rng);
        println!(
            "{name}: q(x) = {}, q(y) = {}",
            form.eval_q(&x)?,
            form.eval_q(&y)?
        );
        let pair = make_isotropic_pair(&form, &x, &y)?;
        let gram = pair_gram(&form, &pair.x, &pair.y)?;
        println!(
            "  Newton steps {} (limit {}), Gram is standard: {}",
            pair.newton_steps,
            newton_limit(ring.precision()),
            gram == standard_block(&ring)
        );
        for row in &gram {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>4}")).collect();
            println!("    [{}]", cells.join(" "));
        }
    }
    Ok(())
}
