#![allow(dead_code)]

use hermloc::ring::RingSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The three presets plus two equal-characteristic rings (odd and even `q`).
pub fn rings() -> Vec<RingSpec> {
    vec![
        RingSpec::preset("q2i", None).unwrap(),
        RingSpec::preset("q2sqrt2", None).unwrap(),
        RingSpec::preset("qp-sqrt-p:3", None).unwrap(),
        RingSpec::polytrunc(9, 4, &[0], &[0, 1]).unwrap(),
        RingSpec::polytrunc(4, 5, &[0, 1], &[0, 1]).unwrap(),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
