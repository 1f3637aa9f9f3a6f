//! Coinvariants and the specialization map for a few torus actions.

use hermloc::cochar::{coinvariants, sp, verify_surjectivity, LatticeAction};
use num_bigint::BigInt;

type Case = (&'static str, usize, Vec<Vec<Vec<i64>>>);

fn main() -> hermloc::error::Result<()> {
    let cases: [Case; 4] = [
        ("G_m", 1, vec![vec![vec![1]]]),
        ("norm-one torus", 1, vec![vec![vec![-1]]]),
        (
            "induced torus (swap)",
            2,
            vec![vec![vec![0, 1], vec![1, 0]]],
        ),
        (
            "order-3 rotation plus trivial factor",
            3,
            vec![vec![vec![0, -1, 0], vec![1, -1, 0], vec![0, 0, 1]]],
        ),
    ];
    for (label, r, gens) in cases {
        let act = LatticeAction::from_i64(r, &gens)?;
        let c = coinvariants(&act);
        println!(
            "{label}: free rank {}, torsion {:?}",
            c.free_rank, c.torsion
        );
        for mu in [vec![1i64; r], (0..r as i64).map(|i| 2 * i - 1).collect()] {
            let mu: Vec<BigInt> = mu.into_iter().map(BigInt::from).collect();
            let v = sp(&act, &mu)?;
            println!("  sp({mu:?}) = free {:?}, torsion {:?}", v.free, v.torsion);
        }
        println!(
            "  surjectivity check passes: {}",
            verify_surjectivity(&act, 200).ok()
        );
    }
    Ok(())
}
