//! Discriminants of the standard forms and the norm form on each preset.
//!
//! Run with `cargo run --example discriminant`. The last line is a JSON form
//! document that the `disc` subcommand accepts.

use hermloc::disc::{disc, disc_divided, is_nondegenerate};
use hermloc::form::HermForm;
use hermloc::json::form_doc;
use hermloc::ring::RingSpec;

fn main() -> hermloc::error::Result<()> {
    for name in ["q2i", "q2sqrt2", "qp-sqrt-p:3"] {
        let ring = RingSpec::preset(name, None)?;
        println!(
            "{name}: theta = {}, v(theta) = {:?}",
            ring.theta(),
            ring.theta_valuation()
        );

        let norm = HermForm::scaled_norm_form(&ring.one());
        let d = disc_divided(&norm)?;
        println!(
            "  norm form: disc = {}, disc' = {} (mod pi^{})",
            disc(&norm).value,
            d.value,
            d.precision
        );

        for n in 1..=4 {
            let f = HermForm::standard(&ring, n)?;
            let full = disc(&f);
            let divided = if n % 2 == 1 {
                format!(", disc' = {}", disc_divided(&f)?.value)
            } else {
                String::new()
            };
            println!(
                "  M_std,{n}: disc = {}{divided}, nondegenerate = {}",
                full.value,
                is_nondegenerate(&f)?
            );
        }
    }
    let ring = RingSpec::preset("q2i", None)?;
    println!("{}", form_doc(&HermForm::standard(&ring, 2)?));
    Ok(())
}
