//! The quasi-K-matrix Υ on the rank-one datum, checked against its closed form.

use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::quasi::{rank1_closed, rank1_divided_coefficient, upsilon, verify_intertwiner};
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 8;
    let u = Covering::new(Arc::new(FreeHalf::new(builtin("rank1")?, h)));
    let ups = upsilon(u.free_half(), h)?;
    for mu in ups.parts.keys() {
        if ups.is_zero_at(mu) {
            continue;
        }
        let p = ups.part_pbw(&u, mu)?;
        for (m, c) in p.terms() {
            println!("Υ_{mu}: {} · {}", c.render(), m.render(u.labels()));
        }
    }
    for k in 0..=h / 2 {
        let got = rank1_divided_coefficient(&ups, 2 * k);
        let want = rank1_closed(k, &ups.c[0]);
        println!("k={k}: closed form agrees: {}", got.as_ref() == Some(&want));
    }
    println!(
        "intertwiner relations checked: {}",
        verify_intertwiner(&u, &ups, h)?
    );
    Ok(())
}
