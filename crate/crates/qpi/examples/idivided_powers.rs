//! ı-divided powers of both parities on the rank-one datum and their ψ_ı invariance.

use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::iqsp::idivided_power;
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = builtin("rank1")?;
    let u = Covering::new(Arc::new(FreeHalf::new(d.clone(), 6)));
    for parity in [0u8, 1] {
        for m in 0..=4 {
            let x = idivided_power(&d, 0, m, parity)?;
            let invariant = x.poly.psi_i() == x.poly;
            let terms = x.value(&u)?.terms().count();
            println!("parity {parity}, m={m}: ({}) / [{m}]!   ψ_ı-invariant: {invariant}, PBW terms: {terms}", x.symbolic());
        }
    }
    Ok(())
}
