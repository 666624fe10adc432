//! Simple modules from truncated Verma modules and the rank-one canonical basis.

use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::modules::{canonical_basis_rank1, simple};
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = builtin("rank1")?;
    let u = Arc::new(Covering::new(Arc::new(FreeHalf::new(d.clone(), 5))));
    let lam = d.weight_from_pairings(&[3]);
    let l = simple(&u, &lam, 5)?;
    println!(
        "L(3): dimension {}, relations checked {}",
        l.dim(),
        l.audit()?
    );
    let b = canonical_basis_rank1(&l)?;
    println!("basis {:?}", b.module.labels);
    println!(
        "ψ involutive: {}, intertwines: {}",
        b.is_involutive(),
        b.psi_intertwines()
    );

    let d2 = builtin("B(0,2)")?;
    let u2 = Arc::new(Covering::new(Arc::new(FreeHalf::new(d2.clone(), 3))));
    let l2 = simple(&u2, &d2.weight_from_pairings(&[1, 0]), 3)?;
    for (w, idx) in l2.weight_spaces() {
        println!("B(0,2) L(1,0) weight {w:?}: dimension {}", idx.len());
    }
    Ok(())
}
