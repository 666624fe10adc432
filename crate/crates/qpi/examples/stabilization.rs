//! Stabilization of ı-canonical basis elements along L(λ) ⊗ L(μ) as λ, μ grow.

use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::modules::stabilization;
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (b1, b2, steps) = (0, 1, 4);
    for zeta in [0u8, 1] {
        let top = (b1.max(b2) + steps - 1) as i64;
        let u = Arc::new(Covering::new(Arc::new(FreeHalf::new(
            builtin("rank1")?,
            2 * top + zeta as i64,
        ))));
        let r = stabilization(&u, b1, b2, zeta, steps)?;
        for s in &r.steps {
            let c: Vec<String> = s.coefficients.iter().map(|x| x.render()).collect();
            println!(
                "ζ={zeta} λ={} μ={}: ψ_ı-invariant {}, coefficients [{}]",
                s.lambda,
                s.mu,
                s.psi_i_invariant,
                c.join(", ")
            );
        }
        println!("ζ={zeta}: stable from {:?}, ok {}", r.stable_from, r.ok());
    }
    Ok(())
}
