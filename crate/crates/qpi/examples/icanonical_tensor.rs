//! ı-canonical basis of L(λ) ⊗ L(μ) on the rank-one datum through the ◊ basis.

use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::linalg;
use qpi::modules::{cb_tensor, icanonical_basis, psi_i_module, rank1_based, TensorModule};
use qpi::quasi::{theta, theta_i, upsilon};
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (lambda, mu) = (2, 1);
    let h = lambda + mu;
    let u = Arc::new(Covering::new(Arc::new(FreeHalf::new(builtin("rank1")?, h))));
    let ups = upsilon(u.free_half(), h)?;
    let th = theta(&u, h)?;
    let thi = theta_i(&u, &ups, &th, h)?;
    let left = rank1_based(&u, lambda)?;
    let pl = psi_i_module(&left, &ups)?;
    let t = TensorModule::new(left, rank1_based(&u, mu)?, &th)?;
    let p = t.psi_i_theta(&pl, &thi, &ups.c)?;
    println!(
        "ψ_ı from Θ^ı equals ψ_ı from Υ: {}",
        p == t.psi_i_upsilon(&ups)?
    );
    let dia = cb_tensor(&t)?;
    let inv = linalg::inverse(&dia.coords)?;
    let pd = linalg::mat_mul(&inv, &linalg::mat_mul(&p, &linalg::mat_bar(&dia.coords)));
    let ib = icanonical_basis(&dia.based, &pd)?;
    for (j, lab) in dia.based.module.labels.iter().enumerate() {
        let terms: Vec<String> = ib
            .expansion(j)
            .iter()
            .map(|(k, c)| format!("({}) {k}", c.render()))
            .collect();
        println!("ı-CB[{lab}] = {}", terms.join(" + "));
    }
    Ok(())
}
