//! The quasi-R-matrix Θ and its ı-analogue Θ^ı on B(0,1).

use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::quasi::{theta, theta_i, upsilon, verify_irrt, verify_theta_intertwining};
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 3;
    let u = Covering::new(Arc::new(FreeHalf::new(builtin("B(0,1)")?, h)));
    let th = theta(&u, h)?;
    for (nu, t) in &th.parts {
        println!("Θ_{nu} = {}", t.render(u.labels()));
    }
    println!(
        "Θ intertwining relations checked: {}",
        verify_theta_intertwining(&u, &th, h)?
    );
    let ups = upsilon(u.free_half(), h)?;
    let thi = theta_i(&u, &ups, &th, h)?;
    for ((w, mu), t) in &thi.parts {
        if !t.is_zero() {
            println!("Θ^ı[{w}; {mu}] = {}", t.render(u.labels()));
        }
    }
    println!(
        "parity matched: {}, level zero is 1⊗1: {}",
        thi.parity_matched(&u),
        thi.level_zero_is_unit(&u)
    );
    println!(
        "Θ^ı relations checked: {}",
        verify_irrt(&u, &thi, &ups.c, 0)?
    );
    Ok(())
}
