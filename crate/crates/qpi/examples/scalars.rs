//! Arithmetic in Q(q)^π: parsing, the bar involution and specialization at π = ±1.

use qpi::scalar::{parse_scalar, render_ratfunc, QPiScalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = parse_scalar("p*q + q^-1")?;
    let y = parse_scalar("(q^2 - 1)/(q + p)")?;
    println!("x       = {}", x.render());
    println!("y       = {}", y.render());
    println!("x*y     = {}", x.mul(&y).render());
    println!("x/y     = {}", x.div(&y)?.render());
    println!("bar(x)  = {}", x.bar().render());
    println!("π^2     = {}", QPiScalar::pi().pow(2).render());
    for s in [1, -1] {
        println!("x at π={s:+} : {}", render_ratfunc(x.specialize(s)));
    }
    println!("x bar-invariant: {}", x.is_bar_invariant());
    Ok(())
}
