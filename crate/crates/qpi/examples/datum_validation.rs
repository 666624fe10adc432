//! Built-in data, descriptor round trips and the validation report of a bad datum.

use qpi::datum::{builtin, builtin_names, DatumDescriptor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in builtin_names() {
        let d = builtin(name)?;
        let bad = d.validate_datum().len() + d.validate_params().len();
        println!(
            "{name:>14}: rank {}, labels {:?}, violations {bad}",
            d.rank(),
            d.cartan.labels
        );
    }
    let desc = DatumDescriptor::from_datum(&builtin("B(0,2)")?);
    let back = desc.to_datum()?;
    println!(
        "B(0,2) round trip preserves Cartan matrix: {}",
        back.cartan.cartan_matrix() == builtin("B(0,2)")?.cartan.cartan_matrix()
    );

    let bad = DatumDescriptor::from_json(r#"{"I":[1],"dot":[[2]],"parity":[0]}"#)?.to_datum()?;
    for v in bad.validate_datum().iter().chain(&bad.validate_params()) {
        println!("violation {v}");
    }
    Ok(())
}
