use super::{Datum, DatumError, IParams, RootDatum, SuperCartanDatum};

const NAMES: [&str; 6] = [
    "rank1",
    "covering-sl2",
    "B(0,1)",
    "B(0,2)",
    "B(0,3)",
    "rank2-km",
];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

fn from_dot(name: &str, dot: Vec<Vec<i64>>, parity: Vec<u8>) -> Datum {
    let n = parity.len();
    let cartan = SuperCartanDatum {
        labels: (1..=n as i64).collect(),
        dot,
        is_super: parity.contains(&1),
        parity,
    };
    let root = RootDatum::simply_connected(&cartan);
    let params = IParams::standard(&cartan);
    Datum::new(name, cartan, root, params)
}

/// Built-in data with `τ = id` and `ς_i = q_i^{-1}`.
///
/// `B(0,n)` has the short odd root first; `rank2-km` has `a_12 a_21 = 8`.
pub fn builtin(name: &str) -> Result<Datum, DatumError> {
    let d = match name {
        "rank1" | "covering-sl2" | "B(0,1)" => from_dot(name, vec![vec![2]], vec![1]),
        "B(0,2)" => from_dot(name, vec![vec![2, -2], vec![-2, 4]], vec![1, 0]),
        "B(0,3)" => from_dot(
            name,
            vec![vec![2, -2, 0], vec![-2, 4, -2], vec![0, -2, 4]],
            vec![1, 0, 0],
        ),
        "rank2-km" => from_dot(name, vec![vec![2, -4], vec![-4, 4]], vec![1, 0]),
        _ => return Err(DatumError::UnknownBuiltin(name.to_string())),
    };
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_entries() {
        let d = builtin("B(0,2)").unwrap();
        assert_eq!(d.cartan.cartan_matrix(), vec![vec![2, -2], vec![-1, 2]]);
        let k = builtin("rank2-km").unwrap();
        assert!(k.cartan.a(0, 1) * k.cartan.a(1, 0) >= 4);
        assert!(builtin("A2").is_err());
    }
}
