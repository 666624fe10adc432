//! (q,π)-integers, factorials and binomials.

use super::poly::Laurent;
use super::qpi::{QPiScalar, ScalarError};
use super::ratfunc::RatFunc;
use num_bigint::BigInt;

/// `((s q)^n − q^{-n}) / (s q − q^{-1})` for `s = ±1`, as an integral Laurent polynomial.
fn signed_integer(n: i64, s: i64) -> Laurent {
    if n == 0 {
        return Laurent::zero();
    }
    if n < 0 {
        // [−m] = −s^m [m]
        let sign_n = if (-n) % 2 == 1 && s < 0 { -1 } else { 1 };
        return signed_integer(-n, s).scale(&BigInt::from(-sign_n));
    }
    // (s q)^n − q^{−n} = (s q − q^{−1}) · Σ_{k=0}^{n−1} (s q)^{n−1−k} q^{−k}
    Laurent::from_terms((0..n).map(|k| {
        let e = n - 1 - 2 * k;
        let sign = if s < 0 && (n - 1 - k) % 2 == 1 { -1 } else { 1 };
        (e, BigInt::from(sign))
    }))
}

/// `[n]` with `q ↦ q^d`, `π ↦ π^d`.
pub fn qpi_integer(n: i64, d: i64) -> QPiScalar {
    assert!(d >= 1, "qpi_integer needs d ≥ 1");
    let plus = signed_integer(n, 1).dilate(d);
    let minus = signed_integer(n, if d % 2 == 0 { 1 } else { -1 }).dilate(d);
    QPiScalar::from_laurent_pair(plus, minus)
}

/// `[n]^! = [1][2]…[n]`.
pub fn qpi_factorial(n: i64, d: i64) -> QPiScalar {
    (1..=n).fold(QPiScalar::one(), |acc, s| acc.mul(&qpi_integer(s, d)))
}

/// `[2k−1]^{!!} = [2k−1][2k−3]…[1]` (1 for k = 0).
pub fn qpi_odd_double_factorial(k: i64, d: i64) -> QPiScalar {
    (1..=k).fold(QPiScalar::one(), |acc, j| {
        acc.mul(&qpi_integer(2 * j - 1, d))
    })
}

/// `[2k]^{!!} = [2k][2k−2]…[2]` (1 for k = 0).
pub fn qpi_even_double_factorial(k: i64, d: i64) -> QPiScalar {
    (1..=k).fold(QPiScalar::one(), |acc, j| acc.mul(&qpi_integer(2 * j, d)))
}

/// `[m choose n] = [m]^! / ([n]^! [m−n]^!)`; zero when `n > m`.
pub fn qpi_binomial(m: i64, n: i64, d: i64) -> Result<QPiScalar, ScalarError> {
    if m < 0 {
        return Err(ScalarError::NegativeBinomial(m));
    }
    if n < 0 || n > m {
        return Ok(QPiScalar::zero());
    }
    let num = ((m - n + 1)..=m).fold(QPiScalar::one(), |acc, s| acc.mul(&qpi_integer(s, d)));
    num.div(&qpi_factorial(n, d))
}

/// Value of `x` at π = `sign`.
pub fn specialize(x: &QPiScalar, sign: i8) -> RatFunc {
    x.specialize(sign).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;

    fn s(x: &str) -> QPiScalar {
        parse_scalar(x).unwrap()
    }

    #[test]
    fn small_integers() {
        assert_eq!(qpi_integer(1, 1), QPiScalar::one());
        assert_eq!(qpi_integer(2, 1), s("p*q + q^-1"));
        assert_eq!(qpi_integer(0, 1), QPiScalar::zero());
        assert_eq!(qpi_integer(3, 1), s("q^2 + p + q^-2"));
    }

    #[test]
    fn integer_matches_defining_quotient() {
        // Compare with the quotient ((πq)^n − q^{−n}) / (πq − q^{−1}) computed in Q(q)^π.
        let pq = s("p*q");
        let den = pq.sub(&QPiScalar::q_pow(-1));
        for d in 1..=3 {
            for n in -6..=8 {
                let num = pq.pow(n).sub(&QPiScalar::q_pow(-n));
                let direct = num.div(&den).unwrap().dilate(d);
                assert_eq!(qpi_integer(n, d), direct, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(qpi_binomial(2, 1, 1).unwrap(), qpi_integer(2, 1));
        assert_eq!(
            qpi_binomial(3, 1, 1).unwrap().plus,
            s("q^2 + 1 + q^-2").plus
        );
        let b = qpi_binomial(4, 2, 1).unwrap();
        assert_eq!(b.bar(), b);
        assert!(matches!(
            qpi_binomial(-1, 0, 1),
            Err(ScalarError::NegativeBinomial(-1))
        ));
        for m in 0..=12 {
            for n in 0..=m {
                assert!(qpi_binomial(m, n, 1).unwrap().in_integral_form());
                assert!(qpi_binomial(m, n, 2).unwrap().in_integral_form());
            }
        }
    }
}
