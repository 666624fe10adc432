//! Canonical text rendering: descending powers of `q`, π written as `p`.

use super::poly::Laurent;
use super::qpi::QPiScalar;
use super::ratfunc::RatFunc;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

fn q_factor(e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some("q".to_string()),
        _ => Some(format!("q^{e}")),
    }
}

fn rational_str(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Joins signed terms `(negative, body)` into `a - b + c` form.
fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (neg, body)) in terms.into_iter().enumerate() {
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// One term `c * [p] * q^e` with `c > 0`.
fn monomial_body(c: &BigRational, with_pi: bool, e: i64) -> String {
    let mut factors: Vec<String> = Vec::new();
    if !c.is_one() || (!with_pi && e == 0) {
        factors.push(rational_str(c));
    }
    if with_pi {
        factors.push("p".to_string());
    }
    if let Some(qf) = q_factor(e) {
        factors.push(qf);
    }
    factors.join("*")
}

fn render_rational_terms(terms: &[(i64, BigRational)]) -> String {
    let mut out = Vec::new();
    for (e, c) in terms.iter().rev() {
        if c.is_zero() {
            continue;
        }
        out.push((c.is_negative(), monomial_body(&c.abs(), false, *e)));
    }
    join_terms(out)
}

pub fn render_laurent(p: &Laurent) -> String {
    let terms: Vec<(i64, BigRational)> = p
        .terms()
        .map(|(e, c)| (e, BigRational::from_integer(c.clone())))
        .collect();
    render_rational_terms(&terms)
}

fn wrap(s: String) -> String {
    if s.contains(' ') || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

pub fn render_ratfunc(r: &RatFunc) -> String {
    if let Some(t) = r.laurent_terms() {
        return render_rational_terms(&t);
    }
    format!(
        "{}/{}",
        wrap(render_laurent(r.numer())),
        wrap(render_laurent(r.denom()))
    )
}

/// Renders `a + π b`; merges coefficients power by power when both are Laurent.
pub fn render_qpi(x: &QPiScalar) -> String {
    let (a, b) = x.to_ab();
    match (a.laurent_terms(), b.laurent_terms()) {
        (Some(ta), Some(tb)) => {
            let mut by_pow: BTreeMap<i64, (BigRational, BigRational)> = BTreeMap::new();
            for (e, c) in ta {
                by_pow
                    .entry(e)
                    .or_insert((BigRational::zero(), BigRational::zero()))
                    .0 = c;
            }
            for (e, c) in tb {
                by_pow
                    .entry(e)
                    .or_insert((BigRational::zero(), BigRational::zero()))
                    .1 = c;
            }
            let mut out = Vec::new();
            for (e, (ca, cb)) in by_pow.iter().rev() {
                match (ca.is_zero(), cb.is_zero()) {
                    (true, true) => {}
                    (false, true) => {
                        out.push((ca.is_negative(), monomial_body(&ca.abs(), false, *e)))
                    }
                    (true, false) => {
                        out.push((cb.is_negative(), monomial_body(&cb.abs(), true, *e)))
                    }
                    (false, false) => {
                        let inner = join_terms(vec![
                            (ca.is_negative(), rational_str(&ca.abs())),
                            (cb.is_negative(), monomial_body(&cb.abs(), true, 0)),
                        ]);
                        let body = match q_factor(*e) {
                            Some(qf) => format!("({inner})*{qf}"),
                            None => format!("({inner})"),
                        };
                        out.push((false, body));
                    }
                }
            }
            join_terms(out)
        }
        _ => {
            let sa = render_ratfunc(&a);
            let sb = render_ratfunc(&b);
            match (a.is_zero(), b.is_zero()) {
                (_, true) => sa,
                (true, false) => format!("p*({sb})"),
                (false, false) => format!("{sa} + p*({sb})"),
            }
        }
    }
}

/// TeX rendering of a scalar (π as `\pi`).
pub fn render_qpi_tex(x: &QPiScalar) -> String {
    let s = render_qpi(x);
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            'p' => out.push_str("\\pi "),
            '*' => out.push(' '),
            '^' => {
                let mut exp = String::new();
                while let Some(&d) = chars.peek() {
                    if d == '-' || d.is_ascii_digit() {
                        exp.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push_str(&format!("^{{{exp}}}"));
            }
            _ => out.push(c),
        }
    }
    out.replace("\\pi  ", "\\pi ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_scalar, qpi_integer};

    #[test]
    fn renders_quantum_two() {
        assert_eq!(render_qpi(&qpi_integer(2, 1)), "p*q + q^-1");
    }

    #[test]
    fn renders_mixed_coefficients() {
        let x = parse_scalar("(1+p)*q - 3").unwrap();
        assert_eq!(render_qpi(&x), "(1 + p)*q - 3");
        assert_eq!(render_qpi(&QPiScalar::zero()), "0");
        assert_eq!(render_qpi(&parse_scalar("-p").unwrap()), "-p");
    }

    #[test]
    fn renders_rational_functions() {
        let x = parse_scalar("1/(1 - p*q^-2)").unwrap();
        let s = render_qpi(&x);
        assert_eq!(parse_scalar(&s).unwrap(), x);
    }
}
