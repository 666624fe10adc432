//! Parser for scalar expressions in `q` and `p` (= π).
//!
//! Grammar: sums and differences of products and quotients of powers;
//! atoms are integers, `q`, `p` and parenthesized expressions.

use super::qpi::{QPiScalar, ScalarError};
use num_bigint::BigInt;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ScalarError> {
        Err(ScalarError::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        )))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QPiScalar, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPiScalar, ScalarError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<QPiScalar, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPiScalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_int()?;
            if e < 0 {
                return Ok(base.invert()?.pow(-e));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64, ScalarError> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.signed_int()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                return Ok(v);
            }
            _ => {}
        }
        let digits = self.digits();
        if digits.is_empty() {
            return self.err("expected integer exponent");
        }
        let v: i64 = digits
            .parse()
            .map_err(|_| ScalarError::Parse("exponent overflow".into()))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<QPiScalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(QPiScalar::q_pow(1))
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(QPiScalar::pi())
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let v: BigInt = d.parse().map_err(|_| ScalarError::Parse(d.clone()))?;
                Ok(QPiScalar::from_bigint(v))
            }
            _ => self.err("unexpected token"),
        }
    }
}

/// Parses an expression such as `p*q + q^-1` or `1/(1 - p*q^-2)`.
pub fn parse_scalar(src: &str) -> Result<QPiScalar, ScalarError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_forms() {
        assert_eq!(parse_scalar("q").unwrap(), QPiScalar::q_pow(1));
        assert_eq!(parse_scalar("p*p").unwrap(), QPiScalar::one());
        assert_eq!(parse_scalar("q^-2").unwrap(), QPiScalar::q_pow(-2));
        assert_eq!(parse_scalar("q^(-2)").unwrap(), QPiScalar::q_pow(-2));
        assert!(parse_scalar("1/(1+p)").is_err());
        assert!(parse_scalar("q +").is_err());
    }
}
