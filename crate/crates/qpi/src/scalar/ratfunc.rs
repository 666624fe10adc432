//! Rational functions in `q` over the rationals.

use super::poly::Laurent;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// `num / den` with integer-coefficient Laurent polynomials.
///
/// Canonical form: `den` is an ordinary polynomial with nonzero constant
/// term and positive leading coefficient, `num` and `den` are coprime over
/// `Q[q]`, and the integer contents of `num` and `den` are coprime.
/// Structural equality is therefore value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Laurent,
    den: Laurent,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Laurent::zero(),
            den: Laurent::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: Laurent::one(),
            den: Laurent::one(),
        }
    }

    pub fn from_laurent(p: Laurent) -> Self {
        RatFunc {
            num: p,
            den: Laurent::one(),
        }
    }

    pub fn from_i64(c: i64) -> Self {
        RatFunc::from_laurent(Laurent::from_i64(c))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        RatFunc::new(
            Laurent::constant(r.numer().clone()),
            Laurent::constant(r.denom().clone()),
        )
    }

    pub fn q_pow(e: i64) -> Self {
        RatFunc::from_laurent(Laurent::q_pow(e))
    }

    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let shift = den.low_degree();
        let mut num = num.shift(-shift);
        let mut den = den.shift(-shift);
        if !den.is_constant() {
            let g = Laurent::poly_gcd(&num, &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        let mut c = if c.is_zero() { BigInt::one() } else { c };
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c).expect("content divides");
            den = den.div_scalar_exact(&c).expect("content divides");
        }
        RatFunc { num, den }
    }

    pub fn numer(&self) -> &Laurent {
        &self.num
    }

    pub fn denom(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True iff the value lies in `Z[q, q^-1]`.
    pub fn is_integral_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True iff the value lies in `Q[q, q^-1]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_constant()
    }

    /// The value as an integral Laurent polynomial, if it is one.
    pub fn as_laurent(&self) -> Option<&Laurent> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_laurent(self.num.add(&other.num));
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_laurent(self.num.mul(&other.num));
        }
        if self.num.is_monomial() && self.num.trailing_coeff().abs().is_one() && self.den.is_one() {
            return RatFunc {
                num: other.num.mul(&self.num),
                den: other.den.clone(),
            };
        }
        if other.num.is_monomial()
            && other.num.trailing_coeff().abs().is_one()
            && other.den.is_one()
        {
            return RatFunc {
                num: self.num.mul(&other.num),
                den: self.den.clone(),
            };
        }
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Self {
        if n >= 0 {
            RatFunc::new(self.num.pow(n as u32), self.den.pow(n as u32))
        } else {
            self.inv().expect("negative power of zero").pow(-n)
        }
    }

    /// Substitution `q -> s * q^-1` with `s = ±1`.
    pub fn invert_variable(&self, sign: i8) -> Self {
        RatFunc::new(
            self.num.invert_variable(sign),
            self.den.invert_variable(sign),
        )
    }

    /// Substitution `q -> q^d`.
    pub fn dilate(&self, d: i64) -> Self {
        if d == 1 {
            return self.clone();
        }
        RatFunc::new(self.num.dilate(d), self.den.dilate(d))
    }

    /// Substitution `q -> -q`.
    pub fn negate_variable(&self) -> Self {
        RatFunc::new(self.num.negate_variable(), self.den.negate_variable())
    }

    /// Rational-coefficient Laurent terms when the denominator is constant.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if !self.den.is_constant() {
            return None;
        }
        let d = self.den.trailing_coeff();
        Some(
            self.num
                .terms()
                .map(|(e, c)| (e, BigRational::new(c.clone(), d.clone())))
                .collect(),
        )
    }

    /// Value at a rational point, when defined.
    pub fn eval_i64(&self, x: i64) -> Option<BigRational> {
        let n = self.num.eval_i64(x)?;
        let d = self.den.eval_i64(x)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::render::render_ratfunc(self))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::render::render_ratfunc(self))
    }
}
