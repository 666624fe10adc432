//! Elements of `Q(q)[π]/(π²−1)` stored through their two π-specializations.

use super::poly::Laurent;
use super::ratfunc::RatFunc;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("scalar is not invertible: its {0} component vanishes")]
    NonInvertible(&'static str),
    #[error("binomial with negative upper argument {0} is not supported")]
    NegativeBinomial(i64),
    #[error("cannot parse scalar expression: {0}")]
    Parse(String),
}

/// `plus` is the value at π = 1, `minus` the value at π = −1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QPiScalar {
    pub plus: RatFunc,
    pub minus: RatFunc,
}

impl QPiScalar {
    pub fn new(plus: RatFunc, minus: RatFunc) -> Self {
        QPiScalar { plus, minus }
    }

    pub fn zero() -> Self {
        QPiScalar::new(RatFunc::zero(), RatFunc::zero())
    }

    pub fn one() -> Self {
        QPiScalar::new(RatFunc::one(), RatFunc::one())
    }

    pub fn from_i64(c: i64) -> Self {
        QPiScalar::new(RatFunc::from_i64(c), RatFunc::from_i64(c))
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        QPiScalar::new(r.clone(), r)
    }

    /// π.
    pub fn pi() -> Self {
        QPiScalar::new(RatFunc::one(), RatFunc::from_i64(-1))
    }

    /// π^e.
    pub fn pi_pow(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            QPiScalar::one()
        } else {
            QPiScalar::pi()
        }
    }

    /// q^e.
    pub fn q_pow(e: i64) -> Self {
        QPiScalar::from_ratfunc(RatFunc::q_pow(e))
    }

    /// π^a q^e.
    pub fn pi_q_pow(a: i64, e: i64) -> Self {
        let qe = RatFunc::q_pow(e);
        if a.rem_euclid(2) == 0 {
            QPiScalar::new(qe.clone(), qe)
        } else {
            QPiScalar::new(qe.clone(), qe.neg())
        }
    }

    /// `a + π b` from its two coordinates.
    pub fn from_ab(a: &RatFunc, b: &RatFunc) -> Self {
        QPiScalar::new(a.add(b), a.sub(b))
    }

    /// The coordinates `(a, b)` with `x = a + π b`.
    pub fn to_ab(&self) -> (RatFunc, RatFunc) {
        let half = RatFunc::from_rational(&BigRational::new(1.into(), 2.into()));
        (
            self.plus.add(&self.minus).mul(&half),
            self.plus.sub(&self.minus).mul(&half),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.plus.is_one() && self.minus.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        QPiScalar::new(self.plus.add(&o.plus), self.minus.add(&o.minus))
    }

    pub fn sub(&self, o: &Self) -> Self {
        QPiScalar::new(self.plus.sub(&o.plus), self.minus.sub(&o.minus))
    }

    pub fn mul(&self, o: &Self) -> Self {
        QPiScalar::new(self.plus.mul(&o.plus), self.minus.mul(&o.minus))
    }

    pub fn neg(&self) -> Self {
        QPiScalar::new(self.plus.neg(), self.minus.neg())
    }

    pub fn invert(&self) -> Result<Self, ScalarError> {
        let p = self.plus.inv().ok_or(ScalarError::NonInvertible("π=+1"))?;
        let m = self.minus.inv().ok_or(ScalarError::NonInvertible("π=-1"))?;
        Ok(QPiScalar::new(p, m))
    }

    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&o.invert()?))
    }

    pub fn pow(&self, n: i64) -> Self {
        if n >= 0 {
            QPiScalar::new(self.plus.pow(n), self.minus.pow(n))
        } else {
            self.invert()
                .expect("negative power of a zero divisor")
                .pow(-n)
        }
    }

    /// The ring involution `q ↦ π q⁻¹`, `π ↦ π`.
    pub fn bar(&self) -> Self {
        QPiScalar::new(self.plus.invert_variable(1), self.minus.invert_variable(-1))
    }

    /// Value at π = `sign`.
    pub fn specialize(&self, sign: i8) -> &RatFunc {
        if sign >= 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// Membership in `Z[q,q⁻¹][π]/(π²−1)`: both `a` and `b` in `a + πb` are
    /// integral Laurent polynomials.
    pub fn in_integral_form(&self) -> bool {
        let (Some(p), Some(m)) = (self.plus.as_laurent(), self.minus.as_laurent()) else {
            return false;
        };
        let diff = p.sub(m);
        let ok = diff.terms().all(|(_, c)| c.is_even());
        ok
    }

    /// Membership in `q⁻¹ Z[q⁻¹][π]/(π²−1)`.
    pub fn in_q_inverse_integral(&self) -> bool {
        self.in_integral_form()
            && [&self.plus, &self.minus].iter().all(|c| {
                let l = c.as_laurent().unwrap();
                l.is_zero() || l.high_degree() < 0
            })
    }

    /// Componentwise part of strictly negative q-degree (requires Laurent components).
    pub fn negative_part(&self) -> Option<Self> {
        let p = self.plus.as_laurent()?.negative_part();
        let m = self.minus.as_laurent()?.negative_part();
        Some(QPiScalar::new(
            RatFunc::from_laurent(p),
            RatFunc::from_laurent(m),
        ))
    }

    /// Substitutes q ↦ q^d and π ↦ π^d.
    pub fn dilate(&self, d: i64) -> Self {
        let minus = if d % 2 == 0 {
            self.plus.dilate(d)
        } else {
            self.minus.dilate(d)
        };
        QPiScalar::new(self.plus.dilate(d), minus)
    }

    pub fn from_laurent_pair(plus: Laurent, minus: Laurent) -> Self {
        QPiScalar::new(RatFunc::from_laurent(plus), RatFunc::from_laurent(minus))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        QPiScalar::from_ratfunc(RatFunc::from_laurent(Laurent::constant(c)))
    }

    /// Whether the a/b coordinates are rational constants.
    pub fn is_constant(&self) -> bool {
        [&self.plus, &self.minus]
            .iter()
            .all(|c| c.is_laurent() && c.numer().is_constant())
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    pub fn zero_ref() -> &'static QPiScalar {
        static ZERO: std::sync::OnceLock<QPiScalar> = std::sync::OnceLock::new();
        ZERO.get_or_init(QPiScalar::zero)
    }

    /// Sum of an iterator of scalars.
    pub fn sum<'a, I: IntoIterator<Item = &'a QPiScalar>>(it: I) -> Self {
        it.into_iter().fold(QPiScalar::zero(), |acc, x| acc.add(x))
    }

    /// True when both components are integral Laurent polynomials (weaker than
    /// [`in_integral_form`](Self::in_integral_form)).
    pub fn components_integral(&self) -> bool {
        self.plus.is_integral_laurent() && self.minus.is_integral_laurent()
    }

    pub fn render(&self) -> String {
        super::render::render_qpi(self)
    }
}

impl fmt::Debug for QPiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for QPiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Add for &QPiScalar {
    type Output = QPiScalar;
    fn add(self, o: &QPiScalar) -> QPiScalar {
        QPiScalar::add(self, o)
    }
}

impl Sub for &QPiScalar {
    type Output = QPiScalar;
    fn sub(self, o: &QPiScalar) -> QPiScalar {
        QPiScalar::sub(self, o)
    }
}

impl Mul for &QPiScalar {
    type Output = QPiScalar;
    fn mul(self, o: &QPiScalar) -> QPiScalar {
        QPiScalar::mul(self, o)
    }
}

impl Neg for &QPiScalar {
    type Output = QPiScalar;
    fn neg(self) -> QPiScalar {
        QPiScalar::neg(self)
    }
}
