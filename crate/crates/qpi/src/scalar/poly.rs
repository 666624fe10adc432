//! Laurent polynomials in `q` with integer coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// `sum_k coeffs[k] * q^(low + k)`.
///
/// Normalized: the zero polynomial has no coefficients; otherwise the first
/// and last coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Laurent::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Laurent::from_parts(0, vec![c])
    }

    pub fn from_i64(c: i64) -> Self {
        Laurent::constant(BigInt::from(c))
    }

    /// `c * q^e`.
    pub fn monomial(c: BigInt, e: i64) -> Self {
        Laurent::from_parts(e, vec![c])
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Laurent::monomial(BigInt::one(), e)
    }

    pub fn from_parts(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = Laurent { low, coeffs };
        p.normalize();
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Laurent::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Laurent::from_parts(lo, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low_degree(&self) -> i64 {
        self.low
    }

    /// Highest exponent present (0 for the zero polynomial).
    pub fn high_degree(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.low + self.coeffs.len() as i64 - 1
        }
    }

    /// Number of coefficient slots between lowest and highest exponent.
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.low {
            return BigInt::zero();
        }
        self.coeffs
            .get((e - self.low) as usize)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn trailing_coeff(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn shift(&self, by: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Laurent {
            low: self.low + by,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high_degree().max(other.high_degree());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - lo) as usize + k] += c;
        }
        Laurent::from_parts(lo, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if !cb.is_zero() {
                    coeffs[a + b] += ca * cb;
                }
            }
        }
        Laurent::from_parts(self.low + other.low, coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Laurent::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Exact division of every coefficient by `c`; `None` if some coefficient is not divisible.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            let (d, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(d);
        }
        Some(Laurent {
            low: self.low,
            coeffs: out,
        })
    }

    /// gcd of the coefficients (nonnegative; 0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `p(q) -> p(s * q^-1)` for `s = ±1`.
    pub fn invert_variable(&self, sign: i8) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let hi = self.high_degree();
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .enumerate()
            .map(|(k, c)| {
                let e = hi - k as i64;
                if sign < 0 && e.rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        Laurent { low: -hi, coeffs }
    }

    /// `p(q) -> p(q^d)` for `d >= 1`.
    pub fn dilate(&self, d: i64) -> Self {
        assert!(d >= 1);
        Laurent::from_terms(self.terms().map(|(e, c)| (e * d, c.clone())))
    }

    /// `p(q) -> p(-q)`.
    pub fn negate_variable(&self) -> Self {
        Laurent::from_terms(
            self.terms()
                .map(|(e, c)| (e, if e.rem_euclid(2) == 1 { -c } else { c.clone() })),
        )
    }

    /// Part with exponents strictly below zero.
    pub fn negative_part(&self) -> Self {
        Laurent::from_terms(
            self.terms()
                .filter(|(e, _)| *e < 0)
                .map(|(e, c)| (e, c.clone())),
        )
    }

    /// Dense coefficient vector of the ordinary polynomial `q^-low * p` (ascending).
    /// Polynomial division with remainder for polynomials with `low == 0`,
    /// returning `(quotient, remainder)` when the quotient is integral.
    fn div_rem_poly(a: &[BigInt], b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let mut r: Vec<BigInt> = a.to_vec();
        let db = b.len() - 1;
        let lb = &b[db];
        if r.len() < b.len() {
            return Some((Vec::new(), r));
        }
        let mut quot = vec![BigInt::zero(); r.len() - db];
        for k in (0..quot.len()).rev() {
            let top = &r[k + db];
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.iter().enumerate() {
                r[k + j] -= &qc * bc;
            }
            quot[k] = qc;
        }
        r.truncate(db);
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        Some((quot, r))
    }

    /// Exact division by `other`; `None` unless `other` divides `self` in `Z[q, q^-1]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (quot, rem) = Laurent::div_rem_poly(&self.coeffs, &other.coeffs)?;
        if !rem.is_empty() {
            return None;
        }
        Some(Laurent::from_parts(self.low - other.low, quot))
    }

    /// Pseudo-remainder of dense ascending polynomials.
    fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut r: Vec<BigInt> = a.to_vec();
        let db = b.len() - 1;
        let lb = b[db].clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let g = lr.gcd(&lb);
            let mr = &lb / &g;
            let mb = &lr / &g;
            for c in r.iter_mut() {
                *c *= &mr;
            }
            let off = dr - db;
            for (j, bc) in b.iter().enumerate() {
                r[off + j] -= &mb * bc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        r
    }

    fn primitive_dense(v: &[BigInt]) -> Vec<BigInt> {
        let mut g = BigInt::zero();
        for c in v {
            g = g.gcd(c);
        }
        if g.is_zero() || g.is_one() {
            return v.to_vec();
        }
        v.iter().map(|c| c / &g).collect()
    }

    /// Primitive gcd of the polynomial parts (ignoring powers of `q`), with positive leading coefficient.
    pub fn poly_gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.primitive_part_poly();
        }
        if b.is_zero() {
            return a.primitive_part_poly();
        }
        let mut x = Laurent::primitive_dense(&a.coeffs);
        let mut y = Laurent::primitive_dense(&b.coeffs);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() && y.len() > 1 {
            let r = Laurent::pseudo_rem(&x, &y);
            x = y;
            y = Laurent::primitive_dense(&r);
        }
        let g = if y.is_empty() { x } else { vec![BigInt::one()] };
        let mut g = Laurent::from_parts(0, Laurent::primitive_dense(&g));
        if g.leading_coeff().is_negative() {
            g = g.neg();
        }
        g
    }

    fn primitive_part_poly(&self) -> Self {
        let mut p = Laurent::from_parts(0, Laurent::primitive_dense(&self.coeffs));
        if p.leading_coeff().is_negative() {
            p = p.neg();
        }
        p
    }

    /// Evaluate at an integer point (exponents must be nonnegative or the point a unit).
    pub fn eval_i64(&self, x: i64) -> Option<num_rational::BigRational> {
        use num_rational::BigRational;
        if x == 0 && self.low < 0 {
            return None;
        }
        let xr = BigRational::from_integer(BigInt::from(x));
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            acc += num_traits::Pow::pow(&xr, e as i32) * BigRational::from_integer(c.clone());
        }
        Some(acc)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::scalar::render::render_laurent(self))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::scalar::render::render_laurent(self))
    }
}

impl PartialOrd for Laurent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Laurent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low
            .cmp(&other.low)
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[(1, 1), (-1, 1)]);
        let b = p(&[(1, 1), (-1, -1)]);
        assert_eq!(a.mul(&b), p(&[(2, 1), (-2, -1)]));
        assert_eq!(a.add(&b), p(&[(1, 2)]));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = p(&[(2, 1), (-2, -1)]);
        let b = p(&[(1, 1), (-1, -1)]);
        assert_eq!(a.div_exact(&b), Some(p(&[(1, 1), (-1, 1)])));
        assert_eq!(p(&[(0, 1)]).div_exact(&p(&[(0, 1), (1, 1)])), None);
    }

    #[test]
    fn gcd_of_products() {
        let f = p(&[(0, 1), (1, 1)]);
        let g = p(&[(0, -1), (1, 1)]);
        let h = p(&[(0, 2), (2, 3)]);
        let a = f.mul(&g).mul(&p(&[(0, 6)]));
        let b = f.mul(&h).shift(3);
        assert_eq!(Laurent::poly_gcd(&a, &b), f);
    }

    #[test]
    fn variable_inversion() {
        let a = p(&[(3, 2), (1, 1), (0, 5)]);
        assert_eq!(a.invert_variable(1), p(&[(-3, 2), (-1, 1), (0, 5)]));
        assert_eq!(a.invert_variable(-1), p(&[(-3, -2), (-1, -1), (0, 5)]));
        assert_eq!(a.invert_variable(-1).invert_variable(-1), a);
    }
}
