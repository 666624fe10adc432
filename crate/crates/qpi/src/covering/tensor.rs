use super::{Covering, Monomial, PBWElement, PbwError};
use crate::datum::Weight;
use crate::scalar::QPiScalar;
use std::collections::BTreeMap;

/// A finite sum in `U ⊗ U`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Monomial, Monomial), QPiScalar>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pure(a: &PBWElement, b: &PBWElement) -> Self {
        let mut t = Self::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                t.add_term(ma.clone(), mb.clone(), ca.mul(cb));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &QPiScalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: QPiScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((a, b)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &TensorElement, s: &QPiScalar) {
        for ((a, b), c) in &o.terms {
            self.add_term(a.clone(), b.clone(), c.mul(s));
        }
    }

    pub fn add(&self, o: &TensorElement) -> TensorElement {
        let mut r = self.clone();
        r.add_scaled(o, &QPiScalar::one());
        r
    }

    pub fn sub(&self, o: &TensorElement) -> TensorElement {
        let mut r = self.clone();
        r.add_scaled(o, &QPiScalar::from_i64(-1));
        r
    }

    pub fn scale(&self, s: &QPiScalar) -> TensorElement {
        let mut r = TensorElement::zero();
        r.add_scaled(self, s);
        r
    }

    pub fn filter(&self, keep: impl Fn(&Monomial, &Monomial) -> bool) -> TensorElement {
        TensorElement {
            terms: self
                .terms
                .iter()
                .filter(|((a, b), _)| keep(a, b))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops terms with an `E` or `F` height above `bound` on either leg.
    pub fn truncate(&self, bound: usize) -> TensorElement {
        self.filter(|a, b| {
            a.e_height() <= bound
                && a.f_height() <= bound
                && b.e_height() <= bound
                && b.f_height() <= bound
        })
    }

    pub fn render(&self, labels: &[i64]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|((a, b), c)| {
                format!(
                    "({})*{} ⊗ {}",
                    c.render(),
                    a.render(labels),
                    b.render(labels)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Covering {
    /// Product in `U ⊗ U` with `(a ⊗ b)(c ⊗ d) = π^{p(b)p(c)} ac ⊗ bd`.
    pub fn tensor_mul(
        &self,
        x: &TensorElement,
        y: &TensorElement,
    ) -> Result<TensorElement, PbwError> {
        let c = self.cartan();
        let mut out = TensorElement::zero();
        for ((a, b), cx) in x.terms() {
            let pb = b.parity(c);
            for ((cc, d), cy) in y.terms() {
                let sign = QPiScalar::pi_pow(pb * cc.parity(c));
                let left = self.mul_monomials(a, cc)?;
                let right = self.mul_monomials(b, d)?;
                let s = cx.mul(cy).mul(&sign);
                for (ma, ca) in left.terms() {
                    for (mb, cb) in right.terms() {
                        out.add_term(ma.clone(), mb.clone(), s.mul(ca).mul(cb));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product restricted to pairs of terms whose leg degrees satisfy `keep`; degrees are additive,
    /// so dropped pairs never contribute to kept terms.
    pub fn tensor_mul_filtered(
        &self,
        x: &TensorElement,
        y: &TensorElement,
        keep: impl Fn(&Weight, &Weight) -> bool,
    ) -> Result<TensorElement, PbwError> {
        let c = self.cartan();
        let n = self.rank();
        let mut out = TensorElement::zero();
        for ((a, b), cx) in x.terms() {
            let (da, db) = (a.degree(n), b.degree(n));
            let pb = b.parity(c);
            for ((cc, d), cy) in y.terms() {
                if !keep(&da.add(&cc.degree(n)), &db.add(&d.degree(n))) {
                    continue;
                }
                let sign = QPiScalar::pi_pow(pb * cc.parity(c));
                let left = self.mul_monomials(a, cc)?;
                let right = self.mul_monomials(b, d)?;
                let s = cx.mul(cy).mul(&sign);
                for (ma, ca) in left.terms() {
                    for (mb, cb) in right.terms() {
                        out.add_term(ma.clone(), mb.clone(), s.mul(ca).mul(cb));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Truncated product: terms beyond `bound` on either leg are dropped after each step.
    pub fn tensor_mul_truncated(
        &self,
        x: &TensorElement,
        y: &TensorElement,
        bound: usize,
    ) -> Result<TensorElement, PbwError> {
        Ok(self.tensor_mul(x, y)?.truncate(bound))
    }

    fn delta_generator_e(&self, i: usize) -> TensorElement {
        let mut t = TensorElement::pure(&self.e(i), &self.one());
        t.add_scaled(
            &TensorElement::pure(&self.jk_tilde(i, 1), &self.e(i)),
            &QPiScalar::one(),
        );
        t
    }

    fn delta_generator_f(&self, i: usize) -> TensorElement {
        let mut t = TensorElement::pure(&self.f(i), &self.ktilde(i, -1));
        t.add_scaled(
            &TensorElement::pure(&self.one(), &self.f(i)),
            &QPiScalar::one(),
        );
        t
    }

    /// `Δ(x)` with terms of `E`/`F` height above `bound` on either leg dropped.
    pub fn coproduct(&self, x: &PBWElement, bound: usize) -> Result<TensorElement, PbwError> {
        let mut out = TensorElement::zero();
        for (m, c) in x.terms() {
            let jk = self.jk(&m.j.iter().map(|&v| v as i64).collect::<Vec<_>>(), &m.k);
            let mut acc = TensorElement::pure(&self.one(), &self.one());
            for &i in &m.f.0 {
                acc = self.tensor_mul_truncated(&acc, &self.delta_generator_f(i), bound)?;
            }
            acc = self.tensor_mul_truncated(&acc, &TensorElement::pure(&jk, &jk), bound)?;
            for &i in &m.e.0 {
                acc = self.tensor_mul_truncated(&acc, &self.delta_generator_e(i), bound)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }
}
