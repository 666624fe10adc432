//! The free algebra `'f`, its bilinear form and the quotient `f` by the radical.

mod element;

pub use element::{twist, FreeElement, Word};

use crate::datum::{Datum, SuperCartanDatum, Weight};
use crate::linalg::{self, IncrementalBasis, LinalgError, Matrix};
use crate::scalar::{qpi_binomial, qpi_factorial, QPiScalar};
use parking_lot::Mutex;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeError {
    #[error("Serre element needs distinct indices, got ({0},{0})")]
    SameIndex(usize),
    #[error("weight {weight} has height {ht} above the bound {bound}")]
    HeightExceeded { weight: Weight, ht: i64, bound: i64 },
    #[error("weight {0} is not in N[I]")]
    NegativeWeight(Weight),
    #[error("weight {0}: {1}")]
    Linalg(Weight, LinalgError),
    #[error("element is not homogeneous")]
    Inhomogeneous,
}

/// Default height bound: 8 in rank one, 6 otherwise.
pub fn default_height(rank: usize) -> i64 {
    if rank == 1 {
        8
    } else {
        6
    }
}

/// Basis of `f_ν` by pivot words, with Gram data and the radical of `'f_ν`.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    pub weight: Weight,
    pub words: Vec<Word>,
    /// Gram matrix on all words of weight `ν`.
    pub gram: Matrix,
    pub pivots: Vec<Word>,
    pub pivot_gram: Matrix,
    pub pivot_gram_inv: Matrix,
    pub radical: Vec<FreeElement>,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of the dual basis vector `b*_k` in the pivot basis.
    pub fn dual_coords(&self, k: usize) -> Vec<QPiScalar> {
        self.pivot_gram_inv
            .iter()
            .map(|row| row[k].clone())
            .collect()
    }

    pub fn lift(&self, coords: &[QPiScalar]) -> FreeElement {
        let mut e = FreeElement::zero();
        for (w, c) in self.pivots.iter().zip(coords) {
            e.add_term(w.clone(), c.clone());
        }
        e
    }

    pub fn to_json(&self, labels: &[i64]) -> Value {
        let render_m = |m: &Matrix| -> Value {
            Value::Array(
                m.iter()
                    .map(|r| Value::Array(r.iter().map(|x| Value::String(x.render())).collect()))
                    .collect(),
            )
        };
        json!({
            "weight": self.weight.0,
            "word_count": self.words.len(),
            "dim": self.dim(),
            "pivots": self.pivots.iter().map(|w| w.render(labels)).collect::<Vec<_>>(),
            "gram": render_m(&self.pivot_gram),
            "radical": self.radical.iter().map(|e| {
                Value::Object(e.terms().map(|(w, c)| (w.render(labels), Value::String(c.render()))).collect())
            }).collect::<Vec<_>>(),
        })
    }
}

/// Shared context: the datum, height bound and memoized forms and bases.
pub struct FreeHalf {
    datum: Datum,
    height: i64,
    norms: Vec<QPiScalar>,
    forms: Mutex<HashMap<(Word, Word), QPiScalar>>,
    bases: Mutex<HashMap<Weight, Arc<QuotientBasis>>>,
    reductions: Mutex<HashMap<Word, Arc<Vec<QPiScalar>>>>,
}

impl FreeHalf {
    pub fn new(datum: Datum, height: i64) -> Self {
        let norms = (0..datum.rank())
            .map(|i| datum.cartan.theta_norm(i))
            .collect();
        FreeHalf {
            datum,
            height,
            norms,
            forms: Mutex::new(HashMap::new()),
            bases: Mutex::new(HashMap::new()),
            reductions: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_default_height(datum: Datum) -> Self {
        let h = default_height(datum.rank());
        Self::new(datum, h)
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn cartan(&self) -> &SuperCartanDatum {
        &self.datum.cartan
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn labels(&self) -> &[i64] {
        &self.datum.cartan.labels
    }

    /// `(θ_i, θ_i)`.
    pub fn theta_norm(&self, i: usize) -> &QPiScalar {
        &self.norms[i]
    }

    fn same_weight(&self, w: &Word, v: &Word) -> bool {
        if w.len() != v.len() {
            return false;
        }
        let mut c = vec![0i64; self.rank()];
        for &i in &w.0 {
            c[i] += 1;
        }
        for &i in &v.0 {
            c[i] -= 1;
        }
        c.iter().all(|&x| x == 0)
    }

    /// `(w, v)` on words, by peeling the first letter of `w` through the adjunction.
    pub fn form_words(&self, w: &Word, v: &Word) -> QPiScalar {
        if !self.same_weight(w, v) {
            return QPiScalar::zero();
        }
        if w.is_empty() {
            return QPiScalar::one();
        }
        let key = (w.clone(), v.clone());
        if let Some(x) = self.forms.lock().get(&key) {
            return x.clone();
        }
        let i = w.0[0];
        let rest = Word(w.0[1..].to_vec());
        let c = self.cartan();
        let mut s = QPiScalar::zero();
        for (k, &l) in v.0.iter().enumerate() {
            if l == i {
                let inner = self.form_words(&rest, &v.without(k));
                if !inner.is_zero() {
                    s = s.add(&twist(c, &v.0[..k], i).mul(&inner));
                }
            }
        }
        let s = s.mul(&self.norms[i]);
        self.forms.lock().insert(key, s.clone());
        s
    }

    /// Bilinear extension of the form.
    pub fn form(&self, x: &FreeElement, y: &FreeElement) -> QPiScalar {
        let mut s = QPiScalar::zero();
        for (w, a) in x.terms() {
            for (v, b) in y.terms() {
                let f = self.form_words(w, v);
                if !f.is_zero() {
                    s = s.add(&a.mul(b).mul(&f));
                }
            }
        }
        s
    }

    fn check_weight(&self, nu: &Weight) -> Result<(), FreeError> {
        if !nu.is_nonnegative() {
            return Err(FreeError::NegativeWeight(nu.clone()));
        }
        if nu.ht() > self.height {
            return Err(FreeError::HeightExceeded {
                weight: nu.clone(),
                ht: nu.ht(),
                bound: self.height,
            });
        }
        Ok(())
    }

    /// Pivot basis, Gram data and radical of `f_ν`.
    pub fn quotient_basis(&self, nu: &Weight) -> Result<Arc<QuotientBasis>, FreeError> {
        if let Some(b) = self.bases.lock().get(nu) {
            return Ok(b.clone());
        }
        self.check_weight(nu)?;
        let words = Word::all_of_weight(nu);
        let gram: Matrix = words
            .iter()
            .map(|w| words.iter().map(|v| self.form_words(w, v)).collect())
            .collect();
        let mut inc = IncrementalBasis::new();
        let mut piv_idx = Vec::new();
        for (k, row) in gram.iter().enumerate() {
            if inc
                .try_add(row)
                .map_err(|e| FreeError::Linalg(nu.clone(), e))?
            {
                piv_idx.push(k);
            }
        }
        let pivot_gram: Matrix = piv_idx
            .iter()
            .map(|&a| piv_idx.iter().map(|&b| gram[a][b].clone()).collect())
            .collect();
        let pivot_gram_inv =
            linalg::inverse(&pivot_gram).map_err(|e| FreeError::Linalg(nu.clone(), e))?;
        let radical = linalg::nullspace(&gram)
            .map_err(|e| FreeError::Linalg(nu.clone(), e))?
            .into_iter()
            .map(|v| {
                let mut e = FreeElement::zero();
                for (w, c) in words.iter().zip(v) {
                    e.add_term(w.clone(), c);
                }
                e
            })
            .collect::<Vec<_>>();
        if radical.len() + piv_idx.len() != words.len() {
            return Err(FreeError::Linalg(
                nu.clone(),
                LinalgError::DimensionMismatch,
            ));
        }
        let basis = Arc::new(QuotientBasis {
            weight: nu.clone(),
            pivots: piv_idx.iter().map(|&k| words[k].clone()).collect(),
            words,
            gram,
            pivot_gram,
            pivot_gram_inv,
            radical,
        });
        self.bases.lock().insert(nu.clone(), basis.clone());
        Ok(basis)
    }

    pub fn dim(&self, nu: &Weight) -> Result<usize, FreeError> {
        if !nu.is_nonnegative() {
            return Ok(0);
        }
        Ok(self.quotient_basis(nu)?.dim())
    }

    /// Dimensions of `f_ν` at `π = 1` and `π = −1`: ranks of the specialized Gram matrix.
    pub fn specialized_dims(&self, nu: &Weight) -> Result<(usize, usize), FreeError> {
        if !nu.is_nonnegative() {
            return Ok((0, 0));
        }
        let b = self.quotient_basis(nu)?;
        let at = |s: i8| -> Result<usize, FreeError> {
            let g: Matrix = b
                .gram
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| QPiScalar::from_ratfunc(x.specialize(s).clone()))
                        .collect()
                })
                .collect();
            linalg::rank(&g).map_err(|e| FreeError::Linalg(nu.clone(), e))
        };
        Ok((at(1)?, at(-1)?))
    }

    /// Coordinates of the image of a word in the pivot basis of its weight.
    pub fn reduce_word(&self, w: &Word) -> Result<Arc<Vec<QPiScalar>>, FreeError> {
        if let Some(v) = self.reductions.lock().get(w) {
            return Ok(v.clone());
        }
        let nu = w.weight(self.rank());
        let b = self.quotient_basis(&nu)?;
        let coords = if let Some(k) = b.pivots.iter().position(|p| p == w) {
            let mut v = vec![QPiScalar::zero(); b.dim()];
            v[k] = QPiScalar::one();
            v
        } else {
            let rhs: Vec<QPiScalar> = b.pivots.iter().map(|p| self.form_words(p, w)).collect();
            linalg::mat_vec(&b.pivot_gram_inv, &rhs)
        };
        let coords = Arc::new(coords);
        self.reductions.lock().insert(w.clone(), coords.clone());
        Ok(coords)
    }

    /// Coordinates of a homogeneous element of weight `ν` in the pivot basis of `f_ν`.
    pub fn reduce(&self, x: &FreeElement, nu: &Weight) -> Result<Vec<QPiScalar>, FreeError> {
        let dim = self.dim(nu)?;
        let mut out = vec![QPiScalar::zero(); dim];
        for (w, c) in x.terms() {
            if w.weight(self.rank()) != *nu {
                return Err(FreeError::Inhomogeneous);
            }
            let r = self.reduce_word(w)?;
            for (o, v) in out.iter_mut().zip(r.iter()) {
                if !v.is_zero() {
                    *o = o.add(&c.mul(v));
                }
            }
        }
        Ok(out)
    }

    /// Whether a homogeneous element lies in the radical.
    pub fn in_radical(&self, x: &FreeElement) -> Result<bool, FreeError> {
        let Some(nu) = x.weight(self.rank()) else {
            return if x.is_zero() {
                Ok(true)
            } else {
                Err(FreeError::Inhomogeneous)
            };
        };
        Ok(self.reduce(x, &nu)?.iter().all(QPiScalar::is_zero))
    }

    /// `F_ij(θ_i, θ_j)`.
    pub fn serre_element(&self, i: usize, j: usize) -> Result<FreeElement, FreeError> {
        if i == j {
            return Err(FreeError::SameIndex(i));
        }
        let c = self.cartan();
        let m = 1 - c.a(i, j);
        let mut e = FreeElement::zero();
        for n in 0..=m {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let coef = QPiScalar::from_i64(sign)
                .mul(&c.pi_q_i(i, n * c.p(j) + n * (n - 1) / 2, 0))
                .mul(&qpi_binomial(m, n, c.d(i)).expect("nonnegative binomial"));
            let mut w = vec![i; n as usize];
            w.push(j);
            w.extend(std::iter::repeat_n(i, (m - n) as usize));
            e.add_term(Word(w), coef);
        }
        Ok(e)
    }

    /// `θ_i^{(m)} = θ_i^m / [m]_i^!`.
    pub fn divided_power(&self, i: usize, m: usize) -> FreeElement {
        let f = qpi_factorial(m as i64, self.cartan().d(i));
        FreeElement::monomial(Word::repeat(i, m), f.invert().expect("nonzero factorial"))
    }

    /// `ᵢr` on quotient coordinates of weight `ν`, landing in weight `ν − i`.
    pub fn i_r_coords(
        &self,
        i: usize,
        nu: &Weight,
        coords: &[QPiScalar],
    ) -> Result<Vec<QPiScalar>, FreeError> {
        let b = self.quotient_basis(nu)?;
        let x = b.lift(coords).i_r(self.cartan(), i);
        self.reduce(&x, &nu.add_simple(i, -1))
    }

    /// `r_i` on quotient coordinates.
    pub fn r_i_coords(
        &self,
        i: usize,
        nu: &Weight,
        coords: &[QPiScalar],
    ) -> Result<Vec<QPiScalar>, FreeError> {
        let b = self.quotient_basis(nu)?;
        let x = b.lift(coords).r_i(self.cartan(), i);
        self.reduce(&x, &nu.add_simple(i, -1))
    }

    /// Product of pivot words `b_a ∈ f_μ` and `b_b ∈ f_ν` in the pivot basis of `f_{μ+ν}`.
    pub fn mul_pivots(
        &self,
        mu: &Weight,
        a: usize,
        nu: &Weight,
        b: usize,
    ) -> Result<Arc<Vec<QPiScalar>>, FreeError> {
        let wa = self.quotient_basis(mu)?.pivots[a].clone();
        let wb = self.quotient_basis(nu)?.pivots[b].clone();
        self.reduce_word(&wa.concat(&wb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::scalar::parse_scalar;

    fn s(x: &str) -> QPiScalar {
        parse_scalar(x).unwrap()
    }

    #[test]
    fn derivations_on_small_words() {
        let d = builtin("B(0,2)").unwrap();
        let c = &d.cartan;
        let x = FreeElement::from_word(Word(vec![0, 0]));
        assert_eq!(
            x.i_r(c, 0),
            FreeElement::monomial(Word::letter(0), s("1 + p*q^2"))
        );
        let y = FreeElement::from_word(Word(vec![1, 0]));
        assert_eq!(y.r_i(c, 0), FreeElement::theta(1));
        assert_eq!(FreeElement::theta(1).i_r(c, 1), FreeElement::one());
        assert!(FreeElement::theta(1).i_r(c, 0).is_zero());
    }

    #[test]
    fn small_form_values() {
        let fh = FreeHalf::new(builtin("rank1").unwrap(), 4);
        let t = fh.theta_norm(0).clone();
        assert_eq!(t, s("1/(1 - p*q^-2)"));
        assert_eq!(
            fh.form_words(&Word::empty(), &Word::empty()),
            QPiScalar::one()
        );
        assert_eq!(
            fh.form_words(&Word(vec![0, 0]), &Word(vec![0, 0])),
            s("1 + p*q^2").mul(&t).mul(&t)
        );
    }

    #[test]
    fn serre_in_radical_b02() {
        let fh = FreeHalf::new(builtin("B(0,2)").unwrap(), 4);
        let e = fh.serre_element(0, 1).unwrap();
        assert_eq!(e.weight(2), Some(Weight(vec![3, 1])));
        assert!(fh.in_radical(&e).unwrap());
        let b = fh.quotient_basis(&Weight(vec![3, 1])).unwrap();
        assert_eq!(b.radical.len(), 1);
        assert_eq!(b.dim(), 3);
        assert!(fh.in_radical(&fh.serre_element(1, 0).unwrap()).unwrap());
        assert_eq!(fh.serre_element(0, 0), Err(FreeError::SameIndex(0)));
    }

    #[test]
    fn height_bound_enforced() {
        let fh = FreeHalf::new(builtin("rank1").unwrap(), 2);
        assert!(matches!(
            fh.quotient_basis(&Weight(vec![3])),
            Err(FreeError::HeightExceeded { .. })
        ));
    }

    #[test]
    fn word_rendering() {
        let labels = [1, 2];
        let w = Word(vec![0, 1, 0]);
        assert_eq!(w.render(&labels), "t1.t2.t1");
        assert_eq!(Word::parse("t1.t2.t1", &labels), Some(w));
    }
}
