//! The covering quantum group `U` in PBW normal form `F · J K · E`.

mod normal;
mod tensor;

pub use normal::{normal_form, Generator};
pub use tensor::TensorElement;

use crate::datum::{Datum, SuperCartanDatum, Weight};
use crate::free_half::{FreeElement, FreeError, FreeHalf, Word};
use crate::scalar::QPiScalar;
use parking_lot::Mutex;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PbwError {
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    #[error(transparent)]
    Free(FreeError),
}

impl From<FreeError> for PbwError {
    fn from(e: FreeError) -> Self {
        match e {
            FreeError::HeightExceeded { .. } => PbwError::TruncationOverflow(e.to_string()),
            other => PbwError::Free(other),
        }
    }
}

/// `F_f J_j K_k E_e` with `f`, `e` pivot words and `j` reduced mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub f: Word,
    pub j: Vec<u8>,
    pub k: Vec<i64>,
    pub e: Word,
}

impl Monomial {
    pub fn one(y_rank: usize) -> Self {
        Monomial {
            f: Word::empty(),
            j: vec![0; y_rank],
            k: vec![0; y_rank],
            e: Word::empty(),
        }
    }

    pub fn is_cartan(&self) -> bool {
        self.f.is_empty() && self.e.is_empty()
    }

    /// Parity `p(f) + p(e)`.
    pub fn parity(&self, c: &SuperCartanDatum) -> i64 {
        self.f
            .0
            .iter()
            .chain(&self.e.0)
            .map(|&i| c.p(i))
            .sum::<i64>()
            .rem_euclid(2)
    }

    pub fn f_height(&self) -> usize {
        self.f.len()
    }

    pub fn e_height(&self) -> usize {
        self.e.len()
    }

    /// `E`-weight minus `F`-weight, in `Z[I]`.
    pub fn degree(&self, n: usize) -> Weight {
        self.e.weight(n).sub(&self.f.weight(n))
    }

    /// Renders as `F[1,1].J[1].K[-1].E[1]`; the unit is `1`.
    pub fn render(&self, labels: &[i64]) -> String {
        let mut parts = Vec::new();
        let word = |w: &Word| {
            w.0.iter()
                .map(|&i| labels[i].to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let vec = |v: &[i64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if !self.f.is_empty() {
            parts.push(format!("F[{}]", word(&self.f)));
        }
        if self.j.iter().any(|&x| x != 0) {
            parts.push(format!(
                "J[{}]",
                vec(&self.j.iter().map(|&x| x as i64).collect::<Vec<_>>())
            ));
        }
        if self.k.iter().any(|&x| x != 0) {
            parts.push(format!("K[{}]", vec(&self.k)));
        }
        if !self.e.is_empty() {
            parts.push(format!("E[{}]", word(&self.e)));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(".")
        }
    }
}

/// A finite sum of PBW monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PBWElement {
    terms: BTreeMap<Monomial, QPiScalar>,
}

impl PBWElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: QPiScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QPiScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> QPiScalar {
        self.terms.get(m).cloned().unwrap_or_else(QPiScalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: QPiScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, o: &PBWElement, s: &QPiScalar) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.mul(s));
        }
    }

    pub fn add(&self, o: &PBWElement) -> PBWElement {
        let mut r = self.clone();
        r.add_scaled(o, &QPiScalar::one());
        r
    }

    pub fn sub(&self, o: &PBWElement) -> PBWElement {
        let mut r = self.clone();
        r.add_scaled(o, &QPiScalar::from_i64(-1));
        r
    }

    pub fn scale(&self, s: &QPiScalar) -> PBWElement {
        let mut r = PBWElement::zero();
        r.add_scaled(self, s);
        r
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> PBWElement {
        PBWElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn render(&self, labels: &[i64]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.render();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let coef = if body.contains(' ') {
                format!("({body})")
            } else {
                body
            };
            let mono = m.render(labels);
            let term = match (coef.as_str(), mono.as_str()) {
                ("1", _) => mono.clone(),
                (_, "1") => coef.clone(),
                _ => format!("{coef}*{mono}"),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Debug for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<i64> = (1..=16).collect();
        write!(f, "{}", self.render(&labels))
    }
}

/// Multiplication context: the free half for reductions plus a straightening cache.
pub struct Covering {
    fh: Arc<FreeHalf>,
    straighten: Mutex<HashMap<(Word, Word), Arc<PBWElement>>>,
}

impl Covering {
    pub fn new(fh: Arc<FreeHalf>) -> Self {
        Covering {
            fh,
            straighten: Mutex::new(HashMap::new()),
        }
    }

    pub fn free_half(&self) -> &Arc<FreeHalf> {
        &self.fh
    }

    pub fn datum(&self) -> &Datum {
        self.fh.datum()
    }

    pub fn cartan(&self) -> &SuperCartanDatum {
        self.fh.cartan()
    }

    pub fn rank(&self) -> usize {
        self.fh.rank()
    }

    pub fn y_rank(&self) -> usize {
        self.datum().root.x_rank
    }

    pub fn labels(&self) -> &[i64] {
        self.fh.labels()
    }

    pub fn one(&self) -> PBWElement {
        PBWElement::monomial(Monomial::one(self.y_rank()), QPiScalar::one())
    }

    pub fn scalar(&self, c: QPiScalar) -> PBWElement {
        PBWElement::monomial(Monomial::one(self.y_rank()), c)
    }

    pub fn e(&self, i: usize) -> PBWElement {
        let mut m = Monomial::one(self.y_rank());
        m.e = Word::letter(i);
        PBWElement::monomial(m, QPiScalar::one())
    }

    pub fn f(&self, i: usize) -> PBWElement {
        let mut m = Monomial::one(self.y_rank());
        m.f = Word::letter(i);
        PBWElement::monomial(m, QPiScalar::one())
    }

    /// `J_a K_b`.
    pub fn jk(&self, j: &[i64], k: &[i64]) -> PBWElement {
        PBWElement::monomial(self.jk_monomial(j, k), QPiScalar::one())
    }

    fn jk_monomial(&self, j: &[i64], k: &[i64]) -> Monomial {
        Monomial {
            f: Word::empty(),
            j: j.iter().map(|x| x.rem_euclid(2) as u8).collect(),
            k: k.to_vec(),
            e: Word::empty(),
        }
    }

    pub fn k(&self, mu: &[i64]) -> PBWElement {
        self.jk(&vec![0; self.y_rank()], mu)
    }

    pub fn j(&self, mu: &[i64]) -> PBWElement {
        self.jk(mu, &vec![0; self.y_rank()])
    }

    /// `K̃_{s i}`.
    pub fn ktilde(&self, i: usize, s: i64) -> PBWElement {
        let v: Vec<i64> = self.datum().ktilde(i).iter().map(|x| x * s).collect();
        self.k(&v)
    }

    /// `J̃_i`.
    pub fn jtilde(&self, i: usize) -> PBWElement {
        self.j(&self.datum().ktilde(i))
    }

    /// `J̃_i K̃_{s i}`.
    pub fn jk_tilde(&self, i: usize, s: i64) -> PBWElement {
        let t = self.datum().ktilde(i);
        let k: Vec<i64> = t.iter().map(|x| x * s).collect();
        self.jk(&t, &k)
    }

    /// `x^-` for `x` in `'f`, reduced to pivot words.
    pub fn minus(&self, x: &FreeElement) -> Result<PBWElement, PbwError> {
        self.embed(x, true)
    }

    /// `x^+` for `x` in `'f`, reduced to pivot words.
    pub fn plus(&self, x: &FreeElement) -> Result<PBWElement, PbwError> {
        self.embed(x, false)
    }

    fn embed(&self, x: &FreeElement, minus: bool) -> Result<PBWElement, PbwError> {
        let mut out = PBWElement::zero();
        for (w, c) in x.terms() {
            for (p, d) in self.reduce(w)? {
                let mut m = Monomial::one(self.y_rank());
                if minus {
                    m.f = p;
                } else {
                    m.e = p;
                }
                out.add_term(m, c.mul(&d));
            }
        }
        Ok(out)
    }

    /// Pivot expansion of a word.
    pub fn reduce(&self, w: &Word) -> Result<Vec<(Word, QPiScalar)>, PbwError> {
        let nu = w.weight(self.rank());
        let b = self.fh.quotient_basis(&nu)?;
        if let Some(k) = b.pivots.iter().position(|p| p == w) {
            return Ok(vec![(b.pivots[k].clone(), QPiScalar::one())]);
        }
        let coords = self.fh.reduce_word(w)?;
        Ok(b.pivots
            .iter()
            .cloned()
            .zip(coords.iter().cloned())
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    /// `⟨μ, ν'⟩` for `μ ∈ Y` and the weight of `w`.
    fn pair_word(&self, mu: &[i64], w: &Word) -> i64 {
        let root = &self.datum().root;
        w.0.iter().map(|&i| root.pair(mu, &root.pairing[i])).sum()
    }

    /// Moves `J_a K_b` rightwards past `F_w`: `J_a K_b F_w = c F_w J_a K_b`.
    fn jk_past_f(&self, j: &[u8], k: &[i64], w: &Word) -> QPiScalar {
        let jj: Vec<i64> = j.iter().map(|&x| x as i64).collect();
        QPiScalar::pi_q_pow(self.pair_word(&jj, w), -self.pair_word(k, w))
    }

    /// Moves `E_w` rightwards past `J_a K_b`: `E_w J_a K_b = c J_a K_b E_w`.
    fn e_past_jk(&self, w: &Word, j: &[u8], k: &[i64]) -> QPiScalar {
        let jj: Vec<i64> = j.iter().map(|&x| x as i64).collect();
        QPiScalar::pi_q_pow(self.pair_word(&jj, w), -self.pair_word(k, w))
    }

    /// `E_w F_x` in normal form; `x` is a pivot word, `w` any word.
    pub fn straighten(&self, w: &Word, x: &Word) -> Result<Arc<PBWElement>, PbwError> {
        let key = (w.clone(), x.clone());
        if let Some(r) = self.straighten.lock().get(&key) {
            return Ok(r.clone());
        }
        let y = self.y_rank();
        let result = if w.is_empty() || x.is_empty() {
            let mut out = PBWElement::zero();
            for (p, c) in self.reduce(if w.is_empty() { x } else { w })? {
                let mut m = Monomial::one(y);
                if w.is_empty() {
                    m.f = p;
                } else {
                    m.e = p;
                }
                out.add_term(m, c);
            }
            out
        } else {
            let i = *w.0.last().unwrap();
            let head = Word(w.0[..w.len() - 1].to_vec());
            let step = self.e_times_f(i, x)?;
            let mut head_m = Monomial::one(y);
            head_m.e = head;
            let mut out = PBWElement::zero();
            for (m, c) in step.terms() {
                out.add_scaled(&self.mul_monomials(&head_m, m)?, c);
            }
            out
        };
        let result = Arc::new(result);
        self.straighten.lock().insert(key, result.clone());
        Ok(result)
    }

    /// `E_i x^-` for a pivot word `x`, by the twisted-derivation commutator formula.
    fn e_times_f(&self, i: usize, x: &Word) -> Result<PBWElement, PbwError> {
        let c = self.cartan();
        let y = self.y_rank();
        let n = self.rank();
        let xe = FreeElement::from_word(x.clone());
        let px = c.weight_parity(&x.weight(n).0);
        let mut out = PBWElement::zero();
        let mut lead = Monomial::one(y);
        lead.f = x.clone();
        lead.e = Word::letter(i);
        out.add_term(lead, c.pi_q_i(i, px, 0));
        let denom = c.qdiff(i).invert().expect("π_i q_i − q_i^-1 is invertible");
        let kt = self.datum().ktilde(i);
        let kt_neg: Vec<i64> = kt.iter().map(|v| -v).collect();
        let jt: Vec<u8> = kt.iter().map(|v| v.rem_euclid(2) as u8).collect();
        let zero_j = vec![0u8; y];
        // J̃_i K̃_i ᵢr(x)^- = q^{-⟨d_i i, |y|'⟩} ᵢr(x)^- J̃_i K̃_i
        for (w, coef) in xe.i_r(c, i).terms() {
            for (p, d) in self.reduce(w)? {
                let shift = self.jk_past_f(&jt, &kt, &p);
                let m = Monomial {
                    f: p,
                    j: jt.clone(),
                    k: kt.clone(),
                    e: Word::empty(),
                };
                out.add_term(m, coef.mul(&d).mul(&shift).mul(&denom));
            }
        }
        let sign = c.pi_q_i(i, px - c.p(i), 0).neg();
        for (w, coef) in xe.r_i(c, i).terms() {
            for (p, d) in self.reduce(w)? {
                let m = Monomial {
                    f: p,
                    j: zero_j.clone(),
                    k: kt_neg.clone(),
                    e: Word::empty(),
                };
                out.add_term(m, coef.mul(&d).mul(&sign).mul(&denom));
            }
        }
        Ok(out)
    }

    /// Product of two monomials in normal form.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Result<PBWElement, PbwError> {
        let mid = self.straighten(&a.e, &b.f)?;
        let mut out = PBWElement::zero();
        for (m, c) in mid.terms() {
            let coef = c
                .mul(&self.jk_past_f(&a.j, &a.k, &m.f))
                .mul(&self.e_past_jk(&m.e, &b.j, &b.k));
            let j: Vec<u8> = (0..a.j.len())
                .map(|t| (a.j[t] + m.j[t] + b.j[t]) % 2)
                .collect();
            let k: Vec<i64> = (0..a.k.len()).map(|t| a.k[t] + m.k[t] + b.k[t]).collect();
            let fs = self.reduce(&a.f.concat(&m.f))?;
            let es = self.reduce(&m.e.concat(&b.e))?;
            for (fw, fc) in &fs {
                for (ew, ec) in &es {
                    let mono = Monomial {
                        f: fw.clone(),
                        j: j.clone(),
                        k: k.clone(),
                        e: ew.clone(),
                    };
                    out.add_term(mono, coef.mul(fc).mul(ec));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, x: &PBWElement, y: &PBWElement) -> Result<PBWElement, PbwError> {
        let mut out = PBWElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out.add_scaled(&self.mul_monomials(a, b)?, &ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Product restricted to pairs of terms whose combined degree satisfies `keep`.
    pub fn mul_filtered(
        &self,
        x: &PBWElement,
        y: &PBWElement,
        keep: impl Fn(&Weight) -> bool,
    ) -> Result<PBWElement, PbwError> {
        let n = self.rank();
        let mut out = PBWElement::zero();
        for (a, ca) in x.terms() {
            let da = a.degree(n);
            for (b, cb) in y.terms() {
                if keep(&da.add(&b.degree(n))) {
                    out.add_scaled(&self.mul_monomials(a, b)?, &ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    /// Product of a list of elements, left to right.
    pub fn product(&self, factors: &[PBWElement]) -> Result<PBWElement, PbwError> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// The bar involution `ψ`: coefficients barred, `K_μ ↦ J_μ K_{−μ}`.
    pub fn bar_psi(&self, x: &PBWElement) -> PBWElement {
        let mut out = PBWElement::zero();
        for (m, c) in x.terms() {
            let j: Vec<u8> =
                m.j.iter()
                    .zip(&m.k)
                    .map(|(a, b)| ((*a as i64 + b).rem_euclid(2)) as u8)
                    .collect();
            let k: Vec<i64> = m.k.iter().map(|v| -v).collect();
            out.add_term(
                Monomial {
                    f: m.f.clone(),
                    j,
                    k,
                    e: m.e.clone(),
                },
                c.bar(),
            );
        }
        out
    }

    /// `E_i^{(m)}` or `F_i^{(m)}` as a PBW element.
    pub fn divided_power(&self, i: usize, m: usize, minus: bool) -> Result<PBWElement, PbwError> {
        self.embed(&self.fh.divided_power(i, m), minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::scalar::parse_scalar;

    fn ctx(name: &str, h: i64) -> Covering {
        Covering::new(Arc::new(FreeHalf::new(builtin(name).unwrap(), h)))
    }

    #[test]
    fn rank_one_commutator() {
        let u = ctx("rank1", 4);
        let ef = u.mul(&u.e(0), &u.f(0)).unwrap();
        let fe = u.mul(&u.f(0), &u.e(0)).unwrap();
        let lhs = ef.sub(&fe.scale(&QPiScalar::pi()));
        let rhs = u
            .jk_tilde(0, 1)
            .sub(&u.ktilde(0, -1))
            .scale(&u.cartan().qdiff(0).invert().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cartan_commutation() {
        let u = ctx("B(0,2)", 3);
        let mu = vec![1, 0];
        let ke = u.mul(&u.k(&mu), &u.e(1)).unwrap();
        let ek = u.mul(&u.e(1), &u.k(&mu)).unwrap();
        let a = u.datum().root.pairing[1][0];
        assert_eq!(ke, ek.scale(&QPiScalar::q_pow(a)));
        let fe = u.mul(&u.e(0), &u.f(1)).unwrap();
        let ef = u.mul(&u.f(1), &u.e(0)).unwrap();
        assert_eq!(fe, ef);
    }

    #[test]
    fn psi_basics() {
        let u = ctx("rank1", 3);
        let qe = u.e(0).scale(&parse_scalar("q").unwrap());
        assert_eq!(
            u.bar_psi(&qe),
            u.e(0).scale(&parse_scalar("p*q^-1").unwrap())
        );
        let k = u.k(&[1]);
        assert_eq!(u.bar_psi(&k), u.jk(&[1], &[-1]));
        let x = u
            .mul(&u.mul(&u.e(0), &u.f(0)).unwrap(), &u.k(&[2]))
            .unwrap();
        assert_eq!(u.bar_psi(&u.bar_psi(&x)), x);
    }

    #[test]
    fn renders_pbw() {
        let u = ctx("rank1", 3);
        let x = u
            .product(&[u.f(0), u.f(0), u.jk(&[1], &[-1]), u.e(0)])
            .unwrap();
        assert_eq!(x.render(u.labels()), "F[1,1].J[1].K[-1].E[1]");
    }
}
