use crate::datum::{SuperCartanDatum, Weight};
use crate::scalar::QPiScalar;
use std::collections::BTreeMap;
use std::fmt;

/// A monomial `θ_{i_1} … θ_{i_k}` stored by internal indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn repeat(i: usize, m: usize) -> Self {
        Word(vec![i; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, n: usize) -> Weight {
        Weight::of_word(n, &self.0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn without(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(k);
        Word(v)
    }

    /// Renders as `t1.t2.t1` using the datum labels; the empty word is `1`.
    pub fn render(&self, labels: &[i64]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&i| format!("t{}", labels[i]))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses the `t1.t2` form.
    pub fn parse(s: &str, labels: &[i64]) -> Option<Word> {
        if s == "1" {
            return Some(Word::empty());
        }
        s.split('.')
            .map(|t| {
                let l: i64 = t.strip_prefix('t')?.parse().ok()?;
                labels.iter().position(|&x| x == l)
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// All words of weight `ν`, in lexicographic order.
    pub fn all_of_weight(nu: &Weight) -> Vec<Word> {
        fn rec(rest: &mut Vec<i64>, cur: &mut Vec<usize>, out: &mut Vec<Word>) {
            if rest.iter().all(|&c| c == 0) {
                out.push(Word(cur.clone()));
                return;
            }
            for i in 0..rest.len() {
                if rest[i] > 0 {
                    rest[i] -= 1;
                    cur.push(i);
                    rec(rest, cur, out);
                    cur.pop();
                    rest[i] += 1;
                }
            }
        }
        let mut out = Vec::new();
        if nu.is_nonnegative() {
            rec(&mut nu.0.clone(), &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Twist `π^{p(x) p(i)} q^{|x|·i}` attached to passing `θ_i` across a word.
pub fn twist(c: &SuperCartanDatum, letters: &[usize], i: usize) -> QPiScalar {
    let mut pexp = 0;
    let mut qexp = 0;
    for &j in letters {
        pexp += c.p(j);
        qexp += c.dot[j][i];
    }
    QPiScalar::pi_q_pow(pexp * c.p(i), qexp)
}

/// A finite linear combination of words.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FreeElement {
    terms: BTreeMap<Word, QPiScalar>,
}

impl FreeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(w, QPiScalar::one())
    }

    pub fn monomial(w: Word, c: QPiScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn theta(i: usize) -> Self {
        Self::from_word(Word::letter(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QPiScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> QPiScalar {
        self.terms.get(w).cloned().unwrap_or_else(QPiScalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: QPiScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QPiScalar::from_i64(-1)))
    }

    pub fn scale(&self, s: &QPiScalar) -> Self {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            r.add_term(w.clone(), c.mul(s));
        }
        r
    }

    /// Concatenation product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                r.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        r
    }

    /// Homogeneous components, keyed by weight.
    pub fn homogeneous_parts(&self, n: usize) -> BTreeMap<Weight, FreeElement> {
        let mut out: BTreeMap<Weight, FreeElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.weight(n))
                .or_default()
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// Common weight, or `None` for zero or mixed elements.
    pub fn weight(&self, n: usize) -> Option<Weight> {
        let mut it = self.terms.keys().map(|w| w.weight(n));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// `ᵢr`: removes a letter `i`, twisted by the prefix.
    pub fn i_r(&self, c: &SuperCartanDatum, i: usize) -> Self {
        let mut r = Self::zero();
        for (w, coef) in &self.terms {
            for (k, &l) in w.0.iter().enumerate() {
                if l == i {
                    r.add_term(w.without(k), coef.mul(&twist(c, &w.0[..k], i)));
                }
            }
        }
        r
    }

    /// `r_i`: removes a letter `i`, twisted by the suffix.
    pub fn r_i(&self, c: &SuperCartanDatum, i: usize) -> Self {
        let mut r = Self::zero();
        for (w, coef) in &self.terms {
            for (k, &l) in w.0.iter().enumerate() {
                if l == i {
                    r.add_term(w.without(k), coef.mul(&twist(c, &w.0[k + 1..], i)));
                }
            }
        }
        r
    }

    pub fn render(&self, labels: &[i64]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("({})*{}", c.render(), w.render(labels)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<i64> = (1..=16).collect();
        write!(f, "{}", self.render(&labels))
    }
}
