//! The ıquantum covering subalgebra: `B_i`, ı^π-divided powers and `ψ_ı` on presented elements.

use crate::covering::{Covering, PBWElement, PbwError};
use crate::datum::Datum;
use crate::scalar::{qpi_factorial, qpi_integer, QPiScalar, RatFunc};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IqspError {
    #[error("K_{0:?} is not in Y^ı, so it does not commute with B_{1} up to a scalar")]
    NotInYi(Vec<i64>, i64),
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

/// `B_i = F_i + ς_i E_{τi} K̃_i^{-1}` in normal form.
pub fn embed_b(u: &Covering, i: usize) -> Result<PBWElement, PbwError> {
    let p = &u.datum().params;
    embed_b_with(u, i, p.tau[i], &p.varsigma[i])
}

pub fn embed_b_with(
    u: &Covering,
    i: usize,
    tau_i: usize,
    c: &QPiScalar,
) -> Result<PBWElement, PbwError> {
    let ek = u.mul(&u.e(tau_i), &u.ktilde(i, -1))?;
    Ok(u.f(i).add(&ek.scale(c)))
}

/// `ψ(B_i) = F_i + \bar{ς_i} E_{τi} J̃_i K̃_i`.
pub fn psi_of_b(u: &Covering, i: usize) -> Result<PBWElement, PbwError> {
    let p = &u.datum().params;
    let ek = u.mul(&u.e(p.tau[i]), &u.jk_tilde(i, 1))?;
    Ok(u.f(i).add(&ek.scale(&p.varsigma[i].bar())))
}

/// A monomial `B_{w_1}⋯B_{w_n} J_j K_k` of the generator alphabet, Cartan part on the right.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UiMonomial {
    pub b: Vec<usize>,
    pub j: Vec<u8>,
    pub k: Vec<i64>,
}

/// An element of `U^ı` given in the generators `B_i`, `J_μ`, `K_μ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UiElement {
    terms: BTreeMap<UiMonomial, QPiScalar>,
}

impl UiElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(y_rank: usize, c: QPiScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(
            UiMonomial {
                b: vec![],
                j: vec![0; y_rank],
                k: vec![0; y_rank],
            },
            c,
        );
        e
    }

    pub fn one(y_rank: usize) -> Self {
        Self::scalar(y_rank, QPiScalar::one())
    }

    pub fn b(y_rank: usize, i: usize) -> Self {
        let mut e = Self::zero();
        e.add_term(
            UiMonomial {
                b: vec![i],
                j: vec![0; y_rank],
                k: vec![0; y_rank],
            },
            QPiScalar::one(),
        );
        e
    }

    pub fn jk(j: &[i64], k: &[i64]) -> Self {
        let mut e = Self::zero();
        let j = j.iter().map(|x| x.rem_euclid(2) as u8).collect();
        e.add_term(
            UiMonomial {
                b: vec![],
                j,
                k: k.to_vec(),
            },
            QPiScalar::one(),
        );
        e
    }

    /// `J̃_i`.
    pub fn jtilde(datum: &Datum, i: usize) -> Self {
        let t = datum.ktilde(i);
        Self::jk(&t, &vec![0; t.len()])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UiMonomial, &QPiScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: UiMonomial, c: QPiScalar) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.get(&m).map_or(c.clone(), |x| x.add(&c));
        if s.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &QPiScalar) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.mul(s));
        }
        r
    }

    /// Product, moving `J_j K_k` of the left factor past the `B`s of the right factor.
    pub fn mul(&self, o: &Self, datum: &Datum) -> Result<Self, IqspError> {
        let root = &datum.root;
        let tau = &datum.params.tau;
        let mut r = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut coef = ca.mul(cb);
                let aj: Vec<i64> = a.j.iter().map(|&x| x as i64).collect();
                for &i in &b.b {
                    let (ii, ti) = (&root.pairing[i], &root.pairing[tau[i]]);
                    if root.pair(&a.k, ii) + root.pair(&a.k, ti) != 0 {
                        return Err(IqspError::NotInYi(a.k.clone(), datum.cartan.labels[i]));
                    }
                    if (root.pair(&aj, ii) + root.pair(&aj, ti)) % 2 != 0 {
                        return Err(IqspError::NotInYi(aj.clone(), datum.cartan.labels[i]));
                    }
                    let e = root.pair(&a.k, ii);
                    coef = coef
                        .mul(&QPiScalar::q_pow(-e))
                        .mul(&QPiScalar::pi_pow(root.pair(&aj, ii)));
                }
                let mut w = a.b.clone();
                w.extend(&b.b);
                let j = a.j.iter().zip(&b.j).map(|(x, y)| (x + y) % 2).collect();
                let k = a.k.iter().zip(&b.k).map(|(x, y)| x + y).collect();
                r.add_term(UiMonomial { b: w, j, k }, coef);
            }
        }
        Ok(r)
    }

    /// `ψ_ı`: coefficients barred, `B_i` and `J_μ` fixed, `K_μ ↦ J_μ K_{−μ}`.
    pub fn psi_i(&self) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let j =
                m.j.iter()
                    .zip(&m.k)
                    .map(|(a, b)| ((*a as i64 + b).rem_euclid(2)) as u8)
                    .collect();
            let k = m.k.iter().map(|x| -x).collect();
            r.add_term(
                UiMonomial {
                    b: m.b.clone(),
                    j,
                    k,
                },
                c.bar(),
            );
        }
        r
    }

    /// Expansion in `U`.
    pub fn to_pbw(&self, u: &Covering) -> Result<PBWElement, PbwError> {
        let mut out = PBWElement::zero();
        let mut cache: BTreeMap<usize, PBWElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut acc = u.one();
            for &i in &m.b {
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(i) {
                    e.insert(embed_b(u, i)?);
                }
                acc = u.mul(&acc, &cache[&i])?;
            }
            let jk = u.jk(&m.j.iter().map(|&x| x as i64).collect::<Vec<_>>(), &m.k);
            out.add_scaled(&u.mul(&acc, &jk)?, c);
        }
        Ok(out)
    }
}

/// Parity tag `0̄`/`1̄` attached to a weight `λ` for index `i`: `⟨i,λ⟩ mod 2`.
pub fn parity_tag(datum: &Datum, i: usize, lambda: &[i64]) -> u8 {
    datum.root.coroot_pair(i, lambda).rem_euclid(2) as u8
}

/// An ı^π-divided power `B^{(m)}_{i,parity}`, or the plain divided power when `τi ≠ i`.
#[derive(Debug, Clone)]
pub struct IDividedPower {
    pub i: usize,
    pub m: usize,
    pub parity: u8,
    pub poly: UiElement,
    /// Arguments `n` of the numerator factors `B^2 − …[n]^2 J̃`; empty when `τi ≠ i`.
    factors: Vec<i64>,
    label: i64,
    d: i64,
}

impl IDividedPower {
    /// Coefficients of `B^n J̃^e` as `(n, e, coefficient)`, ascending in `n`.
    pub fn coefficients(&self) -> Vec<(usize, u8, QPiScalar)> {
        self.poly
            .terms()
            .map(|(m, c)| (m.b.len(), m.j.iter().any(|&x| x != 0) as u8, c.clone()))
            .collect()
    }

    /// Specialization `π = 1`, `J̃ = 1`: coefficient of `B^n` for each `n ≤ m`.
    pub fn classical(&self) -> Vec<RatFunc> {
        let mut out = vec![RatFunc::zero(); self.m + 1];
        for (n, _, c) in self.coefficients() {
            out[n] = out[n].add(c.specialize(1));
        }
        out
    }

    pub fn value(&self, u: &Covering) -> Result<PBWElement, PbwError> {
        self.poly.to_pbw(u)
    }

    /// Numerator in symbolic form, e.g. `B^2 - s*p*q*[1]^2*J`.
    pub fn symbolic(&self) -> String {
        let q = if self.d == 1 {
            "q".to_string()
        } else {
            format!("q^{}", self.d)
        };
        let p = if self.d % 2 == 1 { "p*" } else { "" };
        let mut parts = Vec::new();
        if self.m % 2 == 1 {
            parts.push("B".to_string());
        }
        if self.factors.is_empty() && self.m > 1 {
            return format!("B^{}", self.m);
        }
        for &n in &self.factors {
            let pi = if self.parity == 1 { p } else { "" };
            parts.push(format!("B^2 - s*{pi}{q}*[{n}]^2*J"));
        }
        match parts.len() {
            0 => "1".into(),
            1 => parts.pop().unwrap(),
            _ => parts
                .iter()
                .map(|s| {
                    if s == "B" {
                        s.clone()
                    } else {
                        format!("({s})")
                    }
                })
                .collect::<Vec<_>>()
                .join("*"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "i": self.label,
            "m": self.m,
            "parity": self.parity,
            "numerator": self.symbolic(),
            "denominator": format!("[{}]!", self.m),
            "coefficients": self.coefficients().iter().map(|(n, e, c)| json!({"B": n, "J": e, "c": c.render()})).collect::<Vec<_>>(),
        })
    }
}

/// `B^{(m)}_{i,parity}`; falls back to `B_i^m / [m]_i^!` when `τi ≠ i`.
pub fn idivided_power(
    datum: &Datum,
    i: usize,
    m: usize,
    parity: u8,
) -> Result<IDividedPower, IqspError> {
    let c = &datum.cartan;
    let y = datum.ktilde(i).len();
    let d = c.d(i);
    let label = c.labels[i];
    let inv_fact = qpi_factorial(m as i64, d)
        .invert()
        .expect("nonzero factorial");
    let b = UiElement::b(y, i);
    if datum.params.tau[i] != i {
        let mut acc = UiElement::one(y);
        for _ in 0..m {
            acc = acc.mul(&b, datum)?;
        }
        return Ok(IDividedPower {
            i,
            m,
            parity,
            poly: acc.scale(&inv_fact),
            factors: vec![],
            label,
            d,
        });
    }
    let s = &datum.params.varsigma[i];
    let jt = UiElement::jtilde(datum, i);
    let b2 = b.mul(&b, datum)?;
    let k = (m / 2) as i64;
    let args: Vec<i64> = match (parity, m % 2) {
        (1, _) => (1..=k).map(|j| 2 * j - 1).collect(),
        (_, 1) => (1..=k).map(|j| 2 * j).collect(),
        _ => (1..=k).map(|j| 2 * j - 2).collect(),
    };
    let mut acc = if m % 2 == 1 {
        b.clone()
    } else {
        UiElement::one(y)
    };
    for &n in &args {
        let mut coef = s.mul(&c.q_i(i)).mul(&qpi_integer(n, d).pow(2));
        if parity == 1 {
            coef = coef.mul(&c.pi_i(i));
        }
        let factor = b2.add(&jt.scale(&coef.neg()));
        acc = acc.mul(&factor, datum)?;
    }
    Ok(IDividedPower {
        i,
        m,
        parity,
        poly: acc.scale(&inv_fact),
        factors: args,
        label,
        d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;
    use crate::scalar::parse_scalar;
    use std::sync::Arc;

    fn ctx(name: &str, h: i64) -> Covering {
        Covering::new(Arc::new(FreeHalf::new(builtin(name).unwrap(), h)))
    }

    #[test]
    fn b_in_rank_one() {
        let u = ctx("rank1", 2);
        let d = builtin("rank1")
            .unwrap()
            .with_varsigma(vec![QPiScalar::one()]);
        let u1 = Covering::new(Arc::new(FreeHalf::new(d, 2)));
        let b = embed_b(&u1, 0).unwrap();
        assert_eq!(b.render(u1.labels()), "q^2*K[-1].E[1] + F[1]");
        assert_eq!(
            psi_of_b(&u, 0).unwrap(),
            u.bar_psi(&embed_b(&u, 0).unwrap())
        );
    }

    #[test]
    fn small_divided_powers() {
        let d = builtin("rank1").unwrap();
        let y = 1;
        let b = UiElement::b(y, 0);
        for parity in [0, 1] {
            assert_eq!(idivided_power(&d, 0, 1, parity).unwrap().poly, b);
        }
        let b2 = b.mul(&b, &d).unwrap();
        let two = qpi_integer(2, 1).invert().unwrap();
        assert_eq!(idivided_power(&d, 0, 2, 0).unwrap().poly, b2.scale(&two));
        let odd = idivided_power(&d, 0, 2, 1).unwrap();
        let s = &d.params.varsigma[0];
        let expect = b2
            .add(&UiElement::jtilde(&d, 0).scale(&s.mul(&parse_scalar("p*q").unwrap()).neg()))
            .scale(&two);
        assert_eq!(odd.poly, expect);
        assert_eq!(odd.symbolic(), "B^2 - s*p*q*[1]^2*J");
        assert_eq!(
            idivided_power(&d, 0, 5, 1).unwrap().symbolic(),
            "B*(B^2 - s*p*q*[1]^2*J)*(B^2 - s*p*q*[3]^2*J)"
        );
    }

    #[test]
    fn psi_i_fixes_divided_powers() {
        let d = builtin("rank1").unwrap();
        for m in 0..=6 {
            for parity in [0, 1] {
                let x = idivided_power(&d, 0, m, parity).unwrap();
                assert_eq!(x.poly.psi_i(), x.poly, "m = {m}, parity = {parity}");
            }
        }
        let qb = UiElement::b(1, 0).scale(&QPiScalar::q_pow(1));
        assert_eq!(
            qb.psi_i(),
            UiElement::b(1, 0).scale(&parse_scalar("p*q^-1").unwrap())
        );
    }

    #[test]
    fn value_matches_polynomial() {
        let u = ctx("rank1", 4);
        let x = idivided_power(u.datum(), 0, 3, 1).unwrap();
        let b = embed_b(&u, 0).unwrap();
        let b3 = u.product(&[b.clone(), b.clone(), b]).unwrap();
        let jt = u.jtilde(0);
        let s = &u.datum().params.varsigma[0];
        let coef = s.mul(&parse_scalar("p*q").unwrap());
        let b1 = embed_b(&u, 0).unwrap();
        let expect = b3
            .sub(&u.mul(&b1, &jt).unwrap().scale(&coef))
            .scale(&qpi_factorial(3, 1).invert().unwrap());
        assert_eq!(x.value(&u).unwrap(), expect);
    }
}
