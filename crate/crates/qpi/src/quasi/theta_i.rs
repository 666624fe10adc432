use super::verify::b_generator;
use super::{QuasiError, ThetaExpansion, UpsilonExpansion};
use crate::covering::{Covering, Monomial, TensorElement};
use crate::datum::Weight;
use crate::free_half::FreeElement;
use crate::scalar::QPiScalar;
use std::collections::BTreeMap;

/// `Θ^ı = Δ(Υ) · Θ · (\bar{Υ} ⊗ 1)` grouped by (total degree, second-leg weight).
///
/// A component `(w, μ)` is complete when `ht w ≤ height` and `ht μ ≤ height`; only those are kept.
#[derive(Debug, Clone)]
pub struct ThetaI {
    pub height: i64,
    pub parts: BTreeMap<(Weight, Weight), TensorElement>,
}

impl ThetaI {
    /// `Θ^ı_μ` restricted to total degrees of height `≤ height`.
    pub fn level(&self, mu: &Weight) -> TensorElement {
        let mut t = TensorElement::zero();
        for ((_, m), p) in &self.parts {
            if m == mu {
                t.add_scaled(p, &QPiScalar::one());
            }
        }
        t
    }

    pub fn total(&self) -> TensorElement {
        let mut t = TensorElement::zero();
        for p in self.parts.values() {
            t.add_scaled(p, &QPiScalar::one());
        }
        t
    }

    /// Whether both legs of every term have the same parity.
    pub fn parity_matched(&self, u: &Covering) -> bool {
        let c = u.cartan();
        self.parts
            .values()
            .all(|p| p.terms().all(|((a, b), _)| a.parity(c) == b.parity(c)))
    }

    /// Whether the `μ = 0` level is exactly `1 ⊗ 1`.
    pub fn level_zero_is_unit(&self, u: &Covering) -> bool {
        let zero = Weight::zero(u.rank());
        self.level(&zero) == TensorElement::pure(&u.one(), &u.one())
    }
}

fn key(n: usize, a: &Monomial, b: &Monomial) -> (Weight, Weight) {
    let d2 = b.degree(n);
    (a.degree(n).add(&d2), d2)
}

fn group(
    n: usize,
    t: &TensorElement,
    keep: impl Fn(&Weight, &Weight) -> bool,
) -> BTreeMap<(Weight, Weight), TensorElement> {
    let mut out: BTreeMap<(Weight, Weight), TensorElement> = BTreeMap::new();
    for ((a, b), c) in t.terms() {
        let k = key(n, a, b);
        if keep(&k.0, &k.1) {
            out.entry(k)
                .or_default()
                .add_term(a.clone(), b.clone(), c.clone());
        }
    }
    out
}

pub fn theta_i(
    u: &Covering,
    ups: &UpsilonExpansion,
    theta: &ThetaExpansion,
    height: i64,
) -> Result<ThetaI, QuasiError> {
    let h = height.min(ups.height).min(theta.height);
    let n = u.rank();
    let t = theta.total();
    let one = u.one();
    let mut acc = TensorElement::zero();
    let weights: Vec<Weight> = Weight::all_up_to_height(n, h)
        .into_iter()
        .filter(|w| !ups.is_zero_at(w))
        .collect();
    let mut bars = BTreeMap::new();
    for b in &weights {
        bars.insert(
            b.clone(),
            TensorElement::pure(&u.bar_psi(&ups.part_pbw(u, b)?), &one),
        );
    }
    for a in &weights {
        let da = u.coproduct(&ups.part_pbw(u, a)?, usize::MAX)?;
        let left = u.tensor_mul_filtered(&da, &t, |_, m| m.ht() <= h)?;
        for b in &weights {
            if a.ht() + b.ht() > h {
                continue;
            }
            acc.add_scaled(
                &u.tensor_mul_filtered(&left, &bars[b], |w, m| w.add(m).ht() <= h && m.ht() <= h)?,
                &QPiScalar::one(),
            );
        }
    }
    let parts = group(n, &acc, |w, m| w.ht() <= h && m.ht() <= h);
    Ok(ThetaI { height: h, parts })
}

/// Exponent `e` in the `\bar{c_i} q_i^e J̃_i ⊗ E_i` term that makes the derivation identity hold
/// with `ψ(E_i K̃_i^{-1}) = E_i J̃_i K̃_i`.
pub const IRRT_Q_EXPONENT: i64 = 0;

/// Checks `(1 ⊗ r_i)(Θ^ı) = −(π_i q_i − q_i^{-1}) Θ^ı (B_i ⊗ 1 + \bar{c_i} J̃_i ⊗ E_i)` on components
/// `(t, m)` with `ht t, ht m ≤ height − 1`; returns the number of nonzero components compared.
pub fn verify_irrt(
    u: &Covering,
    thi: &ThetaI,
    c: &[QPiScalar],
    i: usize,
) -> Result<usize, QuasiError> {
    verify_irrt_with_exponent(u, thi, c, i, IRRT_Q_EXPONENT)
}

/// As [`verify_irrt`] with `\bar{c_i} q_i^e` in place of `\bar{c_i}`.
pub fn verify_irrt_with_exponent(
    u: &Covering,
    thi: &ThetaI,
    c: &[QPiScalar],
    i: usize,
    e: i64,
) -> Result<usize, QuasiError> {
    let n = u.rank();
    let cd = u.cartan();
    let h = thi.height - 1;
    let keep = |w: &Weight, m: &Weight| w.ht() <= h && m.ht() <= h;
    let full = thi.total();

    let mut lhs = TensorElement::zero();
    for ((a, b), coef) in full.terms() {
        if b.e_height() == 0 {
            continue;
        }
        if !b.f.is_empty() || !b.k.iter().all(|&x| x == 0) || !b.j.iter().all(|&x| x == 0) {
            return Err(QuasiError::ConsistencyFailure(
                "second leg of Θ^ı is not in U^+".into(),
            ));
        }
        let r = FreeElement::from_word(b.e.clone()).r_i(cd, i);
        for (w, rc) in r.terms() {
            for (p, pc) in u.reduce(w)? {
                let mut m = Monomial::one(u.y_rank());
                m.e = p;
                lhs.add_term(a.clone(), m, coef.mul(rc).mul(&pc));
            }
        }
    }

    let bi = TensorElement::pure(&b_generator(u, i, &c[i])?, &u.one());
    let je = TensorElement::pure(&u.jtilde(i), &u.e(i)).scale(&c[i].bar().mul(&cd.q_i(i).pow(e)));
    let rhs = u
        .tensor_mul_filtered(&full, &bi.add(&je), keep)?
        .scale(&cd.qdiff(i).neg());

    let l = group(n, &lhs, keep);
    let r = group(n, &rhs, keep);
    let keys: std::collections::BTreeSet<_> = l.keys().chain(r.keys()).cloned().collect();
    for k in &keys {
        let a = l.get(k).cloned().unwrap_or_default();
        let b = r.get(k).cloned().unwrap_or_default();
        if a != b {
            return Err(QuasiError::ConsistencyFailure(format!(
                "(1⊗r_{}) Θ^ı differs at total {} level {}: {} vs {}",
                u.labels()[i],
                k.0,
                k.1,
                a.render(u.labels()),
                b.render(u.labels())
            )));
        }
    }
    Ok(keys.len())
}

#[cfg(test)]
mod tests {
    use super::super::{theta, upsilon};
    use super::*;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;
    use std::sync::Arc;

    #[test]
    fn rank_one_theta_i() {
        let u = Covering::new(Arc::new(FreeHalf::new(builtin("rank1").unwrap(), 4)));
        let ups = upsilon(u.free_half(), 4).unwrap();
        let t = theta(&u, 4).unwrap();
        let thi = theta_i(&u, &ups, &t, 4).unwrap();
        assert!(thi.parity_matched(&u));
        assert!(thi.level_zero_is_unit(&u));
        assert!(verify_irrt(&u, &thi, &ups.c, 0).unwrap() > 0);
        assert!(verify_irrt_with_exponent(&u, &thi, &ups.c, 0, 2).is_err());
    }
}
