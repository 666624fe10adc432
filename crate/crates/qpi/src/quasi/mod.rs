//! The quasi-R-matrix `Θ`, the quasi-K-matrix `Υ` and `Θ^ı`.

mod theta_i;
mod verify;

pub use theta_i::{theta_i, verify_irrt, verify_irrt_with_exponent, ThetaI, IRRT_Q_EXPONENT};
pub use verify::{
    b_generator, integrality_report, psi_b_generator, tensor_bar, verify_intertwiner,
    verify_intertwiner_with, verify_inverse, verify_theta_intertwining, IntegralityEntry,
    IntegralityStatus,
};

use crate::covering::{Covering, Monomial, PBWElement, PbwError, TensorElement};
use crate::datum::Weight;
use crate::free_half::{FreeElement, FreeError, FreeHalf, Word};
use crate::scalar::{qpi_factorial, qpi_odd_double_factorial, QPiScalar};
use parking_lot::Mutex;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuasiError {
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    #[error("non-identity involution τ is not supported by the Υ recursion")]
    Unsupported,
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

/// `Θ_ν` for `ht(ν) ≤ N`, stored as elements of `U^- ⊗ U^+`.
#[derive(Debug, Clone)]
pub struct ThetaExpansion {
    pub height: i64,
    pub parts: BTreeMap<Weight, TensorElement>,
}

impl ThetaExpansion {
    pub fn total(&self) -> TensorElement {
        let mut t = TensorElement::zero();
        for p in self.parts.values() {
            t.add_scaled(p, &QPiScalar::one());
        }
        t
    }
}

/// `Θ_ν = (−1)^{ht ν} π^{e(ν)} π_ν q_ν Σ_b b^- ⊗ b^{*+}` for all `ht(ν) ≤ height`.
pub fn theta(u: &Covering, height: i64) -> Result<ThetaExpansion, QuasiError> {
    let fh = u.free_half();
    let c = u.cartan();
    let n = u.rank();
    let y = u.y_rank();
    let mut parts = BTreeMap::new();
    for nu in Weight::all_up_to_height(n, height) {
        let b = fh.quotient_basis(&nu)?;
        let sign = if nu.ht() % 2 == 0 { 1 } else { -1 };
        let pre = QPiScalar::from_i64(sign)
            .mul(&QPiScalar::pi_pow(nu.e(c)))
            .mul(&nu.pi_nu(c))
            .mul(&nu.q_nu(c));
        let mut t = TensorElement::zero();
        for k in 0..b.dim() {
            let mut left = Monomial::one(y);
            left.f = b.pivots[k].clone();
            for (l, coef) in b.dual_coords(k).iter().enumerate() {
                let mut right = Monomial::one(y);
                right.e = b.pivots[l].clone();
                t.add_term(left.clone(), right, coef.mul(&pre));
            }
        }
        parts.insert(nu, t);
    }
    Ok(ThetaExpansion { height, parts })
}

/// `Υ_μ` for `ht(μ) ≤ N`, as coordinates in the pivot basis of `f_μ`.
#[derive(Debug, Clone)]
pub struct UpsilonExpansion {
    pub height: i64,
    pub c: Vec<QPiScalar>,
    pub parts: BTreeMap<Weight, Vec<QPiScalar>>,
    /// Weights of odd parity at which the recursion produced a nonzero functional.
    pub odd_residue: Vec<Weight>,
}

impl UpsilonExpansion {
    pub fn part(&self, mu: &Weight) -> Option<&Vec<QPiScalar>> {
        self.parts.get(mu)
    }

    pub fn is_zero_at(&self, mu: &Weight) -> bool {
        self.parts
            .get(mu)
            .is_none_or(|v| v.iter().all(QPiScalar::is_zero))
    }

    /// `Υ_μ` as an element of `U^+`.
    pub fn part_pbw(&self, u: &Covering, mu: &Weight) -> Result<PBWElement, QuasiError> {
        let mut out = PBWElement::zero();
        let Some(coords) = self.parts.get(mu) else {
            return Ok(out);
        };
        let b = u.free_half().quotient_basis(mu)?;
        for (w, c) in b.pivots.iter().zip(coords) {
            let mut m = Monomial::one(u.y_rank());
            m.e = w.clone();
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// `Σ_{ht μ ≤ h} Υ_μ` in `U^+`.
    pub fn to_pbw(&self, u: &Covering, h: i64) -> Result<PBWElement, QuasiError> {
        let mut out = PBWElement::zero();
        for mu in self.parts.keys().filter(|m| m.ht() <= h) {
            out.add_scaled(&self.part_pbw(u, mu)?, &QPiScalar::one());
        }
        Ok(out)
    }

    /// Replaces `Υ_μ` by new coordinates; used for negative controls.
    pub fn perturbed(&self, mu: &Weight, k: usize, delta: &QPiScalar) -> Self {
        let mut out = self.clone();
        if let Some(v) = out.parts.get_mut(mu) {
            v[k] = v[k].add(delta);
        }
        out
    }
}

/// Memoized functional `Υ^*` on words, by the left or right recursion.
pub struct UpsilonFunctional<'a> {
    fh: &'a FreeHalf,
    xi: Vec<QPiScalar>,
    left: Mutex<HashMap<Word, QPiScalar>>,
    right: Mutex<HashMap<Word, QPiScalar>>,
}

impl<'a> UpsilonFunctional<'a> {
    /// `ξ_i = −c_i q_i^3 (1 − π_i q_i^{-2})^{-1}`.
    pub fn new(fh: &'a FreeHalf, c: &[QPiScalar]) -> Self {
        let cd = fh.cartan();
        let xi = (0..fh.rank())
            .map(|i| c[i].neg().mul(&cd.q_i(i).pow(3)).mul(&cd.theta_norm(i)))
            .collect();
        UpsilonFunctional {
            fh,
            xi,
            left: Mutex::new(HashMap::new()),
            right: Mutex::new(HashMap::new()),
        }
    }

    pub fn xi(&self, i: usize) -> &QPiScalar {
        &self.xi[i]
    }

    /// `Υ^*_L(θ_i z) = ξ_i Υ^*_L(ᵢr z)`.
    pub fn left(&self, w: &Word) -> QPiScalar {
        if w.is_empty() {
            return QPiScalar::one();
        }
        if w.len() % 2 == 1 {
            return QPiScalar::zero();
        }
        if let Some(v) = self.left.lock().get(w) {
            return v.clone();
        }
        let i = w.0[0];
        let z = FreeElement::from_word(Word(w.0[1..].to_vec()));
        let mut s = QPiScalar::zero();
        for (v, c) in z.i_r(self.fh.cartan(), i).terms() {
            let x = self.left(v);
            if !x.is_zero() {
                s = s.add(&c.mul(&x));
            }
        }
        let s = s.mul(&self.xi[i]);
        self.left.lock().insert(w.clone(), s.clone());
        s
    }

    /// `Υ^*_R(z θ_i) = ξ_i Υ^*_R(r_i z)`.
    pub fn right(&self, w: &Word) -> QPiScalar {
        if w.is_empty() {
            return QPiScalar::one();
        }
        if w.len() % 2 == 1 {
            return QPiScalar::zero();
        }
        if let Some(v) = self.right.lock().get(w) {
            return v.clone();
        }
        let i = *w.0.last().unwrap();
        let z = FreeElement::from_word(Word(w.0[..w.len() - 1].to_vec()));
        let mut s = QPiScalar::zero();
        for (v, c) in z.r_i(self.fh.cartan(), i).terms() {
            let x = self.right(v);
            if !x.is_zero() {
                s = s.add(&c.mul(&x));
            }
        }
        let s = s.mul(&self.xi[i]);
        self.right.lock().insert(w.clone(), s.clone());
        s
    }

    /// Left functional extended linearly.
    pub fn eval(&self, x: &FreeElement) -> QPiScalar {
        let mut s = QPiScalar::zero();
        for (w, c) in x.terms() {
            let v = self.left(w);
            if !v.is_zero() {
                s = s.add(&c.mul(&v));
            }
        }
        s
    }
}

/// Builds `Υ` up to height `N` with parameters `c_i = ς_i`, asserting the left/right
/// agreement, vanishing on the radical and vanishing in odd parity.
pub fn upsilon(fh: &FreeHalf, height: i64) -> Result<UpsilonExpansion, QuasiError> {
    let params = &fh.datum().params;
    if !params.is_split() {
        return Err(QuasiError::Unsupported);
    }
    upsilon_with(fh, height, &params.varsigma.clone())
}

pub fn upsilon_with(
    fh: &FreeHalf,
    height: i64,
    c: &[QPiScalar],
) -> Result<UpsilonExpansion, QuasiError> {
    let cd = fh.cartan();
    let n = fh.rank();
    let func = UpsilonFunctional::new(fh, c);
    let mut parts = BTreeMap::new();
    let mut odd_residue = Vec::new();
    for mu in Weight::all_up_to_height(n, height) {
        let b = fh.quotient_basis(&mu)?;
        let vals: Vec<QPiScalar> = b.pivots.iter().map(|w| func.left(w)).collect();
        for w in &b.words {
            let (l, r) = (func.left(w), func.right(w));
            if l != r {
                return Err(QuasiError::ConsistencyFailure(format!(
                    "left and right recursions differ on {}",
                    w.render(fh.labels())
                )));
            }
        }
        for rad in &b.radical {
            if !func.eval(rad).is_zero() {
                return Err(QuasiError::ConsistencyFailure(format!(
                    "Υ* does not vanish on the radical at {mu}"
                )));
            }
        }
        let coords: Vec<QPiScalar> = (0..b.dim())
            .map(|k| {
                let mut s = QPiScalar::zero();
                for (l, v) in vals.iter().enumerate() {
                    if !v.is_zero() {
                        s = s.add(&b.pivot_gram_inv[l][k].mul(v));
                    }
                }
                s
            })
            .collect();
        if cd.weight_parity(&mu.0) == 1 && coords.iter().any(|x| !x.is_zero()) {
            odd_residue.push(mu.clone());
        }
        parts.insert(mu, coords);
    }
    Ok(UpsilonExpansion {
        height,
        c: c.to_vec(),
        parts,
        odd_residue,
    })
}

/// `a_{2k} = (−c π q^2)^k (π q − q^{-1})^k q^{-k^2} [2k−1]^{!!}`, the coefficient of `E^{(2k)}` in rank one.
pub fn rank1_closed(k: i64, c: &QPiScalar) -> QPiScalar {
    let base = c.neg().mul(&QPiScalar::pi_q_pow(1, 2)).pow(k);
    let diff = QPiScalar::pi_q_pow(1, 1).sub(&QPiScalar::q_pow(-1)).pow(k);
    base.mul(&diff)
        .mul(&QPiScalar::q_pow(-k * k))
        .mul(&qpi_odd_double_factorial(k, 1))
}

/// Coefficient of `E^{(m)}` for a rank-one `Υ_{m i}` given in the pivot basis `{θ^m}`.
pub fn rank1_divided_coefficient(ups: &UpsilonExpansion, m: i64) -> Option<QPiScalar> {
    let v = ups.parts.get(&Weight(vec![m]))?;
    Some(v[0].mul(&qpi_factorial(m, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::scalar::parse_scalar;
    use std::sync::Arc;

    #[test]
    fn theta_at_simple_root() {
        let u = Covering::new(Arc::new(FreeHalf::new(builtin("rank1").unwrap(), 3)));
        let t = theta(&u, 2).unwrap();
        assert_eq!(
            t.parts[&Weight(vec![0])],
            TensorElement::pure(&u.one(), &u.one())
        );
        let expect =
            TensorElement::pure(&u.f(0), &u.e(0)).scale(&parse_scalar("-(p*q - q^-1)").unwrap());
        assert_eq!(t.parts[&Weight(vec![1])], expect);
    }

    #[test]
    fn closed_form_small_k() {
        let c = QPiScalar::one();
        assert_eq!(rank1_closed(0, &c), QPiScalar::one());
        assert_eq!(rank1_closed(1, &c), parse_scalar("-(q^2 - p)").unwrap());
    }

    #[test]
    fn recursion_matches_closed_form_rank_one() {
        let fh = FreeHalf::new(builtin("rank1").unwrap(), 12);
        for c in ["q^-1", "1", "-q"] {
            let cs = parse_scalar(c).unwrap();
            let ups = upsilon_with(&fh, 12, std::slice::from_ref(&cs)).unwrap();
            for k in 0..=6 {
                assert_eq!(
                    rank1_divided_coefficient(&ups, 2 * k).unwrap(),
                    rank1_closed(k, &cs),
                    "c = {c}, k = {k}"
                );
            }
            for m in [1, 3, 5, 7, 9, 11] {
                assert!(ups.is_zero_at(&Weight(vec![m])));
            }
            assert!(ups.odd_residue.is_empty());
        }
    }
}
