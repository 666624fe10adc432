use super::{rank1_divided_coefficient, QuasiError, ThetaExpansion, UpsilonExpansion};
use crate::covering::{Covering, PBWElement, TensorElement};
use crate::datum::Weight;
use crate::free_half::FreeElement;
use crate::linalg::{self, IncrementalBasis};
use crate::scalar::QPiScalar;

fn fail(msg: String) -> QuasiError {
    QuasiError::ConsistencyFailure(msg)
}

/// Checks `Σ_{α+β=μ} \bar{Υ_α} Υ_β = δ_{μ,0}` for `0 < ht μ ≤ h`; returns the number of weights checked.
pub fn verify_inverse(u: &Covering, ups: &UpsilonExpansion, h: i64) -> Result<usize, QuasiError> {
    let fh = u.free_half();
    let n = u.rank();
    let mut checked = 0;
    for mu in Weight::all_up_to_height(n, h.min(ups.height)) {
        if mu.is_zero() {
            continue;
        }
        let dim = fh.dim(&mu)?;
        let mut acc = vec![QPiScalar::zero(); dim];
        for alpha in Weight::all_up_to_height(n, mu.ht()) {
            let beta = mu.sub(&alpha);
            if !beta.is_nonnegative() {
                continue;
            }
            let (Some(a), Some(b)) = (ups.part(&alpha), ups.part(&beta)) else {
                continue;
            };
            for (ka, ca) in a.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                let ca = ca.bar();
                for (kb, cb) in b.iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    let prod = fh.mul_pivots(&alpha, ka, &beta, kb)?;
                    let s = ca.mul(cb);
                    for (o, v) in acc.iter_mut().zip(prod.iter()) {
                        if !v.is_zero() {
                            *o = o.add(&s.mul(v));
                        }
                    }
                }
            }
        }
        if acc.iter().any(|x| !x.is_zero()) {
            return Err(fail(format!("bar(Υ)·Υ has a nonzero component at {mu}")));
        }
        checked += 1;
    }
    Ok(checked)
}

/// `B_i = F_i + c_i E_i K̃_i^{-1}`.
pub fn b_generator(u: &Covering, i: usize, c: &QPiScalar) -> Result<PBWElement, QuasiError> {
    let ek = u.mul(&u.e(i), &u.ktilde(i, -1))?;
    Ok(u.f(i).add(&ek.scale(c)))
}

/// `ψ(B_i) = F_i + \bar{c_i} E_i J̃_i K̃_i`.
pub fn psi_b_generator(u: &Covering, i: usize, c: &QPiScalar) -> Result<PBWElement, QuasiError> {
    let ek = u.mul(&u.e(i), &u.jk_tilde(i, 1))?;
    Ok(u.f(i).add(&ek.scale(&c.bar())))
}

/// Checks `B_i Υ = Υ ψ(B_i)` in every degree `δ` with `ht δ ≤ h − 1`.
pub fn verify_intertwiner(
    u: &Covering,
    ups: &UpsilonExpansion,
    h: i64,
) -> Result<usize, QuasiError> {
    verify_intertwiner_with(u, ups, h, &ups.c)
}

pub fn verify_intertwiner_with(
    u: &Covering,
    ups: &UpsilonExpansion,
    h: i64,
    c: &[QPiScalar],
) -> Result<usize, QuasiError> {
    let h = h.min(ups.height);
    let n = u.rank();
    let y = ups.to_pbw(u, h)?;
    let mut checked = 0;
    for i in 0..n {
        let b = b_generator(u, i, &c[i])?;
        let pb = psi_b_generator(u, i, &c[i])?;
        let keep = |d: &Weight| d.ht() < h;
        let bad = u
            .mul_filtered(&b, &y, keep)?
            .sub(&u.mul_filtered(&y, &pb, keep)?);
        if !bad.is_zero() {
            return Err(fail(format!(
                "B_{} Υ − Υ ψ(B_{}) = {} in degrees of height ≤ {}",
                u.labels()[i],
                u.labels()[i],
                bad.render(u.labels()),
                h - 1
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// `(ψ ⊗ ψ)` on `U ⊗ U`.
pub fn tensor_bar(u: &Covering, x: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for ((a, b), c) in x.terms() {
        let pa = u.bar_psi(&PBWElement::monomial(a.clone(), QPiScalar::one()));
        let pb = u.bar_psi(&PBWElement::monomial(b.clone(), QPiScalar::one()));
        out.add_scaled(&TensorElement::pure(&pa, &pb), &c.bar());
    }
    out
}

/// Checks `Δ(x) Θ = Θ \bar{Δ}(x)` for `x = E_i, F_i, K_μ, J_μ` on second-leg degrees of height `≤ h − 1`.
pub fn verify_theta_intertwining(
    u: &Covering,
    theta: &ThetaExpansion,
    h: i64,
) -> Result<usize, QuasiError> {
    let h = h.min(theta.height);
    let n = u.rank();
    let big = usize::MAX;
    let t = theta.total();
    let mut gens: Vec<(String, PBWElement)> = Vec::new();
    for i in 0..n {
        gens.push((format!("E_{}", u.labels()[i]), u.e(i)));
        gens.push((format!("F_{}", u.labels()[i]), u.f(i)));
    }
    for k in 0..u.y_rank() {
        let v: Vec<i64> = (0..u.y_rank()).map(|t| (t == k) as i64).collect();
        gens.push((format!("K_{v:?}"), u.k(&v)));
        gens.push((format!("J_{v:?}"), u.j(&v)));
    }
    let mut checked = 0;
    for (name, x) in &gens {
        let dx = u.coproduct(x, big)?;
        let dbar = tensor_bar(u, &u.coproduct(&u.bar_psi(x), big)?);
        let keep = |_: &Weight, d: &Weight| d.ht() < h;
        let bad = u
            .tensor_mul_filtered(&dx, &t, keep)?
            .sub(&u.tensor_mul_filtered(&t, &dbar, keep)?);
        if !bad.is_zero() {
            return Err(fail(format!(
                "Δ({name})Θ ≠ Θ Δ̄({name}): {}",
                bad.render(u.labels())
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralityStatus {
    /// Coordinates lie in `Z[q,q^{-1}][π]/(π²−1)`.
    Integral,
    /// Some coordinate has a nontrivial denominator.
    NotIntegral,
    /// Coordinates in a divided-power spanning subset are not integral; the subset need not be an integral basis.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct IntegralityEntry {
    pub weight: Weight,
    pub status: IntegralityStatus,
    /// Coefficients in the basis used, rendered, with their basis labels.
    pub coefficients: Vec<(String, String)>,
}

fn divided_monomials(mu: &Weight) -> Vec<Vec<(usize, usize)>> {
    fn go(
        rem: &mut Vec<i64>,
        last: Option<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rem.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..rem.len() {
            if Some(i) == last || rem[i] == 0 {
                continue;
            }
            for a in (1..=rem[i]).rev() {
                rem[i] -= a;
                cur.push((i, a as usize));
                go(rem, Some(i), cur, out);
                cur.pop();
                rem[i] += a;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut mu.0.clone(), None, &mut Vec::new(), &mut out);
    out
}

/// Integrality of `Υ_μ`: in rank one the coefficient of `E^{(2k)}`; otherwise coordinates in a
/// basis of `f_μ` chosen greedily among products of divided powers.
pub fn integrality_report(
    u: &Covering,
    ups: &UpsilonExpansion,
    h: i64,
) -> Result<Vec<IntegralityEntry>, QuasiError> {
    let fh = u.free_half();
    let n = u.rank();
    let labels = u.labels();
    let mut out = Vec::new();
    for mu in Weight::all_up_to_height(n, h.min(ups.height)) {
        if mu.is_zero() || ups.is_zero_at(&mu) {
            continue;
        }
        if n == 1 {
            let a = rank1_divided_coefficient(ups, mu.0[0]).expect("weight present");
            let status = if a.in_integral_form() {
                IntegralityStatus::Integral
            } else {
                IntegralityStatus::NotIntegral
            };
            out.push(IntegralityEntry {
                weight: mu.clone(),
                status,
                coefficients: vec![(format!("E[{}]^({})", labels[0], mu.0[0]), a.render())],
            });
            continue;
        }
        let mut inc = IncrementalBasis::new();
        let mut chosen: Vec<(String, Vec<QPiScalar>)> = Vec::new();
        let dim = fh.dim(&mu)?;
        for mono in divided_monomials(&mu) {
            let mut x = FreeElement::one();
            for &(i, a) in &mono {
                x = x.mul(&fh.divided_power(i, a));
            }
            let v = fh.reduce(&x, &mu)?;
            if inc.try_add(&v).map_err(|e| fail(format!("{mu}: {e}")))? {
                let name = mono
                    .iter()
                    .map(|&(i, a)| format!("E[{}]^({a})", labels[i]))
                    .collect::<Vec<_>>()
                    .join(".");
                chosen.push((name, v));
            }
            if chosen.len() == dim {
                break;
            }
        }
        if chosen.len() != dim {
            return Err(fail(format!("divided powers do not span f at {mu}")));
        }
        let cols: Vec<Vec<QPiScalar>> = chosen.iter().map(|(_, v)| v.clone()).collect();
        let a = linalg::transpose(&cols);
        let coords = linalg::solve(&a, ups.part(&mu).expect("weight present"))
            .map_err(|e| fail(format!("{mu}: {e}")))?;
        let status = if coords.iter().all(QPiScalar::in_integral_form) {
            IntegralityStatus::Integral
        } else {
            IntegralityStatus::Inconclusive
        };
        out.push(IntegralityEntry {
            weight: mu.clone(),
            status,
            coefficients: chosen
                .iter()
                .zip(&coords)
                .map(|((name, _), c)| (name.clone(), c.render()))
                .collect(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{theta, upsilon, upsilon_with};
    use super::*;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;
    use crate::scalar::parse_scalar;
    use std::sync::Arc;

    fn ctx(name: &str, h: i64) -> Covering {
        Covering::new(Arc::new(FreeHalf::new(builtin(name).unwrap(), h)))
    }

    #[test]
    fn inverse_and_intertwiner_rank_one() {
        let u = ctx("rank1", 8);
        let ups = upsilon(u.free_half(), 8).unwrap();
        assert_eq!(verify_inverse(&u, &ups, 8).unwrap(), 8);
        assert_eq!(verify_intertwiner(&u, &ups, 6).unwrap(), 1);
    }

    #[test]
    fn intertwiner_negative_control() {
        let u = ctx("rank1", 6);
        let ups = upsilon(u.free_half(), 6).unwrap();
        let bad = ups.perturbed(&Weight(vec![2]), 0, &QPiScalar::one());
        assert!(verify_intertwiner(&u, &bad, 4).is_err());
        let wrong_c = vec![parse_scalar("q").unwrap()];
        assert!(verify_intertwiner_with(&u, &ups, 4, &wrong_c).is_err());
    }

    #[test]
    fn inverse_and_intertwiner_b02() {
        let u = ctx("B(0,2)", 4);
        let ups = upsilon(u.free_half(), 4).unwrap();
        verify_inverse(&u, &ups, 4).unwrap();
        verify_intertwiner(&u, &ups, 4).unwrap();
    }

    #[test]
    fn theta_intertwines() {
        for name in ["rank1", "B(0,2)"] {
            let u = ctx(name, 3);
            let t = theta(&u, 3).unwrap();
            verify_theta_intertwining(&u, &t, 3).unwrap();
        }
    }

    #[test]
    fn rank_one_integral() {
        let u = ctx("rank1", 8);
        let ups = upsilon_with(u.free_half(), 8, &[QPiScalar::q_pow(-1)]).unwrap();
        let rep = integrality_report(&u, &ups, 8).unwrap();
        assert_eq!(rep.len(), 4);
        assert!(rep.iter().all(|e| e.status == IntegralityStatus::Integral));
    }
}
