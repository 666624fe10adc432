use super::{ModuleError, WeightModule};
use crate::linalg::{self, Matrix};
use crate::quasi::{b_generator, UpsilonExpansion};
use crate::scalar::{qpi_factorial, QPiScalar};
use std::cmp::Reverse;

/// A weight module whose basis is the distinguished basis `B`, with the antilinear bar operator
/// `ψ(b_j) = Σ_i psi[i][j] b_i`.
#[derive(Debug, Clone)]
pub struct BasedModule {
    pub module: WeightModule,
    pub psi: Matrix,
}

impl BasedModule {
    pub fn apply_psi(&self, v: &[QPiScalar]) -> Vec<QPiScalar> {
        linalg::mat_vec(&self.psi, &linalg::vec_bar(v))
    }

    pub fn is_involutive(&self) -> bool {
        is_involution(&self.psi)
    }

    /// `ψ(E_i m) = E_i ψ(m)` and `ψ(F_i m) = F_i ψ(m)` as matrix identities.
    pub fn psi_intertwines(&self) -> bool {
        let m = &self.module;
        m.e.iter()
            .chain(&m.f)
            .all(|x| commutes_antilinear(&self.psi, x))
    }
}

/// `P · bar(P) = 1` for an antilinear operator with matrix `P`.
pub fn is_involution(p: &Matrix) -> bool {
    linalg::mat_mul(p, &linalg::mat_bar(p)) == linalg::identity(p.len())
}

/// `P · bar(X) = X · P`, i.e. the antilinear `P` commutes with the linear `X` whose matrix is
/// bar-invariant under the twist.
fn commutes_antilinear(p: &Matrix, x: &Matrix) -> bool {
    linalg::mat_mul(p, &linalg::mat_bar(x)) == linalg::mat_mul(x, p)
}

/// Canonical basis `{F_i^{(k)} η_λ}` of a rank-one simple module; `ψ` is the identity on it.
pub fn canonical_basis_rank1(l: &WeightModule) -> Result<BasedModule, ModuleError> {
    let u = l.covering();
    if u.rank() != 1 {
        return Err(ModuleError::RankUnsupported);
    }
    let d = u.cartan().d(0);
    let label = u.labels()[0];
    let n = l.dim();
    let mut c = linalg::zeros(n, n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        let depth = l.depths[k].ht();
        c[k][k] = qpi_factorial(depth, d)
            .invert()
            .map_err(|e| ModuleError::Assertion(e.to_string()))?;
        labels.push(match depth {
            0 => "η".to_string(),
            1 => format!("F[{label}]η"),
            _ => format!("F[{label}]^({depth})η"),
        });
    }
    let module = l.change_basis(&c, labels)?;
    Ok(BasedModule {
        psi: linalg::identity(n),
        module,
    })
}

/// The unique basis `{x_b}` with `ψ(x_b) = x_b` and `x_b ∈ b + Σ_{b' < b} q^{-1} Z^π[q^{-1}] b'`.
///
/// `keys` orders the basis lexicographically (smaller key = smaller element); `psi` must be
/// unitriangular for it. Columns of the result are the `x_b`.
pub fn bar_invariant_basis(
    psi: &Matrix,
    keys: &[Vec<i64>],
    labels: &[String],
) -> Result<Matrix, ModuleError> {
    let n = psi.len();
    for x in 0..n {
        for y in 0..n {
            let v = &psi[x][y];
            if v.is_zero() {
                continue;
            }
            let ok = if x == y {
                v.is_one()
            } else {
                keys[x] < keys[y]
            };
            if !ok {
                return Err(ModuleError::TriangularityFailure(format!(
                    "ψ({}) has coefficient {} on {}",
                    labels[y],
                    v.render(),
                    labels[x]
                )));
            }
        }
        if psi[x][x].is_zero() {
            return Err(ModuleError::TriangularityFailure(format!(
                "ψ({}) has no diagonal term",
                labels[x]
            )));
        }
    }
    let mut desc: Vec<usize> = (0..n).collect();
    desc.sort_by_key(|&k| Reverse(keys[k].clone()));
    let mut out = linalg::zeros(n, n);
    for b in 0..n {
        let mut t = vec![QPiScalar::zero(); n];
        t[b] = QPiScalar::one();
        for &bp in desc.iter().filter(|&&k| keys[k] < keys[b]) {
            let mut r = QPiScalar::zero();
            for c in 0..n {
                if c != bp && !t[c].is_zero() && !psi[bp][c].is_zero() {
                    r = r.add(&t[c].bar().mul(&psi[bp][c]));
                }
            }
            if r.is_zero() {
                continue;
            }
            let fail = || {
                ModuleError::TriangularityFailure(format!(
                    "no solution for the {} coefficient of {}",
                    labels[bp], labels[b]
                ))
            };
            let s = r.negative_part().ok_or_else(fail)?;
            if s.sub(&s.bar()) != r || !s.in_q_inverse_integral() {
                return Err(fail());
            }
            t[bp] = s;
        }
        for x in 0..n {
            out[x][b] = t[x].clone();
        }
    }
    Ok(out)
}

/// Matrix of `Υ` on `M`, summing all weight components up to the module depth.
pub fn upsilon_matrix(m: &WeightModule, ups: &UpsilonExpansion) -> Result<Matrix, ModuleError> {
    let depth = m.depth();
    if ups.height < depth {
        return Err(ModuleError::DepthExceeded {
            depth,
            height: ups.height,
        });
    }
    let u = m.covering();
    let pbw = ups.to_pbw(u, depth)?;
    Ok(m.matrix_of(&pbw))
}

/// `ψ_ı = Υ ∘ ψ` on a based module; asserts involutivity and `ψ_ı(B_i m) = B_i ψ_ı(m)`.
pub fn psi_i_module(m: &BasedModule, ups: &UpsilonExpansion) -> Result<Matrix, ModuleError> {
    let p = linalg::mat_mul(&upsilon_matrix(&m.module, ups)?, &m.psi);
    check_psi_i(&m.module, &p, &ups.c)?;
    Ok(p)
}

pub(super) fn check_psi_i(
    m: &WeightModule,
    p: &Matrix,
    c: &[QPiScalar],
) -> Result<(), ModuleError> {
    if !is_involution(p) {
        return Err(ModuleError::Assertion("ψ_ı is not an involution".into()));
    }
    let u = m.covering();
    for (i, ci) in c.iter().enumerate() {
        let b = m.matrix_of(&b_generator(u, i, ci)?);
        if !commutes_antilinear(p, &b) {
            return Err(ModuleError::Assertion(format!(
                "ψ_ı does not commute with B_{}",
                u.labels()[i]
            )));
        }
    }
    Ok(())
}

/// An ı-canonical basis expressed in the distinguished basis `B` (columns).
#[derive(Debug, Clone)]
pub struct IBasis {
    pub labels: Vec<String>,
    pub coords: Matrix,
}

impl IBasis {
    /// `b^ı_j = Σ_i coords[i][j] b_i`, rendered per label.
    pub fn expansion(&self, j: usize) -> Vec<(String, QPiScalar)> {
        (0..self.labels.len())
            .filter(|&i| !self.coords[i][j].is_zero())
            .map(|i| (self.labels[i].clone(), self.coords[i][j].clone()))
            .collect()
    }
}

/// ı-canonical basis of `M` for the ı-bar operator with matrix `psi_i` (in the basis `B`).
///
/// `Υ` raises weights, so `ψ_ı(b) − b` lies in higher weight spaces; the triangular order puts
/// higher weights first.
pub fn icanonical_basis(m: &BasedModule, psi_i: &Matrix) -> Result<IBasis, ModuleError> {
    let labels = &m.module.labels;
    for (r, row) in psi_i.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.in_integral_form() {
                return Err(ModuleError::LatticeNotPreserved {
                    row: labels[r].clone(),
                    col: labels[c].clone(),
                    value: v.render(),
                });
            }
        }
    }
    let keys: Vec<Vec<i64>> = m.module.depths.iter().map(|d| vec![d.ht()]).collect();
    let coords = bar_invariant_basis(psi_i, &keys, labels)?;
    let fixed = linalg::mat_mul(psi_i, &linalg::mat_bar(&coords));
    if fixed != coords {
        return Err(ModuleError::Assertion(
            "ı-canonical basis is not ψ_ı-invariant".into(),
        ));
    }
    Ok(IBasis {
        labels: labels.clone(),
        coords,
    })
}

/// Outcome of applying `Υ` and `ψ_ı` to the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityAction {
    pub upsilon_integral: bool,
    pub psi_i_integral: bool,
    pub first_violation: Option<String>,
}

impl IntegralityAction {
    pub fn ok(&self) -> bool {
        self.upsilon_integral && self.psi_i_integral
    }
}

fn first_nonintegral(m: &Matrix, labels: &[String], what: &str) -> Option<String> {
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.in_integral_form() {
                return Some(format!(
                    "{what}({}) has coefficient {} on {}",
                    labels[c],
                    v.render(),
                    labels[r]
                ));
            }
        }
    }
    None
}

/// Applies `Υ` and `ψ_ı = Υ ∘ ψ` to every basis vector of the lattice spanned by `B`.
pub fn integrality_action_check(
    m: &BasedModule,
    ups: &UpsilonExpansion,
) -> Result<IntegralityAction, ModuleError> {
    let y = upsilon_matrix(&m.module, ups)?;
    let p = linalg::mat_mul(&y, &m.psi);
    let labels = &m.module.labels;
    let vy = first_nonintegral(&y, labels, "Υ");
    let vp = first_nonintegral(&p, labels, "ψ_ı");
    Ok(IntegralityAction {
        upsilon_integral: vy.is_none(),
        psi_i_integral: vp.is_none(),
        first_violation: vy.or(vp),
    })
}

#[cfg(test)]
mod tests {
    use super::super::simple;
    use super::*;
    use crate::covering::Covering;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;
    use crate::quasi::upsilon;
    use crate::scalar::parse_scalar;
    use std::sync::Arc;

    fn setup(n: i64) -> (Arc<Covering>, BasedModule, UpsilonExpansion) {
        let u = Arc::new(Covering::new(Arc::new(FreeHalf::new(
            builtin("rank1").unwrap(),
            n + 1,
        ))));
        let l = simple(&u, &[n], n + 1).unwrap();
        let b = canonical_basis_rank1(&l).unwrap();
        let ups = upsilon(u.free_half(), n + 1).unwrap();
        (u, b, ups)
    }

    #[test]
    fn canonical_basis_is_bar_compatible() {
        let (_, b, _) = setup(3);
        assert!(b.is_involutive());
        assert!(b.psi_intertwines());
        assert_eq!(b.module.labels[2], "F[1]^(2)η");
    }

    #[test]
    fn psi_i_on_simple() {
        let (_, b, ups) = setup(4);
        let p = psi_i_module(&b, &ups).unwrap();
        assert_eq!(p[0][0], QPiScalar::one());
        assert!((1..5).all(|r| p[r][0].is_zero()));
        let ib = icanonical_basis(&b, &p).unwrap();
        assert_eq!(ib.expansion(0), vec![("η".to_string(), QPiScalar::one())]);
        for j in 0..5 {
            assert!(ib.coords[j][j].is_one());
        }
    }

    #[test]
    fn integrality_and_negative_control() {
        let (_, b, ups) = setup(4);
        assert!(integrality_action_check(&b, &ups).unwrap().ok());
        let mut bad = ups.clone();
        let two = crate::datum::Weight(vec![2]);
        let half = parse_scalar("1/2").unwrap();
        for x in bad.parts.get_mut(&two).unwrap() {
            *x = x.mul(&half);
        }
        let r = integrality_action_check(&b, &bad).unwrap();
        assert!(!r.ok());
        assert!(r.first_violation.is_some());
    }

    #[test]
    fn solver_rejects_non_triangular() {
        let one = QPiScalar::one();
        let q = QPiScalar::q_pow(1);
        let psi = vec![vec![one.clone(), q.clone()], vec![q, one]];
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            bar_invariant_basis(&psi, &[vec![0], vec![1]], &labels),
            Err(ModuleError::TriangularityFailure(_))
        ));
    }
}
