use super::based::{
    bar_invariant_basis, canonical_basis_rank1, check_psi_i, is_involution, BasedModule,
};
use super::{simple, unit, ModuleError, WeightModule};
use crate::covering::{Covering, Monomial, TensorElement};
use crate::datum::Weight;
use crate::linalg::{self, IncrementalBasis, Matrix};
use crate::quasi::{ThetaExpansion, ThetaI, UpsilonExpansion};
use crate::scalar::QPiScalar;
use std::collections::HashMap;
use std::sync::Arc;

/// Matrix of `t ∈ U ⊗ U` on `a ⊗ b`, with `(x ⊗ y)(v ⊗ w) = π^{p(y)p(v)} xv ⊗ yw`.
pub fn act_tensor(a: &WeightModule, b: &WeightModule, t: &TensorElement) -> Matrix {
    let c = a.covering().cartan();
    let (da, db) = (a.dim(), b.dim());
    let mut out = linalg::zeros(da * db, da * db);
    let mut cache_a: HashMap<Monomial, Matrix> = HashMap::new();
    let mut cache_b: HashMap<Monomial, Matrix> = HashMap::new();
    for ((m1, m2), coef) in t.terms() {
        let ma = cache_a
            .entry(m1.clone())
            .or_insert_with(|| a.matrix_of_monomial(m1));
        let mb = cache_b
            .entry(m2.clone())
            .or_insert_with(|| b.matrix_of_monomial(m2));
        let p2 = m2.parity(c);
        for j in 0..da {
            let s = coef.mul(&QPiScalar::pi_pow(p2 * a.parities[j]));
            for i in 0..da {
                if ma[i][j].is_zero() {
                    continue;
                }
                let x = s.mul(&ma[i][j]);
                for l in 0..db {
                    for k in 0..db {
                        if !mb[k][l].is_zero() {
                            let v = &mut out[i * db + k][j * db + l];
                            *v = v.add(&x.mul(&mb[k][l]));
                        }
                    }
                }
            }
        }
    }
    out
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (da, db) = (a.len(), b.len());
    let mut out = linalg::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..da {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    if !b[k][l].is_zero() {
                        out[i * db + k][j * db + l] = a[i][j].mul(&b[k][l]);
                    }
                }
            }
        }
    }
    out
}

/// `a ⊗ b` with the action through `Δ`; basis vector `(k, l)` has index `k · dim b + l`.
pub fn tensor(a: &WeightModule, b: &WeightModule) -> Result<WeightModule, ModuleError> {
    let u = a.covering();
    let (da, db) = (a.dim(), b.dim());
    let mut labels = Vec::with_capacity(da * db);
    let mut weights = Vec::with_capacity(da * db);
    let mut depths = Vec::with_capacity(da * db);
    let mut parities = Vec::with_capacity(da * db);
    for k in 0..da {
        for l in 0..db {
            labels.push(format!("{}⊗{}", a.labels[k], b.labels[l]));
            weights.push(
                a.weights[k]
                    .iter()
                    .zip(&b.weights[l])
                    .map(|(x, y)| x + y)
                    .collect(),
            );
            depths.push(a.depths[k].add(&b.depths[l]));
            parities.push((a.parities[k] + b.parities[l]).rem_euclid(2));
        }
    }
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..u.rank() {
        e.push(act_tensor(a, b, &u.coproduct(&u.e(i), usize::MAX)?));
        f.push(act_tensor(a, b, &u.coproduct(&u.f(i), usize::MAX)?));
    }
    Ok(WeightModule {
        u: u.clone(),
        labels,
        weights,
        depths,
        parities,
        e,
        f,
        highest: a.highest.zip(b.highest).map(|(x, y)| x * db + y),
        truncation: a.truncation.or(b.truncation),
    })
}

/// `M ⊗ M'` of two based modules with `ψ = Θ ∘ (ψ ⊗ ψ)`.
#[derive(Debug, Clone)]
pub struct TensorModule {
    pub left: BasedModule,
    pub right: BasedModule,
    pub module: WeightModule,
    pub psi: Matrix,
}

impl TensorModule {
    pub fn new(
        left: BasedModule,
        right: BasedModule,
        theta: &ThetaExpansion,
    ) -> Result<Self, ModuleError> {
        let need = left.module.depth().min(right.module.depth());
        if theta.height < need {
            return Err(ModuleError::DepthExceeded {
                depth: need,
                height: theta.height,
            });
        }
        let module = tensor(&left.module, &right.module)?;
        let th = act_tensor(&left.module, &right.module, &theta.total());
        let psi = linalg::mat_mul(&th, &kron(&left.psi, &right.psi));
        if !is_involution(&psi) {
            return Err(ModuleError::Assertion(
                "Θ ∘ (ψ ⊗ ψ) is not an involution".into(),
            ));
        }
        Ok(TensorModule {
            left,
            right,
            module,
            psi,
        })
    }

    pub fn pair(&self, idx: usize) -> (usize, usize) {
        let db = self.right.module.dim();
        (idx / db, idx % db)
    }

    pub fn based(&self) -> BasedModule {
        BasedModule {
            module: self.module.clone(),
            psi: self.psi.clone(),
        }
    }

    /// `ψ_ı = Θ^ı ∘ (ψ_ı ⊗ ψ)` given `ψ_ı` on the left factor; asserts involutivity and
    /// compatibility with every `B_i`.
    pub fn psi_i_theta(
        &self,
        left_psi_i: &Matrix,
        thi: &ThetaI,
        c: &[QPiScalar],
    ) -> Result<Matrix, ModuleError> {
        let need = self.left.module.depth() + self.right.module.depth();
        if thi.height < need {
            return Err(ModuleError::DepthExceeded {
                depth: need,
                height: thi.height,
            });
        }
        let th = act_tensor(&self.left.module, &self.right.module, &thi.total());
        let p = linalg::mat_mul(&th, &kron(left_psi_i, &self.right.psi));
        check_psi_i(&self.module, &p, c)?;
        Ok(p)
    }

    /// `ψ_ı = Υ ∘ ψ` with `ψ = Θ ∘ (ψ ⊗ ψ)`.
    pub fn psi_i_upsilon(&self, ups: &UpsilonExpansion) -> Result<Matrix, ModuleError> {
        super::psi_i_module(&self.based(), ups)
    }
}

/// The basis `{b ◊ b'}` of a tensor product, as columns in the basis `B ⊗ B'`, and the based module
/// it defines.
#[derive(Debug, Clone)]
pub struct DiamondBasis {
    pub coords: Matrix,
    pub based: BasedModule,
}

/// Order on `B ⊗ B'`: lower total weight is smaller, then lower weight of the first factor.
fn diamond_keys(t: &TensorModule) -> Vec<Vec<i64>> {
    (0..t.module.dim())
        .map(|idx| {
            let (k, _) = t.pair(idx);
            vec![-t.module.depths[idx].ht(), -t.left.module.depths[k].ht()]
        })
        .collect()
}

pub fn cb_tensor(t: &TensorModule) -> Result<DiamondBasis, ModuleError> {
    let coords = bar_invariant_basis(&t.psi, &diamond_keys(t), &t.module.labels)?;
    let labels: Vec<String> = (0..t.module.dim())
        .map(|idx| {
            let (k, l) = t.pair(idx);
            format!("{}◊{}", t.left.module.labels[k], t.right.module.labels[l])
        })
        .collect();
    let module = t.module.change_basis(&coords, labels)?;
    let inv = linalg::inverse(&coords)?;
    let psi = linalg::mat_mul(&inv, &linalg::mat_mul(&t.psi, &linalg::mat_bar(&coords)));
    if psi != linalg::identity(coords.len()) {
        return Err(ModuleError::Assertion("◊ basis is not ψ-invariant".into()));
    }
    Ok(DiamondBasis {
        coords,
        based: BasedModule { module, psi },
    })
}

/// `L(λ)` in rank one with its canonical basis.
pub fn rank1_based(u: &Arc<Covering>, lambda: i64) -> Result<BasedModule, ModuleError> {
    canonical_basis_rank1(&simple(u, &[lambda], lambda + 1)?)
}

/// Images of the canonical basis of `L(Σλ)` under `χ: η ↦ η ⊗ … ⊗ η`; a hit may carry a factor `π`
/// since canonical bases here are `π`-bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiReport {
    /// `(canonical basis label, ◊ label hit)`; `None` when the image is not in `◊ ∪ π◊`.
    pub images: Vec<(String, Option<String>)>,
}

impl ChiReport {
    pub fn ok(&self) -> bool {
        self.images.iter().all(|(_, h)| h.is_some())
    }
}

/// Iterated `((L(λ_1) ⊗ L(λ_2)) ⊗ …)` in its ◊ basis.
fn iterated(
    u: &Arc<Covering>,
    lambdas: &[i64],
    theta: &ThetaExpansion,
) -> Result<BasedModule, ModuleError> {
    let mut acc = rank1_based(u, lambdas[0])?;
    for &l in &lambdas[1..] {
        let t = TensorModule::new(acc, rank1_based(u, l)?, theta)?;
        acc = cb_tensor(&t)?.based;
    }
    Ok(acc)
}

/// Rank one: checks that `χ` sends each canonical basis element into the `π`-basis `◊ ∪ π◊`.
pub fn chi_check(
    u: &Arc<Covering>,
    lambdas: &[i64],
    theta: &ThetaExpansion,
) -> Result<ChiReport, ModuleError> {
    if u.rank() != 1 {
        return Err(ModuleError::RankUnsupported);
    }
    let total: i64 = lambdas.iter().sum();
    let target = iterated(u, lambdas, theta)?;
    let m = &target.module;
    let top = m
        .highest
        .ok_or_else(|| ModuleError::Assertion("no highest weight vector".into()))?;
    let eta = unit(m.dim(), top);
    let label = u.labels()[0];
    let mut images = Vec::new();
    for k in 0..=total {
        let img = m.apply(&u.divided_power(0, k as usize, true)?, &eta);
        let pi = QPiScalar::pi();
        let hit = img.iter().position(|x| !x.is_zero()).and_then(|p| {
            let unit_like = img.iter().enumerate().all(|(j, x)| j == p || x.is_zero());
            let tag = if img[p].is_one() {
                Some(String::new())
            } else if img[p] == pi {
                Some("π·".to_string())
            } else {
                None
            };
            tag.filter(|_| unit_like)
                .map(|t| format!("{t}{}", m.labels[p]))
        });
        let name = match k {
            0 => "η".to_string(),
            1 => format!("F[{label}]η"),
            _ => format!("F[{label}]^({k})η"),
        };
        images.push((name, hit));
    }
    Ok(ChiReport { images })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleReport {
    pub dim: usize,
    /// ◊ elements lying in `U(η ⊗ η)`.
    pub diamond_labels: Vec<String>,
}

impl SubmoduleReport {
    pub fn ok(&self) -> bool {
        self.diamond_labels.len() == self.dim
    }
}

/// Spanning vectors `F_b (η ⊗ η)` of `U(η ⊗ η)`, in the coordinates of `m`.
pub(super) fn cyclic_span(
    m: &WeightModule,
) -> Result<(IncrementalBasis, Vec<Vec<QPiScalar>>), ModuleError> {
    let u = m.covering();
    let top = m
        .highest
        .ok_or_else(|| ModuleError::Assertion("no highest weight vector".into()))?;
    let eta = unit(m.dim(), top);
    let mut basis = IncrementalBasis::new();
    let mut vecs = Vec::new();
    for nu in Weight::all_up_to_height(u.rank(), m.depth()) {
        for p in &u.free_half().quotient_basis(&nu)?.pivots {
            let v = m.apply_f_word(p, &eta);
            if basis.try_add(&v)? {
                vecs.push(v);
            }
        }
    }
    Ok((basis, vecs))
}

/// Rank one: checks that `L(λ, μ) = U(η_λ ⊗ η_μ)` is spanned by ◊ elements.
pub fn submodule_check(
    u: &Arc<Covering>,
    lambda: i64,
    mu: i64,
    theta: &ThetaExpansion,
) -> Result<SubmoduleReport, ModuleError> {
    if u.rank() != 1 {
        return Err(ModuleError::RankUnsupported);
    }
    let t = TensorModule::new(rank1_based(u, lambda)?, rank1_based(u, mu)?, theta)?;
    let d = cb_tensor(&t)?;
    let m = &d.based.module;
    let (basis, _) = cyclic_span(m)?;
    let mut labels = Vec::new();
    for j in 0..m.dim() {
        let mut b = basis.clone();
        if !b.try_add(&unit(m.dim(), j))? {
            labels.push(m.labels[j].clone());
        }
    }
    Ok(SubmoduleReport {
        dim: basis.len(),
        diamond_labels: labels,
    })
}
