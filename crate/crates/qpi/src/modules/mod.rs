//! Weight modules, based modules, canonical and ı-canonical bases.

mod based;
mod stabilize;
mod tensor;

pub use based::{
    bar_invariant_basis, canonical_basis_rank1, icanonical_basis, integrality_action_check,
    psi_i_module, upsilon_matrix, BasedModule, IBasis, IntegralityAction,
};
pub use stabilize::{stabilization, StabilizationReport, StabilizationStep};
pub use tensor::{
    act_tensor, cb_tensor, chi_check, rank1_based, submodule_check, tensor, ChiReport,
    DiamondBasis, SubmoduleReport, TensorModule,
};

use crate::covering::{Covering, Monomial, PBWElement, PbwError};
use crate::datum::Weight;
use crate::free_half::{FreeError, Word};
use crate::linalg::{self, IncrementalBasis, LinalgError, Matrix};
use crate::quasi::QuasiError;
use crate::scalar::QPiScalar;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("canonical bases of simple modules are only available in rank 1")]
    RankUnsupported,
    #[error("module depth {depth} exceeds the available height {height}")]
    DepthExceeded { depth: i64, height: i64 },
    #[error("ψ_ı does not preserve the integral lattice: entry ({row}, {col}) = {value}")]
    LatticeNotPreserved {
        row: String,
        col: String,
        value: String,
    },
    #[error("triangularity failure: {0}")]
    TriangularityFailure(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error(transparent)]
    Quasi(#[from] QuasiError),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite-dimensional weight module with a distinguished ordered basis of weight vectors.
///
/// `depths[k]` is `λ_top − wt(b_k)` in `N[I]`; `E`/`F` matrices act on column vectors.
#[derive(Clone)]
pub struct WeightModule {
    u: Arc<Covering>,
    pub labels: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub depths: Vec<Weight>,
    pub parities: Vec<i64>,
    pub e: Vec<Matrix>,
    pub f: Vec<Matrix>,
    pub highest: Option<usize>,
    /// Depth at which `F` was cut off, if the module is not closed under `F`.
    pub truncation: Option<i64>,
}

impl fmt::Debug for WeightModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightModule")
            .field("labels", &self.labels)
            .field("truncation", &self.truncation)
            .finish()
    }
}

fn unit(n: usize, k: usize) -> Vec<QPiScalar> {
    let mut v = vec![QPiScalar::zero(); n];
    v[k] = QPiScalar::one();
    v
}

fn is_zero_vec(v: &[QPiScalar]) -> bool {
    v.iter().all(QPiScalar::is_zero)
}

fn add_into(acc: &mut [QPiScalar], v: &[QPiScalar], c: &QPiScalar) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.add(&x.mul(c));
        }
    }
}

impl WeightModule {
    pub fn covering(&self) -> &Arc<Covering> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Maximal height of a depth.
    pub fn depth(&self) -> i64 {
        self.depths.iter().map(Weight::ht).max().unwrap_or(0)
    }

    pub fn weight_spaces(&self) -> BTreeMap<Vec<i64>, Vec<usize>> {
        let mut out: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (k, w) in self.weights.iter().enumerate() {
            out.entry(w.clone()).or_default().push(k);
        }
        out
    }

    /// Scalar by which `J_j K_k` acts on basis vector `idx`.
    fn jk_scalar(&self, idx: usize, j: &[u8], k: &[i64]) -> QPiScalar {
        let root = &self.u.datum().root;
        let jj: Vec<i64> = j.iter().map(|&x| x as i64).collect();
        QPiScalar::pi_q_pow(
            root.pair(&jj, &self.weights[idx]),
            root.pair(k, &self.weights[idx]),
        )
    }

    fn apply_letters(&self, mats: &[Matrix], w: &Word, v: &[QPiScalar]) -> Vec<QPiScalar> {
        let mut out = v.to_vec();
        for &i in w.0.iter().rev() {
            if is_zero_vec(&out) {
                break;
            }
            out = linalg::mat_vec(&mats[i], &out);
        }
        out
    }

    /// `F_w v` for a word `w`, applied letter by letter.
    pub fn apply_f_word(&self, w: &Word, v: &[QPiScalar]) -> Vec<QPiScalar> {
        self.apply_letters(&self.f, w, v)
    }

    /// `E_w v` for a word `w`, applied letter by letter.
    pub fn apply_e_word(&self, w: &Word, v: &[QPiScalar]) -> Vec<QPiScalar> {
        self.apply_letters(&self.e, w, v)
    }

    pub fn apply_monomial(&self, m: &Monomial, v: &[QPiScalar]) -> Vec<QPiScalar> {
        let mut out = self.apply_e_word(&m.e, v);
        for (k, x) in out.iter_mut().enumerate() {
            if !x.is_zero() {
                *x = x.mul(&self.jk_scalar(k, &m.j, &m.k));
            }
        }
        self.apply_f_word(&m.f, &out)
    }

    pub fn apply(&self, x: &PBWElement, v: &[QPiScalar]) -> Vec<QPiScalar> {
        let mut out = vec![QPiScalar::zero(); self.dim()];
        for (m, c) in x.terms() {
            add_into(&mut out, &self.apply_monomial(m, v), c);
        }
        out
    }

    /// Matrix of `x`; column `k` is the image of basis vector `k`.
    pub fn matrix_of(&self, x: &PBWElement) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<QPiScalar>> = (0..n)
            .into_par_iter()
            .map(|k| self.apply(x, &unit(n, k)))
            .collect();
        linalg::transpose(&cols)
    }

    pub fn matrix_of_monomial(&self, m: &Monomial) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<QPiScalar>> = (0..n)
            .into_par_iter()
            .map(|k| self.apply_monomial(m, &unit(n, k)))
            .collect();
        linalg::transpose(&cols)
    }

    /// Module with basis given by the columns of `c`, each a weight vector.
    pub fn change_basis(
        &self,
        c: &Matrix,
        labels: Vec<String>,
    ) -> Result<WeightModule, ModuleError> {
        let n = self.dim();
        let inv = linalg::inverse(c)?;
        let conj = |m: &Matrix| linalg::mat_mul(&inv, &linalg::mat_mul(m, c));
        let mut weights = Vec::with_capacity(n);
        let mut depths = Vec::with_capacity(n);
        let mut parities = Vec::with_capacity(n);
        for j in 0..n {
            let support: Vec<usize> = (0..n).filter(|&i| !c[i][j].is_zero()).collect();
            let Some(&first) = support.first() else {
                return Err(ModuleError::Assertion(format!("basis vector {j} is zero")));
            };
            if support.iter().any(|&i| {
                self.weights[i] != self.weights[first] || self.parities[i] != self.parities[first]
            }) {
                return Err(ModuleError::Assertion(format!(
                    "basis vector {} is not a homogeneous weight vector",
                    labels[j]
                )));
            }
            weights.push(self.weights[first].clone());
            depths.push(self.depths[first].clone());
            parities.push(self.parities[first]);
        }
        let highest = self
            .highest
            .and_then(|h| (0..n).find(|&j| !c[h][j].is_zero() && self.depths[h] == depths[j]));
        Ok(WeightModule {
            u: self.u.clone(),
            labels,
            weights,
            depths,
            parities,
            e: self.e.iter().map(conj).collect(),
            f: self.f.iter().map(conj).collect(),
            highest,
            truncation: self.truncation,
        })
    }

    /// Checks the defining relations as matrix identities on every basis vector below the truncation
    /// boundary; returns the number of identities checked.
    pub fn audit(&self) -> Result<usize, ModuleError> {
        let u = &self.u;
        let n = u.rank();
        let dim = self.dim();
        let safe: Vec<usize> = match self.truncation {
            Some(t) => (0..dim).filter(|&k| self.depths[k].ht() + 2 < t).collect(),
            None => (0..dim).collect(),
        };
        let root = &u.datum().root;
        let mut checked = 0;
        for i in 0..n {
            for k in 0..dim {
                for r in 0..dim {
                    let target_e: Vec<i64> = self.weights[k]
                        .iter()
                        .zip(&root.pairing[i])
                        .map(|(a, b)| a + b)
                        .collect();
                    let target_f: Vec<i64> = self.weights[k]
                        .iter()
                        .zip(&root.pairing[i])
                        .map(|(a, b)| a - b)
                        .collect();
                    if !self.e[i][r][k].is_zero() && self.weights[r] != target_e {
                        return Err(ModuleError::Assertion(format!(
                            "E_{} does not raise the weight of {}",
                            u.labels()[i],
                            self.labels[k]
                        )));
                    }
                    if !self.f[i][r][k].is_zero() && self.weights[r] != target_f {
                        return Err(ModuleError::Assertion(format!(
                            "F_{} does not lower the weight of {}",
                            u.labels()[i],
                            self.labels[k]
                        )));
                    }
                }
            }
        }
        let mut gens: Vec<(String, PBWElement)> = Vec::new();
        for i in 0..n {
            let l = u.labels()[i];
            gens.push((format!("E{l}"), u.e(i)));
            gens.push((format!("F{l}"), u.f(i)));
            gens.push((format!("Kt{l}"), u.ktilde(i, 1)));
            gens.push((format!("Jt{l}"), u.jtilde(i)));
        }
        for (na, a) in &gens {
            for (nb, b) in &gens {
                let ab = u.mul(a, b)?;
                for &k in &safe {
                    let v = unit(dim, k);
                    let lhs = self.apply(a, &self.apply(b, &v));
                    let rhs = self.apply(&ab, &v);
                    if lhs != rhs {
                        return Err(ModuleError::Assertion(format!(
                            "relation {na}·{nb} fails on {}",
                            self.labels[k]
                        )));
                    }
                    checked += 1;
                }
            }
        }
        let fh = u.free_half();
        for i in 0..n {
            for j in 0..n {
                if i == j || 1 - u.cartan().a(i, j) > fh.height() {
                    continue;
                }
                let serre = fh.serre_element(i, j)?;
                for &k in &safe {
                    let v = unit(dim, k);
                    let mut ef = vec![QPiScalar::zero(); dim];
                    let mut ff = vec![QPiScalar::zero(); dim];
                    for (w, c) in serre.terms() {
                        add_into(&mut ef, &self.apply_e_word(w, &v), c);
                        add_into(&mut ff, &self.apply_f_word(w, &v), c);
                    }
                    if !is_zero_vec(&ef) || (self.truncation.is_none() && !is_zero_vec(&ff)) {
                        return Err(ModuleError::Assertion(format!(
                            "Serre relation ({i},{j}) fails on {}",
                            self.labels[k]
                        )));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }
}

fn vector_label(u: &Covering, w: &Word) -> String {
    if w.is_empty() {
        "η".into()
    } else {
        format!(
            "F[{}]η",
            w.0.iter()
                .map(|&i| u.labels()[i].to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Verma module `M(λ)` truncated at depth `n`: basis `F_b η_λ` for pivot words `b` of height `≤ n`.
pub fn verma(u: &Arc<Covering>, lambda: &[i64], n: i64) -> Result<WeightModule, ModuleError> {
    let fh = u.free_half();
    if n > fh.height() {
        return Err(ModuleError::DepthExceeded {
            depth: n,
            height: fh.height(),
        });
    }
    let rank = u.rank();
    let root = &u.datum().root;
    let c = u.cartan();
    let mut words: Vec<Word> = Vec::new();
    let mut depths = Vec::new();
    for nu in Weight::all_up_to_height(rank, n) {
        for p in &fh.quotient_basis(&nu)?.pivots {
            words.push(p.clone());
            depths.push(nu.clone());
        }
    }
    let index: HashMap<Word, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, w)| (w, k))
        .collect();
    let dim = words.len();
    let weights: Vec<Vec<i64>> = depths
        .iter()
        .map(|d| {
            lambda
                .iter()
                .zip(root.root_weight(&d.0))
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    let parities: Vec<i64> = depths.iter().map(|d| c.weight_parity(&d.0)).collect();
    let mut e = vec![linalg::zeros(dim, dim); rank];
    let mut f = vec![linalg::zeros(dim, dim); rank];
    for (col, w) in words.iter().enumerate() {
        for i in 0..rank {
            if depths[col].ht() < n {
                for (p, coef) in u.reduce(&Word::letter(i).concat(w))? {
                    f[i][index[&p]][col] = f[i][index[&p]][col].add(&coef);
                }
            }
            if w.is_empty() {
                continue;
            }
            let mut m = Monomial::one(u.y_rank());
            m.f = w.clone();
            let prod = u.mul(&u.e(i), &PBWElement::monomial(m, QPiScalar::one()))?;
            for (t, coef) in prod.terms() {
                if !t.e.is_empty() {
                    continue;
                }
                let jj: Vec<i64> = t.j.iter().map(|&x| x as i64).collect();
                let s = QPiScalar::pi_q_pow(root.pair(&jj, lambda), root.pair(&t.k, lambda));
                let row = index[&t.f];
                e[i][row][col] = e[i][row][col].add(&coef.mul(&s));
            }
        }
    }
    Ok(WeightModule {
        u: u.clone(),
        labels: words.iter().map(|w| vector_label(u, w)).collect(),
        weights,
        depths,
        parities,
        e,
        f,
        highest: Some(0),
        truncation: Some(n),
    })
}

/// Integrable simple module `L(λ)` as the quotient of `M(λ)` by the submodule generated by the
/// `F_i^{⟨i,λ⟩+1} η_λ`; built from a Verma module of depth `n`.
pub fn simple(u: &Arc<Covering>, lambda: &[i64], n: i64) -> Result<WeightModule, ModuleError> {
    let datum = u.datum();
    if !datum.is_dominant(lambda) {
        return Err(ModuleError::NotDominant(lambda.to_vec()));
    }
    let v = verma(u, lambda, n)?;
    let dim = v.dim();
    let rank = u.rank();
    let fh = u.free_half();
    let mut sub: Vec<Vec<QPiScalar>> = Vec::new();
    for i in 0..rank {
        let m = datum.root.coroot_pair(i, lambda) + 1;
        if m > n {
            continue;
        }
        let g = v.apply_f_word(&Word::repeat(i, m as usize), &unit(dim, 0));
        for nu in Weight::all_up_to_height(rank, n - m) {
            for p in &fh.quotient_basis(&nu)?.pivots {
                let s = v.apply_f_word(p, &g);
                if !is_zero_vec(&s) {
                    sub.push(s);
                }
            }
        }
    }
    let spaces = v.weight_spaces();
    let mut keep: Vec<usize> = Vec::new();
    let mut proj: HashMap<Vec<i64>, (Vec<usize>, Matrix)> = HashMap::new();
    for (w, idx) in &spaces {
        let restrict =
            |x: &[QPiScalar]| -> Vec<QPiScalar> { idx.iter().map(|&k| x[k].clone()).collect() };
        let mut basis = IncrementalBasis::new();
        let mut cols: Vec<Vec<QPiScalar>> = Vec::new();
        for s in &sub {
            let r = restrict(s);
            if !is_zero_vec(&r) && basis.try_add(&r)? {
                cols.push(r);
            }
        }
        let n_sub = cols.len();
        let mut local_keep = Vec::new();
        for (pos, &k) in idx.iter().enumerate() {
            let r = unit(idx.len(), pos);
            if basis.try_add(&r)? {
                cols.push(r);
                local_keep.push(k);
            }
        }
        let inv = linalg::inverse(&linalg::transpose(&cols))?;
        proj.insert(w.clone(), (idx.clone(), inv[n_sub..].to_vec()));
        keep.extend(local_keep);
    }
    keep.sort_unstable();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &k)| (k, a)).collect();
    let qdim = keep.len();
    let project = |x: &[QPiScalar], out: &mut Vec<QPiScalar>| {
        for (idx, p) in proj.values() {
            let local: Vec<QPiScalar> = idx.iter().map(|&k| x[k].clone()).collect();
            if is_zero_vec(&local) {
                continue;
            }
            let coords = linalg::mat_vec(p, &local);
            let kept: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|k| pos.contains_key(k))
                .collect();
            for (k, c) in kept.iter().zip(coords) {
                out[pos[k]] = c;
            }
        }
    };
    let quotient = |mats: &[Matrix]| -> Vec<Matrix> {
        mats.iter()
            .map(|m| {
                let cols: Vec<Vec<QPiScalar>> = keep
                    .iter()
                    .map(|&k| {
                        let col: Vec<QPiScalar> = (0..dim).map(|r| m[r][k].clone()).collect();
                        let mut out = vec![QPiScalar::zero(); qdim];
                        project(&col, &mut out);
                        out
                    })
                    .collect();
                linalg::transpose(&cols)
            })
            .collect()
    };
    let e = quotient(&v.e);
    let f = quotient(&v.f);
    let truncated = keep.iter().any(|&k| v.depths[k].ht() >= n);
    Ok(WeightModule {
        u: u.clone(),
        labels: keep.iter().map(|&k| v.labels[k].clone()).collect(),
        weights: keep.iter().map(|&k| v.weights[k].clone()).collect(),
        depths: keep.iter().map(|&k| v.depths[k].clone()).collect(),
        parities: keep.iter().map(|&k| v.parities[k]).collect(),
        e,
        f,
        highest: Some(0),
        truncation: truncated.then_some(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;
    use crate::scalar::qpi_integer;

    fn cov(name: &str, h: i64) -> Arc<Covering> {
        Arc::new(Covering::new(Arc::new(FreeHalf::new(
            builtin(name).unwrap(),
            h,
        ))))
    }

    #[test]
    fn verma_rank_one() {
        let u = cov("rank1", 6);
        let m = verma(&u, &[3], 5).unwrap();
        assert_eq!(m.dim(), 6);
        assert_eq!(m.weight_spaces()[&vec![3]], vec![0]);
        // E F η = [⟨i,λ⟩] η
        let v = m.apply_f_word(&Word::letter(0), &unit(6, 0));
        let w = m.apply_e_word(&Word::letter(0), &v);
        assert_eq!(w[0], qpi_integer(3, 1));
        assert!(m.audit().unwrap() > 0);
    }

    #[test]
    fn simple_rank_one_dims() {
        let u = cov("rank1", 8);
        for n in 0..=5 {
            let l = simple(&u, &[n], n + 1).unwrap();
            assert_eq!(l.dim() as i64, n + 1);
            assert!(l.truncation.is_none());
            assert!(l.audit().is_ok());
        }
        assert!(matches!(
            simple(&u, &[-1], 3),
            Err(ModuleError::NotDominant(_))
        ));
    }

    #[test]
    fn simple_rank_two() {
        let u = cov("B(0,2)", 6);
        let l = simple(&u, &[1, 0], 5).unwrap();
        assert!(l.truncation.is_none());
        assert!(l.audit().unwrap() > 0);
        let spaces = l.weight_spaces();
        assert!(spaces.values().all(|v| v.len() == 1));
    }
}
