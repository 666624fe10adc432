use super::tensor::{cb_tensor, rank1_based, TensorModule};
use super::{icanonical_basis, psi_i_module, unit, ModuleError};
use crate::covering::Covering;
use crate::linalg::{self, LinalgError, Matrix};
use crate::quasi::{b_generator, theta, upsilon, ThetaExpansion, UpsilonExpansion};
use crate::scalar::QPiScalar;
use std::sync::Arc;

/// One module `L^ı(λ, μ)` of the projective system.
#[derive(Debug, Clone)]
pub struct StabilizationStep {
    pub lambda: i64,
    pub mu: i64,
    /// Whether the ı-canonical element with the requested leading label lies in `L(λ, μ)`;
    /// otherwise it is excluded and treated as zero.
    pub in_submodule: bool,
    /// Expansion in the ◊ basis.
    pub expansion: Vec<(String, QPiScalar)>,
    /// Coefficients `c_k` with `x = Σ_k c_k B^k (η ⊗ η)`.
    pub coefficients: Vec<QPiScalar>,
    pub psi_i_invariant: bool,
    /// `π(x_{s+1}) = x_s`, where `π` sends `B^k(η ⊗ η)` to `B^k(η ⊗ η)`; `None` for the last step.
    pub agrees_with_next: Option<bool>,
    /// Whether `π` respects the minimal relation of `B` on the larger module's top vector.
    pub projection_well_defined: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct StabilizationReport {
    pub b1: usize,
    pub b2: usize,
    pub zeta: u8,
    pub steps: Vec<StabilizationStep>,
    /// First step from which every later comparison agrees (requires at least one comparison).
    pub stable_from: Option<usize>,
    /// `c_k` of the stabilized element as a polynomial in `B` acting on `1_ζ`.
    pub stabilized: Option<Vec<QPiScalar>>,
}

impl StabilizationReport {
    /// Stable and every step, as well as the stabilized polynomial, is `ψ_ı`-invariant.
    pub fn ok(&self) -> bool {
        self.stable_from.is_some()
            && self.steps.iter().all(|s| s.psi_i_invariant)
            && self
                .steps
                .iter()
                .all(|s| s.projection_well_defined != Some(false))
            && self
                .stabilized
                .as_ref()
                .is_some_and(|c| c.iter().all(QPiScalar::is_bar_invariant))
    }
}

struct StepData {
    lambda: i64,
    mu: i64,
    x: Vec<QPiScalar>,
    in_sub: bool,
    labels: Vec<String>,
    /// `B^k (η ⊗ η)`.
    b: Matrix,
    top: usize,
    cyclic: Vec<Vec<QPiScalar>>,
    coefficients: Vec<QPiScalar>,
    relation: Vec<QPiScalar>,
    psi_ok: bool,
}

fn powers(b: &Matrix, top: usize, count: usize) -> Vec<Vec<QPiScalar>> {
    let mut v = unit(b.len(), top);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(v.clone());
        v = linalg::mat_vec(b, &v);
    }
    out
}

fn build_step(
    u: &Arc<Covering>,
    ups: &UpsilonExpansion,
    th: &ThetaExpansion,
    lambda: i64,
    mu: i64,
    b1: usize,
    b2: usize,
) -> Result<StepData, ModuleError> {
    let t = TensorModule::new(rank1_based(u, lambda)?, rank1_based(u, mu)?, th)?;
    let d = cb_tensor(&t)?;
    let p = psi_i_module(&d.based, ups)?;
    let ib = icanonical_basis(&d.based, &p)?;
    let m = &d.based.module;
    let idx = b1 * (mu as usize + 1) + b2;
    let x: Vec<QPiScalar> = (0..m.dim()).map(|r| ib.coords[r][idx].clone()).collect();
    let psi_ok = linalg::mat_vec(&p, &linalg::vec_bar(&x)) == x;
    let b = m.matrix_of(&b_generator(u, 0, &ups.c[0])?);
    let top = m
        .highest
        .ok_or_else(|| ModuleError::Assertion("no highest weight vector".into()))?;
    let mut cyclic = Vec::new();
    let mut inc = linalg::IncrementalBasis::new();
    let mut v = unit(m.dim(), top);
    while inc.try_add(&v)? {
        cyclic.push(v.clone());
        v = linalg::mat_vec(&b, &v);
    }
    let cols = linalg::transpose(&cyclic);
    let relation = linalg::solve(&cols, &v)?;
    let (coefficients, in_sub) = match linalg::solve(&cols, &x) {
        Ok(c) => (c, true),
        Err(LinalgError::Inconsistent) => (vec![QPiScalar::zero(); cyclic.len()], false),
        Err(e) => return Err(e.into()),
    };
    Ok(StepData {
        lambda,
        mu,
        x,
        in_sub,
        labels: m.labels.clone(),
        b,
        top,
        cyclic,
        coefficients,
        relation,
        psi_ok,
    })
}

/// `π(Σ c_k B^k(η⊗η)) = Σ c_k B^k(η'⊗η')` from `big` to `small`; also reports whether the minimal
/// relation of `B` on `big` holds in `small`.
fn project(big: &StepData, small: &StepData) -> (Vec<QPiScalar>, bool) {
    let n = big.cyclic.len();
    let w = powers(&small.b, small.top, n + 1);
    let mut img = vec![QPiScalar::zero(); small.x.len()];
    let mut rel = vec![QPiScalar::zero(); small.x.len()];
    for k in 0..n {
        for (r, v) in w[k].iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            img[r] = img[r].add(&big.coefficients[k].mul(v));
            rel[r] = rel[r].add(&big.relation[k].mul(v));
        }
    }
    (img, rel == w[n])
}

/// Follows the ı-canonical element with leading term `F^{(b1)}η ◊ F^{(b2)}η` through
/// `L^ı(λ_s, μ_s)` with `λ_s = m + ζ + s`, `μ_s = m + s`, `m = max(b1, b2)`, `s < steps`.
///
/// Rank one, split, with `ψ_ı` built from `Υ`. The covering height must reach `λ_s + μ_s`.
pub fn stabilization(
    u: &Arc<Covering>,
    b1: usize,
    b2: usize,
    zeta: u8,
    steps: usize,
) -> Result<StabilizationReport, ModuleError> {
    if u.rank() != 1 {
        return Err(ModuleError::RankUnsupported);
    }
    let base = b1.max(b2) as i64;
    let last = steps.saturating_sub(1) as i64;
    let (lmax, mmax) = (base + zeta as i64 + last, base + last);
    let height = u.free_half().height();
    if height < lmax + mmax {
        return Err(ModuleError::DepthExceeded {
            depth: lmax + mmax,
            height,
        });
    }
    let ups = upsilon(u.free_half(), lmax + mmax)?;
    let th = theta(u, mmax)?;
    let data: Vec<StepData> = (0..steps as i64)
        .map(|s| build_step(u, &ups, &th, base + zeta as i64 + s, base + s, b1, b2))
        .collect::<Result<_, _>>()?;
    let zero = |n: usize| vec![QPiScalar::zero(); n];
    let mut out: Vec<StabilizationStep> = Vec::new();
    for (s, d) in data.iter().enumerate() {
        let (agrees, well) = match data.get(s + 1) {
            Some(next) => {
                let (img, well) = project(next, d);
                let img = if next.in_sub { img } else { zero(d.x.len()) };
                let mine = if d.in_sub {
                    d.x.clone()
                } else {
                    zero(d.x.len())
                };
                (Some(img == mine), Some(well))
            }
            None => (None, None),
        };
        out.push(StabilizationStep {
            lambda: d.lambda,
            mu: d.mu,
            in_submodule: d.in_sub,
            expansion: d
                .x
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (d.labels[k].clone(), c.clone()))
                .collect(),
            coefficients: trim(&d.coefficients),
            psi_i_invariant: d.psi_ok,
            agrees_with_next: agrees,
            projection_well_defined: well,
        });
    }
    let stable_from = (0..out.len().saturating_sub(1))
        .find(|&s| out[s..].iter().all(|st| st.agrees_with_next != Some(false)));
    let stabilized = stable_from.map(|s| out[s + 1].coefficients.clone());
    Ok(StabilizationReport {
        b1,
        b2,
        zeta,
        steps: out,
        stable_from,
        stabilized,
    })
}

fn trim(c: &[QPiScalar]) -> Vec<QPiScalar> {
    let end = c.iter().rposition(|x| !x.is_zero()).map_or(0, |p| p + 1);
    c[..end].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;

    #[test]
    fn highest_class_stabilizes_immediately() {
        let u = Arc::new(Covering::new(Arc::new(FreeHalf::new(
            builtin("rank1").unwrap(),
            6,
        ))));
        let r = stabilization(&u, 0, 0, 0, 3).unwrap();
        assert_eq!(r.stable_from, Some(0));
        assert_eq!(r.stabilized, Some(vec![QPiScalar::one()]));
        assert!(r.ok());
    }
}
