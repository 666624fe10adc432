//! Super Cartan data, root data, ı-parameters and weights.

mod builtin;
mod descriptor;
mod weight;

pub use builtin::{builtin, builtin_names};
pub use descriptor::{DatumDescriptor, ScalarPair};
pub use weight::{Weight, WeightStats};

use crate::scalar::QPiScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("negative weight coefficient {0} at index {1}")]
    NegativeWeight(i64, usize),
    #[error("unknown built-in datum {0:?}")]
    UnknownBuiltin(String),
    #[error("malformed datum descriptor: {0}")]
    Malformed(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
}

/// One failed condition, named as in the axioms of a super Cartan datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.detail)
    }
}

/// The pair `(I, ·)` together with the parity function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperCartanDatum {
    /// External labels of the index set, in internal order.
    pub labels: Vec<i64>,
    pub dot: Vec<Vec<i64>>,
    pub parity: Vec<u8>,
    /// Whether the datum is declared super, so that some index must be odd.
    pub is_super: bool,
}

impl SuperCartanDatum {
    pub fn rank(&self) -> usize {
        self.parity.len()
    }

    /// `d_i = i·i / 2`.
    pub fn d(&self, i: usize) -> i64 {
        self.dot[i][i] / 2
    }

    /// `a_ij = 2 (i·j) / (i·i)`.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        2 * self.dot[i][j] / self.dot[i][i]
    }

    pub fn p(&self, i: usize) -> i64 {
        self.parity[i] as i64
    }

    /// Cartan matrix `A = (a_ij)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.a(i, j)).collect())
            .collect()
    }

    /// `q_i = q^{d_i}`.
    pub fn q_i(&self, i: usize) -> QPiScalar {
        QPiScalar::q_pow(self.d(i))
    }

    /// `π_i = π^{p(i)}`.
    pub fn pi_i(&self, i: usize) -> QPiScalar {
        QPiScalar::pi_pow(self.p(i))
    }

    /// `π_i^a q_i^e`.
    pub fn pi_q_i(&self, i: usize, a: i64, e: i64) -> QPiScalar {
        QPiScalar::pi_q_pow(a * self.p(i), e * self.d(i))
    }

    /// `(θ_i, θ_i) = (1 − π_i q_i^{-2})^{-1}`.
    pub fn theta_norm(&self, i: usize) -> QPiScalar {
        QPiScalar::one()
            .sub(&self.pi_q_i(i, 1, -2))
            .invert()
            .expect("1 - π_i q_i^-2 is invertible")
    }

    /// `π_i q_i − q_i^{-1}`.
    pub fn qdiff(&self, i: usize) -> QPiScalar {
        self.pi_q_i(i, 1, 1).sub(&self.pi_q_i(i, 0, -1))
    }

    /// `μ · ν` extended bilinearly to `Z[I]`.
    pub fn dot_weights(&self, mu: &[i64], nu: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if mu[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += mu[i] * nu[j] * self.dot[i][j];
            }
        }
        s
    }

    /// `ν · i` for a single index.
    pub fn dot_index(&self, nu: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| nu[j] * self.dot[j][i]).sum()
    }

    /// Parity `p(ν) = Σ ν_i p(i) mod 2`.
    pub fn weight_parity(&self, nu: &[i64]) -> i64 {
        (0..self.rank())
            .map(|i| nu[i] * self.p(i))
            .sum::<i64>()
            .rem_euclid(2)
    }

    pub fn index_of_label(&self, label: i64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Conditions (a)–(f).
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.rank();
        let bad = |c: &'static str, d: String| Violation {
            condition: c,
            detail: d,
        };
        if self.dot.len() != n || self.dot.iter().any(|r| r.len() != n) {
            out.push(bad("shape", format!("dot matrix must be {n}x{n}")));
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                if self.dot[i][j] != self.dot[j][i] {
                    out.push(bad("symmetry", format!("i·j != j·i for ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            if self.parity[i] > 1 {
                out.push(bad(
                    "parity",
                    format!("p({}) must be 0 or 1", self.labels[i]),
                ));
            }
            if self.dot[i][i] <= 0 || self.dot[i][i] % 2 != 0 {
                out.push(bad(
                    "(a) positivity",
                    format!("i·i = {} for i = {}", self.dot[i][i], self.labels[i]),
                ));
                continue;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let num = 2 * self.dot[i][j];
                if num % self.dot[i][i] != 0 || num > 0 {
                    out.push(bad(
                        "(b) off-diagonal",
                        format!(
                            "2(i·j)/(i·i) = {num}/{} not in -N for (i,j) = ({},{})",
                            self.dot[i][i], self.labels[i], self.labels[j]
                        ),
                    ));
                } else if self.parity[i] == 1 && (num / self.dot[i][i]) % 2 != 0 {
                    out.push(bad(
                        "(d) odd rows even",
                        format!(
                            "a_ij = {} is odd for odd i = {}",
                            num / self.dot[i][i],
                            self.labels[i]
                        ),
                    ));
                }
            }
            if (self.d(i) - self.p(i)).rem_euclid(2) != 0 {
                out.push(bad(
                    "(e) bar-consistency",
                    format!(
                        "d_i = {} but p(i) = {} for i = {}",
                        self.d(i),
                        self.parity[i],
                        self.labels[i]
                    ),
                ));
            }
        }
        if self.is_super && self.parity.iter().all(|&p| p == 0) {
            out.push(bad(
                "(c) super",
                "a super datum needs an odd index".to_string(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if self.dot[i][j] % 2 != 0 {
                    out.push(bad(
                        "(f) evenness",
                        format!(
                            "i·j = {} is odd for ({},{})",
                            self.dot[i][j], self.labels[i], self.labels[j]
                        ),
                    ));
                }
            }
        }
        out
    }
}

/// `Y = X = Z^{x_rank}` with the standard perfect pairing, coroots `i = e_i`,
/// and roots `i'` given by `pairing[i]` in X-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub x_rank: usize,
    pub pairing: Vec<Vec<i64>>,
}

impl RootDatum {
    /// The simply connected realization: `⟨i, j'⟩ = a_ij` with `X = Z^rank`.
    pub fn simply_connected(cartan: &SuperCartanDatum) -> Self {
        let n = cartan.rank();
        RootDatum {
            x_rank: n,
            pairing: (0..n)
                .map(|j| (0..n).map(|i| cartan.a(i, j)).collect())
                .collect(),
        }
    }

    /// `⟨μ, λ⟩` for `μ ∈ Y`, `λ ∈ X`.
    pub fn pair(&self, mu: &[i64], lambda: &[i64]) -> i64 {
        mu.iter().zip(lambda).map(|(a, b)| a * b).sum()
    }

    /// `⟨i, λ⟩ = λ_i`.
    pub fn coroot_pair(&self, i: usize, lambda: &[i64]) -> i64 {
        lambda[i]
    }

    /// The X-element `Σ ν_i i'`.
    pub fn root_weight(&self, nu: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.x_rank];
        for (i, &c) in nu.iter().enumerate() {
            if c != 0 {
                for (k, v) in self.pairing[i].iter().enumerate() {
                    out[k] += c * v;
                }
            }
        }
        out
    }

    /// `⟨μ, ν'⟩` for `μ ∈ Y`, `ν ∈ Z[I]`.
    pub fn pair_root(&self, mu: &[i64], nu: &[i64]) -> i64 {
        self.pair(mu, &self.root_weight(nu))
    }

    fn violations(&self, cartan: &SuperCartanDatum) -> Vec<Violation> {
        let n = cartan.rank();
        let mut out = Vec::new();
        if self.x_rank < n {
            out.push(Violation {
                condition: "Y-regularity",
                detail: format!("X_rank {} < |I| = {n}", self.x_rank),
            });
            return out;
        }
        if self.pairing.len() != n || self.pairing.iter().any(|r| r.len() != self.x_rank) {
            out.push(Violation {
                condition: "shape",
                detail: format!("pairing must be {n}x{}", self.x_rank),
            });
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                if cartan.dot[i][i] > 0 && self.pairing[j][i] != cartan.a(i, j) {
                    out.push(Violation {
                        condition: "root datum (c)",
                        detail: format!(
                            "<{}, {}'> = {} but 2(i·j)/(i·i) = {}",
                            cartan.labels[i],
                            cartan.labels[j],
                            self.pairing[j][i],
                            cartan.a(i, j)
                        ),
                    });
                }
            }
        }
        let rows: Vec<Vec<BigRational>> = self
            .pairing
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect();
        if rational_rank(rows) < n {
            out.push(Violation {
                condition: "X-regularity",
                detail: "the roots i' are linearly dependent".into(),
            });
        }
        out
    }
}

/// `τ` and `ς`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IParams {
    pub tau: Vec<usize>,
    pub varsigma: Vec<QPiScalar>,
}

impl IParams {
    /// `τ = id`, `ς_i = q_i^{-1}`.
    pub fn standard(cartan: &SuperCartanDatum) -> Self {
        let n = cartan.rank();
        IParams {
            tau: (0..n).collect(),
            varsigma: (0..n).map(|i| QPiScalar::q_pow(-cartan.d(i))).collect(),
        }
    }

    pub fn is_split(&self) -> bool {
        self.tau.iter().enumerate().all(|(i, &t)| i == t)
    }
}

/// Outcome of comparing two weights under `≤`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    pub diagnostic: Option<String>,
}

/// A complete datum: Cartan datum, root datum and ı-parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Datum {
    pub name: String,
    pub cartan: SuperCartanDatum,
    pub root: RootDatum,
    pub params: IParams,
}

impl Datum {
    pub fn new(name: &str, cartan: SuperCartanDatum, root: RootDatum, params: IParams) -> Self {
        Datum {
            name: name.to_string(),
            cartan,
            root,
            params,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn with_varsigma(mut self, varsigma: Vec<QPiScalar>) -> Self {
        self.params.varsigma = varsigma;
        self
    }

    /// Conditions (a)–(f) on the Cartan datum and the root-datum axioms.
    pub fn validate_datum(&self) -> Vec<Violation> {
        let mut v = self.cartan.violations();
        if v.iter()
            .any(|x| x.condition == "shape" || x.condition.starts_with("(a)"))
        {
            return v;
        }
        v.extend(self.root.violations(&self.cartan));
        v
    }

    /// Conditions (bar1)–(bar3) and the requirements on `τ`.
    pub fn validate_params(&self) -> Vec<Violation> {
        let c = &self.cartan;
        let p = &self.params;
        let n = c.rank();
        let mut out = Vec::new();
        if p.tau.len() != n || p.varsigma.len() != n {
            out.push(Violation {
                condition: "shape",
                detail: format!("tau and varsigma need {n} entries"),
            });
            return out;
        }
        for i in 0..n {
            let t = p.tau[i];
            if t >= n {
                out.push(Violation {
                    condition: "tau",
                    detail: format!("tau({}) out of range", c.labels[i]),
                });
                return out;
            }
            if p.tau[t] != i {
                out.push(Violation {
                    condition: "tau",
                    detail: format!("tau is not an involution at {}", c.labels[i]),
                });
            }
            if c.parity[t] != c.parity[i] {
                out.push(Violation {
                    condition: "tau",
                    detail: format!("tau does not preserve parity at {}", c.labels[i]),
                });
            }
            for j in 0..n {
                if c.dot[i][j] != c.dot[t][p.tau[j]] {
                    out.push(Violation {
                        condition: "tau",
                        detail: format!("i·j != τi·τj at ({},{})", c.labels[i], c.labels[j]),
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            let s = &p.varsigma[i];
            if s.invert().is_err() {
                out.push(Violation {
                    condition: "varsigma",
                    detail: format!("varsigma_{} is not invertible", c.labels[i]),
                });
                continue;
            }
            let t = p.tau[i];
            if t == i {
                let linked = (0..n).any(|j| j != i && c.a(i, j) != 0);
                let sq = s.mul(&c.q_i(i));
                if linked && sq.bar() != sq {
                    out.push(Violation {
                        condition: "(bar1)",
                        detail: format!(
                            "bar(varsigma_i q_i) != varsigma_i q_i for i = {}",
                            c.labels[i]
                        ),
                    });
                }
            } else if c.a(i, t) == 0 {
                if s.bar() != *s || p.varsigma[t] != *s {
                    out.push(Violation {
                        condition: "(bar2)",
                        detail: format!(
                            "need bar(varsigma_i) = varsigma_i = varsigma_tau(i) for i = {}",
                            c.labels[i]
                        ),
                    });
                }
            } else {
                let rhs = c.pi_q_i(i, 1, -c.a(i, t)).mul(&s.bar());
                if p.varsigma[t] != rhs {
                    out.push(Violation {
                        condition: "(bar3)",
                        detail: format!(
                            "varsigma_tau(i) != pi_i q_i^(-a) bar(varsigma_i) for i = {}",
                            c.labels[i]
                        ),
                    });
                }
            }
        }
        out
    }

    /// Statistics of `ν ∈ N[I]`.
    pub fn weight_stats(&self, nu: &Weight) -> Result<WeightStats, DatumError> {
        nu.stats(&self.cartan)
    }

    /// `λ ≤ λ'` iff `λ' − λ ∈ N[I]` (through the roots `i'`).
    pub fn leq(&self, lambda: &[i64], lambda2: &[i64]) -> Comparison {
        let diff: Vec<i64> = lambda2.iter().zip(lambda).map(|(a, b)| a - b).collect();
        match self.root_coordinates(&diff) {
            Some(nu) => Comparison {
                holds: nu.iter().all(|&c| c >= 0),
                diagnostic: None,
            },
            None => Comparison {
                holds: false,
                diagnostic: Some(format!("{diff:?} is not in the root lattice")),
            },
        }
    }

    /// Integer coordinates of `x ∈ X` in the roots `i'`, if `x` lies in their span.
    pub fn root_coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        let n = self.rank();
        let m = self.root.x_rank;
        // Solve Σ ν_i pairing[i] = x as an m×n system.
        let mut rows: Vec<Vec<BigRational>> = (0..m)
            .map(|k| {
                let mut r: Vec<BigRational> = (0..n)
                    .map(|i| BigRational::from_integer(BigInt::from(self.root.pairing[i][k])))
                    .collect();
                r.push(BigRational::from_integer(BigInt::from(x[k])));
                r
            })
            .collect();
        let pivots = rref(&mut rows, n);
        for r in rows.iter().skip(pivots.len()) {
            if !r[n].is_zero() {
                return None;
            }
        }
        let mut nu = vec![0i64; n];
        for (row, &col) in pivots.iter().enumerate() {
            let v = &rows[row][n];
            if !v.is_integer() {
                return None;
            }
            nu[col] = i64::try_from(v.to_integer()).ok()?;
        }
        if pivots.len() < n {
            return None;
        }
        Some(nu)
    }

    /// `K̃_i = K_{d_i i}` as an element of `Y`.
    pub fn ktilde(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.root.x_rank];
        v[i] = self.cartan.d(i);
        v
    }

    /// `Σ_i ν_i d_i i ∈ Y`, the exponent of `K̃_ν`.
    pub fn ktilde_weight(&self, nu: &[i64]) -> Vec<i64> {
        let mut v = vec![0; self.root.x_rank];
        for (i, &c) in nu.iter().enumerate() {
            v[i] += c * self.cartan.d(i);
        }
        v
    }

    /// Whether `λ` is dominant: `⟨i, λ⟩ ≥ 0` for all `i`.
    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        (0..self.rank()).all(|i| self.root.coroot_pair(i, lambda) >= 0)
    }

    /// The X-weight `λ = Σ_i m_i ϖ_i` with `⟨i, λ⟩ = m_i`.
    pub fn weight_from_pairings(&self, m: &[i64]) -> Vec<i64> {
        let mut v = vec![0; self.root.x_rank];
        v[..m.len()].copy_from_slice(m);
        v
    }
}

/// Reduced row echelon form over Q on the first `ncols` columns; returns pivot columns.
fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                let pivot_row = rows[r].clone();
                for (v, pv) in rows[k].iter_mut().zip(pivot_row.iter()) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    rref(&mut rows, ncols).len()
}

/// Symmetrizability check: `D A` symmetric.
pub fn is_symmetrizable(c: &SuperCartanDatum) -> bool {
    let n = c.rank();
    (0..n).all(|i| (0..n).all(|j| c.d(i) * c.a(i, j) == c.d(j) * c.a(j, i)))
}

/// Finite type: the symmetrized Cartan matrix is positive definite.
pub fn is_finite_type(c: &SuperCartanDatum) -> bool {
    let n = c.rank();
    // Positive definiteness of the symmetrized matrix through leading minors.
    let sym: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(BigInt::from(c.dot[i][j])))
                .collect()
        })
        .collect();
    (1..=n)
        .all(|k| det(&sym[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()).is_positive())
}

fn det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] = &a[r][k] - &v;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;

    #[test]
    fn builtins_validate() {
        for name in builtin_names() {
            let d = builtin(name).unwrap();
            assert!(
                d.validate_datum().is_empty(),
                "{name}: {:?}",
                d.validate_datum()
            );
            assert!(
                d.validate_params().is_empty(),
                "{name}: {:?}",
                d.validate_params()
            );
            assert!(is_symmetrizable(&d.cartan));
        }
    }

    #[test]
    fn parity_mismatch_breaks_bar_consistency() {
        let mut d = builtin("rank1").unwrap();
        d.cartan.dot = vec![vec![4]];
        d.root = RootDatum::simply_connected(&d.cartan);
        let v = d.validate_datum();
        assert!(
            v.iter().any(|x| x.condition == "(e) bar-consistency"),
            "{v:?}"
        );
    }

    #[test]
    fn bar1_conditions() {
        let d = builtin("rank1")
            .unwrap()
            .with_varsigma(vec![QPiScalar::one()]);
        assert!(d.validate_params().is_empty());
        let d2 = builtin("B(0,2)").unwrap();
        assert!(d2.validate_params().is_empty());
        let bad = d2.with_varsigma(vec![QPiScalar::one(), parse_scalar("q^-2").unwrap()]);
        let v = bad.validate_params();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].condition, "(bar1)");
    }

    #[test]
    fn order_on_weights() {
        let d = builtin("B(0,2)").unwrap();
        let lam = vec![1, 3];
        assert!(d.leq(&lam, &lam).holds);
        let up: Vec<i64> = lam
            .iter()
            .zip(&d.root.pairing[0])
            .map(|(a, b)| a + b)
            .collect();
        assert!(d.leq(&lam, &up).holds);
        assert!(!d.leq(&up, &lam).holds);
    }

    #[test]
    fn finite_type_detection() {
        assert!(is_finite_type(&builtin("B(0,2)").unwrap().cartan));
        assert!(is_finite_type(&builtin("B(0,3)").unwrap().cartan));
        assert!(!is_finite_type(&builtin("rank2-km").unwrap().cartan));
    }
}
