//! Dense linear algebra over `Q^π(q)`, carried out separately in each π-component.

use crate::scalar::{QPiScalar, RatFunc};

pub type Matrix = Vec<Vec<QPiScalar>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("pivot structure differs between the two π-components")]
    DimensionMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("system has no solution")]
    Inconsistent,
}

fn component(m: &[Vec<QPiScalar>], plus: bool) -> Vec<Vec<RatFunc>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if plus {
                        x.plus.clone()
                    } else {
                        x.minus.clone()
                    }
                })
                .collect()
        })
        .collect()
}

fn combine(p: Vec<Vec<RatFunc>>, m: Vec<Vec<RatFunc>>) -> Matrix {
    p.into_iter()
        .zip(m)
        .map(|(rp, rm)| {
            rp.into_iter()
                .zip(rm)
                .map(|(a, b)| QPiScalar::new(a, b))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form over a field on the first `ncols` columns.
fn rref(rows: &mut [Vec<RatFunc>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        QPiScalar::one()
                    } else {
                        QPiScalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![QPiScalar::zero(); c]; r]
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = QPiScalar::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s = s.add(&row[k].mul(&b[k][j]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[QPiScalar]) -> Vec<QPiScalar> {
    a.iter()
        .map(|row| {
            let mut s = QPiScalar::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    s = s.add(&x.mul(y));
                }
            }
            s
        })
        .collect()
}

/// Entrywise bar involution.
pub fn mat_bar(a: &Matrix) -> Matrix {
    a.iter()
        .map(|r| r.iter().map(QPiScalar::bar).collect())
        .collect()
}

pub fn vec_bar(v: &[QPiScalar]) -> Vec<QPiScalar> {
    v.iter().map(QPiScalar::bar).collect()
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(QPiScalar::is_zero))
}

/// Pivot columns of the row space, identical in both components.
pub fn rank_profile(m: &Matrix) -> Result<Vec<usize>, LinalgError> {
    let ncols = m.first().map_or(0, |r| r.len());
    let profile = |s| {
        let mut c = component(m, s);
        rref(&mut c, ncols)
    };
    let (pp, pm) = (profile(true), profile(false));
    if pp != pm {
        return Err(LinalgError::DimensionMismatch);
    }
    Ok(pp)
}

pub fn rank(m: &Matrix) -> Result<usize, LinalgError> {
    rank_profile(m).map(|p| p.len())
}

pub fn inverse(m: &Matrix) -> Result<Matrix, LinalgError> {
    let n = m.len();
    let mut halves = Vec::new();
    for s in [true, false] {
        let mut aug: Vec<Vec<RatFunc>> = component(m, s)
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| {
                    if i == j {
                        RatFunc::one()
                    } else {
                        RatFunc::zero()
                    }
                }));
                r
            })
            .collect();
        let piv = rref(&mut aug, n);
        if piv.len() < n {
            return Err(LinalgError::Singular);
        }
        halves.push(aug.into_iter().map(|r| r[n..].to_vec()).collect::<Vec<_>>());
    }
    let m2 = halves.pop().unwrap();
    let p2 = halves.pop().unwrap();
    Ok(combine(p2, m2))
}

/// Solves `A x = b` for one particular solution.
pub fn solve(a: &Matrix, b: &[QPiScalar]) -> Result<Vec<QPiScalar>, LinalgError> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut sols = Vec::new();
    for s in [true, false] {
        let mut aug: Vec<Vec<RatFunc>> = component(a, s)
            .into_iter()
            .zip(b)
            .map(|(mut r, x)| {
                r.push(if s { x.plus.clone() } else { x.minus.clone() });
                r
            })
            .collect();
        let piv = rref(&mut aug, ncols);
        if aug.iter().skip(piv.len()).any(|r| !r[ncols].is_zero()) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = vec![RatFunc::zero(); ncols];
        for (row, &c) in piv.iter().enumerate() {
            x[c] = aug[row][ncols].clone();
        }
        sols.push(x);
    }
    let xm = sols.pop().unwrap();
    let xp = sols.pop().unwrap();
    Ok(xp
        .into_iter()
        .zip(xm)
        .map(|(a, b)| QPiScalar::new(a, b))
        .collect())
}

/// A basis of `{x : A x = 0}`; free columns must agree between components.
pub fn nullspace(a: &Matrix) -> Result<Vec<Vec<QPiScalar>>, LinalgError> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut per = Vec::new();
    for s in [true, false] {
        let mut c = component(a, s);
        let piv = rref(&mut c, ncols);
        per.push((c, piv));
    }
    let (cm, pm) = per.pop().unwrap();
    let (cp, pp) = per.pop().unwrap();
    if pp != pm {
        return Err(LinalgError::DimensionMismatch);
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pp.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = vec![QPiScalar::zero(); ncols];
            v[f] = QPiScalar::one();
            for (row, &c) in pp.iter().enumerate() {
                v[c] = QPiScalar::new(cp[row][f].neg(), cm[row][f].neg());
            }
            v
        })
        .collect())
}

/// Row basis grown one vector at a time, used for greedy pivot selection.
#[derive(Debug, Clone, Default)]
pub struct IncrementalBasis {
    rows: [Vec<(usize, Vec<RatFunc>)>; 2],
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows[0].is_empty()
    }

    fn reduce(rows: &[(usize, Vec<RatFunc>)], mut v: Vec<RatFunc>) -> Vec<RatFunc> {
        for (p, r) in rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the rows so far; returns whether it was added.
    pub fn try_add(&mut self, v: &[QPiScalar]) -> Result<bool, LinalgError> {
        let mut reduced = Vec::new();
        for (k, s) in [true, false].into_iter().enumerate() {
            let comp: Vec<RatFunc> = v
                .iter()
                .map(|x| if s { x.plus.clone() } else { x.minus.clone() })
                .collect();
            reduced.push(Self::reduce(&self.rows[k], comp));
        }
        let piv: Vec<Option<usize>> = reduced
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()))
            .collect();
        match (piv[0], piv[1]) {
            (None, None) => Ok(false),
            (Some(_), Some(_)) => {
                for (k, r) in reduced.into_iter().enumerate() {
                    let p = piv[k].unwrap();
                    let inv = r[p].inv().expect("nonzero pivot");
                    let r: Vec<RatFunc> = r.iter().map(|x| x.mul(&inv)).collect();
                    for (_, row) in self.rows[k].iter_mut() {
                        if !row[p].is_zero() {
                            let f = row[p].clone();
                            for (x, y) in row.iter_mut().zip(&r) {
                                if !y.is_zero() {
                                    *x = x.sub(&f.mul(y));
                                }
                            }
                        }
                    }
                    self.rows[k].push((p, r));
                }
                Ok(true)
            }
            _ => Err(LinalgError::DimensionMismatch),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;

    fn s(x: &str) -> QPiScalar {
        parse_scalar(x).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![s("q"), s("p")], vec![s("1"), s("q^-1 + p")]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
    }

    #[test]
    fn componentwise_rank_mismatch() {
        let m = vec![vec![s("1 + p")]];
        assert_eq!(rank(&m), Err(LinalgError::DimensionMismatch));
        let mut b = IncrementalBasis::new();
        assert_eq!(
            b.try_add(&[s("1 - p")]),
            Err(LinalgError::DimensionMismatch)
        );
    }

    #[test]
    fn nullspace_and_solve() {
        let m = vec![vec![s("1"), s("q")], vec![s("p"), s("p*q")]];
        let ns = nullspace(&m).unwrap();
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&m, &ns[0]).iter().all(QPiScalar::is_zero));
        let x = solve(&m, &[s("1"), s("p")]).unwrap();
        assert_eq!(mat_vec(&m, &x), vec![s("1"), s("p")]);
        assert_eq!(solve(&m, &[s("1"), s("1")]), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn incremental_basis() {
        let mut b = IncrementalBasis::new();
        assert!(b.try_add(&[s("1"), s("q")]).unwrap());
        assert!(!b.try_add(&[s("q"), s("q^2")]).unwrap());
        assert!(b.try_add(&[s("0"), s("p")]).unwrap());
        assert_eq!(b.len(), 2);
    }
}
