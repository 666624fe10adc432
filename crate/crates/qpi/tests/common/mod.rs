//! Independent oracles shared by the integration and acceptance tests.
//!
//! Everything here works with its own sparse polynomials over `BigRational` and plain
//! Gaussian elimination, so it shares no arithmetic with the solvers under test beyond reading
//! numerators and denominators of specialized scalars.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qpi::scalar::{QPiScalar, RatFunc};
use std::collections::BTreeMap;

/// Sparse Laurent polynomial in `q` with rational coefficients.
pub type Poly = BTreeMap<i64, BigRational>;

pub fn poly_from_ratfunc_laurent(l: &qpi::scalar::Laurent) -> Poly {
    l.terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e, BigRational::from_integer(c.clone())))
        .collect()
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = out.entry(ea + eb).or_insert_with(BigRational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn poly_scale(a: &Poly, c: &BigRational) -> Poly {
    a.iter()
        .map(|(e, x)| (*e, x * c))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

pub fn poly_one() -> Poly {
    Poly::from([(0, BigRational::one())])
}

/// `q^e`.
pub fn mono(e: i64) -> Poly {
    Poly::from([(e, BigRational::one())])
}

/// A specialized scalar as a Laurent polynomial, if it is one.
pub fn as_poly(r: &RatFunc) -> Option<Poly> {
    r.laurent_terms()
        .map(|v| v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// `r == p` for a rational function `r` and a Laurent polynomial `p`.
pub fn ratfunc_eq_poly(r: &RatFunc, p: &Poly) -> bool {
    let lhs = poly_from_ratfunc_laurent(r.numer());
    let rhs = poly_mul(p, &poly_from_ratfunc_laurent(r.denom()));
    lhs == rhs
}

/// Solves `A x = b` over `Q`; `None` if inconsistent, `Err(rank)` if not unique.
pub fn solve_unique(
    rows: Vec<(BTreeMap<usize, BigRational>, BigRational)>,
    n: usize,
) -> Option<Result<Vec<BigRational>, usize>> {
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    for (r, rhs) in rows {
        let mut row = vec![BigRational::zero(); n + 1];
        for (k, v) in r {
            row[k] = v;
        }
        row[n] = rhs;
        a.push(row);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    if pivots.len() < n {
        return Some(Err(pivots.len()));
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(Ok(x))
}

/// Fixed-point oracle for an ı-canonical basis at `π = sign`.
///
/// For each basis vector `b` it solves `P · bar(t) = t` with `t_b = 1` and
/// `t_c = Σ_{k=1..K} x_{c,k} q^{-k}` for every `c` of smaller depth, as one dense linear system over
/// `Q` in the `x_{c,k}`; `bar` sends `q` to `sign·q^{-1}`. `K` grows until the system is
/// consistent, and the solution must be unique. Returns column `b` as one polynomial per row.
pub fn fixed_point_basis(
    p: &[Vec<QPiScalar>],
    depth: &[i64],
    sign: i8,
) -> Result<Vec<Vec<Poly>>, String> {
    let n = p.len();
    // Row r of P over a common denominator: P_rc = num[r][c] / den[r].
    let mut num: Vec<Vec<Poly>> = Vec::with_capacity(n);
    let mut den: Vec<Poly> = Vec::with_capacity(n);
    for row in p {
        let specialized: Vec<RatFunc> = row.iter().map(|x| x.specialize(sign).clone()).collect();
        let mut dens: Vec<Poly> = Vec::new();
        for r in &specialized {
            let d = poly_from_ratfunc_laurent(r.denom());
            if !r.is_zero() && !dens.contains(&d) {
                dens.push(d);
            }
        }
        let d_all = dens.iter().fold(poly_one(), |acc, d| poly_mul(&acc, d));
        let nums = specialized
            .iter()
            .map(|r| {
                if r.is_zero() {
                    return Poly::new();
                }
                let d = poly_from_ratfunc_laurent(r.denom());
                let others = dens
                    .iter()
                    .filter(|x| **x != d)
                    .fold(poly_one(), |acc, x| poly_mul(&acc, x));
                poly_mul(&poly_from_ratfunc_laurent(r.numer()), &others)
            })
            .collect();
        num.push(nums);
        den.push(d_all);
    }
    let s = BigRational::from_integer(BigInt::from(sign));
    let mut out = vec![vec![Poly::new(); n]; n];
    for b in 0..n {
        let cand: Vec<usize> = (0..n).filter(|&c| depth[c] < depth[b]).collect();
        let mut solved = None;
        for kmax in [4i64, 8, 16, 32] {
            let unknowns: Vec<(usize, i64)> = cand
                .iter()
                .flat_map(|&c| (1..=kmax).map(move |k| (c, k)))
                .collect();
            let mut rows = Vec::new();
            for r in 0..n {
                // Constant part, moved to the right-hand side.
                let mut constant = num[r][b].clone();
                if r == b {
                    constant = poly_add(&constant, &poly_scale(&den[r], &-BigRational::one()));
                }
                let mut eqs: BTreeMap<i64, BTreeMap<usize, BigRational>> = BTreeMap::new();
                for (u, &(c, k)) in unknowns.iter().enumerate() {
                    let sk = if k % 2 == 0 {
                        BigRational::one()
                    } else {
                        s.clone()
                    };
                    let mut term = poly_scale(&poly_mul(&num[r][c], &mono(k)), &sk);
                    if r == c {
                        term = poly_add(
                            &term,
                            &poly_scale(&poly_mul(&den[r], &mono(-k)), &-BigRational::one()),
                        );
                    }
                    for (e, v) in term {
                        *eqs.entry(e)
                            .or_default()
                            .entry(u)
                            .or_insert_with(BigRational::zero) += v;
                    }
                }
                let degrees: std::collections::BTreeSet<i64> =
                    eqs.keys().chain(constant.keys()).copied().collect();
                for e in degrees {
                    let mut lhs = eqs.remove(&e).unwrap_or_default();
                    lhs.retain(|_, v| !v.is_zero());
                    let rhs = -constant.get(&e).cloned().unwrap_or_else(BigRational::zero);
                    rows.push((lhs, rhs));
                }
            }
            match solve_unique(rows, unknowns.len()) {
                None => continue,
                Some(Err(rank)) => {
                    return Err(format!(
                        "column {b}: solution not unique (rank {rank} of {})",
                        unknowns.len()
                    ))
                }
                Some(Ok(x)) => {
                    let mut col = vec![Poly::new(); n];
                    col[b] = poly_one();
                    for (u, &(c, k)) in unknowns.iter().enumerate() {
                        if !x[u].is_zero() {
                            col[c].insert(-k, x[u].clone());
                        }
                    }
                    solved = Some(col);
                    break;
                }
            }
        }
        let col = solved.ok_or_else(|| {
            format!("column {b}: no fixed point with q^-1 coefficients of degree ≤ 32")
        })?;
        for (r, v) in col.into_iter().enumerate() {
            out[r][b] = v;
        }
    }
    Ok(out)
}

/// Compares a computed basis (columns) with the oracle at both specializations and checks the
/// oracle coefficients are integers.
pub fn agrees_with_oracle(
    p: &[Vec<QPiScalar>],
    coords: &[Vec<QPiScalar>],
    depth: &[i64],
) -> Result<(), String> {
    for sign in [1i8, -1] {
        let o = fixed_point_basis(p, depth, sign)?;
        for (r, row) in coords.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !ratfunc_eq_poly(x.specialize(sign), &o[r][c]) {
                    return Err(format!(
                        "π = {sign}: entry ({r},{c}) is {} but the oracle gives {:?}",
                        x.render(),
                        o[r][c]
                    ));
                }
                if o[r][c].values().any(|v| !v.is_integer()) {
                    return Err(format!(
                        "π = {sign}: oracle entry ({r},{c}) is not integral"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Classical quantum integer `[n] = (q^n − q^{-n}) / (q − q^{-1})` as a Laurent polynomial.
pub fn classical_int(n: i64) -> Poly {
    let mut out = Poly::new();
    let n = n.abs();
    for k in 0..n {
        out.insert(n - 1 - 2 * k, BigRational::one());
    }
    out
}

/// `[n]_{q,π}` at `π = sign`: `((sign·q)^n − q^{-n}) / (sign·q − q^{-1})` for `n ≥ 0`.
pub fn signed_int(n: i64, sign: i64) -> Poly {
    let mut out = Poly::new();
    for k in 0..n {
        let c = if sign < 0 && (n - 1 - k) % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        out.insert(n - 1 - 2 * k, c);
    }
    out
}
