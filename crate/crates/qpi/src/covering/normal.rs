//! Normal ordering of generator strings by the defining relations alone.

use super::{Covering, Monomial, PBWElement, PbwError};
use crate::free_half::Word;
use crate::scalar::QPiScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
    K(Vec<i64>),
    J(Vec<i64>),
}

impl Generator {
    fn class(&self) -> u8 {
        match self {
            Generator::F(_) => 0,
            Generator::K(_) | Generator::J(_) => 1,
            Generator::E(_) => 2,
        }
    }
}

/// Rewrites a product of generators into `F · J K · E` order using only the
/// Cartan commutations and `E_i F_j − π^{p(i)p(j)} F_j E_i = δ_ij (J̃_i K̃_i − K̃_{−i}) / (π_i q_i − q_i^{-1})`.
pub fn normal_form(u: &Covering, gens: &[Generator]) -> Result<PBWElement, PbwError> {
    let c = u.cartan();
    let root = &u.datum().root;
    let y = u.y_rank();
    let pair = |mu: &[i64], i: usize| root.pair(mu, &root.pairing[i]);
    let mut work: Vec<(Vec<Generator>, QPiScalar)> = vec![(gens.to_vec(), QPiScalar::one())];
    let mut out = PBWElement::zero();
    while let Some((g, coef)) = work.pop() {
        let Some(k) = (0..g.len().saturating_sub(1)).find(|&k| g[k].class() > g[k + 1].class())
        else {
            let mut f = Vec::new();
            let mut e = Vec::new();
            let mut j = vec![0i64; y];
            let mut kk = vec![0i64; y];
            for x in &g {
                match x {
                    Generator::F(i) => f.push(*i),
                    Generator::E(i) => e.push(*i),
                    Generator::K(m) => kk.iter_mut().zip(m).for_each(|(a, b)| *a += b),
                    Generator::J(m) => j.iter_mut().zip(m).for_each(|(a, b)| *a += b),
                }
            }
            for (fw, fc) in u.reduce(&Word(f))? {
                for (ew, ec) in u.reduce(&Word(e.clone()))? {
                    let m = Monomial {
                        f: fw.clone(),
                        j: j.iter().map(|v| v.rem_euclid(2) as u8).collect(),
                        k: kk.clone(),
                        e: ew,
                    };
                    out.add_term(m, coef.mul(&fc).mul(&ec));
                }
            }
            continue;
        };
        let splice = |repl: Vec<Generator>| {
            let mut v = g[..k].to_vec();
            v.extend(repl);
            v.extend_from_slice(&g[k + 2..]);
            v
        };
        match (&g[k], &g[k + 1]) {
            (Generator::E(i), Generator::F(jx)) => {
                let (i, jx) = (*i, *jx);
                let s = QPiScalar::pi_pow(c.p(i) * c.p(jx));
                work.push((
                    splice(vec![Generator::F(jx), Generator::E(i)]),
                    coef.mul(&s),
                ));
                if i == jx {
                    let d = c.qdiff(i).invert().expect("invertible");
                    let t = u.datum().ktilde(i);
                    let tn: Vec<i64> = t.iter().map(|v| -v).collect();
                    work.push((
                        splice(vec![Generator::J(t.clone()), Generator::K(t)]),
                        coef.mul(&d),
                    ));
                    work.push((splice(vec![Generator::K(tn)]), coef.mul(&d).neg()));
                }
            }
            (Generator::E(i), h @ (Generator::K(mu) | Generator::J(mu))) => {
                let s = match h {
                    Generator::K(_) => QPiScalar::q_pow(-pair(mu, *i)),
                    _ => QPiScalar::pi_pow(pair(mu, *i)),
                };
                work.push((splice(vec![h.clone(), Generator::E(*i)]), coef.mul(&s)));
            }
            (h @ (Generator::K(mu) | Generator::J(mu)), Generator::F(i)) => {
                let s = match h {
                    Generator::K(_) => QPiScalar::q_pow(-pair(mu, *i)),
                    _ => QPiScalar::pi_pow(pair(mu, *i)),
                };
                work.push((splice(vec![Generator::F(*i), h.clone()]), coef.mul(&s)));
            }
            _ => unreachable!("classes out of order only for E·F, E·K, K·F"),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin;
    use crate::free_half::FreeHalf;
    use std::sync::Arc;

    fn words_up_to(n: usize, h: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..h {
            let mut next = Vec::new();
            for w in &layer {
                for i in 0..n {
                    let mut v: Vec<usize> = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn straightening_agrees_with_relations() {
        for (name, h) in [("rank1", 3usize), ("B(0,2)", 3)] {
            let u = Covering::new(Arc::new(FreeHalf::new(builtin(name).unwrap(), 6)));
            let n = u.rank();
            for w in words_up_to(n, 2) {
                for x in words_up_to(n, h) {
                    if w.len() + x.len() > 4 {
                        continue;
                    }
                    let gens: Vec<Generator> = w
                        .iter()
                        .map(|&i| Generator::E(i))
                        .chain(x.iter().map(|&i| Generator::F(i)))
                        .collect();
                    let lhs = normal_form(&u, &gens).unwrap();
                    let es: Vec<PBWElement> = w
                        .iter()
                        .map(|&i| u.e(i))
                        .chain(x.iter().map(|&i| u.f(i)))
                        .collect();
                    let rhs = u.product(&es).unwrap();
                    assert_eq!(lhs, rhs, "{name}: E{w:?} F{x:?}");
                }
            }
        }
    }

    #[test]
    fn j_tilde_central_and_odd_j_central() {
        let u = Covering::new(Arc::new(FreeHalf::new(builtin("B(0,2)").unwrap(), 4)));
        let gens = [u.e(0), u.e(1), u.f(0), u.f(1)];
        for i in 0..2 {
            let jt = u.jtilde(i);
            let ji = u.j(&(0..2).map(|k| (k == i) as i64).collect::<Vec<_>>());
            for g in &gens {
                assert_eq!(u.mul(&jt, g).unwrap(), u.mul(g, &jt).unwrap());
                let commutes = u.mul(&ji, g).unwrap() == u.mul(g, &ji).unwrap();
                // a_21 = -1 is odd, so J_2 fails to commute with E_1 and F_1.
                let expect = u.cartan().p(i) == 1 || !(g == &gens[0] || g == &gens[2]);
                assert_eq!(commutes, expect, "J_{i}");
            }
        }
    }
}
