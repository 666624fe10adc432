//! The invariant suite behind `qpi verify`.

use super::commands::covering;
use super::{CliError, Context, Failure, Node};
use crate::covering::{Covering, TensorElement};
use crate::datum::Weight;
use crate::free_half::Word;
use crate::iqsp::idivided_power;
use crate::linalg;
use crate::modules::{
    cb_tensor, chi_check, icanonical_basis, integrality_action_check, psi_i_module, rank1_based,
    submodule_check, TensorModule,
};
use crate::quasi::{
    integrality_report, rank1_closed, rank1_divided_coefficient, theta, theta_i, upsilon,
    verify_intertwiner, verify_inverse, verify_irrt, verify_theta_intertwining, IntegralityStatus,
    ThetaExpansion, UpsilonExpansion, UpsilonFunctional,
};
use crate::scalar::QPiScalar;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

type Outcome = Result<String, String>;

struct Suite {
    rows: Vec<(String, Outcome)>,
}

impl Suite {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        self.rows.push((name.to_string(), f()));
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.rows
            .push((name.to_string(), Ok(format!("skipped: {why}"))));
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn random_scalar(rng: &mut StdRng) -> QPiScalar {
    let mut x = QPiScalar::zero();
    for _ in 0..rng.gen_range(1..4) {
        let c = QPiScalar::from_i64(rng.gen_range(-3..=3));
        x = x.add(&c.mul(&QPiScalar::pi_q_pow(
            rng.gen_range(0..2),
            rng.gen_range(-3..=3),
        )));
    }
    x
}

fn random_checks(seed: u64, ups: &UpsilonExpansion, u: &Covering, h: i64) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..64 {
        let (x, y, z) = (
            random_scalar(&mut rng),
            random_scalar(&mut rng),
            random_scalar(&mut rng),
        );
        if x.mul(&y).mul(&z) != x.mul(&y.mul(&z)) || x.mul(&y.add(&z)) != x.mul(&y).add(&x.mul(&z))
        {
            return Err(format!(
                "ring law fails for {}, {}, {}",
                x.render(),
                y.render(),
                z.render()
            ));
        }
        if x.bar().bar() != x || x.mul(&y).bar() != x.bar().mul(&y.bar()) {
            return Err(format!(
                "bar is not a ring involution at {}, {}",
                x.render(),
                y.render()
            ));
        }
        for s in [1, -1] {
            if x.mul(&y).specialize(s) != &x.specialize(s).mul(y.specialize(s)) {
                return Err(format!("specialization at π = {s} is not multiplicative"));
            }
        }
    }
    let f = UpsilonFunctional::new(u.free_half(), &ups.c);
    let n = u.rank();
    let mut words = 0;
    for _ in 0..32 {
        let len = rng.gen_range(0..=h.max(0) as usize);
        let w = Word((0..len).map(|_| rng.gen_range(0..n)).collect());
        if f.left(&w) != f.right(&w) {
            return Err(format!(
                "left and right recursions of Υ* disagree on {}",
                w.render(u.labels())
            ));
        }
        words += 1;
    }
    Ok(format!(
        "seed {seed}: 64 scalar triples, {words} random words"
    ))
}

fn theta_simple(u: &Covering, th: &ThetaExpansion) -> Outcome {
    let c = u.cartan();
    for i in 0..u.rank() {
        let a = Weight::simple(u.rank(), i);
        let coef = c
            .pi_i(i)
            .mul(&c.q_i(i))
            .sub(&c.q_i(i).invert().map_err(err)?)
            .neg();
        let expect = TensorElement::pure(&u.f(i), &u.e(i)).scale(&coef);
        if th.parts.get(&a) != Some(&expect) {
            return Err(format!("Θ at {a} is not −(π_i q_i − q_i^-1) F_i ⊗ E_i"));
        }
    }
    Ok(format!("{} simple roots", u.rank()))
}

fn module_checks(u: &Arc<Covering>, ups: &UpsilonExpansion, nmax: i64) -> Outcome {
    let mut done = 0;
    for n in 0..=nmax {
        let b = rank1_based(u, n).map_err(err)?;
        let p = psi_i_module(&b, ups).map_err(err)?;
        icanonical_basis(&b, &p).map_err(err)?;
        let ia = integrality_action_check(&b, ups).map_err(err)?;
        if !ia.ok() {
            return Err(format!(
                "L({n}): {}",
                ia.first_violation.unwrap_or_default()
            ));
        }
        done += 1;
    }
    Ok(format!("L(n) for n ≤ {nmax}: {done} modules"))
}

fn tensor_checks(u: &Arc<Covering>, ups: &UpsilonExpansion, th: &ThetaExpansion) -> Outcome {
    let thi = theta_i(u, ups, th, 2).map_err(err)?;
    let left = rank1_based(u, 1).map_err(err)?;
    let pl = psi_i_module(&left, ups).map_err(err)?;
    let t = TensorModule::new(left, rank1_based(u, 1).map_err(err)?, th).map_err(err)?;
    let a = t.psi_i_theta(&pl, &thi, &ups.c).map_err(err)?;
    let b = t.psi_i_upsilon(ups).map_err(err)?;
    if a != b {
        return Err("ψ_ı on L(1)⊗L(1) differs between the Θ^ı and Υ constructions".into());
    }
    let d = cb_tensor(&t).map_err(err)?;
    let inv = linalg::inverse(&d.coords).map_err(err)?;
    let pd = linalg::mat_mul(&inv, &linalg::mat_mul(&a, &linalg::mat_bar(&d.coords)));
    icanonical_basis(&d.based, &pd).map_err(err)?;
    let chi = chi_check(u, &[1, 1], th).map_err(err)?;
    if !chi.ok() {
        return Err(
            "χ does not send the canonical basis of L(2) into the ◊ basis of L(1)⊗L(1)".into(),
        );
    }
    let sub = submodule_check(u, 1, 1, th).map_err(err)?;
    if !sub.ok() {
        return Err("the submodule generated by η⊗η is not spanned by ◊ elements".into());
    }
    Ok("L(1)⊗L(1): ψ_ı two ways, ı-canonical basis, χ and submodule".into())
}

/// Runs every check that applies to the datum at height `N − 1`; any failure is an assertion error.
pub(super) fn verify(ctx: &Context) -> Result<Node, CliError> {
    let d = &ctx.datum;
    let rank = d.rank();
    let h = ctx.inclusive_height(if rank == 1 { 8 } else { 5 });
    if h < 1 {
        return Err(CliError::Usage(
            "--height must be at least 2 for verify".into(),
        ));
    }
    let u = covering(d, h);
    let fh = u.free_half().clone();
    let mut s = Suite { rows: Vec::new() };

    s.check("serre-radical", || {
        let mut n = 0;
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let e = fh.serre_element(i, j).map_err(err)?;
                if e.terms().next().map_or(0, |(w, _)| w.len() as i64) > h {
                    continue;
                }
                if !fh.in_radical(&e).map_err(err)? {
                    return Err(format!(
                        "Serre element ({}, {}) is not in the radical",
                        d.cartan.labels[i], d.cartan.labels[j]
                    ));
                }
                n += 1;
            }
        }
        Ok(format!("{n} Serre elements"))
    });

    s.check("quotient-dims-pi", || {
        let mut n = 0;
        for nu in Weight::all_up_to_height(rank, h.min(4)) {
            let dim = fh.dim(&nu).map_err(err)?;
            let (p, m) = fh.specialized_dims(&nu).map_err(err)?;
            if p != dim || m != dim {
                return Err(format!(
                    "dim f_{nu}: {dim} generic, {p} at π = 1, {m} at π = −1"
                ));
            }
            n += 1;
        }
        Ok(format!("{n} weights"))
    });

    let ups = match upsilon(&fh, h) {
        Ok(x) => x,
        Err(e) => return Err(CliError::assertion("upsilon", e.to_string())),
    };

    s.check("upsilon-vanishing", || {
        if let Some(w) = ups.odd_residue.first() {
            return Err(format!("odd-parity residue at {w}"));
        }
        let mut n = 0;
        for mu in Weight::all_up_to_height(rank, h) {
            if (mu.ht() % 2 == 1 || d.cartan.weight_parity(&mu.0) % 2 == 1) && !ups.is_zero_at(&mu)
            {
                return Err(format!("Υ_{mu} ≠ 0"));
            }
            n += 1;
        }
        Ok(format!("{n} weights"))
    });

    s.check("upsilon-inverse", || {
        verify_inverse(&u, &ups, h)
            .map(|n| format!("{n} weights"))
            .map_err(err)
    });

    if rank == 1 {
        s.check("upsilon-closed-form", || {
            for k in 0..=h / 2 {
                let got = rank1_divided_coefficient(&ups, 2 * k)
                    .ok_or_else(|| format!("Υ at height {} missing", 2 * k))?;
                if got != rank1_closed(k, &ups.c[0]) {
                    return Err(format!("coefficient of E^({}) is {}", 2 * k, got.render()));
                }
            }
            Ok(format!("k ≤ {}", h / 2))
        });
    }

    s.check("upsilon-integrality", || {
        let rep = integrality_report(&u, &ups, h).map_err(err)?;
        if let Some(e) = rep
            .iter()
            .find(|e| e.status == IntegralityStatus::NotIntegral)
        {
            return Err(format!("Υ_{} is not integral", e.weight));
        }
        let inconclusive = rep
            .iter()
            .filter(|e| e.status == IntegralityStatus::Inconclusive)
            .count();
        Ok(format!(
            "{} weights, {inconclusive} inconclusive",
            rep.len()
        ))
    });

    let hi = h.min(if rank == 1 { 6 } else { 4 });
    s.check("upsilon-intertwiner", || {
        verify_intertwiner(&u, &ups, hi)
            .map(|n| format!("{n} degrees to height {hi}"))
            .map_err(err)
    });

    let ht = h.min(4);
    let th = match theta(&u, ht) {
        Ok(x) => x,
        Err(e) => return Err(CliError::assertion("theta", e.to_string())),
    };
    s.check("theta-intertwiner", || {
        verify_theta_intertwining(&u, &th, ht)
            .map(|n| format!("{n} components"))
            .map_err(err)
    });
    s.check("theta-simple", || theta_simple(&u, &th));

    let hti = if rank == 1 { ht } else { h.min(3) };
    s.check("theta-i", || {
        let thi = theta_i(&u, &ups, &th, hti).map_err(err)?;
        if !thi.parity_matched(&u) {
            return Err("legs of some term have different parity".into());
        }
        if !thi.level_zero_is_unit(&u) {
            return Err("level zero is not 1⊗1".into());
        }
        let mut n = 0;
        for i in 0..rank {
            n += verify_irrt(&u, &thi, &ups.c, i).map_err(err)?;
        }
        Ok(format!("height {hti}, {n} derivation components"))
    });

    if d.params.is_split() {
        let mmax = h.min(6) as usize;
        s.check("idp-invariance", || {
            for i in 0..rank {
                for parity in [0, 1] {
                    for m in 0..=mmax {
                        let x = idivided_power(d, i, m, parity).map_err(err)?;
                        if x.poly.psi_i() != x.poly {
                            return Err(format!(
                                "B^({m}) at i = {}, parity {parity}, is not ψ_ı-invariant",
                                d.cartan.labels[i]
                            ));
                        }
                    }
                }
            }
            Ok(format!("m ≤ {mmax}"))
        });
    } else {
        s.skip("idp-invariance", "τ is not the identity");
    }

    if rank == 1 && h >= 2 {
        let nmax = (h - 1).min(4);
        s.check("icb-simple", || module_checks(&u, &ups, nmax));
        s.check("icb-tensor", || tensor_checks(&u, &ups, &th));
    } else {
        s.skip(
            "icb-simple",
            "canonical bases of simple modules need rank 1 and height ≥ 3",
        );
        s.skip(
            "icb-tensor",
            "canonical bases of simple modules need rank 1 and height ≥ 3",
        );
    }

    s.check("randomized", || random_checks(ctx.args.seed, &ups, &u, h));

    let failures: Vec<Failure> = s
        .rows
        .iter()
        .filter_map(|(k, r)| {
            r.as_ref().err().map(|d| Failure {
                check: k.clone(),
                detail: d.clone(),
            })
        })
        .collect();
    if !failures.is_empty() {
        return Err(CliError::Assertion(failures));
    }
    let mut checks = Node::map();
    for (k, r) in &s.rows {
        checks.push(k.clone(), Node::str(r.clone().unwrap_or_default()));
    }
    Ok(Node::map()
        .with("datum", Node::str(&d.name))
        .with("height", Node::Int(h + 1))
        .with("seed", Node::Int(ctx.args.seed as i64))
        .with("checks", checks)
        .with("status", Node::str("pass")))
}
