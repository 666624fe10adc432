//! Dense oracles against the triangular solvers and closed forms.

mod common;

use common::{agrees_with_oracle, fixed_point_basis, ratfunc_eq_poly, Poly};
use num_rational::BigRational;
use num_traits::One;
use qpi::covering::Covering;
use qpi::datum::builtin;
use qpi::free_half::FreeHalf;
use qpi::linalg;
use qpi::modules::{cb_tensor, icanonical_basis, psi_i_module, rank1_based, TensorModule};
use qpi::quasi::{theta, theta_i, upsilon};
use qpi::scalar::{parse_scalar, QPiScalar};
use std::sync::Arc;

fn cov(name: &str, h: i64) -> Arc<Covering> {
    Arc::new(Covering::new(Arc::new(FreeHalf::new(
        builtin(name).unwrap(),
        h,
    ))))
}

fn depths(m: &qpi::modules::WeightModule) -> Vec<i64> {
    m.depths.iter().map(|w| w.ht()).collect()
}

#[test]
fn icb_of_l2_matches_the_fixed_point_solve() {
    let u = cov("rank1", 3);
    let ups = upsilon(u.free_half(), 3).unwrap();
    let b = rank1_based(&u, 2).unwrap();
    let p = psi_i_module(&b, &ups).unwrap();
    let ib = icanonical_basis(&b, &p).unwrap();
    agrees_with_oracle(&p, &ib.coords, &depths(&b.module)).unwrap();
    let top = b.module.labels.iter().position(|l| l == "η").unwrap();
    let f2 = b
        .module
        .labels
        .iter()
        .position(|l| l == "F[1]^(2)η")
        .unwrap();
    assert_eq!(ib.coords[top][f2], QPiScalar::q_pow(-1));
}

#[test]
fn maximal_vector_is_its_own_icb() {
    for n in 0..4 {
        let u = cov("rank1", n + 1);
        let ups = upsilon(u.free_half(), n + 1).unwrap();
        let b = rank1_based(&u, n).unwrap();
        let ib = icanonical_basis(&b, &psi_i_module(&b, &ups).unwrap()).unwrap();
        let top = b.module.highest.unwrap();
        assert_eq!(ib.expansion(top), vec![("η".to_string(), QPiScalar::one())]);
    }
}

#[test]
fn varsigma_one_gives_no_involution_on_l2() {
    let d = builtin("rank1")
        .unwrap()
        .with_varsigma(vec![QPiScalar::one()]);
    let u = Arc::new(Covering::new(Arc::new(FreeHalf::new(d, 3))));
    let ups = upsilon(u.free_half(), 3).unwrap();
    let b = rank1_based(&u, 2).unwrap();
    assert!(psi_i_module(&b, &ups).is_err());
}

#[test]
fn tensor_icb_matches_oracle_at_both_signs() {
    let u = cov("rank1", 3);
    let ups = upsilon(u.free_half(), 3).unwrap();
    let th = theta(&u, 3).unwrap();
    let thi = theta_i(&u, &ups, &th, 3).unwrap();
    let left = rank1_based(&u, 2).unwrap();
    let pl = psi_i_module(&left, &ups).unwrap();
    let t = TensorModule::new(left, rank1_based(&u, 1).unwrap(), &th).unwrap();
    let p = t.psi_i_theta(&pl, &thi, &ups.c).unwrap();
    let d = cb_tensor(&t).unwrap();
    let inv = linalg::inverse(&d.coords).unwrap();
    let pd = linalg::mat_mul(&inv, &linalg::mat_mul(&p, &linalg::mat_bar(&d.coords)));
    let ib = icanonical_basis(&d.based, &pd).unwrap();
    agrees_with_oracle(&pd, &ib.coords, &depths(&d.based.module)).unwrap();
    assert!(
        ib.coords.iter().flatten().filter(|x| !x.is_zero()).count() > ib.coords.len(),
        "some off-diagonal term"
    );
}

#[test]
fn oracle_rejects_a_perturbed_basis() {
    let u = cov("rank1", 3);
    let ups = upsilon(u.free_half(), 3).unwrap();
    let b = rank1_based(&u, 2).unwrap();
    let p = psi_i_module(&b, &ups).unwrap();
    let mut coords = icanonical_basis(&b, &p).unwrap().coords;
    let top = b.module.highest.unwrap();
    let f2 = b
        .module
        .labels
        .iter()
        .position(|l| l == "F[1]^(2)η")
        .unwrap();
    coords[top][f2] = parse_scalar("q^-1 + q^-3").unwrap();
    assert!(agrees_with_oracle(&p, &coords, &depths(&b.module)).is_err());
}

#[test]
fn oracle_on_identity_is_trivial() {
    let p = linalg::identity(3);
    let o = fixed_point_basis(&p, &[0, 1, 2], 1).unwrap();
    for (r, row) in o.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            let want: Poly = if r == c {
                Poly::from([(0, BigRational::one())])
            } else {
                Poly::new()
            };
            assert_eq!(x, &want);
        }
    }
    assert!(ratfunc_eq_poly(
        QPiScalar::q_pow(-2).specialize(-1),
        &Poly::from([(-2, BigRational::one())])
    ));
}
