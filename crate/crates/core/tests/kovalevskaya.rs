use kova_core::exprio::catalog_ids;
use kova_core::kovalevskaya::{
    autonomous_field, autonomous_hamiltonians, balance_residual, exponents, find_balances, kov_matrix,
    pairing_check, state_bracket, Balance, BalanceOptions, KMatrix,
};
use kova_core::systems::{validate, HamiltonianSystem, VectorField};
use kova_core::weights::WeightTuple;
use kova_core::{int, RatMatrix, Rational, Scalar};

mod common;

use common::{hamiltonian_field, oracle_balances, same_sets, sys};

fn catalog_balances() -> Vec<(HamiltonianSystem, VectorField, Vec<Balance>)> {
    catalog_ids()
        .into_iter()
        .filter(|id| !id.ends_with("_auto"))
        .map(|id| {
            let s = sys(id);
            let f = autonomous_field(&s).unwrap();
            let b = find_balances(&f, &BalanceOptions::default()).unwrap().balances;
            (s, f, b)
        })
        .collect()
}

/// `∂f_i/∂x_j (c) + δ_ij a_j`, built from scratch.
fn k_by_hand(f: &VectorField, c: &[Rational]) -> RatMatrix {
    let n = f.dim;
    let w = f.state_weights();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = f.components[i].diff(j).eval(c);
                    if i == j {
                        d + int(w[i])
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows).unwrap()
}

#[test]
fn balances_satisfy_their_equation() {
    for (s, f, bs) in catalog_balances() {
        assert!(!bs.is_empty(), "{}", s.id());
        for b in &bs {
            match b.exact_values() {
                Some(c) => {
                    let w = f.state_weights();
                    for i in 0..f.dim {
                        let g = f.components[i].eval(&c) + &c[i] * int(w[i]);
                        assert_eq!(g, int(0), "{} {b}", s.id());
                    }
                }
                None => assert!(balance_residual(&f, &b.c).unwrap() < 1e-8, "{} {b}", s.id()),
            }
        }
    }
}

#[test]
fn minus_one_has_weighted_balance_as_eigenvector() {
    for (s, f, bs) in catalog_balances() {
        for b in bs.iter().filter(|b| b.is_exact()) {
            let c = b.exact_values().unwrap();
            let k = k_by_hand(&f, &c);
            let KMatrix::Exact(lib) = kov_matrix(&f, b).unwrap() else {
                panic!("exact balance gives exact matrix")
            };
            assert_eq!(lib, k, "{} {b}", s.id());
            let v: Vec<Rational> = c
                .iter()
                .zip(f.state_weights())
                .map(|(ci, &a)| ci * int(a))
                .collect();
            let kv = k.mul_vec(&v).unwrap();
            let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
            assert_eq!(kv, neg, "{} {b}", s.id());
        }
        for b in &bs {
            let rep = exponents(&f, b).unwrap();
            assert!(rep.has_minus_one && rep.eigvec_ok, "{} {b}", s.id());
        }
    }
}

#[test]
fn exponents_pair_about_half_degree() {
    for (s, f, bs) in catalog_balances() {
        let v = validate(&s);
        if !(v.passes("A1") && v.passes("A2")) {
            continue;
        }
        let h = s.degrees()[0];
        for b in &bs {
            let rep = exponents(&f, b).unwrap();
            assert!(
                pairing_check(&rep.exponents, h),
                "{} {b}: {:?}",
                s.id(),
                rep.exponents
            );
            let target = Scalar::Exact(int(h));
            assert!(rep.exponents.iter().any(|e| e.close_to(&target, 1e-6)));
        }
    }
}

#[test]
fn hamiltonians_vanish_at_balances() {
    for (s, _, bs) in catalog_balances() {
        let (_, hams) = autonomous_hamiltonians(&s).unwrap();
        for b in &bs {
            for h in &hams {
                match b.exact_values() {
                    Some(c) => assert_eq!(h.eval(&c), int(0), "{} {b}", s.id()),
                    None => assert!(h.eval_complex(&b.complex()).norm() < 1e-6, "{} {b}", s.id()),
                }
            }
        }
    }
}

#[test]
fn gradients_are_left_eigenvectors() {
    for (s, f, bs) in catalog_balances() {
        let (_, hams) = autonomous_hamiltonians(&s).unwrap();
        let m = s.m();
        let commute = (0..hams.len())
            .all(|i| (i + 1..hams.len()).all(|j| state_bracket(&hams[i], &hams[j], m).is_zero()));
        if !commute {
            continue;
        }
        for b in bs.iter().filter(|b| b.is_exact()) {
            let c = b.exact_values().unwrap();
            let k = k_by_hand(&f, &c);
            for (h, &deg) in hams.iter().zip(s.degrees()) {
                let grad: Vec<Rational> = (0..f.dim).map(|j| h.diff(j).eval(&c)).collect();
                let res = k.shift(&int(deg)).unwrap().left_mul_vec(&grad).unwrap();
                assert!(res.iter().all(|x| *x == int(0)), "{} {b} degree {deg}", s.id());
            }
        }
    }
}

#[test]
fn product_principal_hamiltonians_have_independent_gradients() {
    // P1 × P1 has the balance pair (c, c'); both gradients are nonzero there.
    let s = sys("P1xP1");
    let (_, hams) = autonomous_hamiltonians(&s).unwrap();
    let f = autonomous_field(&s).unwrap();
    let bs = find_balances(&f, &BalanceOptions::default()).unwrap().balances;
    let full = bs.iter().find(|b| b.c.iter().all(|x| !x.is_zero(0.0))).unwrap();
    let c = full.exact_values().unwrap();
    for h in &hams {
        assert!((0..4).any(|j| h.diff(j).eval(&c) != int(0)));
    }
}

#[test]
fn two_dimensional_catalog_matches_elimination() {
    for id in ["P1", "P2", "P4"] {
        let f = autonomous_field(&sys(id)).unwrap();
        let found = find_balances(&f, &BalanceOptions::default()).unwrap().balances;
        let oracle = oracle_balances(&f);
        assert!(same_sets(&oracle, &found), "{id}: oracle {oracle:?} vs {found:?}");
    }
}

#[test]
fn two_dimensional_random_fields_match_elimination() {
    let weights = [
        WeightTuple::new(&[1], &[1], 3).unwrap(),
        WeightTuple::new(&[1], &[2], 4).unwrap(),
        WeightTuple::new(&[2], &[3], 6).unwrap(),
    ];
    let coeff_sets: [&[i64]; 4] = [&[1, -2, 3, 1], &[2, 1, -1, 3], &[-1, 1, 2, -3, 1], &[3, -1, 1, 2]];
    for w in &weights {
        for cs in coeff_sets {
            let f = hamiltonian_field(w, cs);
            let found = find_balances(&f, &BalanceOptions::default()).unwrap().balances;
            let oracle = oracle_balances(&f);
            assert!(
                same_sets(&oracle, &found),
                "{w} {cs:?}: oracle {oracle:?} vs {found:?}"
            );
        }
    }
}
