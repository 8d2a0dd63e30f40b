use std::collections::BTreeMap;

use kova_core::exprio::{catalog, catalog_ids};
use kova_core::kovalevskaya::{exponents, find_balances, truncate_autonomous, BalanceOptions};
use kova_core::laurent::{build_series, painleve_test, residual_order, series_problem, SeriesMode, Verdict};
use kova_core::systems::HamiltonianSystem;
use kova_core::{rat, Rational};
use proptest::prelude::*;

fn sys(id: &str) -> HamiltonianSystem {
    HamiltonianSystem::from_def(&catalog(id).unwrap()).unwrap()
}

/// Positive integer exponents, sorted and without repeats.
fn positive_integer_exponents(e: &[kova_core::Scalar]) -> Vec<usize> {
    let mut v: Vec<usize> = e
        .iter()
        .filter_map(|x| x.as_integer(1e-6))
        .filter(|&x| x > 0)
        .map(|x| x as usize)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[test]
fn resonances_and_residuals_across_catalog() {
    for id in catalog_ids().into_iter().filter(|id| !id.ends_with("_auto")) {
        let s = sys(id);
        let problem = series_problem(&s, 0).unwrap();
        let auto = truncate_autonomous(&problem.field).unwrap();
        let h = s.degrees()[0];
        let order = (2 * h).max(1) as usize;
        let bs = find_balances(&auto, &BalanceOptions::default()).unwrap().balances;
        for b in bs.iter().filter(|b| b.is_exact()) {
            let rep = exponents(&auto, b).unwrap();
            if !rep.principal {
                continue;
            }
            let series = build_series(&problem, b, order, &SeriesMode::Symbolic).unwrap();
            assert!(series.obstructed_at.is_none(), "{id} {b}");
            assert_eq!(
                series.resonances(),
                positive_integer_exponents(&rep.exponents),
                "{id} {b}"
            );
            assert_eq!(series.free_params.len() + 1, s.dim(), "{id} {b}");
            let lows = residual_order(&series).unwrap();
            for (i, low) in lows.iter().enumerate() {
                if let Some(e) = low {
                    assert!(
                        *e >= order as i64 - series.pole_orders[i],
                        "{id} {b} component {i}: T^{e}"
                    );
                }
            }
        }
    }
}

#[test]
fn every_catalog_system_passes_the_painleve_test() {
    for id in catalog_ids() {
        let r = painleve_test(&sys(id), &BalanceOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{id}");
    }
}

#[test]
fn series_is_deterministic() {
    let s = sys("P4_2");
    let problem = series_problem(&s, 0).unwrap();
    let auto = truncate_autonomous(&problem.field).unwrap();
    let b = find_balances(&auto, &BalanceOptions::default()).unwrap().balances;
    let principal = b.iter().find(|b| exponents(&auto, b).unwrap().principal).unwrap();
    let one = build_series(&problem, principal, 6, &SeriesMode::Symbolic).unwrap();
    let two = build_series(&problem, principal, 6, &SeriesMode::Symbolic).unwrap();
    assert_eq!(one, two);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Fixing `z0` up front equals substituting it afterwards.
    #[test]
    fn fixing_pole_position_commutes_with_substitution(n in -6i64..=6, d in 1i64..5, id in prop::sample::select(vec!["P1", "P2", "P4"])) {
        let s = sys(id);
        let problem = series_problem(&s, 0).unwrap();
        let auto = truncate_autonomous(&problem.field).unwrap();
        let b = find_balances(&auto, &BalanceOptions::default()).unwrap().balances;
        let c = b.iter().find(|b| b.is_exact()).unwrap();
        let v: Rational = rat(n, d);
        let fixed: BTreeMap<String, Rational> = [("z0".to_string(), v)].into();
        let symbolic = build_series(&problem, c, 7, &SeriesMode::Symbolic).unwrap();
        let direct = build_series(&problem, c, 7, &SeriesMode::Fixed(fixed.clone())).unwrap();
        let substituted = symbolic.specialize(&fixed).unwrap();
        prop_assert_eq!(&direct.coeffs, &substituted.coeffs);
        prop_assert_eq!(direct.ring, substituted.ring);
    }
}
