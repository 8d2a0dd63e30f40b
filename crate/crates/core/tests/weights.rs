use std::collections::BTreeSet;

use kova_core::weights::{
    check_weight, enumerate_regular, hierarchy_weights, lemma23_prefilter, nondecreasing, Family, Prefilter,
    WeightTuple,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn listings(ws: &[WeightTuple]) -> BTreeSet<(Vec<i64>, i64)> {
    ws.iter().map(|w| (w.listing(), w.h())).collect()
}

fn expected(rows: &[(&[i64], i64)]) -> BTreeSet<(Vec<i64>, i64)> {
    rows.iter().map(|(l, h)| (l.to_vec(), *h)).collect()
}

/// Coefficients of `Π (T^e - 1)` by schoolbook multiplication.
fn naive_product(exps: &[i64]) -> Vec<i64> {
    exps.iter().fold(vec![1], |acc, &e| {
        let mut out = vec![0; acc.len() + e as usize];
        for (i, c) in acc.iter().enumerate() {
            out[i] -= c;
            out[i + e as usize] += c;
        }
        out
    })
}

fn naive_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

#[test]
fn rank_one_list() {
    let got = enumerate_regular(1, 40).unwrap();
    assert_eq!(
        listings(&got),
        expected(&[(&[2, 3], 6), (&[1, 2], 4), (&[1, 1], 3)])
    );
    assert_eq!(got[0].to_string(), "(2,3; 6)");
}

#[test]
fn rank_two_list() {
    let got = enumerate_regular(2, 40).unwrap();
    assert_eq!(
        listings(&got),
        expected(&[
            (&[2, 3, 4, 5], 8),
            (&[1, 2, 3, 4], 6),
            (&[2, 2, 3, 3], 6),
            (&[1, 2, 2, 3], 5),
            (&[1, 1, 2, 2], 4),
            (&[1, 1, 1, 1], 3),
        ])
    );
}

#[test]
fn rank_three_list() {
    let got = enumerate_regular(3, 40).unwrap();
    assert_eq!(
        listings(&got),
        expected(&[
            (&[2, 3, 4, 5, 6, 7], 10),
            (&[2, 3, 3, 4, 4, 5], 8),
            (&[1, 2, 3, 4, 5, 6], 8),
            (&[1, 2, 3, 3, 4, 5], 7),
            (&[2, 2, 2, 3, 3, 3], 6),
            (&[1, 2, 2, 3, 3, 4], 6),
            (&[1, 1, 2, 2, 3, 3], 5),
            (&[1, 1, 1, 2, 2, 2], 4),
            (&[1, 1, 1, 1, 1, 1], 3),
        ])
    );
    assert_eq!(got[0].to_string(), "(2,3,4,5,6,7; 10)");
}

/// Every pair `(a, b)` with `1 <= a <= b < h`, combined into multisets,
/// without any (W1)/(W2) shortcut.
fn full_scan(n: usize, h_max: i64) -> BTreeSet<(Vec<i64>, i64)> {
    let mut out = BTreeSet::new();
    for h in 3..=h_max {
        let pairs: Vec<(i64, i64)> = (1..h).flat_map(|a| (a..h).map(move |b| (a, b))).collect();
        for idx in nondecreasing(n, 0, pairs.len() as i64 - 1) {
            let a: Vec<i64> = idx.iter().map(|&i| pairs[i as usize].0).collect();
            let b: Vec<i64> = idx.iter().map(|&i| pairs[i as usize].1).collect();
            let w = WeightTuple::new(&a, &b, h).unwrap();
            if check_weight(&w).is_regular() {
                out.insert((w.listing(), h));
            }
        }
    }
    out
}

#[test]
fn shortcut_scan_matches_full_scan() {
    for (n, h_max) in [(1, 30), (2, 16), (3, 9)] {
        let fast: BTreeSet<_> = listings(&enumerate_regular(n, h_max).unwrap());
        assert_eq!(fast, full_scan(n, h_max), "n = {n}");
    }
}

#[test]
fn chi_times_denominator_is_numerator() {
    for n in 1..=3 {
        for w in enumerate_regular(n, 40).unwrap() {
            let chi = check_weight(&w).chi.unwrap();
            let chi: Vec<i64> = chi
                .coeffs()
                .iter()
                .map(|c| c.to_integer().to_i64().unwrap())
                .collect();
            assert!(chi.iter().all(|&c| c >= 0), "{w}");
            let all = w.qp_weights();
            let num: Vec<i64> = all.iter().map(|x| w.h() - x).collect();
            assert_eq!(naive_mul(&chi, &naive_product(&all)), naive_product(&num), "{w}");
            // χ(1) = Π (h - w) / Π w
            let top: i64 = num.iter().product();
            let bottom: i64 = all.iter().product();
            assert_eq!(top % bottom, 0);
            assert_eq!(chi.iter().sum::<i64>(), top / bottom, "{w}");
        }
    }
}

#[test]
fn non_regular_remainder_matches_naive_division() {
    let w = WeightTuple::from_listing(&[1, 3], 5).unwrap();
    let rem = check_weight(&w).remainder.unwrap();
    let rem: Vec<i64> = rem
        .coeffs()
        .iter()
        .map(|c| c.to_integer().to_i64().unwrap())
        .collect();
    // (T^4-1)(T^2-1) = (T^2+T)(T^4-T^3-T+1) + (T^3-T^2-T+1)
    assert_eq!(rem, vec![1, -1, -1, 1]);
}

#[test]
fn prefilter_never_rejects_regular() {
    let mut rejected = 0;
    for n in 1..=3usize {
        for h in 3..=25 {
            for a in nondecreasing(n, 1, (h - 1) / 2) {
                if a[0] > 2 {
                    continue;
                }
                let b: Vec<i64> = a.iter().map(|x| h - 1 - x).collect();
                let w = WeightTuple::new(&a, &b, h).unwrap();
                if let Prefilter::Fail(reason) = lemma23_prefilter(&w) {
                    rejected += 1;
                    assert!(!check_weight(&w).is_regular(), "{w}: {reason}");
                }
            }
        }
    }
    assert!(rejected > 100);
}

#[test]
fn hierarchy_degree_relations() {
    for fam in [Family::P1, Family::P21, Family::P22, Family::P4] {
        for n in 1..=6 {
            let w = hierarchy_weights(fam, n);
            assert_eq!(w.qp.len(), n);
            for &(q, p) in &w.qp {
                assert_eq!(q + p, w.h[0] - 1, "{fam:?} {n}");
            }
            assert_eq!(w.z[0], w.h[0] - 2);
            let s = w.z[0] + w.h[0];
            assert!(w.z.iter().zip(&w.h).all(|(z, h)| z + h == s));
            let min = w.sorted_qp()[0];
            assert!(min == 1 || min == 2);
        }
    }
}

#[test]
fn low_rank_hierarchies_are_regular() {
    for fam in [Family::P1, Family::P21, Family::P22, Family::P4] {
        for n in 1..=3 {
            let hw = hierarchy_weights(fam, n);
            let (a, b): (Vec<i64>, Vec<i64>) = hw.qp.iter().copied().unzip();
            let w = WeightTuple::new(&a, &b, hw.h[0]).unwrap();
            assert!(check_weight(&w).is_regular(), "{fam:?} {n}: {w}");
        }
    }
}

proptest! {
    #[test]
    fn construction_ignores_pair_order(
        pairs in prop::collection::vec((1i64..12, 1i64..12), 1..4),
        seed in any::<u64>(),
    ) {
        let h = 13;
        let (a, b): (Vec<i64>, Vec<i64>) = pairs.iter().copied().unzip();
        let w = WeightTuple::new(&a, &b, h).unwrap();
        let mut shuffled = pairs.clone();
        let k = (seed as usize) % shuffled.len();
        shuffled.rotate_left(k);
        if seed % 2 == 0 {
            shuffled.reverse();
        }
        let swapped: Vec<(i64, i64)> = shuffled.iter().map(|&(x, y)| (y, x)).collect();
        let (a2, b2): (Vec<i64>, Vec<i64>) = swapped.into_iter().unzip();
        let w2 = WeightTuple::new(&a2, &b2, h).unwrap();
        prop_assert_eq!(&w, &w2);
        prop_assert_eq!(check_weight(&w), check_weight(&w2));
    }

    #[test]
    fn regular_implies_prefilter_pass(a in prop::collection::vec(1i64..6, 1..4), h in 3i64..20) {
        let mut a = a;
        a.sort_unstable();
        prop_assume!(a[0] <= 2 && 2 * a[a.len() - 1] <= h - 1);
        let b: Vec<i64> = a.iter().map(|x| h - 1 - x).collect();
        let w = WeightTuple::new(&a, &b, h).unwrap();
        if check_weight(&w).is_regular() {
            prop_assert_eq!(lemma23_prefilter(&w), Prefilter::Pass);
        }
    }
}
