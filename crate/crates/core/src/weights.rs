//! Regular weights: certification by the Poincaré polynomial, exhaustive
//! enumeration for small `n`, the block-structure prefilter, hierarchy weight
//! formulas and monomial bases.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::algebra::UniPoly;
use crate::error::{Error, Result};

/// `(a_1..a_n, b_1..b_n; h)`, normalized so that `a_i <= b_i` within each
/// pair and `a_1 <= ... <= a_n <= b_n <= ... <= b_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightTuple {
    a: Vec<i64>,
    b: Vec<i64>,
    h: i64,
}

impl WeightTuple {
    /// Builds and normalizes a tuple; pairs `(a_i, b_i)` are kept together.
    pub fn new(a: &[i64], b: &[i64], h: i64) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidWeight(format!(
                "need n >= 1 pairs, got {} and {} entries",
                a.len(),
                b.len()
            )));
        }
        if h < 3 {
            return Err(Error::InvalidWeight(format!("h = {h} < 3")));
        }
        if let Some(w) = a.iter().chain(b).find(|&&w| w < 1 || w >= h) {
            return Err(Error::InvalidWeight(format!("weight {w} outside 1..{h}")));
        }
        let mut pairs: Vec<(i64, i64)> = a.iter().zip(b).map(|(&x, &y)| (x.min(y), x.max(y))).collect();
        pairs.sort_by(|p, q| p.0.cmp(&q.0).then(q.1.cmp(&p.1)));
        Ok(WeightTuple {
            a: pairs.iter().map(|p| p.0).collect(),
            b: pairs.iter().map(|p| p.1).collect(),
            h,
        })
    }

    /// Tuple written as in the normalized listing `(a_1..a_n, b_n..b_1; h)`.
    pub fn from_listing(listing: &[i64], h: i64) -> Result<Self> {
        if listing.len() % 2 != 0 {
            return Err(Error::InvalidWeight("odd number of weights".into()));
        }
        let n = listing.len() / 2;
        let a = &listing[..n];
        let b: Vec<i64> = listing[n..].iter().rev().copied().collect();
        Self::new(a, &b, h)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    /// Weights of `(q_1..q_n, p_1..p_n)`.
    pub fn qp_weights(&self) -> Vec<i64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// `(a_1..a_n, b_n..b_1)`.
    pub fn listing(&self) -> Vec<i64> {
        self.a.iter().chain(self.b.iter().rev()).copied().collect()
    }
}

impl fmt::Display for WeightTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.listing().iter().map(i64::to_string).collect();
        write!(f, "({}; {})", parts.join(","), self.h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub w1_ok: bool,
    pub w2_ok: bool,
    /// The quotient, present iff the division is exact.
    pub chi: Option<UniPoly>,
    /// The nonzero remainder, present iff the division is not exact.
    pub remainder: Option<UniPoly>,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        self.w1_ok && self.w2_ok && self.chi.is_some()
    }
}

fn cyclic_product(exps: &[i64]) -> UniPoly {
    exps.iter()
        .fold(UniPoly::one(), |acc, &e| &acc * &UniPoly::cyclic(e as usize))
}

/// Numerator and denominator exponents of the Poincaré quotient:
/// `Π (T^{h-w} - 1) / Π (T^w - 1)` over all `2n` weights.
pub fn chi_exponents(w: &WeightTuple) -> (Vec<i64>, Vec<i64>) {
    let all = w.qp_weights();
    (all.iter().map(|x| w.h - x).collect(), all)
}

pub fn chi_fraction(w: &WeightTuple) -> (UniPoly, UniPoly) {
    let (num, den) = chi_exponents(w);
    (cyclic_product(&num), cyclic_product(&den))
}

/// Full certificate: (W1) `min = 1 or 2`, (W2) `a_i + b_i = h - 1`, (W3) the
/// quotient is a polynomial, decided by long division of expanded products.
pub fn check_weight(w: &WeightTuple) -> RegularityCertificate {
    let min = w.a.iter().chain(&w.b).copied().min().unwrap_or(0);
    let w1_ok = min == 1 || min == 2;
    let w2_ok = w.a.iter().zip(&w.b).all(|(x, y)| x + y == w.h - 1);
    let (num, den) = chi_fraction(w);
    let (q, r) = num.div_rem(&den).expect("cyclotomic products are nonzero");
    if r.is_zero() {
        debug_assert!(q.coeffs().iter().all(|c| c.is_integer() && !c.is_negative()));
        RegularityCertificate {
            w1_ok,
            w2_ok,
            chi: Some(q),
            remainder: None,
        }
    } else {
        RegularityCertificate {
            w1_ok,
            w2_ok,
            chi: None,
            remainder: Some(r),
        }
    }
}

/// Exact divisibility test for products of `T^e - 1`: since
/// `T^e - 1 = Π_{d | e} Φ_d(T)`, the quotient is a polynomial iff for every
/// `d` the numerator has at least as many exponents divisible by `d` as the
/// denominator.
pub fn cyclotomic_divides(num: &[i64], den: &[i64]) -> bool {
    let max = den.iter().copied().max().unwrap_or(0);
    (1..=max).all(|d| {
        let count = |v: &[i64]| v.iter().filter(|&&e| e % d == 0).count();
        count(num) >= count(den)
    })
}

pub const MAX_RANK: usize = 3;

/// All regular weights with `n` pairs and `h <= h_max`, sorted by descending
/// `h`, then ascending `a`.
///
/// Candidates violating (W2) can never be regular, so the scan runs over
/// `a_1 <= ... <= a_n <= (h-1)/2` with `b_i = h - 1 - a_i`; survivors of the
/// cyclotomic count are confirmed by [`check_weight`].
pub fn enumerate_regular(n: usize, h_max: i64) -> Result<Vec<WeightTuple>> {
    enumerate_regular_with_limit(n, h_max, MAX_RANK)
}

pub fn enumerate_regular_with_limit(n: usize, h_max: i64, max_rank: usize) -> Result<Vec<WeightTuple>> {
    if n == 0 || n > max_rank {
        return Err(Error::UnsupportedRank(n));
    }
    if h_max < 3 {
        return Err(Error::InvalidWeight(format!("h_max = {h_max} < 3")));
    }
    let mut out = Vec::new();
    for h in 3..=h_max {
        let top = (h - 1) / 2;
        for a in nondecreasing(n, 1, top) {
            if a[0] > 2 {
                continue;
            }
            let b: Vec<i64> = a.iter().map(|x| h - 1 - x).collect();
            let mut num: Vec<i64> = a.iter().map(|x| x + 1).collect();
            num.extend(b.iter().map(|x| x + 1));
            let mut den = a.clone();
            den.extend(&b);
            if !cyclotomic_divides(&num, &den) {
                continue;
            }
            let w = WeightTuple::new(&a, &b, h)?;
            if check_weight(&w).is_regular() {
                out.push(w);
            }
        }
    }
    out.sort_by(|x, y| y.h.cmp(&x.h).then(x.a.cmp(&y.a)));
    Ok(out)
}

/// All nondecreasing sequences of length `n` with entries in `lo..=hi`.
pub fn nondecreasing(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in lo..=hi {
            cur.push(x);
            rec(n, x, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        rec(n, lo, hi, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prefilter {
    Pass,
    Fail(String),
}

/// Necessary conditions on the block structure of a weight satisfying
/// (W1) and (W2). Never rejects a regular weight.
pub fn lemma23_prefilter(w: &WeightTuple) -> Prefilter {
    let (a, b, h) = (&w.a, &w.b, w.h);
    let n = a.len();
    // blocks of equal a-values (hence equal b-values under W2)
    let mut blocks: Vec<(i64, i64, usize)> = Vec::new();
    for i in 0..n {
        match blocks.last_mut() {
            Some(last) if last.0 == a[i] => last.2 += 1,
            _ => blocks.push((a[i], b[i], 1)),
        }
    }
    let big_n = blocks.len() - 1;
    if big_n == 0 {
        let ok = matches!((a[0], b[0], h), (1, 1, 3) | (1, 2, 4) | (2, 3, 6));
        return if ok {
            Prefilter::Pass
        } else {
            Prefilter::Fail(format!(
                "all a_i equal ({}) but ({},{};{}) is none of (1,1;3), (1,2;4), (2,3;6)",
                a[0], a[0], b[0], h
            ))
        };
    }
    for i in 0..big_n {
        if blocks[i].1 != blocks[i + 1].1 + 1 {
            return Prefilter::Fail(format!(
                "b-step from {} to {} is {}, not 1",
                blocks[i].1,
                blocks[i + 1].1,
                blocks[i].1 - blocks[i + 1].1
            ));
        }
    }
    for i in 0..big_n.saturating_sub(1) {
        if blocks[i + 1].2 < blocks[i].2 {
            return Prefilter::Fail(format!(
                "block sizes decrease: J_{} = {} < J_{} = {}",
                i + 2,
                blocks[i + 1].2,
                i + 1,
                blocks[i].2
            ));
        }
    }
    let (an, bn) = (a[n - 1], b[n - 1]);
    if an != bn {
        if bn != an + 1 {
            return Prefilter::Fail(format!("a_n = {an} != b_n = {bn} but b_n != a_n + 1"));
        }
        if blocks[big_n].2 < blocks[big_n - 1].2 {
            return Prefilter::Fail(format!(
                "last block size J_{} = {} < J_{} = {}",
                big_n + 1,
                blocks[big_n].2,
                big_n,
                blocks[big_n - 1].2
            ));
        }
    }
    Prefilter::Pass
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    P1,
    P21,
    P22,
    P4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyWeights {
    /// `(deg q_j, deg p_j)` for `j = 1..n`.
    pub qp: Vec<(i64, i64)>,
    /// `deg z_i` for `i = 1..n`.
    pub z: Vec<i64>,
    /// `deg H_i` for `i = 1..n`.
    pub h: Vec<i64>,
}

impl HierarchyWeights {
    /// All `2n` coordinate/momentum degrees in ascending order.
    pub fn sorted_qp(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.qp.iter().flat_map(|&(q, p)| [q, p]).collect();
        v.sort_unstable();
        v
    }
}

/// Closed-form weights of the four polynomial Painlevé hierarchies.
pub fn hierarchy_weights(family: Family, n: usize) -> HierarchyWeights {
    let n = n as i64;
    let idx = 1..=n;
    let (qp, z, h): (Vec<(i64, i64)>, Vec<i64>, Vec<i64>) = match family {
        Family::P1 => (
            idx.clone().map(|j| (2 * j, 2 * n + 3 - 2 * j)).collect(),
            idx.clone().map(|i| 2 * n - 2 * i + 4).collect(),
            idx.map(|i| 2 * n + 2 * i + 2).collect(),
        ),
        Family::P21 => (
            idx.clone().map(|j| (2 * j - 1, 2 * n + 2 - 2 * j)).collect(),
            idx.clone().map(|i| 2 * n - 2 * i + 2).collect(),
            idx.map(|i| 2 * n + 2 * i).collect(),
        ),
        Family::P22 => (
            idx.clone().map(|j| (j, n + 2 - j)).collect(),
            idx.clone().map(|i| n - i + 2).collect(),
            idx.map(|i| n + i + 2).collect(),
        ),
        Family::P4 => (
            idx.clone().map(|j| (j, n + 1 - j)).collect(),
            idx.clone().map(|i| n - i + 1).collect(),
            idx.map(|i| n + i + 1).collect(),
        ),
    };
    HierarchyWeights { qp, z, h }
}

/// Exponent vectors over variables of the given positive weights whose
/// weighted degree is exactly `d`, in descending lexicographic order.
pub fn monomials_of_degree(weights: &[i64], d: i64) -> Vec<Vec<u32>> {
    fn rec(weights: &[i64], left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = cur.len();
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let max = left / w;
        for e in (0..=max).rev() {
            cur.push(e as u32);
            rec(weights, left - e * w, cur, out);
            cur.pop();
        }
    }
    assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
    let mut out = Vec::new();
    if d >= 0 {
        rec(weights, d, &mut Vec::with_capacity(weights.len()), &mut out);
    }
    out
}

/// Monomial basis of weighted degree `d` in `(q_1..q_n, p_1..p_n)`.
pub fn monomial_basis(w: &WeightTuple, d: i64) -> Vec<Vec<u32>> {
    monomials_of_degree(&w.qp_weights(), d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wt(listing: &[i64], h: i64) -> WeightTuple {
        WeightTuple::from_listing(listing, h).unwrap()
    }

    #[test]
    fn normalization() {
        let w = WeightTuple::new(&[4, 2], &[3, 5], 8).unwrap();
        assert_eq!(w.a(), &[2, 3]);
        assert_eq!(w.b(), &[5, 4]);
        assert_eq!(w.to_string(), "(2,3,4,5; 8)");
        assert!(WeightTuple::new(&[0], &[5], 6).is_err());
        assert!(WeightTuple::new(&[1], &[1], 2).is_err());
    }

    #[test]
    fn certificates() {
        let c = check_weight(&wt(&[2, 3], 6));
        assert!(c.is_regular());
        assert_eq!(c.chi, Some(UniPoly::from_ints(&[1, 0, 1])));

        let c = check_weight(&wt(&[1, 1], 3));
        assert!(c.is_regular());
        assert_eq!(c.chi, Some(UniPoly::from_ints(&[1, 2, 1])));

        let c = check_weight(&wt(&[1, 3], 5));
        assert!(c.w1_ok && c.w2_ok && !c.is_regular());
        assert!(c.remainder.is_some_and(|r| !r.is_zero()));
    }

    #[test]
    fn rank_guard() {
        assert_eq!(enumerate_regular(4, 10), Err(Error::UnsupportedRank(4)));
        assert_eq!(enumerate_regular(0, 10), Err(Error::UnsupportedRank(0)));
    }

    #[test]
    fn prefilter_examples() {
        assert_eq!(lemma23_prefilter(&wt(&[2, 2, 3, 3], 6)), Prefilter::Pass);
        assert_eq!(lemma23_prefilter(&wt(&[1, 2, 3, 4], 6)), Prefilter::Pass);
        assert!(matches!(
            lemma23_prefilter(&wt(&[1, 1, 3, 3], 5)),
            Prefilter::Fail(_)
        ));
        assert!(!check_weight(&wt(&[1, 1, 3, 3], 5)).is_regular());
    }

    #[test]
    fn hierarchy_examples() {
        let w = hierarchy_weights(Family::P1, 2);
        assert_eq!(w.sorted_qp(), vec![2, 3, 4, 5]);
        assert_eq!(w.z, vec![6, 4]);
        assert_eq!(w.h, vec![8, 10]);

        let w = hierarchy_weights(Family::P4, 3);
        assert_eq!(w.sorted_qp(), vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(w.z, vec![3, 2, 1]);
        assert_eq!(w.h, vec![5, 6, 7]);

        let w = hierarchy_weights(Family::P22, 1);
        assert_eq!(w.qp, vec![(1, 2)]);
        assert_eq!(w.z, vec![2]);
        assert_eq!(w.h, vec![4]);
    }

    #[test]
    fn monomial_basis_examples() {
        let mut m = monomial_basis(&wt(&[2, 3], 6), 6);
        m.sort();
        assert_eq!(m, vec![vec![0, 2], vec![3, 0]]);
        assert_eq!(monomial_basis(&wt(&[1, 1], 3), 3).len(), 4);
        assert_eq!(monomial_basis(&wt(&[2, 3], 6), 0), vec![vec![0, 0]]);
    }
}
