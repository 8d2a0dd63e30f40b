//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Ordered list of variable names shared by every polynomial of a ring.
#[derive(Clone, Debug, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

/// Exponent vector ordered so that iteration yields canonical printing order:
/// higher total degree first, ties broken by graded reverse lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match other.degree().cmp(&self.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable prints first
                return a.cmp(b);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial(vec![0; vars.len()]), c);
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Vars, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn monomial(vars: &Vars, exps: Vec<u32>, coeff: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(Monomial(exps), coeff);
        p
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Constant term, or `None` if the polynomial involves any variable.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarTableMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            });
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: PolyOp) -> Result<Self> {
        self.check_same(other)?;
        Ok(match op {
            PolyOp::Add => self.add_unchecked(other, false),
            PolyOp::Sub => self.add_unchecked(other, true),
            PolyOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c.clone() } else { c.clone() });
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn diff(&self, index: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[index];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[index] -= 1;
            out.add_term(Monomial(e), c * int(k as i64));
        }
        out
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index]).max().unwrap_or(0)
    }

    pub fn involves(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.0[index] > 0)
    }

    /// Range of weighted degrees over all monomials.
    pub fn weighted_degree_range(&self, weights: &[i64]) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn is_quasihomogeneous(&self, weights: &[i64], degree: i64) -> bool {
        self.terms.keys().all(|m| m.weighted_degree(weights) == degree)
    }

    /// Keeps only the monomials accepted by `keep`.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn weighted_part(&self, weights: &[i64], degree: i64) -> Self {
        self.filter_terms(|m| m.weighted_degree(weights) == degree)
    }

    /// Sets variable `index` to a rational constant.
    pub fn specialize(&self, index: usize, value: &Rational) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[index];
            let mut e = m.0.clone();
            e[index] = 0;
            let factor = if k == 0 {
                Rational::one()
            } else {
                num_traits::pow(value.clone(), k as usize)
            };
            out.add_term(Monomial(e), c * factor);
        }
        out
    }

    /// Replaces variable `index` with the polynomial `value` (same ring).
    pub fn substitute(&self, index: usize, value: &MultiPoly) -> Result<Self> {
        self.check_same(value)?;
        let max = self.degree_in(index);
        let mut powers = vec![Self::one(&self.vars)];
        for k in 1..=max as usize {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[index] as usize;
            let mut e = m.0.clone();
            e[index] = 0;
            let rest = Self::monomial(&self.vars, e, c.clone());
            out = &out + &(&rest * &powers[k]);
        }
        Ok(out)
    }

    /// Moves the polynomial into another ring. `map[i]` is the target index
    /// of source variable `i`; a source variable mapped to `None` must not occur.
    pub fn rebase(&self, target: &Vars, map: &[Option<usize>]) -> Result<Self> {
        assert_eq!(map.len(), self.vars.len());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += k,
                    None => return Err(Error::UnknownVariable(self.vars.name(i).to_string())),
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Moves the polynomial into `target` by matching variable names.
    pub fn rebase_by_name(&self, target: &Vars) -> Result<Self> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index_of(n)).collect();
        self.rebase(target, &map)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&m.0) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[num_complex::Complex64]) -> num_complex::Complex64 {
        use num_complex::Complex64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(super::rational::to_f64(c), 0.0);
            for (x, &k) in point.iter().zip(&m.0) {
                if k > 0 {
                    t *= x.powu(k);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.arith(rhs, PolyOp::Add).expect("variable tables differ")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.arith(rhs, PolyOp::Sub).expect("variable tables differ")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.arith(rhs, PolyOp::Mul).expect("variable tables differ")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &Vars, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &k) in m.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(vars.name(i))?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_constant() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, &self.vars, m)?;
            }
        }
        Ok(())
    }
}
