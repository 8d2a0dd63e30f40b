//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Coefficients lowest degree first; the leading coefficient is nonzero
/// unless the polynomial is zero (empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `T^k - 1`.
    pub fn cyclic(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[0] = int(-1);
        c[k] += Rational::one();
        Self::new(c)
    }

    /// `T - root`.
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip();
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Long division: returns `(quotient, remainder)` with
    /// `self = quotient * den + remainder` and `deg remainder < deg den`.
    pub fn div_rem(&self, den: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = den.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = den.coeffs[dd].recip();
        let monic = lead_inv.is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = if monic { top.clone() } else { top * &lead_inv };
            for (j, dc) in den.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(super::rational::to_f64).collect()
    }

    /// Primitive integer multiple: clears denominators and the content.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        DisplayIn { poly: self, var }
    }
}

struct DisplayIn<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for DisplayIn<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            f.write_str(self.var)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("T"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::new(out)
    }
}
