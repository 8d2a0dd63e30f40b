//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`: always reduced, positive
//! denominator, zero stored as `0/1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // very large operands: scale down by shifting both sides
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Best rational approximation with denominator at most `max_den`, by the
/// continued-fraction expansion of `x`. Returns `None` when no convergent
/// within the bound reproduces `x` to `rel_tol`.
pub fn reconstruct(x: f64, max_den: u64, rel_tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let tol = rel_tol * x.abs().max(1.0);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        let a_int = BigInt::from(a as i128);
        let h2 = &a_int * &h1 + &h0;
        let k2 = &a_int * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        let cand = Rational::new(h2.clone(), k2.clone());
        if (to_f64(&cand) - x).abs() <= tol {
            return Some(cand);
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rem - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rem = 1.0 / frac;
    }
    None
}

/// Exact `k`-th root of a rational, when one exists (sign allowed for odd `k`).
pub fn exact_root(q: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if k == 1 || q.is_zero() {
        return Some(q.clone());
    }
    if q.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-q, k).map(|r| -r);
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *q.numer()
        && num_traits::pow(d.clone(), k as usize) == *q.denom()
    {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Integer power with a possibly negative exponent.
pub fn powi(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

pub fn parse_rational(src: &str) -> Option<Rational> {
    let src = src.trim();
    if let Some((n, d)) = src.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        Some(Rational::from_integer(src.parse().ok()?))
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}
