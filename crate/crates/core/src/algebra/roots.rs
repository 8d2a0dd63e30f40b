//! Root isolation: exact rational roots and a numeric simultaneous-iteration
//! solver for the remaining factors.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{reconstruct, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Largest coefficient magnitude for which divisors are enumerated by trial
/// division; bigger constants fall back to numeric candidates.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// All rational roots with multiplicity, plus the cofactor left after exact
/// deflation (which has no rational root).
pub fn rational_roots(p: &UniPoly) -> Result<(Vec<(Rational, usize)>, UniPoly)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = p.clone();
    let mut found: Vec<(Rational, usize)> = Vec::new();

    let zero_mult = rest.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        rest = UniPoly::new(rest.coeffs()[zero_mult..].to_vec());
        found.push((Rational::zero(), zero_mult));
    }

    for cand in candidates(&rest) {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut mult = 0;
        while rest.degree().unwrap_or(0) > 0 && rest.eval(&cand).is_zero() {
            let (q, _) = rest.div_rem(&UniPoly::linear(&cand))?;
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((cand, mult));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((found, rest))
}

fn candidates(p: &UniPoly) -> Vec<Rational> {
    let ints = p.primitive_integer();
    if ints.len() < 2 {
        return vec![];
    }
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let small = |x: &BigInt| x.to_u64().is_some_and(|v| v <= DIVISOR_LIMIT);
    let mut out = Vec::new();
    if small(&a0) && small(&an) {
        let nums = divisors(a0.to_u64().unwrap());
        let dens = divisors(an.to_u64().unwrap());
        for &d in &dens {
            for &n in &nums {
                if n.gcd(&d) != 1 {
                    continue;
                }
                let r = Rational::new(BigInt::from(n), BigInt::from(d));
                out.push(-r.clone());
                out.push(r);
            }
        }
    } else {
        let coeffs: Vec<Complex64> = p.to_f64().into_iter().map(|c| Complex64::new(c, 0.0)).collect();
        if let Ok(roots) = poly_roots(&coeffs) {
            for z in roots {
                if z.im.abs() <= 1e-6 * z.norm().max(1.0) {
                    if let Some(r) = reconstruct(z.re, 1_000_000, 1e-9) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![];
    }
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut f = 2u64;
    while f * f <= m {
        if m % f == 0 {
            let mut e = 0;
            while m % f == 0 {
                m /= f;
                e += 1;
            }
            primes.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let cur = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(cur.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a complex polynomial (coefficients lowest degree first) by
/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut zeros = 0;
    while c.len() > 1 && c[0].norm() == 0.0 {
        c.remove(0);
        zeros += 1;
    }
    let n = c.len() - 1;
    let mut roots = vec![Complex64::zero(); zeros];
    if n == 0 {
        return Ok(roots);
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        roots.push(-monic[0]);
        return Ok(roots);
    }

    let bound = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();

    const MAX_ITER: usize = 800;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(1e-12, 0.0).inv()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::one() - ratio * sum;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        // accept if residuals are tiny anyway
        let ok = z.iter().all(|&r| {
            let (p, _) = horner(&monic, r);
            p.norm() <= 1e-8 * (1.0 + r.norm()).powi(n as i32)
        });
        if !ok {
            return Err(Error::NoConvergence { iterations: MAX_ITER });
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *r);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let next = *r - p / dp;
            let (pn, _) = horner(&monic, next);
            if pn.norm() < p.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// Replaces each cluster of nearby roots (a numerically split multiple root)
/// by a single refined value: a root of multiplicity `k` is a simple root of
/// the `(k-1)`-th derivative, so Newton on that derivative from the centroid
/// recovers it to full precision.
pub fn merge_clusters(coeffs: &[Complex64], roots: &mut [Complex64], rel_tol: f64) {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= rel_tol * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let groups: Vec<usize> = (0..n).map(|i| find(&mut label, i)).collect();
    for g in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| groups[i] == g).collect();
        if members.len() < 2 {
            continue;
        }
        let mut z: Complex64 = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
        let mut d = coeffs.to_vec();
        for _ in 0..members.len() - 1 {
            d = d.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
        }
        for _ in 0..50 {
            let (p, dp) = horner(&d, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            z -= step;
            if step.norm() <= 1e-16 * z.norm().max(1.0) {
                break;
            }
        }
        for &i in &members {
            roots[i] = z;
        }
    }
}
