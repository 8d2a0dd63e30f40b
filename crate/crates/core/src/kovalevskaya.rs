//! Balances, Kovalevskaya matrices and exponents, and the exact identities
//! that tie exponents to the weights and to commuting Hamiltonians.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::reconstruct;
use crate::algebra::{
    int, numeric_eigen, poly_roots, rational_roots, CMatrix, CompiledMap, CompiledPoly, MultiPoly, RatMatrix,
    Rational, Scalar, UniPoly, Vars,
};
use crate::error::{Error, Result};
use crate::newton::{max_norm, newton, NewtonOptions, SeedBattery, DEFAULT_SEED};
use crate::systems::{hamilton_equations, split_principal, HamiltonianSystem, VectorField};

/// Tolerance for treating numeric exponents as integers.
pub const INTEGER_TOL: f64 = 1e-6;
/// Largest accepted residual of a numeric balance.
pub const BALANCE_TOL: f64 = 1e-8;

/// Autonomous quasihomogeneous core `f^A`: independent variables and
/// parameters set to zero, then only monomials of weighted degree `1 + w_i`
/// kept in component `i`. The result lives on the state variables alone.
pub fn truncate_autonomous(field: &VectorField) -> Result<VectorField> {
    let dim = field.dim;
    let state = Vars::new(&field.vars.names()[..dim]);
    let map: Vec<Option<usize>> = (0..field.vars.len()).map(|i| (i < dim).then_some(i)).collect();
    let w = field.state_weights().to_vec();
    let comps = field
        .components
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut g = f.clone();
            for v in dim..field.vars.len() {
                g = g.specialize(v, &Rational::zero());
            }
            Ok(g.rebase(&state, &map)?.weighted_part(&w, 1 + w[i]))
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(state, comps, w)
}

/// `f^A` of the Hamiltonian field of `H_1`.
pub fn autonomous_field(sys: &HamiltonianSystem) -> Result<VectorField> {
    truncate_autonomous(&hamilton_equations(sys, 0)?)
}

/// Principal parts of every Hamiltonian with independent variables and
/// parameters set to zero, over the state variables.
pub fn autonomous_hamiltonians(sys: &HamiltonianSystem) -> Result<(Vars, Vec<MultiPoly>)> {
    let dim = sys.dim();
    let vars = sys.vars();
    let state = Vars::new(&vars.names()[..dim]);
    let map: Vec<Option<usize>> = (0..vars.len()).map(|i| (i < dim).then_some(i)).collect();
    let mut out = Vec::with_capacity(sys.k());
    for j in 0..sys.k() {
        let (mut hp, _) = split_principal(sys, j)?;
        for v in dim..vars.len() {
            hp = hp.specialize(v, &Rational::zero());
        }
        out.push(hp.rebase(&state, &map)?);
    }
    Ok((state, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceSource {
    ExactVerified,
    NewtonFound,
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Balance {
    pub c: Vec<Scalar>,
    /// `max_i |f_i^A(c) + a_i c_i|`; zero for exact balances.
    pub residual: f64,
    pub source: BalanceSource,
}

impl Balance {
    pub fn exact(c: Vec<Rational>) -> Self {
        Balance {
            c: c.into_iter().map(Scalar::Exact).collect(),
            residual: 0.0,
            source: BalanceSource::ExactVerified,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.c.iter().all(Scalar::is_exact)
    }

    pub fn exact_values(&self) -> Option<Vec<Rational>> {
        self.c.iter().map(|s| s.as_exact().cloned()).collect()
    }

    pub fn complex(&self) -> Vec<Complex64> {
        self.c.iter().map(Scalar::to_complex).collect()
    }
}

impl fmt::Display for Balance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `G(c) = f^A(c) + a∘c`, whose nonzero roots are the balances.
pub fn balance_equations(field: &VectorField) -> Vec<MultiPoly> {
    let w = field.state_weights();
    field
        .components
        .iter()
        .enumerate()
        .map(|(i, f)| f + &MultiPoly::var(&field.vars, i).scale(&int(w[i])))
        .collect()
}

fn require_autonomous(field: &VectorField) -> Result<()> {
    if field.is_autonomous() {
        Ok(())
    } else {
        Err(Error::InvalidSystem(
            "field must be truncated to its autonomous part first".into(),
        ))
    }
}

/// Exact residual check, or the numeric residual for approximate points.
pub fn balance_residual(field: &VectorField, c: &[Scalar]) -> Result<f64> {
    require_autonomous(field)?;
    if c.len() != field.dim {
        return Err(Error::DimensionMismatch(format!(
            "balance of length {} for a {}-dimensional field",
            c.len(),
            field.dim
        )));
    }
    let g = balance_equations(field);
    if let Some(exact) = c
        .iter()
        .map(|s| s.as_exact().cloned())
        .collect::<Option<Vec<_>>>()
    {
        let worst = g
            .iter()
            .map(|gi| crate::algebra::rational::to_f64(&gi.eval(&exact)).abs())
            .fold(0.0, f64::max);
        let all_zero = g.iter().all(|gi| gi.eval(&exact).is_zero());
        return Ok(if all_zero {
            0.0
        } else {
            worst.max(f64::MIN_POSITIVE)
        });
    }
    let x: Vec<Complex64> = c.iter().map(Scalar::to_complex).collect();
    Ok(max_norm(&CompiledMap::new(&g, &[]).eval(&x)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BalanceOptions {
    pub seeds: usize,
    pub radius: f64,
    pub seed: u64,
    pub dedup: f64,
    pub max_den: u64,
}

impl Default for BalanceOptions {
    fn default() -> Self {
        BalanceOptions {
            seeds: 2000,
            radius: 4.0,
            seed: DEFAULT_SEED,
            dedup: 1e-6,
            max_den: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BalanceSearch {
    pub balances: Vec<Balance>,
    pub warnings: Vec<String>,
}

fn try_exact(g: &[MultiPoly], x: &[Complex64], max_den: u64) -> Option<Vec<Rational>> {
    let scale = max_norm(x).max(1.0);
    let c = x
        .iter()
        .map(|z| {
            if z.im.abs() > 1e-7 * scale {
                return None;
            }
            if z.re.abs() < 1e-9 * scale {
                return Some(Rational::zero());
            }
            reconstruct(z.re, max_den, 1e-9)
        })
        .collect::<Option<Vec<_>>>()?;
    g.iter().all(|gi| gi.eval(&c).is_zero()).then_some(c)
}

/// Roots of `f^A(c) + a∘c = 0` with some nonzero-weight coordinate nonzero,
/// found by Newton from a seeded battery,
/// deduplicated and promoted to exact values when rational reconstruction
/// verifies.
pub fn find_balances(field: &VectorField, opts: &BalanceOptions) -> Result<BalanceSearch> {
    require_autonomous(field)?;
    let dim = field.dim;
    let g = balance_equations(field);
    let all: Vec<usize> = (0..dim).collect();
    let map = CompiledMap::new(&g, &all);
    let nopts = NewtonOptions {
        max_iter: 80,
        tol: 1e-11,
        escape: 1e7,
    };
    let mut battery = SeedBattery::new(opts.seed, opts.radius);
    let mut found: Vec<Vec<Complex64>> = Vec::new();
    let mut degenerate = 0usize;
    for _ in 0..opts.seeds {
        let x0 = battery.point(dim);
        let Some(hit) = newton(&map, &x0, &nopts) else {
            continue;
        };
        let size = max_norm(&hit.x);
        let polar = hit
            .x
            .iter()
            .zip(field.state_weights())
            .filter(|(_, &w)| w != 0)
            .map(|(z, _)| z.norm())
            .fold(0.0, f64::max);
        // points living only on weight-0 coordinates are constant solutions
        if polar < 1e-6 {
            continue;
        }
        let dup = found.iter().any(|y| {
            let d = y
                .iter()
                .zip(&hit.x)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            d < opts.dedup * size.max(1.0)
        });
        if dup {
            continue;
        }
        if hit.degenerate {
            degenerate += 1;
        }
        found.push(hit.x);
    }
    let mut warnings = Vec::new();
    if degenerate > 0 {
        warnings.push(format!(
            "{degenerate} balance(s) with singular Newton Jacobian; the balance set may contain positive-dimensional families"
        ));
    }
    let mut balances: Vec<Balance> = found
        .into_iter()
        .map(|x| match try_exact(&g, &x, opts.max_den) {
            Some(c) => Balance::exact(c),
            None => Balance {
                residual: max_norm(&map.eval(&x)),
                c: x.into_iter().map(Scalar::Approx).collect(),
                source: BalanceSource::NewtonFound,
            },
        })
        .filter(|b| b.residual < BALANCE_TOL)
        .collect();
    balances.sort_by(|a, b| {
        a.c.iter()
            .zip(&b.c)
            .map(|(x, y)| x.cmp_re_im(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    // exact promotion can merge near-duplicates that straddled the threshold
    balances.dedup_by(|a, b| a.is_exact() && a.c == b.c);
    Ok(BalanceSearch { balances, warnings })
}

#[derive(Clone, Debug, PartialEq)]
pub enum KMatrix {
    Exact(RatMatrix),
    Numeric(CMatrix),
}

impl KMatrix {
    pub fn to_complex(&self) -> CMatrix {
        match self {
            KMatrix::Numeric(m) => m.clone(),
            KMatrix::Exact(m) => {
                let data = m
                    .entries()
                    .iter()
                    .map(|q| Complex64::new(crate::algebra::rational::to_f64(q), 0.0))
                    .collect();
                CMatrix::new(m.rows(), m.cols(), data).expect("shape preserved")
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            KMatrix::Exact(m) => m.rows(),
            KMatrix::Numeric(m) => m.rows(),
        }
    }

    /// Entry `(i, j)` as a tagged scalar.
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        match self {
            KMatrix::Exact(m) => Scalar::Exact(m.get(i, j).clone()),
            KMatrix::Numeric(m) => Scalar::Approx(m[(i, j)]),
        }
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let r: Vec<String> = (0..n).map(|j| self.entry(i, j).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `K(c) = Df^A(c) + diag(a)`, exact when `c` is exact.
pub fn kov_matrix(field: &VectorField, c: &Balance) -> Result<KMatrix> {
    let residual = balance_residual(field, &c.c)?;
    let exact = c.exact_values();
    if (exact.is_some() && residual != 0.0) || residual >= BALANCE_TOL {
        return Err(Error::NotABalance(residual));
    }
    let n = field.dim;
    let w = field.state_weights();
    match exact {
        Some(x) => {
            let mut k = RatMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut v = field.components[i].diff(j).eval(&x);
                    if i == j {
                        v += int(w[i]);
                    }
                    k.set(i, j, v);
                }
            }
            Ok(KMatrix::Exact(k))
        }
        None => {
            let x = c.complex();
            let mut k = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut v = CompiledPoly::new(&field.components[i].diff(j)).eval(&x);
                    if i == j {
                        v += Complex64::new(w[i] as f64, 0.0);
                    }
                    k[(i, j)] = v;
                }
            }
            Ok(KMatrix::Numeric(k))
        }
    }
}

/// Evaluates `p(M)` by Horner's rule.
fn matrix_poly(p: &UniPoly, m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.rows();
    let mut acc = RatMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m)?;
        for i in 0..n {
            let v = acc.get(i, i) + c;
            acc.set(i, i, v);
        }
    }
    Ok(acc)
}

/// Exact spectrum of a rational matrix: rational eigenvalues exactly, the
/// rest numerically; sorted by (real, imaginary) part.
pub fn exact_spectrum(k: &RatMatrix) -> Result<(Vec<Scalar>, UniPoly)> {
    let cp = k.char_poly()?;
    let (roots, rest) = rational_roots(&cp)?;
    let mut out: Vec<Scalar> = roots
        .iter()
        .flat_map(|(r, m)| std::iter::repeat_n(Scalar::Exact(r.clone()), *m))
        .collect();
    if rest.degree().unwrap_or(0) > 0 {
        let coeffs: Vec<Complex64> = rest
            .to_f64()
            .into_iter()
            .map(|c| Complex64::new(c, 0.0))
            .collect();
        out.extend(poly_roots(&coeffs)?.into_iter().map(Scalar::Approx));
    }
    out.sort_by(|a, b| a.cmp_re_im(b));
    Ok((out, cp))
}

/// Diagonalizability: the square-free part of the characteristic polynomial
/// must annihilate the matrix.
pub fn is_semisimple_exact(k: &RatMatrix, cp: &UniPoly) -> Result<bool> {
    let g = cp.gcd(&cp.derivative());
    let (sqf, _) = cp.div_rem(&g)?;
    Ok(matrix_poly(&sqf, k)?.entries().iter().all(Zero::is_zero))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KovalevskayaReport {
    pub balance: Balance,
    #[serde(skip)]
    pub k: Option<KMatrix>,
    pub exponents: Vec<Scalar>,
    /// `None` when a numeric spectrum has clustered eigenvalues.
    pub semisimple: Option<bool>,
    pub principal: bool,
    /// `a∘c`, which must be an eigenvector of `K` for eigenvalue `-1`.
    pub eigvec_minus1: Vec<Scalar>,
    pub eigvec_ok: bool,
    pub has_minus_one: bool,
}

impl KovalevskayaReport {
    /// Exponents with near-integers snapped to exact integers.
    pub fn signature(&self) -> Vec<Scalar> {
        signature(&self.exponents)
    }
}

pub fn signature(exps: &[Scalar]) -> Vec<Scalar> {
    let mut v: Vec<Scalar> = exps
        .iter()
        .map(|e| match e.as_integer(INTEGER_TOL) {
            Some(n) => Scalar::Exact(int(n)),
            None => e.clone(),
        })
        .collect();
    v.sort_by(|a, b| a.cmp_re_im(b));
    v
}

pub fn signature_string(sig: &[Scalar]) -> String {
    let parts: Vec<String> = sig.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(","))
}

fn is_principal(exps: &[Scalar], semisimple: Option<bool>) -> bool {
    let ints: Option<Vec<i64>> = exps.iter().map(|e| e.as_integer(INTEGER_TOL)).collect();
    let Some(mut ints) = ints else {
        return false;
    };
    let Some(pos) = ints.iter().position(|&x| x == -1) else {
        return false;
    };
    ints.remove(pos);
    semisimple == Some(true) && ints.iter().all(|&x| x >= 0)
}

pub fn exponents(field: &VectorField, c: &Balance) -> Result<KovalevskayaReport> {
    let k = kov_matrix(field, c)?;
    let w = field.state_weights();
    let (exps, semisimple, eigvec, eigvec_ok) = match &k {
        KMatrix::Exact(m) => {
            let (exps, cp) = exact_spectrum(m)?;
            let semisimple = is_semisimple_exact(m, &cp)?;
            let cx = c.exact_values().expect("exact K comes from an exact balance");
            let v: Vec<Rational> = cx.iter().zip(w).map(|(ci, &a)| ci * int(a)).collect();
            let kv = m.mul_vec(&v)?;
            let ok = kv.iter().zip(&v).all(|(x, y)| (x + y).is_zero());
            (
                exps,
                Some(semisimple),
                v.into_iter().map(Scalar::Exact).collect(),
                ok,
            )
        }
        KMatrix::Numeric(m) => {
            let exps: Vec<Scalar> = numeric_eigen(m)?.into_iter().map(Scalar::Approx).collect();
            let min_gap = exps
                .iter()
                .enumerate()
                .flat_map(|(i, a)| {
                    exps[i + 1..]
                        .iter()
                        .map(move |b| (a.to_complex() - b.to_complex()).norm())
                })
                .fold(f64::INFINITY, f64::min);
            let semisimple = (min_gap >= 1e-6).then_some(true);
            let x = c.complex();
            let v: Vec<Complex64> = x.iter().zip(w).map(|(ci, &a)| ci * a as f64).collect();
            let kv = m.mul_vec(&v);
            let scale = m.max_abs().max(1.0) * max_norm(&v).max(1.0);
            let ok = kv.iter().zip(&v).all(|(x, y)| (x + y).norm() < 1e-8 * scale);
            (exps, semisimple, v.into_iter().map(Scalar::Approx).collect(), ok)
        }
    };
    let has_minus_one = exps
        .iter()
        .any(|e| e.close_to(&Scalar::Exact(-Rational::one()), INTEGER_TOL));
    Ok(KovalevskayaReport {
        balance: c.clone(),
        principal: is_principal(&exps, semisimple),
        k: Some(k),
        exponents: exps,
        semisimple,
        eigvec_minus1: eigvec,
        eigvec_ok,
        has_minus_one,
    })
}

/// The multiset is symmetric under `κ ↦ h − 1 − κ` and contains `h`.
pub fn pairing_check(exps: &[Scalar], h: i64) -> bool {
    let target = Scalar::Exact(int(h));
    if !exps.iter().any(|e| e.close_to(&target, INTEGER_TOL)) {
        return false;
    }
    let mirrored: Vec<Scalar> = exps
        .iter()
        .map(|e| match e {
            Scalar::Exact(q) => Scalar::Exact(int(h - 1) - q),
            Scalar::Approx(z) => Scalar::Approx(Complex64::new((h - 1) as f64, 0.0) - z),
        })
        .collect();
    let mut used = vec![false; exps.len()];
    mirrored.iter().all(|m| {
        match exps
            .iter()
            .enumerate()
            .position(|(i, e)| !used[i] && e.close_to(m, INTEGER_TOL))
        {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientIdentity {
    pub hamiltonian: String,
    pub degree: i64,
    /// `H_j(c)`, which must vanish.
    pub value: Scalar,
    pub gradient: Vec<Scalar>,
    pub gradient_zero: bool,
    /// `dH_j(c) (K(c) − h_j I)`.
    pub residual: Vec<Scalar>,
    pub residual_zero: bool,
    pub value_zero: bool,
}

fn row_times(row: &[Scalar], k: &KMatrix, h: i64) -> Vec<Scalar> {
    let n = row.len();
    match (
        k,
        row.iter()
            .map(|s| s.as_exact().cloned())
            .collect::<Option<Vec<_>>>(),
    ) {
        (KMatrix::Exact(m), Some(r)) => (0..n)
            .map(|j| {
                let mut acc = Rational::zero();
                for (i, ri) in r.iter().enumerate() {
                    let mut kij = m.get(i, j).clone();
                    if i == j {
                        kij -= int(h);
                    }
                    acc += ri * kij;
                }
                Scalar::Exact(acc)
            })
            .collect(),
        _ => {
            let kc = k.to_complex();
            (0..n)
                .map(|j| {
                    let s: Complex64 = (0..n)
                        .map(|i| {
                            let mut kij = kc[(i, j)];
                            if i == j {
                                kij -= h as f64;
                            }
                            row[i].to_complex() * kij
                        })
                        .sum();
                    Scalar::Approx(s)
                })
                .collect()
        }
    }
}

/// Canonical bracket over a ring whose first `2m` variables are
/// `(q_1..q_m, p_1..p_m)`.
pub fn state_bracket(f: &MultiPoly, g: &MultiPoly, m: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(f.vars());
    for i in 0..m {
        out = &out + &(&f.diff(i) * &g.diff(m + i));
        out = &out - &(&f.diff(m + i) * &g.diff(i));
    }
    out
}

/// `H_j(c) = 0` and `dH_j(c)(K(c) − h_j I) = 0` for every Hamiltonian.
/// The autonomous principal parts must Poisson-commute.
pub fn theorem45_check(sys: &HamiltonianSystem, c: &Balance) -> Result<Vec<GradientIdentity>> {
    let field = autonomous_field(sys)?;
    let k = kov_matrix(&field, c)?;
    let (_, hams) = autonomous_hamiltonians(sys)?;
    for (i, a) in hams.iter().enumerate() {
        for b in &hams[i + 1..] {
            if !state_bracket(a, b, sys.m()).is_zero() {
                return Err(Error::InvalidSystem(
                    "principal Hamiltonians do not Poisson-commute".into(),
                ));
            }
        }
    }
    let n = field.dim;
    let exact = c.exact_values();
    let x = c.complex();
    let scale = max_norm(&x).max(1.0);
    let tol = 1e-7;
    hams.iter()
        .enumerate()
        .map(|(j, h)| {
            let eval = |p: &MultiPoly| match &exact {
                Some(e) => Scalar::Exact(p.eval(e)),
                None => Scalar::Approx(CompiledPoly::new(p).eval(&x)),
            };
            let deg = sys.degrees()[j];
            let value = eval(h);
            let gradient: Vec<Scalar> = (0..n).map(|v| eval(&h.diff(v))).collect();
            let residual = row_times(&gradient, &k, deg);
            let size = scale.powi(deg as i32);
            Ok(GradientIdentity {
                hamiltonian: sys.def.hamiltonians[j].name.clone(),
                degree: deg,
                value_zero: value.is_zero(tol * size),
                gradient_zero: gradient.iter().all(|g| g.is_zero(tol * size)),
                residual_zero: residual.iter().all(|g| g.is_zero(tol * size * scale)),
                value,
                gradient,
                residual,
            })
        })
        .collect()
}

/// Exponent signatures with their balance counts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SignatureCount {
    pub signature: Vec<Scalar>,
    pub count: usize,
}

/// Groups reports by signature: fewer negative exponents first, then
/// lexicographically descending.
pub fn signature_counts(reports: &[KovalevskayaReport]) -> Vec<SignatureCount> {
    let mut map: BTreeMap<String, SignatureCount> = BTreeMap::new();
    for r in reports {
        let sig = r.signature();
        map.entry(signature_string(&sig))
            .or_insert_with(|| SignatureCount {
                signature: sig,
                count: 0,
            })
            .count += 1;
    }
    let mut out: Vec<SignatureCount> = map.into_values().collect();
    let negatives = |s: &[Scalar]| s.iter().filter(|x| x.to_complex().re < 0.0).count();
    out.sort_by(|a, b| {
        negatives(&a.signature)
            .cmp(&negatives(&b.signature))
            .then_with(|| {
                b.signature
                    .iter()
                    .zip(&a.signature)
                    .map(|(x, y)| x.cmp_re_im(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    out
}

pub fn format_signature_counts(counts: &[SignatureCount]) -> String {
    counts
        .iter()
        .map(|s| format!("{}x{}", signature_string(&s.signature), s.count))
        .collect::<Vec<_>>()
        .join(", ")
}
