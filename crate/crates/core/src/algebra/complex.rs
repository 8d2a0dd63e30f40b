//! Double-precision complex fallback: dense matrices, LU solves, numeric
//! spectra and polynomials compiled for fast repeated evaluation.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::multipoly::MultiPoly;
use super::rational::to_f64;
use super::roots::{merge_clusters, poly_roots};
use crate::error::{Error, Result};

pub type ComplexF = Complex64;

/// Relative distance below which numerically split roots are merged.
const CLUSTER_TOL: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::one();
        }
        m
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        CMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn det(&self) -> Result<Complex64> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex64::one();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| a[x * n + c].norm().total_cmp(&a[y * n + c].norm()))
                .unwrap();
            if a[p * n + c].norm() == 0.0 {
                return Ok(Complex64::zero());
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for i in (c + 1)..n {
                let f = a[i * n + c] / piv;
                if f == Complex64::zero() {
                    continue;
                }
                for j in c..n {
                    let v = a[c * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        Ok(det)
    }

    /// Solves `self · x = b` by LU with partial pivoting; `None` if singular.
    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.rows;
        if n != self.cols || b.len() != n {
            return None;
        }
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a[i * n + c].norm().total_cmp(&a[j * n + c].norm()))
                .unwrap();
            if a[p * n + c].norm() <= 1e-14 * scale {
                return None;
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                x.swap(p, c);
            }
            let piv = a[c * n + c];
            for i in (c + 1)..n {
                let f = a[i * n + c] / piv;
                if f == Complex64::zero() {
                    continue;
                }
                for j in c..n {
                    let v = a[c * n + j];
                    a[i * n + j] -= f * v;
                }
                let xc = x[c];
                x[i] -= f * xc;
            }
        }
        for c in (0..n).rev() {
            let s: Complex64 = ((c + 1)..n).map(|j| a[c * n + j] * x[j]).sum();
            x[c] = (x[c] - s) / a[c * n + c];
        }
        x.iter().all(|z| z.is_finite()).then_some(x)
    }

    /// Numerical rank by Gaussian elimination with complete pivoting.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let tol = rel_tol * self.max_abs().max(1.0);
        let mut rank = 0;
        let mut row_used = vec![false; r];
        let mut col_used = vec![false; c];
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for i in (0..r).filter(|&i| !row_used[i]) {
                for j in (0..c).filter(|&j| !col_used[j]) {
                    let v = a[i * c + j].norm();
                    if best.is_none_or(|b| v > b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
            let Some((pi, pj, v)) = best else { break };
            if v <= tol {
                break;
            }
            row_used[pi] = true;
            col_used[pj] = true;
            rank += 1;
            let piv = a[pi * c + pj];
            for i in (0..r).filter(|&i| !row_used[i]) {
                let f = a[i * c + pj] / piv;
                for j in 0..c {
                    let w = a[pi * c + j];
                    a[i * c + j] -= f * w;
                }
            }
        }
        rank
    }

    /// Monic characteristic polynomial, lowest coefficient first.
    pub fn char_poly(&self) -> Result<Vec<Complex64>> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![Complex64::zero(); n + 1];
        coeffs[n] = Complex64::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                next[(i, i)] += coeffs[n - k + 1];
            }
            let am = self.mul(&next);
            let tr: Complex64 = (0..n).map(|i| am[(i, i)]).sum();
            coeffs[n - k] = -tr / k as f64;
            mk = next;
        }
        Ok(coeffs)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues via root isolation of the characteristic polynomial.
/// Each returned value satisfies `|det(M - λI)| < 1e-8 · scale` with
/// `scale = (‖M‖ + |λ|)^n`.
pub fn numeric_eigen(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.data.iter().any(|z| !z.is_finite()) {
        return Err(Error::DimensionMismatch("non-finite matrix entry".into()));
    }
    let n = m.rows;
    let cp = m.char_poly()?;
    let mut roots = poly_roots(&cp)?;
    merge_clusters(&cp, &mut roots, CLUSTER_TOL);
    let norm = m.max_abs() * n as f64;
    for lambda in &roots {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda;
        }
        let scale = (norm + lambda.norm()).max(1.0).powi(n as i32);
        if shifted.det()?.norm() >= 1e-8 * scale {
            return Err(Error::NoConvergence { iterations: 0 });
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// A polynomial flattened to `f64` coefficients and sparse exponent lists.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let terms = p
            .terms()
            .map(|(mono, c)| {
                let exps = mono
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                (to_f64(c), exps)
            })
            .collect();
        CompiledPoly { terms }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, exps)| {
                exps.iter()
                    .fold(Complex64::new(*c, 0.0), |acc, &(i, e)| acc * x[i].powu(e))
            })
            .sum()
    }
}

/// A polynomial map together with its compiled Jacobian.
#[derive(Clone, Debug)]
pub struct CompiledMap {
    f: Vec<CompiledPoly>,
    jac: Vec<Vec<CompiledPoly>>,
}

impl CompiledMap {
    /// Compiles `polys` as functions of the variables at `vars_idx`.
    pub fn new(polys: &[MultiPoly], vars_idx: &[usize]) -> Self {
        let f = polys.iter().map(CompiledPoly::new).collect();
        let jac = polys
            .iter()
            .map(|p| vars_idx.iter().map(|&v| CompiledPoly::new(&p.diff(v))).collect())
            .collect();
        CompiledMap { f, jac }
    }

    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.f.iter().map(|p| p.eval(x)).collect()
    }

    pub fn jacobian(&self, x: &[Complex64]) -> CMatrix {
        let rows = self.jac.len();
        let cols = self.jac.first().map_or(0, Vec::len);
        let data = self.jac.iter().flatten().map(|p| p.eval(x)).collect();
        CMatrix { rows, cols, data }
    }
}
