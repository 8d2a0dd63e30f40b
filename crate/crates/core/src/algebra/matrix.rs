//! Dense rational matrices, characteristic polynomials and exact linear
//! solving with polynomial right-hand sides.

use std::fmt;

use num_traits::{One, Zero};

use super::multipoly::MultiPoly;
use super::rational::{int, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("rectangular integer rows")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.transpose().mul_vec(v)
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: &Rational) -> Result<Self> {
        self.require_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - lambda;
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Monic `det(λI - M)` by the Faddeev–LeVerrier trace recurrence.
    pub fn char_poly(&self) -> Result<UniPoly> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&mk)?;
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            let am = self.mul(&next)?;
            coeffs[n - k] = -am.trace() / int(k as i64);
            mk = next;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in 0..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..self.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel, one vector per free column of the RREF
    /// (free entry 1, other free entries 0).
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Gaussian elimination of `self · x = b` with polynomial right-hand side.
    pub fn solve(&self, b: &[MultiPoly]) -> Result<LinearSolution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let Some(first) = b.first() else {
            return Err(Error::DimensionMismatch("empty system".into()));
        };
        let vars = first.vars().clone();
        if let Some(bad) = b.iter().find(|p| p.vars() != &vars) {
            return Err(Error::VarTableMismatch {
                left: vars.names().to_vec(),
                right: bad.vars().names().to_vec(),
            });
        }

        let mut m = self.clone();
        let mut rhs: Vec<MultiPoly> = b.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            rhs.swap(r, p);
            let inv = m.get(r, c).recip();
            for j in 0..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            rhs[r] = rhs[r].scale(&inv);
            for i in 0..self.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..self.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
                rhs[i] = &rhs[i] - &rhs[r].scale(&f);
            }
            pivots.push(c);
            r += 1;
        }

        if let Some(res) = rhs[r..].iter().find(|p| !p.is_zero()) {
            return Ok(LinearSolution::Inconsistent {
                residual: res.clone(),
            });
        }
        let mut x = vec![MultiPoly::zero(&vars); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = rhs[row].clone();
        }
        if pivots.len() == self.cols {
            Ok(LinearSolution::Unique(x))
        } else {
            Ok(LinearSolution::Parametric {
                particular: x,
                kernel: kernel_from_rref(&m, &pivots),
            })
        }
    }
}

fn kernel_from_rref(r: &RatMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..r.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); r.cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

/// Outcome of [`RatMatrix::solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    Unique(Vec<MultiPoly>),
    /// Particular solution (free unknowns set to zero) plus a kernel basis.
    Parametric {
        particular: Vec<MultiPoly>,
        kernel: Vec<Vec<Rational>>,
    },
    /// Some eliminated row reads `0 = residual` with a nonzero residual.
    Inconsistent {
        residual: MultiPoly,
    },
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
