#![allow(dead_code)]

use kova_core::exprio::catalog;
use kova_core::kovalevskaya::Balance;
use kova_core::systems::{HamiltonianSystem, VectorField};
use kova_core::weights::{monomial_basis, WeightTuple};
use kova_core::{int, MultiPoly, Vars};
use num_complex::Complex64;

pub fn sys(id: &str) -> HamiltonianSystem {
    HamiltonianSystem::from_def(&catalog(id).unwrap()).unwrap()
}

pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() < 1e-12 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
    };
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                1.0 + 0.1 * k as f64,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// Coefficients of `g(q, ·)` in ascending powers of `p`.
pub fn coeffs_in_p(g: &MultiPoly, q: Complex64) -> Vec<Complex64> {
    let deg = g.degree_in(1) as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (m, c) in g.terms() {
        let c = kova_core::algebra::rational::to_f64(c);
        out[m.0[1] as usize] += q.powu(m.0[0]) * c;
    }
    out
}

pub fn det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut d = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[r][k] -= f * v;
            }
        }
    }
    d
}

pub fn sylvester(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut s = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[r][r + k] = *c;
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[n + r][r + k] = *c;
        }
    }
    det(s)
}

/// All nonzero solutions of the balance equations of a two-dimensional field,
/// by eliminating `p` through the Sylvester resultant (interpolated on the
/// unit circle) and searching the roots of the resulting polynomial in `q`.
pub fn oracle_balances(f: &VectorField) -> Vec<[Complex64; 2]> {
    let w = f.state_weights();
    let g: Vec<MultiPoly> = (0..2)
        .map(|i| &f.components[i] + &MultiPoly::var(&f.vars, i).scale(&int(w[i])))
        .collect();
    let total = |p: &MultiPoly| p.terms().map(|(m, _)| m.0.iter().sum::<u32>()).max().unwrap_or(0) as usize;
    let bound = total(&g[0]) * total(&g[1]);
    let npts = bound + 1;
    let samples: Vec<Complex64> = (0..npts)
        .map(|k| {
            let q = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / npts as f64);
            sylvester(&coeffs_in_p(&g[0], q), &coeffs_in_p(&g[1], q))
        })
        .collect();
    let res: Vec<Complex64> = (0..npts)
        .map(|j| {
            samples
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / npts as f64)
                })
                .sum::<Complex64>()
                / npts as f64
        })
        .collect();
    let mut out: Vec<[Complex64; 2]> = Vec::new();
    for q in durand_kerner(&res) {
        // Either equation may vanish identically on this fibre.
        let candidates: Vec<Complex64> = g
            .iter()
            .map(|gi| coeffs_in_p(gi, q))
            .filter(|c| c.iter().any(|x| x.norm() > 1e-9))
            .flat_map(|c| durand_kerner(&c))
            .collect();
        for p in candidates {
            let r1 = g[1].eval_complex(&[q, p]).norm();
            let r0 = g[0].eval_complex(&[q, p]).norm();
            let scale = 1.0 + q.norm().max(p.norm()).powi(4);
            if r0.max(r1) > 1e-7 * scale || (q.norm() < 1e-5 && p.norm() < 1e-5) {
                continue;
            }
            if !out.iter().any(|x| (x[0] - q).norm() + (x[1] - p).norm() < 1e-6) {
                out.push([q, p]);
            }
        }
    }
    out
}

pub fn same_sets(a: &[[Complex64; 2]], b: &[Balance]) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| {
            b.iter().any(|y| {
                let c = y.complex();
                (x[0] - c[0]).norm() + (x[1] - c[1]).norm() < 1e-6 * (1.0 + x[0].norm() + x[1].norm())
            })
        })
}

pub fn hamiltonian_field(w: &WeightTuple, coeffs: &[i64]) -> VectorField {
    let v = Vars::new(&["q", "p"]);
    let basis = monomial_basis(w, w.h());
    let h = basis
        .iter()
        .zip(coeffs.iter().cycle())
        .fold(MultiPoly::zero(&v), |acc, (e, &c)| {
            &acc + &MultiPoly::monomial(&v, e.clone(), int(c))
        });
    let f = vec![h.diff(1), -&h.diff(0)];
    VectorField::new(v, f, w.qp_weights()).unwrap()
}
