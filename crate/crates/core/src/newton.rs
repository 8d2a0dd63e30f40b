//! Complex Newton and Gauss–Newton iterations for polynomial maps, and the
//! seeded random battery that drives them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CMatrix, CompiledMap};

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x6b6f_7661;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Convergence threshold on the max-norm of the residual.
    pub tol: f64,
    /// Iterates leaving this ball are abandoned.
    pub escape: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 100,
            tol: 1e-12,
            escape: 1e8,
        }
    }
}

pub fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Outcome of a converged run: the point, its residual and whether the
/// Jacobian at the point looked singular.
#[derive(Clone, Debug)]
pub struct NewtonHit {
    pub x: Vec<Complex64>,
    pub residual: f64,
    pub degenerate: bool,
}

/// Newton for `f(x) = 0` with as many equations as unknowns. A few extra
/// steps after the residual drops below `tol` polish the root.
pub fn newton(map: &CompiledMap, x0: &[Complex64], opts: &NewtonOptions) -> Option<NewtonHit> {
    let mut x = x0.to_vec();
    let mut polish = 0;
    for _ in 0..opts.max_iter {
        let f = map.eval(&x);
        let res = max_norm(&f);
        if !res.is_finite() || max_norm(&x) > opts.escape {
            return None;
        }
        let jac = map.jacobian(&x);
        if res < opts.tol {
            polish += 1;
            if polish > 2 {
                let degenerate = jac.rank(1e-8) < jac.rows();
                return Some(NewtonHit {
                    x,
                    residual: res,
                    degenerate,
                });
            }
        }
        let neg: Vec<Complex64> = f.iter().map(|v| -v).collect();
        let step = match jac.solve(&neg) {
            Some(s) => s,
            None => least_squares_step(&jac, &neg)?,
        };
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi += si;
        }
    }
    let f = map.eval(&x);
    let res = max_norm(&f);
    (res < opts.tol).then(|| NewtonHit {
        degenerate: map.jacobian(&x).rank(1e-8) < x.len(),
        x,
        residual: res,
    })
}

/// Damped normal-equation step `(JᴴJ + μI) δ = Jᴴ b`.
fn least_squares_step(jac: &CMatrix, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let (r, c) = (jac.rows(), jac.cols());
    let mut a = CMatrix::zeros(c, c);
    let mut rhs = vec![Complex64::new(0.0, 0.0); c];
    for i in 0..c {
        for j in 0..c {
            a[(i, j)] = (0..r).map(|k| jac[(k, i)].conj() * jac[(k, j)]).sum();
        }
        rhs[i] = (0..r).map(|k| jac[(k, i)].conj() * b[k]).sum();
    }
    let mu = 1e-10 * a.max_abs().max(1e-300);
    for i in 0..c {
        a[(i, i)] += mu;
    }
    a.solve(&rhs)
}

/// Gauss–Newton for overdetermined (or square, possibly singular) systems.
pub fn gauss_newton(map: &CompiledMap, x0: &[Complex64], opts: &NewtonOptions) -> Option<NewtonHit> {
    let mut x = x0.to_vec();
    for _ in 0..opts.max_iter {
        let f = map.eval(&x);
        let res = max_norm(&f);
        if !res.is_finite() || max_norm(&x) > opts.escape {
            return None;
        }
        if res < opts.tol {
            return Some(NewtonHit {
                degenerate: false,
                x,
                residual: res,
            });
        }
        let jac = map.jacobian(&x);
        let neg: Vec<Complex64> = f.iter().map(|v| -v).collect();
        let step = least_squares_step(&jac, &neg)?;
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi += si;
        }
    }
    None
}

/// Deterministic source of complex seed points in the box
/// `[-radius, radius]²` per coordinate.
pub struct SeedBattery {
    rng: ChaCha8Rng,
    radius: f64,
}

impl SeedBattery {
    pub fn new(seed: u64, radius: f64) -> Self {
        SeedBattery {
            rng: ChaCha8Rng::seed_from_u64(seed),
            radius,
        }
    }

    pub fn point(&mut self, dim: usize) -> Vec<Complex64> {
        (0..dim)
            .map(|_| {
                Complex64::new(
                    self.rng.gen_range(-self.radius..=self.radius),
                    self.rng.gen_range(-self.radius..=self.radius),
                )
            })
            .collect()
    }
}
