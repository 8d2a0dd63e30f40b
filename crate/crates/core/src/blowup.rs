//! Weighted blow-up charts of a quasihomogeneous field, the induced field on
//! the exceptional divisor, its fixed points and their invariant manifolds.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{exact_root, powi};
use crate::algebra::{
    int, numeric_eigen, rat, CMatrix, CompiledMap, CompiledPoly, MultiPoly, RatMatrix, Rational, Scalar, Vars,
};
use crate::error::{Error, Result};
use crate::kovalevskaya::{
    autonomous_field, autonomous_hamiltonians, exact_spectrum, Balance, KovalevskayaReport,
};
use crate::newton::{gauss_newton, max_norm, newton, NewtonOptions, SeedBattery, DEFAULT_SEED};
use crate::systems::{HamiltonianSystem, VectorField};

/// Chart `x_j = r^{a_j}`, `x_i = r^{a_i} X_i`, with time rescaled so that
/// `d/dz = r d/dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupChart {
    pub index: usize,
    pub source: Vars,
    pub weights: Vec<i64>,
    /// `(r, X_i for i ≠ j)`.
    pub vars: Vars,
    pub field: VectorField,
    /// `f_j(X)` with `X_j = 1`; `dr/dt = r f_j / a_j`.
    pub leading: MultiPoly,
}

impl BlowupChart {
    /// Order of the cyclic group acting on the chart.
    pub fn order(&self) -> i64 {
        self.weights[self.index]
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Chart coordinate index of source variable `i ≠ j`.
    pub fn chart_index(&self, i: usize) -> Option<usize> {
        match i.cmp(&self.index) {
            std::cmp::Ordering::Less => Some(i + 1),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i),
        }
    }

    /// Substitutes `x_i = r^{a_i} X_i` into a polynomial in the source
    /// variables.
    pub fn pullback(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.vars() != &self.source {
            return Err(Error::VarTableMismatch {
                left: p.vars().names().to_vec(),
                right: self.source.names().to_vec(),
            });
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in p.terms() {
            let mut e = vec![0u32; self.vars.len()];
            let mut rpow = 0i64;
            for (i, &k) in m.0.iter().enumerate() {
                rpow += self.weights[i] * k as i64;
                if let Some(ci) = self.chart_index(i) {
                    e[ci] = k;
                }
            }
            e[0] = rpow as u32;
            out = &out + &MultiPoly::monomial(&self.vars, e, c.clone());
        }
        Ok(out)
    }

    /// Writes a quasihomogeneous polynomial as `r^h · G(X)`.
    pub fn factor(&self, p: &MultiPoly) -> Result<(i64, MultiPoly)> {
        let pulled = self.pullback(p)?;
        let powers: Vec<u32> = pulled.terms().map(|(m, _)| m.0[0]).collect();
        let Some(&h) = powers.first() else {
            return Ok((0, pulled));
        };
        if powers.iter().any(|&k| k != h) {
            return Err(Error::InvalidSystem(
                "polynomial is not quasihomogeneous for the chart weights".into(),
            ));
        }
        Ok((h as i64, pulled.specialize(0, &Rational::one())))
    }

    /// Restricts polynomials on the chart to `r = 0`, over the ring of the
    /// `X` coordinates alone.
    pub fn on_divisor(&self, polys: &[MultiPoly]) -> Result<(Vars, Vec<MultiPoly>)> {
        let xvars = Vars::new(&self.vars.names()[1..]);
        let map: Vec<Option<usize>> = (0..self.vars.len()).map(|i| i.checked_sub(1)).collect();
        let out = polys
            .iter()
            .map(|f| f.specialize(0, &Rational::zero()).rebase(&xvars, &map))
            .collect::<Result<Vec<_>>>()?;
        Ok((xvars, out))
    }
}

fn chart_name(name: &str) -> String {
    let mut cs = name.chars();
    match cs.next() {
        Some(f) => f.to_uppercase().chain(cs).collect(),
        None => String::new(),
    }
}

/// Blow-up chart `j` of a quasihomogeneous autonomous field with positive
/// weights.
pub fn make_chart(field: &VectorField, j: usize) -> Result<BlowupChart> {
    if !field.is_autonomous() {
        return Err(Error::InvalidSystem(
            "blow-up charts need the autonomous quasihomogeneous part".into(),
        ));
    }
    let m = field.dim;
    if j >= m {
        return Err(Error::IndexOutOfRange { index: j, len: m });
    }
    let w = field.state_weights().to_vec();
    if let Some(i) = w.iter().position(|&a| a <= 0) {
        return Err(Error::NonpositiveWeight(field.vars.name(i).to_string()));
    }
    for (i, f) in field.components.iter().enumerate() {
        if !f.is_quasihomogeneous(&w, 1 + w[i]) {
            return Err(Error::InvalidSystem(format!(
                "component {} is not quasihomogeneous of degree {}",
                field.vars.name(i),
                1 + w[i]
            )));
        }
    }
    let mut names = vec!["r".to_string()];
    names.extend((0..m).filter(|&i| i != j).map(|i| chart_name(field.vars.name(i))));
    let vars = Vars::new(&names);
    let mut chart = BlowupChart {
        index: j,
        source: field.vars.clone(),
        weights: w.clone(),
        vars: vars.clone(),
        field: VectorField::new(vars.clone(), Vec::new(), vec![0; m])?,
        leading: MultiPoly::zero(&vars),
    };
    let reduced: Vec<MultiPoly> = field
        .components
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let (h, g) = chart.factor(f)?;
            debug_assert!(g.is_zero() || h == 1 + w[i]);
            Ok(g)
        })
        .collect::<Result<_>>()?;
    let fj = reduced[j].clone();
    let r = MultiPoly::var(&vars, 0);
    let aj = int(w[j]);
    let mut comps = vec![(&r * &fj).scale(&aj.recip())];
    for i in (0..m).filter(|&i| i != j) {
        let xi = MultiPoly::var(&vars, chart.chart_index(i).expect("i differs from j"));
        let term = (&xi * &fj).scale(&(int(w[i]) / &aj));
        comps.push(&reduced[i] - &term);
    }
    chart.field = VectorField::new(vars, comps, vec![0; m])?;
    chart.leading = fj;
    Ok(chart)
}

/// Chart of the autonomous principal field of `H_1`.
pub fn hamiltonian_chart(sys: &HamiltonianSystem, j: usize) -> Result<BlowupChart> {
    make_chart(&autonomous_field(sys)?, j)
}

/// Chart index of a state variable given by name.
pub fn chart_by_name(sys: &HamiltonianSystem, name: &str) -> Result<usize> {
    sys.vars()
        .index_of(name)
        .filter(|&i| i < sys.dim())
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDims {
    pub stable: usize,
    pub unstable: usize,
    pub center: usize,
    /// Some normalized eigenvalue sits within 1e−8 of the imaginary axis.
    pub tolerance_sensitive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorFixedPoint {
    pub chart: usize,
    /// `(r, X)` with `r = 0`.
    pub coords: Vec<Scalar>,
    pub balance: Balance,
    /// Spectrum of the chart Jacobian, sorted by (real, imaginary) part.
    pub spectrum: Vec<Scalar>,
    /// `λ_1 = f_j(X)/a_j`, the eigenvalue along `r`.
    pub lambda_r: Scalar,
    pub dims: ManifoldDims,
    pub on_v0: Option<bool>,
    pub v0_singular: Option<bool>,
    pub lowest_balance: Option<bool>,
}

/// `c_j^{-a_i/a_j}`, exact whenever an exact real root exists.
fn scaled_power(cj: &Rational, ai: i64, aj: i64) -> Scalar {
    let g = ai.gcd(&aj);
    let (num, den) = (ai / g, aj / g);
    match exact_root(cj, den as u32) {
        Some(root) => Scalar::Exact(powi(&root, -num)),
        None => {
            let z = Complex64::new(crate::algebra::rational::to_f64(cj), 0.0);
            Scalar::Approx((z.ln() * (-(ai as f64) / aj as f64)).exp())
        }
    }
}

fn scalar_mul(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x * y),
        _ => Scalar::Approx(a.to_complex() * b.to_complex()),
    }
}

/// Image of a balance on the divisor of chart `j`: `X_i = c_j^{-a_i/a_j} c_i`.
/// `None` when `c_j = 0`.
pub fn balance_point(chart: &BlowupChart, c: &Balance) -> Option<Vec<Scalar>> {
    let j = chart.index;
    let aj = chart.order();
    let mut coords = vec![Scalar::Exact(Rational::zero())];
    match &c.c[j] {
        Scalar::Exact(cj) => {
            if cj.is_zero() {
                return None;
            }
            for i in (0..chart.dim()).filter(|&i| i != j) {
                coords.push(scalar_mul(&scaled_power(cj, chart.weights[i], aj), &c.c[i]));
            }
        }
        Scalar::Approx(cj) => {
            if cj.norm() < 1e-10 {
                return None;
            }
            for i in (0..chart.dim()).filter(|&i| i != j) {
                let f = (cj.ln() * (-(chart.weights[i] as f64) / aj as f64)).exp();
                coords.push(Scalar::Approx(f * c.c[i].to_complex()));
            }
        }
    }
    Some(coords)
}

fn as_exact_vec(v: &[Scalar]) -> Option<Vec<Rational>> {
    v.iter().map(|s| s.as_exact().cloned()).collect()
}

/// Chart Jacobian at a point; exact when the point is exact.
pub fn chart_jacobian(chart: &BlowupChart, point: &[Scalar]) -> (Option<RatMatrix>, CMatrix) {
    let n = chart.dim();
    let zs: Vec<Complex64> = point.iter().map(Scalar::to_complex).collect();
    let mut num = CMatrix::zeros(n, n);
    let exact = as_exact_vec(point);
    let mut ex = exact.as_ref().map(|_| RatMatrix::zeros(n, n));
    for i in 0..n {
        for k in 0..n {
            let d = chart.field.components[i].diff(k);
            num[(i, k)] = d.eval_complex(&zs);
            if let (Some(m), Some(x)) = (ex.as_mut(), exact.as_ref()) {
                m.set(i, k, d.eval(x));
            }
        }
    }
    (ex, num)
}

fn spectrum_of(exact: Option<&RatMatrix>, num: &CMatrix) -> Result<Vec<Scalar>> {
    match exact {
        Some(m) => Ok(exact_spectrum(m)?.0),
        None => {
            let mut v: Vec<Scalar> = numeric_eigen(num)?.into_iter().map(Scalar::Approx).collect();
            v.sort_by(|a, b| a.cmp_re_im(b));
            Ok(v)
        }
    }
}

/// Signs of `κ = −λ/λ_1`, which are independent of the root branch.
pub fn manifold_dims(spectrum: &[Scalar], lambda_r: &Scalar) -> ManifoldDims {
    let l1 = lambda_r.to_complex();
    let mut d = ManifoldDims::default();
    for s in spectrum {
        let kappa = -s.to_complex() / l1;
        if kappa.re.abs() <= 1e-8 {
            d.center += 1;
            d.tolerance_sensitive |= kappa.re != 0.0 || s.as_exact().is_none();
        } else if kappa.re < 0.0 {
            d.stable += 1;
        } else {
            d.unstable += 1;
        }
    }
    d
}

fn eval_at(p: &MultiPoly, point: &[Scalar]) -> Scalar {
    match as_exact_vec(point) {
        Some(x) => Scalar::Exact(p.eval(&x)),
        None => {
            let z: Vec<Complex64> = point.iter().map(Scalar::to_complex).collect();
            Scalar::Approx(p.eval_complex(&z))
        }
    }
}

/// Numeric or exact rank of a matrix of scalars.
fn scalar_rank(rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    if let Some(ex) = rows.iter().map(|r| as_exact_vec(r)).collect::<Option<Vec<_>>>() {
        return RatMatrix::from_rows(ex).map(|m| m.rank()).unwrap_or(0);
    }
    let data: Vec<Complex64> = rows.iter().flatten().map(Scalar::to_complex).collect();
    CMatrix::new(rows.len(), cols, data)
        .map(|m| m.rank(1e-8))
        .unwrap_or(0)
}

/// Context for the Hamiltonian-specific flags of a fixed point.
pub struct HamiltonianContext<'a> {
    pub v0: &'a [MultiPoly],
    /// Autonomous principal Hamiltonians over the state ring.
    pub hams: &'a [MultiPoly],
    pub m: usize,
}

/// Divisor fixed points of chart `j` coming from the given balances; those
/// with `c_j = 0` are skipped.
pub fn divisor_fixed_points(
    chart: &BlowupChart,
    balances: &[Balance],
    ham: Option<&HamiltonianContext<'_>>,
) -> Result<Vec<DivisorFixedPoint>> {
    let mut out = Vec::new();
    for c in balances {
        let Some(coords) = balance_point(chart, c) else {
            continue;
        };
        let (ex, num) = chart_jacobian(chart, &coords);
        let spectrum = spectrum_of(ex.as_ref(), &num)?;
        let lambda_r = eval_at(&chart.leading, &coords[..]);
        let lambda_r = match lambda_r {
            Scalar::Exact(q) => Scalar::Exact(q / int(chart.order())),
            Scalar::Approx(z) => Scalar::Approx(z / chart.order() as f64),
        };
        let dims = manifold_dims(&spectrum, &lambda_r);
        let mut fp = DivisorFixedPoint {
            chart: chart.index,
            coords,
            balance: c.clone(),
            spectrum,
            lambda_r,
            dims,
            on_v0: None,
            v0_singular: None,
            lowest_balance: None,
        };
        if let Some(h) = ham {
            let vals: Vec<Scalar> = h.v0.iter().map(|g| eval_at(g, &fp.coords)).collect();
            fp.on_v0 = Some(vals.iter().all(|v| v.is_zero(1e-8)));
            let grads: Vec<Vec<Scalar>> =
                h.v0.iter()
                    .map(|g| {
                        (1..chart.dim())
                            .map(|k| eval_at(&g.diff(k), &fp.coords))
                            .collect()
                    })
                    .collect();
            fp.v0_singular = Some(scalar_rank(&grads) < h.v0.len());
            let dh: Vec<Vec<Scalar>> = h
                .hams
                .iter()
                .map(|hj| (0..chart.dim()).map(|k| eval_at(&hj.diff(k), &c.c)).collect())
                .collect();
            fp.lowest_balance = Some(dims.stable == h.m && dims.unstable == h.m && scalar_rank(&dh) == h.m);
        }
        out.push(fp);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    /// `λ_i/λ_1`, sorted.
    pub ratios: Vec<Scalar>,
    /// `−κ_i`, sorted.
    pub expected: Vec<Scalar>,
    pub max_error: f64,
    pub holds: bool,
}

/// The chart spectrum is `κ · λ_1 / (−1)`: compares `λ_i/λ_1` with `−κ_i`
/// as multisets.
pub fn prop42_check(fp: &DivisorFixedPoint, report: &KovalevskayaReport) -> Result<RatioReport> {
    let l1 = fp.lambda_r.clone();
    let ratios: Vec<Scalar> = fp
        .spectrum
        .iter()
        .map(|s| match (s, &l1) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            _ => Scalar::Approx(s.to_complex() / l1.to_complex()),
        })
        .collect();
    let expected: Vec<Scalar> = report
        .exponents
        .iter()
        .map(|k| match k {
            Scalar::Exact(q) => Scalar::Exact(-q.clone()),
            Scalar::Approx(z) => Scalar::Approx(-z),
        })
        .collect();
    if ratios.len() != expected.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} chart eigenvalues against {} exponents",
            ratios.len(),
            expected.len()
        )));
    }
    let mut used = vec![false; expected.len()];
    let mut max_error = 0.0f64;
    let mut holds = true;
    for r in &ratios {
        let best = expected
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, e)| (i, (r.to_complex() - e.to_complex()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, d)) => {
                used[i] = true;
                max_error = max_error.max(d);
                if let (Scalar::Exact(a), Scalar::Exact(b)) = (r, &expected[i]) {
                    holds &= a == b;
                }
            }
            None => holds = false,
        }
    }
    holds &= max_error < 1e-8;
    let mut ratios = ratios;
    ratios.sort_by(|a, b| a.cmp_re_im(b));
    let mut expected = expected;
    expected.sort_by(|a, b| a.cmp_re_im(b));
    Ok(RatioReport {
        ratios,
        expected,
        max_error,
        holds,
    })
}

/// `H_j(X)` with the chart variable set to one, for every Hamiltonian.
pub fn v0_equations(chart: &BlowupChart, sys: &HamiltonianSystem) -> Result<Vec<MultiPoly>> {
    let (_, hams) = autonomous_hamiltonians(sys)?;
    hams.iter()
        .map(|h| Ok(chart.factor(h)?.1.specialize(0, &Rational::zero())))
        .collect()
}

/// `dG/dt + (h/a_j) f_j(X) G` for `G = H(X)|_{X_j = 1}`; vanishes
/// identically when `H` is a first integral of degree `h`.
pub fn v0_invariance_residual(chart: &BlowupChart, h: &MultiPoly, degree: i64) -> Result<MultiPoly> {
    let (_, g) = chart.factor(h)?;
    let g = g.specialize(0, &Rational::zero());
    let mut dg = MultiPoly::zero(&chart.vars);
    for k in 1..chart.dim() {
        dg = &dg + &(&g.diff(k) * &chart.field.components[k]);
    }
    let coef = rat(degree, chart.order());
    Ok(&dg + &(&chart.leading * &g).scale(&coef))
}

pub fn v0_invariance_identity(
    chart: &BlowupChart,
    sys: &HamiltonianSystem,
    which: usize,
) -> Result<MultiPoly> {
    let (_, hams) = autonomous_hamiltonians(sys)?;
    let h = hams.get(which).ok_or(Error::IndexOutOfRange {
        index: which,
        len: hams.len(),
    })?;
    v0_invariance_residual(chart, h, sys.degrees()[which])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointSearch {
    pub seeds: usize,
    pub radius: f64,
    pub seed: u64,
}

impl Default for FixedPointSearch {
    fn default() -> Self {
        FixedPointSearch {
            seeds: 2000,
            radius: 5.0,
            seed: DEFAULT_SEED,
        }
    }
}

/// Divisor fixed points found directly by Newton on the `X` equations (given
/// without the `r = 0` coordinate), each mapped back to the balance `c_i = s^{a_i} X_i` with `s = −a_j / f_j(X)`.
pub fn newton_fixed_points(
    chart: &BlowupChart,
    opts: &FixedPointSearch,
) -> Result<Vec<(Vec<Complex64>, Vec<Complex64>)>> {
    let n = chart.dim();
    let (_, eqs) = chart.on_divisor(&chart.field.components[1..])?;
    let idx: Vec<usize> = (0..n - 1).collect();
    let map = CompiledMap::new(&eqs, &idx);
    let (_, lead) = chart.on_divisor(std::slice::from_ref(&chart.leading))?;
    let lead = CompiledPoly::new(&lead[0]);
    let mut battery = SeedBattery::new(opts.seed, opts.radius);
    let nopts = NewtonOptions::default();
    let mut found: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..opts.seeds {
        let x0 = battery.point(n - 1);
        let Some(hit) = newton(&map, &x0, &nopts) else {
            continue;
        };
        let scale = max_norm(&hit.x).max(1.0);
        if found
            .iter()
            .any(|y| y.iter().zip(&hit.x).all(|(a, b)| (a - b).norm() < 1e-6 * scale))
        {
            continue;
        }
        found.push(hit.x);
    }
    let aj = chart.order() as f64;
    Ok(found
        .into_iter()
        .filter_map(|x| {
            let fj = lead.eval(&x);
            if fj.norm() < 1e-8 {
                return None;
            }
            let s = -aj / fj;
            let c: Vec<Complex64> = (0..n)
                .map(|i| {
                    let xi = match chart.chart_index(i) {
                        Some(k) => x[k - 1],
                        None => Complex64::one(),
                    };
                    s.powi(chart.weights[i] as i32) * xi
                })
                .collect();
            Some((x, c))
        })
        .collect())
}

/// Every balance with `c_j ≠ 0` is the image of some Newton fixed point,
/// and every Newton fixed point maps to a listed balance.
pub fn fixed_point_bijection(
    chart: &BlowupChart,
    balances: &[Balance],
    opts: &FixedPointSearch,
) -> Result<bool> {
    let pts = newton_fixed_points(chart, opts)?;
    let close = |a: &[Complex64], b: &Balance| {
        let scale = max_norm(a).max(1.0);
        a.iter()
            .zip(b.complex())
            .all(|(x, y)| (x - y).norm() < 1e-6 * scale)
    };
    let relevant: Vec<&Balance> = balances
        .iter()
        .filter(|b| b.c[chart.index].to_complex().norm() > 1e-10)
        .collect();
    let onto = relevant.iter().all(|b| pts.iter().any(|(_, c)| close(c, b)));
    let into = pts.iter().all(|(_, c)| relevant.iter().any(|b| close(c, b)));
    Ok(onto && into)
}

/// Dimension data for every balance: the stable and unstable counts are the
/// signs of the exponents.
pub fn exponent_dims(report: &KovalevskayaReport) -> ManifoldDims {
    manifold_dims(&report.exponents, &Scalar::Exact(-Rational::one()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    /// `|G_j(X(t))|` for each invariant polynomial.
    pub invariants: Vec<Vec<f64>>,
    /// Largest change of any `|G_j|` along the run.
    pub drift: f64,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, chart: &BlowupChart, mut w: W) -> Result<()> {
        let mut head = String::from("t");
        for name in chart.vars.names() {
            write!(head, ",re_{name},im_{name}").expect("string write");
        }
        for j in 0..self.invariants.first().map_or(0, Vec::len) {
            write!(head, ",abs_h{}", j + 1).expect("string write");
        }
        writeln!(w, "{head}").map_err(|e| Error::Io(e.to_string()))?;
        for (k, t) in self.t.iter().enumerate() {
            let mut line = format!("{t}");
            for z in &self.states[k] {
                write!(line, ",{},{}", z.re, z.im).expect("string write");
            }
            for v in &self.invariants[k] {
                write!(line, ",{v}").expect("string write");
            }
            writeln!(w, "{line}").map_err(|e| Error::Io(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub step: f64,
    /// Complex direction of the time step.
    pub direction: Complex64,
    pub sample_every: usize,
    pub escape: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            t_end: 5.0,
            step: 1e-3,
            direction: Complex64::one(),
            sample_every: 100,
            escape: 1e6,
        }
    }
}

/// Fixed-step RK4 of the chart field, recording `|G_j|` for the supplied
/// invariant polynomials.
pub fn integrate_chart(
    chart: &BlowupChart,
    start: &[Complex64],
    invariants: &[MultiPoly],
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let n = chart.dim();
    if start.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "start point of length {} for a {n}-dimensional chart",
            start.len()
        )));
    }
    let all: Vec<usize> = (0..n).collect();
    let map = CompiledMap::new(&chart.field.components, &all);
    let inv: Vec<CompiledPoly> = invariants.iter().map(CompiledPoly::new).collect();
    let steps = (opts.t_end / opts.step).round() as usize;
    let h = opts.direction * opts.step;
    let sample = opts.sample_every.max(1);
    let measure = |x: &[Complex64]| inv.iter().map(|g| g.eval(x).norm()).collect::<Vec<f64>>();
    let mut x = start.to_vec();
    let first = measure(&x);
    let mut traj = Trajectory {
        t: vec![0.0],
        states: vec![x.clone()],
        invariants: vec![first.clone()],
        drift: 0.0,
    };
    let add = |x: &[Complex64], k: &[Complex64], s: Complex64| -> Vec<Complex64> {
        x.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };
    for step in 1..=steps {
        let k1 = map.eval(&x);
        let k2 = map.eval(&add(&x, &k1, h * 0.5));
        let k3 = map.eval(&add(&x, &k2, h * 0.5));
        let k4 = map.eval(&add(&x, &k3, h));
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = step as f64 * opts.step;
        let size = max_norm(&x);
        if !size.is_finite() || size > opts.escape {
            return Err(Error::Escape {
                radius: opts.escape,
                t,
            });
        }
        let now = measure(&x);
        for (a, b) in now.iter().zip(&first) {
            traj.drift = traj.drift.max((a - b).abs());
        }
        if step % sample == 0 || step == steps {
            traj.t.push(t);
            traj.states.push(x.clone());
            traj.invariants.push(now);
        }
    }
    Ok(traj)
}

/// Projects a point of the divisor onto `{G_j = 0}` by Gauss–Newton in the
/// `X` coordinates.
pub fn project_to_v0(
    chart: &BlowupChart,
    v0: &[MultiPoly],
    x0: &[Complex64],
) -> Result<Option<Vec<Complex64>>> {
    let (_, eqs) = chart.on_divisor(v0)?;
    let idx: Vec<usize> = (0..chart.dim() - 1).collect();
    let map = CompiledMap::new(&eqs, &idx);
    let hit = gauss_newton(&map, &x0[1..], &NewtonOptions::default());
    Ok(hit.map(|h| {
        let mut x = vec![Complex64::zero()];
        x.extend(h.x);
        x
    }))
}
