//! Formal Laurent series solutions around a balance, built order by order
//! through the resonance recursion `(K − jI) b_j = R_j`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{int, LinearSolution, MultiPoly, Rational, Vars};
use crate::error::{Error, Result};
use crate::exprio::print_expr;
use crate::kovalevskaya::{
    exponents, find_balances, kov_matrix, signature, signature_string, truncate_autonomous, Balance,
    BalanceOptions, KMatrix, INTEGER_TOL,
};
use crate::systems::{hamilton_equations, HamiltonianSystem, VectorField};

/// A field together with the ring variable playing the role of time, which
/// is expanded as `z0 + T` around the pole.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesProblem {
    pub field: VectorField,
    pub time: Option<usize>,
}

impl SeriesProblem {
    pub fn autonomous(field: VectorField) -> Self {
        SeriesProblem { field, time: None }
    }
}

/// Hamilton's equations of `H_which`, with `z_which` as time when present.
pub fn series_problem(sys: &HamiltonianSystem, which: usize) -> Result<SeriesProblem> {
    let field = hamilton_equations(sys, which)?;
    let time = (which < sys.z_weights().len()).then(|| sys.dim() + which);
    Ok(SeriesProblem { field, time })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum SeriesMode {
    /// `z0` and every extra ring variable stay symbolic.
    #[default]
    Symbolic,
    /// Listed symbols (`z0` or field variables) take fixed values.
    Fixed(BTreeMap<String, Rational>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeParameter {
    pub name: String,
    pub resonance: usize,
    /// Kernel vector of `K − jI` the parameter multiplies.
    pub direction: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub order: usize,
    /// Nonzero remainder of an eliminated row of `(K − jI) b_j = R_j`.
    pub residual: MultiPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub balance: Vec<Rational>,
    /// `x_i = Σ_j b_{i,j} T^{j − a_i}`.
    pub pole_orders: Vec<i64>,
    pub order: usize,
    pub state: Vec<String>,
    /// Coefficient ring: `z0`, remaining symbols, free parameters.
    pub ring: Vars,
    /// `coeffs[i][j] = b_{i,j}`.
    pub coeffs: Vec<Vec<MultiPoly>>,
    pub free_params: Vec<FreeParameter>,
    pub obstructed_at: Option<Obstruction>,
    pub warnings: Vec<String>,
    problem: Prepared,
}

#[derive(Clone, Debug, PartialEq)]
struct Prepared {
    field: VectorField,
    time: Option<usize>,
    z0: MultiPoly,
    symbols: Vec<(usize, MultiPoly)>,
}

/// `Σ_k c[k] T^{val + k}`.
#[derive(Clone, Debug)]
struct Laurent {
    val: i64,
    c: Vec<MultiPoly>,
}

impl Laurent {
    fn constant(p: MultiPoly) -> Self {
        Laurent { val: 0, c: vec![p] }
    }

    fn top(&self) -> i64 {
        self.val + self.c.len() as i64 - 1
    }

    fn truncated(&self, top: i64) -> Laurent {
        let keep = (top - self.val + 1).clamp(0, self.c.len() as i64) as usize;
        Laurent {
            val: self.val,
            c: self.c[..keep].to_vec(),
        }
    }

    fn mul(&self, other: &Laurent, top: i64, ring: &Vars) -> Laurent {
        let val = self.val + other.val;
        let hi = top.min(self.top() + other.top());
        if hi < val {
            return Laurent { val, c: Vec::new() };
        }
        let mut c = vec![MultiPoly::zero(ring); (hi - val + 1) as usize];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                let k = i + j;
                if k >= c.len() {
                    break;
                }
                if !b.is_zero() {
                    c[k] = &c[k] + &(a * b);
                }
            }
        }
        Laurent { val, c }
    }

    fn coeff(&self, e: i64, ring: &Vars) -> MultiPoly {
        let k = e - self.val;
        if k < 0 || k as usize >= self.c.len() {
            MultiPoly::zero(ring)
        } else {
            self.c[k as usize].clone()
        }
    }
}

/// Accumulates `Σ coeff · Π factors` into a dense buffer of exponents
/// `lo..=top`.
fn eval_poly(f: &MultiPoly, series: &[Laurent], lo: i64, top: i64, ring: &Vars) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(ring); (top - lo + 1).max(0) as usize];
    for (mono, coef) in f.terms() {
        let factors: Vec<&Laurent> = mono
            .0
            .iter()
            .enumerate()
            .flat_map(|(v, &e)| std::iter::repeat_n(&series[v], e as usize))
            .collect();
        let total: i64 = factors.iter().map(|s| s.val).sum();
        if total > top {
            continue;
        }
        let mut acc = Laurent::constant(MultiPoly::constant(ring, coef.clone()));
        let mut used = 0;
        for s in &factors {
            used += s.val;
            let budget = top - (total - used);
            acc = acc.mul(&s.truncated(budget - acc.val), budget, ring);
        }
        for e in lo.max(acc.val)..=top.min(acc.top()) {
            let k = (e - lo) as usize;
            out[k] = &out[k] + &acc.coeff(e, ring);
        }
    }
    out
}

fn prepare(problem: &SeriesProblem, mode: &SeriesMode, n_free: usize) -> Result<(Prepared, Vars)> {
    let field = &problem.field;
    let fixed = match mode {
        SeriesMode::Symbolic => BTreeMap::new(),
        SeriesMode::Fixed(m) => m.clone(),
    };
    for name in fixed.keys() {
        let known = name == "z0" || field.vars.index_of(name).is_some_and(|i| i >= field.dim);
        if !known {
            return Err(Error::UnknownVariable(name.clone()));
        }
    }
    let mut names: Vec<String> = Vec::new();
    if problem.time.is_some() && !fixed.contains_key("z0") {
        names.push("z0".into());
    }
    let extras: Vec<usize> = (field.dim..field.vars.len())
        .filter(|&v| Some(v) != problem.time)
        .collect();
    for &v in &extras {
        if !fixed.contains_key(field.vars.name(v)) {
            names.push(field.vars.name(v).to_string());
        }
    }
    names.extend((1..=n_free).map(|r| format!("s{r}")));
    let ring = Vars::new(&names);
    let sym = |name: &str| -> MultiPoly {
        match fixed.get(name) {
            Some(v) => MultiPoly::constant(&ring, v.clone()),
            None => MultiPoly::var(&ring, ring.index_of(name).expect("ring built from names")),
        }
    };
    let z0 = if problem.time.is_some() {
        sym("z0")
    } else {
        MultiPoly::zero(&ring)
    };
    let symbols = extras.iter().map(|&v| (v, sym(field.vars.name(v)))).collect();
    Ok((
        Prepared {
            field: field.clone(),
            time: problem.time,
            z0,
            symbols,
        },
        ring,
    ))
}

fn ring_series(p: &Prepared, x: &[Laurent], ring: &Vars) -> Vec<Laurent> {
    let n = p.field.vars.len();
    let mut all: Vec<Laurent> = Vec::with_capacity(n);
    all.extend(x.iter().cloned());
    for v in p.field.dim..n {
        if Some(v) == p.time {
            all.push(Laurent {
                val: 0,
                c: vec![p.z0.clone(), MultiPoly::one(ring)],
            });
        } else {
            let s = p
                .symbols
                .iter()
                .find(|(i, _)| *i == v)
                .expect("symbol table covers extras");
            all.push(Laurent::constant(s.1.clone()));
        }
    }
    all
}

fn check_dominated(field: &VectorField) -> Result<()> {
    let w = field.state_weights();
    for (i, f) in field.components.iter().enumerate() {
        for (m, _) in f.terms() {
            let d: i64 = m.0[..field.dim].iter().zip(w).map(|(&e, &a)| e as i64 * a).sum();
            if d > 1 + w[i] {
                return Err(Error::InvalidSystem(format!(
                    "component {} has a term of weighted degree {d} above {}",
                    field.vars.name(i),
                    1 + w[i]
                )));
            }
            if d == 1 + w[i] && m.0[field.dim..].iter().any(|&e| e > 0) {
                return Err(Error::InvalidSystem(format!(
                    "leading part of component {} depends on symbols",
                    field.vars.name(i)
                )));
            }
        }
    }
    Ok(())
}

/// Builds the series `x_i = Σ_{j≤N} b_{i,j} T^{j−a_i}` around an exact
/// balance. At a resonance the kernel of `K − jI` is spanned by fresh
/// parameters; an inconsistent system stops the recursion.
pub fn build_series(
    problem: &SeriesProblem,
    c: &Balance,
    order: usize,
    mode: &SeriesMode,
) -> Result<LaurentSeries> {
    if order == 0 {
        return Err(Error::DimensionMismatch("series order must be at least 1".into()));
    }
    let Some(cx) = c.exact_values() else {
        return Err(Error::NotExact("the series needs an exact balance".into()));
    };
    let field = &problem.field;
    check_dominated(field)?;
    let dim = field.dim;
    let a: Vec<i64> = field.state_weights().to_vec();
    let auto = truncate_autonomous(field)?;
    let KMatrix::Exact(k) = kov_matrix(&auto, c)? else {
        unreachable!("exact balance gives an exact matrix")
    };
    let (prep, ring) = prepare(problem, mode, dim)?;

    let mut warnings = Vec::new();
    let report = exponents(&auto, c)?;
    let largest = signature(&report.exponents)
        .iter()
        .filter_map(|e| e.as_integer(INTEGER_TOL))
        .max()
        .unwrap_or(0);
    if (order as i64) < largest {
        warnings.push(format!(
            "order {order} is below the largest integer exponent {largest}; resonances beyond it are not checked"
        ));
    }

    let mut x: Vec<Laurent> = (0..dim)
        .map(|i| Laurent {
            val: -a[i],
            c: vec![MultiPoly::constant(&ring, cx[i].clone())],
        })
        .collect();
    let mut free_params = Vec::new();
    let mut obstructed_at = None;
    let mut next_param = 0usize;

    'orders: for j in 1..=order {
        for s in x.iter_mut() {
            s.c.push(MultiPoly::zero(&ring));
        }
        let all = ring_series(&prep, &x, &ring);
        let rhs: Vec<MultiPoly> = (0..dim)
            .map(|i| {
                let e = j as i64 - a[i] - 1;
                -&eval_poly(&field.components[i], &all, e, e, &ring)[0]
            })
            .collect();
        let shifted = k.shift(&int(j as i64))?;
        let bj = match shifted.solve(&rhs)? {
            LinearSolution::Unique(b) => b,
            LinearSolution::Parametric { particular, kernel } => {
                let mut b = particular;
                for v in kernel {
                    let name = ring.name(ring.len() - dim + next_param).to_string();
                    let s = MultiPoly::var(&ring, ring.len() - dim + next_param);
                    next_param += 1;
                    for (bi, vi) in b.iter_mut().zip(&v) {
                        *bi = &*bi + &s.scale(vi);
                    }
                    free_params.push(FreeParameter {
                        name,
                        resonance: j,
                        direction: v.iter().map(|q| q.to_string()).collect(),
                    });
                }
                b
            }
            LinearSolution::Inconsistent { residual } => {
                for s in x.iter_mut() {
                    s.c.pop();
                }
                obstructed_at = Some(Obstruction { order: j, residual });
                break 'orders;
            }
        };
        for (s, b) in x.iter_mut().zip(bj) {
            *s.c.last_mut().expect("pushed above") = b;
        }
    }

    // drop unused parameter slots from the ring
    let used = ring.len() - dim + next_param;
    let small = Vars::new(&ring.names()[..used]);
    let map: Vec<Option<usize>> = (0..ring.len()).map(|i| (i < used).then_some(i)).collect();
    let shrink = |p: &MultiPoly| p.rebase(&small, &map);
    let coeffs = x
        .iter()
        .map(|s| s.c.iter().map(shrink).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let prepared = Prepared {
        field: prep.field.clone(),
        time: prep.time,
        z0: shrink(&prep.z0)?,
        symbols: prep
            .symbols
            .iter()
            .map(|(v, p)| Ok((*v, shrink(p)?)))
            .collect::<Result<Vec<_>>>()?,
    };
    let obstructed_at = obstructed_at
        .map(|o| {
            Ok::<_, Error>(Obstruction {
                order: o.order,
                residual: shrink(&o.residual)?,
            })
        })
        .transpose()?;
    Ok(LaurentSeries {
        balance: cx,
        pole_orders: a,
        order,
        state: field.vars.names()[..dim].to_vec(),
        ring: small,
        coeffs,
        free_params,
        obstructed_at,
        warnings,
        problem: prepared,
    })
}

impl LaurentSeries {
    /// `b_{i,j}`.
    pub fn coeff(&self, i: usize, j: usize) -> &MultiPoly {
        &self.coeffs[i][j]
    }

    /// Coefficient of `T^e` in component `i`.
    pub fn coeff_at_power(&self, i: usize, e: i64) -> MultiPoly {
        let j = e + self.pole_orders[i];
        if j < 0 || j as usize >= self.coeffs[i].len() {
            MultiPoly::zero(&self.ring)
        } else {
            self.coeffs[i][j as usize].clone()
        }
    }

    pub fn resonances(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.free_params.iter().map(|p| p.resonance).collect();
        r.dedup();
        r
    }

    /// Substitutes symbols by values and drops them from the ring; unknown
    /// names are an error.
    pub fn specialize(&self, values: &BTreeMap<String, Rational>) -> Result<LaurentSeries> {
        let mut out = self.clone();
        let apply = |p: &mut MultiPoly, idx: usize, v: &Rational| *p = p.specialize(idx, v);
        for (name, v) in values {
            let idx = self
                .ring
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            for p in out.coeffs.iter_mut().flatten() {
                apply(p, idx, v);
            }
            apply(&mut out.problem.z0, idx, v);
            for (_, p) in out.problem.symbols.iter_mut() {
                apply(p, idx, v);
            }
            if let Some(o) = out.obstructed_at.as_mut() {
                apply(&mut o.residual, idx, v);
            }
        }
        let keep: Vec<String> = self
            .ring
            .names()
            .iter()
            .filter(|n| !values.contains_key(*n))
            .cloned()
            .collect();
        let small = Vars::new(&keep);
        let map: Vec<Option<usize>> = self.ring.names().iter().map(|n| small.index_of(n)).collect();
        let shrink = |p: &mut MultiPoly| -> Result<()> {
            *p = p.rebase(&small, &map)?;
            Ok(())
        };
        for p in out.coeffs.iter_mut().flatten() {
            shrink(p)?;
        }
        shrink(&mut out.problem.z0)?;
        for (_, p) in out.problem.symbols.iter_mut() {
            shrink(p)?;
        }
        if let Some(o) = out.obstructed_at.as_mut() {
            shrink(&mut o.residual)?;
        }
        out.ring = small;
        Ok(out)
    }

    /// Flat `(component, exponent, coefficient)` rows.
    pub fn entries(&self) -> Vec<SeriesEntry> {
        let mut out = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                out.push(SeriesEntry {
                    component: self.state[i].clone(),
                    exponent: j as i64 - self.pole_orders[i],
                    coefficient: print_expr(p),
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub component: String,
    pub exponent: i64,
    pub coefficient: String,
}

/// Lowest power of `T` in `dx_i/dT − f_i(x)` for the truncated series;
/// `None` when that residual vanishes identically.
pub fn residual_order(series: &LaurentSeries) -> Result<Vec<Option<i64>>> {
    if let Some(o) = &series.obstructed_at {
        return Err(Error::Obstructed(o.order));
    }
    let ring = &series.ring;
    let p = &series.problem;
    let x: Vec<Laurent> = series
        .coeffs
        .iter()
        .zip(&series.pole_orders)
        .map(|(c, &a)| Laurent {
            val: -a,
            c: c.clone(),
        })
        .collect();
    let all = ring_series(p, &x, ring);
    let mut out = Vec::with_capacity(x.len());
    for (i, xi) in x.iter().enumerate() {
        let f = &p.field.components[i];
        let deg: i64 = f
            .terms()
            .map(|(m, _)| m.0.iter().sum::<u32>() as i64)
            .max()
            .unwrap_or(0);
        let span = all.iter().map(|s| s.top().max(0)).max().unwrap_or(0) * deg.max(1) + 1;
        let lo = all.iter().map(|s| s.val.min(0)).sum::<i64>() * deg.max(1) - 1;
        let hi = span.max(xi.top());
        let first_free = (series.order as i64 - series.pole_orders[i]).clamp(lo, hi);
        let lowest_in = |top: i64| {
            let rhs = eval_poly(f, &all, lo, top, ring);
            (lo..=top).find(|&e| {
                let d = xi.coeff(e + 1, ring).scale(&int(e + 1));
                !(&d - &rhs[(e - lo) as usize]).is_zero()
            })
        };
        out.push(lowest_in(first_free).or_else(|| lowest_in(hi)));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceVerdict {
    pub balance: Balance,
    pub signature: String,
    pub principal: bool,
    pub series_checked: bool,
    pub obstructed_at: Option<usize>,
    pub free_params: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PainleveReport {
    pub verdict: Verdict,
    pub balances: Vec<BalanceVerdict>,
    pub warnings: Vec<String>,
}

/// Classical Painlevé test on the flow of `H_1`.
pub fn painleve_test(sys: &HamiltonianSystem, opts: &BalanceOptions) -> Result<PainleveReport> {
    painleve_test_problem(&series_problem(sys, 0)?, opts)
}

pub fn painleve_test_problem(problem: &SeriesProblem, opts: &BalanceOptions) -> Result<PainleveReport> {
    let auto = truncate_autonomous(&problem.field)?;
    let search = find_balances(&auto, opts)?;
    let mut warnings = search.warnings.clone();
    let dim = auto.dim;
    let mut rows = Vec::new();
    for b in &search.balances {
        let rep = exponents(&auto, b)?;
        let sig = rep.signature();
        let mut row = BalanceVerdict {
            balance: b.clone(),
            signature: signature_string(&sig),
            principal: rep.principal,
            series_checked: false,
            obstructed_at: None,
            free_params: 0,
        };
        if rep.principal {
            if b.is_exact() {
                let top = sig
                    .iter()
                    .filter_map(|e| e.as_integer(INTEGER_TOL))
                    .max()
                    .unwrap_or(1);
                let s = build_series(problem, b, top.max(1) as usize, &SeriesMode::Symbolic)?;
                row.series_checked = true;
                row.obstructed_at = s.obstructed_at.as_ref().map(|o| o.order);
                row.free_params = s.free_params.len();
            } else {
                warnings.push(format!(
                    "principal balance {b} is not exact; its series was not built"
                ));
            }
        }
        rows.push(row);
    }
    let passes = |r: &BalanceVerdict| {
        r.principal && r.series_checked && r.obstructed_at.is_none() && r.free_params + 1 == dim
    };
    let verdict = if rows.iter().any(passes) {
        Verdict::Pass
    } else if rows.iter().any(|r| r.principal && r.obstructed_at.is_some()) {
        Verdict::Obstructed
    } else {
        Verdict::Fail
    };
    Ok(PainleveReport {
        verdict,
        balances: rows,
        warnings,
    })
}

/// Checks that `b_{i,0}` reproduces the balance; used by callers that
/// persist series.
pub fn leading_matches(series: &LaurentSeries) -> bool {
    series
        .coeffs
        .iter()
        .zip(&series.balance)
        .all(|(row, c)| row[0].as_constant().is_some_and(|v| &v == c) || (row[0].is_zero() && c.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::exprio::{catalog, parse_expr};

    fn sys(id: &str) -> HamiltonianSystem {
        HamiltonianSystem::from_def(&catalog(id).unwrap()).unwrap()
    }

    fn ex(v: &[i64]) -> Balance {
        Balance::exact(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn p1_series() {
        let p = series_problem(&sys("P1"), 0).unwrap();
        let s = build_series(&p, &ex(&[1, -2]), 7, &SeriesMode::Symbolic).unwrap();
        let r = &s.ring;
        let z0 = |c: Rational| MultiPoly::var(r, 0).scale(&c);
        // component 0 is q (y), component 1 is p (x)
        assert_eq!(s.coeff_at_power(1, -3), MultiPoly::constant(r, int(-2)));
        assert!(s.coeff_at_power(1, -2).is_zero());
        assert_eq!(s.coeff_at_power(1, 1), z0(rat(-1, 5)));
        assert_eq!(s.coeff_at_power(1, 2), MultiPoly::constant(r, rat(-1, 2)));
        assert_eq!(s.coeff_at_power(0, -2), MultiPoly::constant(r, int(1)));
        assert_eq!(s.coeff_at_power(0, 2), z0(rat(-1, 10)));
        assert_eq!(s.coeff_at_power(0, 3), MultiPoly::constant(r, rat(-1, 6)));
        assert_eq!(s.resonances(), vec![6]);
        assert_eq!(s.coeff_at_power(1, 3), parse_expr("s1", r).unwrap());
        assert!(s.obstructed_at.is_none());
        assert!(leading_matches(&s));
    }

    #[test]
    fn fixed_z0_kills_z0_terms() {
        let p = series_problem(&sys("P1"), 0).unwrap();
        let values = BTreeMap::from([("z0".to_string(), Rational::zero())]);
        let s = build_series(&p, &ex(&[1, -2]), 7, &SeriesMode::Fixed(values.clone())).unwrap();
        assert!(s.coeff_at_power(1, 1).is_zero());
        assert_eq!(s.coeff_at_power(1, 2), MultiPoly::constant(&s.ring, rat(-1, 2)));
        let sym = build_series(&p, &ex(&[1, -2]), 7, &SeriesMode::Symbolic).unwrap();
        assert_eq!(sym.specialize(&values).unwrap().coeffs, s.coeffs);
    }

    #[test]
    fn p1_residual_order() {
        let p = series_problem(&sys("P1"), 0).unwrap();
        let s = build_series(&p, &ex(&[1, -2]), 7, &SeriesMode::Symbolic).unwrap();
        // q' = p holds identically for the truncation
        let r = residual_order(&s).unwrap();
        assert_eq!(r[0], None);
        assert!(r[1].unwrap() >= 4, "{r:?}");
        let s1 = build_series(&p, &ex(&[1, -2]), 1, &SeriesMode::Symbolic).unwrap();
        assert!(!s1.warnings.is_empty());
        let r = residual_order(&s1).unwrap();
        assert!(
            r.iter().zip([-1, -2]).all(|(o, b)| o.is_none_or(|e| e >= b)),
            "{r:?}"
        );
    }

    #[test]
    fn painleve_p1() {
        let rep = painleve_test(&sys("P1"), &BalanceOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.balances.len(), 1);
        assert_eq!(rep.balances[0].free_params, 1);
    }

    #[test]
    fn quadratic_forcing_is_obstructed() {
        let vars = Vars::new(&["q", "p", "z"]);
        let field = |rhs: &str| {
            VectorField::new(
                vars.clone(),
                vec![parse_expr("p", &vars).unwrap(), parse_expr(rhs, &vars).unwrap()],
                vec![2, 3, 1],
            )
            .unwrap()
        };
        let problem = |rhs: &str| SeriesProblem {
            field: field(rhs),
            time: Some(2),
        };
        let s = build_series(&problem("6*q^2 + z^2"), &ex(&[1, -2]), 7, &SeriesMode::Symbolic).unwrap();
        let o = s.obstructed_at.as_ref().expect("log term at the resonance");
        assert_eq!(o.order, 6);
        assert!(!o.residual.is_zero());
        assert!(matches!(residual_order(&s), Err(Error::Obstructed(6))));
        let ok = build_series(&problem("6*q^2 + z"), &ex(&[1, -2]), 7, &SeriesMode::Symbolic).unwrap();
        assert!(ok.obstructed_at.is_none());
        let rep = painleve_test_problem(&problem("6*q^2 + z^2"), &BalanceOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
    }

    #[test]
    fn scalar_quadratic() {
        let vars = Vars::new(&["x"]);
        let f = VectorField::new(vars.clone(), vec![parse_expr("x^2", &vars).unwrap()], vec![1]).unwrap();
        let rep = painleve_test_problem(&SeriesProblem::autonomous(f), &BalanceOptions::default()).unwrap();
        assert_eq!(rep.balances.len(), 1);
        assert_eq!(rep.balances[0].signature, "(-1)");
        assert_eq!(rep.verdict, Verdict::Pass);
    }
}
