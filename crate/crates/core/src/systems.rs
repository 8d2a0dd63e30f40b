//! Hamiltonian systems over the catalog/file definitions: vector fields,
//! principal parts, Poisson brackets and the structural assumption checks.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{int, CompiledMap, MultiPoly, Vars};
use crate::error::{Error, Result};
use crate::exprio::{Role, SystemDef};
use crate::newton::{gauss_newton, max_norm, NewtonOptions, SeedBattery, DEFAULT_SEED};
use crate::weights::{check_weight, WeightTuple};

/// How parameters enter weighted-degree bookkeeping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamDegrees {
    /// Parameters are constants of degree 0.
    #[default]
    Zero,
    /// Parameters carry the weights declared in the system definition.
    Declared,
}

/// A polynomial vector field `dx_i/dz = f_i`. The first `dim` ring variables
/// are the state; the remaining ones (independent variables, parameters) are
/// symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub vars: Vars,
    pub dim: usize,
    pub components: Vec<MultiPoly>,
    /// Weights of every ring variable.
    pub weights: Vec<i64>,
}

impl VectorField {
    pub fn new(vars: Vars, components: Vec<MultiPoly>, weights: Vec<i64>) -> Result<Self> {
        let dim = components.len();
        if dim > vars.len() || weights.len() != vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components, {} variables, {} weights",
                dim,
                vars.len(),
                weights.len()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.vars() != &vars) {
            return Err(Error::VarTableMismatch {
                left: c.vars().names().to_vec(),
                right: vars.names().to_vec(),
            });
        }
        Ok(VectorField {
            vars,
            dim,
            components,
            weights,
        })
    }

    pub fn state_weights(&self) -> &[i64] {
        &self.weights[..self.dim]
    }

    pub fn is_autonomous(&self) -> bool {
        self.vars.len() == self.dim
    }

    pub fn has_positive_weights(&self) -> bool {
        self.state_weights().iter().all(|&w| w > 0)
    }
}

/// A system definition resolved into polynomials over its canonical ring
/// `(q_1..q_m, p_1..p_m, z.., params..)`.
#[derive(Clone, Debug)]
pub struct HamiltonianSystem {
    pub def: SystemDef,
    vars: Vars,
    m: usize,
    n_z: usize,
    declared: Vec<i64>,
    roles: Vec<Role>,
    hams: Vec<MultiPoly>,
    degrees: Vec<i64>,
}

impl HamiltonianSystem {
    pub fn from_def(def: &SystemDef) -> Result<Self> {
        def.validate()?;
        let ordered = def.ordered_vars();
        let vars = def.vars();
        let m = ordered.iter().filter(|v| v.role == Role::Q).count();
        let n_z = ordered.iter().filter(|v| v.role == Role::Z).count();
        let declared = ordered.iter().map(|v| v.weight).collect();
        let roles = ordered.iter().map(|v| v.role).collect();
        let hams = def.hamiltonian_polys(&vars)?;
        let degrees = def.hamiltonians.iter().map(|h| h.degree).collect();
        Ok(HamiltonianSystem {
            def: def.clone(),
            vars,
            m,
            n_z,
            declared,
            roles,
            hams,
            degrees,
        })
    }

    pub fn id(&self) -> &str {
        &self.def.id
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Number of `(q, p)` pairs.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Phase-space dimension `2m`.
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn k(&self) -> usize {
        self.hams.len()
    }

    pub fn hamiltonians(&self) -> &[MultiPoly] {
        &self.hams
    }

    pub fn hamiltonian(&self, which: usize) -> Result<&MultiPoly> {
        self.hams.get(which).ok_or(Error::IndexOutOfRange {
            index: which,
            len: self.hams.len(),
        })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn is_autonomous(&self) -> bool {
        self.n_z == 0
    }

    pub fn has_params(&self) -> bool {
        self.roles.contains(&Role::Param)
    }

    /// Weights of `(q_1..q_m, p_1..p_m)`.
    pub fn qp_weights(&self) -> &[i64] {
        &self.declared[..2 * self.m]
    }

    pub fn q_weights(&self) -> &[i64] {
        &self.declared[..self.m]
    }

    pub fn p_weights(&self) -> &[i64] {
        &self.declared[self.m..2 * self.m]
    }

    /// Weights of the independent variables `z_1, z_2, ..`.
    pub fn z_weights(&self) -> &[i64] {
        &self.declared[2 * self.m..2 * self.m + self.n_z]
    }

    /// Weights of all ring variables under the given parameter convention.
    pub fn weights(&self, conv: ParamDegrees) -> Vec<i64> {
        self.declared
            .iter()
            .zip(&self.roles)
            .map(|(&w, r)| match (r, conv) {
                (Role::Param, ParamDegrees::Zero) => 0,
                _ => w,
            })
            .collect()
    }

    pub fn has_positive_weights(&self) -> bool {
        self.qp_weights().iter().all(|&w| w > 0)
    }

    /// Index of the ring variable `q_i` (`i` counted from 0).
    pub fn q_index(&self, i: usize) -> usize {
        i
    }

    pub fn p_index(&self, i: usize) -> usize {
        self.m + i
    }

    /// The weight tuple of `(q, p; h_1)` when all weights lie in `1..h_1`.
    pub fn weight_tuple(&self) -> Option<WeightTuple> {
        WeightTuple::new(self.q_weights(), self.p_weights(), self.degrees[0]).ok()
    }
}

/// `(∂H/∂p_1.., -∂H/∂q_1..)` for Hamiltonian `which`; independent variables
/// and parameters stay as ring symbols.
pub fn hamilton_equations(sys: &HamiltonianSystem, which: usize) -> Result<VectorField> {
    let h = sys.hamiltonian(which)?;
    let field = hamiltonian_field(sys, h);
    VectorField::new(sys.vars.clone(), field, sys.weights(ParamDegrees::Zero))
}

fn hamiltonian_field(sys: &HamiltonianSystem, h: &MultiPoly) -> Vec<MultiPoly> {
    let m = sys.m;
    let mut out: Vec<MultiPoly> = (0..m).map(|i| h.diff(sys.p_index(i))).collect();
    out.extend((0..m).map(|i| -&h.diff(sys.q_index(i))));
    out
}

/// `(H^P, H^N)`: monomials of weighted degree exactly `h_which`, and the rest.
pub fn split_principal(sys: &HamiltonianSystem, which: usize) -> Result<(MultiPoly, MultiPoly)> {
    split_principal_with(sys, which, ParamDegrees::Zero)
}

pub fn split_principal_with(
    sys: &HamiltonianSystem,
    which: usize,
    conv: ParamDegrees,
) -> Result<(MultiPoly, MultiPoly)> {
    let h = sys.hamiltonian(which)?;
    let deg = sys.degrees[which];
    let w = sys.weights(conv);
    if let Some((mono, c)) = h.terms().find(|(mono, _)| mono.weighted_degree(&w) > deg) {
        let single = MultiPoly::monomial(&sys.vars, mono.0.clone(), c.clone());
        return Err(Error::AboveDeclaredDegree {
            monomial: single.to_string(),
            degree: mono.weighted_degree(&w),
            declared: deg,
        });
    }
    let principal = h.weighted_part(&w, deg);
    let rest = h - &principal;
    Ok((principal, rest))
}

/// `Σ_i ∂F/∂q_i ∂G/∂p_i − ∂F/∂p_i ∂G/∂q_i`.
pub fn poisson_bracket(f: &MultiPoly, g: &MultiPoly, sys: &HamiltonianSystem) -> MultiPoly {
    let mut acc = MultiPoly::zero(f.vars());
    for i in 0..sys.m {
        let (q, p) = (sys.q_index(i), sys.p_index(i));
        acc = &acc + &(&(&f.diff(q) * &g.diff(p)) - &(&f.diff(p) * &g.diff(q)));
    }
    acc
}

/// `Σ_v w_v · v · ∂H/∂v − h·H` over every ring variable (parameters at
/// degree 0). Zero iff `H` is quasihomogeneous of degree `h`.
pub fn euler_identity_check(sys: &HamiltonianSystem, which: usize) -> Result<MultiPoly> {
    let h = sys.hamiltonian(which)?;
    Ok(euler_residual(
        h,
        &sys.weights(ParamDegrees::Zero),
        sys.degrees[which],
    ))
}

pub fn euler_residual(h: &MultiPoly, weights: &[i64], degree: i64) -> MultiPoly {
    let vars = h.vars();
    let mut acc = h.scale(&int(-degree));
    for (i, &w) in weights.iter().enumerate() {
        if w == 0 || !h.involves(i) {
            continue;
        }
        let term = &MultiPoly::var(vars, i) * &h.diff(i);
        acc = &acc + &term.scale(&int(w));
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Violating monomial, nonzero bracket, fixed point, or an explanation.
    pub detail: Option<String>,
}

impl Check {
    fn pass(name: &str) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            detail: None,
        }
    }

    fn with(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status,
            detail: Some(detail.into()),
        }
    }

    fn from_witness(name: &str, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::with(name, Status::Fail, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub system: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passes(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.status == Status::Pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let s = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::NotApplicable => "n/a",
            };
            write!(f, "{:<4} {s}", c.name)?;
            if let Some(d) = &c.detail {
                write!(f, "  {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidateOptions {
    pub seeds: usize,
    pub radius: f64,
    pub tol: f64,
    pub seed: u64,
    pub params: ParamDegrees,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seeds: 200,
            radius: 3.0,
            tol: 1e-10,
            seed: DEFAULT_SEED,
            params: ParamDegrees::Zero,
        }
    }
}

fn mono_string(vars: &Vars, exps: &[u32]) -> String {
    MultiPoly::monomial(vars, exps.to_vec(), One::one()).to_string()
}

/// First monomial of `p` whose weighted degree fails `ok`.
fn violating(p: &MultiPoly, w: &[i64], ok: impl Fn(i64) -> bool) -> Option<String> {
    p.terms()
        .find(|(mono, _)| !ok(mono.weighted_degree(w)))
        .map(|(mono, _)| {
            format!(
                "{} (degree {})",
                mono_string(p.vars(), &mono.0),
                mono.weighted_degree(w)
            )
        })
}

pub fn validate(sys: &HamiltonianSystem) -> ValidationReport {
    validate_with(sys, &ValidateOptions::default())
}

pub fn validate_with(sys: &HamiltonianSystem, opts: &ValidateOptions) -> ValidationReport {
    let mut checks = Vec::new();
    let w = sys.weights(opts.params);
    let h = sys.degrees[0];
    let h1 = &sys.hams[0];
    let dim = sys.dim();
    let positive = sys.has_positive_weights();
    let nonpositive_note = "not applicable: nonpositive weight";

    // (W1)-(W3) on (q, p; h_1)
    let qp = sys.qp_weights();
    let min = qp.iter().copied().min().unwrap_or(0);
    checks.push(if positive {
        Check::from_witness(
            "W1",
            (!(min == 1 || min == 2)).then(|| format!("minimum weight {min}")),
        )
    } else {
        Check::with("W1", Status::NotApplicable, nonpositive_note)
    });
    let w2 = (0..sys.m)
        .find(|&i| qp[i] + qp[sys.m + i] != h - 1)
        .map(|i| format!("pair {}: {} + {} != {}", i + 1, qp[i], qp[sys.m + i], h - 1));
    let w2_ok = w2.is_none();
    checks.push(Check::from_witness("W2", w2));
    checks.push(match sys.weight_tuple() {
        Some(t) if positive => {
            let cert = check_weight(&t);
            match cert.remainder {
                None => Check::pass("W3"),
                Some(r) => Check::with("W3", Status::Fail, format!("remainder {}", r.display_in("T"))),
            }
        }
        _ => Check::with("W3", Status::NotApplicable, nonpositive_note),
    });

    // (A1): semi-quasihomogeneous with nonzero principal part
    let split = split_principal_with(sys, 0, opts.params);
    let a1 = match &split {
        Err(e) => Some(e.to_string()),
        Ok((hp, _)) if hp.is_zero() => Some("principal part is zero".to_string()),
        Ok(_) => None,
    };
    let a1_ok = a1.is_none();
    checks.push(Check::from_witness("A1", a1));

    let zero = MultiPoly::zero(&sys.vars);
    let (hp, hn) = split.unwrap_or((zero.clone(), zero));
    let field_p = hamiltonian_field(sys, &hp);
    let field_full = hamiltonian_field(sys, h1);

    // (A2)/(K1): the principal field component of state variable i has degree 1 + w_i
    let comp_deg_k1 = |i: usize| 1 + w[i];
    let a2 = field_p.iter().enumerate().find_map(|(i, f)| {
        violating(f, &w, |d| d == comp_deg_k1(i)).map(|v| format!("component {}: {v}", sys.vars.name(i)))
    });
    checks.push(Check::from_witness("A2", a2.clone()));

    // (A3): non-principal degrees below h
    let a3 = violating(&hn, &w, |d| d < h);
    checks.push(Check::from_witness("A3", a3));

    // (A4)/(K3): every field monomial ≡ component degree mod s = h - 1
    let s = h - 1;
    let a4 = if s <= 0 {
        Some(format!("s = {s}"))
    } else {
        field_full.iter().enumerate().find_map(|(i, f)| {
            violating(f, &w, |d| (d - comp_deg_k1(i)).rem_euclid(s) == 0)
                .map(|v| format!("component {}: {v}", sys.vars.name(i)))
        })
    };
    checks.push(Check::from_witness("A4", a4.clone()));

    // (A5) reduces to (A1) and (W2)
    checks.push(Check::with(
        "A5",
        if a1_ok && w2_ok {
            Status::Pass
        } else {
            Status::Fail
        },
        "checked as (A1) together with (W2)",
    ));

    // (K1)-(K3) for the field of H_1
    checks.push(if positive {
        Check::from_witness("K1", a2)
    } else {
        Check::with("K1", Status::NotApplicable, nonpositive_note)
    });
    let k2 = field_full
        .iter()
        .zip(&field_p)
        .enumerate()
        .find_map(|(i, (f, fp))| {
            let g = f - fp;
            violating(&g, &w, |d| d < comp_deg_k1(i)).map(|v| format!("component {}: {v}", sys.vars.name(i)))
        });
    checks.push(Check::from_witness("K2", k2));
    checks.push(Check::from_witness("K3", a4));

    // (H0): pairwise commuting
    let mut h0 = None;
    'outer: for i in 0..sys.k() {
        for j in (i + 1)..sys.k() {
            let b = poisson_bracket(&sys.hams[i], &sys.hams[j], sys);
            if !b.is_zero() {
                h0 = Some(format!(
                    "{{{}, {}}} = {}",
                    sys.def.hamiltonians[i].name, sys.def.hamiltonians[j].name, b
                ));
                break 'outer;
            }
        }
    }
    checks.push(Check::from_witness("H0", h0));

    // (H1): each H_i quasihomogeneous of its declared degree
    checks.push(if positive {
        let h1w = sys
            .hams
            .iter()
            .zip(&sys.degrees)
            .enumerate()
            .find_map(|(i, (p, &d))| {
                violating(p, &w, |x| x == d).map(|v| format!("{}: {v}", sys.def.hamiltonians[i].name))
            });
        Check::from_witness("H1", h1w)
    } else {
        Check::with("H1", Status::NotApplicable, nonpositive_note)
    });

    // (H2)
    let h2 = if !w2_ok {
        Some(format!("h_1 = {h} is not a_j + b_j + 1 for every pair"))
    } else {
        sys.degrees
            .iter()
            .enumerate()
            .find(|(_, &d)| d < h)
            .map(|(i, d)| format!("h_{} = {d} < h_1 = {h}", i + 1))
    };
    checks.push(Check::from_witness("H2", h2));

    // (S): nonzero fixed points of the truncated field
    checks.push(if positive {
        let truncated: Vec<MultiPoly> = field_p
            .iter()
            .map(|f| {
                let mut g = f.clone();
                for v in dim..sys.vars.len() {
                    g = g.specialize(v, &Zero::zero());
                }
                g
            })
            .collect();
        match nonzero_fixed_point(&truncated, dim, opts) {
            Some(pt) => Check::with("S", Status::Fail, format!("nonzero fixed point {pt}")),
            None => Check::with(
                "S",
                Status::Pass,
                format!("no counterexample found ({} seeds)", opts.seeds),
            ),
        }
    } else {
        Check::with("S", Status::NotApplicable, nonpositive_note)
    });

    ValidationReport {
        system: sys.def.id.clone(),
        checks,
    }
}

/// Searches for a nonzero common zero of a quasihomogeneous field. The zero
/// set is a weighted cone, so each chart `x_k = 1` is searched in turn.
fn nonzero_fixed_point(field: &[MultiPoly], dim: usize, opts: &ValidateOptions) -> Option<String> {
    let vars = field.first()?.vars().clone();
    let mut battery = SeedBattery::new(opts.seed, opts.radius);
    let newton_opts = NewtonOptions {
        max_iter: 200,
        tol: opts.tol,
        escape: 1e6,
    };
    let per_chart = opts.seeds.div_ceil(dim).max(1);
    for k in 0..dim {
        let sub: Vec<MultiPoly> = field.iter().map(|f| f.specialize(k, &One::one())).collect();
        let idx: Vec<usize> = (0..dim).filter(|&i| i != k).collect();
        let small: Vec<String> = idx.iter().map(|&i| vars.name(i).to_string()).collect();
        let small = Vars::new(&small);
        let map: Vec<Option<usize>> = (0..vars.len())
            .map(|i| idx.iter().position(|&j| j == i))
            .collect();
        let reduced: Vec<MultiPoly> = sub
            .iter()
            .map(|f| f.rebase(&small, &map).expect("chart variable was specialized"))
            .collect();
        if idx.is_empty() {
            if reduced.iter().all(|f| f.is_zero()) {
                return Some(format!("{} = 1", vars.name(k)));
            }
            continue;
        }
        let all: Vec<usize> = (0..idx.len()).collect();
        let compiled = CompiledMap::new(&reduced, &all);
        for _ in 0..per_chart {
            let x0 = battery.point(idx.len());
            if let Some(hit) = gauss_newton(&compiled, &x0, &newton_opts) {
                if max_norm(&compiled.eval(&hit.x)) < opts.tol {
                    let coords: Vec<String> = (0..dim)
                        .map(|i| match idx.iter().position(|&j| j == i) {
                            Some(p) => format!("{}={:.6}", vars.name(i), hit.x[p]),
                            None => format!("{}=1", vars.name(i)),
                        })
                        .collect();
                    return Some(format!("({})", coords.join(", ")));
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop25Report {
    /// `a_i + b_i = h - 1` for every pair.
    pub pair_sum: bool,
    /// `deg z_1 = h - 2`; `None` for autonomous systems.
    pub z_degree: Option<bool>,
    /// Every non-principal monomial of `H_1` has weighted degree 1.
    pub nonprincipal_degree_one: bool,
    /// `min weight ∈ {1, 2}`; `None` for autonomous systems.
    pub min_weight: Option<bool>,
    pub witnesses: Vec<String>,
}

impl Prop25Report {
    pub fn all_hold(&self) -> bool {
        self.pair_sum
            && self.z_degree != Some(false)
            && self.nonprincipal_degree_one
            && self.min_weight != Some(false)
    }
}

/// Structural consequences for weights of a semi-quasihomogeneous system
/// with `h >= 3`, evaluated with parameters at degree 0.
pub fn prop25_check(sys: &HamiltonianSystem) -> Prop25Report {
    let h = sys.degrees[0];
    let w = sys.weights(ParamDegrees::Zero);
    let mut witnesses = Vec::new();
    let pair_sum = (0..sys.m).all(|i| {
        let ok = sys.q_weights()[i] + sys.p_weights()[i] == h - 1;
        if !ok {
            witnesses.push(format!(
                "pair {} sums to {}",
                i + 1,
                sys.q_weights()[i] + sys.p_weights()[i]
            ));
        }
        ok
    });
    let z_degree = sys.z_weights().first().map(|&r| {
        if r != h - 2 {
            witnesses.push(format!("deg z = {r}, h - 2 = {}", h - 2));
        }
        r == h - 2
    });
    let nonprincipal_degree_one = match split_principal(sys, 0) {
        Ok((_, hn)) => match violating(&hn, &w, |d| d == 1) {
            None => true,
            Some(v) => {
                witnesses.push(format!("non-principal monomial {v}"));
                false
            }
        },
        Err(e) => {
            witnesses.push(e.to_string());
            false
        }
    };
    let min_weight = (!sys.is_autonomous()).then(|| {
        let min = sys.qp_weights().iter().copied().min().unwrap_or(0);
        if !(min == 1 || min == 2) {
            witnesses.push(format!("minimum weight {min}"));
        }
        min == 1 || min == 2
    });
    Prop25Report {
        pair_sum,
        z_degree,
        nonprincipal_degree_one,
        min_weight,
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprio::{catalog, parse_expr, parse_system};

    fn sys(id: &str) -> HamiltonianSystem {
        HamiltonianSystem::from_def(&catalog(id).unwrap()).unwrap()
    }

    #[test]
    fn p1_field() {
        let s = sys("P1");
        let f = hamilton_equations(&s, 0).unwrap();
        assert_eq!(f.dim, 2);
        assert_eq!(f.components[0], parse_expr("p", s.vars()).unwrap());
        assert_eq!(f.components[1], parse_expr("6*q^2 + z", s.vars()).unwrap());
        assert!(hamilton_equations(&s, 1).is_err());
    }

    #[test]
    fn principal_splits() {
        let s = sys("P2");
        let (hp, hn) = split_principal(&s, 0).unwrap();
        assert_eq!(hp, parse_expr("1/2*p^2 - 1/2*q^4 - 1/2*z*q^2", s.vars()).unwrap());
        assert_eq!(hn, parse_expr("-alpha*q", s.vars()).unwrap());

        let s = sys("P1");
        assert!(split_principal(&s, 0).unwrap().1.is_zero());

        let s = sys("P4");
        let (_, hn) = split_principal(&s, 0).unwrap();
        assert_eq!(hn, parse_expr("-alpha*p + beta*q", s.vars()).unwrap());
    }

    #[test]
    fn above_degree_is_reported() {
        let def =
            parse_system("system X\nvar q q weight 1\nvar p p weight 1\nham H degree 3 = q^4 + p^3\nend\n")
                .unwrap();
        let s = HamiltonianSystem::from_def(&def).unwrap();
        match split_principal(&s, 0) {
            Err(Error::AboveDeclaredDegree {
                monomial,
                degree,
                declared,
            }) => {
                assert_eq!(monomial, "q^4");
                assert_eq!((degree, declared), (4, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn brackets() {
        let s = sys("P1_2_auto");
        let b = poisson_bracket(&s.hamiltonians()[0], &s.hamiltonians()[1], &s);
        assert!(b.is_zero());
        let q1 = MultiPoly::var(s.vars(), 0);
        let p1 = MultiPoly::var(s.vars(), 2);
        assert_eq!(poisson_bracket(&q1, &p1, &s), MultiPoly::one(s.vars()));
    }

    #[test]
    fn validation_examples() {
        let r = validate(&sys("P1"));
        for name in ["A1", "A2", "A3", "A4", "A5"] {
            assert!(r.passes(name), "{name}: {r}");
        }
        let r = validate(&sys("P1_2_auto"));
        for name in ["H0", "H1", "H2", "S"] {
            assert!(r.passes(name), "{name}: {r}");
        }
        let def =
            parse_system("system X\nvar q1 q weight 1\nvar p1 p weight 1\nham H degree 3 = q1^2*p1\nend\n")
                .unwrap();
        let r = validate(&HamiltonianSystem::from_def(&def).unwrap());
        let s = r.get("S").unwrap();
        assert_eq!(s.status, Status::Fail, "{r}");
        assert!(s.detail.as_ref().unwrap().contains("p1=1"));
    }

    #[test]
    fn prop25() {
        let r = prop25_check(&sys("P1"));
        assert_eq!(r.z_degree, Some(true));
        assert!(r.all_hold());
        let r = prop25_check(&sys("P2"));
        assert!(r.nonprincipal_degree_one && r.all_hold());
        let r = prop25_check(&sys("P1xP1"));
        assert_eq!(r.min_weight, None);
        assert_eq!(r.z_degree, None);
    }

    #[test]
    fn euler_residuals() {
        let s = sys("P1_2_auto");
        assert!(euler_identity_check(&s, 0).unwrap().is_zero());
        let def =
            parse_system("system X\nvar q q weight 2\nvar p p weight 3\nham H degree 6 = q^3 + q^2\nend\n")
                .unwrap();
        let s = HamiltonianSystem::from_def(&def).unwrap();
        assert_eq!(
            euler_identity_check(&s, 0).unwrap(),
            parse_expr("-2*q^2", s.vars()).unwrap()
        );
    }
}
