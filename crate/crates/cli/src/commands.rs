use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use kova_core::algebra::rational::parse_rational;
use kova_core::analysis::{analyze, weight_label, AnalyzeOptions, SystemAnalysis};
use kova_core::blowup::{
    divisor_fixed_points, exponent_dims, fixed_point_bijection, hamiltonian_chart, prop42_check,
    v0_equations, v0_invariance_residual, BlowupChart, FixedPointSearch, HamiltonianContext,
};
use kova_core::exprio::{catalog, load_system_file, print_expr, SystemDef};
use kova_core::kovalevskaya::{
    autonomous_field, autonomous_hamiltonians, exponents, find_balances, truncate_autonomous, Balance,
    BalanceOptions, INTEGER_TOL,
};
use kova_core::laurent::{build_series, residual_order, series_problem, SeriesMode, SeriesProblem, Verdict};
use kova_core::systems::HamiltonianSystem;
use kova_core::weights::{check_weight, enumerate_regular};
use kova_core::{Error, Rational};

use crate::report::{ChartReport, FixedPointReport, ObstructionReport, Pullback, SeriesReport, WeightRow};

/// A bad flag value or an unusable input; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

pub struct Loaded {
    pub def: SystemDef,
    pub sys: HamiltonianSystem,
}

pub fn load(system: Option<&str>, file: Option<&Path>) -> Result<Loaded> {
    let def = match (system, file) {
        (Some(id), None) => catalog(id)?,
        (None, Some(path)) => load_system_file(path)?,
        _ => return Err(Usage("give exactly one of --system or --file".into()).into()),
    };
    let sys = HamiltonianSystem::from_def(&def)?;
    Ok(Loaded { def, sys })
}

pub fn weight_rows(n: usize, h_max: i64) -> Result<Vec<WeightRow>> {
    let mut rows = Vec::new();
    for w in enumerate_regular(n, h_max)? {
        let chi = check_weight(&w)
            .chi
            .ok_or_else(|| anyhow!("enumerated weight {w} has no quotient"))?;
        rows.push(WeightRow {
            weights: w.listing(),
            h: w.h(),
            chi: chi.coeffs().iter().map(|c| c.to_string()).collect(),
            chi_text: chi.display_in("T").to_string(),
        });
    }
    Ok(rows)
}

pub fn weight_table(rows: &[WeightRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let w: Vec<String> = r.weights.iter().map(i64::to_string).collect();
        let label = format!("({}; {})", w.join(","), r.h);
        writeln!(out, "{label:<24} chi(T) = {}", r.chi_text).unwrap();
    }
    out
}

pub fn analyze_system(loaded: &Loaded, opts: &AnalyzeOptions) -> Result<SystemAnalysis> {
    Ok(analyze(&loaded.sys, opts)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_mark(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "n/a",
    }
}

pub fn analysis_table(a: &SystemAnalysis) -> String {
    let mut out = String::new();
    let degs: Vec<String> = a.degrees.iter().map(i64::to_string).collect();
    writeln!(out, "system {}", a.system).unwrap();
    writeln!(
        out,
        "weights {}  degrees {}",
        weight_label(&a.weights, a.degrees[0]),
        degs.join(",")
    )
    .unwrap();
    writeln!(out, "\nvalidation").unwrap();
    write!(out, "{}", a.validation).unwrap();
    writeln!(out, "\nbalances").unwrap();
    for b in &a.balances {
        let grads = match &b.gradients {
            Some(gs) => opt_mark(Some(gs.iter().all(|g| g.value_zero && g.residual_zero))),
            None => "n/a",
        };
        writeln!(
            out,
            "{:>3}  {}\n     exponents {}  principal {}  semisimple {}  pairing {}  gradients {}",
            b.index,
            b.balance,
            b.signature,
            yes_no(b.principal),
            opt_mark(b.semisimple),
            opt_mark(b.pairing),
            grads
        )
        .unwrap();
    }
    writeln!(out, "\nrow {}", a.table4_row()).unwrap();
    let verdict = match a.painleve.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Obstructed => "obstructed",
    };
    writeln!(out, "painleve {verdict}").unwrap();
    for w in &a.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    if a.invariant_failures.is_empty() {
        writeln!(out, "invariants ok").unwrap();
    } else {
        for f in &a.invariant_failures {
            writeln!(out, "INVARIANT FAILURE: {f}").unwrap();
        }
    }
    out
}

pub fn parse_z0(value: &str) -> Result<Option<Rational>> {
    if value == "symbolic" {
        return Ok(None);
    }
    parse_rational(value)
        .map(Some)
        .ok_or_else(|| Usage(format!("--z0 expects a rational or `symbolic`, got `{value}`")).into())
}

pub fn parse_assignment(src: &str) -> Result<(String, Rational)> {
    let (name, value) = src
        .split_once('=')
        .ok_or_else(|| Usage(format!("expected NAME=VALUE, got `{src}`")))?;
    let v =
        parse_rational(value.trim()).ok_or_else(|| Usage(format!("`{value}` is not a rational number")))?;
    Ok((name.trim().to_string(), v))
}

pub struct SeriesRequest {
    pub flow: usize,
    pub order: usize,
    pub fixed: BTreeMap<String, Rational>,
}

pub fn problem_for(sys: &HamiltonianSystem, flow: usize) -> Result<SeriesProblem> {
    if flow == 0 || flow > sys.k() {
        return Err(Usage(format!("--flow must be in 1..={}", sys.k())).into());
    }
    Ok(series_problem(sys, flow - 1)?)
}

pub fn series_balances(problem: &SeriesProblem, opts: &BalanceOptions) -> Result<Vec<Balance>> {
    let auto = truncate_autonomous(&problem.field)?;
    Ok(find_balances(&auto, opts)?.balances)
}

pub fn series_report(
    problem: &SeriesProblem,
    balances: &[Balance],
    index: usize,
    req: &SeriesRequest,
) -> Result<SeriesReport> {
    let balance = balances.get(index).ok_or_else(|| {
        Usage(format!(
            "balance index {index} out of range; the system has {} balances",
            balances.len()
        ))
    })?;
    if !balance.is_exact() {
        return Err(Usage(format!("balance {index} {balance} is not exact; no series")).into());
    }
    let mode = if req.fixed.is_empty() {
        SeriesMode::Symbolic
    } else {
        SeriesMode::Fixed(req.fixed.clone())
    };
    let s = build_series(problem, balance, req.order, &mode)?;
    let auto = truncate_autonomous(&problem.field)?;
    let rep = exponents(&auto, balance)?;
    let reached = s.obstructed_at.as_ref().map_or(req.order, |o| o.order - 1);
    let mut expected: Vec<usize> = rep
        .exponents
        .iter()
        .filter_map(|e| e.as_integer(INTEGER_TOL))
        .filter(|&e| e > 0 && e as usize <= reached)
        .map(|e| e as usize)
        .collect();
    expected.sort_unstable();
    expected.dedup();
    let resonances = s.resonances();
    let residual_orders = match residual_order(&s) {
        Ok(r) => Some(r),
        Err(Error::Obstructed(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(SeriesReport {
        flow: req.flow,
        balance_index: index,
        balance: balance.clone(),
        order: req.order,
        state: s.state.clone(),
        ring: s.ring.names().to_vec(),
        pole_orders: s.pole_orders.clone(),
        entries: s.entries(),
        free_params: s.free_params.clone(),
        consistent: resonances == expected,
        resonances,
        expected_resonances: expected,
        obstruction: s.obstructed_at.as_ref().map(|o| ObstructionReport {
            order: o.order,
            residual: print_expr(&o.residual),
        }),
        residual_orders,
        warnings: s.warnings.clone(),
    })
}

pub fn series_table(r: &SeriesReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "balance {} {}  flow H{}  order {}",
        r.balance_index, r.balance, r.flow, r.order
    )
    .unwrap();
    writeln!(
        out,
        "coefficient ring: {}",
        if r.ring.is_empty() {
            "Q".to_string()
        } else {
            r.ring.join(", ")
        }
    )
    .unwrap();
    for w in &r.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    let width = r.state.iter().map(String::len).max().unwrap_or(1);
    for e in &r.entries {
        let j = e.exponent + r.pole_orders[r.state.iter().position(|s| *s == e.component).unwrap_or(0)];
        let mark = if r.resonances.contains(&(j as usize)) {
            "  <- resonance"
        } else {
            ""
        };
        writeln!(
            out,
            "{:<width$}  T^{:<3} {}{mark}",
            e.component, e.exponent, e.coefficient
        )
        .unwrap();
    }
    for p in &r.free_params {
        writeln!(
            out,
            "free parameter {} at j = {} along ({})",
            p.name,
            p.resonance,
            p.direction.join(", ")
        )
        .unwrap();
    }
    if let Some(o) = &r.obstruction {
        writeln!(out, "OBSTRUCTED at j = {}: residual {}", o.order, o.residual).unwrap();
    }
    if let Some(ro) = &r.residual_orders {
        let parts: Vec<String> = ro
            .iter()
            .map(|o| o.map_or("exact".to_string(), |e| format!("T^{e}")))
            .collect();
        writeln!(out, "lowest residual terms: {}", parts.join(", ")).unwrap();
    }
    if !r.consistent {
        writeln!(
            out,
            "INCONSISTENT: resonances {:?} differ from positive integer exponents {:?}",
            r.resonances, r.expected_resonances
        )
        .unwrap();
    }
    out
}

fn chart_equations(chart: &BlowupChart) -> Vec<String> {
    chart
        .vars
        .names()
        .iter()
        .zip(&chart.field.components)
        .map(|(n, f)| format!("{n}' = {}", print_expr(f)))
        .collect()
}

pub fn chart_report(
    loaded: &Loaded,
    j: usize,
    balances: &[Balance],
    search: &FixedPointSearch,
) -> Result<ChartReport> {
    let sys = &loaded.sys;
    let chart = hamiltonian_chart(sys, j)?;
    let field = autonomous_field(sys)?;
    let (_, hams) = autonomous_hamiltonians(sys)?;
    let mut pullbacks = Vec::new();
    let mut v0_invariant = Vec::new();
    for (k, h) in hams.iter().enumerate() {
        let (degree, g) = chart.factor(h)?;
        pullbacks.push(Pullback {
            hamiltonian: loaded.def.hamiltonians[k].name.clone(),
            degree,
            polynomial: print_expr(&g),
        });
        v0_invariant.push(v0_invariance_residual(&chart, h, sys.degrees()[k])?.is_zero());
    }
    let v0 = v0_equations(&chart, sys)?;
    let (_, v0_x) = chart.on_divisor(&v0)?;
    let ctx = HamiltonianContext {
        v0: &v0,
        hams: &hams,
        m: sys.m(),
    };
    let mut fixed_points = Vec::new();
    for fp in divisor_fixed_points(&chart, balances, Some(&ctx))? {
        let rep = exponents(&field, &fp.balance)?;
        fixed_points.push(FixedPointReport {
            exponent_dims: exponent_dims(&rep),
            ratio_check: prop42_check(&fp, &rep)?,
            point: fp,
        });
    }
    Ok(ChartReport {
        chart: sys.vars().name(j).to_string(),
        order: chart.order(),
        vars: chart.vars.names().to_vec(),
        equations: chart_equations(&chart),
        pullbacks,
        v0: v0_x.iter().map(print_expr).collect(),
        v0_invariant,
        fixed_points,
        newton_matches_balances: fixed_point_bijection(&chart, balances, search)?,
    })
}

fn scalars(xs: &[kova_core::Scalar]) -> String {
    let parts: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn chart_table(c: &ChartReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "chart {}  (order {}; coordinates {})",
        c.chart,
        c.order,
        c.vars.join(", ")
    )
    .unwrap();
    for e in &c.equations {
        writeln!(out, "  {e}").unwrap();
    }
    for p in &c.pullbacks {
        writeln!(out, "  {} = r^{} * ({})", p.hamiltonian, p.degree, p.polynomial).unwrap();
    }
    writeln!(out, "  divisor equations:").unwrap();
    for (g, inv) in c.v0.iter().zip(&c.v0_invariant) {
        writeln!(out, "    {g} = 0{}", if *inv { "" } else { "   (NOT invariant)" }).unwrap();
    }
    writeln!(out, "  fixed points on r = 0:").unwrap();
    for f in &c.fixed_points {
        let p = &f.point;
        writeln!(out, "    {}  from balance {}", scalars(&p.coords), p.balance).unwrap();
        writeln!(
            out,
            "      spectrum {}  lambda_r {}",
            scalars(&p.spectrum),
            p.lambda_r
        )
        .unwrap();
        writeln!(
            out,
            "      stable {} unstable {} center {}{}  ratio check {} (max error {:.1e})",
            p.dims.stable,
            p.dims.unstable,
            p.dims.center,
            if p.dims.tolerance_sensitive {
                " (near threshold)"
            } else {
                ""
            },
            if f.ratio_check.holds { "ok" } else { "FAIL" },
            f.ratio_check.max_error
        )
        .unwrap();
        writeln!(
            out,
            "      on divisor locus {}  singular {}  lowest balance {}",
            opt_mark(p.on_v0),
            match p.v0_singular {
                Some(true) => "YES",
                Some(false) => "no",
                None => "n/a",
            },
            match p.lowest_balance {
                Some(true) => "yes",
                Some(false) => "no",
                None => "n/a",
            }
        )
        .unwrap();
    }
    writeln!(
        out,
        "  newton fixed points match balances: {}",
        yes_no(c.newton_matches_balances)
    )
    .unwrap();
    out
}

pub fn chart_indices(loaded: &Loaded, chart: Option<&str>) -> Result<Vec<usize>> {
    let sys = &loaded.sys;
    match chart {
        Some(name) => Ok(vec![kova_core::blowup::chart_by_name(sys, name)?]),
        None => {
            if let Some(bad) = (0..sys.dim()).find(|&i| sys.qp_weights()[i] <= 0) {
                return Err(Error::NonpositiveWeight(sys.vars().name(bad).to_string()).into());
            }
            Ok((0..sys.dim()).collect())
        }
    }
}

pub fn parse_point(src: &str) -> Result<Vec<num_complex::Complex64>> {
    src.split(',')
        .map(|part| {
            let part = part.trim();
            let (re, im) = part.split_once(':').unwrap_or((part, "0"));
            let re: f64 = re
                .trim()
                .parse()
                .with_context(|| format!("bad coordinate `{part}`"))?;
            let im: f64 = im
                .trim()
                .parse()
                .with_context(|| format!("bad coordinate `{part}`"))?;
            Ok(num_complex::Complex64::new(re, im))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Usage(format!("--start: {e:#}")).into())
}
