//! End-to-end analysis of a Hamiltonian system: validation, balances,
//! exponents and the identities they must satisfy, and the Painlevé verdict.

use serde::{Deserialize, Serialize};

use crate::algebra::Scalar;
use crate::error::Result;
use crate::kovalevskaya::{
    autonomous_field, exponents, find_balances, format_signature_counts, pairing_check, signature_counts,
    signature_string, theorem45_check, Balance, BalanceOptions, GradientIdentity, KMatrix, SignatureCount,
};
use crate::laurent::{painleve_test_problem, series_problem, PainleveReport};
use crate::systems::{validate_with, HamiltonianSystem, ValidateOptions, ValidationReport};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AnalyzeOptions {
    pub balances: BalanceOptions,
    pub validate: ValidateOptions,
}

impl AnalyzeOptions {
    pub fn with_seed(seed: u64) -> Self {
        let mut o = AnalyzeOptions::default();
        o.balances.seed = seed;
        o.validate.seed = seed;
        o
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceAnalysis {
    pub index: usize,
    pub balance: Balance,
    pub k: Vec<Vec<Scalar>>,
    pub exponents: Vec<Scalar>,
    pub signature: String,
    pub semisimple: Option<bool>,
    pub principal: bool,
    pub minus_one: bool,
    pub eigvec_ok: bool,
    /// `None` when the pairing hypotheses do not hold.
    pub pairing: Option<bool>,
    pub gradients: Option<Vec<GradientIdentity>>,
    pub gradient_note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemAnalysis {
    pub system: String,
    /// Sorted weights of the canonical variables.
    pub weights: Vec<i64>,
    pub degrees: Vec<i64>,
    pub validation: ValidationReport,
    pub balances: Vec<BalanceAnalysis>,
    pub signatures: Vec<SignatureCount>,
    pub painleve: PainleveReport,
    pub warnings: Vec<String>,
    /// Exact identities that failed; nonempty means an implementation fault
    /// or an input outside the theory.
    pub invariant_failures: Vec<String>,
}

impl SystemAnalysis {
    /// `(w_1,…,w_{2m};h): (κ…)xN, …`
    pub fn table4_row(&self) -> String {
        format!(
            "{}: {}",
            weight_label(&self.weights, self.degrees[0]),
            format_signature_counts(&self.signatures)
        )
    }
}

pub fn weight_label(weights: &[i64], h: i64) -> String {
    let w: Vec<String> = weights.iter().map(i64::to_string).collect();
    format!("({};{})", w.join(","), h)
}

fn k_rows(k: &KMatrix) -> Vec<Vec<Scalar>> {
    let n = k.dim();
    (0..n).map(|i| (0..n).map(|j| k.entry(i, j)).collect()).collect()
}

pub fn analyze(sys: &HamiltonianSystem, opts: &AnalyzeOptions) -> Result<SystemAnalysis> {
    let validation = validate_with(sys, &opts.validate);
    let field = autonomous_field(sys)?;
    let search = find_balances(&field, &opts.balances)?;
    let mut warnings = search.warnings.clone();
    let mut failures = Vec::new();
    let pairing_applies = validation.passes("A1") && validation.passes("A2");
    let h = sys.degrees()[0];

    let mut reports = Vec::new();
    let mut balances = Vec::new();
    for (index, b) in search.balances.iter().enumerate() {
        let rep = exponents(&field, b)?;
        let sig = rep.signature();
        let pairing = pairing_applies.then(|| pairing_check(&sig, h));
        let (gradients, gradient_note) = match theorem45_check(sys, b) {
            Ok(g) => (Some(g), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let tag = format!("balance {index} {b}");
        if !rep.has_minus_one {
            failures.push(format!("{tag}: -1 is not an exponent"));
        }
        if !rep.eigvec_ok {
            failures.push(format!("{tag}: a∘c is not a (-1)-eigenvector of K"));
        }
        if pairing == Some(false) {
            failures.push(format!("{tag}: exponents are not paired about (h-1)/2"));
        }
        if let Some(gs) = &gradients {
            for g in gs.iter().filter(|_| b.is_exact()) {
                if !g.value_zero {
                    failures.push(format!("{tag}: {}(c) = {} is nonzero", g.hamiltonian, g.value));
                }
                if !g.residual_zero {
                    failures.push(format!("{tag}: d{}(c)(K - h I) is nonzero", g.hamiltonian));
                }
            }
        }
        balances.push(BalanceAnalysis {
            index,
            balance: b.clone(),
            k: rep.k.as_ref().map(k_rows).unwrap_or_default(),
            exponents: rep.exponents.clone(),
            signature: signature_string(&sig),
            semisimple: rep.semisimple,
            principal: rep.principal,
            minus_one: rep.has_minus_one,
            eigvec_ok: rep.eigvec_ok,
            pairing,
            gradients,
            gradient_note,
        });
        reports.push(rep);
    }
    let painleve = painleve_test_problem(&series_problem(sys, 0)?, &opts.balances)?;
    for w in &painleve.warnings {
        if !warnings.contains(w) {
            warnings.push(w.clone());
        }
    }
    let mut weights = sys.qp_weights().to_vec();
    weights.sort_unstable();
    Ok(SystemAnalysis {
        system: sys.id().to_string(),
        weights,
        degrees: sys.degrees().to_vec(),
        validation,
        balances,
        signatures: signature_counts(&reports),
        painleve,
        warnings,
        invariant_failures: failures,
    })
}
