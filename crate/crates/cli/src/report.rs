//! JSON report types. Field order is fixed by declaration order, and every
//! number coming from the analysis carries an exactness tag.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use kova_core::analysis::SystemAnalysis;
use kova_core::blowup::{DivisorFixedPoint, ManifoldDims, RatioReport};
use kova_core::exprio::SystemDef;
use kova_core::kovalevskaya::Balance;
use kova_core::laurent::{FreeParameter, SeriesEntry};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub seed: u64,
    pub system: Option<SystemRef>,
    pub analysis: Option<SystemAnalysis>,
    pub series: Option<Vec<SeriesReport>>,
    pub blowup: Option<Vec<ChartReport>>,
}

impl Report {
    pub fn new(command: &[String], seed: u64, system: Option<SystemRef>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_vec(),
            seed,
            system,
            analysis: None,
            series: None,
            blowup: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRef {
    pub id: String,
    /// SHA-256 of the canonical definition text.
    pub digest: String,
}

impl SystemRef {
    pub fn of(def: &SystemDef) -> Self {
        SystemRef {
            id: def.id.clone(),
            digest: hex::encode(Sha256::digest(def.to_text().as_bytes())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    /// `(a_1..a_n, b_n..b_1)`.
    pub weights: Vec<i64>,
    pub h: i64,
    /// `χ(T)` in ascending powers.
    pub chi: Vec<String>,
    pub chi_text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub flow: usize,
    pub balance_index: usize,
    pub balance: Balance,
    pub order: usize,
    pub state: Vec<String>,
    pub ring: Vec<String>,
    pub pole_orders: Vec<i64>,
    pub entries: Vec<SeriesEntry>,
    pub free_params: Vec<FreeParameter>,
    pub resonances: Vec<usize>,
    /// Positive integer exponents up to the order reached.
    pub expected_resonances: Vec<usize>,
    pub obstruction: Option<ObstructionReport>,
    /// Lowest power of `T` left in each equation; `null` for an identically
    /// satisfied one. Absent when obstructed.
    pub residual_orders: Option<Vec<Option<i64>>>,
    pub consistent: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub order: usize,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pullback {
    pub hamiltonian: String,
    pub degree: i64,
    /// `H = r^degree · polynomial`.
    pub polynomial: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub point: DivisorFixedPoint,
    pub exponent_dims: ManifoldDims,
    pub ratio_check: RatioReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartReport {
    pub chart: String,
    pub order: i64,
    pub vars: Vec<String>,
    /// `name' = rhs`.
    pub equations: Vec<String>,
    pub pullbacks: Vec<Pullback>,
    /// Divisor equations over the `X` coordinates.
    pub v0: Vec<String>,
    pub v0_invariant: Vec<bool>,
    pub fixed_points: Vec<FixedPointReport>,
    pub newton_matches_balances: bool,
}
