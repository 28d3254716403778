//! On-disk scenario format (schema version 1).
//!
//! Scenario files are JSON with every number written exactly: rationals as
//! `"p/q"` strings, polynomials as expression strings over declared
//! variables. Each file carries one scenario, its inputs, the expected
//! value, and a provenance note saying which statement it reproduces.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema: u32,
    pub id: String,
    pub kind: String,
    pub provenance: String,
    /// Present when the source display disagrees with the computed
    /// value; the scenario then reports `flagged` instead of `match`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flagged: Option<FlagNote>,
    pub inputs: serde_json::Value,
    pub expected: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagNote {
    /// The literal reading of the source display.
    pub source_reading: String,
    /// Why the scenario keeps a different expected value.
    pub note: String,
}

// ---- shared input fragments ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub name: String,
    pub basis: Vec<String>,
    /// Triple products as `[class, class, class, value]`; absent means 0.
    pub triples: Vec<(String, String, String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedClassSpec {
    pub name: String,
    pub class: Vec<String>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchedulePieceSpec {
    pub lo: String,
    pub hi: String,
    #[serde(default)]
    pub negative: Vec<NamedClassSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    pub pairing: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThreefoldSpec {
    pub lattice: LatticeSpec,
    pub minus_k: Vec<String>,
    pub divisor: Vec<String>,
    pub volume: String,
    pub param: String,
    pub schedule: Vec<SchedulePieceSpec>,
    #[serde(default)]
    pub test_curves: Vec<CurveSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseSpec {
    pub breakpoints: Vec<String>,
    pub pieces: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeclaredVPieceSpec {
    pub v_lo: String,
    pub v_hi: String,
    #[serde(default)]
    pub negative: Vec<DeclaredNegativeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeclaredNegativeSpec {
    /// Pool candidate (surface basis class) name.
    pub name: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeclaredCellSpec {
    pub u_lo: String,
    pub u_hi: String,
    pub threshold: String,
    pub pieces: Vec<DeclaredVPieceSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeclaredFamilySpec {
    pub vvar: String,
    pub cells: Vec<DeclaredCellSpec>,
}

// ---- per-kind inputs ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FujitaInputs {
    #[serde(flatten)]
    pub threefold: ThreefoldSpec,
    pub log_discrepancy: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleVerifyInputs {
    #[serde(flatten)]
    pub threefold: ThreefoldSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagInputs {
    pub threefold: ThreefoldSpec,
    pub surface: SurfaceSpec,
    /// One row of surface coefficients per threefold basis class.
    pub restriction: Vec<Vec<String>>,
    pub curve: CurveClassSpec,
    pub pool: Vec<String>,
    /// Declared `ord_C(N(u)|_S)`.
    pub ord: PiecewiseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared: Option<DeclaredFamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_threshold: Option<PiecewiseSpec>,
    /// Negative-part components through the point (third step only).
    #[serde(default)]
    pub membership: Vec<MembershipSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ord_nprime: Option<PiecewiseSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveClassSpec {
    pub name: String,
    pub class: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipSpec {
    pub name: String,
    #[serde(default = "one_string")]
    pub multiplicity: String,
}

fn one_string() -> String {
    "1".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaInputs {
    /// `(A, S)` pairs.
    pub entries: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpec {
    pub rank: usize,
    pub coords: Vec<String>,
    pub weights: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GitClassifyInputs {
    pub action: ActionSpec,
    pub support: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GitTableInputs {
    pub action: ActionSpec,
    /// Supports whose class depends on coordinate values, not just the
    /// support pattern; annotated in the table.
    #[serde(default)]
    pub value_dependent: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialsInputs {
    pub action: ActionSpec,
    pub max_degree: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotientMapInputs {
    pub coords: Vec<String>,
    pub map: Vec<String>,
    pub point: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadricInputs {
    /// Combined variable list: form variables then parameters.
    pub vars: Vec<String>,
    pub form_vars: Vec<String>,
    pub quadric: String,
    #[serde(default)]
    pub at: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobianInputs {
    pub factors: Vec<Vec<String>>,
    pub equations: Vec<String>,
    pub point: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscriminantInputs {
    /// Ring of the substituted expression: base, fiber, and parameters.
    pub ring: Vec<String>,
    pub quadric_vars: Vec<String>,
    pub quadric: String,
    pub substitution: BTreeMap<String, String>,
    pub fiber_vars: Vec<String>,
    /// Parameter values substituted before anything else.
    #[serde(default)]
    pub at: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdInputs {
    pub threefold: ThreefoldSpec,
    pub surface: SurfaceSpec,
    pub restriction: Vec<Vec<String>>,
    pub curve: CurveClassSpec,
    pub pool: Vec<String>,
}

// ---- per-kind expected values ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FujitaExpected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleVerifyExpected {
    pub pass: bool,
    /// Volume polynomial per piece, in order.
    #[serde(default)]
    pub volumes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValueExpected {
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassExpected {
    pub class: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableExpected {
    pub counts: BTreeMap<String, usize>,
    /// Every row as [comma-joined support, class].
    pub rows: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialsExpected {
    pub monomials: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageExpected {
    pub image: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankExpected {
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelExpected {
    pub kernel: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscriminantExpected {
    /// The discriminant must be a nonzero rational multiple of this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proportional_to: Option<String>,
    /// Additionally require these two polynomials to be proportional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_proportional: Option<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdExpected {
    pub breakpoints: Vec<String>,
    pub pieces: Vec<String>,
}
