//! Serialized proof certificate. Every number is a decimal string.

use serde::{Deserialize, Serialize};

pub const CERTIFICATE_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub meta: Meta,
    pub low_range: LowRange,
    pub initial_bounds: Option<InitialBoundsRecord>,
    pub reduction: Option<ReductionRecord>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub tool: String,
    pub precision_bits: String,
    pub max_bits: String,
    pub timestamp: String,
    /// `native` or `paper`.
    pub mode: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: String,
    pub value: String,
    pub d1: String,
    pub m1: String,
    pub d2: String,
    pub m2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonvanishingRecord {
    pub n: String,
    /// Lower bounds on `|Gamma_1|`, `|Gamma_2|` at this solution.
    pub gamma1_abs_lower: String,
    pub gamma2_abs_lower: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowRange {
    pub cutoff: String,
    pub solutions: Vec<SolutionRecord>,
    pub search_space: String,
    pub nonvanishing: Vec<NonvanishingRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRecord {
    pub name: String,
    pub value: String,
    pub paper_value: Option<String>,
    pub derivation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatveevRecord {
    /// `C1` in `log |Lambda_1| > -C1 (1 + ln n)`.
    pub stage1: String,
    /// `C2` in `log |Lambda_2| > -C2 (1 + ln n)^2`.
    pub stage2: String,
    pub paper_stage1: String,
    pub paper_stage2: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GslRecord {
    pub r: String,
    #[serde(rename = "H")]
    pub h: String,
    pub n_bound: String,
    pub paper_n_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub artifact: String,
    pub paper: String,
    pub reproduced: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialBoundsRecord {
    pub heights: Vec<HeightRecord>,
    pub matveev: MatveevRecord,
    pub gsl: GslRecord,
    pub m_sum_bound: String,
    pub paper_m_sum_bound: String,
    pub m1_coefficient: String,
    /// Whether `n_bound` and `m_sum_bound` were taken from the source.
    pub source: String,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentRecord {
    pub k: String,
    pub a: String,
    pub p: String,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsRecord {
    pub d1: String,
    pub q: String,
    pub eps: String,
    pub m1_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage1Record {
    #[serde(rename = "M")]
    pub big_m: String,
    pub q: String,
    pub eps_table: Vec<EpsRecord>,
    pub eps_min: String,
    pub m1_bound: String,
    pub hypothesis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub d1: String,
    pub d2: String,
    pub m1: String,
    pub q: String,
    pub eps: String,
    pub n_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage2Record {
    #[serde(rename = "M")]
    pub big_m: String,
    pub q: String,
    pub families: Vec<FamilyRecord>,
    pub family_count: String,
    pub eps_min: String,
    pub n_bound: String,
    pub hypothesis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub tau: String,
    pub convergents: Vec<ConvergentRecord>,
    pub stage1: Stage1Record,
    pub stage2: Option<Stage2Record>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub closed: bool,
    pub reason: String,
    /// Stage that failed, if any.
    pub failed_stage: Option<String>,
    /// `precision` when the failure was a certification (escalation) failure.
    pub failure_kind: Option<String>,
}

impl ProofCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
