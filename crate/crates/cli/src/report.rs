//! JSON report document. Field order is fixed by the struct declarations
//! and rationals are serialized as decimal strings, so identical inputs
//! produce byte-identical documents once timings are zeroed.

use serde::Serialize;
use serde_json::{json, Value};

use orbicert::certify::{Certificate, Conclusion, GroupSize, OrderStatus, OrderVerdict};
use orbicert::complex::EulerReport;
use orbicert::presentation::Presentation;
use orbicert::Rational;

#[derive(Serialize)]
pub struct Report {
    pub version: String,
    pub input: InputEcho,
    pub certificate: CertificateDto,
    pub coset_stats: CosetStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_table: Option<TableDump>,
    pub euler: Option<EulerDto>,
    pub timings: Timings,
}

#[derive(Serialize)]
pub struct InputEcho {
    pub path: String,
    pub text: String,
}

#[derive(Serialize)]
pub struct CosetStats {
    pub cosets_defined: usize,
    pub max_live: usize,
    pub closed: bool,
}

/// Standardized action table: row c lists the images of coset c+1 under
/// x1, x1^-1, x2, x2^-1, ...
#[derive(Serialize)]
pub struct TableDump {
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct RationalDto {
    pub num: String,
    pub den: String,
}

impl RationalDto {
    pub fn of(r: &Rational) -> Self {
        RationalDto { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

#[derive(Serialize)]
pub struct CertificateDto {
    pub presentation: String,
    pub generator_count: usize,
    pub relator_count: usize,
    pub sum_inv_m: RationalDto,
    pub chi_orb: RationalDto,
    pub order_verdicts: Vec<VerdictDto>,
    pub group_size: Value,
    pub conclusions: Vec<Value>,
    pub abelian_rank: usize,
}

#[derive(Serialize)]
pub struct VerdictDto {
    pub relator: usize,
    pub base: String,
    pub claimed: u32,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual_order: Option<usize>,
    pub method: Option<String>,
    pub attempts: Vec<AttemptDto>,
}

#[derive(Serialize)]
pub struct AttemptDto {
    pub method: String,
    pub observed: usize,
    pub conclusive: bool,
}

#[derive(Serialize)]
pub struct EulerDto {
    pub betti: [usize; 3],
    pub group_order: usize,
    pub chi_orb: RationalDto,
    pub lhs: RationalDto,
    pub identity_holds: bool,
    pub b2_predicted: String,
}

#[derive(Serialize)]
pub struct Timings {
    pub parse_ms: u64,
    pub enumerate_ms: u64,
    pub verify_ms: u64,
    pub euler_ms: u64,
    pub total_ms: u64,
}

impl Timings {
    pub fn zeroed() -> Self {
        Timings { parse_ms: 0, enumerate_ms: 0, verify_ms: 0, euler_ms: 0, total_ms: 0 }
    }
}

pub fn conclusion_json(c: &Conclusion) -> Value {
    match c {
        Conclusion::FiniteBoundOk { bound } => json!({"kind": "FINITE_BOUND_OK", "bound": bound.to_string()}),
        Conclusion::Infinite => json!({"kind": "INFINITE"}),
        Conclusion::NotKazhdanT => json!({"kind": "NOT_KAZHDAN_T"}),
        Conclusion::NoInfiniteAmenableNormal => json!({"kind": "NO_INFINITE_AMENABLE_NORMAL"}),
        Conclusion::Betti1LowerBound(q) => json!({"kind": "BETTI1_LOWER_BOUND", "value": {"num": q.numer().to_string(), "den": q.denom().to_string()}}),
        Conclusion::HypothesisUnverified => json!({"kind": "HYPOTHESIS_UNVERIFIED"}),
        Conclusion::Violation(detail) => json!({"kind": "VIOLATION", "detail": detail}),
    }
}

pub fn verdict_dto(p: &Presentation, v: &OrderVerdict) -> VerdictDto {
    let (status, actual) = match &v.status {
        OrderStatus::Verified => ("VERIFIED".to_string(), None),
        OrderStatus::Refuted { actual } => ("REFUTED".to_string(), Some(*actual)),
        OrderStatus::Inconclusive => ("INCONCLUSIVE".to_string(), None),
    };
    VerdictDto {
        relator: v.relator + 1,
        base: p.word_string(&p.relators()[v.relator].base),
        claimed: v.claimed,
        status,
        actual_order: actual,
        method: v.method.map(|m| m.to_string()),
        attempts: v
            .attempts
            .iter()
            .map(|a| AttemptDto {
                method: a.method.to_string(),
                observed: a.observed,
                conclusive: a.conclusive,
            })
            .collect(),
    }
}

pub fn certificate_dto(p: &Presentation, cert: &Certificate) -> CertificateDto {
    let group_size = match cert.group_size {
        GroupSize::Finite(n) => json!({"kind": "FINITE", "value": n.to_string()}),
        GroupSize::Unknown => json!({"kind": "UNKNOWN"}),
    };
    CertificateDto {
        presentation: cert.presentation.clone(),
        generator_count: cert.generator_count,
        relator_count: cert.relator_count,
        sum_inv_m: RationalDto::of(&cert.sum_inv_m),
        chi_orb: RationalDto::of(&cert.chi_orb),
        order_verdicts: cert.order_verdicts.iter().map(|v| verdict_dto(p, v)).collect(),
        group_size,
        conclusions: cert.conclusions.iter().map(conclusion_json).collect(),
        abelian_rank: cert.abelian_rank,
    }
}

pub fn euler_dto(r: &EulerReport) -> EulerDto {
    EulerDto {
        betti: [r.betti.0, r.betti.1, r.betti.2],
        group_order: r.group_order,
        chi_orb: RationalDto::of(&r.chi_orb),
        lhs: RationalDto::of(&r.lhs),
        identity_holds: r.identity_holds,
        b2_predicted: r.b2_predicted.to_string(),
    }
}
