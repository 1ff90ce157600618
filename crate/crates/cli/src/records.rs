//! JSON-lines record shapes.
//!
//! Integers that can outgrow 53 bits (values, moduli, seeds) are decimal
//! strings; exponents, counts and small indices stay JSON numbers.

use num_bigint::{BigInt, BigUint};
use powersum::catalog::{CatalogEntry, MersenneQuotient, Verdict};
use powersum::classify::IdealPairTag;
use powersum::search::SumTriple;
use powersum::verify::{InstanceAudit, VerificationReport};
use powersum::Instance;
use serde::Serialize;

fn strs(v: &[u64]) -> Vec<String> {
    v.iter().map(u64::to_string).collect()
}

#[derive(Serialize)]
pub struct InstanceRec {
    pub c: String,
    pub d: Vec<String>,
    pub z_max: u32,
    pub r: String,
    pub s: String,
}

impl From<&Instance> for InstanceRec {
    fn from(i: &Instance) -> Self {
        InstanceRec {
            c: i.c.to_string(),
            d: strs(&i.d),
            z_max: i.z_max,
            r: i.r.to_string(),
            s: i.s.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct TagRec {
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "L")]
    pub l: String,
}

impl From<&IdealPairTag> for TagRec {
    fn from(t: &IdealPairTag) -> Self {
        TagRec {
            d: t.d.to_string(),
            l: t.l.to_string(),
        }
    }
}

/// `(A, B, z)` as an object.
#[derive(Serialize)]
pub struct ValueRec {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub z: u32,
}

impl From<&SumTriple> for ValueRec {
    fn from(t: &SumTriple) -> Self {
        ValueRec {
            a: t.a.to_string(),
            b: t.b.to_string(),
            z: t.z,
        }
    }
}

pub fn values(v: &[SumTriple]) -> Vec<ValueRec> {
    v.iter().map(ValueRec::from).collect()
}

#[derive(Serialize)]
pub struct SolutionRec {
    pub kind: &'static str,
    pub z: u32,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    /// `None` when the modulus is even or coefficients are present.
    pub tag: Option<TagRec>,
    pub parity: Vec<u8>,
    pub case: String,
    /// The partner a Case 1 or Case 2 solution predicts, when it was found.
    pub partner: Option<ValueRec>,
}

#[derive(Serialize)]
pub struct SummaryRec {
    pub kind: &'static str,
    pub instance: InstanceRec,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N1")]
    pub n1: usize,
}

#[derive(Serialize)]
pub struct InvariantsRec {
    pub kind: &'static str,
    pub instance: InstanceRec,
    pub solvable: bool,
    pub p: u64,
    pub q: String,
    #[serde(rename = "M")]
    pub m: Vec<String>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<i64>>,
    #[serde(rename = "U_prime")]
    pub u_prime: Vec<Vec<i64>>,
    pub witness: Option<Vec<i64>>,
    pub parity_classes: Vec<Vec<u8>>,
}

#[derive(Serialize)]
pub struct PqRec {
    pub kind: &'static str,
    pub instance: InstanceRec,
    pub p: u64,
    pub q: u64,
    pub product: u64,
    pub expected: u64,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct ClassRec {
    pub kind: &'static str,
    pub z: u32,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "D1")]
    pub d1: String,
    #[serde(rename = "Xr")]
    pub xr: String,
    #[serde(rename = "D2")]
    pub d2: String,
    #[serde(rename = "Yr")]
    pub yr: String,
    /// Signed key number before folding into the tag.
    pub key: String,
    pub tag: TagRec,
    pub parity: Vec<u8>,
    pub congruence_ok: bool,
}

#[derive(Serialize)]
pub struct GroupRec {
    pub kind: &'static str,
    pub tag: TagRec,
    pub omega_c: u32,
    pub solutions: Vec<ValueRec>,
}

#[derive(Serialize)]
pub struct PredictionRec {
    pub t: u32,
    pub u_t: String,
    pub v_t: String,
    pub norm_ok: bool,
    pub value: Option<ValueRec>,
    /// The predicted value is one of the search's solutions.
    pub found: bool,
}

#[derive(Serialize)]
pub struct OrbitRec {
    pub kind: &'static str,
    pub tag: TagRec,
    pub j: u32,
    pub u: String,
    pub v: String,
    pub solutions: Vec<ValueRec>,
    pub predicted: Vec<PredictionRec>,
    pub mismatches: Vec<String>,
    pub ok: bool,
}

pub fn big(v: &BigUint) -> String {
    v.to_string()
}

pub fn signed(v: &BigInt) -> String {
    v.to_string()
}

#[derive(Serialize)]
pub struct VerificationRec {
    pub kind: &'static str,
    pub claim: String,
    pub instance: String,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "N1")]
    pub n1: Option<u64>,
    pub bound: u64,
    pub ok: bool,
    pub witnesses: Vec<ValueRec>,
    pub exception: Option<String>,
    pub depth: u32,
    pub notes: Vec<String>,
}

impl From<&VerificationReport> for VerificationRec {
    fn from(r: &VerificationReport) -> Self {
        VerificationRec {
            kind: "verification",
            claim: r.claim.clone(),
            instance: r.instance.clone(),
            n: r.observed,
            n1: r.n1,
            bound: r.bound,
            ok: r.ok,
            witnesses: values(&r.witnesses),
            exception: r.exception.clone(),
            depth: r.depth,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct DoubledRec {
    pub tag: TagRec,
    pub case: String,
    pub solutions: Vec<ValueRec>,
}

#[derive(Serialize)]
pub struct AuditRec {
    pub kind: &'static str,
    pub instance: InstanceRec,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u64,
    pub q: String,
    pub pq: u64,
    pub case: String,
    pub theorem2_exception: Option<String>,
    pub values: Vec<ValueRec>,
    /// Ideal pairs holding two or more solutions.
    pub doubled: Vec<DoubledRec>,
    pub ok: bool,
    pub failures: Vec<String>,
}

impl From<&InstanceAudit> for AuditRec {
    fn from(a: &InstanceAudit) -> Self {
        AuditRec {
            kind: "audit",
            instance: (&a.instance).into(),
            n: a.values.len(),
            p: a.p,
            q: a.q.clone(),
            pq: a.pq,
            case: a
                .case_pair
                .map(|k| k.label())
                .unwrap_or_else(|| "none".into()),
            theorem2_exception: a.theorem2.as_ref().and_then(|r| r.exception.clone()),
            values: values(&a.values),
            doubled: a
                .doubled
                .iter()
                .map(|t| DoubledRec {
                    tag: (&t.tag).into(),
                    case: t.case.label(),
                    solutions: values(&t.solutions),
                })
                .collect(),
            ok: a.ok(),
            failures: a.failures(),
        }
    }
}

#[derive(Serialize)]
pub struct SweepRec {
    pub kind: &'static str,
    pub n: usize,
    pub d_max: u64,
    pub c_max: u64,
    pub z_max: u32,
    pub instances: usize,
    pub failures: usize,
    pub max_n: usize,
    /// Instances with `N = 2^(n-1) + 1`.
    pub at_theorem1_bound: usize,
    /// Instances with `N = pq + 1`.
    pub at_pq_bound: usize,
    pub at_pq_bound_with_pair: usize,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct CatalogRec {
    pub kind: &'static str,
    pub label: String,
    pub d: Vec<String>,
    pub c: String,
    pub identities: Vec<String>,
    pub solutions: Vec<ValueRec>,
    pub arithmetic_ok: bool,
    pub search_ok: Option<bool>,
    pub search_count: Option<usize>,
    pub ok: bool,
}

impl CatalogRec {
    pub fn new(kind: &'static str, e: &CatalogEntry) -> Self {
        CatalogRec {
            kind,
            label: e.label.clone(),
            d: strs(&e.d),
            c: e.c.to_string(),
            identities: e.identities(),
            solutions: values(&e.triples),
            arithmetic_ok: e.arithmetic_ok,
            search_ok: e.search_ok,
            search_count: e.search_count,
            ok: e.ok(),
        }
    }
}

#[derive(Serialize)]
pub struct QuotientRec {
    pub kind: &'static str,
    pub p: u64,
    pub t: u32,
    pub digits: u64,
    pub verdict: &'static str,
    pub factor: Option<String>,
    pub value: Option<String>,
    pub identity_ok: bool,
}

impl QuotientRec {
    pub fn new(m: &MersenneQuotient, identity_ok: bool) -> Self {
        let factor = match m.verdict {
            Verdict::Composite(Some(f)) => Some(f.to_string()),
            _ => None,
        };
        QuotientRec {
            kind: "mersenne_quotient",
            p: m.p,
            t: m.t,
            digits: m.digits,
            verdict: m.verdict.label(),
            factor,
            value: m.value.as_ref().map(big),
            identity_ok,
        }
    }
}
