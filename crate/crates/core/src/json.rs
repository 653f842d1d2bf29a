//! Versioned JSON documents. Every vertex id is 1-based and every
//! document carries `"schema": "percolate/1"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deciders::{Witness, WitnessKind};
use crate::engine::{InfectionTrace, Time};
use crate::families::{GammaKind, GammaMember};
use crate::reduction::{Check, GadgetMap, ReductionReport, SlotRoles};
use crate::set::VertexSet;

pub const SCHEMA: &str = "percolate/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error(transparent)]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("{0}")]
    Invalid(String),
}

fn schema() -> &'static str {
    SCHEMA
}

fn one(v: usize) -> usize {
    v + 1
}

fn time(t: Time) -> Option<u32> {
    t.finite()
}

#[derive(Serialize)]
struct TraceDoc {
    schema: &'static str,
    n: usize,
    seed: Vec<usize>,
    times: Vec<Option<u32>>,
    percolates: bool,
    t: Option<u32>,
}

pub fn trace_json(trace: &InfectionTrace) -> String {
    let doc = TraceDoc {
        schema: schema(),
        n: trace.times().len(),
        seed: trace.seed().to_one_based(),
        times: trace.times().iter().map(|&t| time(t)).collect(),
        percolates: trace.percolates(),
        t: time(trace.percolation_time()),
    };
    serde_json::to_string(&doc).expect("serialisable")
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WitnessDoc {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub kind: String,
    pub u: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

impl WitnessDoc {
    pub fn from_witness(w: &Witness) -> WitnessDoc {
        let mut doc = WitnessDoc {
            schema: default_schema(),
            kind: w.kind().name().to_string(),
            u: one(w.u()),
            v: None,
            s: None,
            t0: None,
            gamma_kind: None,
            f: None,
            x: None,
        };
        match w {
            Witness::Bip3 { v, s, .. } => {
                doc.v = Some(one(*v));
                doc.s = Some(one(*s));
            }
            Witness::Gen3 { t0, f, .. } => {
                doc.t0 = Some(t0.to_one_based());
                doc.f = Some(f.to_one_based());
            }
            Witness::Bip4 {
                gamma, t0, f, x, ..
            } => {
                doc.t0 = Some(t0.to_one_based());
                doc.gamma_kind = Some(gamma.to_string());
                doc.f = Some(f.to_one_based());
                doc.x = Some(one(*x));
            }
        }
        doc
    }

    /// Converts back for a graph on `n` vertices.
    pub fn to_witness(&self, n: usize) -> Result<Witness, JsonError> {
        if self.schema != SCHEMA {
            return Err(JsonError::Schema(self.schema.clone()));
        }
        let vertex = |name: &str, v: Option<usize>| -> Result<usize, JsonError> {
            let v = v.ok_or_else(|| {
                JsonError::Invalid(format!("{} witness needs {name:?}", self.kind))
            })?;
            if v == 0 || v > n {
                return Err(JsonError::Invalid(format!(
                    "{name} = {v} is not a vertex of a {n}-vertex graph"
                )));
            }
            Ok(v - 1)
        };
        let set = |name: &str, ids: &Option<Vec<usize>>| -> Result<VertexSet, JsonError> {
            let ids = ids.as_ref().ok_or_else(|| {
                JsonError::Invalid(format!("{} witness needs {name:?}", self.kind))
            })?;
            let mut out = VertexSet::new(n);
            for &v in ids {
                out.insert(vertex(name, Some(v))?);
            }
            Ok(out)
        };
        let u = vertex("u", Some(self.u))?;
        match self.kind.as_str() {
            "BIP3" => Ok(Witness::Bip3 {
                u,
                v: vertex("v", self.v)?,
                s: vertex("s", self.s)?,
            }),
            "GEN3" => Ok(Witness::Gen3 {
                u,
                t0: set("t0", &self.t0)?,
                f: set("f", &self.f)?,
            }),
            "BIP4" => {
                let gamma = match &self.gamma_kind {
                    Some(label) => parse_gamma_kind(label, n)?,
                    None => GammaKind::Prime,
                };
                Ok(Witness::Bip4 {
                    u,
                    gamma,
                    t0: set("t0", &self.t0)?,
                    f: set("f", &self.f)?,
                    x: vertex("x", self.x)?,
                })
            }
            other => Err(JsonError::Invalid(format!(
                "unknown witness kind {other:?}"
            ))),
        }
    }
}

/// Inverse of `GammaKind`'s display form: `T0'`, `T0^v`, `T0^v,i`.
fn parse_gamma_kind(label: &str, n: usize) -> Result<GammaKind, JsonError> {
    let bad = || JsonError::Invalid(format!("bad gamma kind {label:?}"));
    if label == "T0'" {
        return Ok(GammaKind::Prime);
    }
    let rest = label.strip_prefix("T0^").ok_or_else(bad)?;
    let mut parts = rest.split(',');
    let v: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    if v == 0 || v > n {
        return Err(bad());
    }
    match parts.next() {
        None => Ok(GammaKind::Vertex { v: v - 1 }),
        Some(i) => {
            let i: usize = i.parse().map_err(|_| bad())?;
            if i == 0 || parts.next().is_some() {
                return Err(bad());
            }
            Ok(GammaKind::Pair { v: v - 1, i })
        }
    }
}

pub fn witness_json(w: &Witness) -> String {
    serde_json::to_string(&WitnessDoc::from_witness(w)).expect("serialisable")
}

#[derive(Serialize)]
struct DecisionDoc<'a> {
    schema: &'static str,
    answer: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a WitnessDoc>,
}

/// `{"answer": "YES", "witness": {...}}` or `{"answer": "NO"}`.
pub fn decision_json(w: Option<&Witness>) -> String {
    let doc = w.map(WitnessDoc::from_witness);
    let out = DecisionDoc {
        schema: schema(),
        answer: if w.is_some() { "YES" } else { "NO" },
        witness: doc.as_ref(),
    };
    serde_json::to_string(&out).expect("serialisable")
}

/// Reads a witness document, or the witness inside a decision document.
pub fn parse_witness(text: &str, n: usize) -> Result<Witness, JsonError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let inner = match value.get("witness") {
        Some(w) => w.clone(),
        None if value.get("answer").is_some() => {
            return Err(JsonError::Invalid(
                "decision document has no witness".into(),
            ))
        }
        None => value,
    };
    let doc: WitnessDoc = serde_json::from_value(inner)?;
    doc.to_witness(n)
}

#[derive(Serialize)]
struct SeedDoc<'a> {
    schema: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'a str>,
    seed: Vec<usize>,
    t: Option<u32>,
}

/// A seed set with its percolation time, e.g. an extended hull set.
pub fn seed_json(kind: Option<WitnessKind>, seed: &VertexSet, t: Time) -> String {
    let doc = SeedDoc {
        schema: schema(),
        kind: kind.map(WitnessKind::name),
        seed: seed.to_one_based(),
        t: time(t),
    };
    serde_json::to_string(&doc).expect("serialisable")
}

#[derive(Serialize)]
struct OracleDoc {
    schema: &'static str,
    n: usize,
    t: u32,
    seed: Vec<usize>,
}

pub fn oracle_json(n: usize, t: u32, seed: &VertexSet) -> String {
    serde_json::to_string(&OracleDoc {
        schema: schema(),
        n,
        t,
        seed: seed.to_one_based(),
    })
    .expect("serialisable")
}

#[derive(Serialize)]
struct CertificateDoc {
    schema: &'static str,
    vertex: usize,
    k: u32,
    f: Option<Vec<usize>>,
}

pub fn certificate_json(vertex: usize, k: u32, f: Option<&VertexSet>) -> String {
    let doc = CertificateDoc {
        schema: schema(),
        vertex: one(vertex),
        k,
        f: f.map(VertexSet::to_one_based),
    };
    serde_json::to_string(&doc).expect("serialisable")
}

#[derive(Serialize)]
struct GammaDoc {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    members: Vec<usize>,
}

#[derive(Serialize)]
struct FamiliesDoc {
    schema: &'static str,
    u: usize,
    degree_one: Vec<usize>,
    t0: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<GammaDoc>>,
}

/// The forced sets around `u`; `gamma` only for bipartite graphs.
pub fn families_json(
    u: usize,
    degree_one: &VertexSet,
    t0: &VertexSet,
    gamma: Option<&[GammaMember]>,
) -> String {
    let doc = FamiliesDoc {
        schema: schema(),
        u: one(u),
        degree_one: degree_one.to_one_based(),
        t0: t0.to_one_based(),
        gamma: gamma.map(|members| {
            members
                .iter()
                .map(|m| GammaDoc {
                    kind: m.kind.to_string(),
                    v: m.kind.v().map(one),
                    i: m.kind.i(),
                    members: m.members.to_one_based(),
                })
                .collect()
        }),
    };
    serde_json::to_string(&doc).expect("serialisable")
}

#[derive(Serialize)]
struct SlotDoc {
    #[serde(rename = "uA")]
    ua: usize,
    #[serde(rename = "uB")]
    ub: usize,
    w: usize,
    l: usize,
    p: [usize; 3],
    q: [usize; 3],
    r: [usize; 3],
    s: [usize; 3],
}

impl From<&SlotRoles> for SlotDoc {
    fn from(s: &SlotRoles) -> SlotDoc {
        let all = |a: [usize; 3]| a.map(one);
        SlotDoc {
            ua: one(s.ua),
            ub: one(s.ub),
            w: one(s.w),
            l: one(s.l),
            p: all(s.p),
            q: all(s.q),
            r: all(s.r),
            s: all(s.s),
        }
    }
}

#[derive(Serialize)]
struct ConflictDoc {
    between: [[usize; 2]; 2],
    vertex: usize,
}

#[derive(Serialize)]
struct PathDoc {
    vertex: usize,
    leaf: usize,
}

#[derive(Serialize)]
struct GadgetDoc {
    schema: &'static str,
    k: usize,
    clauses: Vec<Vec<SlotDoc>>,
    #[serde(rename = "Y")]
    y: Vec<ConflictDoc>,
    z: usize,
    z_prime: usize,
    #[serde(rename = "T")]
    t: Vec<usize>,
    path: Vec<PathDoc>,
}

pub fn gadget_json(gm: &GadgetMap) -> String {
    let doc = GadgetDoc {
        schema: schema(),
        k: gm.k,
        clauses: gm
            .clauses
            .iter()
            .map(|slots| slots.iter().map(SlotDoc::from).collect())
            .collect(),
        y: gm
            .y
            .iter()
            .map(|c| ConflictDoc {
                between: [
                    [one(c.first.0), one(c.first.1)],
                    [one(c.second.0), one(c.second.1)],
                ],
                vertex: one(c.vertex),
            })
            .collect(),
        z: one(gm.z),
        z_prime: one(gm.z_prime),
        t: gm.t.to_one_based(),
        path: gm
            .path
            .iter()
            .map(|&(v, l)| PathDoc {
                vertex: one(v),
                leaf: one(l),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("serialisable")
}

#[derive(Serialize)]
struct CheckDoc<'a> {
    role: &'a str,
    vertex: usize,
    expected: String,
    observed: Option<u32>,
    ok: bool,
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    schema: &'static str,
    n: usize,
    k: usize,
    bipartite: bool,
    percolates: bool,
    t: Option<u32>,
    passed: bool,
    checks: Vec<CheckDoc<'a>>,
}

fn check_doc(c: &Check) -> CheckDoc<'_> {
    CheckDoc {
        role: &c.role,
        vertex: one(c.vertex),
        expected: c.expected.to_string(),
        observed: time(c.observed),
        ok: c.ok(),
    }
}

pub fn report_json(r: &ReductionReport) -> String {
    let doc = ReportDoc {
        schema: schema(),
        n: r.n,
        k: r.k,
        bipartite: r.bipartite,
        percolates: r.percolates,
        t: time(r.t),
        passed: r.passed(),
        checks: r.checks.iter().map(check_doc).collect(),
    };
    serde_json::to_string(&doc).expect("serialisable")
}
