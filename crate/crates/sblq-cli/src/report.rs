//! JSON shapes of reports. Field order is fixed by construction (`preserve_order`);
//! rationals and polynomials are strings, floats are plain JSON numbers.

use sblq_core::classify::{fact, StatusTag, Verdict};
use sblq_core::decompose::{Decomposition, IndecompSummand, NecessityReport, SummandSource};
use sblq_core::linalg::{sturm_real_roots, Rational};
use sblq_core::numcheck::{Estimate, MikhlinReport};
use sblq_core::tables::{Family, FamilyTag};
use serde_json::{json, Map, Value};

use crate::io::matrix_json;

pub const SCHEMA_VERSION: &str = "1.0";

/// Ordered object builder.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }

    pub fn put(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.0.insert(k.into(), v.into());
        self
    }

    pub fn set(&mut self, k: &str, v: impl Into<Value>) {
        self.0.insert(k.into(), v.into());
    }

    pub fn done(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn tag_json(t: &FamilyTag) -> Value {
    Obj::new()
        .put("label", t.label())
        .put("family", t.family.name())
        .put("n", t.n)
        .put("perm", json!(t.perm))
        .put("poly", t.poly.as_ref().map_or(Value::Null, |p| Value::String(p.to_string())))
        .done()
}

fn source_name(s: SummandSource) -> &'static str {
    match s {
        SummandSource::PencilBlock => "pencil-block",
        SummandSource::CertifiedMatch => "certified-match",
        SummandSource::C0Split => "c0-split",
    }
}

pub fn summand_json(s: &IndecompSummand) -> Value {
    Obj::new()
        .put("tag", tag_json(&s.tag))
        .put("multiplicity", s.multiplicity)
        .put("source", source_name(s.source))
        .done()
}

pub fn status_json(s: &StatusTag) -> Value {
    let o = Obj::new().put("short", s.short());
    match s {
        StatusTag::Bounded { key, range } => {
            let (covers, source) = fact(key).map_or(("", ""), |f| (f.covers, f.source));
            o.put("key", key.as_str()).put("range", range.as_str()).put("covers", covers).put("source", source)
        }
        StatusTag::BoundedConditional { chain } => o.put("chain", json!(chain)),
        StatusTag::NotPBounded { witness } => o.put("witness", witness.as_str()),
        _ => o,
    }
    .done()
}

pub fn necessity_json(n: &NecessityReport) -> Value {
    Obj::new()
        .put("surjectivity_on_kernel", json!(n.surjectivity_on_kernel))
        .put("kernel_dim", n.kernel_dim)
        .put("equality_constraint", n.equality_constraint.to_string())
        .put(
            "lattice_inequalities",
            Value::Array(
                n.lattice_inequalities
                    .iter()
                    .map(|e| {
                        Obj::new()
                            .put("subspace", e.description.as_str())
                            .put("dim", e.dim)
                            .put("image_dims", json!(e.image_dims))
                            .put("constraint", e.constraint().to_string())
                            .done()
                    })
                    .collect(),
            ),
        )
        .done()
}

/// Isolating intervals for the real roots of every N-type polynomial. Not a certificate.
pub fn real_roots_json(d: &Decomposition, precision: &Rational) -> Value {
    let mut out = Vec::new();
    for s in &d.summands {
        if s.tag.family != Family::N {
            continue;
        }
        let Some(p) = &s.tag.poly else { continue };
        let roots = match sturm_real_roots(p, precision) {
            Ok(r) => Value::Array(
                r.iter().map(|i| json!([i.lo.to_string(), i.hi.to_string()])).collect(),
            ),
            Err(e) => Value::String(e.to_string()),
        };
        out.push(Obj::new().put("summand", s.tag.label()).put("intervals", roots).done());
    }
    Value::Array(out)
}

pub fn decomposition_json(d: &Decomposition) -> Value {
    Obj::new()
        .put("route", format!("{:?}", d.route))
        .put("summands", Value::Array(d.summands.iter().map(summand_json).collect()))
        .put(
            "pencil_blocks",
            Value::Array(
                d.blocks
                    .iter()
                    .map(|b| {
                        let (r, c) = b.shape();
                        Obj::new()
                            .put("block", format!("{b:?}"))
                            .put("shape", json!([r, c]))
                            .put("summand", b.tag().label())
                            .done()
                    })
                    .collect(),
            ),
        )
        .done()
}

pub fn certificates_json(d: &Decomposition) -> Value {
    let mut o = Obj::new().put("psi", matrix_json(&d.certificate));
    if let Some(p) = &d.pencil {
        o = o
            .put("pencil_base_change", matrix_json(&p.base_change))
            .put("pencil_a2", matrix_json(&p.a2))
            .put("pencil_a3", matrix_json(&p.a3));
    }
    o.done()
}

pub fn verdict_json(v: &Verdict) -> Value {
    Obj::new()
        .put("status", status_json(&v.status))
        .put(
            "cases",
            Value::Array(
                v.cases
                    .iter()
                    .map(|c| Obj::new().put("case", c.case.to_string()).put("exponents", c.exponents.to_string()).done())
                    .collect(),
            ),
        )
        .put("summands", Value::Array(v.summands.iter().map(summand_json).collect()))
        .put("route", v.decomposition.as_ref().map_or(Value::Null, |d| format!("{:?}", d.route).into()))
        .put("witnesses", json!(v.witnesses))
        .put("diagnostics", json!(v.diagnostics))
        .put("necessity", necessity_json(&v.necessity))
        .done()
}

pub fn estimate_json(e: &Estimate) -> Value {
    Obj::new().put("value", e.value).put("error", e.error).done()
}

pub fn mikhlin_json(r: &MikhlinReport) -> Value {
    Obj::new()
        .put("pass", r.pass)
        .put("worst", r.worst)
        .put("worst_xi", json!(r.worst_xi))
        .put("worst_alpha", json!(r.worst_alpha))
        .put("samples", r.samples)
        .done()
}

/// `key: value` lines for the text report; arrays of scalars stay on one line.
pub fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}
