//! Verdict reports and their canonical JSON rendering.
//!
//! Canonical JSON: object keys sorted, floats printed as `{:.12e}`, two-space
//! indentation, trailing newline. Identical inputs give identical bytes.

use std::fmt::Write as _;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::linalg::{Matrix, Scalar};

/// Report caveat stamped wherever bidual or topological-center results appear.
pub const ARENS_CAVEAT: &str = "finite dimension implies Arens regularity: both Arens products \
coincide with the algebra product, so topological-center results are consistency checks of \
the bidual construction rather than evidence about irregular algebras";

/// Report caveat for the approximate-identity reduction.
pub const BAI_CAVEAT: &str = "bounded one-sided approximate identity is decided as existence of \
a one-sided identity (a bounded net in finite dimension has a convergent subnet whose limit \
is a one-sided identity)";

/// Report caveat for the inner-mean reduction.
pub const INNER_MEAN_CAVEAT: &str = "phi-inner amenability is decided as: phi does not vanish on \
the center of the algebra (the bidual is the algebra itself)";

/// Report caveat for the zero functional in character amenability.
pub const ZERO_CHARACTER_CAVEAT: &str = "the zero functional in the character-amenability \
condition is covered by the one-sided identity requirement alone";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub witness: Option<Value>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub verdicts: Vec<Verdict>,
    pub caveats: Vec<String>,
}

/// Aggregate outcome of a report, ordered by severity for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AllPass,
    Failed,
    Undecided,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport {
            subject: subject.into(),
            verdicts: Vec::new(),
            caveats: Vec::new(),
        }
    }

    pub fn pass(&mut self, claim: &str, residual: Option<f64>, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            claim: claim.to_owned(),
            status: Status::Pass,
            residual,
            witness: None,
            detail: detail.into(),
        });
    }

    /// Record a failure. A failure always carries a witness.
    pub fn fail(
        &mut self,
        claim: &str,
        witness: Value,
        residual: Option<f64>,
        detail: impl Into<String>,
    ) {
        self.verdicts.push(Verdict {
            claim: claim.to_owned(),
            status: Status::Fail,
            residual,
            witness: Some(witness),
            detail: detail.into(),
        });
    }

    pub fn unknown(&mut self, claim: &str, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            claim: claim.to_owned(),
            status: Status::Unknown,
            residual: None,
            witness: None,
            detail: detail.into(),
        });
    }

    pub fn not_applicable(&mut self, claim: &str, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            claim: claim.to_owned(),
            status: Status::NotApplicable,
            residual: None,
            witness: None,
            detail: detail.into(),
        });
    }

    /// Pass when `residual <= bound`, otherwise fail with `witness`.
    pub fn bound(
        &mut self,
        claim: &str,
        residual: f64,
        bound: f64,
        witness: impl FnOnce() -> Value,
        detail: impl Into<String>,
    ) {
        if residual <= bound {
            self.pass(claim, Some(residual), detail);
        } else {
            self.fail(claim, witness(), Some(residual), detail);
        }
    }

    /// Pass when `ok`, otherwise fail with `witness`.
    pub fn expect(
        &mut self,
        claim: &str,
        ok: bool,
        witness: impl FnOnce() -> Value,
        detail: impl Into<String>,
    ) {
        if ok {
            self.pass(claim, None, detail);
        } else {
            self.fail(claim, witness(), None, detail);
        }
    }

    pub fn caveat(&mut self, text: &str) {
        if !self.caveats.iter().any(|c| c == text) {
            self.caveats.push(text.to_owned());
        }
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.verdicts.extend(other.verdicts);
        for c in other.caveats {
            self.caveat(&c);
        }
    }

    /// Sort verdicts by claim id (stable) and caveats alphabetically.
    pub fn finish(mut self) -> Self {
        self.verdicts.sort_by(|a, b| a.claim.cmp(&b.claim));
        self.caveats.sort();
        self
    }

    pub fn outcome(&self) -> Outcome {
        if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            Outcome::Failed
        } else if self.verdicts.iter().any(|v| v.status == Status::Unknown) {
            Outcome::Undecided
        } else {
            Outcome::AllPass
        }
    }

    pub fn statuses(&self, claim: &str) -> Vec<Status> {
        self.verdicts
            .iter()
            .filter(|v| v.claim == claim)
            .map(|v| v.status)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "report: {}", self.subject);
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Unknown => "UNKNOWN",
                Status::NotApplicable => "N/A",
            };
            let _ = write!(out, "  [{tag:>7}] {}", v.claim);
            if let Some(r) = v.residual {
                let _ = write!(out, " (residual {r:.3e})");
            }
            if !v.detail.is_empty() {
                let _ = write!(out, ": {}", v.detail);
            }
            out.push('\n');
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "           witness: {w}");
            }
        }
        for c in &self.caveats {
            let _ = writeln!(out, "  caveat: {c}");
        }
        out
    }
}

/// Serialize a value as canonical JSON.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values serialize");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(0.0)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Scalars pairs and other all-primitive arrays stay on one line.
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push_str(": ");
                write_value(out, &map[*key], depth + 1);
                if k + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

pub fn complex_json(z: Scalar) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn complex_vec_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex_json(m[(r, c)])).collect()))
            .collect(),
    )
}

/// Columns of a basis matrix as a list of coordinate vectors.
pub fn columns_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.ncols())
            .map(|c| Value::Array((0..m.nrows()).map(|r| complex_json(m[(r, c)])).collect()))
            .collect(),
    )
}

pub fn ser_complex_vec<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub fn ser_opt_complex_vec<S: Serializer>(v: &Option<Vec<Scalar>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_complex_vec(v, s),
        None => s.serialize_none(),
    }
}

pub fn ser_complex_vecs<S: Serializer>(v: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        let pairs: Vec<[f64; 2]> = row.iter().map(|z| [z.re, z.im]).collect();
        seq.serialize_element(&pairs)?;
    }
    seq.end()
}
