//! Certificate records and the check runner.

use std::time::Instant;

use ogring::{Error, Valuation};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    AssumedStructural,
    Skipped,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engine {
    pub coeff_mode: String,
    pub version: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationCertificate {
    pub suite: String,
    pub n: u32,
    pub engine: Engine,
    pub checks: Vec<Check>,
}

impl VerificationCertificate {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status.is_failure())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Outcome of a computed check: pass flag plus witness fields.
pub type Outcome = ogring::Result<(bool, Value)>;

/// A named check waiting to run.
pub struct Job<'a> {
    name: String,
    paper_ref: String,
    kind: JobKind<'a>,
}

enum JobKind<'a> {
    Computed(Box<dyn FnOnce() -> Outcome + Send + 'a>),
    Fixed(Status, Value),
}

impl<'a> Job<'a> {
    pub fn computed(name: impl Into<String>, paper_ref: impl Into<String>, f: impl FnOnce() -> Outcome + Send + 'a) -> Self {
        Job { name: name.into(), paper_ref: paper_ref.into(), kind: JobKind::Computed(Box::new(f)) }
    }

    pub fn structural(name: impl Into<String>, paper_ref: impl Into<String>, witness: Value) -> Self {
        Job { name: name.into(), paper_ref: paper_ref.into(), kind: JobKind::Fixed(Status::AssumedStructural, witness) }
    }

    pub fn skipped(name: impl Into<String>, paper_ref: impl Into<String>, reason: &str) -> Self {
        Job { name: name.into(), paper_ref: paper_ref.into(), kind: JobKind::Fixed(Status::Skipped, json!({ "reason": reason })) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn run(self) -> Check {
        let (status, witness) = match self.kind {
            JobKind::Fixed(status, witness) => (status, witness),
            JobKind::Computed(f) => {
                let start = Instant::now();
                let (status, mut witness) = match f() {
                    Ok((ok, w)) => (if ok { Status::Pass } else { Status::Fail }, w),
                    Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
                };
                if let Value::Object(map) = &mut witness {
                    map.insert("runtime_ms".into(), json!(start.elapsed().as_millis() as u64));
                }
                (status, witness)
            }
        };
        Check { name: self.name, paper_ref: self.paper_ref, status, witness }
    }
}

/// Runs the jobs (concurrently on the current rayon pool) and sorts the checks by name.
pub fn run_jobs(jobs: Vec<Job<'_>>) -> Vec<Check> {
    let mut checks: Vec<Check> = jobs.into_par_iter().map(Job::run).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    checks
}

/// Witness form of a valuation: a number, `">=K"` when truncated, or `"inf"`.
pub fn val(v: Valuation) -> Value {
    match v {
        Valuation::Exact(k) => json!(k),
        other => json!(other.to_string()),
    }
}

/// Pass flag and witness for a lower-bound claim `v >= bound`.
pub fn at_least(v: Valuation, bound: u32) -> Outcome {
    if !v.decides(bound) {
        return Err(Error::ModulusTooSmall { k: v.lower_bound().unwrap_or(0), required: bound });
    }
    Ok((v.is_at_least(bound), json!({ "valuation": val(v), "required": bound })))
}

/// Drops every `runtime_ms` entry, for byte comparisons of certificates.
pub fn strip_runtimes(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove("runtime_ms");
            map.values_mut().for_each(strip_runtimes);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_runtimes),
        _ => {}
    }
}
