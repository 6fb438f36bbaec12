//! Deterministic reports: JSON for machines, aligned text for people.

use logvoa_core::check::{Outcome, Status};
use logvoa_core::Rational;
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Exact rational as `"num/den"`.
pub fn rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    /// Conventions fixed by the implementation, echoed so readers can
    /// compare signs.
    pub conventions: Vec<(String, String)>,
    pub checks: Vec<Outcome>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Self { version: env!("CARGO_PKG_VERSION").to_string(), config, conventions: default_conventions(), checks: Vec::new() }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// No check failed. Findings and skips do not count as failures.
    pub fn ok(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "tool": "logvoa",
            "version": self.version,
            "schema": SCHEMA_VERSION,
            "config": {
                "p": c.p,
                "pprime": c.p_prime,
                "max_weight": rational(c.max_weight),
                "module": c.module.as_str(),
                "stretch": c.stretch,
            },
            "conventions": self.conventions.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(outcome_json).collect::<Vec<_>>(),
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "finding": self.count(Status::Finding),
                "skipped": self.count(Status::Skipped),
            },
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "logvoa {} p={} p'={} max_weight={} module={}\n",
            self.version,
            c.p,
            c.p_prime,
            c.max_weight,
            c.module.as_str()
        );
        for o in &self.checks {
            out.push_str(&format!("{:<8} {}\n", o.status.as_str().to_uppercase(), o.name));
            for (k, v) in &o.witness {
                out.push_str(&format!("         {k}: {v}\n"));
            }
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} finding, {} skipped\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Finding),
            self.count(Status::Skipped)
        ));
        out
    }
}

fn outcome_json(o: &Outcome) -> Value {
    json!({
        "name": o.name,
        "claim": o.claim,
        "status": o.status.as_str(),
        "witness": o.witness.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
    })
}

fn default_conventions() -> Vec<(String, String)> {
    [
        ("cocycle", "trivial: e_γ e^β = e^{γ+β} with coefficient +1"),
        ("weight-0 companion", "e^{α/p'-α/p}"),
        ("MV component selection", "same index pattern as V(p,p'): u2 on m1+m3, u3 on m1+m2, u4 on m1"),
        ("Δ expansion", "coefficient (-1)^{n+1}/n on z^{-n}"),
        ("subsingular normalization", "particular solution with zero kernel component, Qw equal to the target"),
        ("state order", "by weight, then charge, then reverse-lex partition"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}
