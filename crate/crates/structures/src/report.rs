//! Per-identity verification outcomes.

use std::collections::BTreeMap;

use scalar_expr::Verdict;
use serde::Serialize;

/// Where an identity failed: a sample point and, for identities quantified
/// over test functions, the functions involved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResult {
    pub pass: bool,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl IdentityResult {
    pub fn from_verdict(v: &Verdict, inputs: Vec<String>) -> Self {
        IdentityResult {
            pass: v.is_equal(),
            max_residual: v.max_residual(),
            witness: v.witness().map(|p| Witness { point: p.to_vec(), inputs }),
        }
    }

    /// Combine two checks of the same identity: the worse one wins.
    pub fn merge(self, other: IdentityResult) -> IdentityResult {
        let max_residual = self.max_residual.max(other.max_residual);
        let witness = self.witness.or(other.witness);
        IdentityResult { pass: self.pass && other.pass, max_residual, witness }
    }
}

/// Identity name → outcome, serialized as a JSON object in name order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub identities: BTreeMap<String, IdentityResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a verdict; repeated names accumulate their worst outcome.
    pub fn record(&mut self, name: impl Into<String>, v: &Verdict, inputs: Vec<String>) {
        self.insert(name, IdentityResult::from_verdict(v, inputs));
    }

    pub fn insert(&mut self, name: impl Into<String>, r: IdentityResult) {
        let name = name.into();
        let merged = match self.identities.remove(&name) {
            Some(old) => old.merge(r),
            None => r,
        };
        self.identities.insert(name, merged);
    }

    /// Append another report with every name prefixed by `prefix`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: VerificationReport) {
        for (k, v) in other.identities {
            self.insert(format!("{prefix}{k}"), v);
        }
    }

    pub fn passed(&self) -> bool {
        self.identities.values().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.get(name)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&String, &IdentityResult)> {
        self.identities.iter().filter(|(_, r)| !r.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.identities.values().map(|r| r.max_residual).fold(0.0, f64::max)
    }
}
