use serde::{Deserialize, Serialize};

use crate::manifold::Manifold;
use crate::operator::DiffOperator;
use crate::poly::Poly;

/// What an identity check left over after moving everything to one side.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    Poly(Poly),
    Operator(DiffOperator),
    /// Several named sub-identities checked together.
    Parts(Vec<(String, Residual)>),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Poly(p) => p.is_zero(),
            Residual::Operator(op) => op.is_zero(),
            Residual::Parts(parts) => parts.iter().all(|(_, r)| r.is_zero()),
        }
    }

    pub fn render(&self, manifold: &Manifold) -> String {
        match self {
            Residual::Poly(p) => manifold.render(p),
            Residual::Operator(op) => crate::dsl::print_operator(manifold, op),
            Residual::Parts(parts) => parts
                .iter()
                .map(|(name, r)| format!("{name}: {}", r.render(manifold)))
                .collect::<Vec<_>>()
                .join("; "),
        }
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport {
    pub name: String,
    pub arguments: Vec<String>,
    pub residual: Residual,
    /// True iff the residual is literally zero in canonical form.
    pub passed: bool,
    /// Seed of the randomized run that produced the arguments, if any.
    pub seed: Option<u64>,
}

impl BracketReport {
    pub fn new(name: impl Into<String>, arguments: Vec<String>, residual: Residual) -> Self {
        let passed = residual.is_zero();
        BracketReport {
            name: name.into(),
            arguments,
            residual,
            passed,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_entry(&self, manifold: &Manifold) -> CheckEntry {
        CheckEntry {
            name: self.name.clone(),
            args: self.arguments.clone(),
            residual: self.residual.render(manifold),
            passed: self.passed,
        }
    }
}

/// One serialized check of a [`ReportDocument`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub name: String,
    pub args: Vec<String>,
    pub residual: String,
    pub passed: bool,
}

/// Machine-readable summary of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub version: String,
    pub input_sha256: String,
    pub seed: u64,
    pub checks: Vec<CheckEntry>,
    pub passed: bool,
}

impl ReportDocument {
    /// Checks are sorted by name (stable, so equal names keep run order);
    /// the overall flag is the conjunction of the individual flags.
    pub fn new(version: impl Into<String>, input_sha256: impl Into<String>, seed: u64, mut checks: Vec<CheckEntry>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().all(|c| c.passed);
        ReportDocument {
            version: version.into(),
            input_sha256: input_sha256.into(),
            seed,
            checks,
            passed,
        }
    }
}
