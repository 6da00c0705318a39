//! Verification stages over one Lie-pair spec, producing serializable reports.
//!
//! Each stage turns the identities of one module into [`Check`]s. Truncations
//! derive from the run configuration: the Weyl algebra and Fedosov solution use
//! weight `N`, the polyvector side homogeneity `N − 1`, the polydifferential
//! side `N − 2`.

mod labels;
mod stages;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::contraction_engine::{IdentityReport, Status};
use crate::error::CoreError;
use crate::lie_pair::{validate_pair, Connection, LiePair, LiePairSpec, PairViolation};

pub use labels::{d_label, monomial_label, t_label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Validate,
    Fedosov,
    Contraction,
    TransferT,
    TransferD,
    Matched,
    Uniqueness,
    Cohomology,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Validate,
        Suite::Fedosov,
        Suite::Contraction,
        Suite::TransferT,
        Suite::TransferD,
        Suite::Matched,
        Suite::Uniqueness,
        Suite::Cohomology,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Validate => "validate",
            Suite::Fedosov => "fedosov",
            Suite::Contraction => "contraction",
            Suite::TransferT => "transfer-t",
            Suite::TransferD => "transfer-d",
            Suite::Matched => "matched",
            Suite::Uniqueness => "uniqueness",
            Suite::Cohomology => "cohomology",
        }
    }
}

/// Truncation `N`, largest bracket arity `K` and the seed of sampled checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub trunc: u32,
    pub arity: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { trunc: 5, arity: 3, seed: 0 }
    }
}

impl RunConfig {
    /// `N ≥ K + 2`: arity-`K` brackets of weight-one inputs must fit the
    /// polydifferential budget `N − 2`.
    pub fn validate(&self) -> Result<(), CoreError> {
        let need = self.arity as u32 + 2;
        if self.trunc < need {
            return Err(CoreError::TruncationTooSmall { required: need, given: self.trunc });
        }
        if self.arity == 0 {
            return Err(CoreError::Other("arity must be at least 1".into()));
        }
        Ok(())
    }

    pub fn t_cap(&self) -> u32 {
        self.trunc - 1
    }

    pub fn d_cap(&self) -> u32 {
        self.trunc - 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub detail: String,
    /// Offending basis indices, when the failure is indexed by basis elements.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<usize>,
}

/// A non-exhaustive check: `samples` random inputs drawn with `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub identity: String,
    pub status: Status,
    pub checked: usize,
    pub depth: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<Sampling>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(identity: impl Into<String>, checked: usize, depth: i64) -> Self {
        Check { identity: identity.into(), status: Status::Pass, checked, depth, sampled: None, witness: None }
    }

    pub fn fail(identity: impl Into<String>, detail: impl Into<String>, indices: Vec<usize>) -> Self {
        Check {
            identity: identity.into(),
            status: Status::Fail,
            checked: 1,
            depth: 0,
            sampled: None,
            witness: Some(Witness { detail: detail.into(), indices }),
        }
    }

    /// Pass unless `failure` is set.
    pub fn outcome(identity: impl Into<String>, checked: usize, depth: i64, failure: Option<(String, Vec<usize>)>) -> Self {
        let mut c = Check::pass(identity, checked, depth);
        if let Some((detail, indices)) = failure {
            c.status = Status::Fail;
            c.witness = Some(Witness { detail, indices });
        }
        c
    }

    pub fn sampled(mut self, samples: usize, seed: u64) -> Self {
        self.sampled = Some(Sampling { samples, seed });
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.identity = format!("{prefix}: {}", self.identity);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl From<IdentityReport> for Check {
    fn from(r: IdentityReport) -> Self {
        Check {
            identity: r.identity,
            status: r.status,
            checked: r.checked,
            depth: r.depth,
            sampled: None,
            witness: r.witness.map(|detail| Witness { detail, indices: Vec::new() }),
        }
    }
}

fn overall<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Status {
    if checks.into_iter().all(Check::passed) {
        Status::Pass
    } else {
        Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
    pub artifacts: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub name: String,
    pub status: Status,
    pub stages: Vec<StageReport>,
}

impl PairReport {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.stages.iter().flat_map(|s| s.checks.iter())
    }
}

/// A validated pair with its connection, as the stages see it.
pub struct Instance<'s> {
    pub spec: &'s LiePairSpec,
    pub pair: LiePair,
    pub conn: Connection,
    pub conn_is_default: bool,
}

impl<'s> Instance<'s> {
    pub fn new(spec: &'s LiePairSpec) -> Result<Self, PairViolation> {
        let pair = validate_pair(spec)?;
        let (conn, conn_is_default) = match &spec.connection {
            Some(g) => (Connection::from_strings(&pair, g)?, false),
            None => (Connection::default_for(&pair), true),
        };
        Ok(Instance { spec, pair, conn, conn_is_default })
    }
}

/// Collected output of one stage body.
#[derive(Default)]
pub struct StageOutput {
    pub checks: Vec<Check>,
    pub artifacts: Map<String, Value>,
}

impl StageOutput {
    pub fn push(&mut self, c: impl Into<Check>) {
        self.checks.push(c.into());
    }

    pub fn extend<C: Into<Check>>(&mut self, cs: impl IntoIterator<Item = C>) {
        self.checks.extend(cs.into_iter().map(Into::into));
    }

    pub fn artifact(&mut self, key: &str, v: impl Into<Value>) {
        self.artifacts.insert(key.into(), v.into());
    }
}

pub fn run_stage(suite: Suite, inst: &Instance, cfg: &RunConfig) -> StageReport {
    let mut out = StageOutput::default();
    let result = match suite {
        Suite::Validate => stages::validate(inst, &mut out),
        Suite::Fedosov => stages::fedosov(inst, cfg, &mut out),
        Suite::Contraction => stages::contraction(inst, cfg, &mut out),
        Suite::TransferT => stages::transfer_t(inst, cfg, &mut out),
        Suite::TransferD => stages::transfer_d(inst, cfg, &mut out),
        Suite::Matched => stages::matched(inst, cfg, &mut out),
        Suite::Uniqueness => stages::uniqueness(inst, cfg, &mut out),
        Suite::Cohomology => stages::cohomology(inst, cfg, &mut out),
    };
    if let Err(e) = result {
        out.push(Check::fail("stage completed", e.to_string(), Vec::new()));
    }
    StageReport { stage: suite.name(), status: overall(&out.checks), checks: out.checks, artifacts: out.artifacts }
}

/// Runs `suites` in order. An invalid spec yields a single failing `validate`
/// stage carrying the violation.
pub fn run_pair(spec: &LiePairSpec, suites: &[Suite], cfg: &RunConfig) -> PairReport {
    let stages = if suites.is_empty() {
        Vec::new()
    } else {
        match Instance::new(spec) {
            Ok(inst) => suites.iter().map(|&s| run_stage(s, &inst, cfg)).collect(),
            Err(v) => vec![stages::invalid(&v)],
        }
    };
    let status = overall(stages.iter().flat_map(|s| s.checks.iter()));
    PairReport { name: spec.name.clone(), status, stages }
}
