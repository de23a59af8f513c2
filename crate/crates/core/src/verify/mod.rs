//! Equilibrium verifiers. Each check returns a [`Verdict`] carrying either
//! a certificate or a localized counterexample.
//!
//! Strategic-form concepts are checked against pure strategies; the
//! extensive-form ones against a completely mixed tremble σ′ that is
//! infinitesimally close to the candidate σ. With [`Route::Epistemic`] the
//! corresponding common-knowledge-of-rationality check on an explicit model
//! is run as well, and any disagreement with the direct inequalities is an
//! error.

mod extensive;
mod strategic;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::epistemic::Mode;
use crate::field::NonstdNum;
use crate::format::{BeliefDoc, CorrelatedDoc, MixedDoc, ModelDoc, ProfileDoc};
use crate::response::LocalToGlobalCert;

pub use extensive::{check_perfect, check_quasi_perfect, check_sequential, search_tremble, Budget, SearchResult};
pub use strategic::{check_correlated, check_nash, check_rationalizable, rationalizable, witness_model, Rationalizable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Concept {
    Nash,
    Correlated,
    Rationalizable,
    Perfect,
    QuasiPerfect,
    Sequential,
}

impl Concept {
    pub const ALL: [Concept; 6] =
        [Concept::Nash, Concept::Correlated, Concept::Rationalizable, Concept::Perfect, Concept::QuasiPerfect, Concept::Sequential];

    pub fn name(self) -> &'static str {
        match self {
            Concept::Nash => "nash",
            Concept::Correlated => "correlated",
            Concept::Rationalizable => "rationalizable",
            Concept::Perfect => "perfect",
            Concept::QuasiPerfect => "quasi-perfect",
            Concept::Sequential => "sequential",
        }
    }

    pub fn is_strategic(self) -> bool {
        matches!(self, Concept::Nash | Concept::Correlated | Concept::Rationalizable)
    }
}

impl std::fmt::Display for Concept {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Concept {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Concept::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| crate::Error::Unknown { kind: "concept", name: s.to_string() })
    }
}

/// Which argument produced the verdict. `Epistemic` verdicts have also
/// been cross-checked against the direct route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    #[default]
    Direct,
    Epistemic,
}

/// One common-knowledge check run on the witness model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CkRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<NonstdNum>,
    pub pass: bool,
}

/// The model used by the epistemic route and what was checked on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpistemicWitness {
    pub model: ModelDoc,
    pub checks: Vec<CkRecord>,
}

/// Evidence for a passing verdict. Which fields are present depends on the
/// concept.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tremble: Option<ProfileDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<NonstdNum>,
    /// Standard part of the beliefs the tremble induces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub belief: Option<BeliefDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<LocalToGlobalCert>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<MixedDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<CorrelatedDoc>,
    /// Surviving strategy labels per player.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationalizable: Option<BTreeMap<usize, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epistemic: Option<EpistemicWitness>,
}

/// A profitable deviation: either moves at information sets or a whole
/// strategy label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeviationDoc {
    Strategy(String),
    Moves(BTreeMap<String, String>),
}

/// Where and how a candidate fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub player: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infoset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    /// The refuted action or strategy, when it is a single one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub played: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<DeviationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shortfall: Option<NonstdNum>,
    /// Elimination round, for strategies that are not rationalizable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
}

/// Outcome of a check. Exactly one of `certificate` and `counterexample`
/// is present, matching `pass`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub concept: Concept,
    pub pass: bool,
    pub route: Route,
    /// The epistemic model had no states, so its universal check was vacuous.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn passed(concept: Concept, route: Route, certificate: Certificate) -> Self {
        Verdict { concept, pass: true, route, degenerate: false, certificate: Some(certificate), counterexample: None }
    }

    fn failed(concept: Concept, route: Route, counterexample: Counterexample) -> Self {
        Verdict { concept, pass: false, route, degenerate: false, certificate: None, counterexample: Some(counterexample) }
    }

    /// Whether the certificate/counterexample presence matches `pass`.
    pub fn is_well_formed(&self) -> bool {
        self.pass == self.certificate.is_some() && self.pass != self.counterexample.is_some()
    }
}

fn disagreement(concept: Concept, direct: bool, epistemic: bool) -> crate::Error {
    crate::Error::RouteDisagreement(format!(
        "{concept}: direct route says {}, epistemic route says {}",
        if direct { "pass" } else { "fail" },
        if epistemic { "pass" } else { "fail" }
    ))
}
