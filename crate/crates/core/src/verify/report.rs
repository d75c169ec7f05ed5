use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Witness;

pub const TOOL: &str = "isogeny-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Claim identifiers.
pub mod claims {
    pub const FULL_TORSION: &str = "thm1-full-torsion";
    pub const DISTINCT_KERNELS: &str = "lem32-distinct-kernels";
    pub const LATTICE_DIMS: &str = "lem42-lattice-dims";
    pub const CONSTRUCTION: &str = "thm2-construction";
    pub const COUNTEREXAMPLE: &str = "counterexample-v2-w1";
    pub const NECESSITY: &str = "necessity-abstract";
    /// Fixed dimension ≥ n for single-generator pointed configurations.
    pub const CYCLIC_LAW: &str = "cyclic-law";
    /// Vélu, dual-kernel and pairing audits.
    pub const ENGINE: &str = "engine-soundness";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Verified,
    Violated,
    NotApplicable,
}

impl ClaimStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimStatus::Verified => "verified",
            ClaimStatus::Violated => "violated",
            ClaimStatus::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub claim: String,
    pub detail: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub curve_limit: usize,
    pub closure_cap: usize,
    pub exhaustive_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_cap: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell_list: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    pub seed: u64,
    pub caps: Caps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub kind: String,
    pub parameters: Parameters,
    pub counts: BTreeMap<String, u64>,
    pub claims: BTreeMap<String, ClaimStatus>,
    pub violations: Vec<Violation>,
    pub observations: BTreeMap<String, serde_json::Value>,
    pub timing: Timing,
}

impl VerificationReport {
    pub fn new(kind: &str, parameters: Parameters) -> Self {
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            kind: kind.into(),
            parameters,
            counts: BTreeMap::new(),
            claims: BTreeMap::new(),
            violations: Vec::new(),
            observations: BTreeMap::new(),
            timing: Timing::default(),
        }
    }

    /// Registers a claim as in scope; it stays not-applicable until checked.
    pub fn declare(&mut self, claim: &str) {
        self.claims.entry(claim.into()).or_insert(ClaimStatus::NotApplicable);
    }

    /// Records one check of `claim`; a failure adds a violation built from
    /// `witness`.
    pub fn check(&mut self, claim: &str, ok: bool, detail: impl FnOnce() -> String, witness: impl FnOnce() -> Witness) {
        *self.counts.entry(format!("checks.{claim}")).or_default() += 1;
        let status = self.claims.entry(claim.into()).or_insert(ClaimStatus::NotApplicable);
        if ok {
            if *status == ClaimStatus::NotApplicable {
                *status = ClaimStatus::Verified;
            }
        } else {
            *status = ClaimStatus::Violated;
            self.violations.push(Violation { claim: claim.into(), detail: detail(), witness: witness() });
        }
    }

    pub fn add_count(&mut self, key: &str, by: u64) {
        *self.counts.entry(key.into()).or_default() += by;
    }

    pub fn observe(&mut self, key: &str, value: impl Serialize) {
        self.observations.insert(key.into(), serde_json::to_value(value).expect("serializable observation"));
    }

    /// Folds another report's counts, claims and violations into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        for (k, v) in other.claims {
            let mine = self.claims.entry(k).or_insert(ClaimStatus::NotApplicable);
            *mine = match (*mine, v) {
                (ClaimStatus::Violated, _) | (_, ClaimStatus::Violated) => ClaimStatus::Violated,
                (ClaimStatus::Verified, _) | (_, ClaimStatus::Verified) => ClaimStatus::Verified,
                _ => ClaimStatus::NotApplicable,
            };
        }
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// The report with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self { timing: Timing::default(), ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}: {}", self.tool, self.version, self.kind);
        let _ = writeln!(s, "parameters: {}", serde_json::to_string(&self.parameters).unwrap_or_default());
        if !self.counts.is_empty() {
            let _ = writeln!(s, "counts:");
            for (k, v) in &self.counts {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        let _ = writeln!(s, "claims:");
        for (k, v) in &self.claims {
            let _ = writeln!(s, "  {k}: {}", v.as_str());
        }
        if !self.observations.is_empty() {
            let _ = writeln!(s, "observations:");
            for (k, v) in &self.observations {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        let _ = writeln!(s, "violations: {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(s, "  [{}] {}", v.claim, v.detail);
        }
        let _ = writeln!(s, "elapsed: {} ms", self.timing.elapsed_ms);
        s
    }
}
