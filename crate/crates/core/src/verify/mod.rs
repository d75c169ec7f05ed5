//! Verification harnesses: sweeps over prime fields for the full-torsion
//! theorem and its lemmas, product and abstract configurations for the
//! construction of fixed vectors, and the exact counterexample over ℚ.
//! Every violation carries a witness that [`replay`] re-executes.

mod abstract_suites;
mod counterexample;
mod replay;
mod report;
mod sweeps;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveError, CurveRecord, ElemRecord};
use crate::galmod::{GalmodError, ModuleRecord};
use crate::isogeny::{GraphOptions, IsogenyError};

pub use abstract_suites::{
    abstract_necessity_witness, construction_suite, cyclic_suite, lattice_suite, SuiteOptions,
};
pub use counterexample::reproduce_paper_counterexample;
pub use replay::{replay, ReplayOutcome};
pub use report::{claims, Caps, ClaimStatus, Parameters, Timing, VerificationReport, Violation, TOOL, VERSION};
pub use sweeps::{lemma_sweep, sweep, verify_theorem1, verify_theorem2_products, VerifyOptions};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid parameters: {0}")]
    Usage(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error(transparent)]
    Isogeny(#[from] IsogenyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Galmod(#[from] GalmodError),
}

impl VerifyError {
    /// Whether the failure is a resource cap rather than bad input.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            VerifyError::Capability(_)
                | VerifyError::Isogeny(IsogenyError::Capability(_))
                | VerifyError::Curve(CurveError::Capability(_))
                | VerifyError::Galmod(GalmodError::Capability(_))
        )
    }
}

/// An arm given by its source curve and a generator of its kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmWitness {
    pub source: CurveRecord,
    pub kernel_point: Option<[ElemRecord; 2]>,
}

/// Enough data to re-run exactly one failing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A target with at least two arms whose ℓ-torsion should be rational
    /// with trivial Frobenius action; lines are in the target's torsion basis.
    FullTorsion { ell: u64, target: CurveRecord, lines: Vec<Vec<u64>> },
    /// Two arms into one target whose dual lines should differ unless their
    /// sources are isomorphic.
    DistinctKernels { ell: u64, first: ArmWitness, second: ArmWitness },
    /// A hyperplane family with independent functionals: `dim H_J = N − #J`.
    Lattice { ell: u64, dim: usize, hyperplanes: Vec<Vec<Vec<u64>>> },
    /// A pointed configuration of order n on which the construction must
    /// succeed when the module is semisimple.
    Construction { config: ModuleRecord, n: usize },
    /// A pointed single-generator configuration of order n with fixed
    /// dimension at least n.
    FixedDimension { config: ModuleRecord, n: usize },
    /// The soundness audits of one arm.
    EngineArm { ell: u64, arm: ArmWitness },
    /// The pairing suite on one torsion basis.
    EngineBasis { ell: u64, curve: CurveRecord },
    Counterexample,
    Necessity,
}

impl Witness {
    pub fn claim(&self) -> &'static str {
        match self {
            Witness::FullTorsion { .. } => claims::FULL_TORSION,
            Witness::DistinctKernels { .. } => claims::DISTINCT_KERNELS,
            Witness::Lattice { .. } => claims::LATTICE_DIMS,
            Witness::Construction { .. } => claims::CONSTRUCTION,
            Witness::FixedDimension { .. } => claims::CYCLIC_LAW,
            Witness::EngineArm { .. } | Witness::EngineBasis { .. } => claims::ENGINE,
            Witness::Counterexample => claims::COUNTEREXAMPLE,
            Witness::Necessity => claims::NECESSITY,
        }
    }
}

fn graph_caps(opts: &GraphOptions) -> Caps {
    Caps {
        curve_limit: opts.curve_limit,
        closure_cap: crate::galmod::CLOSURE_CAP,
        exhaustive_cap: crate::galmod::EXHAUSTIVE_CAP,
        instance_cap: None,
    }
}

fn elapsed_ms(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}
