//! Re-execution of a single check from its witness.

use serde::{Deserialize, Serialize};

use super::report::claims;
use super::sweeps::{construction_check, fixed_dimension_check, full_torsion_check, lattice_check, prime_field};
use super::{abstract_necessity_witness, reproduce_paper_counterexample, ArmWitness, ClaimStatus, VerifyError, Witness};
use crate::curve::{frobenius_matrix, torsion_basis, Curve, Point};
use crate::field::PrimeField;
use crate::galmod::graph_order;
use crate::isogeny::{audit_arm, audit_basis, curves_isomorphic, locate_arm};
use crate::linalg::Subspace;

/// Homomorphism samples used when an engine witness is replayed.
const REPLAY_SAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub claim: String,
    pub status: ClaimStatus,
    pub detail: String,
}

fn outcome(claim: &str, res: Result<String, String>) -> ReplayOutcome {
    match res {
        Ok(detail) => ReplayOutcome { claim: claim.into(), status: ClaimStatus::Verified, detail },
        Err(detail) => ReplayOutcome { claim: claim.into(), status: ClaimStatus::Violated, detail },
    }
}

fn usage(e: impl std::fmt::Display) -> VerifyError {
    VerifyError::Usage(format!("malformed witness: {e}"))
}

fn prime_curve(r: &crate::curve::CurveRecord) -> Result<Curve<PrimeField>, VerifyError> {
    if r.k != 1 {
        return Err(usage("curves must be defined over a prime field"));
    }
    prime_field(r.p)?;
    Curve::from_record(r).map_err(usage)
}

fn arm(a: &ArmWitness) -> Result<(Curve<PrimeField>, Point<u64>), VerifyError> {
    let e = prime_curve(&a.source)?;
    let p = e.parse_point(&a.kernel_point).map_err(usage)?;
    Ok((e, p))
}

fn lines(ell: u64, dim: usize, vs: &[Vec<u64>]) -> Result<Vec<Subspace>, VerifyError> {
    vs.iter()
        .map(|v| {
            if v.len() != dim || v.iter().all(|&x| x % ell == 0) {
                return Err(usage("line generators must be nonzero vectors of the right length"));
            }
            Ok(Subspace::span(ell, dim, std::slice::from_ref(v)))
        })
        .collect()
}

/// Re-runs the check named by the witness. Errors are reserved for witnesses
/// that cannot be interpreted.
pub fn replay(w: &Witness) -> Result<ReplayOutcome, VerifyError> {
    let claim = w.claim();
    Ok(match w {
        Witness::FullTorsion { ell, target, lines: ls } => {
            let t = prime_curve(target)?;
            let hs = lines(*ell, 2, ls)?;
            if graph_order(&hs) < 2 {
                return Ok(ReplayOutcome {
                    claim: claim.into(),
                    status: ClaimStatus::NotApplicable,
                    detail: "fewer than two independent dual lines".into(),
                });
            }
            let basis = torsion_basis(&t, *ell)?;
            let frob = frobenius_matrix(&t, &basis)?;
            outcome(claim, full_torsion_check(&t, *ell, &frob.matrix, &hs).map(|()| "full rational ℓ-torsion".into()))
        }
        Witness::DistinctKernels { ell, first, second } => {
            let (e1, p1) = arm(first)?;
            let (e2, p2) = arm(second)?;
            if !e1.has_prime_order(&p1, *ell) || !e2.has_prime_order(&p2, *ell) {
                return Err(usage("kernel points must have order ℓ"));
            }
            let a = locate_arm(&e1, &p1)?;
            let b = locate_arm(&e2, &p2)?;
            if a.target != b.target {
                return Ok(ReplayOutcome {
                    claim: claim.into(),
                    status: ClaimStatus::NotApplicable,
                    detail: "arms have different targets".into(),
                });
            }
            let same_line = a.dual_line == b.dual_line;
            let isomorphic = curves_isomorphic(&e1, &e2).is_some();
            outcome(
                claim,
                if same_line && !isomorphic {
                    Err("equal dual lines for arms with non-isomorphic sources".into())
                } else {
                    Ok(format!("equal lines: {same_line}, isomorphic sources: {isomorphic}"))
                },
            )
        }
        Witness::Lattice { ell, dim, hyperplanes } => {
            if crate::field::PrimeField::new(*ell).is_err() {
                return Err(usage(format!("ℓ = {ell} is not prime")));
            }
            let hs: Vec<Subspace> = hyperplanes
                .iter()
                .map(|basis| {
                    if basis.iter().any(|v| v.len() != *dim) {
                        return Err(usage("basis vectors must have length dim"));
                    }
                    let h = Subspace::span(*ell, *dim, basis);
                    if h.dim() + 1 != *dim {
                        return Err(usage("each family member must be a hyperplane"));
                    }
                    Ok(h)
                })
                .collect::<Result<_, _>>()?;
            if hs.is_empty() {
                return Err(usage("empty hyperplane family"));
            }
            outcome(claim, lattice_check(&hs).map(|()| "dim H_J = N − #J for every J".into()))
        }
        Witness::Construction { config, n } => {
            let (status, detail) = construction_check(config, *n);
            ReplayOutcome { claim: claim.into(), status, detail }
        }
        Witness::FixedDimension { config, n } => {
            let (status, detail) = fixed_dimension_check(config, *n);
            ReplayOutcome { claim: claim.into(), status, detail }
        }
        Witness::EngineArm { ell, arm: a } => {
            let (e, p) = arm(a)?;
            if !e.has_prime_order(&p, *ell) {
                return Err(usage("kernel point must have order ℓ"));
            }
            let (_, failures) = audit_arm(&e, &p, REPLAY_SAMPLES, 0)?;
            outcome(
                claim,
                if failures.is_empty() {
                    Ok("all isogeny audits pass".into())
                } else {
                    Err(failures.iter().map(|f| format!("{}: {}", f.check, f.detail)).collect::<Vec<_>>().join("; "))
                },
            )
        }
        Witness::EngineBasis { ell, curve } => {
            let e = prime_curve(curve)?;
            let (_, failures) = audit_basis(&e, *ell)?;
            outcome(
                claim,
                if failures.is_empty() { Ok("pairing suite passes".into()) } else { Err(failures[0].detail.clone()) },
            )
        }
        Witness::Counterexample => {
            let r = reproduce_paper_counterexample();
            let status = r.claims.get(claims::COUNTEREXAMPLE).copied().unwrap_or(ClaimStatus::Violated);
            ReplayOutcome { claim: claim.into(), status, detail: r.violations.first().map(|v| v.detail.clone()).unwrap_or_default() }
        }
        Witness::Necessity => {
            let r = abstract_necessity_witness();
            let status = r.claims.get(claims::NECESSITY).copied().unwrap_or(ClaimStatus::Violated);
            ReplayOutcome { claim: claim.into(), status, detail: r.violations.first().map(|v| v.detail.clone()).unwrap_or_default() }
        }
    })
}
