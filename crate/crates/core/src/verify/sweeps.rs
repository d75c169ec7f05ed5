//! Finite-field sweeps over pointed graphs.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use super::report::claims;
use super::{elapsed_ms, graph_caps, ArmWitness, ClaimStatus, Parameters, VerificationReport, VerifyError, Witness};
use crate::curve::Curve;
use crate::field::{is_prime, PrimeField};
use crate::galmod::{
    direct_sum, fixed_subspace, fixed_vectors_brute_force, is_semisimple, subspace_lattice, theorem2_construct,
    GaloisModule, GalmodError, ModuleRecord, PointedConfiguration,
};
use crate::isogeny::{build_pointed_graphs, curves_isomorphic, Arm, GraphBuild, GraphOptions};
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub graph: GraphOptions,
    /// Product configurations checked per (q, ℓ).
    pub product_cap: usize,
    /// Recorded in the report parameters only.
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { graph: GraphOptions::default(), product_cap: 500, threads: None }
    }
}

impl VerifyOptions {
    pub fn with_seed(seed: u64) -> Self {
        let mut o = Self::default();
        o.graph.seed = seed;
        o
    }
}

fn is_prime_power(q: u64) -> bool {
    (2..=q).find(|d| q.is_multiple_of(*d)).is_some_and(|p| {
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
        }
        r == 1
    })
}

pub(super) fn prime_field(q: u64) -> Result<PrimeField, VerifyError> {
    if !is_prime(q) {
        return Err(if q > 1 && is_prime_power(q) {
            VerifyError::Capability(format!("only prime fields are supported; {q} is a proper prime power"))
        } else {
            VerifyError::Usage(format!("q = {q} is not a prime power"))
        });
    }
    if q <= 3 {
        return Err(VerifyError::Usage(format!("the characteristic must exceed 3 (got q = {q})")));
    }
    Ok(PrimeField::new(q).expect("checked prime"))
}

fn check_ell(q: u64, ell: u64) -> Result<(), VerifyError> {
    if !is_prime(ell) {
        return Err(VerifyError::Usage(format!("ℓ = {ell} is not prime")));
    }
    if ell == q {
        return Err(VerifyError::Usage(format!("ℓ = {ell} equals the characteristic")));
    }
    Ok(())
}

fn parameters(q: Option<u64>, ell: Option<u64>, n: Option<usize>, opts: &VerifyOptions) -> Parameters {
    let mut caps = graph_caps(&opts.graph);
    caps.instance_cap = n.map(|_| opts.product_cap);
    Parameters {
        field: q.map_or_else(|| "F_q".into(), |q| format!("F_{q}")),
        q,
        ell,
        n,
        seed: opts.graph.seed,
        caps,
        threads: opts.threads,
        ..Parameters::default()
    }
}

fn arm_witness(arm: &Arm) -> ArmWitness {
    ArmWitness { source: arm.source.to_record(), kernel_point: arm.source.point_record(&arm.kernel_point) }
}

fn record_build(report: &mut VerificationReport, build: &GraphBuild) {
    report.add_count("curves_scanned", build.curves_scanned as u64);
    report.add_count("arms", build.arms_found as u64);
    report.add_count("graphs", build.graphs.len() as u64);
    report.add_count("graphs_order_ge_2", build.graphs.iter().filter(|g| g.order() >= 2).count() as u64);
    report.add_count("merged_arms", build.graphs.iter().map(|g| g.duplicates.len() as u64).sum());
    let t = &build.audit;
    for (k, v) in [
        ("audit.isogenies", t.isogenies),
        ("audit.kernel_size", t.kernel_size),
        ("audit.nonsingular_codomain", t.nonsingular_codomain),
        ("audit.homomorphism", t.homomorphism),
        ("audit.dual_quotient", t.dual_quotient),
        ("audit.line_invariance", t.line_invariance),
        ("audit.bases", t.bases),
        ("audit.pairing_suite", t.pairing_suite),
    ] {
        report.add_count(k, v as u64);
    }
}

fn analyze_engine(report: &mut VerificationReport, build: &GraphBuild) {
    report.declare(claims::ENGINE);
    if build.failures.is_empty() && build.audit.isogenies + build.audit.bases > 0 {
        report.check(claims::ENGINE, true, String::new, || Witness::Counterexample);
    }
    for f in &build.failures {
        let witness = match &f.kernel_point {
            Some(_) => Witness::EngineArm {
                ell: f.ell,
                arm: ArmWitness { source: f.curve.clone(), kernel_point: f.kernel_point.clone() },
            },
            None => Witness::EngineBasis { ell: f.ell, curve: f.curve.clone() },
        };
        report.check(claims::ENGINE, false, || format!("{}: {}", f.check, f.detail), || witness);
    }
}

/// Frobenius ≡ I, every line generator Frobenius-fixed, and ℓ² − 1 rational
/// points of order ℓ (counted directly).
pub(super) fn full_torsion_check(target: &Curve<PrimeField>, ell: u64, frobenius: &Matrix, lines: &[Subspace]) -> Result<(), String> {
    if !frobenius.is_identity() {
        return Err(format!("Frobenius matrix {frobenius:?} is not the identity mod {ell}"));
    }
    for l in lines {
        let v = &l.basis()[0];
        if frobenius.apply(v) != *v {
            return Err(format!("dual-line generator {v:?} is not Frobenius-fixed"));
        }
    }
    let points = target.points().map_err(|e| e.to_string())?;
    let order_ell = points.iter().filter(|p| target.has_prime_order(p, ell)).count() as u64;
    if order_ell != ell * ell - 1 {
        return Err(format!("{order_ell} rational points of order {ell}, expected {}", ell * ell - 1));
    }
    Ok(())
}

fn analyze_theorem1(report: &mut VerificationReport, build: &GraphBuild) {
    report.declare(claims::FULL_TORSION);
    for g in build.graphs.iter().filter(|g| g.order() >= 2) {
        let lines = g.hyperplanes();
        let res = full_torsion_check(&g.target, g.ell, &g.frobenius.matrix, &lines);
        report.check(
            claims::FULL_TORSION,
            res.is_ok(),
            || res.clone().unwrap_err(),
            || Witness::FullTorsion {
                ell: g.ell,
                target: g.target.to_record(),
                lines: lines.iter().map(|l| l.basis()[0].clone()).collect(),
            },
        );
    }
}

/// `dim H_J = N − #J` for every nonempty J.
pub(super) fn lattice_check(hyperplanes: &[Subspace]) -> Result<(), String> {
    let Some(first) = hyperplanes.first() else { return Ok(()) };
    let n = first.ambient();
    for (mask, h) in subspace_lattice(hyperplanes) {
        let expected = n.checked_sub(mask.count_ones() as usize);
        if Some(h.dim()) != expected {
            return Err(format!("dim H_J = {} for J = {mask:#b}, expected {expected:?}", h.dim()));
        }
    }
    Ok(())
}

pub(super) fn lattice_witness(hyperplanes: &[Subspace]) -> Witness {
    Witness::Lattice {
        ell: hyperplanes[0].ell(),
        dim: hyperplanes[0].ambient(),
        hyperplanes: hyperplanes.iter().map(|h| h.basis().to_vec()).collect(),
    }
}

fn analyze_lemmas(report: &mut VerificationReport, build: &GraphBuild) {
    report.declare(claims::DISTINCT_KERNELS);
    report.declare(claims::LATTICE_DIMS);
    for g in &build.graphs {
        if g.arms.len() >= 2 || !g.duplicates.is_empty() {
            for i in 0..g.arms.len() {
                for j in (i + 1)..g.arms.len() {
                    let (a, b) = (&g.arms[i], &g.arms[j]);
                    report.check(
                        claims::DISTINCT_KERNELS,
                        a.dual_line != b.dual_line,
                        || "two kept arms share a dual line".into(),
                        || Witness::DistinctKernels { ell: g.ell, first: arm_witness(a), second: arm_witness(b) },
                    );
                }
            }
            for (kept, dup) in &g.duplicates {
                let a = &g.arms[*kept];
                let same = curves_isomorphic(&a.source, &dup.source).is_some();
                report.check(
                    claims::DISTINCT_KERNELS,
                    same,
                    || "arms with equal dual lines have non-isomorphic sources".into(),
                    || Witness::DistinctKernels { ell: g.ell, first: arm_witness(a), second: arm_witness(dup) },
                );
            }
        }
        for i in 0..g.arms.len() {
            for j in (i + 1)..g.arms.len() {
                let pair = [g.arms[i].dual_line.clone(), g.arms[j].dual_line.clone()];
                let res = lattice_check(&pair);
                report.check(claims::LATTICE_DIMS, res.is_ok(), || res.clone().unwrap_err(), || lattice_witness(&pair));
            }
        }
    }
}

/// The outcome of the construction on a configuration record: verified,
/// violated, or not applicable when the module is not semisimple.
pub(super) fn construction_check(record: &ModuleRecord, n: usize) -> (ClaimStatus, String) {
    let cfg = match record.configuration() {
        Ok(c) => c,
        Err(e) => return (ClaimStatus::Violated, format!("configuration rejected: {e}")),
    };
    if cfg.order() != n {
        return (ClaimStatus::Violated, format!("order {} instead of {n}", cfg.order()));
    }
    match is_semisimple(&cfg.module) {
        Ok(true) => {}
        Ok(false) => return (ClaimStatus::NotApplicable, "module is not semisimple".into()),
        Err(e) => return (ClaimStatus::NotApplicable, e.to_string()),
    }
    match theorem2_construct(&cfg) {
        Ok(q) => match construction_output_check(&cfg, &q, n) {
            Ok(()) => (ClaimStatus::Verified, format!("{n} independent fixed vectors")),
            Err(e) => (ClaimStatus::Violated, e),
        },
        Err(e) => (ClaimStatus::Violated, e.to_string()),
    }
}

/// Output size, independence, and membership in the brute-force fixed set
/// (or direct fixedness when the space is too large to enumerate).
pub(super) fn construction_output_check(cfg: &PointedConfiguration, q: &[Vec<u64>], n: usize) -> Result<(), String> {
    let m = &cfg.module;
    if q.len() != n {
        return Err(format!("{} vectors returned, expected {n}", q.len()));
    }
    if n > 0 && Matrix::from_rows(m.ell(), q).rank() != n {
        return Err("returned vectors are dependent".into());
    }
    let size = (m.ell() as f64).powi(m.dim() as i32);
    if size <= 20_000.0 {
        let fixed: BTreeSet<Vec<u64>> = fixed_vectors_brute_force(m).into_iter().collect();
        if let Some(v) = q.iter().find(|v| !fixed.contains(*v)) {
            return Err(format!("{v:?} is not in the enumerated fixed set"));
        }
    } else if let Some(v) = q.iter().find(|v| m.generators().iter().any(|g| g.apply(v) != **v)) {
        return Err(format!("{v:?} is moved by a generator"));
    }
    Ok(())
}

pub(super) fn fixed_dimension_check(record: &ModuleRecord, n: usize) -> (ClaimStatus, String) {
    match record.configuration() {
        Ok(cfg) => {
            let d = fixed_subspace(&cfg.module).dim();
            if d >= n {
                (ClaimStatus::Verified, format!("fixed dimension {d} ≥ {n}"))
            } else {
                (ClaimStatus::Violated, format!("fixed dimension {d} < {n}"))
            }
        }
        Err(e) => (ClaimStatus::Violated, format!("configuration rejected: {e}")),
    }
}

/// Multisets of size n from 0..m in lexicographic order, at most `cap`.
fn multisets(m: usize, n: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 || n == 0 {
        return out;
    }
    let mut idx = vec![0usize; n];
    loop {
        if out.len() >= cap {
            break;
        }
        out.push(idx.clone());
        let Some(pos) = (0..n).rev().find(|&i| idx[i] + 1 < m) else { break };
        let v = idx[pos] + 1;
        for x in &mut idx[pos..] {
            *x = v;
        }
    }
    out
}

fn product_configuration(ell: u64, factors: &[&(Matrix, Subspace)]) -> Result<ModuleRecord, GalmodError> {
    let mut module: Option<GaloisModule> = None;
    for (frob, _) in factors {
        let m = GaloisModule::new(ell, 2, vec![frob.clone()])?;
        module = Some(match module {
            None => m,
            Some(acc) => crate::galmod::product_module(&acc, &m)?,
        });
    }
    let module = module.expect("at least one factor");
    let full = Subspace::full(ell, 2);
    let hyperplanes: Vec<Subspace> = (0..factors.len())
        .map(|i| {
            factors
                .iter()
                .enumerate()
                .map(|(j, (_, line))| if i == j { line.clone() } else { full.clone() })
                .reduce(|a, b| direct_sum(&a, &b))
                .unwrap()
        })
        .collect();
    Ok(ModuleRecord::from_module(&module, &hyperplanes))
}

fn analyze_products(report: &mut VerificationReport, build: &GraphBuild, n: usize, cap: usize) -> Result<(), VerifyError> {
    report.declare(claims::CONSTRUCTION);
    report.declare(claims::CYCLIC_LAW);
    let classes: BTreeSet<(Matrix, Subspace)> = build
        .graphs
        .iter()
        .flat_map(|g| g.arms.iter().map(|a| (g.frobenius.matrix.clone(), a.dual_line.clone())))
        .collect();
    let classes: Vec<_> = classes.into_iter().collect();
    report.add_count("products.arm_classes", classes.len() as u64);
    for combo in multisets(classes.len(), n, cap) {
        let factors: Vec<_> = combo.iter().map(|&i| &classes[i]).collect();
        let record = product_configuration(build.ell, &factors)?;
        report.add_count("products.checked", 1);
        let (status, detail) = construction_check(&record, n);
        match status {
            ClaimStatus::NotApplicable => report.add_count("products.not_semisimple", 1),
            s => {
                report.add_count("products.semisimple", 1);
                report.check(claims::CONSTRUCTION, s == ClaimStatus::Verified, || detail, || Witness::Construction {
                    config: record.clone(),
                    n,
                });
            }
        }
        let (status, detail) = fixed_dimension_check(&record, n);
        report.check(claims::CYCLIC_LAW, status == ClaimStatus::Verified, || detail, || Witness::FixedDimension {
            config: record.clone(),
            n,
        });
    }
    Ok(())
}

fn build(q: u64, ell: u64, opts: &VerifyOptions) -> Result<GraphBuild, VerifyError> {
    let f = prime_field(q)?;
    check_ell(q, ell)?;
    Ok(build_pointed_graphs(&f, ell, &opts.graph)?)
}

/// Every target with two arms of distinct dual lines has full rational
/// ℓ-torsion with trivial Frobenius action.
pub fn verify_theorem1(q: u64, ell: u64, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let b = build(q, ell, opts)?;
    let mut report = VerificationReport::new("theorem1", parameters(Some(q), Some(ell), None, opts));
    record_build(&mut report, &b);
    analyze_theorem1(&mut report, &b);
    analyze_engine(&mut report, &b);
    report.observe("q_mod_ell", q % ell);
    report.timing.elapsed_ms = elapsed_ms(start);
    Ok(report)
}

/// Products of n elliptic arms with the aligned Frobenius generator.
pub fn verify_theorem2_products(q: u64, ell: u64, n: usize, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    if !(1..=3).contains(&n) {
        return Err(VerifyError::Usage(format!("n = {n} must lie in 1..=3")));
    }
    let start = Instant::now();
    let b = build(q, ell, opts)?;
    let mut report = VerificationReport::new("theorem2", parameters(Some(q), Some(ell), Some(n), opts));
    record_build(&mut report, &b);
    analyze_products(&mut report, &b, n, opts.product_cap)?;
    analyze_engine(&mut report, &b);
    report.timing.elapsed_ms = elapsed_ms(start);
    Ok(report)
}

/// Distinct dual lines for distinct arms, and the lattice dimensions on
/// every pair of arms.
pub fn lemma_sweep(q: u64, ell: u64, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let b = build(q, ell, opts)?;
    let mut report = VerificationReport::new("lemmas", parameters(Some(q), Some(ell), None, opts));
    record_build(&mut report, &b);
    analyze_lemmas(&mut report, &b);
    analyze_engine(&mut report, &b);
    report.timing.elapsed_ms = elapsed_ms(start);
    Ok(report)
}

#[derive(Serialize)]
struct FieldSummary {
    q: u64,
    ell: u64,
    graphs: usize,
    order_two: usize,
}

/// Every check above for each ℓ in `ell_list` and each prime
/// `5 <= q < q_max` different from ℓ.
pub fn sweep(ell_list: &[u64], q_max: u64, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    if ell_list.is_empty() {
        return Err(VerifyError::Usage("empty ℓ list".into()));
    }
    for &ell in ell_list {
        if !is_prime(ell) {
            return Err(VerifyError::Usage(format!("ℓ = {ell} is not prime")));
        }
    }
    let mut params = parameters(None, None, Some(2), opts);
    params.field = "F_p".into();
    params.ell_list = Some(ell_list.to_vec());
    params.q_max = Some(q_max);
    let mut report = VerificationReport::new("sweep", params);
    for c in [claims::FULL_TORSION, claims::DISTINCT_KERNELS, claims::LATTICE_DIMS, claims::CONSTRUCTION, claims::CYCLIC_LAW, claims::ENGINE] {
        report.declare(c);
    }
    let mut summary = Vec::new();
    for &ell in ell_list {
        for q in (5..q_max).filter(|&q| is_prime(q) && q != ell) {
            let b = build(q, ell, opts)?;
            record_build(&mut report, &b);
            analyze_theorem1(&mut report, &b);
            analyze_lemmas(&mut report, &b);
            analyze_products(&mut report, &b, 2, opts.product_cap)?;
            analyze_engine(&mut report, &b);
            report.add_count("fields", 1);
            summary.push(FieldSummary {
                q,
                ell,
                graphs: b.graphs.len(),
                order_two: b.graphs.iter().filter(|g| g.order() >= 2).count(),
            });
        }
    }
    let with_order_two: Vec<&FieldSummary> = summary.iter().filter(|s| s.order_two > 0).collect();
    report.observe("fields_with_order_two_graphs", &with_order_two);
    report.observe(
        "order_two_only_when_q_is_1_mod_ell",
        with_order_two.iter().all(|s| s.q % s.ell == 1),
    );
    report.timing.elapsed_ms = elapsed_ms(start);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_enumeration() {
        assert_eq!(multisets(3, 2, 100), vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]);
        assert_eq!(multisets(3, 2, 2).len(), 2);
        assert!(multisets(0, 2, 10).is_empty());
        // C(m + n − 1, n)
        assert_eq!(multisets(5, 3, 1000).len(), 35);
    }

    #[test]
    fn field_validation() {
        assert!(matches!(prime_field(49), Err(VerifyError::Capability(_))));
        assert!(matches!(prime_field(12), Err(VerifyError::Usage(_))));
        assert!(matches!(prime_field(3), Err(VerifyError::Usage(_))));
        assert!(prime_field(101).is_ok());
        assert!(matches!(check_ell(7, 7), Err(VerifyError::Usage(_))));
        assert!(matches!(check_ell(7, 4), Err(VerifyError::Usage(_))));
    }

    #[test]
    fn seven_three_is_clean() {
        let r = verify_theorem1(7, 3, &VerifyOptions::default()).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.claims[claims::FULL_TORSION], ClaimStatus::Verified);
        assert_eq!(r.claims[claims::ENGINE], ClaimStatus::Verified);
    }

    #[test]
    fn no_order_two_without_q_one_mod_ell() {
        for (q, ell) in [(11u64, 3u64), (13, 5), (23, 7)] {
            let r = verify_theorem1(q, ell, &VerifyOptions::default()).unwrap();
            assert_eq!(r.counts["graphs_order_ge_2"], 0);
            assert_eq!(r.claims[claims::FULL_TORSION], ClaimStatus::NotApplicable);
        }
    }

    #[test]
    fn lemmas_and_products_are_clean() {
        let opts = VerifyOptions::default();
        let r = lemma_sweep(13, 3, &opts).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.claims[claims::LATTICE_DIMS], ClaimStatus::Verified);
        let r = verify_theorem2_products(13, 3, 2, &opts).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert!(r.counts["products.checked"] > 0);
        assert_eq!(r.claims[claims::CYCLIC_LAW], ClaimStatus::Verified);
        assert!(matches!(verify_theorem2_products(13, 3, 4, &opts), Err(VerifyError::Usage(_))));
    }

    #[test]
    fn reports_are_reproducible() {
        let opts = VerifyOptions::with_seed(9);
        let a = sweep(&[3], 20, &opts).unwrap();
        let b = sweep(&[3], 20, &opts).unwrap();
        assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    }
}
