//! Randomized module-level suites and the non-semisimple witness.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::claims;
use super::sweeps::{construction_output_check, lattice_check, lattice_witness};
use super::{elapsed_ms, Caps, Parameters, VerificationReport, Witness};
use crate::galmod::{
    fixed_subspace, fixed_vectors_brute_force, graph_order, is_semisimple, necessity_witness, pointedness_check,
    random_cyclic_pointed, random_independent_hyperplanes, random_semisimple_pointed, theorem2_construct,
    GalmodError, ModuleRecord, CLOSURE_CAP, EXHAUSTIVE_CAP,
};
use crate::linalg::{all_vectors, Matrix};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub instances: usize,
    pub seed: u64,
    /// Recorded in the report parameters only.
    pub threads: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { instances: 1000, seed: 0, threads: None }
    }
}

const ELLS: [u64; 3] = [2, 3, 5];

fn parameters(opts: &SuiteOptions) -> Parameters {
    Parameters {
        field: "F_l (abstract)".into(),
        instances: Some(opts.instances),
        seed: opts.seed,
        caps: Caps { curve_limit: 0, closure_cap: CLOSURE_CAP, exhaustive_cap: EXHAUSTIVE_CAP, instance_cap: None },
        threads: opts.threads,
        ..Parameters::default()
    }
}

/// An independent stream per instance, so results do not depend on
/// scheduling.
fn instance_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

struct Outcome {
    /// (claim, status, detail, witness)
    checks: Vec<(&'static str, bool, String, Witness)>,
    counts: Vec<(String, u64)>,
}

fn run_suite(
    kind: &str,
    claim_ids: &[&str],
    opts: &SuiteOptions,
    f: impl Fn(&mut ChaCha8Rng) -> Result<Outcome, GalmodError> + Sync,
) -> Result<VerificationReport, GalmodError> {
    let start = Instant::now();
    let outcomes: Vec<Result<Outcome, GalmodError>> =
        (0..opts.instances).into_par_iter().map(|i| f(&mut instance_rng(opts.seed, i))).collect();
    let mut report = VerificationReport::new(kind, parameters(opts));
    for c in claim_ids {
        report.declare(c);
    }
    for o in outcomes {
        let o = o?;
        report.add_count("instances", 1);
        for (k, v) in o.counts {
            report.add_count(&k, v);
        }
        for (claim, ok, detail, witness) in o.checks {
            report.check(claim, ok, || detail, || witness);
        }
    }
    report.timing.elapsed_ms = elapsed_ms(start);
    Ok(report)
}

fn dot(ell: u64, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (x, y)| (acc + x * y) % ell)
}

/// Random families of independent hyperplanes satisfy `dim H_J = 2g − #J`;
/// when ℓ^{2g} ≤ 3⁶ each `|H_J|` is also counted by enumerating vectors
/// against the defining functionals.
pub fn lattice_suite(opts: &SuiteOptions) -> Result<VerificationReport, GalmodError> {
    run_suite("lattice-suite", &[claims::LATTICE_DIMS], opts, |rng| {
        let ell = ELLS[rng.gen_range(0..3)];
        let g = rng.gen_range(1..=3usize);
        let dim = 2 * g;
        let n = rng.gen_range(1..=dim);
        let hs = random_independent_hyperplanes(ell, dim, n, rng);
        let mut checks = Vec::new();
        let echelon = lattice_check(&hs).and_then(|()| {
            (graph_order(&hs) == n).then_some(()).ok_or_else(|| format!("graph order {} ≠ {n}", graph_order(&hs)))
        });
        let mut counts = vec![("subsets".to_string(), (1u64 << n) - 1)];
        let mut result = echelon;
        if result.is_ok() && (ell as usize).pow(dim as u32) <= EXHAUSTIVE_CAP {
            counts.push(("brute_force_instances".into(), 1));
            let functionals: Vec<Vec<u64>> = hs.iter().map(|h| h.annihilator().remove(0)).collect();
            let mut sizes = vec![0u64; 1 << n];
            for v in all_vectors(ell, dim) {
                let zero_mask = (0..n).filter(|&i| dot(ell, &functionals[i], &v) == 0).fold(0usize, |m, i| m | 1 << i);
                // v lies in H_J exactly for the subsets J of zero_mask
                let mut sub = zero_mask;
                loop {
                    sizes[sub] += 1;
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & zero_mask;
                }
            }
            for (mask, &size) in sizes.iter().enumerate() {
                let expected = ell.pow((dim - mask.count_ones() as usize) as u32);
                if size != expected {
                    result = Err(format!("|H_J| = {size} for J = {mask:#b}, expected {expected}"));
                    break;
                }
            }
        }
        let ok = result.is_ok();
        checks.push((claims::LATTICE_DIMS, ok, result.err().unwrap_or_default(), lattice_witness(&hs)));
        Ok(Outcome { checks, counts })
    })
}

/// Random semisimple pointed configurations of order n ∈ 1..=4: the
/// construction returns n independent vectors inside the enumerated fixed
/// set.
pub fn construction_suite(opts: &SuiteOptions) -> Result<VerificationReport, GalmodError> {
    run_suite("construction-suite", &[claims::CONSTRUCTION], opts, |rng| {
        let ell = ELLS[rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4usize);
        let g = rng.gen_range(n.div_ceil(2)..=3);
        let cfg = random_semisimple_pointed(ell, g, n, rng)?;
        let record = ModuleRecord::from_configuration(&cfg);
        let result = match theorem2_construct(&cfg) {
            Ok(q) => construction_output_check(&cfg, &q, n),
            Err(e) => Err(e.to_string()),
        };
        let ok = result.is_ok();
        Ok(Outcome {
            checks: vec![(claims::CONSTRUCTION, ok, result.err().unwrap_or_default(), Witness::Construction { config: record, n })],
            counts: vec![(format!("order.{n}"), 1)],
        })
    })
}

/// Random single-generator pointed configurations of order n have fixed
/// dimension at least n, with `rank(g − I) ≤ 2g − n` and the enumerated
/// fixed set of size `ℓ^{dim}` agreeing.
pub fn cyclic_suite(opts: &SuiteOptions) -> Result<VerificationReport, GalmodError> {
    run_suite("cyclic-suite", &[claims::CYCLIC_LAW, claims::CONSTRUCTION], opts, |rng| {
        let ell = ELLS[rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4usize);
        let g = rng.gen_range(n.div_ceil(2)..=3);
        let cfg = random_cyclic_pointed(ell, g, n, rng)?;
        let record = ModuleRecord::from_configuration(&cfg);
        let m = &cfg.module;
        let gen = &m.generators()[0];
        let fixed = fixed_subspace(m);
        let rank = gen.sub(&Matrix::identity(ell, m.dim())).rank();
        let mut result = Ok(());
        if fixed.dim() < n {
            result = Err(format!("fixed dimension {} < {n}", fixed.dim()));
        } else if rank > m.dim() - n {
            result = Err(format!("rank(g − I) = {rank} > {}", m.dim() - n));
        } else if (ell as f64).powi(m.dim() as i32) <= 20_000.0 {
            let count = fixed_vectors_brute_force(m).len() as u64;
            if count != ell.pow(fixed.dim() as u32) {
                result = Err(format!("{count} fixed vectors enumerated, expected ℓ^{}", fixed.dim()));
            }
        }
        let ok = result.is_ok();
        let mut checks = vec![(
            claims::CYCLIC_LAW,
            ok,
            result.err().unwrap_or_default(),
            Witness::FixedDimension { config: record.clone(), n },
        )];
        let mut counts = Vec::new();
        // the construction itself applies only to the semisimple instances
        match is_semisimple(m)? {
            true => {
                counts.push(("semisimple".to_string(), 1));
                let res = theorem2_construct(&cfg).map_err(|e| e.to_string()).and_then(|q| construction_output_check(&cfg, &q, n));
                let ok = res.is_ok();
                checks.push((claims::CONSTRUCTION, ok, res.err().unwrap_or_default(), Witness::Construction { config: record, n }));
            }
            false => counts.push(("not_semisimple".to_string(), 1)),
        }
        Ok(Outcome { checks, counts })
    })
}

/// `M ⊕ M` over F₃ with two coordinate hyperplanes: pointed, of order 2,
/// not semisimple, with no nonzero fixed vector.
pub fn abstract_necessity_witness() -> VerificationReport {
    let start = Instant::now();
    let w = necessity_witness();
    let params = Parameters {
        field: "F_3 (abstract)".into(),
        ell: Some(3),
        n: Some(2),
        seed: 0,
        caps: Caps { curve_limit: 0, closure_cap: CLOSURE_CAP, exhaustive_cap: EXHAUSTIVE_CAP, instance_cap: None },
        ..Parameters::default()
    };
    let mut report = VerificationReport::new("necessity", params);
    report.declare(claims::NECESSITY);
    let mut failures = Vec::new();
    let pointed = w.hyperplanes.iter().all(|h| pointedness_check(&w.module, h).unwrap_or(false));
    if !pointed {
        failures.push("hyperplanes are not pointed".to_string());
    }
    let order = w.order();
    if order != 2 {
        failures.push(format!("order {order} ≠ 2"));
    }
    let semisimple = is_semisimple(&w.module);
    if semisimple != Ok(false) {
        failures.push(format!("semisimplicity test returned {semisimple:?}"));
    }
    let fixed = fixed_subspace(&w.module);
    let enumerated = fixed_vectors_brute_force(&w.module);
    if !fixed.is_zero() || enumerated != vec![vec![0; 4]] {
        failures.push(format!("fixed space has dimension {}", fixed.dim()));
    }
    let construct = theorem2_construct(&w);
    if !matches!(construct, Err(GalmodError::NotSemisimple(_))) {
        failures.push(format!("construction returned {construct:?}"));
    }
    report.add_count("vectors_enumerated", all_vectors(3, 4).count() as u64);
    report.add_count("fixed_vectors", enumerated.len() as u64);
    report.add_count("graph_order", order as u64);
    report.observe("module", ModuleRecord::from_configuration(&w));
    report.observe("semisimple", semisimple.ok());
    report.observe("fixed_dimension", fixed.dim());
    let ok = failures.is_empty();
    report.check(claims::NECESSITY, ok, || failures.join("; "), || Witness::Necessity);
    report.timing.elapsed_ms = elapsed_ms(start);
    report
}
