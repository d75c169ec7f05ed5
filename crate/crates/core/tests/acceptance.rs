//! Acceptance criteria 1 to 7, one PASS/FAIL line each. Runs as a plain
//! binary so the lines are printed even when everything passes.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::{Integer, Roots};
use serde_json::Value;

use isogeny_lab::verify::{
    abstract_necessity_witness, claims, construction_suite, cyclic_suite, lattice_suite, reproduce_paper_counterexample,
    sweep, ClaimStatus, SuiteOptions, VerificationReport, VerifyOptions,
};

const COUNTEREXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(600);
const SUITE_INSTANCES: usize = 1000;
const SWEEP_ELLS: [u64; 3] = [3, 5, 7];
const SWEEP_Q_MAX: u64 = 200;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn clean(&mut self, r: &VerificationReport) {
        self.require(r.is_clean(), format!("{} violations in {}", r.violations.len(), r.kind));
        for v in r.violations.iter().take(3) {
            self.failures.push(format!("[{}] {}", v.claim, v.detail));
        }
    }

    fn verified(&mut self, r: &VerificationReport, claim: &str) {
        let s = r.claims.get(claim).copied();
        self.require(s == Some(ClaimStatus::Verified), format!("{claim} is {s:?}"));
    }
}

fn count(r: &VerificationReport, key: &str) -> u64 {
    r.counts.get(key).copied().unwrap_or(0)
}

/// Integer form of a rational point test on `y² + xy + 2y = x³ − 10x − 30`:
/// the rational roots of `3x⁴ + x³ − 54x² − 348x − 110` by the rational root
/// theorem, and whether any of them lifts to a rational y.
fn target_three_torsion_oracle() -> (Vec<(i64, i64)>, usize) {
    let divisors = |n: i64| (1..=n).filter(move |d| n % d == 0);
    let mut roots = Vec::new();
    for num in divisors(110) {
        for den in divisors(3) {
            for num in [num, -num] {
                if num.gcd(&den) != 1 {
                    continue;
                }
                let (d, e) = (num as i128, den as i128);
                let v = 3 * d.pow(4) + d.pow(3) * e - 54 * d * d * e * e - 348 * d * e.pow(3) - 110 * e.pow(4);
                if v == 0 {
                    roots.push((num, den));
                }
            }
        }
    }
    let mut lifts = 0;
    for &(d, e) in &roots {
        // y is rational iff (x + 2)² + 4(x³ − 10x − 30) is a rational square, i.e. iff
        // e⁴ times it is an integer square
        let (d, e) = (d as i128, e as i128);
        let disc_e4 = (d + 2 * e).pow(2) * e * e + 4 * (d.pow(3) * e - 10 * d * e.pow(3) - 30 * e.pow(4));
        if disc_e4 >= 0 && disc_e4.sqrt().pow(2) == disc_e4 {
            lifts += 2;
        }
    }
    (roots, lifts)
}

fn criterion1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let r = reproduce_paper_counterexample();
    let took = start.elapsed();
    o.clean(&r);
    o.verified(&r, claims::COUNTEREXAMPLE);
    o.require(r.observations["kernel_point_order"] == 3, "(0, 0) does not have order 3");
    o.require(
        r.observations["velu_codomain"] == serde_json::json!(["1", "0", "2", "-10", "-30"]),
        "Vélu codomain differs from y² + xy + 2y = x³ − 10x − 30",
    );
    o.require(count(&r, "source_rational_3_torsion_points") == 2, "source lacks its two rational 3-torsion points");
    let (roots, lifts) = target_three_torsion_oracle();
    o.require(roots == vec![(-1, 3)], format!("oracle rational roots {roots:?}"));
    o.require(lifts == 0, "oracle found a rational 3-torsion point on the target");
    o.require(count(&r, "target_rational_3_torsion_points") == lifts as u64, "engine and oracle disagree");
    o.require(took < COUNTEREXAMPLE_BUDGET, format!("runtime {took:?} ≥ {COUNTEREXAMPLE_BUDGET:?}"));
    o.note(format!("runtime {:.1} ms < {} ms", took.as_secs_f64() * 1e3, COUNTEREXAMPLE_BUDGET.as_millis()));
    o
}

fn run_sweep() -> (VerificationReport, Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("single-thread pool");
    let start = Instant::now();
    let opts = VerifyOptions { threads: Some(1), ..VerifyOptions::default() };
    let r = pool.install(|| sweep(&SWEEP_ELLS, SWEEP_Q_MAX, &opts)).expect("sweep runs");
    (r, start.elapsed())
}

fn criterion2(r: &VerificationReport, took: Duration) -> Outcome {
    let mut o = Outcome::new();
    o.clean(r);
    o.verified(r, claims::FULL_TORSION);
    let fields: Vec<Value> = r.observations["fields_with_order_two_graphs"].as_array().cloned().unwrap_or_default();
    let mut found = 0;
    for f in &fields {
        let (q, ell) = (f["q"].as_u64().unwrap(), f["ell"].as_u64().unwrap());
        // full rational ℓ-torsion forces μ_ℓ ⊂ F_q through the Weil pairing
        o.require(q % ell == 1, format!("order-2 graph over F_{q} for ℓ = {ell} with q ≢ 1"));
        found += f["order_two"].as_u64().unwrap();
    }
    o.require(found > 0, "no order-2 graph found anywhere");
    let expected_fields: u64 = SWEEP_ELLS
        .iter()
        .map(|&l| (5..SWEEP_Q_MAX).filter(|&q| is_prime(q) && q != l).count() as u64)
        .sum();
    o.require(count(r, "fields") == expected_fields, format!("{} fields swept, expected {expected_fields}", count(r, "fields")));
    o.require(took < SWEEP_BUDGET, format!("runtime {took:?} ≥ {SWEEP_BUDGET:?}"));
    o.note(format!(
        "{} fields, {} order-2 graphs in {} (q, ℓ) pairs, runtime {:.1} s < {} s on 1 thread",
        count(r, "fields"),
        found,
        fields.len(),
        took.as_secs_f64(),
        SWEEP_BUDGET.as_secs()
    ));
    o
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn suite_opts() -> SuiteOptions {
    SuiteOptions { instances: SUITE_INSTANCES, seed: 2024, threads: None }
}

fn criterion3() -> Outcome {
    let mut o = Outcome::new();
    let r = lattice_suite(&suite_opts()).expect("lattice suite runs");
    o.clean(&r);
    o.verified(&r, claims::LATTICE_DIMS);
    o.require(count(&r, "instances") == SUITE_INSTANCES as u64, "instance count");
    o.require(count(&r, "brute_force_instances") > 0, "no instance was small enough to enumerate");
    o.note(format!(
        "{} families, {} subsets, {} enumerated, tolerance 0",
        count(&r, "instances"),
        count(&r, "subsets"),
        count(&r, "brute_force_instances")
    ));
    o
}

fn criterion4() -> Outcome {
    let mut o = Outcome::new();
    let r = construction_suite(&suite_opts()).expect("construction suite runs");
    o.clean(&r);
    o.verified(&r, claims::CONSTRUCTION);
    o.require(count(&r, "instances") == SUITE_INSTANCES as u64, "instance count");
    let per: Vec<u64> = (1..=4).map(|n| count(&r, &format!("order.{n}"))).collect();
    o.require(per.iter().all(|&c| c > 0), format!("orders not all covered: {per:?}"));
    o.note(format!("{} configurations, by order {per:?}, failures 0", count(&r, "instances")));
    o
}

fn criterion5() -> Outcome {
    let mut o = Outcome::new();
    let r = abstract_necessity_witness();
    o.clean(&r);
    o.verified(&r, claims::NECESSITY);
    o.require(count(&r, "graph_order") == 2, "order ≠ 2");
    o.require(count(&r, "fixed_vectors") == 1, "fixed space is not {0}");
    o.require(count(&r, "vectors_enumerated") == 81, "F₃⁴ not fully enumerated");
    o.require(r.observations["semisimple"] == Value::Bool(false), "module reported semisimple");
    o.note("pointed, order 2, not semisimple, 1 of 81 vectors fixed");
    o
}

fn criterion6(sweep: &VerificationReport) -> Outcome {
    let mut o = Outcome::new();
    let r = cyclic_suite(&suite_opts()).expect("cyclic suite runs");
    o.clean(&r);
    o.verified(&r, claims::CYCLIC_LAW);
    o.require(count(&r, "not_semisimple") > 0, "no non-semisimple cyclic instance drawn");
    o.verified(sweep, claims::CYCLIC_LAW);
    o.verified(sweep, claims::CONSTRUCTION);
    o.require(count(sweep, "products.not_semisimple") > 0, "no non-semisimple product instance in the sweep");
    o.note(format!(
        "{} cyclic configurations ({} not semisimple); sweep products {} checked, {} not semisimple, 0 violations",
        count(&r, "instances"),
        count(&r, "not_semisimple"),
        count(sweep, "products.checked"),
        count(sweep, "products.not_semisimple")
    ));
    o
}

fn criterion7(r: &VerificationReport) -> Outcome {
    let mut o = Outcome::new();
    o.verified(r, claims::ENGINE);
    let isogenies = count(r, "audit.isogenies");
    o.require(isogenies > 0, "no isogeny audited");
    for key in ["audit.homomorphism", "audit.kernel_size", "audit.nonsingular_codomain", "audit.dual_quotient"] {
        o.require(count(r, key) == isogenies, format!("{key} = {} of {isogenies}", count(r, key)));
    }
    let bases = count(r, "audit.bases");
    o.require(bases > 0 && count(r, "audit.pairing_suite") == bases, "pairing suite did not pass on every basis");
    o.note(format!("{isogenies} isogenies and {bases} torsion bases audited, all passing"));
    o
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |n: usize, name: &str, o: Outcome| {
        let ok = o.failures.is_empty();
        all_ok &= ok;
        println!("criterion {n} {}: {name}: {}", if ok { "PASS" } else { "FAIL" }, o.notes.join("; "));
        for f in &o.failures {
            println!("    {f}");
        }
    };
    report(1, "counterexample over Q", criterion1());
    let (sweep_report, took) = run_sweep();
    report(2, "full rational torsion sweep", criterion2(&sweep_report, took));
    report(3, "lattice dimensions", criterion3());
    report(4, "fixed-vector construction", criterion4());
    report(5, "necessity witness", criterion5());
    report(6, "single-generator law", criterion6(&sweep_report));
    report(7, "isogeny engine soundness", criterion7(&sweep_report));
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
