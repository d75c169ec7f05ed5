//! The order-2 pointed graph over ℚ built from `E₃(2, 1)`, whose target has
//! no rational 3-torsion.

use std::time::Instant;

use num_rational::BigRational;

use super::report::claims;
use super::{elapsed_ms, Caps, Parameters, VerificationReport, Witness};
use crate::curve::{Curve, Point};
use crate::field::{rational_roots, Field, Poly, RationalField};
use crate::isogeny::{curves_isomorphic, family_e3, velu_quotient};

fn coeff_strings(e: &Curve<RationalField>) -> Vec<String> {
    e.coeffs().iter().map(|c| c.to_string()).collect()
}

fn ints(q: &RationalField, v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| q.from_i64(x)).collect()
}

pub fn reproduce_paper_counterexample() -> VerificationReport {
    let start = Instant::now();
    let q = RationalField;
    let params = Parameters { field: "Q".into(), ell: Some(3), seed: 0, caps: Caps::default(), ..Parameters::default() };
    let mut report = VerificationReport::new("counterexample", params);
    report.declare(claims::COUNTEREXAMPLE);
    let mut failures: Vec<String> = Vec::new();
    let mut require = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    let (v, w) = (q.from_i64(2), q.from_i64(1));
    match family_e3(&q, &v, &w) {
        Ok((e3, p, e3p)) => {
            require(*e3.coeffs() == ints(&q, &[1, 0, 2, 0, 0])[..], "E₃(2, 1) coefficients are (1, 0, 2, 0, 0)");
            require(*e3p.coeffs() == ints(&q, &[1, 0, 2, -10, -30])[..], "E₃′(2, 1) coefficients are (1, 0, 2, −10, −30)");
            let order = e3.point_order(&p, 100);
            require(order == Some(3), "(0, 0) has order 3 on E₃");
            report.observe("source", coeff_strings(&e3));
            report.observe("kernel_point_order", order);
            match velu_quotient(&e3, &p) {
                Ok(phi) => {
                    report.observe("velu_codomain", coeff_strings(phi.codomain()));
                    let iso = curves_isomorphic(phi.codomain(), &e3p);
                    require(iso.is_some(), "E₃/⟨(0, 0)⟩ is isomorphic to E₃′");
                    if let Some(i) = iso {
                        report.observe("isomorphism_urst", [&i.u, &i.r, &i.s, &i.t].map(|c| c.to_string()));
                    }
                }
                Err(e) => require(false, &format!("Vélu quotient failed: {e}")),
            }
            let psi3 = e3p.torsion_x_polynomial(3);
            let expected = Poly::new(&q, ints(&q, &[-110, -348, -54, 1, 3]));
            require(psi3 == expected, "ψ₃(E₃′) = 3x⁴ + x³ − 54x² − 348x − 110");
            report.observe("psi3_target", psi3.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
            match rational_roots(&psi3) {
                Ok(roots) => {
                    let points: Vec<Point<BigRational>> = roots.iter().flat_map(|x| e3p.lift_x(x)).collect();
                    report.observe("psi3_rational_roots", roots.iter().map(|r| r.to_string()).collect::<Vec<_>>());
                    report.add_count("psi3_rational_roots", roots.len() as u64);
                    report.add_count("target_rational_3_torsion_points", points.len() as u64);
                    require(points.is_empty(), "E₃′ has no rational point of order 3");
                    // the source, by contrast, has the rational points ±(0, 0)
                    let src_roots = rational_roots(&e3.torsion_x_polynomial(3)).unwrap_or_default();
                    let src_points = src_roots.iter().flat_map(|x| e3.lift_x(x)).count();
                    report.add_count("source_rational_3_torsion_points", src_points as u64);
                    require(src_points >= 2, "E₃ has rational 3-torsion");
                }
                Err(e) => require(false, &format!("rational root search failed: {e}")),
            }
        }
        Err(e) => require(false, &format!("family construction failed: {e}")),
    }
    let ok = failures.is_empty();
    report.check(claims::COUNTEREXAMPLE, ok, || failures.join("; "), || Witness::Counterexample);
    report.observe(
        "consequence",
        "arms (φ, id) and (id, φ) from E₃ × E₃′ and E₃′ × E₃ into E₃′ × E₃′ form a pointed graph of order 2 \
         whose target has no rational 3-torsion point, so the construction of two independent rational \
         points must fail: the mod-3 Galois representation of E₃′ × E₃′ over ℚ is not semisimple. This is a \
         logical consequence of the checks above; no Galois group is computed.",
    );
    report.timing.elapsed_ms = elapsed_ms(start);
    report
}
