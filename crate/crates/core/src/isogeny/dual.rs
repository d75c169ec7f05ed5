//! The line `φ(E[ℓ])` in the codomain's ℓ-torsion, i.e. the kernel of the
//! dual isogeny.

use super::{CurveIsomorphism, Isogeny, IsogenyError};
use crate::curve::TorsionBasis;
use crate::field::{ExtField, Field, Poly, PrimeField};
use crate::linalg::{Matrix, Subspace};

/// The ℓ + 1 lines of F_ℓ², as `span{(1, c)}` for `c = 0..ℓ` then `span{(0, 1)}`.
pub fn all_lines(ell: u64) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = (0..ell).map(|c| Subspace::span(ell, 2, &[vec![1, c]])).collect();
    out.push(Subspace::span(ell, 2, &[vec![0, 1]]));
    out
}

/// Lines mapped onto themselves by `m`.
pub fn stable_lines(m: &Matrix) -> Vec<Subspace> {
    all_lines(m.ell()).into_iter().filter(|l| l.image(m) == *l).collect()
}

/// `φ(E[ℓ])` expressed in a basis of the codomain's ℓ-torsion.
pub fn dual_kernel(phi: &Isogeny<PrimeField>, target_basis: &TorsionBasis) -> Result<Subspace, IsogenyError> {
    if phi.codomain() != target_basis.base_curve() {
        return Err(IsogenyError::Internal("basis does not belong to the codomain".into()));
    }
    let f = phi.domain().field();
    dual_line(phi, &CurveIsomorphism::identity(f), target_basis, &all_lines(phi.degree()))
}

/// `ι(φ(E[ℓ]))` for `ι: codomain → T` and a basis of `T[ℓ]`, searched among
/// `candidates`. A line `⟨R⟩` is the image exactly when some x-coordinate of
/// the domain's ℓ-torsion maps to `x(ι⁻¹R)`, i.e. when
/// `gcd(x_num − x(ι⁻¹R)·x_den, ψ_ℓ)` is nontrivial.
pub(crate) fn dual_line(
    phi: &Isogeny<PrimeField>,
    iso: &CurveIsomorphism<u64>,
    basis: &TorsionBasis,
    candidates: &[Subspace],
) -> Result<Subspace, IsogenyError> {
    let ell = phi.degree();
    if basis.ell() != ell {
        return Err(IsogenyError::Internal("basis is for a different ℓ".into()));
    }
    let k: &ExtField = basis.field();
    let lift = |p: &Poly<u64>| p.map(k, |c| k.embed_base(*c));
    let psi = lift(&phi.domain().torsion_x_polynomial(ell));
    let (num, den) = phi.x_map();
    let (num, den) = (lift(num), lift(den));
    let u = k.embed_base(iso.u);
    let r = k.embed_base(iso.r);
    let mut hits = Vec::new();
    for line in candidates {
        let gen = basis.point_of(&line.basis()[0]);
        let Some(x_t) = gen.x() else { continue };
        let x_src = k.add(&k.mul(&k.square(&u), x_t), &r);
        let g = num.sub(&den.scale(&x_src, k), k);
        if g.gcd(&psi, k).degree().is_some_and(|d| d > 0) {
            hits.push(line.clone());
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        n => Err(IsogenyError::Internal(format!("image of the ℓ-torsion meets {n} candidate lines"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{frobenius_matrix, torsion_basis, Curve, Point};
    use crate::field::roots_by_splitting;
    use crate::isogeny::velu_quotient;

    /// Recompute `φ(E[ℓ])` from an explicit basis of the domain's torsion.
    fn image_line(phi: &Isogeny<PrimeField>, basis: &TorsionBasis) -> Subspace {
        let dom = torsion_basis(phi.domain(), phi.degree()).unwrap();
        // a common field for both torsion groups
        let p = phi.domain().field().p();
        let k = num_integer::lcm(dom.k(), basis.k());
        let big = ExtField::canonical(p, k).unwrap();
        let phi_big = phi.base_change(&big);
        let tgt = phi.codomain().base_change(&big);
        // embed target basis points into the big field through a root of its modulus
        let small = basis.field();
        let modulus = small.modulus_poly().map(&big, |c| big.embed_base(*c));
        let t = roots_by_splitting(&big, &modulus).unwrap()[0].clone();
        let embed = |a: &crate::field::Fqk| small.to_poly(a).map(&big, |c| big.embed_base(*c)).eval(&t, &big);
        let embed_pt = |pt: &Point<crate::field::Fqk>| match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(embed(x), embed(y)),
        };
        let dom_small = dom.field();
        let dmod = dom_small.modulus_poly().map(&big, |c| big.embed_base(*c));
        let td = roots_by_splitting(&big, &dmod).unwrap()[0].clone();
        let embed_d = |a: &crate::field::Fqk| dom_small.to_poly(a).map(&big, |c| big.embed_base(*c)).eval(&td, &big);
        let mut images = Vec::new();
        for pt in dom.points() {
            let Point::Affine(x, y) = pt else { continue };
            let img = phi_big.eval(&Point::Affine(embed_d(x), embed_d(y)));
            assert!(tgt.contains(&img));
            images.push(img);
        }
        let ell = phi.degree();
        let coords: Vec<Vec<u64>> = images
            .iter()
            .map(|img| {
                let i = (0..ell * ell).find(|&i| embed_pt(basis.point(i % ell, i / ell)) == *img).unwrap();
                vec![i % ell, i / ell]
            })
            .collect();
        Subspace::span(ell, 2, &coords)
    }

    #[test]
    fn matches_explicit_image_and_is_frobenius_stable() {
        let mut checked = 0;
        for p in [11u64, 13, 19, 31] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                for b in [1u64, 2, 3] {
                    let Ok(e) = Curve::short(f, a, b) else { continue };
                    let pts = e.points().unwrap();
                    for ell in [2u64, 3, 5] {
                        let Some(kp) = pts.iter().find(|pt| e.has_prime_order(pt, ell)) else { continue };
                        let phi = velu_quotient(&e, kp).unwrap();
                        let basis = torsion_basis(phi.codomain(), ell).unwrap();
                        if basis.k() * torsion_basis(&e, ell).unwrap().k() > 12 {
                            continue;
                        }
                        let line = dual_kernel(&phi, &basis).unwrap();
                        assert_eq!(line.dim(), 1);
                        assert_eq!(line, image_line(&phi, &basis));
                        let frob = frobenius_matrix(phi.codomain(), &basis).unwrap();
                        assert_eq!(line.image(&frob.matrix), line);
                        // the quotient by the dual kernel returns to the domain's j
                        let r = basis.point_of(&line.basis()[0]);
                        let back = velu_quotient(basis.curve(), r).unwrap();
                        assert_eq!(back.codomain().j_invariant(), basis.field().embed_base(e.j_invariant()));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn lines_are_distinct() {
        for ell in [2u64, 3, 5, 7] {
            let lines = all_lines(ell);
            assert_eq!(lines.len() as u64, ell + 1);
            let mut sorted = lines.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), lines.len());
        }
    }
}
