//! ℓ-torsion over the splitting field and the Frobenius action on it, for
//! curves over prime fields.

use std::collections::HashMap;

use num_integer::Integer;

use super::{weil_pairing, Curve, CurveError, Point};
use crate::field::{factor_squarefree, is_prime, roots_by_splitting, ExtField, Field, FiniteField, Fqk, Poly, PrimeField};
use crate::linalg::Matrix;

fn check_ell(curve: &Curve<PrimeField>, ell: u64) -> Result<(), CurveError> {
    if !is_prime(ell) || ell == curve.field().p() {
        return Err(CurveError::BadEll(ell));
    }
    Ok(())
}

/// Irreducible factors of the ℓ-torsion x-polynomial with the degree of the
/// field generated by a point above each, and the lcm of those degrees.
fn torsion_structure(curve: &Curve<PrimeField>, ell: u64) -> Result<(usize, Vec<Poly<u64>>), CurveError> {
    check_ell(curve, ell)?;
    let fp = curve.field();
    let g = curve.torsion_x_polynomial(ell).monic(fp);
    if g.gcd(&g.derivative(fp), fp).degree() != Some(0) {
        return Err(CurveError::Internal("ℓ-torsion polynomial is not squarefree".into()));
    }
    let factors = factor_squarefree(fp, &g);
    let disc = curve.two_torsion_polynomial();
    let mut k = 1usize;
    for h in &factors {
        let d = h.degree().unwrap();
        let square = if d == 1 {
            let root = fp.neg(&h.coeffs()[0]);
            fp.is_square(&disc.eval(&root, fp))
        } else {
            let ext = ExtField::new(fp.p(), h.coeffs().to_vec())?;
            let t = ext.generator();
            let lifted = disc.map(&ext, |c| ext.embed_base(*c));
            ext.is_square(&lifted.eval(&t, &ext))
        };
        k = k.lcm(&if square { d } else { 2 * d });
    }
    let bound = (ell * (ell - 1) * (ell + 1)) as usize;
    if k > bound {
        return Err(CurveError::Internal(format!("torsion field degree {k} exceeds bound {bound}")));
    }
    Ok((k, factors))
}

/// The least k with `E[ℓ] ⊆ E(F_{p^k})`.
pub fn torsion_field_degree(curve: &Curve<PrimeField>, ell: u64) -> Result<usize, CurveError> {
    torsion_structure(curve, ell).map(|(k, _)| k)
}

/// A basis `(P, Q)` of `E[ℓ]` over `F_{p^k}` together with a discrete-log
/// table for all ℓ² torsion points.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    ell: u64,
    k: usize,
    base: Curve<PrimeField>,
    field: ExtField,
    curve: Curve<ExtField>,
    pairing: Fqk,
    /// `points[a + ℓ·b] = aP + bQ`.
    points: Vec<Point<Fqk>>,
    index: HashMap<Point<Fqk>, usize>,
}

impl TorsionBasis {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base_curve(&self) -> &Curve<PrimeField> {
        &self.base
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn curve(&self) -> &Curve<ExtField> {
        &self.curve
    }

    pub fn p(&self) -> &Point<Fqk> {
        &self.points[1]
    }

    pub fn q(&self) -> &Point<Fqk> {
        &self.points[self.ell as usize]
    }

    /// `e_ℓ(P, Q)`.
    pub fn pairing(&self) -> &Fqk {
        &self.pairing
    }

    pub fn point(&self, a: u64, b: u64) -> &Point<Fqk> {
        let l = self.ell;
        &self.points[((a % l) + l * (b % l)) as usize]
    }

    pub fn point_of(&self, v: &[u64]) -> &Point<Fqk> {
        self.point(v[0], v[1])
    }

    /// `(a, b)` with `pt = aP + bQ`, if `pt` is ℓ-torsion.
    pub fn coordinates(&self, pt: &Point<Fqk>) -> Option<(u64, u64)> {
        self.index.get(pt).map(|&i| ((i as u64) % self.ell, (i as u64) / self.ell))
    }

    pub fn points(&self) -> &[Point<Fqk>] {
        &self.points
    }

    /// Pairing sanity on the basis: alternating, antisymmetric, bilinear on
    /// a few multiples, and primitive. Returns a description of the first
    /// failure.
    pub fn pairing_suite(&self) -> Result<(), String> {
        let e = &self.curve;
        let f = &self.field;
        let l = self.ell;
        let pair = |a: &Point<Fqk>, b: &Point<Fqk>| weil_pairing(e, a, b, l).map_err(|err| err.to_string());
        let (p, q) = (self.p(), self.q());
        let z = self.pairing.clone();
        if f.is_one(&z) {
            return Err("e(P, Q) = 1".into());
        }
        if !f.is_one(&f.pow(&z, l)) {
            return Err("e(P, Q)^ℓ ≠ 1".into());
        }
        if !f.is_one(&pair(p, p)?) || !f.is_one(&pair(q, q)?) {
            return Err("pairing is not alternating".into());
        }
        if !f.is_one(&f.mul(&z, &pair(q, p)?)) {
            return Err("e(P, Q)·e(Q, P) ≠ 1".into());
        }
        for (a, b) in [(2u64, 1u64), (1, l - 1), (l - 1, 2 % l)] {
            let lhs = pair(self.point(a, 0), self.point(0, b))?;
            if lhs != f.pow(&z, a * b) {
                return Err(format!("e({a}P, {b}Q) ≠ e(P, Q)^{}", a * b));
            }
        }
        // e(aP + bQ, cP + dQ) = e(P, Q)^(ad − bc)
        let lhs = pair(self.point(1, 1), self.point(1, 2 % l))?;
        if lhs != f.pow(&z, (2 % l + l - 1) % l) {
            return Err("e(P + Q, P + 2Q) ≠ e(P, Q)".into());
        }
        Ok(())
    }
}

pub fn torsion_basis(curve: &Curve<PrimeField>, ell: u64) -> Result<TorsionBasis, CurveError> {
    let (k, factors) = torsion_structure(curve, ell)?;
    let p = curve.field().p();
    let field = ExtField::canonical(p, k)?;
    let ek = curve.base_change(&field);
    let mut torsion = Vec::new();
    for h in &factors {
        let hk = h.map(&field, |c| field.embed_base(*c));
        for x in roots_by_splitting(&field, &hk)? {
            torsion.extend(ek.lift_x(&x));
        }
    }
    let expected = (ell * ell - 1) as usize;
    if torsion.len() != expected {
        return Err(CurveError::Internal(format!("found {} nonzero ℓ-torsion points, expected {expected}", torsion.len())));
    }
    torsion.sort();
    let gen_p = torsion[0].clone();
    let mut multiples = vec![gen_p.clone()];
    for _ in 2..ell {
        multiples.push(ek.add(multiples.last().unwrap(), &gen_p));
    }
    let gen_q = torsion
        .iter()
        .find(|t| !multiples.contains(t))
        .cloned()
        .ok_or_else(|| CurveError::Internal("ℓ-torsion is cyclic".into()))?;
    let pairing = weil_pairing(&ek, &gen_p, &gen_q, ell)?;
    if field.is_one(&pairing) {
        return Err(CurveError::Internal("Weil pairing degenerate on independent points".into()));
    }
    let mut points = Vec::with_capacity((ell * ell) as usize);
    let mut row = Point::Infinity;
    for _ in 0..ell {
        let mut acc = row.clone();
        for _ in 0..ell {
            points.push(acc.clone());
            acc = ek.add(&acc, &gen_p);
        }
        row = ek.add(&row, &gen_q);
    }
    let index: HashMap<Point<Fqk>, usize> = points.iter().cloned().enumerate().map(|(i, pt)| (pt, i)).collect();
    if index.len() != points.len() {
        return Err(CurveError::Internal("basis points are dependent".into()));
    }
    Ok(TorsionBasis { ell, k, base: curve.clone(), field, curve: ek, pairing, points, index })
}

/// The q-power Frobenius on `E[ℓ]` in the basis `(P, Q)`; column j holds the
/// coordinates of the image of the j-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusMatrix {
    pub q: u64,
    pub matrix: Matrix,
}

impl FrobeniusMatrix {
    pub fn ell(&self) -> u64 {
        self.matrix.ell()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn determinant(&self) -> u64 {
        self.matrix.determinant()
    }

    pub fn trace(&self) -> u64 {
        self.matrix.trace()
    }
}

pub fn frobenius_matrix(curve: &Curve<PrimeField>, basis: &TorsionBasis) -> Result<FrobeniusMatrix, CurveError> {
    if curve != basis.base_curve() {
        return Err(CurveError::Internal("basis belongs to a different curve".into()));
    }
    let ell = basis.ell();
    let image = |pt: &Point<Fqk>| {
        let img = basis.curve().frobenius_point(pt);
        basis.coordinates(&img).ok_or_else(|| CurveError::Internal("Frobenius image is not in the torsion table".into()))
    };
    let (a, c) = image(basis.p())?;
    let (b, d) = image(basis.q())?;
    let matrix = Matrix::new(ell, 2, 2, vec![a, b, c, d]);
    if matrix.determinant() == 0 {
        return Err(CurveError::Internal("Frobenius matrix is singular".into()));
    }
    Ok(FrobeniusMatrix { q: curve.field().p(), matrix })
}

/// `dim_{F_ℓ} E[ℓ](F_q)`.
pub fn rational_ell_torsion(curve: &Curve<PrimeField>, ell: u64) -> Result<usize, CurveError> {
    let basis = torsion_basis(curve, ell)?;
    let frob = frobenius_matrix(curve, &basis)?;
    Ok(frob.matrix.sub(&Matrix::identity(ell, 2)).kernel().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn full_two_torsion_over_f5() {
        let e = Curve::from_ints(fp(5), [0, 0, 0, 1, 0]).unwrap();
        let basis = torsion_basis(&e, 2).unwrap();
        assert_eq!(basis.k(), 1);
        let f = basis.field();
        let pt = |x: u64| Point::Affine(f.embed_base(x), f.zero());
        assert_eq!(basis.p(), &pt(0));
        assert_eq!(basis.q(), &pt(2));
        assert_eq!(basis.pairing(), &f.embed_base(4));
        let frob = frobenius_matrix(&e, &basis).unwrap();
        assert!(frob.is_identity());
        assert_eq!(rational_ell_torsion(&e, 2).unwrap(), 2);
        basis.pairing_suite().unwrap();
    }

    #[test]
    fn rejects_bad_ell() {
        let e = Curve::from_ints(fp(7), [0, 0, 0, 1, 1]).unwrap();
        assert!(matches!(torsion_basis(&e, 7), Err(CurveError::BadEll(7))));
        assert!(matches!(torsion_basis(&e, 9), Err(CurveError::BadEll(9))));
    }

    /// Smallest k with `E[ℓ] ⊆ E(F_{p^k})`, by counting points over each
    /// extension: `ℓ² | #E(F_{p^k})` and the ℓ-torsion there has size ℓ².
    fn degree_by_counting(e: &Curve<PrimeField>, ell: u64) -> usize {
        let p = e.field().p();
        for k in 1.. {
            let field = ExtField::canonical(p, k).unwrap();
            if field.size_u64().unwrap() > 20_000 {
                return 0;
            }
            let ek = e.base_change(&field);
            let count = ek.points().unwrap().iter().filter(|pt| ek.mul(ell, pt).is_infinity()).count() as u64;
            if count == ell * ell {
                return k;
            }
        }
        unreachable!()
    }

    fn check(p: u64, a: [i64; 5], ell: u64) {
        let field = fp(p);
        let Ok(e) = Curve::from_ints(field, a) else { return };
        if ell == p {
            return;
        }
        let basis = torsion_basis(&e, ell).unwrap();
        let oracle = degree_by_counting(&e, ell);
        if oracle != 0 {
            assert_eq!(basis.k(), oracle, "p={p} a={a:?} ell={ell}");
        }
        assert!(basis.curve().has_prime_order(basis.p(), ell));
        assert!(basis.curve().has_prime_order(basis.q(), ell));
        basis.pairing_suite().unwrap();
        let frob = frobenius_matrix(&e, &basis).unwrap();
        let n = e.order().unwrap();
        assert_eq!(frob.determinant(), p % ell);
        assert_eq!(frob.trace(), ((p + 1 + ell * n) - n) % ell);
        let rational = e.points().unwrap().iter().filter(|pt| e.mul(ell, pt).is_infinity()).count() as u64;
        let dim = rational_ell_torsion(&e, ell).unwrap();
        assert_eq!(ell.pow(dim as u32), rational);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn basis_matches_counting_oracle(pi in 0usize..5, a in proptest::array::uniform5(-6i64..6), li in 0usize..3) {
            let p = [5u64, 7, 11, 13, 19][pi];
            let ell = [2u64, 3, 5][li];
            check(p, a, ell);
        }
    }
}
