use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Point};
use crate::field::{Field, Poly};

/// The change of variables `x = u²x' + r`, `y = u³y' + s·u²x' + t` taking a
/// source curve to a target curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveIsomorphism<E> {
    pub u: E,
    pub r: E,
    pub s: E,
    pub t: E,
}

impl<E: Clone + Eq> CurveIsomorphism<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F) -> Self {
        Self { u: f.one(), r: f.zero(), s: f.zero(), t: f.zero() }
    }

    pub fn scaling<F: Field<Elem = E>>(f: &F, u: E) -> Self {
        Self { u, r: f.zero(), s: f.zero(), t: f.zero() }
    }

    /// Coefficients of the target curve.
    pub fn transform_coeffs<F: Field<Elem = E>>(&self, f: &F, a: &[E; 5]) -> [E; 5] {
        let [a1, a2, a3, a4, a6] = a;
        let Self { u, r, s, t } = self;
        let c = |n: i64| f.from_i64(n);
        let sum = |terms: &[E]| terms.iter().fold(f.zero(), |acc, x| f.add(&acc, x));
        let ui = f.inv(u).expect("u ≠ 0");
        let u2 = f.square(&ui);
        let u3 = f.mul(&u2, &ui);
        let u4 = f.square(&u2);
        let u6 = f.square(&u3);
        let r2 = f.square(r);
        let n1 = f.add(a1, &f.mul(&c(2), s));
        let n2 = sum(&[a2.clone(), f.neg(&f.mul(s, a1)), f.mul(&c(3), r), f.neg(&f.square(s))]);
        let n3 = sum(&[a3.clone(), f.mul(r, a1), f.mul(&c(2), t)]);
        let n4 = sum(&[
            a4.clone(),
            f.neg(&f.mul(s, a3)),
            f.mul(&c(2), &f.mul(r, a2)),
            f.neg(&f.mul(&f.add(t, &f.mul(r, s)), a1)),
            f.mul(&c(3), &r2),
            f.neg(&f.mul(&c(2), &f.mul(s, t))),
        ]);
        let n6 = sum(&[
            a6.clone(),
            f.mul(r, a4),
            f.mul(&r2, a2),
            f.mul(&r2, r),
            f.neg(&f.mul(t, a3)),
            f.neg(&f.square(t)),
            f.neg(&f.mul(r, &f.mul(t, a1))),
        ]);
        [f.mul(&n1, &ui), f.mul(&n2, &u2), f.mul(&n3, &u3), f.mul(&n4, &u4), f.mul(&n6, &u6)]
    }

    pub fn apply_to_curve<F: Field<Elem = E>>(&self, curve: &Curve<F>) -> Curve<F> {
        let a = self.transform_coeffs(curve.field(), curve.coeffs());
        Curve::new(curve.field().clone(), a).expect("isomorphic image is nonsingular")
    }

    /// Whether this map takes `source` exactly onto `target`.
    pub fn maps<F: Field<Elem = E>>(&self, source: &Curve<F>, target: &Curve<F>) -> bool {
        !source.field().is_zero(&self.u) && self.transform_coeffs(source.field(), source.coeffs()) == *target.coeffs()
    }

    pub fn map_point<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> Point<E> {
        let Point::Affine(x, y) = p else { return Point::Infinity };
        let ui = f.inv(&self.u).expect("u ≠ 0");
        let u2 = f.square(&ui);
        let dx = f.sub(x, &self.r);
        let xp = f.mul(&dx, &u2);
        let yp = f.mul(&f.sub(&f.sub(y, &f.mul(&self.s, &dx)), &self.t), &f.mul(&u2, &ui));
        Point::Affine(xp, yp)
    }

    /// Target x-coordinate expressed through a source x-coordinate is
    /// `(x − r)/u²`; this returns the source x for a target x.
    pub fn pull_back_x<F: Field<Elem = E>>(&self, f: &F, x_target: &E) -> E {
        f.add(&f.mul(&f.square(&self.u), x_target), &self.r)
    }

    /// `self` followed by `next`.
    pub fn then<F: Field<Elem = E>>(&self, f: &F, next: &Self) -> Self {
        let (u1, r1, s1, t1) = (&self.u, &self.r, &self.s, &self.t);
        let (u2, r2, s2, t2) = (&next.u, &next.r, &next.s, &next.t);
        let u1sq = f.square(u1);
        Self {
            u: f.mul(u1, u2),
            r: f.add(&f.mul(&u1sq, r2), r1),
            s: f.add(s1, &f.mul(u1, s2)),
            t: f.add(&f.add(t1, &f.mul(&f.mul(&u1sq, u1), t2)), &f.mul(s1, &f.mul(&u1sq, r2))),
        }
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let ui = f.inv(&self.u).expect("u ≠ 0");
        let u2 = f.square(&ui);
        Self {
            u: ui.clone(),
            r: f.neg(&f.mul(&self.r, &u2)),
            s: f.neg(&f.mul(&self.s, &ui)),
            t: f.mul(&f.sub(&f.mul(&self.s, &self.r), &self.t), &f.mul(&u2, &ui)),
        }
    }
}

/// The isomorphism onto `y² = x³ + A·x + B` with `u = 1`, and that curve.
pub fn to_short_form<F: Field>(curve: &Curve<F>) -> (CurveIsomorphism<F::Elem>, Curve<F>) {
    let f = curve.field();
    let [b2, ..] = curve.b_invariants();
    let r = f.neg(&f.div(&b2, &f.from_i64(12)).unwrap());
    let half = f.inv(&f.from_i64(2)).unwrap();
    let s = f.neg(&f.mul(curve.a1(), &half));
    let t = f.neg(&f.mul(&f.add(&f.mul(curve.a1(), &r), curve.a3()), &half));
    let iso = CurveIsomorphism { u: f.one(), r, s, t };
    let short = iso.apply_to_curve(curve);
    (iso, short)
}

/// An isomorphism over the base field from `e1` to `e2`, if one exists.
/// Among the candidates the one with the smallest `u` is returned.
pub fn curves_isomorphic<F: Field>(e1: &Curve<F>, e2: &Curve<F>) -> Option<CurveIsomorphism<F::Elem>> {
    let f = e1.field();
    if e1.j_invariant() != e2.j_invariant() {
        return None;
    }
    let (i1, s1) = to_short_form(e1);
    let (i2, s2) = to_short_form(e2);
    let (a1, b1) = (s1.a4(), s1.a6());
    let (a2, b2) = (s2.a4(), s2.a6());
    if f.is_zero(a1) != f.is_zero(a2) || f.is_zero(b1) != f.is_zero(b2) {
        return None;
    }
    // u⁴ = A1/A2 and u⁶ = B1/B2
    let pure_roots = |deg: usize, c: &F::Elem| {
        let mut coeffs = vec![f.zero(); deg + 1];
        coeffs[0] = f.neg(c);
        coeffs[deg] = f.one();
        f.roots(&Poly::new(f, coeffs)).unwrap_or_default()
    };
    let mut candidates: Option<Vec<F::Elem>> = None;
    if !f.is_zero(a1) {
        candidates = Some(pure_roots(4, &f.div(a1, a2).unwrap()));
    }
    if !f.is_zero(b1) {
        let sextic = pure_roots(6, &f.div(b1, b2).unwrap());
        candidates = Some(match candidates {
            Some(c) => c.into_iter().filter(|u| sextic.contains(u)).collect(),
            None => sextic,
        });
    }
    let u = candidates?.into_iter().min()?;
    let iso = i1.then(f, &CurveIsomorphism::scaling(f, u)).then(f, &i2.inverse(f));
    iso.maps(e1, e2).then_some(iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtField, FiniteField, PrimeField, RationalField};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_on_itself() {
        let f = PrimeField::new(13).unwrap();
        let e = Curve::from_ints(f, [0, 0, 0, 2, 5]).unwrap();
        assert_eq!(curves_isomorphic(&e, &e), Some(CurveIsomorphism::identity(&f)));
    }

    #[test]
    fn quadratic_twist_needs_the_extension() {
        let p = 13;
        let f = PrimeField::new(p).unwrap();
        let d = (2..p).find(|&d| !f.is_square(&d)).unwrap();
        let (a, b) = (2u64, 5u64);
        let e = Curve::short(f, a, b).unwrap();
        let twist = Curve::short(f, f.mul(&a, &f.square(&d)), f.mul(&b, &f.mul(&d, &f.square(&d)))).unwrap();
        assert_eq!(e.j_invariant(), twist.j_invariant());
        assert!(curves_isomorphic(&e, &twist).is_none());
        let k = ExtField::canonical(p, 2).unwrap();
        let iso = curves_isomorphic(&e.base_change(&k), &twist.base_change(&k)).unwrap();
        assert!(iso.maps(&e.base_change(&k), &twist.base_change(&k)));
    }

    #[test]
    fn different_j_is_never_isomorphic() {
        let f = PrimeField::new(13).unwrap();
        let e = Curve::from_ints(f, [0, 0, 0, 2, 5]).unwrap();
        let e2 = Curve::from_ints(f, [0, 0, 0, 1, 5]).unwrap();
        assert_ne!(e.j_invariant(), e2.j_invariant());
        assert!(curves_isomorphic(&e, &e2).is_none());
    }

    #[test]
    fn family_quotient_over_the_rationals() {
        let q = RationalField;
        let e = Curve::from_ints(q, [1, 0, 2, -10, -30]).unwrap();
        let (iso, short) = to_short_form(&e);
        assert!(iso.maps(&e, &short));
        assert!(short.is_short());
        assert!(curves_isomorphic(&e, &short).is_some());
    }

    fn random_iso<F: FiniteField>(f: &F, rng: &mut ChaCha8Rng) -> CurveIsomorphism<F::Elem> {
        let mut u = f.random(rng);
        while f.is_zero(&u) {
            u = f.random(rng);
        }
        CurveIsomorphism { u, r: f.random(rng), s: f.random(rng), t: f.random(rng) }
    }

    proptest! {
        #[test]
        fn equivalence_relation(pi in 0usize..4, a in proptest::array::uniform5(-9i64..9), seed in any::<u64>()) {
            let p = [5u64, 7, 13, 101][pi];
            let f = PrimeField::new(p).unwrap();
            let Ok(e) = Curve::from_ints(f, a) else { return Ok(()) };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g1 = random_iso(&f, &mut rng);
            let g2 = random_iso(&f, &mut rng);
            let e1 = g1.apply_to_curve(&e);
            let e2 = g2.apply_to_curve(&e1);
            // points follow the coefficient transformation
            for pt in e.points().unwrap() {
                prop_assert!(e1.contains(&g1.map_point(&f, &pt)));
            }
            prop_assert!(g1.then(&f, &g2).maps(&e, &e2));
            prop_assert!(g1.inverse(&f).maps(&e1, &e));
            let found = curves_isomorphic(&e, &e1).unwrap();
            prop_assert!(found.maps(&e, &e1));
            let back = curves_isomorphic(&e1, &e).unwrap();
            prop_assert!(back.maps(&e1, &e));
            let a = curves_isomorphic(&e, &e1).unwrap();
            let b = curves_isomorphic(&e1, &e2).unwrap();
            prop_assert!(a.then(&f, &b).maps(&e, &e2));
        }
    }
}
