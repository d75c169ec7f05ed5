//! Division polynomials in x alone.
//!
//! `f_n = ψ_n` for odd n and `f_n = ψ_n / ψ_2` for even n, so that every
//! `f_n` is a polynomial in x; `ψ_2² = 4x³ + b2x² + 2b4x + b6`.

use super::Curve;
use crate::field::{Field, Poly};

impl<F: Field> Curve<F> {
    /// `[f_0, f_1, …, f_n]`.
    pub fn division_polynomials(&self, n: usize) -> Vec<Poly<F::Elem>> {
        let f = self.field();
        let [b2, b4, b6, b8] = self.b_invariants();
        let c = |k: i64| f.from_i64(k);
        let psi2_sq = self.two_torsion_polynomial();
        let psi2_4 = psi2_sq.square(f);
        let mut out: Vec<Poly<F::Elem>> = vec![Poly::zero(), Poly::one(f), Poly::one(f)];
        out.push(Poly::new(
            f,
            vec![b8.clone(), f.mul(&c(3), &b6), f.mul(&c(3), &b4), b2.clone(), c(3)],
        ));
        out.push(Poly::new(
            f,
            vec![
                f.sub(&f.mul(&b4, &b8), &f.square(&b6)),
                f.sub(&f.mul(&b2, &b8), &f.mul(&b4, &b6)),
                f.mul(&c(10), &b8),
                f.mul(&c(10), &b6),
                f.mul(&c(5), &b4),
                b2.clone(),
                c(2),
            ],
        ));
        for k in 5..=n {
            let m = k / 2;
            let next = if k % 2 == 1 {
                let a = out[m + 2].mul(&out[m].pow(3, f), f);
                let b = out[m - 1].mul(&out[m + 1].pow(3, f), f);
                if m % 2 == 0 {
                    a.mul(&psi2_4, f).sub(&b, f)
                } else {
                    a.sub(&b.mul(&psi2_4, f), f)
                }
            } else {
                let a = out[m + 2].mul(&out[m - 1].square(f), f);
                let b = out[m - 2].mul(&out[m + 1].square(f), f);
                out[m].mul(&a.sub(&b, f), f)
            };
            out.push(next);
        }
        out.truncate(n + 1);
        out
    }

    /// `f_n` as described in the module documentation.
    pub fn division_polynomial(&self, n: usize) -> Poly<F::Elem> {
        self.division_polynomials(n).pop().unwrap()
    }

    /// A polynomial whose roots are exactly the x-coordinates of the nonzero
    /// ℓ-torsion points: `f_ℓ` for odd ℓ, `ψ_2²` for ℓ = 2.
    pub fn torsion_x_polynomial(&self, ell: u64) -> Poly<F::Elem> {
        if ell == 2 {
            self.two_torsion_polynomial()
        } else {
            self.division_polynomial(ell as usize)
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::curve::{Curve, Point};
    use crate::field::{Field, PrimeField, RationalField};
    use proptest::prelude::*;

    #[test]
    fn psi3_short_form() {
        // 3x⁴ + 6ax² + 12bx − a² for y² = x³ + ax + b
        let q = RationalField;
        let (a, b) = (5i64, -7i64);
        let e = Curve::from_ints(q, [0, 0, 0, a, b]).unwrap();
        let expected = crate::field::Poly::from_ints(&q, &[-a * a, 12 * b, 6 * a, 0, 3]);
        assert_eq!(e.division_polynomial(3), expected);
    }

    #[test]
    fn psi3_of_quotient_family_member() {
        let q = RationalField;
        let e = Curve::from_ints(q, [1, 0, 2, -10, -30]).unwrap();
        let b = e.b_invariants();
        assert_eq!(b, [1, -18, -116, -110].map(|v| q.from_i64(v)));
        let expected = crate::field::Poly::from_ints(&q, &[-110, -348, -54, 1, 3]);
        assert_eq!(e.division_polynomial(3), expected);
    }

    #[test]
    fn two_torsion_x_coordinates() {
        let f5 = PrimeField::new(5).unwrap();
        let e = Curve::from_ints(f5, [0, 0, 0, 1, 0]).unwrap();
        assert_eq!(f5.roots(&e.torsion_x_polynomial(2)).unwrap(), vec![0, 2, 3]);
    }

    /// f_n(x_P) = 0 exactly when nP = O, for rational P with 2P ≠ O.
    fn check_against_group_law(p: u64, a: [i64; 5]) {
        let field = PrimeField::new(p).unwrap();
        let Ok(e) = Curve::from_ints(field, a) else { return };
        let polys = e.division_polynomials(12);
        for pt in e.points().unwrap() {
            let Point::Affine(x, _) = &pt else { continue };
            if e.double(&pt).is_infinity() {
                continue;
            }
            for (n, poly) in polys.iter().enumerate().skip(1) {
                let vanishes = field.is_zero(&poly.eval(x, &field));
                assert_eq!(vanishes, e.mul(n as u64, &pt).is_infinity(), "p={p} a={a:?} n={n}");
            }
        }
    }

    proptest! {
        #[test]
        fn recurrence_matches_group_law(pi in 0usize..4, a in proptest::array::uniform5(-9i64..9)) {
            let p = [5u64, 7, 13, 29][pi];
            check_against_group_law(p, a);
        }
    }
}
