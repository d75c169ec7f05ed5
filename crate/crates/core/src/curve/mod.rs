//! Long-Weierstrass elliptic curves
//! `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over any [`Field`] of
//! characteristic 0 or > 3.

mod division;
mod pairing;
mod record;
mod torsion;

use rand::Rng;

use crate::field::{Embed, Field, FieldError, FiniteField, Poly};

pub use pairing::weil_pairing;
pub use record::{CurveRecord, ElemRecord, RecordField};
pub use torsion::{
    frobenius_matrix, rational_ell_torsion, torsion_basis, torsion_field_degree, FrobeniusMatrix, TorsionBasis,
};

/// Exhaustive point counting is refused above this field size.
pub const COUNT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("singular curve: discriminant is zero")]
    Singular,
    #[error("curves need characteristic 0 or > 3, got {0}")]
    Characteristic(u64),
    #[error("point does not lie on the curve")]
    NotOnCurve,
    #[error("ℓ = {0} must be a prime different from the characteristic")]
    BadEll(u64),
    #[error("point does not have exact order {0}")]
    WrongOrder(u64),
    #[error("points are not {0}-torsion")]
    NotTorsion(u64),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point<E> {
    Infinity,
    Affine(E, E),
}

impl<E> Point<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&E> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&E> {
        match self {
            Point::Infinity => None,
            Point::Affine(_, y) => Some(y),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Curve<F: Field> {
    field: F,
    a: [F::Elem; 5],
    b2: F::Elem,
    b4: F::Elem,
    b6: F::Elem,
    b8: F::Elem,
    c4: F::Elem,
    c6: F::Elem,
    disc: F::Elem,
}

impl<F: Field + PartialEq> PartialEq for Curve<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.a == other.a
    }
}

impl<F: Field + Eq> Eq for Curve<F> {}

impl<F: Field> Curve<F> {
    /// Coefficients in the order `[a1, a2, a3, a4, a6]`.
    pub fn new(field: F, a: [F::Elem; 5]) -> Result<Self, CurveError> {
        let ch = field.characteristic();
        if ch == 2 || ch == 3 {
            return Err(CurveError::Characteristic(ch));
        }
        let f = &field;
        let [a1, a2, a3, a4, a6] = &a;
        let c = |n: i64| f.from_i64(n);
        let b2 = f.add(&f.square(a1), &f.mul(&c(4), a2));
        let b4 = f.add(&f.mul(&c(2), a4), &f.mul(a1, a3));
        let b6 = f.add(&f.square(a3), &f.mul(&c(4), a6));
        // b8 = a1²a6 + 4a2a6 − a1a3a4 + a2a3² − a4²
        let b8 = [
            f.mul(&f.square(a1), a6),
            f.mul(&c(4), &f.mul(a2, a6)),
            f.neg(&f.mul(a1, &f.mul(a3, a4))),
            f.mul(a2, &f.square(a3)),
            f.neg(&f.square(a4)),
        ]
        .iter()
        .fold(f.zero(), |acc, t| f.add(&acc, t));
        let c4 = f.sub(&f.square(&b2), &f.mul(&c(24), &b4));
        let c6 = f.add(
            &f.sub(&f.mul(&c(36), &f.mul(&b2, &b4)), &f.mul(&b2, &f.square(&b2))),
            &f.mul(&c(-216), &b6),
        );
        let disc = [
            f.neg(&f.mul(&f.square(&b2), &b8)),
            f.mul(&c(-8), &f.mul(&b4, &f.square(&b4))),
            f.mul(&c(-27), &f.square(&b6)),
            f.mul(&c(9), &f.mul(&b2, &f.mul(&b4, &b6))),
        ]
        .iter()
        .fold(f.zero(), |acc, t| f.add(&acc, t));
        if f.is_zero(&disc) {
            return Err(CurveError::Singular);
        }
        Ok(Self { field, a, b2, b4, b6, b8, c4, c6, disc })
    }

    pub fn from_ints(field: F, a: [i64; 5]) -> Result<Self, CurveError> {
        let a = a.map(|c| field.from_i64(c));
        Self::new(field, a)
    }

    /// `y² = x³ + a·x + b`.
    pub fn short(field: F, a: F::Elem, b: F::Elem) -> Result<Self, CurveError> {
        let z = field.zero();
        Self::new(field, [z.clone(), z.clone(), z, a, b])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem; 5] {
        &self.a
    }

    pub fn a1(&self) -> &F::Elem {
        &self.a[0]
    }

    pub fn a2(&self) -> &F::Elem {
        &self.a[1]
    }

    pub fn a3(&self) -> &F::Elem {
        &self.a[2]
    }

    pub fn a4(&self) -> &F::Elem {
        &self.a[3]
    }

    pub fn a6(&self) -> &F::Elem {
        &self.a[4]
    }

    /// `[b2, b4, b6, b8]`.
    pub fn b_invariants(&self) -> [F::Elem; 4] {
        [self.b2.clone(), self.b4.clone(), self.b6.clone(), self.b8.clone()]
    }

    pub fn c4(&self) -> &F::Elem {
        &self.c4
    }

    pub fn c6(&self) -> &F::Elem {
        &self.c6
    }

    pub fn discriminant(&self) -> &F::Elem {
        &self.disc
    }

    pub fn j_invariant(&self) -> F::Elem {
        let f = &self.field;
        let c4_cubed = f.mul(&self.c4, &f.square(&self.c4));
        f.div(&c4_cubed, &self.disc).expect("nonsingular curve")
    }

    pub fn is_short(&self) -> bool {
        let f = &self.field;
        f.is_zero(self.a1()) && f.is_zero(self.a2()) && f.is_zero(self.a3())
    }

    pub fn contains(&self, p: &Point<F::Elem>) -> bool {
        let Point::Affine(x, y) = p else { return true };
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = f.mul(y, &f.add(y, &f.add(&f.mul(a1, x), a3)));
        let rhs = f.add(&f.mul(x, &f.add(&f.mul(x, &f.add(x, a2)), a4)), a6);
        lhs == rhs
    }

    /// The quartic-free part `4x³ + b2·x² + 2b4·x + b6 = (2y + a1x + a3)²`.
    pub fn two_torsion_polynomial(&self) -> Poly<F::Elem> {
        let f = &self.field;
        Poly::new(f, vec![self.b6.clone(), f.add(&self.b4, &self.b4), self.b2.clone(), f.from_i64(4)])
    }

    /// All points with the given x-coordinate (zero, one or two), ascending.
    pub fn lift_x(&self, x: &F::Elem) -> Vec<Point<F::Elem>> {
        let f = &self.field;
        let d = self.two_torsion_polynomial().eval(x, f);
        let Some(s) = f.sqrt(&d) else { return Vec::new() };
        let half = f.inv(&f.from_i64(2)).unwrap();
        let base = f.neg(&f.add(&f.mul(self.a1(), x), self.a3()));
        let mut out = vec![Point::Affine(x.clone(), f.mul(&f.add(&base, &s), &half))];
        if !f.is_zero(&s) {
            out.push(Point::Affine(x.clone(), f.mul(&f.sub(&base, &s), &half)));
        }
        out.sort();
        out
    }

    pub fn neg(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        let f = &self.field;
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let ny = f.neg(&f.add(y, &f.add(&f.mul(self.a1(), x), self.a3())));
                Point::Affine(x.clone(), ny)
            }
        }
    }

    /// Slope and intercept of the chord or tangent through `p` and `q`, or
    /// `None` when the line is vertical.
    pub(crate) fn line(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Option<(F::Elem, F::Elem)> {
        let (Point::Affine(x1, y1), Point::Affine(x2, y2)) = (p, q) else { return None };
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        if x1 != x2 {
            let dx = f.sub(x2, x1);
            let lambda = f.div(&f.sub(y2, y1), &dx).unwrap();
            let nu = f.div(&f.sub(&f.mul(y1, x2), &f.mul(y2, x1)), &dx).unwrap();
            return Some((lambda, nu));
        }
        let denom = f.add(&f.add(y1, y2), &f.add(&f.mul(a1, x2), a3));
        if f.is_zero(&denom) {
            return None;
        }
        // tangent: points coincide
        let x_sq = f.square(x1);
        let num_l = [f.mul(&f.from_i64(3), &x_sq), f.mul(&f.from_i64(2), &f.mul(a2, x1)), a4.clone(), f.neg(&f.mul(a1, y1))]
            .iter()
            .fold(f.zero(), |acc, t| f.add(&acc, t));
        let num_n = [f.neg(&f.mul(&x_sq, x1)), f.mul(a4, x1), f.mul(&f.from_i64(2), a6), f.neg(&f.mul(a3, y1))]
            .iter()
            .fold(f.zero(), |acc, t| f.add(&acc, t));
        let lambda = f.div(&num_l, &denom).unwrap();
        let nu = f.div(&num_n, &denom).unwrap();
        Some((lambda, nu))
    }

    /// Group law; inputs are assumed to lie on the curve.
    pub fn add(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Point<F::Elem> {
        match (p, q) {
            (Point::Infinity, _) => q.clone(),
            (_, Point::Infinity) => p.clone(),
            (Point::Affine(x1, _), Point::Affine(x2, _)) => {
                let Some((lambda, nu)) = self.line(p, q) else { return Point::Infinity };
                let f = &self.field;
                let x3 = f.sub(&f.sub(&f.add(&f.square(&lambda), &f.mul(self.a1(), &lambda)), self.a2()), &f.add(x1, x2));
                let y3 = f.neg(&f.add(&f.mul(&f.add(&lambda, self.a1()), &x3), &f.add(&nu, self.a3())));
                Point::Affine(x3, y3)
            }
        }
    }

    /// Group law with membership checks on both operands.
    pub fn try_add(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Result<Point<F::Elem>, CurveError> {
        if !self.contains(p) || !self.contains(q) {
            return Err(CurveError::NotOnCurve);
        }
        Ok(self.add(p, q))
    }

    pub fn double(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        self.add(p, p)
    }

    pub fn sub(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Point<F::Elem> {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, n: u64, p: &Point<F::Elem>) -> Point<F::Elem> {
        let mut acc = Point::Infinity;
        for i in (0..64 - n.leading_zeros()).rev() {
            acc = self.double(&acc);
            if (n >> i) & 1 == 1 {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    pub fn mul_signed(&self, n: i64, p: &Point<F::Elem>) -> Point<F::Elem> {
        let q = self.mul(n.unsigned_abs(), p);
        if n < 0 {
            self.neg(&q)
        } else {
            q
        }
    }

    /// Checked scalar multiplication.
    pub fn try_mul(&self, n: i64, p: &Point<F::Elem>) -> Result<Point<F::Elem>, CurveError> {
        if !self.contains(p) {
            return Err(CurveError::NotOnCurve);
        }
        Ok(self.mul_signed(n, p))
    }

    /// Whether `p` has exact prime order `ell`.
    pub fn has_prime_order(&self, p: &Point<F::Elem>, ell: u64) -> bool {
        !p.is_infinity() && self.mul(ell, p).is_infinity()
    }

    /// Order of `p` if it is at most `bound`.
    pub fn point_order(&self, p: &Point<F::Elem>, bound: u64) -> Option<u64> {
        let mut acc = p.clone();
        for n in 1..=bound {
            if acc.is_infinity() {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }

    /// The same curve over an extension.
    pub fn base_change<G: Embed<F>>(&self, target: &G) -> Curve<G> {
        let a = self.a.clone().map(|c| target.embed(&c));
        Curve::new(target.clone(), a).expect("base change preserves nonsingularity")
    }

    pub fn embed_point<G: Embed<F>>(&self, target: &G, p: &Point<F::Elem>) -> Point<G::Elem> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(target.embed(x), target.embed(y)),
        }
    }
}

impl<F: FiniteField> Curve<F> {
    fn check_count_limit(&self) -> Result<u64, CurveError> {
        self.field
            .size_u64()
            .filter(|&q| q <= COUNT_LIMIT)
            .ok_or_else(|| CurveError::Capability(format!("point enumeration limited to fields of size <= {COUNT_LIMIT}")))
    }

    /// `#E(F_q)` by enumeration, including the point at infinity.
    pub fn order(&self) -> Result<u64, CurveError> {
        let q = self.check_count_limit()?;
        let f = &self.field;
        let mut square = vec![false; q as usize];
        for i in 0..q {
            let e = f.element_at(i);
            square[f.index_of(&f.square(&e)) as usize] = true;
        }
        let disc = self.two_torsion_polynomial();
        let mut count = 1;
        for i in 0..q {
            let d = disc.eval(&f.element_at(i), f);
            if f.is_zero(&d) {
                count += 1;
            } else if square[f.index_of(&d) as usize] {
                count += 2;
            }
        }
        Ok(count)
    }

    /// Every rational point, infinity first, then ascending.
    pub fn points(&self) -> Result<Vec<Point<F::Elem>>, CurveError> {
        let q = self.check_count_limit()?;
        let mut out = vec![Point::Infinity];
        for i in 0..q {
            out.extend(self.lift_x(&self.field.element_at(i)));
        }
        out.sort();
        Ok(out)
    }

    /// A uniformly chosen affine x followed by a random lift; retries until
    /// the x-coordinate lifts.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<F::Elem> {
        loop {
            let x = self.field.random(rng);
            let lifts = self.lift_x(&x);
            if !lifts.is_empty() {
                let i = rng.gen_range(0..lifts.len());
                return lifts[i].clone();
            }
        }
    }

    /// Coordinatewise p-power Frobenius.
    pub fn frobenius_point(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(self.field.frobenius(x), self.field.frobenius(y)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtField, PrimeField, RationalField};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn doubling_on_the_order_three_family_member() {
        let q = RationalField;
        let e = Curve::from_ints(q, [1, 0, 2, 0, 0]).unwrap();
        let p = Point::Affine(q.zero(), q.zero());
        assert!(e.contains(&p));
        assert_eq!(e.mul(2, &p), Point::Affine(q.zero(), q.from_i64(-2)));
        assert_eq!(e.mul(3, &p), Point::Infinity);
        assert_eq!(e.add(&p, &e.neg(&p)), Point::Infinity);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Curve::from_ints(f(7), [0, 0, 0, 0, 0]).unwrap_err(), CurveError::Singular);
        assert_eq!(Curve::from_ints(f(3), [0, 0, 0, 1, 1]).unwrap_err(), CurveError::Characteristic(3));
        let e = Curve::from_ints(f(7), [0, 0, 0, 1, 1]).unwrap();
        let off = Point::Affine(1, 1);
        assert_eq!(e.try_add(&off, &Point::Infinity), Err(CurveError::NotOnCurve));
    }

    #[test]
    fn count_small_curve() {
        let e = Curve::from_ints(f(5), [0, 0, 0, 1, 0]).unwrap();
        assert_eq!(e.order().unwrap(), 4);
        assert_eq!(e.points().unwrap(), vec![Point::Infinity, Point::Affine(0, 0), Point::Affine(2, 0), Point::Affine(3, 0)]);
    }

    #[test]
    fn count_refuses_large_fields() {
        let e = Curve::from_ints(f(1_000_003), [0, 0, 0, 1, 1]).unwrap();
        assert!(matches!(e.order(), Err(CurveError::Capability(_))));
    }

    #[test]
    fn extension_field_counts_match_brute_force() {
        // brute force over all (x, y) pairs in F_{7^2}
        let k = ExtField::canonical(7, 2).unwrap();
        let e = Curve::from_ints(k.clone(), [1, 2, 3, 4, 5]).unwrap();
        let mut brute = 1;
        for i in 0..49 {
            for j in 0..49 {
                if e.contains(&Point::Affine(k.element_at(i), k.element_at(j))) {
                    brute += 1;
                }
            }
        }
        assert_eq!(e.order().unwrap(), brute);
    }

    fn check_curve(p: u64, a: [i64; 5], seed: u64) {
        let Ok(e) = Curve::from_ints(f(p), a) else { return };
        let n = e.order().unwrap();
        let hasse = 2.0 * (p as f64).sqrt();
        assert!((n as f64 - p as f64 - 1.0).abs() <= hasse);
        assert_eq!(e.points().unwrap().len() as u64, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let (x, y, z) = (e.random_point(&mut rng), e.random_point(&mut rng), e.random_point(&mut rng));
            assert!(e.contains(&x));
            assert_eq!(e.add(&e.add(&x, &y), &z), e.add(&x, &e.add(&y, &z)));
            assert_eq!(e.add(&x, &y), e.add(&y, &x));
            assert!(e.contains(&e.add(&x, &y)));
            assert_eq!(e.mul(n, &x), Point::Infinity);
            assert_eq!(e.mul_signed(-3, &x), e.neg(&e.mul(3, &x)));
        }
    }

    proptest! {
        #[test]
        fn group_law_and_hasse(pi in 0usize..5, a in proptest::array::uniform5(-20i64..20), seed in any::<u64>()) {
            let p = [5u64, 7, 11, 31, 101][pi];
            check_curve(p, a, seed);
        }
    }
}
