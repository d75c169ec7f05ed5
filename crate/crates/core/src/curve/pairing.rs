use super::{Curve, CurveError, Point};
use crate::field::Field;

/// Miller's function for `ℓ(P) − ℓ(O)` evaluated at `q`, as a
/// numerator/denominator pair. Requires `q ∉ ⟨P⟩`.
fn miller<F: Field>(curve: &Curve<F>, p: &Point<F::Elem>, q: &Point<F::Elem>, ell: u64) -> (F::Elem, F::Elem) {
    let f = curve.field();
    let Point::Affine(xq, yq) = q else { unreachable!("q is affine") };
    let mut num = f.one();
    let mut den = f.one();
    let mut t = p.clone();
    // line through a and b evaluated at q, divided by the vertical at a + b
    let step = |a: &Point<F::Elem>, b: &Point<F::Elem>, num: &mut F::Elem, den: &mut F::Elem| -> Point<F::Elem> {
        let sum = curve.add(a, b);
        match curve.line(a, b) {
            Some((lambda, nu)) => {
                let l = f.sub(yq, &f.add(&f.mul(&lambda, xq), &nu));
                *num = f.mul(num, &l);
                if let Point::Affine(xs, _) = &sum {
                    *den = f.mul(den, &f.sub(xq, xs));
                }
            }
            None => {
                let xa = a.x().expect("affine");
                *num = f.mul(num, &f.sub(xq, xa));
            }
        }
        sum
    };
    for i in (0..63 - ell.leading_zeros()).rev() {
        num = f.square(&num);
        den = f.square(&den);
        t = step(&t.clone(), &t, &mut num, &mut den);
        if (ell >> i) & 1 == 1 {
            t = step(&t.clone(), p, &mut num, &mut den);
        }
    }
    (num, den)
}

/// The Weil pairing `e_ℓ(P, Q)`, an ℓ-th root of unity in the field of
/// definition of the points.
pub fn weil_pairing<F: Field>(
    curve: &Curve<F>,
    p: &Point<F::Elem>,
    q: &Point<F::Elem>,
    ell: u64,
) -> Result<F::Elem, CurveError> {
    if !curve.contains(p) || !curve.contains(q) {
        return Err(CurveError::NotOnCurve);
    }
    if !curve.mul(ell, p).is_infinity() || !curve.mul(ell, q).is_infinity() {
        return Err(CurveError::NotTorsion(ell));
    }
    let f = curve.field();
    if p.is_infinity() || q.is_infinity() {
        return Ok(f.one());
    }
    let mut multiple = p.clone();
    for _ in 1..ell {
        if &multiple == q {
            return Ok(f.one());
        }
        multiple = curve.add(&multiple, p);
    }
    let (n1, d1) = miller(curve, p, q, ell);
    let (n2, d2) = miller(curve, q, p, ell);
    let value = f.div(&f.mul(&n1, &d2), &f.mul(&d1, &n2)).expect("evaluation avoids zeros and poles");
    Ok(if ell % 2 == 1 { f.neg(&value) } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn two_torsion_pairing_is_minus_one() {
        let f5 = PrimeField::new(5).unwrap();
        let e = Curve::from_ints(f5, [0, 0, 0, 1, 0]).unwrap();
        let (p, q) = (Point::Affine(0, 0), Point::Affine(2, 0));
        assert_eq!(weil_pairing(&e, &p, &q, 2).unwrap(), 4);
        assert_eq!(weil_pairing(&e, &p, &p, 2).unwrap(), 1);
    }

    #[test]
    fn rejects_non_torsion() {
        let f7 = PrimeField::new(7).unwrap();
        let e = Curve::from_ints(f7, [0, 0, 0, 1, 1]).unwrap();
        let pts = e.points().unwrap();
        let p = pts.iter().find(|p| !e.mul(3, p).is_infinity()).unwrap();
        assert_eq!(weil_pairing(&e, p, p, 3), Err(CurveError::NotTorsion(3)));
    }
}
