use super::IsogenyError;
use crate::curve::{Curve, CurveError, Point};
use crate::field::Field;

/// `E₃: y² + wxy + vy = x³` with `P = (0, 0)` of order 3, and
/// `E₃′: y² + wxy + vy = x³ − 5wv·x − v(w³ + 7v)`.
pub fn family_e3<F: Field>(
    field: &F,
    v: &F::Elem,
    w: &F::Elem,
) -> Result<(Curve<F>, Point<F::Elem>, Curve<F>), IsogenyError> {
    let f = field;
    let z = f.zero();
    let singular = |e: CurveError| match e {
        CurveError::Singular => IsogenyError::SingularParameters,
        other => other.into(),
    };
    let e3 = Curve::new(f.clone(), [w.clone(), z.clone(), v.clone(), z.clone(), z.clone()]).map_err(singular)?;
    let a4 = f.neg(&f.mul(&f.from_i64(5), &f.mul(w, v)));
    let w3 = f.mul(w, &f.square(w));
    let a6 = f.neg(&f.mul(v, &f.add(&w3, &f.mul(&f.from_i64(7), v))));
    let e3p = Curve::new(f.clone(), [w.clone(), z.clone(), v.clone(), a4, a6]).map_err(singular)?;
    let p = Point::Affine(z.clone(), z);
    if e3.point_order(&p, 3) != Some(3) {
        return Err(IsogenyError::Internal("(0, 0) is not of order 3".into()));
    }
    Ok((e3, p, e3p))
}
