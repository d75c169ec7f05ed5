use super::IsogenyError;
use crate::curve::{Curve, CurveError, Point};
use crate::field::{is_prime, Embed, Field, Poly};

/// A separable isogeny of prime degree ℓ with kernel `⟨kernel_point⟩`,
/// stored as rational maps
/// `X = x_num(x) / x_den(x)`, `Y = (y·y_lin(x) + y_const(x)) / y_den(x)`.
#[derive(Clone, Debug)]
pub struct Isogeny<F: Field> {
    domain: Curve<F>,
    codomain: Curve<F>,
    ell: u64,
    kernel_point: Point<F::Elem>,
    kernel: Vec<Point<F::Elem>>,
    x_num: Poly<F::Elem>,
    x_den: Poly<F::Elem>,
    y_lin: Poly<F::Elem>,
    y_const: Poly<F::Elem>,
    y_den: Poly<F::Elem>,
}

/// Largest kernel order accepted by [`velu_quotient`].
pub const MAX_DEGREE: u64 = 1000;

/// `E → E/⟨P⟩` by Vélu's formulas for long Weierstrass curves.
pub fn velu_quotient<F: Field>(curve: &Curve<F>, kernel_point: &Point<F::Elem>) -> Result<Isogeny<F>, IsogenyError> {
    if !curve.contains(kernel_point) {
        return Err(CurveError::NotOnCurve.into());
    }
    let ell = curve
        .point_order(kernel_point, MAX_DEGREE)
        .filter(|&n| is_prime(n))
        .ok_or(IsogenyError::NotPrimeOrder)?;
    if ell == curve.field().characteristic() {
        return Err(CurveError::BadEll(ell).into());
    }
    let f = curve.field();
    let c = |n: i64| f.from_i64(n);
    let [a1, a2, a3, a4, a6] = curve.coeffs().clone();
    let [b2, ..] = curve.b_invariants();

    let mut kernel = vec![Point::Infinity, kernel_point.clone()];
    for _ in 2..ell {
        kernel.push(curve.add(kernel.last().unwrap(), kernel_point));
    }
    // one representative from each pair ±Q
    let reps: Vec<&Point<F::Elem>> = if ell == 2 { vec![&kernel[1]] } else { kernel[1..=((ell as usize - 1) / 2)].iter().collect() };

    struct Term<E> {
        xq: E,
        yq: E,
        gx: E,
        gy: E,
        vq: E,
        uq: E,
        two: bool,
    }
    let mut terms = Vec::new();
    let (mut v, mut w) = (f.zero(), f.zero());
    for q in reps {
        let Point::Affine(xq, yq) = q else { unreachable!("nonzero kernel point") };
        let gx = [f.mul(&c(3), &f.square(xq)), f.mul(&c(2), &f.mul(&a2, xq)), a4.clone(), f.neg(&f.mul(&a1, yq))]
            .iter()
            .fold(f.zero(), |acc, t| f.add(&acc, t));
        let gy = f.neg(&f.add(&f.mul(&c(2), yq), &f.add(&f.mul(&a1, xq), &a3)));
        let two = f.is_zero(&gy);
        let vq = if two { gx.clone() } else { f.sub(&f.mul(&c(2), &gx), &f.mul(&a1, &gy)) };
        let uq = f.square(&gy);
        v = f.add(&v, &vq);
        w = f.add(&w, &f.add(&uq, &f.mul(xq, &vq)));
        terms.push(Term { xq: xq.clone(), yq: yq.clone(), gx, gy, vq, uq, two });
    }
    let big_a4 = f.sub(&a4, &f.mul(&c(5), &v));
    let big_a6 = f.sub(&f.sub(&a6, &f.mul(&b2, &v)), &f.mul(&c(7), &w));
    let codomain = Curve::new(f.clone(), [a1.clone(), a2.clone(), a3.clone(), big_a4, big_a6]).map_err(|e| match e {
        CurveError::Singular => IsogenyError::SingularCodomain,
        other => other.into(),
    })?;

    let x = Poly::x(f);
    let lin = |t: &Term<F::Elem>| Poly::linear_root(f, &t.xq);
    let product = |power: fn(&Term<F::Elem>) -> u32| {
        terms.iter().fold(Poly::one(f), |acc, t| acc.mul(&lin(t).pow(power(t), f), f))
    };
    // den / (x − x_Q)^m, exact
    let cofactor = |den: &Poly<F::Elem>, t: &Term<F::Elem>, m: u32| {
        let (q, r) = den.div_rem(&lin(t).pow(m, f), f);
        debug_assert!(r.is_zero());
        q
    };

    let x_den = product(|t| if t.two { 1 } else { 2 });
    let mut x_num = x.mul(&x_den, f);
    for t in &terms {
        x_num = x_num.add(&cofactor(&x_den, t, 1).scale(&t.vq, f), f);
        if !t.two {
            x_num = x_num.add(&cofactor(&x_den, t, 2).scale(&t.uq, f), f);
        }
    }

    let y_den = product(|t| if t.two { 2 } else { 3 });
    let a1x_a3 = Poly::new(f, vec![a3.clone(), a1.clone()]);
    let mut y_lin = y_den.clone();
    let mut y_const = Poly::zero();
    for t in &terms {
        let c2 = cofactor(&y_den, t, 2);
        y_lin = y_lin.sub(&c2.scale(&t.vq, f), f);
        // vq·(a1(x − xq) − yq) + (a1·uq − gx·gy), over (x − xq)²
        let quad = Poly::new(f, vec![f.sub(&f.neg(&f.mul(&a1, &t.xq)), &t.yq), a1.clone()])
            .scale(&t.vq, f)
            .add(&Poly::constant(f, f.sub(&f.mul(&a1, &t.uq), &f.mul(&t.gx, &t.gy))), f);
        y_const = y_const.sub(&c2.mul(&quad, f), f);
        if !t.two {
            let c3 = cofactor(&y_den, t, 3);
            y_lin = y_lin.sub(&c3.scale(&f.mul(&c(2), &t.uq), f), f);
            y_const = y_const.sub(&c3.mul(&a1x_a3, f).scale(&t.uq, f), f);
        }
    }

    Ok(Isogeny {
        domain: curve.clone(),
        codomain,
        ell,
        kernel_point: kernel_point.clone(),
        kernel,
        x_num,
        x_den,
        y_lin,
        y_const,
        y_den,
    })
}

impl<F: Field> Isogeny<F> {
    pub fn domain(&self) -> &Curve<F> {
        &self.domain
    }

    pub fn codomain(&self) -> &Curve<F> {
        &self.codomain
    }

    pub fn degree(&self) -> u64 {
        self.ell
    }

    pub fn kernel_point(&self) -> &Point<F::Elem> {
        &self.kernel_point
    }

    /// All ℓ kernel points, starting with infinity.
    pub fn kernel(&self) -> &[Point<F::Elem>] {
        &self.kernel
    }

    /// `(x_num, x_den)` of the x-coordinate map.
    pub fn x_map(&self) -> (&Poly<F::Elem>, &Poly<F::Elem>) {
        (&self.x_num, &self.x_den)
    }

    /// `Π (x − x_Q)` over the nonzero kernel points up to sign.
    pub fn kernel_polynomial(&self) -> Poly<F::Elem> {
        let f = self.domain.field();
        let mut xs: Vec<&F::Elem> = self.kernel.iter().filter_map(|p| p.x()).collect();
        xs.sort();
        xs.dedup();
        xs.into_iter().fold(Poly::one(f), |acc, xq| acc.mul(&Poly::linear_root(f, xq), f))
    }

    pub fn eval(&self, p: &Point<F::Elem>) -> Point<F::Elem> {
        let Point::Affine(x, y) = p else { return Point::Infinity };
        let f = self.domain.field();
        let dx = self.x_den.eval(x, f);
        if f.is_zero(&dx) {
            return Point::Infinity;
        }
        let big_x = f.div(&self.x_num.eval(x, f), &dx).unwrap();
        let num_y = f.add(&f.mul(y, &self.y_lin.eval(x, f)), &self.y_const.eval(x, f));
        let big_y = f.div(&num_y, &self.y_den.eval(x, f)).expect("y denominator shares roots with x denominator");
        Point::Affine(big_x, big_y)
    }

    /// Checked evaluation.
    pub fn try_eval(&self, p: &Point<F::Elem>) -> Result<Point<F::Elem>, IsogenyError> {
        if !self.domain.contains(p) {
            return Err(CurveError::NotOnCurve.into());
        }
        Ok(self.eval(p))
    }

    /// The same isogeny over an extension field.
    pub fn base_change<G: Embed<F>>(&self, target: &G) -> Isogeny<G> {
        let map = |p: &Poly<F::Elem>| p.map(target, |c| target.embed(c));
        Isogeny {
            domain: self.domain.base_change(target),
            codomain: self.codomain.base_change(target),
            ell: self.ell,
            kernel_point: self.domain.embed_point(target, &self.kernel_point),
            kernel: self.kernel.iter().map(|p| self.domain.embed_point(target, p)).collect(),
            x_num: map(&self.x_num),
            x_den: map(&self.x_den),
            y_lin: map(&self.y_lin),
            y_const: map(&self.y_const),
            y_den: map(&self.y_den),
        }
    }
}
