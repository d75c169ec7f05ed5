use num_bigint::BigUint;

use super::Field;

/// Dense univariate polynomial, coefficients from low to high degree.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and `degree() == None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + Eq> Poly<E> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn new<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, c: E) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// The monomial `x`.
    pub fn x<F: Field<Elem = E>>(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `x - c`.
    pub fn linear_root<F: Field<Elem = E>>(field: &F, c: &E) -> Self {
        Self::new(field, vec![field.neg(c), field.one()])
    }

    pub fn from_ints<F: Field<Elem = E>>(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, field: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    /// Coefficientwise map into another field.
    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&E) -> G::Elem) -> Poly<G::Elem> {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                field.add(a, b)
            })
            .collect();
        Self::new(field, coeffs)
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                field.sub(a, b)
            })
            .collect();
        Self::new(field, coeffs)
    }

    pub fn neg<F: Field<Elem = E>>(&self, field: &F) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, field: &F) -> Self {
        Self::new(field, self.coeffs.iter().map(|a| field.mul(a, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = field.mul(a, b);
                out[i + j] = field.add(&out[i + j], &t);
            }
        }
        Self::new(field, out)
    }

    pub fn square<F: Field<Elem = E>>(&self, field: &F) -> Self {
        self.mul(self, field)
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: u32, field: &F) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(field);
            }
        }
        acc
    }

    /// Euclidean division. Panics on division by the zero polynomial.
    pub fn div_rem<F: Field<Elem = E>>(&self, divisor: &Self, field: &F) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = field
            .inv(divisor.leading().unwrap())
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if field.is_zero(&rem[i]) {
                continue;
            }
            let c = field.mul(&rem[i], &lead_inv);
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = field.mul(&c, d);
                rem[i - dd + j] = field.sub(&rem[i - dd + j], &t);
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(field, quot), Self::new(field, rem))
    }

    pub fn rem<F: Field<Elem = E>>(&self, divisor: &Self, field: &F) -> Self {
        self.div_rem(divisor, field).1
    }

    /// Scaled to leading coefficient one; the zero polynomial is returned unchanged.
    pub fn monic<F: Field<Elem = E>>(&self, field: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = field.inv(l).expect("nonzero leading coefficient");
                self.scale(&inv, field)
            }
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, field);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(field), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, field);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, field), field);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, field), field);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = field.inv(l).unwrap();
                (r0.scale(&inv, field), s0.scale(&inv, field), t0.scale(&inv, field))
            }
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, field: &F) -> E {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative<F: Field<Elem = E>>(&self, field: &F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| field.mul(&field.from_i64(i as i64), c))
            .collect();
        Self::new(field, coeffs)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod<F: Field<Elem = E>>(&self, e: &BigUint, modulus: &Self, field: &F) -> Self {
        let mut acc = Self::one(field).rem(modulus, field);
        let base = self.rem(modulus, field);
        for i in (0..e.bits()).rev() {
            acc = acc.square(field).rem(modulus, field);
            if e.bit(i) {
                acc = acc.mul(&base, field).rem(modulus, field);
            }
        }
        acc
    }

    /// Evaluates `self` at the polynomial `arg`, reduced modulo `modulus`.
    pub fn compose_mod<F: Field<Elem = E>>(&self, arg: &Self, modulus: &Self, field: &F) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(arg, field)
                .add(&Self::constant(field, c.clone()), field)
                .rem(modulus, field);
        }
        acc
    }
}
