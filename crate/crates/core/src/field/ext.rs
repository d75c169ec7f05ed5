use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use smallvec::SmallVec;

use super::{roots, Embed, Field, FieldError, FiniteField, Poly, PrimeField};
use num_bigint::BigUint;

/// Element of F_{p^k}: the coefficient vector (low to high) of the reduced
/// residue of degree `< k`. Always exactly `k` entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fqk(pub SmallVec<[u64; 8]>);

impl Fqk {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for Fqk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0.as_slice())
        }
    }
}

// Ordered as the integer sum c_i p^i, i.e. from the top coefficient down.
impl Ord for Fqk {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Fqk {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct ExtInner {
    base: PrimeField,
    k: usize,
    /// Monic modulus, `k + 1` coefficients.
    modulus: Vec<u64>,
    nonresidue: OnceLock<Option<Fqk>>,
}

/// The extension field F_p[t]/(m(t)).
#[derive(Clone)]
pub struct ExtField {
    inner: Arc<ExtInner>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}[{:?}]", self.inner.base.p(), self.inner.k, self.inner.modulus)
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.base == other.inner.base && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// F_p[t]/(modulus) for a monic modulus given low to high. Irreducibility
    /// is verified.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        let k = modulus.len().saturating_sub(1);
        let poly = Poly::new(&base, modulus.clone());
        if k == 0 || poly.degree() != Some(k) || modulus[k] != 1 || !is_irreducible(&base, &poly) {
            return Err(FieldError::ReducibleModulus(k, p));
        }
        Ok(Self::from_parts(base, modulus))
    }

    fn from_parts(base: PrimeField, modulus: Vec<u64>) -> Self {
        let k = modulus.len() - 1;
        Self {
            inner: Arc::new(ExtInner { base, k, modulus, nonresidue: OnceLock::new() }),
        }
    }

    /// F_{p^k} with the lexicographically smallest irreducible modulus.
    pub fn canonical(p: u64, k: usize) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        let modulus = find_irreducible(p, k)?;
        Ok(Self::from_parts(base, modulus.into_coeffs()))
    }

    /// The image of a base-field element.
    pub fn embed_base(&self, c: u64) -> Fqk {
        Embed::<PrimeField>::embed(self, &c)
    }

    pub fn base(&self) -> &PrimeField {
        &self.inner.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn modulus_poly(&self) -> Poly<u64> {
        Poly::new(&self.inner.base, self.inner.modulus.clone())
    }

    /// Element from a coefficient vector (reduced mod p, padded or reduced mod m).
    pub fn element(&self, coeffs: &[u64]) -> Fqk {
        let base = &self.inner.base;
        let poly = Poly::new(base, coeffs.iter().map(|c| c % base.p()).collect());
        self.from_poly(&poly)
    }

    pub fn from_poly(&self, poly: &Poly<u64>) -> Fqk {
        let r = if poly.degree().is_some_and(|d| d >= self.inner.k) {
            poly.rem(&self.modulus_poly(), &self.inner.base)
        } else {
            poly.clone()
        };
        let mut v: SmallVec<[u64; 8]> = SmallVec::from_slice(r.coeffs());
        v.resize(self.inner.k, 0);
        Fqk(v)
    }

    pub fn to_poly(&self, a: &Fqk) -> Poly<u64> {
        Poly::new(&self.inner.base, a.0.to_vec())
    }

    /// The generator `t` of the extension.
    pub fn generator(&self) -> Fqk {
        self.element(&[0, 1])
    }

    fn nonresidue(&self) -> Option<Fqk> {
        self.inner
            .nonresidue
            .get_or_init(|| {
                let limit = self.size_u64().unwrap_or(u64::MAX);
                (1..limit).map(|i| self.element_at(i)).find(|a| !self.is_square(a))
            })
            .clone()
    }

    fn reduce_wide(&self, wide: &mut [u64]) {
        let p = self.inner.base.p();
        let k = self.inner.k;
        let m = &self.inner.modulus;
        for i in (k..wide.len()).rev() {
            let c = wide[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let t = (c * m[j]) % p;
                let slot = &mut wide[i - k + j];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
            wide[i] = 0;
        }
    }
}

impl Field for ExtField {
    type Elem = Fqk;

    fn zero(&self) -> Fqk {
        Fqk(SmallVec::from_elem(0, self.inner.k))
    }

    fn one(&self) -> Fqk {
        let mut v = SmallVec::from_elem(0, self.inner.k);
        v[0] = 1;
        Fqk(v)
    }

    fn from_i64(&self, n: i64) -> Fqk {
        let mut v = SmallVec::from_elem(0, self.inner.k);
        v[0] = self.inner.base.from_i64(n);
        Fqk(v)
    }

    fn add(&self, a: &Fqk, b: &Fqk) -> Fqk {
        let f = &self.inner.base;
        Fqk(a.0.iter().zip(&b.0).map(|(x, y)| f.add(x, y)).collect())
    }

    fn sub(&self, a: &Fqk, b: &Fqk) -> Fqk {
        let f = &self.inner.base;
        Fqk(a.0.iter().zip(&b.0).map(|(x, y)| f.sub(x, y)).collect())
    }

    fn mul(&self, a: &Fqk, b: &Fqk) -> Fqk {
        let k = self.inner.k;
        let p = self.inner.base.p();
        if k == 1 {
            return Fqk(SmallVec::from_elem((a.0[0] * b.0[0]) % p, 1));
        }
        let mut acc: SmallVec<[u128; 16]> = SmallVec::from_elem(0, 2 * k - 1);
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                acc[i + j] += (*x as u128) * (*y as u128);
            }
        }
        let mut wide: SmallVec<[u64; 16]> = acc.iter().map(|c| (c % p as u128) as u64).collect();
        self.reduce_wide(&mut wide);
        Fqk(SmallVec::from_slice(&wide[..k]))
    }

    fn neg(&self, a: &Fqk) -> Fqk {
        let f = &self.inner.base;
        Fqk(a.0.iter().map(|x| f.neg(x)).collect())
    }

    fn inv(&self, a: &Fqk) -> Option<Fqk> {
        if self.is_zero(a) {
            return None;
        }
        if self.inner.k == 1 {
            return self.inner.base.inv(&a.0[0]).map(|x| Fqk(SmallVec::from_elem(x, 1)));
        }
        let base = &self.inner.base;
        let (g, s, _) = self.to_poly(a).ext_gcd(&self.modulus_poly(), base);
        debug_assert_eq!(g.degree(), Some(0));
        Some(self.from_poly(&s))
    }

    fn is_zero(&self, a: &Fqk) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn characteristic(&self) -> u64 {
        self.inner.base.p()
    }

    fn sqrt(&self, a: &Fqk) -> Option<Fqk> {
        if self.is_zero(a) {
            return Some(a.clone());
        }
        if self.inner.base.p() == 2 {
            // squaring is a bijection; invert it by k-1 further squarings
            let mut r = a.clone();
            for _ in 1..self.inner.k {
                r = self.square(&r);
            }
            return Some(r);
        }
        if !self.is_square(a) {
            return None;
        }
        let z = self.nonresidue()?;
        let q1 = self.size() - 1u32;
        let s = q1.trailing_zeros().unwrap_or(0);
        let t = &q1 >> s;
        let mut m = s;
        let mut c = self.pow_big(&z, &t);
        let mut tt = self.pow_big(a, &t);
        let mut r = self.pow_big(a, &((&t + 1u32) >> 1));
        while !self.is_one(&tt) {
            let mut i = 0u64;
            let mut t2 = tt.clone();
            while !self.is_one(&t2) {
                t2 = self.square(&t2);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        let nr = self.neg(&r);
        Some(r.min(nr))
    }

    fn roots(&self, f: &Poly<Fqk>) -> Result<Vec<Fqk>, FieldError> {
        roots::finite_field_roots(self, f)
    }
}

impl FiniteField for ExtField {
    fn prime(&self) -> u64 {
        self.inner.base.p()
    }

    fn degree(&self) -> usize {
        self.inner.k
    }

    fn frobenius(&self, a: &Fqk) -> Fqk {
        self.pow(a, self.inner.base.p())
    }

    fn element_at(&self, mut index: u64) -> Fqk {
        let p = self.inner.base.p();
        let mut v = SmallVec::from_elem(0, self.inner.k);
        for c in v.iter_mut() {
            *c = index % p;
            index /= p;
        }
        Fqk(v)
    }

    fn index_of(&self, a: &Fqk) -> u64 {
        let p = self.inner.base.p();
        a.0.iter().rev().fold(0u64, |acc, &c| acc.wrapping_mul(p).wrapping_add(c))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fqk {
        let p = self.inner.base.p();
        Fqk((0..self.inner.k).map(|_| rng.gen_range(0..p)).collect())
    }
}

impl Embed<PrimeField> for ExtField {
    fn embed(&self, a: &u64) -> Fqk {
        let mut v = SmallVec::from_elem(0, self.inner.k);
        v[0] = *a % self.inner.base.p();
        Fqk(v)
    }
}

/// Rabin's irreducibility test over F_p.
pub fn is_irreducible(field: &PrimeField, f: &Poly<u64>) -> bool {
    let Some(k) = f.degree() else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let p = BigUint::from(field.p());
    let x = Poly::x(field);
    // x^{p^i} mod f for i = 0..=k
    let mut powers = Vec::with_capacity(k + 1);
    let mut h = x.rem(f, field);
    powers.push(h.clone());
    for _ in 0..k {
        h = h.pow_mod(&p, f, field);
        powers.push(h.clone());
    }
    if powers[k] != x.rem(f, field) {
        return false;
    }
    prime_divisors(k as u64).into_iter().all(|r| {
        let h = &powers[k / r as usize];
        h.sub(&x, field).gcd(f, field).degree() == Some(0)
    })
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn irreducible_cache() -> &'static Mutex<HashMap<(u64, usize), Poly<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Poly<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The lexicographically smallest monic irreducible polynomial of degree `k`
/// over F_p, scanning the lower coefficients as base-p digits with the
/// constant term varying fastest.
pub fn find_irreducible(p: u64, k: usize) -> Result<Poly<u64>, FieldError> {
    let field = PrimeField::new(p)?;
    if k == 0 {
        return Err(FieldError::ReducibleModulus(0, p));
    }
    if let Some(hit) = irreducible_cache().lock().unwrap().get(&(p, k)) {
        return Ok(hit.clone());
    }
    let mut digits = vec![0u64; k];
    let found = loop {
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let f = Poly::new(&field, coeffs);
        if is_irreducible(&field, &f) {
            break f;
        }
        // increment base-p counter; an irreducible always exists before overflow
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    };
    irreducible_cache().lock().unwrap().insert((p, k), found.clone());
    Ok(found)
}
