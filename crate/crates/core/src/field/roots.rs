//! Root finding and factorization over finite fields.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FieldError, FiniteField, Poly};

/// Fields up to this size are searched exhaustively.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 20;

const SPLIT_SEED: u64 = 0x005e_ed0f_1507;

/// Roots of `f` in `field`: exhaustive scan for small fields, otherwise
/// `gcd(f, x^q - x)` followed by equal-degree splitting.
pub fn finite_field_roots<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Result<Vec<F::Elem>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    match field.size_u64() {
        Some(q) if q <= EXHAUSTIVE_ROOT_LIMIT => roots_exhaustive(field, f),
        _ => roots_by_splitting(field, f),
    }
}

pub fn roots_exhaustive<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Result<Vec<F::Elem>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let q = field
        .size_u64()
        .filter(|&q| q <= EXHAUSTIVE_ROOT_LIMIT)
        .ok_or_else(|| FieldError::Capability(format!("exhaustive root scan limited to fields of size <= {EXHAUSTIVE_ROOT_LIMIT}")))?;
    let mut out: Vec<F::Elem> = (0..q)
        .map(|i| field.element_at(i))
        .filter(|x| field.is_zero(&f.eval(x, field)))
        .collect();
    out.sort();
    Ok(out)
}

pub fn roots_by_splitting<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Result<Vec<F::Elem>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let f = f.monic(field);
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x = Poly::x(field);
    let xq = x.pow_mod(&field.size(), &f, field);
    let g = f.gcd(&xq.sub(&x, field), field);
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out: Vec<F::Elem> = equal_degree_factorization(field, &g, 1, &mut rng)
        .into_iter()
        .map(|lin| field.neg(&lin.coeffs()[0]))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Splits a monic squarefree `g` whose irreducible factors all have degree
/// `d` (Cantor–Zassenhaus; trace map in characteristic 2).
pub fn equal_degree_factorization<F: FiniteField, R: rand::Rng>(
    field: &F,
    g: &Poly<F::Elem>,
    d: usize,
    rng: &mut R,
) -> Vec<Poly<F::Elem>> {
    let Some(n) = g.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![g.monic(field)];
    }
    let q = field.size();
    let odd_exp = (q.pow(d as u32) - 1u32) >> 1;
    let one = Poly::one(field);
    loop {
        let a = Poly::new(field, (0..n).map(|_| field.random(rng)).collect());
        if a.degree().is_none_or(|da| da == 0) {
            continue;
        }
        let b = if field.prime() == 2 {
            // absolute trace to F_2
            let steps = d * field.degree();
            let mut term = a.rem(g, field);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = term.square(field).rem(g, field);
                acc = acc.add(&term, field);
            }
            acc
        } else {
            a.pow_mod(&odd_exp, g, field).sub(&one, field)
        };
        let h = g.gcd(&b, field);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let (rest, _) = g.div_rem(&h, field);
            let mut out = equal_degree_factorization(field, &h, d, rng);
            out.extend(equal_degree_factorization(field, &rest.monic(field), d, rng));
            return out;
        }
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(d, product of all irreducible factors of degree d)`.
pub fn distinct_degree_factorization<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Vec<(usize, Poly<F::Elem>)> {
    let mut out = Vec::new();
    let mut rest = f.monic(field);
    let x = Poly::x(field);
    let q: BigUint = field.size();
    let mut h = x.rem(&rest, field);
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push((deg, rest.clone()));
            break;
        }
        h = h.pow_mod(&q, &rest, field);
        let g = rest.gcd(&h.sub(&x, field), field);
        if g.degree().is_some_and(|dg| dg > 0) {
            rest = rest.div_rem(&g, field).0.monic(field);
            h = h.rem(&rest, field);
            out.push((d, g));
        }
    }
    out
}

/// Irreducible monic factors of a squarefree polynomial, sorted by
/// `(degree, coefficients)`.
pub fn factor_squarefree<F: FiniteField>(field: &F, f: &Poly<F::Elem>) -> Vec<Poly<F::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out: Vec<Poly<F::Elem>> = distinct_degree_factorization(field, f)
        .into_iter()
        .flat_map(|(d, g)| equal_degree_factorization(field, &g, d, &mut rng))
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())));
    out
}
