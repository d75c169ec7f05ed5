use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, FieldError, Poly};

/// The rationals, with exact arbitrary-precision elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl RationalField {
    pub fn ratio(&self, num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }
}

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = a.numer().sqrt();
        let d = a.denom().sqrt();
        (&n * &n == *a.numer() && &d * &d == *a.denom()).then(|| BigRational::new(n, d))
    }

    fn roots(&self, f: &Poly<BigRational>) -> Result<Vec<BigRational>, FieldError> {
        rational_roots(f)
    }
}

/// All rational roots, by clearing denominators and testing the candidates
/// allowed by the rational root theorem.
pub fn rational_roots(f: &Poly<BigRational>) -> Result<Vec<BigRational>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let lcm = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
    let mut out = Vec::new();
    let shift = ints.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        out.push(BigRational::zero());
        ints.drain(..shift);
    }
    if ints.len() > 1 {
        let q = RationalField;
        let reduced = Poly::new(&q, ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
        let nums = divisors(&ints[0])?;
        let dens = divisors(ints.last().unwrap())?;
        for n in &nums {
            for d in &dens {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(*n) * sign, BigInt::from(*d));
                    if reduced.eval(&cand, &q).is_zero() {
                        out.push(cand);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn divisors(n: &BigInt) -> Result<Vec<u128>, FieldError> {
    let n = n
        .abs()
        .to_u128()
        .filter(|&v| v < (1u128 << 48))
        .ok_or_else(|| FieldError::Capability("rational root search limited to coefficients below 2^48".into()))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}
