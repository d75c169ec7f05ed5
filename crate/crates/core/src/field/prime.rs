use num_bigint::BigUint;
use rand::Rng;

use super::{roots, Field, FieldError, FiniteField, Poly};

/// Largest admissible characteristic (exclusive). Products of two reduced
/// residues then fit in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 32;

/// The prime field F_p with `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_CHARACTERISTIC {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Legendre symbol as 1, -1 or 0.
    pub fn legendre(&self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if self.pow(&a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }

    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn sqrt(&self, a: &u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 || self.p == 2 {
            return Some(a);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p;
        // Tonelli-Shanks
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| self.legendre(z) == -1)?;
        let mut m = s;
        let mut c = self.pow(&z, q);
        let mut t = self.pow(&a, q);
        let mut r = self.pow(&a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let b = self.pow(&c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r.min(p - r))
    }

    fn roots(&self, f: &Poly<u64>) -> Result<Vec<u64>, FieldError> {
        roots::finite_field_roots(self, f)
    }
}

impl FiniteField for PrimeField {
    fn prime(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> usize {
        1
    }

    fn size(&self) -> BigUint {
        BigUint::from(self.p)
    }

    fn size_u64(&self) -> Option<u64> {
        Some(self.p)
    }

    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }

    fn element_at(&self, index: u64) -> u64 {
        index % self.p
    }

    fn index_of(&self, a: &u64) -> u64 {
        *a
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// Deterministic primality test for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_three_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn additive_inverse_cancels() {
        let f = PrimeField::new(101).unwrap();
        for x in 0..101 {
            let y = f.mul(&(100), &x);
            assert_eq!(f.add(&x, &y), 0);
        }
    }

    #[test]
    fn rejects_composites_and_huge() {
        assert_eq!(PrimeField::new(91), Err(FieldError::NotPrime(91)));
        assert!(matches!(
            PrimeField::new(4294967311),
            Err(FieldError::CharacteristicTooLarge(_))
        ));
    }

    #[test]
    fn sqrt_agrees_with_enumeration() {
        for p in [3u64, 5, 7, 13, 17, 97, 193] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                let has = (0..p).any(|y| y * y % p == a);
                match f.sqrt(&a) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(!has, "missed sqrt of {a} mod {p}"),
                }
            }
        }
    }

    #[test]
    fn primality_matches_trial_division() {
        let slow = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), slow(n), "{n}");
        }
        assert!(is_prime(4294967291));
        assert!(!is_prime(4294967297));
    }
}
