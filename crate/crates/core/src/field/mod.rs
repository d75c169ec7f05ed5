//! Exact arithmetic substrate: prime fields, extension fields F_{p^k},
//! dense univariate polynomials and arbitrary-precision rationals.
//!
//! Fields are context objects in the style of `field.mul(&a, &b)`; elements
//! are plain canonical representations. The checked, handle-carrying
//! [`FieldElement`] wraps this for callers that need mixed-field detection.

mod element;
mod ext;
mod poly;
mod prime;
mod rational;
mod roots;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::Rng;

pub use element::{field_arith, ArithOp, FieldElement, FieldHandle};
pub use ext::{find_irreducible, is_irreducible, ExtField, Fqk};
pub use poly::Poly;
pub use prime::{is_prime, PrimeField, MAX_CHARACTERISTIC};
pub use rational::{rational_roots, RationalField};
pub use roots::{
    distinct_degree_factorization, equal_degree_factorization, factor_squarefree,
    finite_field_roots, roots_by_splitting, roots_exhaustive, EXHAUSTIVE_ROOT_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not below 2^32")]
    CharacteristicTooLarge(u64),
    #[error("modulus is not monic irreducible of degree {0} over F_{1}")]
    ReducibleModulus(usize, u64),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("capability exceeded: {0}")]
    Capability(String),
}

/// A field given as a context object.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Some square root, if one exists in this field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// All roots of `f` in this field, ascending and without repetition.
    fn roots(&self, f: &Poly<Self::Elem>) -> Result<Vec<Self::Elem>, FieldError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }
}

/// Finite fields F_q, q = p^k.
pub trait FiniteField: Field {
    fn prime(&self) -> u64;
    fn degree(&self) -> usize;

    fn size(&self) -> BigUint {
        BigUint::from(self.prime()).pow(self.degree() as u32)
    }

    /// Field size when it fits in a `u64`.
    fn size_u64(&self) -> Option<u64> {
        u64::try_from(self.size()).ok()
    }

    /// The absolute Frobenius `a ↦ a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    /// Enumeration order used by exhaustive searches: base-p digits of `index`
    /// are the coordinates.
    fn element_at(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) || self.prime() == 2 {
            return true;
        }
        let e = (self.size() - 1u32) >> 1;
        self.is_one(&self.pow_big(a, &e))
    }
}

/// Field embeddings `S ↪ Self` used for base change.
pub trait Embed<S: Field>: Field {
    fn embed(&self, a: &S::Elem) -> Self::Elem;
}

impl<F: Field> Embed<F> for F {
    fn embed(&self, a: &F::Elem) -> F::Elem {
        a.clone()
    }
}
