//! JSON-friendly curve records: `{"p", "k", "modulus", "a": [a1,a2,a3,a4,a6]}`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Curve, CurveError, Point};
use crate::field::{ExtField, Field, FiniteField, Fqk, PrimeField, RationalField};

/// A field element as a residue, a coefficient array (low degree first) or
/// a rational string `"n/d"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRecord {
    Int(u64),
    Coeffs(Vec<u64>),
    Rational(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    /// 0 for the rationals.
    pub p: u64,
    pub k: usize,
    /// Extension modulus, low degree first; empty for prime fields and ℚ.
    pub modulus: Vec<u64>,
    pub a: Vec<ElemRecord>,
}

/// Fields whose elements and curves can be written as records.
pub trait RecordField: Field {
    fn elem_record(&self, a: &Self::Elem) -> ElemRecord;
    fn parse_elem(&self, r: &ElemRecord) -> Option<Self::Elem>;
    fn field_record(&self) -> (u64, usize, Vec<u64>);
    fn from_field_record(p: u64, k: usize, modulus: &[u64]) -> Option<Self>;
}

impl RecordField for PrimeField {
    fn elem_record(&self, a: &u64) -> ElemRecord {
        ElemRecord::Int(*a)
    }

    fn parse_elem(&self, r: &ElemRecord) -> Option<u64> {
        match r {
            ElemRecord::Int(v) => Some(self.reduce(*v)),
            ElemRecord::Coeffs(c) if c.len() <= 1 => Some(self.reduce(c.first().copied().unwrap_or(0))),
            _ => None,
        }
    }

    fn field_record(&self) -> (u64, usize, Vec<u64>) {
        (self.p(), 1, Vec::new())
    }

    fn from_field_record(p: u64, k: usize, _modulus: &[u64]) -> Option<Self> {
        (k == 1).then(|| PrimeField::new(p).ok()).flatten()
    }
}

impl RecordField for ExtField {
    fn elem_record(&self, a: &Fqk) -> ElemRecord {
        ElemRecord::Coeffs(a.coeffs().to_vec())
    }

    fn parse_elem(&self, r: &ElemRecord) -> Option<Fqk> {
        match r {
            ElemRecord::Int(v) => Some(self.element(&[*v])),
            ElemRecord::Coeffs(c) if c.len() <= self.degree() => Some(self.element(c)),
            _ => None,
        }
    }

    fn field_record(&self) -> (u64, usize, Vec<u64>) {
        (self.characteristic(), self.degree(), self.modulus().to_vec())
    }

    fn from_field_record(p: u64, k: usize, modulus: &[u64]) -> Option<Self> {
        let f = if modulus.is_empty() { ExtField::canonical(p, k) } else { ExtField::new(p, modulus.to_vec()) };
        f.ok().filter(|f| f.degree() == k)
    }
}

impl RecordField for RationalField {
    fn elem_record(&self, a: &BigRational) -> ElemRecord {
        ElemRecord::Rational(a.to_string())
    }

    fn parse_elem(&self, r: &ElemRecord) -> Option<BigRational> {
        match r {
            ElemRecord::Int(v) => Some(self.from_i64(i64::try_from(*v).ok()?)),
            ElemRecord::Rational(s) => s.parse().ok(),
            ElemRecord::Coeffs(_) => None,
        }
    }

    fn field_record(&self) -> (u64, usize, Vec<u64>) {
        (0, 1, Vec::new())
    }

    fn from_field_record(p: u64, k: usize, _modulus: &[u64]) -> Option<Self> {
        (p == 0 && k == 1).then_some(RationalField)
    }
}

impl<F: RecordField> Curve<F> {
    pub fn to_record(&self) -> CurveRecord {
        let (p, k, modulus) = self.field().field_record();
        CurveRecord { p, k, modulus, a: self.coeffs().iter().map(|c| self.field().elem_record(c)).collect() }
    }

    pub fn from_record(r: &CurveRecord) -> Result<Self, CurveError> {
        let bad = || CurveError::Internal("malformed curve record".into());
        let field = F::from_field_record(r.p, r.k, &r.modulus).ok_or_else(bad)?;
        if r.a.len() != 5 {
            return Err(bad());
        }
        let a: Vec<F::Elem> = r.a.iter().map(|c| field.parse_elem(c)).collect::<Option<_>>().ok_or_else(bad)?;
        Curve::new(field, a.try_into().map_err(|_| bad())?)
    }

    /// `null` for infinity, else `[x, y]`.
    pub fn point_record(&self, p: &Point<F::Elem>) -> Option<[ElemRecord; 2]> {
        match p {
            Point::Infinity => None,
            Point::Affine(x, y) => Some([self.field().elem_record(x), self.field().elem_record(y)]),
        }
    }

    pub fn parse_point(&self, r: &Option<[ElemRecord; 2]>) -> Result<Point<F::Elem>, CurveError> {
        let p = match r {
            None => Point::Infinity,
            Some([x, y]) => {
                let bad = || CurveError::Internal("malformed point record".into());
                Point::Affine(self.field().parse_elem(x).ok_or_else(bad)?, self.field().parse_elem(y).ok_or_else(bad)?)
            }
        };
        if !self.contains(&p) {
            return Err(CurveError::NotOnCurve);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let e = Curve::from_ints(PrimeField::new(101).unwrap(), [1, 2, 3, 4, 5]).unwrap();
        let json = serde_json::to_string(&e.to_record()).unwrap();
        assert_eq!(json, r#"{"p":101,"k":1,"modulus":[],"a":[1,2,3,4,5]}"#);
        let back: Curve<PrimeField> = Curve::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, e);

        let q = Curve::from_ints(RationalField, [1, 0, 2, -10, -30]).unwrap();
        let back: Curve<RationalField> = Curve::from_record(&q.to_record()).unwrap();
        assert_eq!(back, q);

        let k = ExtField::canonical(7, 2).unwrap();
        let e2 = Curve::new(k.clone(), [k.zero(), k.zero(), k.zero(), k.generator(), k.one()]).unwrap();
        let back: Curve<ExtField> = Curve::from_record(&e2.to_record()).unwrap();
        assert_eq!(back, e2);
    }
}
