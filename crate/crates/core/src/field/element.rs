use super::{ExtField, Field, FieldError, Fqk, PrimeField};

/// A field handle for dynamically checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldHandle {
    Prime(PrimeField),
    Extension(ExtField),
}

impl FieldHandle {
    pub fn characteristic(&self) -> u64 {
        match self {
            Self::Prime(f) => f.p(),
            Self::Extension(f) => f.characteristic(),
        }
    }
}

/// An element tagged with the field it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldHandle,
    coeffs: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    /// Canonical element from residues (coefficients low to high for
    /// extensions).
    pub fn new(field: FieldHandle, coeffs: &[u64]) -> Self {
        let coeffs = match &field {
            FieldHandle::Prime(f) => vec![coeffs.first().map_or(0, |c| f.reduce(*c))],
            FieldHandle::Extension(f) => f.element(coeffs).0.to_vec(),
        };
        Self { field, coeffs }
    }

    pub fn field(&self) -> &FieldHandle {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Checked binary arithmetic on tagged elements.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    if a.field != b.field {
        return Err(FieldError::MixedFields);
    }
    if op == ArithOp::Div && b.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    let coeffs = match &a.field {
        FieldHandle::Prime(f) => {
            let (x, y) = (a.coeffs[0], b.coeffs[0]);
            vec![apply(f, &x, &y, op)]
        }
        FieldHandle::Extension(f) => {
            let x = Fqk(a.coeffs.iter().copied().collect());
            let y = Fqk(b.coeffs.iter().copied().collect());
            apply(f, &x, &y, op).0.to_vec()
        }
    };
    Ok(FieldElement { field: a.field.clone(), coeffs })
}

fn apply<F: Field>(f: &F, x: &F::Elem, y: &F::Elem, op: ArithOp) -> F::Elem {
    match op {
        ArithOp::Add => f.add(x, y),
        ArithOp::Sub => f.sub(x, y),
        ArithOp::Mul => f.mul(x, y),
        ArithOp::Div => f.div(x, y).expect("nonzero divisor checked"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_style_examples() {
        let f7 = FieldHandle::Prime(PrimeField::new(7).unwrap());
        let one = FieldElement::new(f7.clone(), &[1]);
        let three = FieldElement::new(f7.clone(), &[3]);
        assert_eq!(field_arith(&one, &three, ArithOp::Div).unwrap().coeffs(), &[5]);

        let f25 = FieldHandle::Extension(ExtField::new(5, vec![2, 0, 1]).unwrap());
        let t = FieldElement::new(f25.clone(), &[0, 1]);
        assert_eq!(field_arith(&t, &t, ArithOp::Mul).unwrap().coeffs(), &[3, 0]);

        let x = FieldElement::new(f7.clone(), &[4]);
        let minus = field_arith(&FieldElement::new(f7.clone(), &[6]), &x, ArithOp::Mul).unwrap();
        assert!(field_arith(&x, &minus, ArithOp::Add).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let f7 = FieldHandle::Prime(PrimeField::new(7).unwrap());
        let f11 = FieldHandle::Prime(PrimeField::new(11).unwrap());
        let a = FieldElement::new(f7.clone(), &[2]);
        let b = FieldElement::new(f11, &[2]);
        assert_eq!(field_arith(&a, &b, ArithOp::Add), Err(FieldError::MixedFields));
        let z = FieldElement::new(f7, &[0]);
        assert_eq!(field_arith(&a, &z, ArithOp::Div), Err(FieldError::DivisionByZero));
    }
}
