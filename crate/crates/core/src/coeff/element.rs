use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::{CoeffField, Repr};
use crate::error::{Error, Result};

/// An element of a [`CoeffField`], in canonical form.
#[derive(Clone)]
pub struct FieldElement {
    field: CoeffField,
    repr: Repr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic on two elements of the same field.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl FieldElement {
    pub(crate) fn from_repr(field: CoeffField, repr: Repr) -> Self {
        FieldElement { field, repr }
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    pub(crate) fn into_repr(self) -> Repr {
        self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_r(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        self.field.is_one_r(&self.repr)
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.spec_string(), other.field.spec_string()))
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(Self::from_repr(self.field.clone(), self.field.add_r(&self.repr, &other.repr)))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(Self::from_repr(self.field.clone(), self.field.sub_r(&self.repr, &other.repr)))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(Self::from_repr(self.field.clone(), self.field.mul_r(&self.repr, &other.repr)))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(Self::from_repr(self.field.clone(), self.field.div_r(&self.repr, &other.repr)?))
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        let r = self.field.inv_r(&self.repr).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_repr(self.field.clone(), r))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        Self::from_repr(self.field.clone(), self.field.pow_r(&self.repr, e))
    }

    /// The value as a rational number when it lies in ℚ.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.field.as_rational_r(&self.repr)
    }

    /// Deterministic total order used for sorting output.
    pub fn canonical_cmp(&self, other: &FieldElement) -> std::cmp::Ordering {
        self.repr.canonical_cmp(&other.repr)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.repr == other.repr
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_r(&self.repr))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

// Operator forms panic on mismatched fields; use the `checked_*` methods
// where operands come from different sources.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::from_repr(self.field.clone(), self.field.neg_r(&self.repr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::UniPoly;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_sum() {
        let f = CoeffField::rationals();
        let a = f.from_rational(&q(1, 2)).unwrap();
        let b = f.from_rational(&q(1, 3)).unwrap();
        assert_eq!(arith(&a, &b, ArithOp::Add).unwrap(), f.from_rational(&q(5, 6)).unwrap());
    }

    #[test]
    fn prime_product() {
        let f = CoeffField::prime(5).unwrap();
        assert_eq!(&f.from_i64(3) * &f.from_i64(4), f.from_i64(2));
    }

    #[test]
    fn gaussian_unit_squares_to_minus_one() {
        let f = CoeffField::rationals();
        let qi = f.adjoin_root(&UniPoly::from_i64(&f, &[1, 0, 1]), "i").unwrap();
        let i = qi.generator().unwrap();
        assert_eq!(&i * &i, qi.from_i64(-1));
        assert_eq!(i.inverse().unwrap(), -&i);
    }

    #[test]
    fn errors() {
        let f = CoeffField::rationals();
        let g = CoeffField::prime(7).unwrap();
        assert_eq!(f.one().checked_div(&f.zero()), Err(Error::DivisionByZero));
        assert!(matches!(arith(&f.one(), &g.one(), ArithOp::Mul), Err(Error::FieldMismatch(..))));
        assert_eq!(g.from_rational(&q(1, 7)), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_is_signed_in_prime_fields() {
        let f = CoeffField::prime(101).unwrap();
        assert_eq!(f.from_i64(-1).to_string(), "-1");
        assert_eq!(f.from_i64(50).to_string(), "50");
        assert_eq!(f.from_i64(51).to_string(), "-50");
    }
}
