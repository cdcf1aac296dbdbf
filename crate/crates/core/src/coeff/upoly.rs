//! Dense univariate polynomials over a coefficient field.

use std::fmt;

use num_bigint::BigUint;

use super::{CoeffField, FieldElement, Repr};
use crate::error::{Error, Result};

pub(crate) fn trim(f: &CoeffField, v: &mut Vec<Repr>) {
    while v.last().is_some_and(|c| f.is_zero_r(c)) {
        v.pop();
    }
}

pub(crate) fn padd(f: &CoeffField, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => out.push(f.add_r(x, y)),
            (Some(x), None) | (None, Some(x)) => out.push(x.clone()),
            (None, None) => unreachable!(),
        }
    }
    trim(f, &mut out);
    out
}

pub(crate) fn pneg(f: &CoeffField, a: &[Repr]) -> Vec<Repr> {
    a.iter().map(|c| f.neg_r(c)).collect()
}

pub(crate) fn psub(f: &CoeffField, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    padd(f, a, &pneg(f, b))
}

pub(crate) fn pscale(f: &CoeffField, a: &[Repr], c: &Repr) -> Vec<Repr> {
    if f.is_zero_r(c) {
        return vec![];
    }
    let mut out: Vec<Repr> = a.iter().map(|x| f.mul_r(x, c)).collect();
    trim(f, &mut out);
    out
}

pub(crate) fn pmul(f: &CoeffField, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero_r(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero_r(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = f.mul_r(x, y);
            out[i + j] = f.add_r(&out[i + j], &t);
        }
    }
    trim(f, &mut out);
    out
}

/// Division with remainder by a nonzero polynomial.
pub(crate) fn pdivrem(f: &CoeffField, a: &[Repr], b: &[Repr]) -> (Vec<Repr>, Vec<Repr>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let lead_inv = f.inv_r(b.last().unwrap()).unwrap();
    let mut r = a.to_vec();
    trim(f, &mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![f.zero_r(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = f.mul_r(r.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let t = f.mul_r(&c, bj);
            r[shift + j] = f.sub_r(&r[shift + j], &t);
        }
        q[shift] = c;
        trim(f, &mut r);
    }
    trim(f, &mut q);
    (q, r)
}

pub(crate) fn pdivrem_monic(f: &CoeffField, a: &[Repr], m: &[Repr]) -> (Vec<Repr>, Vec<Repr>) {
    pdivrem(f, a, m)
}

pub(crate) fn pmonic(f: &CoeffField, a: &[Repr]) -> Vec<Repr> {
    match a.last() {
        None => vec![],
        Some(l) => pscale(f, a, &f.inv_r(l).unwrap()),
    }
}

pub(crate) fn pgcd(f: &CoeffField, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let (_, r) = pdivrem(f, &x, &y);
        x = y;
        y = r;
    }
    pmonic(f, &x)
}

/// Returns `(g, s, t)` with `s·a + t·b = g`.
pub(crate) fn pgcdext(f: &CoeffField, a: &[Repr], b: &[Repr]) -> (Vec<Repr>, Vec<Repr>, Vec<Repr>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one_r()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![f.one_r()]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(f, &r0, &r1);
        let s2 = psub(f, &s0, &pmul(f, &q, &s1));
        let t2 = psub(f, &t0, &pmul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (r0, s0, t0)
}

pub(crate) fn peval(f: &CoeffField, a: &[Repr], x: &Repr) -> Repr {
    let mut acc = f.zero_r();
    for c in a.iter().rev() {
        acc = f.add_r(&f.mul_r(&acc, x), c);
    }
    acc
}

pub(crate) fn pderiv(f: &CoeffField, a: &[Repr]) -> Vec<Repr> {
    let mut out: Vec<Repr> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul_r(c, &f.int_r(&(i as u64).into())))
        .collect();
    trim(f, &mut out);
    out
}

pub(crate) fn ppowmod(f: &CoeffField, a: &[Repr], e: &BigUint, m: &[Repr]) -> Vec<Repr> {
    let mut result = vec![f.one_r()];
    let (_, base) = pdivrem(f, a, m);
    for i in (0..e.bits()).rev() {
        result = pdivrem(f, &pmul(f, &result, &result), m).1;
        if e.bit(i) {
            result = pdivrem(f, &pmul(f, &result, &base), m).1;
        }
    }
    let (_, r) = pdivrem(f, &result, m);
    r
}

/// Writes a sum of terms `coefficient * monomial` in the order given.
///
/// An empty monomial string denotes the constant term.
pub(crate) fn write_terms<'a>(
    field: &CoeffField,
    terms: impl Iterator<Item = (&'a Repr, String)>,
) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let (neg, abs) = match field.negative_part(c) {
            Some(a) => (true, a),
            None => (false, c.clone()),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            let s = field.fmt_r(&abs);
            if field.is_atomic_r(&abs) || out.is_empty() {
                out.push_str(&s);
            } else {
                out.push_str(&format!("({s})"));
            }
        } else if field.is_one_r(&abs) {
            out.push_str(&mono);
        } else if field.is_atomic_r(&abs) {
            out.push_str(&format!("{}*{mono}", field.fmt_r(&abs)));
        } else {
            out.push_str(&format!("({})*{mono}", field.fmt_r(&abs)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A univariate polynomial with coefficients in a [`CoeffField`].
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: CoeffField,
    coeffs: Vec<Repr>,
}

impl UniPoly {
    /// Coefficients from low to high degree.
    pub fn new(field: &CoeffField, coeffs: &[FieldElement]) -> Result<Self> {
        let mut v = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            v.push(field.embed(c)?.into_repr());
        }
        Ok(Self::from_repr(field.clone(), v))
    }

    pub fn from_i64(field: &CoeffField, coeffs: &[i64]) -> Self {
        Self::from_repr(field.clone(), coeffs.iter().map(|&c| field.int_r(&c.into())).collect())
    }

    pub(crate) fn from_repr(field: CoeffField, mut coeffs: Vec<Repr>) -> Self {
        trim(&field, &mut coeffs);
        UniPoly { field, coeffs }
    }

    pub fn zero(field: &CoeffField) -> Self {
        Self::from_repr(field.clone(), vec![])
    }

    /// `Y - r`.
    pub fn linear(root: &FieldElement) -> Self {
        let f = root.field().clone();
        let c = f.neg_r(root.repr());
        Self::from_repr(f.clone(), vec![c, f.one_r()])
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub(crate) fn coeffs_repr(&self) -> &[Repr] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|c| FieldElement::from_repr(self.field.clone(), c.clone())).collect()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        FieldElement::from_repr(
            self.field.clone(),
            self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero_r()),
        )
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one_r(c))
    }

    pub fn monic(&self) -> Self {
        Self::from_repr(self.field.clone(), pmonic(&self.field, &self.coeffs))
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        let xr = self.field.embed(x)?.into_repr();
        Ok(FieldElement::from_repr(self.field.clone(), peval(&self.field, &self.coeffs, &xr)))
    }

    pub fn derivative(&self) -> Self {
        Self::from_repr(self.field.clone(), pderiv(&self.field, &self.coeffs))
    }

    fn check(&self, other: &UniPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.spec_string(), other.field.spec_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &UniPoly) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_repr(self.field.clone(), padd(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &UniPoly) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_repr(self.field.clone(), psub(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn mul(&self, other: &UniPoly) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_repr(self.field.clone(), pmul(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn divrem(&self, other: &UniPoly) -> Result<(Self, Self)> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = pdivrem(&self.field, &self.coeffs, &other.coeffs);
        Ok((Self::from_repr(self.field.clone(), q), Self::from_repr(self.field.clone(), r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_repr(self.field.clone(), pgcd(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn embed_into(&self, target: &CoeffField) -> Result<Self> {
        if !self.field.is_subfield_of(target) {
            return Err(Error::FieldMismatch(self.field.spec_string(), target.spec_string()));
        }
        Ok(Self::from_repr(
            target.clone(),
            self.coeffs.iter().map(|c| target.embed_r(&self.field, c)).collect(),
        ))
    }

    /// Renders with the given indeterminate name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        let terms = self.coeffs.iter().enumerate().rev().filter(|(_, c)| !self.field.is_zero_r(c)).map(
            |(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                (c, mono)
            },
        );
        write_terms(&self.field, terms)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("Y"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}
