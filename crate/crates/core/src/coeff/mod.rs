//! Exact coefficient fields: ℚ, prime fields 𝔽_p and towers of simple
//! algebraic extensions over either.
//!
//! A [`CoeffField`] is a cheap reference-counted handle. Elements are stored
//! in a canonical internal representation, so equality of elements is
//! representational equality.

mod element;
mod roots;
mod upoly;

pub use element::{arith, ArithOp, FieldElement};
pub use roots::{characteristic_warning, nonlinear_factors, roots_in_field, sqrt_in_field};
pub use upoly::UniPoly;
pub(crate) use upoly::write_terms;


use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical representation of a field element.
///
/// `Ext` holds the coefficients (low to high, trailing zeros trimmed) of a
/// polynomial in the generator of degree below the minimal polynomial's.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Q(BigRational),
    Fp(u64),
    Ext(Vec<Repr>),
}

impl Repr {
    /// Total order used only for deterministic output.
    pub(crate) fn canonical_cmp(&self, other: &Repr) -> Ordering {
        match (self, other) {
            (Repr::Q(a), Repr::Q(b)) => a.cmp(b),
            (Repr::Fp(a), Repr::Fp(b)) => a.cmp(b),
            (Repr::Ext(a), Repr::Ext(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| {
                    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
                        let c = x.canonical_cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    Ordering::Equal
                }),
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Repr::Q(_) => 0,
            Repr::Fp(_) => 1,
            Repr::Ext(_) => 2,
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum FieldKind {
    Rationals,
    Prime(u64),
    Extension {
        base: CoeffField,
        /// Monic, low to high, over `base`.
        minpoly: Vec<Repr>,
        name: String,
    },
}

/// An exact coefficient field.
#[derive(Clone)]
pub struct CoeffField(Arc<FieldKind>);

impl PartialEq for CoeffField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for CoeffField {}

impl std::hash::Hash for CoeffField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffField({})", self.spec_string())
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F_{p}"),
            FieldKind::Extension { base, name, .. } => {
                let m = UniPoly::from_repr(base.clone(), self.minpoly_repr().to_vec());
                write!(f, "{base}[{name}]/({})", m.display_in(name))
            }
        }
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
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

impl CoeffField {
    pub fn rationals() -> Self {
        CoeffField(Arc::new(FieldKind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoeffField(Arc::new(FieldKind::Prime(p))))
    }

    /// Adjoins a root of `minpoly` (monic, irreducible over `self`), naming the
    /// generator `name`.
    ///
    /// Irreducibility is verified: completely over finite fields, by the
    /// rational-root test for degrees 2 and 3 over ℚ, and by a square-root
    /// test for quadratics over characteristic-zero extensions.
    pub fn adjoin_root(&self, minpoly: &UniPoly, name: &str) -> Result<CoeffField> {
        if minpoly.field() != self {
            return Err(Error::FieldMismatch(
                minpoly.field().spec_string(),
                self.spec_string(),
            ));
        }
        let deg = minpoly.degree().unwrap_or(0);
        if deg < 2 {
            return Err(Error::UnsupportedExtension(format!(
                "minimal polynomial {} has degree < 2",
                minpoly.display_in(name)
            )));
        }
        if !minpoly.is_monic() {
            return Err(Error::NotMonic(minpoly.display_in(name)));
        }
        if name.is_empty() || self.generator_names().iter().any(|(n, _)| n == name) {
            return Err(Error::InvalidInput(format!(
                "generator name `{name}` is empty or already used in the tower"
            )));
        }
        roots::check_irreducible(minpoly, name)?;
        Ok(CoeffField(Arc::new(FieldKind::Extension {
            base: self.clone(),
            minpoly: minpoly.coeffs_repr().to_vec(),
            name: name.to_string(),
        })))
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => *p,
            FieldKind::Extension { base, .. } => base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> usize {
        match &*self.0 {
            FieldKind::Rationals | FieldKind::Prime(_) => 1,
            FieldKind::Extension { base, minpoly, .. } => base.absolute_degree() * (minpoly.len() - 1),
        }
    }

    /// Degree over the immediate base (1 for prime fields).
    pub fn relative_degree(&self) -> usize {
        match &*self.0 {
            FieldKind::Extension { minpoly, .. } => minpoly.len() - 1,
            _ => 1,
        }
    }

    /// Number of elements for finite fields.
    pub fn size(&self) -> Option<BigUint> {
        match &*self.0 {
            FieldKind::Rationals => None,
            FieldKind::Prime(p) => Some(BigUint::from(*p)),
            FieldKind::Extension { base, minpoly, .. } => {
                base.size().map(|q| num_traits::pow(q, minpoly.len() - 1))
            }
        }
    }

    pub fn base(&self) -> Option<&CoeffField> {
        match &*self.0 {
            FieldKind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match &*self.0 {
            FieldKind::Extension { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn minimal_polynomial(&self) -> Option<UniPoly> {
        match &*self.0 {
            FieldKind::Extension { base, minpoly, .. } => {
                Some(UniPoly::from_repr(base.clone(), minpoly.clone()))
            }
            _ => None,
        }
    }

    pub(crate) fn minpoly_repr(&self) -> &[Repr] {
        match &*self.0 {
            FieldKind::Extension { minpoly, .. } => minpoly,
            _ => &[],
        }
    }

    /// The generator of the top extension, as an element of `self`.
    pub fn generator(&self) -> Option<FieldElement> {
        match &*self.0 {
            FieldKind::Extension { base, .. } => Some(FieldElement::from_repr(
                self.clone(),
                Repr::Ext(vec![base.zero_r(), base.one_r()]),
            )),
            _ => None,
        }
    }

    /// Every generator of the tower, embedded into `self`.
    pub fn generator_names(&self) -> Vec<(String, FieldElement)> {
        let mut out = Vec::new();
        let mut cur = Some(self.clone());
        while let Some(f) = cur {
            if let (Some(name), Some(g)) = (f.generator_name(), f.generator()) {
                out.push((name.to_string(), self.embed(&g).expect("tower member embeds")));
            }
            cur = f.base().cloned();
        }
        out
    }

    /// The chain of subfields from the prime field up to `self`.
    pub fn tower(&self) -> Vec<CoeffField> {
        let mut chain = vec![self.clone()];
        while let Some(b) = chain.last().unwrap().base().cloned() {
            chain.push(b);
        }
        chain.reverse();
        chain
    }

    pub fn is_subfield_of(&self, other: &CoeffField) -> bool {
        other.tower().iter().any(|f| f == self)
    }

    /// Embeds an element of a subfield of `self`.
    pub fn embed(&self, e: &FieldElement) -> Result<FieldElement> {
        if e.field() == self {
            return Ok(e.clone());
        }
        if !e.field().is_subfield_of(self) {
            return Err(Error::FieldMismatch(e.field().spec_string(), self.spec_string()));
        }
        Ok(FieldElement::from_repr(self.clone(), self.embed_r(e.field(), e.repr())))
    }

    pub(crate) fn embed_r(&self, sub: &CoeffField, r: &Repr) -> Repr {
        if sub == self {
            return r.clone();
        }
        let base = self.base().expect("subfield lies in the tower");
        let inner = base.embed_r(sub, r);
        if base.is_zero_r(&inner) {
            Repr::Ext(vec![])
        } else {
            Repr::Ext(vec![inner])
        }
    }

    /// Textual form accepted by the command-line field parser.
    pub fn spec_string(&self) -> String {
        match &*self.0 {
            FieldKind::Rationals => "q".to_string(),
            FieldKind::Prime(p) => format!("fp:{p}"),
            FieldKind::Extension { base, minpoly, name } => {
                let m = UniPoly::from_repr(base.clone(), minpoly.clone());
                format!("ext:{}:{}", base.spec_string(), m.display_in(name).replace(' ', ""))
            }
        }
    }

    // ---- element constructors -------------------------------------------

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_repr(self.clone(), self.zero_r())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_repr(self.clone(), self.one_r())
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        FieldElement::from_repr(self.clone(), self.int_r(&BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        FieldElement::from_repr(self.clone(), self.int_r(n))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        Ok(FieldElement::from_repr(self.clone(), self.rat_r(q)?))
    }

    /// Deterministic enumeration of a finite field: index `i` in `[0, q)`.
    pub fn element_at(&self, index: &BigUint) -> Option<FieldElement> {
        let q = self.size()?;
        if index >= &q {
            return None;
        }
        Some(FieldElement::from_repr(self.clone(), self.index_r(index)))
    }

    // ---- representation arithmetic ---------------------------------------

    pub(crate) fn zero_r(&self) -> Repr {
        match &*self.0 {
            FieldKind::Rationals => Repr::Q(BigRational::zero()),
            FieldKind::Prime(_) => Repr::Fp(0),
            FieldKind::Extension { .. } => Repr::Ext(vec![]),
        }
    }

    pub(crate) fn one_r(&self) -> Repr {
        match &*self.0 {
            FieldKind::Rationals => Repr::Q(BigRational::one()),
            FieldKind::Prime(_) => Repr::Fp(1),
            FieldKind::Extension { base, .. } => Repr::Ext(vec![base.one_r()]),
        }
    }

    pub(crate) fn int_r(&self, n: &BigInt) -> Repr {
        match &*self.0 {
            FieldKind::Rationals => Repr::Q(BigRational::from_integer(n.clone())),
            FieldKind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Repr::Fp(r.to_u64().unwrap())
            }
            FieldKind::Extension { base, .. } => {
                let b = base.int_r(n);
                if base.is_zero_r(&b) {
                    Repr::Ext(vec![])
                } else {
                    Repr::Ext(vec![b])
                }
            }
        }
    }

    pub(crate) fn rat_r(&self, q: &BigRational) -> Result<Repr> {
        match &*self.0 {
            FieldKind::Rationals => Ok(Repr::Q(q.clone())),
            _ => {
                let num = self.int_r(q.numer());
                let den = self.int_r(q.denom());
                self.div_r(&num, &den)
            }
        }
    }

    pub(crate) fn is_zero_r(&self, a: &Repr) -> bool {
        match a {
            Repr::Q(q) => q.is_zero(),
            Repr::Fp(v) => *v == 0,
            Repr::Ext(v) => v.is_empty(),
        }
    }

    pub(crate) fn is_one_r(&self, a: &Repr) -> bool {
        *a == self.one_r()
    }

    fn p(&self) -> u64 {
        match &*self.0 {
            FieldKind::Prime(p) => *p,
            _ => unreachable!("not a prime field"),
        }
    }

    pub(crate) fn add_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Q(x), Repr::Q(y)) => Repr::Q(x + y),
            (Repr::Fp(x), Repr::Fp(y)) => {
                let p = self.p();
                Repr::Fp(((*x as u128 + *y as u128) % p as u128) as u64)
            }
            (Repr::Ext(x), Repr::Ext(y)) => {
                let base = self.base().unwrap();
                Repr::Ext(upoly::padd(base, x, y))
            }
            _ => unreachable!("mixed representations"),
        }
    }

    pub(crate) fn neg_r(&self, a: &Repr) -> Repr {
        match a {
            Repr::Q(x) => Repr::Q(-x),
            Repr::Fp(x) => {
                if *x == 0 {
                    Repr::Fp(0)
                } else {
                    Repr::Fp(self.p() - x)
                }
            }
            Repr::Ext(x) => {
                let base = self.base().unwrap();
                Repr::Ext(x.iter().map(|c| base.neg_r(c)).collect())
            }
        }
    }

    pub(crate) fn sub_r(&self, a: &Repr, b: &Repr) -> Repr {
        self.add_r(a, &self.neg_r(b))
    }

    pub(crate) fn mul_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Q(x), Repr::Q(y)) => Repr::Q(x * y),
            (Repr::Fp(x), Repr::Fp(y)) => {
                let p = self.p();
                Repr::Fp(((*x as u128 * *y as u128) % p as u128) as u64)
            }
            (Repr::Ext(x), Repr::Ext(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Repr::Ext(vec![]);
                }
                let base = self.base().unwrap();
                let prod = upoly::pmul(base, x, y);
                let (_, r) = upoly::pdivrem_monic(base, &prod, self.minpoly_repr());
                Repr::Ext(r)
            }
            _ => unreachable!("mixed representations"),
        }
    }

    pub(crate) fn inv_r(&self, a: &Repr) -> Option<Repr> {
        if self.is_zero_r(a) {
            return None;
        }
        match a {
            Repr::Q(x) => Some(Repr::Q(x.recip())),
            Repr::Fp(x) => {
                let p = self.p() as i128;
                // extended Euclid on (x, p)
                let (mut r0, mut r1) = (*x as i128, p);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                Some(Repr::Fp(s0.rem_euclid(p) as u64))
            }
            Repr::Ext(x) => {
                let base = self.base().unwrap();
                let (g, s, _) = upoly::pgcdext(base, x, self.minpoly_repr());
                // g is a nonzero constant since the minimal polynomial is irreducible
                debug_assert_eq!(g.len(), 1);
                let ginv = base.inv_r(&g[0])?;
                let s = upoly::pscale(base, &s, &ginv);
                let (_, r) = upoly::pdivrem_monic(base, &s, self.minpoly_repr());
                Some(Repr::Ext(r))
            }
        }
    }

    pub(crate) fn div_r(&self, a: &Repr, b: &Repr) -> Result<Repr> {
        let inv = self.inv_r(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul_r(a, &inv))
    }

    pub(crate) fn pow_r(&self, a: &Repr, e: u64) -> Repr {
        self.pow_big_r(a, &BigUint::from(e))
    }

    pub(crate) fn pow_big_r(&self, a: &Repr, e: &BigUint) -> Repr {
        let mut result = self.one_r();
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = self.mul_r(&result, &result);
            if e.bit(i) {
                result = self.mul_r(&result, a);
            }
        }
        result
    }

    /// Enumeration of a finite field by base-|base| digits.
    pub(crate) fn index_r(&self, idx: &BigUint) -> Repr {
        match &*self.0 {
            FieldKind::Prime(p) => Repr::Fp((idx % BigUint::from(*p)).to_u64().unwrap()),
            FieldKind::Extension { base, minpoly, .. } => {
                let q = base.size().expect("finite tower");
                let mut rest = idx.clone();
                let mut coeffs = Vec::with_capacity(minpoly.len() - 1);
                for _ in 0..minpoly.len() - 1 {
                    let (d, r) = rest.div_rem(&q);
                    coeffs.push(base.index_r(&r));
                    rest = d;
                }
                upoly::trim(base, &mut coeffs);
                Repr::Ext(coeffs)
            }
            FieldKind::Rationals => unreachable!("ℚ is not enumerable here"),
        }
    }

    /// p-th root in a finite (hence perfect) field.
    pub(crate) fn pth_root_r(&self, a: &Repr) -> Repr {
        let q = self.size().expect("finite field");
        let p = BigUint::from(self.characteristic());
        self.pow_big_r(a, &(q / p))
    }

    /// Whether a value prints with a leading minus sign; returns its negation
    /// in that case.
    pub(crate) fn negative_part(&self, a: &Repr) -> Option<Repr> {
        match a {
            Repr::Q(x) => x.is_negative().then(|| Repr::Q(-x)),
            Repr::Fp(x) => {
                let p = self.p();
                (*x > p / 2).then(|| Repr::Fp(p - x))
            }
            Repr::Ext(v) => {
                let nonzero: Vec<_> = v.iter().enumerate().filter(|(_, c)| !self.base().unwrap().is_zero_r(c)).collect();
                if nonzero.len() == 1 {
                    let base = self.base().unwrap();
                    let (i, c) = nonzero[0];
                    base.negative_part(c).map(|nc| {
                        let mut w = vec![base.zero_r(); i + 1];
                        w[i] = nc;
                        Repr::Ext(w)
                    })
                } else {
                    None
                }
            }
        }
    }

    /// True when the value prints without `+`/`-` at top level.
    pub(crate) fn is_atomic_r(&self, a: &Repr) -> bool {
        match a {
            Repr::Q(_) | Repr::Fp(_) => true,
            Repr::Ext(v) => {
                let base = self.base().unwrap();
                let nz: Vec<_> = v.iter().filter(|c| !base.is_zero_r(c)).collect();
                nz.len() <= 1 && nz.iter().all(|c| base.is_atomic_r(c))
            }
        }
    }

    pub(crate) fn fmt_r(&self, a: &Repr) -> String {
        match a {
            Repr::Q(x) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Repr::Fp(x) => match self.negative_part(a) {
                Some(Repr::Fp(n)) => format!("-{n}"),
                _ => x.to_string(),
            },
            Repr::Ext(v) => {
                if v.is_empty() {
                    return "0".to_string();
                }
                let base = self.base().unwrap();
                UniPoly::from_repr(base.clone(), v.clone()).display_in(self.generator_name().unwrap())
            }
        }
    }

    /// A rational number, if the value lies in the prime field ℚ.
    pub(crate) fn as_rational_r(&self, a: &Repr) -> Option<BigRational> {
        match a {
            Repr::Q(x) => Some(x.clone()),
            Repr::Fp(_) => None,
            Repr::Ext(v) => match v.len() {
                0 => Some(BigRational::zero()),
                1 => self.base().unwrap().as_rational_r(&v[0]),
                _ => None,
            },
        }
    }
}
