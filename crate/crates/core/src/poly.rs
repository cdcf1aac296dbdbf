//! Sparse multivariate polynomials in named variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeff::{CoeffField, FieldElement, Repr, UniPoly};
use crate::error::{Error, Result};
use crate::series::OrderValue;

/// Shared, ordered list of variable names.
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// A polynomial with coefficients in a [`CoeffField`].
///
/// Terms are keyed by exponent vectors; no zero coefficient is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyN {
    field: CoeffField,
    vars: Vars,
    terms: BTreeMap<Vec<u32>, Repr>,
}

fn grlex_desc(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl PolyN {
    pub fn zero(field: &CoeffField, vars: &Vars) -> Self {
        PolyN { field: field.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(field: &CoeffField, vars: &Vars) -> Self {
        Self::constant(&field.one(), vars)
    }

    pub fn constant(c: &FieldElement, vars: &Vars) -> Self {
        let mut p = Self::zero(c.field(), vars);
        p.add_term(vec![0; vars.len()], c.repr().clone());
        p
    }

    pub fn var(field: &CoeffField, vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(field, vars, e)
    }

    pub fn monomial(field: &CoeffField, vars: &Vars, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(field, vars);
        p.terms.insert(exps, field.one_r());
        p
    }

    pub fn from_terms(
        field: &CoeffField,
        vars: &Vars,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), found: e.len() });
            }
            p.add_term(e, field.embed(&c)?.into_repr());
        }
        Ok(p)
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_i64(field: &CoeffField, vars: &Vars, terms: &[(&[u32], i64)]) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len());
            p.add_term(e.to_vec(), field.from_i64(*c).into_repr());
        }
        p
    }

    pub(crate) fn from_repr_terms(field: &CoeffField, vars: &Vars, terms: BTreeMap<Vec<u32>, Repr>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !field.is_zero_r(c)).collect();
        PolyN { field: field.clone(), vars: vars.clone(), terms }
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: Repr) {
        if self.field.is_zero_r(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = self.field.add_r(old, &c);
                if self.field.is_zero_r(&s) {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn repr_terms(&self) -> &BTreeMap<Vec<u32>, Repr> {
        &self.terms
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> Vec<(Vec<u32>, FieldElement)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), FieldElement::from_repr(self.field.clone(), c.clone())))
            .collect();
        v.sort_by(|a, b| grlex_desc(&a.0, &b.0));
        v
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldElement {
        FieldElement::from_repr(
            self.field.clone(),
            self.terms.get(exps).cloned().unwrap_or_else(|| self.field.zero_r()),
        )
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The single term, if the polynomial is a nonzero monomial times a constant.
    pub fn as_monomial(&self) -> Option<(Vec<u32>, FieldElement)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some((e.clone(), FieldElement::from_repr(self.field.clone(), c.clone())))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// Least total degree of a term; `Infinity` for the zero polynomial.
    pub fn order(&self) -> OrderValue {
        match self.terms.keys().map(|e| e.iter().map(|&x| x as u64).sum::<u64>()).min() {
            Some(k) => OrderValue::Finite(k),
            None => OrderValue::Infinity,
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> PolyN {
        let terms = self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == d);
        PolyN {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: terms.map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// The lowest-degree nonzero homogeneous part.
    pub fn initial_form(&self) -> Result<PolyN> {
        match self.order() {
            OrderValue::Finite(k) => Ok(self.homogeneous_part(k as u32)),
            _ => Err(Error::ZeroInput),
        }
    }

    /// Drops every term of total degree at least `d`.
    pub fn truncate(&self, d: u32) -> PolyN {
        let terms = self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() < d);
        PolyN {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: terms.map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn compatible(&self, other: &PolyN) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.spec_string(), other.field.spec_string()));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(self.vars.join(","), other.vars.join(",")));
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &PolyN) {
        if let Err(e) = self.compatible(other) {
            panic!("{e}");
        }
    }

    pub fn scale(&self, c: &FieldElement) -> PolyN {
        let c = self.field.embed(c).expect("scalar from a subfield").into_repr();
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), self.field.mul_r(x, &c))).collect();
        PolyN::from_repr_terms(&self.field, &self.vars, terms)
    }

    pub(crate) fn scale_r(&self, c: &Repr) -> PolyN {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), self.field.mul_r(x, c))).collect();
        PolyN::from_repr_terms(&self.field, &self.vars, terms)
    }

    /// Multiplies by the monomial with exponent vector `e`.
    pub fn shift(&self, e: &[u32]) -> PolyN {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        PolyN { field: self.field.clone(), vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> PolyN {
        let mut result = PolyN::one(&self.field, &self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: point.len() });
        }
        let pt: Vec<Repr> = point.iter().map(|p| self.field.embed(p).map(|e| e.into_repr())).collect::<Result<_>>()?;
        let f = &self.field;
        let mut acc = f.zero_r();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                if k > 0 {
                    t = f.mul_r(&t, &f.pow_r(x, k as u64));
                }
            }
            acc = f.add_r(&acc, &t);
        }
        Ok(FieldElement::from_repr(f.clone(), acc))
    }

    /// Substitutes `x_i := subs[i]`; all substitutes share one variable list.
    pub fn compose(&self, subs: &[PolyN]) -> Result<PolyN> {
        if subs.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: subs.len() });
        }
        let Some(first) = subs.first() else {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        };
        for s in subs {
            first.compatible(s)?;
        }
        if !self.field.is_subfield_of(first.field()) {
            return Err(Error::FieldMismatch(self.field.spec_string(), first.field.spec_string()));
        }
        let target = first.field().clone();
        let mut powers: Vec<Vec<PolyN>> = subs.iter().map(|s| vec![PolyN::one(&target, &first.vars), s.clone()]).collect();
        let mut out = PolyN::zero(&target, &first.vars);
        for (e, c) in &self.terms {
            let mut t = PolyN::constant(&FieldElement::from_repr(target.clone(), target.embed_r(&self.field, c)), &first.vars);
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Sets variable `i` to the constant `c`.
    pub fn eval_var(&self, i: usize, c: &FieldElement) -> PolyN {
        let c = self.field.embed(c).expect("constant from a subfield").into_repr();
        let mut out = PolyN::zero(&self.field, &self.vars);
        for (e, x) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[i], 0);
            out.add_term(e2, self.field.mul_r(x, &self.field.pow_r(&c, k as u64)));
        }
        out
    }

    /// The univariate polynomial in variable `i`, if no other variable occurs.
    pub fn to_unipoly(&self, i: usize) -> Option<UniPoly> {
        let mut coeffs = vec![self.field.zero_r(); self.degree_in(i).map_or(0, |d| d as usize + 1)];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return None;
            }
            coeffs[e[i] as usize] = c.clone();
        }
        Some(UniPoly::from_repr(self.field.clone(), coeffs))
    }

    pub fn derivative(&self, i: usize) -> PolyN {
        let mut out = PolyN::zero(&self.field, &self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, self.field.mul_r(c, &self.field.int_r(&e[i].into())));
        }
        out
    }

    pub fn embed_into(&self, target: &CoeffField) -> Result<PolyN> {
        if target == &self.field {
            return Ok(self.clone());
        }
        if !self.field.is_subfield_of(target) {
            return Err(Error::FieldMismatch(self.field.spec_string(), target.spec_string()));
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), target.embed_r(&self.field, c))).collect();
        Ok(PolyN { field: target.clone(), vars: self.vars.clone(), terms })
    }

    /// Same polynomial with the variables renamed positionally.
    pub fn with_vars(&self, vars: &Vars) -> PolyN {
        assert_eq!(vars.len(), self.vars.len());
        PolyN { field: self.field.clone(), vars: vars.clone(), terms: self.terms.clone() }
    }

    /// Lexicographically largest term.
    fn lex_lead(&self) -> Option<(&Vec<u32>, &Repr)> {
        self.terms.last_key_value()
    }

    /// Scales so that the lexicographically leading coefficient is 1.
    pub fn normalize(&self) -> PolyN {
        match self.lex_lead() {
            None => self.clone(),
            Some((_, c)) => self.scale_r(&self.field.inv_r(c).unwrap()),
        }
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &PolyN) -> Option<PolyN> {
        self.assert_compatible(d);
        let (de, dc) = d.lex_lead()?;
        let dinv = self.field.inv_r(dc).unwrap();
        let mut r = self.clone();
        let mut q = PolyN::zero(&self.field, &self.vars);
        while let Some((re, rc)) = r.lex_lead() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = self.field.mul_r(rc, &dinv);
            let t = d.shift(&e).scale_r(&c);
            q.add_term(e, c);
            r = &r - &t;
        }
        Some(q)
    }

    pub fn divides(&self, f: &PolyN) -> bool {
        f.div_exact(self).is_some()
    }

    /// Largest `k` with `self^k | f`, and the cofactor. `self` must be non-constant.
    pub fn multiplicity_in(&self, f: &PolyN) -> (u32, PolyN) {
        assert!(!self.is_constant());
        let mut k = 0;
        let mut rest = f.clone();
        while let Some(q) = rest.div_exact(self) {
            if rest.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        (k, rest)
    }

    /// Coefficients as a polynomial in variable `v` (low to high); the
    /// coefficients do not involve `v`.
    fn coeffs_in(&self, v: usize) -> Vec<PolyN> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![PolyN::zero(&self.field, &self.vars); d + 1];
        if self.is_zero() {
            return vec![];
        }
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[v], 0) as usize;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    fn lc_in(&self, v: usize) -> PolyN {
        self.coeffs_in(v).pop().unwrap_or_else(|| PolyN::zero(&self.field, &self.vars))
    }

    fn content_in(&self, v: usize) -> PolyN {
        let mut g = PolyN::zero(&self.field, &self.vars);
        for c in self.coeffs_in(v) {
            g = gcd_rec(&g, &c);
            if g.is_constant() && !g.is_zero() {
                return PolyN::one(&self.field, &self.vars);
            }
        }
        g.normalize()
    }

    /// Normalized greatest common divisor (lexicographic leading coefficient 1).
    pub fn gcd(&self, other: &PolyN) -> PolyN {
        self.assert_compatible(other);
        gcd_rec(self, other).normalize()
    }

    /// Product of the distinct irreducible factors, normalized.
    pub fn squarefree_part(&self) -> PolyN {
        if self.is_zero() || self.is_constant() {
            return self.normalize();
        }
        if let Some(r) = self.squarefree_by_specialization() {
            return r;
        }
        let mut g = self.clone();
        for i in 0..self.nvars() {
            g = gcd_rec(&g, &self.derivative(i));
        }
        let g = g.normalize();
        let r = self.div_exact(&g).expect("gcd divides").normalize();
        if self.field.characteristic() == 0 {
            return r;
        }
        // factors whose multiplicity is divisible by p survive only in g
        let mut h = g;
        loop {
            let c = h.gcd(&r);
            if c.is_constant() {
                break;
            }
            h = h.div_exact(&c).unwrap();
        }
        if h.is_constant() {
            return r;
        }
        let p = self.field.characteristic() as u32;
        let mut root = PolyN::zero(&self.field, &self.vars);
        for (e, c) in &h.terms {
            root.add_term(e.iter().map(|k| k / p).collect(), self.field.pth_root_r(c));
        }
        (&r * &root.squarefree_part()).normalize()
    }
}

impl PolyN {
    /// Bivariate shortcut: if f(c, y) and f_y(c, y) are coprime for some c
    /// with lc_y(f)(c) ≠ 0, every repeated factor of f lies in k[x], so only
    /// the content in y needs a gcd. This avoids the remainder sequence in
    /// two variables, whose coefficients grow quickly.
    fn squarefree_by_specialization(&self) -> Option<PolyN> {
        if self.nvars() != 2 || !self.involves(1) {
            return None;
        }
        let fy = self.derivative(1);
        let lc = self.lc_in(1);
        for k in 0..8 {
            let c = self.field.from_i64(k);
            if lc.eval_var(0, &c).constant_term().is_zero() {
                continue;
            }
            let a = self.eval_var(0, &c).to_unipoly(1)?;
            let b = fy.eval_var(0, &c).to_unipoly(1)?;
            if a.gcd(&b).ok()?.degree() == Some(0) {
                let content = self.content_in(1);
                let pp = self.div_exact(&content)?;
                return Some((&content.squarefree_part() * &pp).normalize());
            }
        }
        None
    }
}

fn prem(a: &PolyN, b: &PolyN, v: usize) -> PolyN {
    let db = b.degree_in(v).unwrap();
    let lb = b.lc_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v).unwrap() >= db {
        let dr = r.degree_in(v).unwrap();
        let lr = r.lc_in(v);
        let mut e = vec![0; a.nvars()];
        e[v] = dr - db;
        r = &(&lb * &r) - &(&lr * &b.shift(&e));
    }
    r
}

fn primitive_in(p: &PolyN, v: usize) -> PolyN {
    let c = p.content_in(v);
    p.div_exact(&c).expect("content divides").normalize()
}

/// gcd up to a nonzero constant.
fn gcd_rec(f: &PolyN, g: &PolyN) -> PolyN {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let n = f.nvars();
    let Some(v) = (0..n).rev().find(|&i| f.involves(i) || g.involves(i)) else {
        return PolyN::one(f.field(), f.vars());
    };
    if !f.involves(v) {
        return gcd_rec(f, &g.content_in(v));
    }
    if !g.involves(v) {
        return gcd_rec(&f.content_in(v), g);
    }
    let c = gcd_rec(&f.content_in(v), &g.content_in(v));
    let (mut a, mut b) = (primitive_in(f, v), primitive_in(g, v));
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            break;
        }
        if !r.involves(v) {
            b = PolyN::one(f.field(), f.vars());
            break;
        }
        a = b;
        b = primitive_in(&r, v);
    }
    &c * &b
}

impl Add for &PolyN {
    type Output = PolyN;
    fn add(self, rhs: &PolyN) -> PolyN {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolyN {
    type Output = PolyN;
    fn sub(self, rhs: &PolyN) -> PolyN {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), self.field.neg_r(c));
        }
        out
    }
}

impl Neg for &PolyN {
    type Output = PolyN;
    fn neg(self) -> PolyN {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg_r(c))).collect();
        PolyN { field: self.field.clone(), vars: self.vars.clone(), terms }
    }
}

impl Mul for &PolyN {
    type Output = PolyN;
    fn mul(self, rhs: &PolyN) -> PolyN {
        self.assert_compatible(rhs);
        let f = &self.field;
        let mut out: BTreeMap<Vec<u32>, Repr> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = f.mul_r(c1, c2);
                match out.get_mut(&e) {
                    Some(old) => *old = f.add_r(old, &c),
                    None => {
                        out.insert(e, c);
                    }
                }
            }
        }
        PolyN::from_repr_terms(f, &self.vars, out)
    }
}

pub(crate) fn monomial_string(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for PolyN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_desc(a, b));
        let s = crate::coeff::write_terms(
            &self.field,
            keys.into_iter().map(|e| (&self.terms[e], monomial_string(&self.vars, e))),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for PolyN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}[{}]", self, self.field, self.vars.join(","))
    }
}
