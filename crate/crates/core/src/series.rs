//! Truncated power series in one variable, parametrizations and the
//! substitution homomorphism f ↦ f∘φ.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coeff::{CoeffField, FieldElement, Repr};
use crate::error::{Error, Result};
use crate::poly::PolyN;

pub const DEFAULT_PRECISION: u32 = 64;
pub const PRECISION_CAP: u32 = 4096;

/// Order of a (possibly truncated) element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderValue {
    Finite(u64),
    /// No nonzero term below the given exponent; the true order is unknown.
    AtLeast(u64),
    Infinity,
}

impl OrderValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            OrderValue::Finite(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == OrderValue::Infinity
    }

    /// Minimum of two certified orders (`AtLeast` is not accepted).
    pub fn min_certified(self, other: OrderValue) -> OrderValue {
        use OrderValue::*;
        match (self, other) {
            (Infinity, x) | (x, Infinity) => x,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            _ => panic!("min of an uncertified order"),
        }
    }

    /// `self ≥ other` for certified orders.
    pub fn ge_certified(self, other: OrderValue) -> bool {
        use OrderValue::*;
        match (self, other) {
            (Infinity, _) => true,
            (_, Infinity) => false,
            (Finite(a), Finite(b)) => a >= b,
            _ => panic!("comparison of an uncertified order"),
        }
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Finite(k) => write!(f, "{k}"),
            OrderValue::AtLeast(n) => write!(f, ">={n}"),
            OrderValue::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Exact,
    /// Coefficients are known for exponents below the bound.
    Truncated(u32),
}

impl Precision {
    /// Whether coefficients below t^n are known.
    pub fn covers(self, n: u32) -> bool {
        self.bound() >= n as u64
    }

    pub(crate) fn bound_u32(self) -> u32 {
        self.bound().min(u32::MAX as u64) as u32
    }

    pub(crate) fn bound(self) -> u64 {
        match self {
            Precision::Exact => u64::MAX,
            Precision::Truncated(n) => n as u64,
        }
    }

    fn from_bound(b: u64) -> Precision {
        if b == u64::MAX {
            Precision::Exact
        } else {
            Precision::Truncated(b.min(u32::MAX as u64) as u32)
        }
    }
}

/// A univariate power series, exact or known below a precision bound.
#[derive(Clone, PartialEq, Eq)]
pub struct Series1 {
    field: CoeffField,
    var: String,
    terms: BTreeMap<u32, Repr>,
    prec: Precision,
}

impl Series1 {
    pub fn zero(field: &CoeffField) -> Self {
        Series1 { field: field.clone(), var: "t".into(), terms: BTreeMap::new(), prec: Precision::Exact }
    }

    pub fn from_terms(field: &CoeffField, terms: impl IntoIterator<Item = (u32, FieldElement)>, prec: Precision) -> Result<Self> {
        let mut s = Self::zero(field);
        s.prec = prec;
        for (k, c) in terms {
            let c = field.embed(&c)?.into_repr();
            s.add_term(k, c);
        }
        s.clip();
        Ok(s)
    }

    /// Exact series with integer coefficients given as `(exponent, coefficient)`.
    pub fn from_i64(field: &CoeffField, terms: &[(u32, i64)]) -> Self {
        let mut s = Self::zero(field);
        for &(k, c) in terms {
            s.add_term(k, field.from_i64(c).into_repr());
        }
        s
    }

    pub(crate) fn from_dense(field: &CoeffField, coeffs: &[Repr], prec: Precision) -> Self {
        let mut s = Self::zero(field);
        s.prec = prec;
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(k as u32, c.clone());
        }
        s.clip();
        s
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    fn add_term(&mut self, k: u32, c: Repr) {
        if self.field.is_zero_r(&c) {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(old) => {
                let s = self.field.add_r(old, &c);
                if self.field.is_zero_r(&s) {
                    self.terms.remove(&k);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    fn clip(&mut self) {
        if let Precision::Truncated(n) = self.prec {
            self.terms.retain(|&k, _| k < n);
        }
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    pub fn is_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    pub fn coeff(&self, k: u32) -> FieldElement {
        FieldElement::from_repr(self.field.clone(), self.terms.get(&k).cloned().unwrap_or_else(|| self.field.zero_r()))
    }

    /// Known terms in ascending order.
    pub fn terms(&self) -> Vec<(u32, FieldElement)> {
        self.terms.iter().map(|(&k, c)| (k, FieldElement::from_repr(self.field.clone(), c.clone()))).collect()
    }

    pub fn order(&self) -> OrderValue {
        match self.terms.keys().next() {
            Some(&k) => OrderValue::Finite(k as u64),
            None => match self.prec {
                Precision::Exact => OrderValue::Infinity,
                Precision::Truncated(n) => OrderValue::AtLeast(n as u64),
            },
        }
    }

    /// Lowest nonzero term.
    pub fn leading(&self) -> Option<(u32, FieldElement)> {
        self.terms.iter().next().map(|(&k, c)| (k, FieldElement::from_repr(self.field.clone(), c.clone())))
    }

    /// Lower bound for the order used in precision bookkeeping.
    fn order_bound(&self) -> u64 {
        match self.order() {
            OrderValue::Finite(k) | OrderValue::AtLeast(k) => k,
            OrderValue::Infinity => u64::MAX,
        }
    }

    pub fn truncate(&self, n: u32) -> Series1 {
        let mut s = self.clone();
        if self.prec.bound() > n as u64 {
            s.prec = Precision::Truncated(n);
            s.clip();
        }
        s
    }

    fn check(&self, other: &Series1) {
        assert!(self.field == other.field, "series over different fields");
    }

    pub fn add(&self, other: &Series1) -> Series1 {
        self.check(other);
        let mut out = self.clone();
        out.prec = Precision::from_bound(self.prec.bound().min(other.prec.bound()));
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out.clip();
        out
    }

    pub fn neg(&self) -> Series1 {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg_r(c);
        }
        out
    }

    pub fn sub(&self, other: &Series1) -> Series1 {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Series1 {
        let c = self.field.embed(c).expect("scalar from a subfield").into_repr();
        let mut out = Series1 { terms: BTreeMap::new(), ..self.clone() };
        for (&k, x) in &self.terms {
            out.add_term(k, self.field.mul_r(x, &c));
        }
        out
    }

    /// Product; a truncated factor limits the result to
    /// `min(P_a + ord b, P_b + ord a)`.
    pub fn mul(&self, other: &Series1) -> Series1 {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Series1::zero(&self.field).with_var(&self.var);
        }
        let pa = self.prec.bound();
        let pb = other.prec.bound();
        let bound = pa.saturating_add(other.order_bound()).min(pb.saturating_add(self.order_bound()));
        let f = &self.field;
        let mut out = Series1 { terms: BTreeMap::new(), prec: Precision::from_bound(bound), ..self.clone() };
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                if (i as u64 + j as u64) < bound {
                    out.add_term(i + j, f.mul_r(a, b));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Series1 {
        let mut result = Series1::from_i64(&self.field, &[(0, 1)]).with_var(&self.var);
        for _ in 0..n {
            result = result.mul(self);
        }
        result
    }

    /// t ↦ c·t.
    pub fn rescale(&self, c: &FieldElement) -> Series1 {
        let c = self.field.embed(c).expect("scalar from a subfield").into_repr();
        let mut out = Series1 { terms: BTreeMap::new(), ..self.clone() };
        for (&k, x) in &self.terms {
            out.add_term(k, self.field.mul_r(x, &self.field.pow_r(&c, k as u64)));
        }
        out
    }

    pub fn embed_into(&self, target: &CoeffField) -> Result<Series1> {
        if !self.field.is_subfield_of(target) {
            return Err(Error::FieldMismatch(self.field.spec_string(), target.spec_string()));
        }
        let terms = self.terms.iter().map(|(&k, c)| (k, target.embed_r(&self.field, c))).collect();
        Ok(Series1 { field: target.clone(), var: self.var.clone(), terms, prec: self.prec })
    }

    /// The known part as an exact series.
    pub fn known_part(&self) -> Series1 {
        Series1 { prec: Precision::Exact, ..self.clone() }
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |k: u32| match k {
            0 => String::new(),
            1 => self.var.clone(),
            _ => format!("{}^{k}", self.var),
        };
        match self.prec {
            Precision::Exact => {
                let s = crate::coeff::write_terms(&self.field, self.terms.iter().rev().map(|(&k, c)| (c, mono(k))));
                f.write_str(&s)
            }
            Precision::Truncated(n) => {
                if !self.terms.is_empty() {
                    let s = crate::coeff::write_terms(&self.field, self.terms.iter().map(|(&k, c)| (c, mono(k))));
                    write!(f, "{s} + ")?;
                }
                write!(f, "O({})", if n == 1 { self.var.clone() } else { format!("{}^{n}", self.var) })
            }
        }
    }
}

impl fmt::Debug for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---- dense truncated arithmetic (used by Newton iteration) ---------------

fn dense_mul(field: &CoeffField, a: &[Repr], b: &[Repr], n: usize) -> Vec<Repr> {
    let mut out = vec![field.zero_r(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if field.is_zero_r(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !field.is_zero_r(y) {
                out[i + j] = field.add_r(&out[i + j], &field.mul_r(x, y));
            }
        }
    }
    out
}

fn dense_inverse(field: &CoeffField, a: &[Repr], n: usize) -> Vec<Repr> {
    let mut u = vec![field.inv_r(&a[0]).expect("unit constant term")];
    let mut p = 1;
    while p < n {
        p = (2 * p).min(n);
        // u ← u (2 − a u)
        let au = dense_mul(field, a, &u, p);
        let mut two_minus: Vec<Repr> = au.iter().map(|c| field.neg_r(c)).collect();
        two_minus[0] = field.add_r(&two_minus[0], &field.int_r(&2.into()));
        u = dense_mul(field, &u, &two_minus, p);
    }
    u.truncate(n);
    u
}

/// g(t, ψ) or g(ψ, t) modulo t^n for a bivariate polynomial, where `t_slot`
/// is the variable index replaced by t.
fn dense_eval(g: &PolyN, t_slot: usize, psi: &[Repr], n: usize) -> Vec<Repr> {
    let field = g.field();
    let other = 1 - t_slot;
    let maxd = g.degree_in(other).unwrap_or(0) as usize;
    let mut powers = vec![{
        let mut one = vec![field.zero_r(); n];
        one[0] = field.one_r();
        one
    }];
    for k in 1..=maxd {
        powers.push(dense_mul(field, &powers[k - 1], psi, n));
    }
    let mut out = vec![field.zero_r(); n];
    for (e, c) in g.repr_terms() {
        let shift = e[t_slot] as usize;
        if shift >= n {
            continue;
        }
        for (k, x) in powers[e[other] as usize].iter().enumerate().take(n - shift) {
            if !field.is_zero_r(x) {
                out[k + shift] = field.add_r(&out[k + shift], &field.mul_r(c, x));
            }
        }
    }
    out
}

/// Solves g = 0 for the variable `1 - t_slot` as a series in the variable
/// `t_slot` := t, modulo t^n. Requires g(0,0) = 0 and ∂g/∂(other)(0,0) ≠ 0.
pub(crate) fn implicit_solve(g: &PolyN, t_slot: usize, n: usize) -> Vec<Repr> {
    let field = g.field();
    let other = 1 - t_slot;
    let dg = g.derivative(other);
    let mut psi = vec![field.zero_r(); 1];
    let mut p = 1;
    while p < n {
        p = (2 * p).min(n);
        psi.resize(p, field.zero_r());
        let val = dense_eval(g, t_slot, &psi, p);
        let der = dense_eval(&dg, t_slot, &psi, p);
        let corr = dense_mul(field, &val, &dense_inverse(field, &der, p), p);
        for (x, c) in psi.iter_mut().zip(&corr) {
            *x = field.sub_r(x, c);
        }
    }
    psi.truncate(n);
    psi
}

// ---- parametrizations ----------------------------------------------------

/// Recipe that regenerates a branch to any precision: a smooth strict
/// transform solved by Newton iteration, pushed through the accumulated
/// substitution, then rescaled.
#[derive(Clone, Debug)]
pub(crate) struct BranchSource {
    pub strict: PolyN,
    pub t_slot: usize,
    pub subst: Vec<PolyN>,
    pub scale: FieldElement,
}

impl BranchSource {
    pub(crate) fn series(&self, n: u32) -> Vec<Series1> {
        let field = self.strict.field().clone();
        let psi = implicit_solve(&self.strict, self.t_slot, n as usize);
        let mut psi_s = Series1::from_dense(&field, &psi, Precision::Truncated(n));
        // an exact polynomial solution is recognised by direct substitution
        if psi_s.terms.keys().next_back().is_none_or(|&k| 2 * (k as usize) < n as usize) {
            let candidate = psi_s.known_part();
            let mut comps = vec![candidate.clone(), candidate.clone()];
            comps[self.t_slot] = Series1::from_i64(&field, &[(1, 1)]);
            if substitute_unchecked(&self.strict, &comps).is_zero() {
                psi_s = candidate;
            }
        }
        let mut comps = vec![psi_s.clone(), psi_s];
        comps[self.t_slot] = Series1::from_i64(&field, &[(1, 1)]);
        self.subst
            .iter()
            .map(|a| substitute_unchecked(a, &comps).rescale(&self.scale).truncate_if_needed(n))
            .collect()
    }
}

impl Series1 {
    fn truncate_if_needed(self, n: u32) -> Series1 {
        if self.is_exact() {
            self
        } else {
            self.truncate(n)
        }
    }
}

/// A parametrization φ = (φ₁, …, φ_n) with φ ≠ 0 and φ(0) = 0.
#[derive(Clone)]
pub struct Param {
    comps: Vec<Series1>,
    ord: u64,
    branch_of: Option<PolyN>,
    source: Option<Arc<BranchSource>>,
}

impl Param {
    pub fn new(comps: Vec<Series1>) -> Result<Param> {
        let Some(first) = comps.first() else {
            return Err(Error::InvalidParam("no components".into()));
        };
        let field = first.field().clone();
        let mut ord: Option<u64> = None;
        let mut bound = u64::MAX;
        for c in &comps {
            if c.field() != &field {
                return Err(Error::FieldMismatch(field.spec_string(), c.field().spec_string()));
            }
            match c.order() {
                OrderValue::Finite(0) => return Err(Error::InvalidParam("component with nonzero constant term".into())),
                OrderValue::Finite(k) => ord = Some(ord.map_or(k, |o: u64| o.min(k))),
                OrderValue::AtLeast(n) => bound = bound.min(n),
                OrderValue::Infinity => {}
            }
        }
        let Some(ord) = ord else {
            return Err(Error::InvalidParam("parametrization is zero".into()));
        };
        if bound < ord {
            return Err(Error::InvalidParam("order not determined by the available precision".into()));
        }
        Ok(Param { comps, ord, branch_of: None, source: None })
    }

    pub(crate) fn with_source(mut self, branch_of: Option<PolyN>, source: Option<Arc<BranchSource>>) -> Param {
        self.branch_of = branch_of;
        self.source = source;
        self
    }

    pub(crate) fn source_arc(&self) -> Option<Arc<BranchSource>> {
        self.source.clone()
    }

    pub fn components(&self) -> &[Series1] {
        &self.comps
    }

    pub fn arity(&self) -> usize {
        self.comps.len()
    }

    pub fn field(&self) -> &CoeffField {
        self.comps[0].field()
    }

    /// min_j ord φ_j.
    pub fn ord(&self) -> u64 {
        self.ord
    }

    pub fn branch_of(&self) -> Option<&PolyN> {
        self.branch_of.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.comps.iter().all(|c| c.is_exact())
    }

    /// Least precision among the components.
    pub fn precision(&self) -> Precision {
        Precision::from_bound(self.comps.iter().map(|c| c.precision().bound()).min().unwrap())
    }

    /// Regenerates the components with at least `n` known coefficients, when
    /// the parametrization came from a branch expansion.
    pub fn extended(&self, n: u32) -> Option<Param> {
        let src = self.source.as_ref()?;
        Some(Param { comps: src.series(n), ..self.clone() })
    }

    /// t ↦ c·t.
    pub fn rescaled(&self, c: &FieldElement) -> Param {
        let comps = self.comps.iter().map(|s| s.rescale(c)).collect();
        let source = self.source.as_ref().map(|s| {
            Arc::new(BranchSource { scale: &s.scale * c, ..(**s).clone() })
        });
        Param { comps, ord: self.ord, branch_of: self.branch_of.clone(), source }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Param{self}")
    }
}

fn substitute_unchecked(f: &PolyN, comps: &[Series1]) -> Series1 {
    let field = comps[0].field().clone();
    let mut powers: Vec<Vec<Series1>> = comps
        .iter()
        .map(|c| vec![Series1::from_i64(&field, &[(0, 1)]).with_var(c.var()), c.clone()])
        .collect();
    let mut out = Series1::zero(&field).with_var(comps[0].var());
    for (e, c) in f.repr_terms() {
        let coeff = field.embed_r(f.field(), c);
        let mut t = Series1::zero(&field).with_var(comps[0].var());
        t.add_term(0, coeff);
        for (i, &k) in e.iter().enumerate() {
            let k = k as usize;
            if k == 0 {
                continue;
            }
            while powers[i].len() <= k {
                let next = powers[i].last().unwrap().mul(&comps[i]);
                powers[i].push(next);
            }
            t = t.mul(&powers[i][k]);
        }
        out = out.add(&t);
    }
    out
}

/// f(φ₁, …, φ_n).
pub fn substitute(f: &PolyN, comps: &[Series1]) -> Result<Series1> {
    if comps.len() != f.nvars() {
        return Err(Error::ArityMismatch { expected: f.nvars(), found: comps.len() });
    }
    let field = comps[0].field();
    if !f.field().is_subfield_of(field) {
        return Err(Error::FieldMismatch(f.field().spec_string(), field.spec_string()));
    }
    for c in comps {
        if c.field() != field {
            return Err(Error::FieldMismatch(field.spec_string(), c.field().spec_string()));
        }
        if matches!(c.order(), OrderValue::Finite(0)) {
            return Err(Error::InvalidParam("component with nonzero constant term".into()));
        }
    }
    Ok(substitute_unchecked(f, comps))
}

/// ord_t f∘φ, certified.
///
/// A tagged branch whose curve divides `f` gives `Infinity`; otherwise the
/// precision is doubled (for expandable branches) until a nonzero term
/// appears or [`PRECISION_CAP`] is reached.
pub fn ord_pullback(f: &PolyN, phi: &Param) -> Result<OrderValue> {
    Ok(match pullback_lead(f, phi)? {
        Some((k, _)) => OrderValue::Finite(k),
        None => OrderValue::Infinity,
    })
}

/// Lowest term of f∘φ, or `None` when f∘φ = 0 is certified.
pub fn pullback_lead(f: &PolyN, phi: &Param) -> Result<Option<(u64, FieldElement)>> {
    if phi.arity() != f.nvars() {
        return Err(Error::ArityMismatch { expected: f.nvars(), found: phi.arity() });
    }
    if f.is_zero() {
        return Ok(None);
    }
    let fk = f.embed_into(phi.field())?;
    if let Some(g) = &phi.branch_of {
        if g.divides(&fk.with_vars(g.vars())) {
            return Ok(None);
        }
    }
    let mut cur = phi.clone();
    loop {
        let s = substitute(&fk, &cur.comps)?;
        match s.order() {
            OrderValue::AtLeast(n) => {
                if n >= PRECISION_CAP as u64 {
                    return Err(Error::UndeterminedOrder(n as u32));
                }
                let next_n = (2 * n.max(cur.precision().bound().min(PRECISION_CAP as u64)))
                    .clamp(DEFAULT_PRECISION as u64, PRECISION_CAP as u64) as u32;
                match cur.extended(next_n) {
                    Some(next) => cur = next,
                    None => return Err(Error::UndeterminedOrder(n as u32)),
                }
            }
            OrderValue::Infinity => return Ok(None),
            OrderValue::Finite(_) => {
                let (k, c) = s.leading().unwrap();
                return Ok(Some((k as u64, c)));
            }
        }
    }
}

/// min over generators of ord φ*g.
pub fn ord_ideal_pullback(gens: &[PolyN], phi: &Param) -> Result<OrderValue> {
    if gens.is_empty() {
        return Err(Error::ZeroInput);
    }
    let mut best = OrderValue::Infinity;
    for g in gens {
        best = best.min_certified(ord_pullback(g, phi)?);
    }
    Ok(best)
}
