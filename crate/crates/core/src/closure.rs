//! Integral dependence over ideals of k[[x,y]].

use std::fmt;

use crate::branches::{expand_branches, DEFAULT_BRANCH_PRECISION};
use crate::coeff::{CoeffField, FieldElement, Repr};
use crate::error::{Error, Result};
use crate::hn::{hn_start, refuting_param, separate_principal};
use crate::linalg;
use crate::poly::{PolyN, Vars};
use crate::series::{ord_ideal_pullback, ord_pullback, OrderValue, Param, Series1};
use crate::valuation::Valuation;

#[derive(Clone, Debug)]
pub struct Ideal {
    field: CoeffField,
    vars: Vars,
    gens: Vec<PolyN>,
}

impl Ideal {
    /// Zero generators are dropped; the remaining ones must share field and
    /// variables. An empty list gives the zero ideal only through
    /// [`Ideal::zero`].
    pub fn new(gens: Vec<PolyN>) -> Result<Ideal> {
        let Some(first) = gens.first() else {
            return Err(Error::InvalidInput("an ideal needs at least one generator".into()));
        };
        for g in &gens {
            first.compatible(g)?;
        }
        let (field, vars) = (first.field().clone(), first.vars().clone());
        Ok(Ideal { field, vars, gens: gens.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn zero(field: &CoeffField, vars: &Vars) -> Ideal {
        Ideal { field: field.clone(), vars: vars.clone(), gens: Vec::new() }
    }

    pub fn generators(&self) -> &[PolyN] {
        &self.gens
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// In the local ring: some generator is a unit.
    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| !g.constant_term().is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.is_monomial())
    }

    /// Least order of a generator.
    pub fn order(&self) -> OrderValue {
        self.gens.iter().map(|g| g.order()).fold(OrderValue::Infinity, |a, b| a.min_certified(b))
    }

    /// Generators of 𝔞^q: all q-fold products of generators.
    pub fn power(&self, q: usize) -> Ideal {
        let mut gens: Vec<PolyN> = Vec::new();
        for s in multisets(self.gens.len(), q) {
            let p = product(&self.gens, &s, &self.field, &self.vars);
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        Ideal { field: self.field.clone(), vars: self.vars.clone(), gens }
    }

    /// The product of all generators.
    pub fn generator_product(&self) -> PolyN {
        self.gens.iter().fold(PolyN::one(&self.field, &self.vars), |acc, g| &acc * g)
    }

    /// The normalized gcd of the generators.
    pub fn gcd(&self) -> PolyN {
        self.gens.iter().skip(1).fold(self.gens.first().cloned().unwrap_or_else(|| PolyN::zero(&self.field, &self.vars)), |g, p| g.gcd(p))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Nondecreasing index sequences of length `k` over `0..r`.
fn multisets(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(r: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(r, k, i, cur, out);
            cur.pop();
        }
    }
    rec(r, k, 0, &mut cur, &mut out);
    out
}

fn product(gens: &[PolyN], idx: &[usize], field: &CoeffField, vars: &Vars) -> PolyN {
    idx.iter().fold(PolyN::one(field, vars), |acc, &i| &acc * &gens[i])
}

// ---- certificates ------------------------------------------------------

/// h^N + a_1 h^{N-1} + … + a_N = 0 with a_j = Σ m · g_{i_1}⋯g_{i_j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralEquation {
    pub degree: usize,
    /// `coeffs[j-1]` lists (multiplier, generator indices) pairs for a_j.
    pub coeffs: Vec<Vec<(PolyN, Vec<usize>)>>,
}

impl IntegralEquation {
    /// a_j as a polynomial, `j` ≥ 1.
    pub fn coefficient(&self, j: usize, a: &Ideal) -> PolyN {
        let mut out = PolyN::zero(&a.field, &a.vars);
        for (m, idx) in &self.coeffs[j - 1] {
            out = &out + &(m * &product(&a.gens, idx, &a.field, &a.vars));
        }
        out
    }

    pub fn describe(&self) -> Vec<String> {
        (1..=self.degree)
            .filter(|&j| !self.coeffs[j - 1].is_empty())
            .map(|j| {
                let mut out = format!("a{j} = ");
                for (k, (m, idx)) in self.coeffs[j - 1].iter().enumerate() {
                    let mut runs: Vec<(usize, usize)> = Vec::new();
                    for &i in idx {
                        match runs.last_mut() {
                            Some((last, e)) if *last == i => *e += 1,
                            _ => runs.push((i, 1)),
                        }
                    }
                    let g: Vec<String> = runs
                        .iter()
                        .map(|&(i, e)| if e == 1 { format!("g{}", i + 1) } else { format!("g{}^{e}", i + 1) })
                        .collect();
                    let g = g.join("*");
                    let m = m.to_string();
                    let (neg, m) = match m.strip_prefix('-') {
                        Some(r) if !r.contains(' ') => (true, r.to_string()),
                        _ => (false, m),
                    };
                    let sign = match (k, neg) {
                        (0, true) => "-",
                        (0, false) => "",
                        (_, true) => " - ",
                        (_, false) => " + ",
                    };
                    let term = if m == "1" {
                        g
                    } else if m.contains(' ') {
                        format!("({m})*{g}")
                    } else {
                        format!("{m}*{g}")
                    };
                    out += &format!("{sign}{term}");
                }
                out
            })
            .collect()
    }
}

/// Checks the certificate shape and the polynomial identity.
pub fn verify_integral_equation(h: &PolyN, a: &Ideal, eq: &IntegralEquation) -> Result<bool> {
    h.compatible(&PolyN::zero(&a.field, &a.vars))?;
    if eq.degree == 0 || eq.coeffs.len() != eq.degree {
        return Err(Error::MalformedCertificate(format!(
            "degree {} with {} coefficient lists",
            eq.degree,
            eq.coeffs.len()
        )));
    }
    for (j, terms) in eq.coeffs.iter().enumerate() {
        for (m, idx) in terms {
            if idx.len() != j + 1 {
                return Err(Error::MalformedCertificate(format!(
                    "a{} uses a product of {} generators",
                    j + 1,
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= a.gens.len()) {
                return Err(Error::MalformedCertificate(format!("generator index {} out of range", bad + 1)));
            }
            m.compatible(h)?;
        }
    }
    let mut total = h.pow(eq.degree as u32);
    for j in 1..=eq.degree {
        total = &total + &(&eq.coefficient(j, a) * &h.pow((eq.degree - j) as u32));
    }
    Ok(total.is_zero())
}

// ---- parametric criterion ------------------------------------------------

/// ord φ*h ≥ ord φ*𝔞.
pub fn parametric_test(h: &PolyN, a: &Ideal, phi: &Param) -> Result<bool> {
    let (oh, oa) = pullback_orders(h, a, phi)?;
    Ok(oh.ge_certified(oa))
}

fn pullback_orders(h: &PolyN, a: &Ideal, phi: &Param) -> Result<(OrderValue, OrderValue)> {
    let oh = ord_pullback(h, phi)?;
    let oa = if a.is_zero() { OrderValue::Infinity } else { ord_ideal_pullback(&a.gens, phi)? };
    Ok((oh, oa))
}

// ---- monomial oracle -----------------------------------------------------

/// The region conv(exponents) + ℝ²₊ as half-planes p·u + q·v ≥ c, plus
/// u ≥ umin and v ≥ vmin.
#[derive(Clone, Debug)]
pub(crate) struct NewtonRegion {
    pub(crate) umin: u32,
    pub(crate) vmin: u32,
    pub(crate) edges: Vec<(u64, u64, u64)>,
    /// Hull vertices from the leftmost to the lowest.
    pub(crate) vertices: Vec<(u32, u32)>,
}

impl NewtonRegion {
    pub(crate) fn new(points: &[(u32, u32)]) -> NewtonRegion {
        let mut pts = points.to_vec();
        pts.sort();
        // staircase of minimal points: increasing u, strictly decreasing v
        let mut stair: Vec<(u32, u32)> = Vec::new();
        for p in pts {
            if stair.last().is_none_or(|l| p.1 < l.1) {
                stair.push(p);
            }
        }
        let cross = |o: (u32, u32), a: (u32, u32), b: (u32, u32)| -> i64 {
            (a.0 as i64 - o.0 as i64) * (b.1 as i64 - o.1 as i64) - (a.1 as i64 - o.1 as i64) * (b.0 as i64 - o.0 as i64)
        };
        let mut hull: Vec<(u32, u32)> = Vec::new();
        for p in stair {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        let edges = hull
            .windows(2)
            .map(|w| {
                let (p, q) = ((w[0].1 - w[1].1) as u64, (w[1].0 - w[0].0) as u64);
                let g = num_integer::gcd(p, q);
                let (p, q) = (p / g, q / g);
                (p, q, p * w[0].0 as u64 + q * w[0].1 as u64)
            })
            .collect();
        NewtonRegion { umin: hull[0].0, vmin: hull[hull.len() - 1].1, edges, vertices: hull }
    }

    pub(crate) fn contains(&self, u: u32, v: u32) -> bool {
        u >= self.umin && v >= self.vmin && self.edges.iter().all(|&(p, q, c)| p * u as u64 + q * v as u64 >= c)
    }

    /// Least v with (u, v) in the region, for u ≥ umin.
    fn floor_at(&self, u: u32) -> u32 {
        let mut v = self.vmin as u64;
        for &(p, q, c) in &self.edges {
            let pu = p * u as u64;
            if pu < c {
                v = v.max((c - pu).div_ceil(q));
            }
        }
        v as u32
    }

    /// Minimal integer points of the region.
    pub(crate) fn minimal_points(&self) -> Vec<(u32, u32)> {
        let umax = self.vertices.last().unwrap().0;
        let mut out: Vec<(u32, u32)> = Vec::new();
        for u in self.umin..=umax {
            let v = self.floor_at(u);
            if out.last().is_none_or(|l| v < l.1) {
                out.push((u, v));
            }
        }
        out
    }
}

pub(crate) fn exponents_of(a: &Ideal) -> Result<Vec<(u32, u32)>> {
    if a.vars.len() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: a.vars.len() });
    }
    a.gens
        .iter()
        .map(|g| g.as_monomial().map(|(e, _)| (e[0], e[1])).ok_or_else(|| Error::NotMonomial(g.to_string())))
        .collect()
}

/// Minimal monomial generators of the integral closure of a monomial ideal.
pub fn monomial_closure(a: &Ideal) -> Result<Ideal> {
    if a.is_zero() {
        return Ok(a.clone());
    }
    let region = NewtonRegion::new(&exponents_of(a)?);
    let gens = region
        .minimal_points()
        .into_iter()
        .rev()
        .map(|(u, v)| PolyN::monomial(&a.field, &a.vars, vec![u, v]))
        .collect();
    Ideal::new(gens)
}

/// Least-sum positive weights (p, q) with p·i + q·j below the weighted order
/// of every generator, for a monomial x^i y^j outside the closure.
fn separating_weight(a: &[(u32, u32)], e: (u32, u32)) -> Option<(u32, u32)> {
    let bound = a.iter().chain(std::iter::once(&e)).map(|&(i, j)| i.max(j)).max().unwrap_or(0) + 2;
    (2..=2 * bound).flat_map(|s| (1..s).map(move |p| (p, s - p))).find(|&(p, q)| {
        let w = |(i, j): (u32, u32)| p as u64 * i as u64 + q as u64 * j as u64;
        a.iter().all(|&g| w(g) > w(e))
    })
}

// ---- membership -------------------------------------------------------------

fn monomials_up_to(d: u32) -> Vec<Vec<u32>> {
    (0..=d).flat_map(|s| (0..=s).map(move |j| vec![s - j, j])).collect()
}

/// Coefficient vectors of the given polynomials on the monomials of degree
/// < `bound`, as matrix columns stored row-wise.
fn columns_below(field: &CoeffField, polys: &[PolyN], bound: u32) -> Vec<Vec<Repr>> {
    let monos = monomials_up_to(bound.saturating_sub(1));
    monos
        .iter()
        .map(|m| polys.iter().map(|p| p.repr_terms().get(m).cloned().unwrap_or_else(|| field.zero_r())).collect())
        .collect()
}

/// Products m·g with deg m + ord g < bound, truncated below `bound`.
fn truncated_multiples(a: &Ideal, bound: u32) -> Vec<PolyN> {
    let mut out = Vec::new();
    for g in &a.gens {
        let o = g.order().finite().unwrap() as u32;
        if o >= bound {
            continue;
        }
        for m in monomials_up_to(bound - 1 - o) {
            out.push(g.shift(&m).truncate(bound));
        }
    }
    out
}

/// Least K ≤ k_max with 𝔪^K ⊂ 𝔞 in k[[x,y]], via 𝔪^K ⊂ 𝔞 + 𝔪^{K+1}.
pub fn primary_bound(a: &Ideal, k_max: u32) -> Result<u32> {
    if a.vars.len() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: a.vars.len() });
    }
    if a.is_unit() {
        return Ok(0);
    }
    if a.is_zero() {
        return Err(Error::NotPrimary(k_max));
    }
    // a common factor through the origin is a common branch
    let g = a.gcd();
    if !g.is_constant() && g.constant_term().is_zero() {
        return Err(Error::NotPrimary(k_max));
    }
    let field = &a.field;
    for k in 1..=k_max {
        let mults = truncated_multiples(a, k + 1);
        let rows = columns_below(field, &mults, k + 1);
        let r = linalg::rank(field, &rows, mults.len());
        let mut extended = mults.clone();
        extended.extend(monomials_up_to(k).into_iter().filter(|m| m[0] + m[1] == k).map(|m| PolyN::monomial(field, &a.vars, m)));
        let rows2 = columns_below(field, &extended, k + 1);
        if linalg::rank(field, &rows2, extended.len()) == r {
            return Ok(k);
        }
    }
    Err(Error::NotPrimary(k_max))
}

/// h ∈ 𝔞·k[[x,y]] for an 𝔪-primary 𝔞, decided modulo 𝔪^K ⊂ 𝔞.
pub fn ideal_membership(h: &PolyN, a: &Ideal, k_max: u32) -> Result<bool> {
    h.compatible(&PolyN::zero(&a.field, &a.vars))?;
    let k = primary_bound(a, k_max)?;
    if k == 0 || h.is_zero() {
        return Ok(true);
    }
    let field = &a.field;
    let mults = truncated_multiples(a, k);
    let rows = columns_below(field, &mults, k);
    let rhs: Vec<Repr> = monomials_up_to(k - 1)
        .iter()
        .map(|m| h.repr_terms().get(m).cloned().unwrap_or_else(|| field.zero_r()))
        .collect();
    Ok(linalg::solve(field, &rows, &rhs, mults.len()).is_some())
}

// ---- equation search ------------------------------------------------------

/// Solves h^N + Σ_j a_j h^{N-j} = 0 with a_j built from the given
/// multisets and multipliers of degree ≤ d.
fn solve_equation(h: &PolyN, a: &Ideal, n: usize, d: u32, pure: bool, max_cols: usize) -> Option<IntegralEquation> {
    let field = &a.field;
    let monos = monomials_up_to(d);
    let mut labels: Vec<(usize, Vec<usize>, Vec<u32>)> = Vec::new();
    let mut cols: Vec<PolyN> = Vec::new();
    let js: Vec<usize> = if pure { vec![n] } else { (1..=n).collect() };
    for j in js {
        let hp = h.pow((n - j) as u32);
        for s in multisets(a.gens.len(), j) {
            let base = &product(&a.gens, &s, field, &a.vars) * &hp;
            for m in &monos {
                labels.push((j, s.clone(), m.clone()));
                cols.push(base.shift(m));
            }
        }
    }
    if cols.len() > max_cols {
        return None;
    }
    let target = h.pow(n as u32);
    let mut keys: Vec<Vec<u32>> = cols.iter().chain(std::iter::once(&target)).flat_map(|c| c.repr_terms().keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Repr>> = keys
        .iter()
        .map(|k| cols.iter().map(|c| c.repr_terms().get(k).cloned().unwrap_or_else(|| field.zero_r())).collect())
        .collect();
    let rhs: Vec<Repr> = keys
        .iter()
        .map(|k| field.neg_r(&target.repr_terms().get(k).cloned().unwrap_or_else(|| field.zero_r())))
        .collect();
    let x = linalg::solve(field, &rows, &rhs, cols.len())?;
    let mut coeffs: Vec<Vec<(PolyN, Vec<usize>)>> = vec![Vec::new(); n];
    for ((j, s, m), c) in labels.into_iter().zip(x) {
        if field.is_zero_r(&c) {
            continue;
        }
        let list = &mut coeffs[j - 1];
        let term = PolyN::monomial(field, &a.vars, m).scale(&FieldElement::from_repr(field.clone(), c));
        match list.iter_mut().find(|(_, idx)| *idx == s) {
            Some((mult, _)) => *mult = &*mult + &term,
            None => list.push((term, s)),
        }
    }
    Some(IntegralEquation { degree: n, coeffs })
}

/// Bounded search for an explicit integral equation: first h^N ∈ 𝔞^N with
/// polynomial multipliers, then the general system.
pub fn find_integral_equation(h: &PolyN, a: &Ideal, max_degree: usize, coeff_degree: u32) -> Option<IntegralEquation> {
    if a.is_zero() {
        return None;
    }
    const MAX_COLUMNS: usize = 600;
    for n in 1..=max_degree {
        if let Some(eq) = solve_equation(h, a, n, coeff_degree, true, MAX_COLUMNS) {
            return Some(eq);
        }
    }
    for n in 2..=max_degree {
        if let Some(eq) = solve_equation(h, a, n, coeff_degree, false, MAX_COLUMNS) {
            return Some(eq);
        }
    }
    None
}

// ---- the pipeline -----------------------------------------------------------

#[derive(Clone, Debug)]
pub enum Evidence {
    MonomialOracle,
    ExplicitEquation(IntegralEquation),
    /// The ideal contains a unit of the local ring.
    UnitIdeal,
}

#[derive(Clone, Debug)]
pub enum IntegralityVerdict {
    Integral(Evidence),
    NotIntegral { witness: Param, orders: (OrderValue, OrderValue) },
    PassedBranchTests(Vec<Param>),
    Unknown(String),
}

impl IntegralityVerdict {
    pub fn is_not_integral(&self) -> bool {
        matches!(self, IntegralityVerdict::NotIntegral { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            IntegralityVerdict::Integral(_) => "INTEGRAL",
            IntegralityVerdict::NotIntegral { .. } => "NOT INTEGRAL",
            IntegralityVerdict::PassedBranchTests(_) => "PASSED BRANCH TESTS",
            IntegralityVerdict::Unknown(_) => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Budget {
    /// Largest N for the equation search.
    pub max_degree: usize,
    /// Largest total degree of a multiplier in the equation search.
    pub coeff_degree: u32,
    pub max_steps: usize,
    pub precision: u32,
    /// Extra parametrizations to test.
    pub extra: Vec<Param>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 3, coeff_degree: 8, max_steps: 64, precision: DEFAULT_BRANCH_PRECISION, extra: Vec::new() }
    }
}

fn not_integral(h: &PolyN, a: &Ideal, phi: Param) -> Result<Option<IntegralityVerdict>> {
    let orders = pullback_orders(h, a, &phi)?;
    if orders.0.ge_certified(orders.1) {
        return Ok(None);
    }
    Ok(Some(IntegralityVerdict::NotIntegral { witness: phi, orders }))
}

/// Refutation through the quadratic transforms of `v`: separate h from
/// the generators and pull back along a generic line.
fn hn_refutation(v: &Valuation, h: &PolyN, a: &Ideal, max_steps: usize) -> Result<Option<IntegralityVerdict>> {
    let (_, state) = separate_principal(v, &a.gens, h, max_steps)?;
    let phi = refuting_param(&state, &a.gens, h)?;
    not_integral(h, a, phi)
}

fn monomial_decision(h: &PolyN, a: &Ideal) -> Result<Option<IntegralityVerdict>> {
    let pts = exponents_of(a)?;
    let region = NewtonRegion::new(&pts);
    let bad = h.repr_terms().keys().find(|e| !region.contains(e[0], e[1]));
    let Some(bad) = bad else {
        return Ok(Some(IntegralityVerdict::Integral(Evidence::MonomialOracle)));
    };
    let Some((p, q)) = separating_weight(&pts, (bad[0], bad[1])) else {
        return Ok(None);
    };
    // weighted initial form of h at (p, q), evaluated off its zero set
    let w = |e: &[u32]| p as u64 * e[0] as u64 + q as u64 * e[1] as u64;
    let wmin = h.repr_terms().keys().map(|e| w(e)).min().unwrap();
    let field = &a.field;
    let init: Vec<(Vec<u32>, FieldElement)> = h.terms().into_iter().filter(|(e, _)| w(e) == wmin).collect();
    let points: Vec<(FieldElement, FieldElement)> = match field.size() {
        None => (2i64..=64).flat_map(|s| (1..s).map(move |i| (i, s - i))).map(|(i, j)| (field.from_i64(i), field.from_i64(j))).collect(),
        Some(_) => {
            let nz: Vec<FieldElement> = (1u32..256).filter_map(|i| field.element_at(&i.into())).collect();
            nz.iter().flat_map(|x| nz.iter().map(move |y| (x.clone(), y.clone()))).collect()
        }
    };
    for (s, r) in points {
        let val = init.iter().fold(field.zero(), |acc, (e, c)| &acc + &(&(c * &s.pow(e[0] as u64)) * &r.pow(e[1] as u64)));
        if val.is_zero() {
            continue;
        }
        let x = Series1::from_terms(field, [(p, s)], crate::series::Precision::Exact)?;
        let y = Series1::from_terms(field, [(q, r)], crate::series::Precision::Exact)?;
        return not_integral(h, a, Param::new(vec![x, y])?);
    }
    Ok(None)
}

/// Decides, refutes, or bounds the integrality of h over 𝔞.
pub fn is_integral(h: &PolyN, a: &Ideal, budget: &Budget) -> IntegralityVerdict {
    match integral_pipeline(h, a, budget) {
        Ok(v) => v,
        Err(e) => IntegralityVerdict::Unknown(e.to_string()),
    }
}

fn integral_pipeline(h: &PolyN, a: &Ideal, budget: &Budget) -> Result<IntegralityVerdict> {
    h.compatible(&PolyN::zero(&a.field, &a.vars))?;
    if h.nvars() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: h.nvars() });
    }
    if h.is_zero() {
        return Ok(IntegralityVerdict::Integral(Evidence::ExplicitEquation(IntegralEquation {
            degree: 1,
            coeffs: vec![Vec::new()],
        })));
    }
    if a.is_unit() {
        return Ok(IntegralityVerdict::Integral(Evidence::UnitIdeal));
    }
    if a.is_zero() {
        let st = hn_start(&Valuation::order(2), &a.field, &a.vars)?;
        let phi = refuting_param(&st, &[], h)?;
        return Ok(not_integral(h, a, phi)?.expect("h is not nilpotent"));
    }
    let mut notes: Vec<String> = Vec::new();

    // (1) monomial ideals are decided exactly
    if a.is_monomial() {
        match monomial_decision(h, a)? {
            Some(IntegralityVerdict::Integral(_)) => {
                let eq = find_integral_equation(h, a, budget.max_degree, budget.coeff_degree);
                return Ok(IntegralityVerdict::Integral(eq.map_or(Evidence::MonomialOracle, Evidence::ExplicitEquation)));
            }
            Some(v) => return Ok(v),
            None => notes.push("no monomial witness over this field".into()),
        }
    }

    // (2) branches of the generator product, refined through the HN process
    let mut tested: Vec<Param> = Vec::new();
    let mut probes: Vec<Valuation> = Vec::new();
    match expand_branches(&a.generator_product(), budget.precision) {
        Ok(set) => {
            for b in set.branches {
                let v = Valuation::curve(b.curve.clone(), b.param.clone())?;
                if !parametric_test(h, a, &b.param)? {
                    if let Ok(Some(verdict)) = hn_refutation(&v, h, a, budget.max_steps) {
                        return Ok(verdict);
                    }
                    return Ok(not_integral(h, a, b.param)?.expect("failed branch test"));
                }
                tested.push(b.param);
                probes.push(v);
            }
        }
        Err(e) => notes.push(format!("branch expansion: {e}")),
    }
    for phi in &budget.extra {
        if !parametric_test(h, a, phi)? {
            return Ok(not_integral(h, a, phi.clone())?.expect("failed test"));
        }
        tested.push(phi.clone());
    }

    // (3) refutation probes
    probes.push(Valuation::order(2));
    for p in 1..=4 {
        for q in 1..=4 {
            if num_integer::gcd(p, q) == 1 && (p, q) != (1, 1) {
                probes.push(Valuation::monomial(vec![vec![p, q]])?);
            }
        }
    }
    for v in &probes {
        match hn_refutation(v, h, a, budget.max_steps) {
            Ok(Some(verdict)) => return Ok(verdict),
            Ok(None) | Err(Error::HypothesisViolated(_)) => {}
            Err(e) => notes.push(e.to_string()),
        }
    }

    // (4) explicit equation
    if let Some(eq) = find_integral_equation(h, a, budget.max_degree, budget.coeff_degree) {
        return Ok(IntegralityVerdict::Integral(Evidence::ExplicitEquation(eq)));
    }

    // (5)
    if tested.is_empty() {
        notes.push("no parametrization could be tested".into());
        Ok(IntegralityVerdict::Unknown(notes.join("; ")))
    } else {
        Ok(IntegralityVerdict::PassedBranchTests(tested))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;

    fn setup() -> (CoeffField, Vars) {
        (CoeffField::rationals(), vars(&["x", "y"]))
    }

    fn p(f: &CoeffField, v: &Vars, t: &[(&[u32], i64)]) -> PolyN {
        PolyN::from_i64(f, v, t)
    }

    fn cusp_ideal(f: &CoeffField, v: &Vars) -> Ideal {
        Ideal::new(vec![p(f, v, &[(&[2, 0], 1), (&[0, 3], 1)]), p(f, v, &[(&[3, 0], 1)])]).unwrap()
    }

    #[test]
    fn certificates() {
        let (f, v) = setup();
        let x = p(&f, &v, &[(&[1, 0], 1)]);
        let a = Ideal::new(vec![x.clone()]).unwrap();
        let eq = IntegralEquation { degree: 1, coeffs: vec![vec![(p(&f, &v, &[(&[0, 0], -1)]), vec![0])]] };
        assert!(verify_integral_equation(&x, &a, &eq).unwrap());
        assert!(!verify_integral_equation(&p(&f, &v, &[(&[0, 1], 1)]), &a, &eq).unwrap());
        let b = Ideal::new(vec![p(&f, &v, &[(&[2, 0], 1)]), p(&f, &v, &[(&[0, 2], 1)])]).unwrap();
        let xy = p(&f, &v, &[(&[1, 1], 1)]);
        let eq2 = IntegralEquation { degree: 2, coeffs: vec![vec![], vec![(p(&f, &v, &[(&[0, 0], -1)]), vec![0, 1])]] };
        assert!(verify_integral_equation(&xy, &b, &eq2).unwrap());
        let bad = IntegralEquation { degree: 2, coeffs: vec![vec![], vec![(p(&f, &v, &[(&[0, 0], -1)]), vec![0])]] };
        assert!(matches!(verify_integral_equation(&xy, &b, &bad), Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn closure_of_monomial_ideals() {
        let (f, v) = setup();
        let show = |a: &Ideal| monomial_closure(a).unwrap().to_string();
        let a = Ideal::new(vec![p(&f, &v, &[(&[3, 0], 1)]), p(&f, &v, &[(&[0, 2], 1)])]).unwrap();
        assert_eq!(show(&a), "(x^3, x^2*y, y^2)");
        let m = Ideal::new(vec![p(&f, &v, &[(&[1, 0], 1)]), p(&f, &v, &[(&[0, 1], 1)])]).unwrap();
        assert_eq!(show(&m), "(x, y)");
        let m2 = Ideal::new(vec![p(&f, &v, &[(&[2, 0], 1)]), p(&f, &v, &[(&[1, 1], 1)]), p(&f, &v, &[(&[0, 2], 1)])]).unwrap();
        assert_eq!(show(&m2), "(x^2, x*y, y^2)");
        let nonprimary = Ideal::new(vec![p(&f, &v, &[(&[2, 1], 1)])]).unwrap();
        assert_eq!(show(&nonprimary), "(x^2*y)");
    }

    #[test]
    fn membership() {
        let (f, v) = setup();
        let a = cusp_ideal(&f, &v);
        assert_eq!(primary_bound(&a, 20).unwrap(), 6);
        assert!(!ideal_membership(&p(&f, &v, &[(&[0, 5], 1)]), &a, 20).unwrap());
        assert!(ideal_membership(&p(&f, &v, &[(&[3, 0], 1)]), &a, 20).unwrap());
        assert!(ideal_membership(&p(&f, &v, &[(&[1, 3], 1)]), &a, 20).unwrap());
        let line = Ideal::new(vec![p(&f, &v, &[(&[1, 1], 1)]), p(&f, &v, &[(&[2, 0], 1)])]).unwrap();
        assert!(matches!(ideal_membership(&p(&f, &v, &[(&[0, 5], 1)]), &line, 10), Err(Error::NotPrimary(_))));
    }

    #[test]
    fn cusp_refutation_and_y5() {
        let (f, v) = setup();
        let a = cusp_ideal(&f, &v);
        let b = Budget::default();
        match is_integral(&p(&f, &v, &[(&[0, 4], 1)]), &a, &b) {
            IntegralityVerdict::NotIntegral { witness, orders } => {
                assert_eq!(witness.to_string(), "(t^7 - t^3, t^6 - t^2)");
                assert_eq!(orders, (OrderValue::Finite(8), OrderValue::Finite(9)));
            }
            other => panic!("{other:?}"),
        }
        let verdict = is_integral(&p(&f, &v, &[(&[0, 5], 1)]), &a, &b);
        assert!(!verdict.is_not_integral(), "{verdict:?}");
    }

    #[test]
    fn classic_integral_element() {
        let (f, v) = setup();
        let a = Ideal::new(vec![p(&f, &v, &[(&[2, 0], 1)]), p(&f, &v, &[(&[0, 2], 1)])]).unwrap();
        let xy = p(&f, &v, &[(&[1, 1], 1)]);
        match is_integral(&xy, &a, &Budget::default()) {
            IntegralityVerdict::Integral(Evidence::ExplicitEquation(eq)) => {
                assert_eq!(eq.degree, 2);
                assert!(verify_integral_equation(&xy, &a, &eq).unwrap());
            }
            other => panic!("{other:?}"),
        }
        match is_integral(&p(&f, &v, &[(&[1, 0], 1)]), &a, &Budget::default()) {
            IntegralityVerdict::NotIntegral { orders, .. } => assert!(!orders.0.ge_certified(orders.1)),
            other => panic!("{other:?}"),
        }
    }
}
