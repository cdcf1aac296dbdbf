//! The Łojasiewicz exponent of an ideal of k[[x,y]] and the cross-check of
//! its characterization through integral closures of powers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::branches::{expand_branches, DEFAULT_BRANCH_PRECISION};
use crate::closure::{exponents_of, Ideal, NewtonRegion};
use crate::error::{Error, Result};
use crate::series::{ord_ideal_pullback, ord_pullback, OrderValue, Param};
use crate::poly::PolyN;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExponentValue {
    Finite(BigRational),
    Infinity,
}

impl ExponentValue {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExponentValue::Finite(r) => Some(r),
            ExponentValue::Infinity => None,
        }
    }

    /// p/q ≥ 𝔏.
    pub fn at_most(&self, p: u64, q: u64) -> bool {
        match self {
            ExponentValue::Finite(r) => BigRational::new(p.into(), q.into()) >= *r,
            ExponentValue::Infinity => false,
        }
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentValue::Finite(r) => write!(f, "{r}"),
            ExponentValue::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchRow {
    pub branch: Param,
    pub multiplicity: u32,
    pub ideal_order: u64,
    pub param_order: u64,
    pub ratio: BigRational,
}

#[derive(Clone, Debug)]
pub struct ExponentResult {
    pub value: ExponentValue,
    pub witness: Option<Param>,
    pub table: Vec<BranchRow>,
    /// Set when the ideal is the unit ideal and 0 is returned by convention.
    pub unit_convention: bool,
    pub warnings: Vec<String>,
}

fn check_plane(a: &Ideal) -> Result<()> {
    if a.vars().len() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: a.vars().len() });
    }
    Ok(())
}

/// 𝔏(𝔞) as the largest ratio ord φ*𝔞 / ord φ over the branches of the
/// product of the generators; ∞ when the generators share a factor through
/// the origin.
pub fn lojasiewicz_exponent(a: &Ideal) -> Result<ExponentResult> {
    lojasiewicz_exponent_with(a, DEFAULT_BRANCH_PRECISION)
}

pub fn lojasiewicz_exponent_with(a: &Ideal, precision: u32) -> Result<ExponentResult> {
    check_plane(a)?;
    let mut res = ExponentResult {
        value: ExponentValue::Infinity,
        witness: None,
        table: Vec::new(),
        unit_convention: false,
        warnings: Vec::new(),
    };
    if a.is_zero() {
        return Ok(res);
    }
    if a.is_unit() {
        res.value = ExponentValue::Finite(BigRational::zero());
        res.unit_convention = true;
        return Ok(res);
    }
    let g = a.gcd();
    if !g.is_constant() && g.constant_term().is_zero() {
        let set = expand_branches(&g, precision)?;
        res.warnings = set.warnings;
        res.witness = set.branches.into_iter().next().map(|b| b.param);
        return Ok(res);
    }
    let set = expand_branches(&a.generator_product(), precision)?;
    res.warnings = set.warnings;
    let mut best: Option<usize> = None;
    for b in set.branches {
        let oa = match ord_ideal_pullback(a.generators(), &b.param)? {
            OrderValue::Finite(k) => k,
            _ => return Err(Error::InvalidInput("a generator-free common branch was found".into())),
        };
        let ratio = BigRational::new(oa.into(), b.param.ord().into());
        if best.is_none_or(|i| ratio > res.table[i].ratio) {
            best = Some(res.table.len());
        }
        res.table.push(BranchRow { branch: b.param, multiplicity: b.multiplicity, ideal_order: oa, param_order: 0, ratio });
    }
    for row in &mut res.table {
        row.param_order = row.branch.ord();
    }
    let i = best.expect("a proper ideal has a branch through the origin");
    res.value = ExponentValue::Finite(res.table[i].ratio.clone());
    res.witness = Some(res.table[i].branch.clone());
    Ok(res)
}

/// N + b/a with 0 ≤ b < a, for a positive rational.
pub fn farey_form(r: &BigRational) -> (BigInt, BigInt, BigInt) {
    let (n, rem) = r.numer().div_mod_floor(r.denom());
    (n, rem, r.denom().clone())
}

/// Whether r = N + b/a with integers 0 < b < a < N.
pub fn is_farey(r: &BigRational) -> bool {
    let (n, b, a) = farey_form(r);
    BigInt::zero() < b && b < a && a < n
}

/// min over q ≤ q_max of p_q/q, where p_q is the least p ≤ p_max with every
/// degree-p monomial in the integral closure of 𝔞^q, computed from the
/// Newton region of the monomial ideal 𝔞^q. Returns the value and (p, q).
pub fn exponent_via_closure(a: &Ideal, p_max: u64, q_max: u64) -> Result<(BigRational, u64, u64)> {
    check_plane(a)?;
    exponents_of(a)?;
    let mut best: Option<(BigRational, u64, u64)> = None;
    for q in 1..=q_max {
        let aq = a.power(q as usize);
        let region = NewtonRegion::new(&exponents_of(&aq)?);
        let Some(p) = (1..=p_max).find(|&p| (0..=p).all(|i| region.contains(i as u32, (p - i) as u32))) else {
            continue;
        };
        let r = BigRational::new(p.into(), q.into());
        if best.as_ref().is_none_or(|(b, _, _)| r < *b) {
            best = Some((r, p, q));
        }
    }
    best.ok_or_else(|| Error::BoundTooSmall(format!("no p <= {p_max} works for any q <= {q_max}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub p: u64,
    pub q: u64,
    /// p/q ≥ 𝔏.
    pub lhs: bool,
    /// Every degree-p monomial passes the parametric test against 𝔞^q.
    pub branch_side: bool,
    /// The same through the monomial closure oracle, for monomial ideals.
    pub oracle_side: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub exponent: ExponentValue,
    pub p_max: u64,
    pub q_max: u64,
    /// `grid[q-1][p-1]` is the branch side at (p, q).
    pub grid: Vec<Vec<bool>>,
    pub discrepancies: Vec<Discrepancy>,
}

impl MainTheoremReport {
    pub fn holds(&self, p: u64, q: u64) -> Option<bool> {
        self.grid.get(q.checked_sub(1)? as usize)?.get(p.checked_sub(1)? as usize).copied()
    }
}

/// For all p ≤ p_max, q ≤ q_max compares p/q ≥ 𝔏(𝔞) with
/// (x,y)^p ⊂ closure(𝔞^q), the latter tested on the branch family and, for
/// monomial ideals, through the closure oracle.
pub fn check_main_theorem(a: &Ideal, p_max: u64, q_max: u64) -> Result<MainTheoremReport> {
    let res = lojasiewicz_exponent(a)?;
    let branches: Vec<Param> = if res.table.is_empty() {
        res.witness.iter().cloned().collect()
    } else {
        res.table.iter().map(|r| r.branch.clone()).collect()
    };
    let x = PolyN::var(a.field(), a.vars(), 0);
    let y = PolyN::var(a.field(), a.vars(), 1);
    let mut orders = Vec::with_capacity(branches.len());
    for phi in &branches {
        orders.push((ord_pullback(&x, phi)?, ord_pullback(&y, phi)?));
    }
    let monomial = a.is_monomial();
    let mut report = MainTheoremReport {
        exponent: res.value.clone(),
        p_max,
        q_max,
        grid: Vec::new(),
        discrepancies: Vec::new(),
    };
    for q in 1..=q_max {
        let aq = a.power(q as usize);
        let ideal_orders = branches.iter().map(|phi| ord_ideal_pullback(aq.generators(), phi)).collect::<Result<Vec<_>>>()?;
        let region = if monomial { Some(NewtonRegion::new(&exponents_of(&aq)?)) } else { None };
        let mut row = Vec::with_capacity(p_max as usize);
        for p in 1..=p_max {
            let branch_side = (0..=p).all(|i| {
                orders.iter().zip(&ideal_orders).all(|(&(ox, oy), &oa)| {
                    let oh = monomial_order(ox, oy, i, p - i);
                    oh.ge_certified(oa)
                })
            });
            let oracle_side = region.as_ref().map(|r| (0..=p).all(|i| r.contains(i as u32, (p - i) as u32)));
            let lhs = res.value.at_most(p, q);
            if lhs != branch_side || oracle_side.is_some_and(|o| o != lhs) {
                report.discrepancies.push(Discrepancy { p, q, lhs, branch_side, oracle_side });
            }
            row.push(branch_side);
        }
        report.grid.push(row);
    }
    Ok(report)
}

/// ord φ*(x^i y^j) from the component orders.
fn monomial_order(ox: OrderValue, oy: OrderValue, i: u64, j: u64) -> OrderValue {
    let part = |o: OrderValue, k: u64| -> OrderValue {
        if k == 0 {
            return OrderValue::Finite(0);
        }
        match o {
            OrderValue::Finite(v) => OrderValue::Finite(v * k),
            other => other,
        }
    };
    match (part(ox, i), part(oy, j)) {
        (OrderValue::Finite(a), OrderValue::Finite(b)) => OrderValue::Finite(a + b),
        _ => OrderValue::Infinity,
    }
}

impl ExponentResult {
    /// Ratio as an f64, for display and sorting only.
    pub fn approx(&self) -> Option<f64> {
        self.value.finite().and_then(|r| r.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffField;
    use crate::poly::vars;

    fn ideal(terms: &[&[(&[u32], i64)]]) -> Ideal {
        let f = CoeffField::rationals();
        let v = vars(&["x", "y"]);
        Ideal::new(terms.iter().map(|t| PolyN::from_i64(&f, &v, t)).collect()).unwrap()
    }

    #[test]
    fn cusp_exponent() {
        let a = ideal(&[&[(&[2, 0], 1), (&[0, 3], 1)], &[(&[3, 0], 1)]]);
        let r = lojasiewicz_exponent(&a).unwrap();
        assert_eq!(r.value.to_string(), "9/2");
        assert_eq!(r.witness.unwrap().to_string(), "(t^3, -t^2)");
        let ratios: Vec<String> = r.table.iter().map(|row| row.ratio.to_string()).collect();
        assert_eq!(ratios, vec!["9/2", "3"]);
        let v = r.value.finite().unwrap();
        assert_eq!(farey_form(v), (4.into(), 1.into(), 2.into()));
        assert!(is_farey(v));
    }

    #[test]
    fn trivial_and_infinite() {
        let m = ideal(&[&[(&[1, 0], 1)], &[(&[0, 1], 1)]]);
        assert_eq!(lojasiewicz_exponent(&m).unwrap().value.to_string(), "1");
        let h1 = ideal(&[&[(&[1, 1], 1)], &[(&[2, 0], 1)]]);
        let r = lojasiewicz_exponent(&h1).unwrap();
        assert_eq!(r.value, ExponentValue::Infinity);
        assert_eq!(r.witness.unwrap().to_string(), "(0, t)");
        let unit = ideal(&[&[(&[0, 0], 1), (&[1, 0], 1)]]);
        let r = lojasiewicz_exponent(&unit).unwrap();
        assert!(r.unit_convention);
        assert_eq!(r.value.to_string(), "0");
    }

    #[test]
    fn closure_side() {
        let a = ideal(&[&[(&[3, 0], 1)], &[(&[0, 2], 1)]]);
        let (r, p, q) = exponent_via_closure(&a, 40, 4).unwrap();
        assert_eq!((r.to_string(), p, q), ("3".to_string(), 3, 1));
        let rep = check_main_theorem(&a, 9, 9).unwrap();
        assert!(rep.discrepancies.is_empty(), "{:?}", rep.discrepancies);
    }

    #[test]
    fn cusp_main_theorem() {
        let a = ideal(&[&[(&[2, 0], 1), (&[0, 3], 1)], &[(&[3, 0], 1)]]);
        let rep = check_main_theorem(&a, 12, 12).unwrap();
        assert!(rep.discrepancies.is_empty(), "{:?}", rep.discrepancies);
        assert_eq!(rep.holds(9, 2), Some(true));
        assert_eq!(rep.holds(8, 2), Some(false));
    }
}
