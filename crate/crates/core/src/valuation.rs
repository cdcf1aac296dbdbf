//! The valuation kinds used by the engine, valued in ℤ^r with the
//! lexicographic order.

use std::fmt;
use std::ops::{Add, Sub};

use crate::coeff::{CoeffField, FieldElement};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::PolyN;
use crate::series::{pullback_lead, Param};

/// A value in ℤ^r, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexValue(pub Vec<i64>);

impl LexValue {
    pub fn zero(rank: usize) -> Self {
        LexValue(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_positive(&self) -> bool {
        *self > LexValue::zero(self.rank())
    }
}

impl Add for &LexValue {
    type Output = LexValue;
    fn add(self, rhs: &LexValue) -> LexValue {
        LexValue(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LexValue {
    type Output = LexValue;
    fn sub(self, rhs: &LexValue) -> LexValue {
        LexValue(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for LexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub enum ValuationKind {
    /// The order function of the maximal ideal.
    OrderVal,
    /// ν(Σ c_e x^e) = lex-min over the support of W·e.
    MonomialLex { weights: Vec<Vec<i64>> },
    /// ν(f) = (k, ord φ*(f/g^k)) where g^k exactly divides f.
    CurveComposite { curve: PolyN, branch: Param },
}

#[derive(Clone, Debug)]
pub struct Valuation {
    kind: ValuationKind,
    nvars: usize,
    rank: usize,
}

impl Valuation {
    pub fn order(nvars: usize) -> Valuation {
        Valuation { kind: ValuationKind::OrderVal, nvars, rank: 1 }
    }

    /// Rows are lex levels; rows must be linearly independent and every
    /// variable must get a positive value.
    pub fn monomial(weights: Vec<Vec<i64>>) -> Result<Valuation> {
        let Some(n) = weights.first().map(|r| r.len()) else {
            return Err(Error::InvalidValuation("empty weight matrix".into()));
        };
        if n == 0 || weights.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidValuation("weight rows of unequal length".into()));
        }
        let q = CoeffField::rationals();
        let rows: Vec<Vec<_>> =
            weights.iter().map(|r| r.iter().map(|&w| q.from_i64(w).into_repr()).collect()).collect();
        if linalg::rank(&q, &rows, n) != weights.len() {
            return Err(Error::InvalidValuation("weight rows are linearly dependent".into()));
        }
        let v = Valuation { rank: weights.len(), kind: ValuationKind::MonomialLex { weights }, nvars: n };
        for i in 0..n {
            let val = v.monomial_value(&unit_vec(n, i));
            if !val.is_positive() {
                return Err(Error::NotCentered(format!("x{}", i + 1), val.to_string()));
            }
        }
        Ok(v)
    }

    /// The composite valuation of an irreducible plane curve `curve` and a
    /// branch φ of it. The pair is certified: φ's minimal polynomial must
    /// agree with `curve` up to a constant.
    pub fn curve(curve: PolyN, branch: Param) -> Result<Valuation> {
        if curve.nvars() != 2 || branch.arity() != 2 {
            return Err(Error::UnsupportedArity { expected: 2, found: curve.nvars() });
        }
        let curve_k = curve.embed_into(branch.field())?;
        let deg = curve_k.total_degree().unwrap_or(0);
        if deg == 0 {
            return Err(Error::InvalidValuation("curve must be a non-constant polynomial".into()));
        }
        let minimal = match branch.branch_of() {
            Some(g) => g.clone(),
            None => {
                if !branch.is_exact() {
                    return Err(Error::InvalidValuation("truncated branch without a curve certificate".into()));
                }
                crate::branches::implicitize(&branch, deg)?.ok_or_else(|| {
                    Error::InvalidValuation(format!("{branch} does not lie on {curve}"))
                })?
            }
        };
        let minimal = minimal.with_vars(curve_k.vars());
        if minimal.normalize() != curve_k.normalize() {
            return Err(Error::InvalidValuation(if minimal.divides(&curve_k) {
                format!("{curve} is reducible: the branch lies on the factor {minimal}")
            } else {
                format!("{branch} is not a branch of {curve}")
            }));
        }
        let branch = branch.with_source_kept(minimal.clone());
        Ok(Valuation { kind: ValuationKind::CurveComposite { curve: minimal, branch }, nvars: 2, rank: 2 })
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The field in which residues live.
    pub fn residue_field(&self, poly_field: &CoeffField) -> CoeffField {
        match &self.kind {
            ValuationKind::CurveComposite { branch, .. } => branch.field().clone(),
            _ => poly_field.clone(),
        }
    }

    /// Whether the quadratic-transform sequence of this valuation can stop:
    /// the order function and rank-one monomial valuations.
    pub fn can_be_divisorial(&self) -> bool {
        match &self.kind {
            ValuationKind::OrderVal => true,
            ValuationKind::MonomialLex { .. } => self.rank == 1,
            ValuationKind::CurveComposite { .. } => false,
        }
    }

    fn monomial_value(&self, e: &[u32]) -> LexValue {
        match &self.kind {
            ValuationKind::MonomialLex { weights } => {
                LexValue(weights.iter().map(|row| row.iter().zip(e).map(|(w, &k)| w * k as i64).sum()).collect())
            }
            ValuationKind::OrderVal => LexValue(vec![e.iter().map(|&k| k as i64).sum()]),
            ValuationKind::CurveComposite { .. } => unreachable!(),
        }
    }

    fn check_arity(&self, f: &PolyN) -> Result<()> {
        if f.nvars() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: f.nvars() });
        }
        Ok(())
    }

    /// ν(f) for nonzero f.
    pub fn eval(&self, f: &PolyN) -> Result<LexValue> {
        self.check_arity(f)?;
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        match &self.kind {
            ValuationKind::OrderVal | ValuationKind::MonomialLex { .. } => {
                Ok(f.repr_terms().keys().map(|e| self.monomial_value(e)).min().unwrap())
            }
            ValuationKind::CurveComposite { curve, branch } => {
                let (k, rest) = curve_part(curve, branch, f)?;
                match pullback_lead(&rest, branch)? {
                    Some((o, _)) => Ok(LexValue(vec![k as i64, o as i64])),
                    None => Err(Error::InvalidValuation("cofactor vanishes on the branch".into())),
                }
            }
        }
    }

    /// The residue in the residue field of num/den, for ν(num) = ν(den).
    pub fn residue(&self, num: &PolyN, den: &PolyN) -> Result<FieldElement> {
        let vn = self.eval(num)?;
        let vd = self.eval(den)?;
        if vn != vd {
            return Err(Error::ValueMismatch(vn.to_string(), vd.to_string()));
        }
        match &self.kind {
            ValuationKind::OrderVal => {
                let pn = num.initial_form()?;
                let pd = den.initial_form()?;
                let (e, c) = pd.repr_terms().iter().next_back().unwrap();
                let cn = num.field().embed(&pn.coeff(e))?;
                let ratio = cn.checked_div(&FieldElement::from_repr(den.field().clone(), c.clone()))?;
                if pn == pd.scale(&ratio) {
                    Ok(ratio)
                } else {
                    Err(Error::NotAUnit(format!("initial forms of {num} and {den} are not proportional")))
                }
            }
            ValuationKind::MonomialLex { .. } => {
                let face = |p: &PolyN| -> Vec<Vec<u32>> {
                    p.repr_terms().keys().filter(|e| self.monomial_value(e) == vn).cloned().collect()
                };
                let (fn_, fd) = (face(num), face(den));
                if fn_.len() == 1 && fd.len() == 1 && fn_[0] == fd[0] {
                    num.coeff(&fn_[0]).checked_div(&den.coeff(&fd[0]))
                } else {
                    Err(Error::NotAUnit(format!(
                        "{num} / {den} has no residue in the coefficient field (faces differ)"
                    )))
                }
            }
            ValuationKind::CurveComposite { curve, branch } => {
                let (_, rn) = curve_part(curve, branch, num)?;
                let (_, rd) = curve_part(curve, branch, den)?;
                let (_, cn) = pullback_lead(&rn, branch)?.ok_or(Error::ZeroInput)?;
                let (_, cd) = pullback_lead(&rd, branch)?.ok_or(Error::ZeroInput)?;
                cn.checked_div(&cd)
            }
        }
    }
}

impl Param {
    pub(crate) fn with_source_kept(self, curve: PolyN) -> Param {
        let source = self.source_arc();
        self.with_source(Some(curve), source)
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// (k, f / g^k) with g^k ∥ f, computed over the branch field.
fn curve_part(curve: &PolyN, branch: &Param, f: &PolyN) -> Result<(u32, PolyN)> {
    let fk = f.embed_into(branch.field())?.with_vars(curve.vars());
    Ok(curve.multiplicity_in(&fk))
}

/// ν(f) for a valuation.
pub fn nu_eval(v: &Valuation, f: &PolyN) -> Result<LexValue> {
    v.eval(f)
}

/// Residue of num/den for ν(num) = ν(den).
pub fn residue(v: &Valuation, num: &PolyN, den: &PolyN) -> Result<FieldElement> {
    v.residue(num, den)
}
