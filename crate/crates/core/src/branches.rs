//! Branches of plane curves through the origin by iterated quadratic
//! transforms, read back through the accumulated substitution.

use std::sync::Arc;

use crate::coeff::{characteristic_warning, nonlinear_factors, roots_in_field, CoeffField, FieldElement, UniPoly};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{vars, PolyN};
use crate::series::{substitute, BranchSource, Param, Series1};

pub const DEFAULT_BRANCH_PRECISION: u32 = 32;

/// Blow-ups along one branch before giving up.
const MAX_DEPTH: usize = 256;

#[derive(Clone, Debug)]
pub struct Branch {
    pub param: Param,
    /// The irreducible factor the branch lies on, over `field`.
    pub curve: PolyN,
    pub field: CoeffField,
    /// Multiplicity of `curve` in the input.
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct BranchSet {
    pub curve: PolyN,
    pub branches: Vec<Branch>,
    pub warnings: Vec<String>,
}

impl BranchSet {
    /// Σ ord(φ)·multiplicity, which equals the order of the input curve.
    pub fn weighted_order(&self) -> u64 {
        self.branches.iter().map(|b| b.param.ord() * b.multiplicity as u64).sum()
    }
}

struct Smooth {
    strict: PolyN,
    t_slot: usize,
    subst: Vec<PolyN>,
}

/// All branches of f = 0 at the origin, each known to `precision` terms.
/// A unit has no branches.
pub fn expand_branches(f: &PolyN, precision: u32) -> Result<BranchSet> {
    if f.nvars() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: f.nvars() });
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut set = BranchSet { curve: f.clone(), branches: Vec::new(), warnings: Vec::new() };
    if !f.constant_term().is_zero() {
        return Ok(set);
    }
    set.warnings.extend(characteristic_warning(f.field()));
    let sf = f.squarefree_part();
    let v = sf.vars().clone();
    let x = PolyN::var(sf.field(), &v, 0);
    let y = PolyN::var(sf.field(), &v, 1);
    let mut smooth = Vec::new();
    blow_up(sf.clone(), vec![x, y], 0, &mut smooth)?;
    let deg = sf.total_degree().unwrap_or(1);
    for s in smooth {
        let field = s.strict.field().clone();
        let src = Arc::new(BranchSource { strict: s.strict, t_slot: s.t_slot, subst: s.subst, scale: field.one() });
        let mut n = precision.max(1);
        let param = loop {
            match Param::new(src.series(n)) {
                Ok(p) => break p.with_source(None, Some(src.clone())),
                Err(Error::InvalidParam(_)) if n < crate::series::PRECISION_CAP => n *= 2,
                Err(e) => return Err(e),
            }
        };
        let param = normal_form(&param);
        let curve = implicitize(&param, deg)?.ok_or(Error::PrecisionExhausted)?.with_vars(&v);
        let (multiplicity, _) = curve.multiplicity_in(&f.embed_into(&field)?);
        let src = param.source_arc();
        let param = param.with_source(Some(curve.clone()), src);
        set.branches.push(Branch { param, curve, field, multiplicity });
    }
    Ok(set)
}

fn blow_up(g: PolyN, subst: Vec<PolyN>, depth: usize, out: &mut Vec<Smooth>) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::PrecisionExhausted);
    }
    let m = g.order().finite().expect("nonzero strict transform") as u32;
    if m == 1 {
        let t_slot = if g.coeff(&[0, 1]).is_zero() { 1 } else { 0 };
        out.push(Smooth { strict: g, t_slot, subst });
        return Ok(());
    }
    let field = g.field().clone();
    let p = g.homogeneous_part(m);
    let dehom = p.eval_var(0, &field.one()).to_unipoly(1).expect("bivariate form");
    let unsupported = |e: Error, q: &UniPoly| match e {
        Error::UnsupportedExtension(_) | Error::ReduciblePolynomial(_) => {
            Error::RootNotRepresentable(q.display_in("Y"))
        }
        e => e,
    };
    for (c, _) in roots_in_field(&dehom).map_err(|e| unsupported(e, &dehom))? {
        let (g1, s1) = x_chart(&g, &subst, m, &c)?;
        blow_up(g1, s1, depth + 1, out)?;
    }
    for q in nonlinear_factors(&dehom).map_err(|e| unsupported(e, &dehom))? {
        let d = q.degree().unwrap_or(0);
        if field.characteristic() == 0 && d > 2 {
            return Err(Error::RootNotRepresentable(q.display_in("Y")));
        }
        let ext = field.adjoin_root(&q.monic(), &fresh_name(&field)).map_err(|e| unsupported(e, &q))?;
        let ge = g.embed_into(&ext)?;
        let se: Vec<PolyN> = subst.iter().map(|a| a.embed_into(&ext)).collect::<Result<_>>()?;
        let qe = q.embed_into(&ext)?;
        for (c, _) in roots_in_field(&qe).map_err(|e| unsupported(e, &q))? {
            let (g1, s1) = x_chart(&ge, &se, m, &c)?;
            blow_up(g1, s1, depth + 1, out)?;
        }
    }
    if p.coeff(&[0, m]).is_zero() {
        let v = g.vars();
        let x = PolyN::var(&field, v, 0);
        let y = PolyN::var(&field, v, 1);
        let sub = [&x * &y, y.clone()];
        let (g1, s1) = chart(&g, &subst, &sub, &y.pow(m))?;
        blow_up(g1, s1, depth + 1, out)?;
    }
    Ok(())
}

/// x = X, y = X(Y + c), strict transform divided by X^m.
fn x_chart(g: &PolyN, subst: &[PolyN], m: u32, c: &FieldElement) -> Result<(PolyN, Vec<PolyN>)> {
    let v = g.vars();
    let field = g.field();
    let x = PolyN::var(field, v, 0);
    let y = PolyN::var(field, v, 1);
    let sub = [x.clone(), &x * &(&y + &PolyN::constant(c, v))];
    chart(g, subst, &sub, &x.pow(m))
}

fn chart(g: &PolyN, subst: &[PolyN], sub: &[PolyN], exceptional: &PolyN) -> Result<(PolyN, Vec<PolyN>)> {
    let total = g.compose(sub)?;
    let strict = total.div_exact(exceptional).ok_or_else(|| Error::InvalidInput("exceptional divisor".into()))?;
    let s: Vec<PolyN> = subst.iter().map(|a| a.compose(sub)).collect::<Result<_>>()?;
    Ok((strict, s))
}

fn fresh_name(field: &CoeffField) -> String {
    let used: Vec<String> = field.generator_names().into_iter().map(|(n, _)| n).collect();
    (1..).map(|k| format!("a{k}")).find(|n| !used.contains(n)).unwrap()
}

/// Reparametrizes t ↦ ct so that the x-component (else the y-component)
/// has leading coefficient 1, when such c exists in the field.
pub fn normal_form(phi: &Param) -> Param {
    for comp in phi.components() {
        let Some((k, a)) = comp.leading() else { continue };
        if a.is_one() {
            return phi.clone();
        }
        let field = phi.field();
        let mut coeffs = vec![field.zero(); k as usize + 1];
        coeffs[0] = -&a.inverse().expect("leading coefficient");
        coeffs[k as usize] = field.one();
        let Ok(poly) = UniPoly::new(field, &coeffs) else { continue };
        if let Ok(roots) = roots_in_field(&poly) {
            if let Some((c, _)) = roots.first() {
                return phi.rescaled(c);
            }
        }
    }
    phi.clone()
}

/// The irreducible polynomial of degree ≤ `max_deg` vanishing on φ,
/// normalized, in variables (x, y).
///
/// For truncated φ a kernel element h of degree D found modulo t^N with
/// N > D·max_deg vanishes on φ: otherwise the intersection number of h with
/// the branch would exceed the Bezout bound.
pub fn implicitize(phi: &Param, max_deg: u32) -> Result<Option<PolyN>> {
    if phi.arity() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: phi.arity() });
    }
    let field = phi.field().clone();
    let comp_deg = phi
        .components()
        .iter()
        .map(|c| c.terms().last().map_or(0, |(k, _)| *k))
        .max()
        .unwrap_or(0);
    for d in 1..=max_deg {
        let n = if phi.is_exact() { d * comp_deg + 1 } else { d * max_deg + 1 };
        let comps: Vec<Series1> = if phi.is_exact() || phi.precision().covers(n) {
            phi.components().iter().map(|c| c.truncate(n)).collect()
        } else {
            match phi.extended(n) {
                Some(p) => p.components().iter().map(|c| c.truncate(n)).collect(),
                None => return Err(Error::Undecidable(phi.precision().bound_u32())),
            }
        };
        let monos: Vec<(u32, u32)> = (0..=d).flat_map(|s| (0..=s).map(move |j| (s - j, j))).collect();
        let mut xp = vec![Series1::from_i64(&field, &[(0, 1)]).truncate(n)];
        let mut yp = xp.clone();
        for k in 1..=d as usize {
            xp.push(xp[k - 1].mul(&comps[0]).truncate(n));
            yp.push(yp[k - 1].mul(&comps[1]).truncate(n));
        }
        let cols: Vec<Series1> = monos.iter().map(|&(i, j)| xp[i as usize].mul(&yp[j as usize]).truncate(n)).collect();
        let rows: Vec<Vec<_>> = (0..n)
            .map(|k| cols.iter().map(|c| c.coeff(k).into_repr()).collect())
            .collect();
        let ker = linalg::kernel(&field, &rows, monos.len());
        if let Some(vec) = ker.first() {
            let v = vars(&["x", "y"]);
            let mut h = PolyN::zero(&field, &v);
            for (&(i, j), c) in monos.iter().zip(vec) {
                h.add_term(vec![i, j], c.clone());
            }
            return Ok(Some(h.normalize()));
        }
    }
    Ok(None)
}

/// Whether f∘φ = 0.
pub fn is_branch_of(phi: &Param, f: &PolyN) -> Result<bool> {
    if phi.arity() != f.nvars() {
        return Err(Error::ArityMismatch { expected: f.nvars(), found: phi.arity() });
    }
    let fk = f.embed_into(phi.field())?;
    if phi.is_exact() {
        return Ok(substitute(&fk, phi.components())?.is_zero());
    }
    if let Some(g) = phi.branch_of() {
        // g is irreducible, so g ∤ f forces f∘φ ≠ 0
        return Ok(g.divides(&fk.with_vars(g.vars())));
    }
    let s = substitute(&fk, phi.components())?;
    if s.terms().is_empty() {
        Err(Error::Undecidable(s.precision().bound_u32()))
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    fn q() -> (CoeffField, Vars) {
        (CoeffField::rationals(), vars(&["x", "y"]))
    }

    #[test]
    fn cusp_branch() {
        let (f, v) = q();
        let g = PolyN::from_i64(&f, &v, &[(&[2, 0], 1), (&[0, 3], 1)]);
        let set = expand_branches(&g, 32).unwrap();
        assert_eq!(set.branches.len(), 1);
        let b = &set.branches[0];
        assert_eq!(b.param.to_string(), "(t^3, -t^2)");
        assert_eq!(b.multiplicity, 1);
        assert_eq!(b.curve, g);
    }

    #[test]
    fn axes() {
        let (f, v) = q();
        let g = PolyN::from_i64(&f, &v, &[(&[1, 1], 1)]);
        let set = expand_branches(&g, 32).unwrap();
        let shown: Vec<String> = set.branches.iter().map(|b| b.param.to_string()).collect();
        assert_eq!(shown, vec!["(t, 0)", "(0, t)"]);
    }

    #[test]
    fn multiplicities_and_accounting() {
        let (f, v) = q();
        let g = PolyN::from_i64(&f, &v, &[(&[5, 0], 1), (&[3, 3], 1)]);
        let set = expand_branches(&g, 32).unwrap();
        let shown: Vec<(String, u32)> =
            set.branches.iter().map(|b| (b.param.to_string(), b.multiplicity)).collect();
        assert_eq!(shown, vec![("(t^3, -t^2)".to_string(), 1), ("(0, t)".to_string(), 3)]);
        assert_eq!(set.weighted_order(), 5);
    }

    #[test]
    fn quadratic_tangents() {
        let (f, v) = q();
        let g = PolyN::from_i64(&f, &v, &[(&[2, 0], 1), (&[0, 2], 1), (&[3, 0], 1)]);
        let set = expand_branches(&g, 8).unwrap();
        assert_eq!(set.branches.len(), 2);
        for b in &set.branches {
            assert_eq!(b.field.absolute_degree(), 2);
            assert_eq!(b.param.ord(), 1);
            assert!(is_branch_of(&b.param, &g).unwrap());
        }
        assert_eq!(set.weighted_order(), 2);
    }

    #[test]
    fn cubic_tangent_not_representable() {
        let (f, v) = q();
        let g = PolyN::from_i64(&f, &v, &[(&[3, 0], 1), (&[0, 3], -2), (&[4, 0], 1)]);
        assert!(matches!(expand_branches(&g, 8), Err(Error::RootNotRepresentable(_))));
        let f7 = CoeffField::prime(7).unwrap();
        let g7 = g.embed_into(&f7).unwrap_or_else(|_| PolyN::from_i64(&f7, &v, &[(&[3, 0], 1), (&[0, 3], -2), (&[4, 0], 1)]));
        let set = expand_branches(&g7, 8).unwrap();
        assert_eq!(set.weighted_order(), 3);
    }

    #[test]
    fn nonpolynomial_branch_is_extendable() {
        let (f, v) = q();
        // node: y^2 = x^2 (1 + x)
        let g = PolyN::from_i64(&f, &v, &[(&[0, 2], 1), (&[2, 0], -1), (&[3, 0], -1)]);
        let set = expand_branches(&g, 6).unwrap();
        assert_eq!(set.branches.len(), 2);
        for b in &set.branches {
            assert!(!b.param.is_exact());
            assert_eq!(b.curve, g.normalize());
            let longer = b.param.extended(40).unwrap();
            assert!(substitute(&g, longer.components()).unwrap().terms().is_empty());
        }
    }

    #[test]
    fn branch_membership() {
        let (f, v) = q();
        let cusp = Param::new(vec![Series1::from_i64(&f, &[(3, 1)]), Series1::from_i64(&f, &[(2, -1)])]).unwrap();
        let g = PolyN::from_i64(&f, &v, &[(&[2, 0], 1), (&[0, 3], 1)]);
        assert!(is_branch_of(&cusp, &g).unwrap());
        assert!(!is_branch_of(&cusp, &PolyN::from_i64(&f, &v, &[(&[3, 0], 1)])).unwrap());
        let axis = Param::new(vec![Series1::zero(&f), Series1::from_i64(&f, &[(1, 1)])]).unwrap();
        assert!(is_branch_of(&axis, &(&PolyN::var(&f, &v, 0) * &g)).unwrap());
        let trunc = Param::new(vec![Series1::from_i64(&f, &[(3, 1)]).truncate(5), Series1::from_i64(&f, &[(2, -1)])]).unwrap();
        assert!(matches!(is_branch_of(&trunc, &g), Err(Error::Undecidable(_))));
        assert_eq!(implicitize(&cusp, 3).unwrap().unwrap(), g);
    }
}
