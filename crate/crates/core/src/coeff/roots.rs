//! Root finding, square roots and irreducibility certificates.
//!
//! Finite fields get complete answers (distinct-degree plus equal-degree
//! splitting). Characteristic zero is handled for rational roots over ℚ and
//! for quadratics over towers of quadratic extensions; anything else is
//! reported as an unsupported extension rather than guessed.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::{pdivrem, pgcd, pmonic, pmul, ppowmod, psub, trim};
use super::{is_prime_u64, CoeffField, FieldElement, Repr, UniPoly};
use crate::error::{Error, Result};

/// Diagnostic for characteristics in which tangent cones of the standard
/// cusp-type examples degenerate.
pub fn characteristic_warning(field: &CoeffField) -> Option<String> {
    match field.characteristic() {
        2 | 3 => Some(format!(
            "characteristic {} is small: initial forms such as x^2 + y^3 degenerate, branch data may differ from characteristic 0",
            field.characteristic()
        )),
        _ => None,
    }
}

/// Roots of `f` lying in its coefficient field with their multiplicities,
/// in canonical order.
///
/// Fails with [`Error::UnsupportedExtension`] when the field is a
/// characteristic-zero tower in which this implementation cannot decide
/// whether further roots exist.
pub fn roots_in_field(f: &UniPoly) -> Result<Vec<(FieldElement, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let field = f.field().clone();
    let mut roots = roots_r(&field, f.coeffs_repr())?;
    roots.sort_by(|a, b| a.canonical_cmp(b));
    roots.dedup();
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let lin = [field.neg_r(&r), field.one_r()];
        let mut rest = f.coeffs_repr().to_vec();
        let mut mult = 0;
        loop {
            let (q, rem) = pdivrem(&field, &rest, &lin);
            if !rem.is_empty() {
                break;
            }
            mult += 1;
            rest = q;
        }
        out.push((FieldElement::from_repr(field.clone(), r), mult));
    }
    Ok(out)
}

/// Monic irreducible factors of degree at least two, as far as they can be
/// determined: complete over finite fields; over characteristic zero the
/// cofactor left after removing all roots in the field.
pub fn nonlinear_factors(f: &UniPoly) -> Result<Vec<UniPoly>> {
    let field = f.field().clone();
    if field.is_finite() {
        return Ok(finite_irreducible_factors(f)
            .into_iter()
            .filter(|(g, _)| g.degree().unwrap_or(0) >= 2)
            .map(|(g, _)| g)
            .collect());
    }
    let mut rest = squarefree_part_char0(&field, f.coeffs_repr());
    for (r, _) in roots_in_field(f)? {
        rest = pdivrem(&field, &rest, &[field.neg_r(r.repr()), field.one_r()]).0;
    }
    let rest = UniPoly::from_repr(field, pmonic(f.field(), &rest));
    Ok(if rest.degree().unwrap_or(0) >= 2 { vec![rest] } else { vec![] })
}

fn roots_r(field: &CoeffField, f: &[Repr]) -> Result<Vec<Repr>> {
    let f = pmonic(field, f);
    if f.len() <= 1 {
        return Ok(vec![]);
    }
    if field.is_finite() {
        return Ok(finite_roots(field, &f));
    }
    let f = squarefree_part_char0(field, &f);
    match field.base() {
        None => rational_roots(&f),
        Some(base) => tower_roots(field, base, &f),
    }
}

fn squarefree_part_char0(field: &CoeffField, f: &[Repr]) -> Vec<Repr> {
    let d = super::upoly::pderiv(field, f);
    let g = pgcd(field, f, &d);
    pmonic(field, &pdivrem(field, f, &g).0)
}

fn linear_root(field: &CoeffField, f: &[Repr]) -> Repr {
    // monic a0 + Y
    field.neg_r(&f[0])
}

fn quadratic_roots(field: &CoeffField, f: &[Repr]) -> Result<Vec<Repr>> {
    // Y^2 + bY + c, characteristic different from 2
    let two = field.int_r(&BigInt::from(2));
    let b = &f[1];
    let c = &f[0];
    let disc = field.sub_r(&field.mul_r(b, b), &field.mul_r(&field.int_r(&BigInt::from(4)), c));
    match sqrt_r(field, &disc)? {
        None => Ok(vec![]),
        Some(s) => {
            let nb = field.neg_r(b);
            let r1 = field.div_r(&field.add_r(&nb, &s), &two)?;
            let r2 = field.div_r(&field.sub_r(&nb, &s), &two)?;
            Ok(vec![r1, r2])
        }
    }
}

/// Roots over a characteristic-zero extension: roots already in the base
/// field, then the quadratic formula on what remains.
fn tower_roots(field: &CoeffField, base: &CoeffField, f: &[Repr]) -> Result<Vec<Repr>> {
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    // coefficients in the base field: find base roots first
    let in_base: Option<Vec<Repr>> = rest
        .iter()
        .map(|c| match c {
            Repr::Ext(v) if v.len() <= 1 => Some(v.first().cloned().unwrap_or_else(|| base.zero_r())),
            _ => None,
        })
        .collect();
    if let Some(bf) = in_base {
        for r in roots_r(base, &bf)? {
            let lifted = field.embed_r(base, &r);
            out.push(lifted.clone());
            rest = pdivrem(field, &rest, &[field.neg_r(&lifted), field.one_r()]).0;
        }
    }
    match rest.len() {
        0 | 1 => {}
        2 => out.push(linear_root(field, &rest)),
        3 => out.extend(quadratic_roots(field, &rest)?),
        _ => {
            // A base-field polynomial whose remaining factor has odd degree
            // over a quadratic tower cannot pick up new roots only if it is
            // irreducible; we cannot certify that in general.
            return Err(Error::UnsupportedExtension(format!(
                "root finding for degree {} over {field}",
                rest.len() - 1
            )));
        }
    }
    Ok(out)
}

fn rational_roots(f: &[Repr]) -> Result<Vec<Repr>> {
    let q: Vec<BigRational> = f
        .iter()
        .map(|c| match c {
            Repr::Q(x) => x.clone(),
            _ => unreachable!(),
        })
        .collect();
    let mut den = BigInt::one();
    for c in &q {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = q.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut out = Vec::new();
    let mut lo = 0;
    while ints[lo].is_zero() {
        lo += 1;
    }
    if lo > 0 {
        out.push(Repr::Q(BigRational::zero()));
    }
    let ints = &ints[lo..];
    if ints.len() <= 1 {
        return Ok(out);
    }
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
        return Err(Error::UnsupportedExtension("coefficients too large for the rational root test".into()));
    };
    let eval = |x: &BigRational| {
        let mut acc = BigRational::zero();
        for c in ints.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    };
    let mut found: Vec<BigRational> = Vec::new();
    for p in &ps {
        for d in &qs {
            for s in [1, -1] {
                let cand = BigRational::new(p * BigInt::from(s), d.clone());
                if !found.contains(&cand) && eval(&cand).is_zero() {
                    found.push(cand);
                }
            }
        }
    }
    out.extend(found.into_iter().map(Repr::Q));
    Ok(out)
}

/// Positive divisors; `None` when the number is too large to factor here.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= m && p <= limit {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if m > BigInt::one() {
        if &p * &p > m {
            primes.push((m, 1));
        } else {
            let v = m.to_u64()?;
            for f in factor_u64(v) {
                match primes.iter_mut().find(|(q, _)| *q == BigInt::from(f)) {
                    Some(entry) => entry.1 += 1,
                    None => primes.push((BigInt::from(f), 1)),
                }
            }
        }
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pw);
                pw *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

fn factor_u64(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![];
    }
    if is_prime_u64(n) {
        return vec![n];
    }
    let d = pollard_rho(n);
    let mut out = factor_u64(d);
    out.extend(factor_u64(n / d));
    out
}

fn pollard_rho(n: u64) -> u64 {
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

// ---- square roots ---------------------------------------------------------

/// A square root of `a` in `field`, if one exists.
pub fn sqrt_in_field(a: &FieldElement) -> Result<Option<FieldElement>> {
    let field = a.field().clone();
    Ok(sqrt_r(&field, a.repr())?.map(|r| FieldElement::from_repr(field, r)))
}

fn sqrt_r(field: &CoeffField, a: &Repr) -> Result<Option<Repr>> {
    if field.is_zero_r(a) {
        return Ok(Some(a.clone()));
    }
    if field.is_finite() {
        let f = vec![field.neg_r(a), field.zero_r(), field.one_r()];
        return Ok(finite_roots(field, &f).into_iter().min_by(|x, y| x.canonical_cmp(y)));
    }
    match a {
        Repr::Q(x) => Ok(rational_sqrt(x).map(Repr::Q)),
        Repr::Ext(v) => {
            let base = field.base().unwrap();
            let m = field.minpoly_repr();
            if m.len() != 3 {
                // odd-degree extension: an element of the base has a square
                // root here exactly when it has one in the base
                if v.len() <= 1 && field.relative_degree() % 2 == 1 {
                    let b = v.first().cloned().unwrap_or_else(|| base.zero_r());
                    return Ok(sqrt_r(base, &b)?.map(|s| field.embed_r(base, &s)));
                }
                return Err(Error::UnsupportedExtension(format!("square roots in {field}")));
            }
            quadratic_ext_sqrt(field, base, v)
        }
        Repr::Fp(_) => unreachable!(),
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Square root in B(α), α² + bα + c = 0, characteristic zero.
///
/// With s = 2α + b, s² = D = b² − 4c; writing z = u + v·s and
/// (x + y·s)² = z gives x² + D·y² = u, 2xy = v.
fn quadratic_ext_sqrt(field: &CoeffField, base: &CoeffField, z: &[Repr]) -> Result<Option<Repr>> {
    let m = field.minpoly_repr();
    let (c, b) = (&m[0], &m[1]);
    let two = base.int_r(&BigInt::from(2));
    let four = base.int_r(&BigInt::from(4));
    let disc = base.sub_r(&base.mul_r(b, b), &base.mul_r(&four, c));
    let p0 = z.first().cloned().unwrap_or_else(|| base.zero_r());
    let p1 = z.get(1).cloned().unwrap_or_else(|| base.zero_r());
    let v = base.div_r(&p1, &two)?;
    let u = base.sub_r(&p0, &base.mul_r(&v, b));
    let build = |x: &Repr, y: &Repr| -> Repr {
        // x + y(2α + b) = (x + yb) + 2y·α
        let mut coeffs = vec![base.add_r(x, &base.mul_r(y, b)), base.mul_r(&two, y)];
        trim(base, &mut coeffs);
        Repr::Ext(coeffs)
    };
    if base.is_zero_r(&v) {
        if let Some(x) = sqrt_r(base, &u)? {
            return Ok(Some(build(&x, &base.zero_r())));
        }
        let ratio = base.div_r(&u, &disc)?;
        return Ok(sqrt_r(base, &ratio)?.map(|y| build(&base.zero_r(), &y)));
    }
    let norm = base.sub_r(&base.mul_r(&u, &u), &base.mul_r(&disc, &base.mul_r(&v, &v)));
    let Some(n) = sqrt_r(base, &norm)? else {
        return Ok(None);
    };
    for cand in [base.add_r(&u, &n), base.sub_r(&u, &n)] {
        let half = base.div_r(&cand, &two)?;
        if let Some(x) = sqrt_r(base, &half)? {
            if base.is_zero_r(&x) {
                continue;
            }
            let y = base.div_r(&v, &base.mul_r(&two, &x))?;
            return Ok(Some(build(&x, &y)));
        }
    }
    Ok(None)
}

// ---- finite fields --------------------------------------------------------

fn x_poly(field: &CoeffField) -> Vec<Repr> {
    vec![field.zero_r(), field.one_r()]
}

/// Distinct roots of a monic polynomial over a finite field.
fn finite_roots(field: &CoeffField, f: &[Repr]) -> Vec<Repr> {
    let q = field.size().unwrap();
    let x = x_poly(field);
    let xq = ppowmod(field, &x, &q, f);
    let g = pgcd(field, f, &psub(field, &xq, &x));
    let mut out = Vec::new();
    for lin in equal_degree_split(field, &g, 1) {
        out.push(linear_root(field, &lin));
    }
    out
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
fn equal_degree_split(field: &CoeffField, f: &[Repr], d: usize) -> Vec<Vec<Repr>> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    if n == d {
        return vec![f.to_vec()];
    }
    let q = field.size().unwrap();
    let p = field.characteristic();
    let qd = num_traits::pow(q.clone(), d);
    let mut idx = BigUint::from(q.clone());
    loop {
        // deterministic enumeration of non-constant polynomials of degree < n
        let a = poly_at_index(field, &idx, n);
        idx += 1u32;
        if a.len() <= 1 {
            continue;
        }
        let h = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(kd-1))
            let k = qd.bits() - 1;
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..k {
                cur = pdivrem(field, &pmul(field, &cur, &cur), f).1;
                acc = super::upoly::padd(field, &acc, &cur);
            }
            acc
        } else {
            let e = (&qd - 1u32) / 2u32;
            psub(field, &ppowmod(field, &a, &e, f), &[field.one_r()])
        };
        let g = pgcd(field, f, &h);
        if g.len() > 1 && g.len() < f.len() {
            let other = pmonic(field, &pdivrem(field, f, &g).0);
            let mut out = equal_degree_split(field, &g, d);
            out.extend(equal_degree_split(field, &other, d));
            return out;
        }
    }
}

fn poly_at_index(field: &CoeffField, idx: &BigUint, len: usize) -> Vec<Repr> {
    let q = field.size().unwrap();
    let mut rest = idx.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        if rest.is_zero() {
            break;
        }
        let (d, r) = rest.div_rem(&q);
        out.push(field.index_r(&r));
        rest = d;
    }
    trim(field, &mut out);
    out
}

/// Squarefree decomposition over a finite field: pairs (monic factor, multiplicity).
fn finite_squarefree(field: &CoeffField, f: &[Repr]) -> Vec<(Vec<Repr>, usize)> {
    let f = pmonic(field, f);
    if f.len() <= 1 {
        return vec![];
    }
    let p = field.characteristic() as usize;
    let d = super::upoly::pderiv(field, &f);
    if d.is_empty() {
        // f = g(Y^p); take p-th roots of coefficients
        let g: Vec<Repr> = f.iter().step_by(p).map(|c| field.pth_root_r(c)).collect();
        return finite_squarefree(field, &g).into_iter().map(|(h, m)| (h, m * p)).collect();
    }
    let mut out = Vec::new();
    let mut c = pgcd(field, &f, &d);
    let mut w = pmonic(field, &pdivrem(field, &f, &c).0);
    let mut i = 1;
    while w.len() > 1 {
        let y = pgcd(field, &w, &c);
        let z = pmonic(field, &pdivrem(field, &w, &y).0);
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = pmonic(field, &pdivrem(field, &c, &w).0);
    }
    if c.len() > 1 {
        let g: Vec<Repr> = c.iter().step_by(p).map(|x| field.pth_root_r(x)).collect();
        out.extend(finite_squarefree(field, &g).into_iter().map(|(h, m)| (h, m * p)));
    }
    out
}

/// Complete factorization over a finite field into monic irreducibles with
/// multiplicities, sorted by degree then canonically.
pub(crate) fn finite_irreducible_factors(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field().clone();
    assert!(field.is_finite());
    let mut out: Vec<(Vec<Repr>, usize)> = Vec::new();
    let q = field.size().unwrap();
    let x = x_poly(&field);
    for (sf, mult) in finite_squarefree(&field, f.coeffs_repr()) {
        let mut rest = sf;
        let mut xpow = x.clone();
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push((rest.clone(), mult));
                break;
            }
            xpow = ppowmod(&field, &xpow, &q, &rest);
            let g = pgcd(&field, &rest, &psub(&field, &xpow, &x));
            if g.len() > 1 {
                for h in equal_degree_split(&field, &g, d) {
                    out.push((h, mult));
                }
                rest = pmonic(&field, &pdivrem(&field, &rest, &g).0);
                xpow = pdivrem(&field, &xpow, &rest).1;
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.len().cmp(&b.0.len()).then_with(|| Repr::Ext(a.0.clone()).canonical_cmp(&Repr::Ext(b.0.clone())))
    });
    let mut merged: Vec<(Vec<Repr>, usize)> = Vec::new();
    for (h, m) in out {
        match merged.last_mut() {
            Some(last) if last.0 == h => last.1 += m,
            _ => merged.push((h, m)),
        }
    }
    merged.into_iter().map(|(h, m)| (UniPoly::from_repr(field.clone(), h), m)).collect()
}

// ---- irreducibility -------------------------------------------------------

pub(crate) fn check_irreducible(f: &UniPoly, name: &str) -> Result<()> {
    let field = f.field();
    let deg = f.degree().unwrap_or(0);
    let reducible = |factor: &UniPoly| Error::ReduciblePolynomial(factor.display_in(name));
    if field.is_finite() {
        let factors = finite_irreducible_factors(f);
        if factors.len() == 1 && factors[0].1 == 1 {
            return Ok(());
        }
        return Err(reducible(&factors[0].0));
    }
    if deg <= 3 {
        match roots_in_field(f) {
            Ok(roots) => {
                if let Some((r, _)) = roots.first() {
                    return Err(reducible(&UniPoly::linear(r)));
                }
                if deg == 2 || field.base().is_none() {
                    return Ok(());
                }
            }
            Err(Error::UnsupportedExtension(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if field.base().is_none() && modular_irreducible(f) {
        return Ok(());
    }
    Err(Error::UnsupportedExtension(format!(
        "cannot certify irreducibility of {} over {field}",
        f.display_in(name)
    )))
}

/// Sufficient test over ℚ: irreducible modulo a prime not dividing the
/// leading coefficient implies irreducible over ℚ.
fn modular_irreducible(f: &UniPoly) -> bool {
    let q: Vec<BigRational> = f.coeffs_repr().iter().map(|c| match c {
        Repr::Q(x) => x.clone(),
        _ => unreachable!(),
    }).collect();
    let mut den = BigInt::one();
    for c in &q {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = q.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let lead = ints.last().unwrap().clone();
    let mut tried = 0;
    for p in (3u64..2000).filter(|&p| is_prime_u64(p)) {
        if (&lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = CoeffField::prime(p).unwrap();
        let g = UniPoly::from_repr(fp.clone(), ints.iter().map(|c| fp.int_r(c)).collect());
        let factors = finite_irreducible_factors(&g);
        if factors.len() == 1 && factors[0].1 == 1 {
            return true;
        }
        tried += 1;
        if tried > 40 {
            break;
        }
    }
    false
}
