//! Inputs shared by the benchmarks.

use lojex_core::{vars, CoeffField, Ideal, Param, PolyN, Series1, Valuation, Vars};

pub fn xy() -> Vars {
    vars(&["x", "y"])
}

pub fn poly(terms: &[(&[u32], i64)]) -> PolyN {
    PolyN::from_i64(&CoeffField::rationals(), &xy(), terms)
}

pub fn cusp() -> PolyN {
    poly(&[(&[2, 0], 1), (&[0, 3], 1)])
}

/// (x^2 + y^3, x^3)
pub fn cusp_ideal() -> Ideal {
    Ideal::new(vec![cusp(), poly(&[(&[3, 0], 1)])]).unwrap()
}

pub fn cusp_valuation() -> Valuation {
    let q = CoeffField::rationals();
    let phi = Param::new(vec![Series1::from_i64(&q, &[(3, 1)]), Series1::from_i64(&q, &[(2, -1)])]).unwrap();
    Valuation::curve(cusp(), phi).unwrap()
}

/// (y^2 - x^3)(y^2 - x^5)(x^2 - y^7): three branches with different Puiseux data.
pub fn three_branch_curve() -> PolyN {
    let a = poly(&[(&[0, 2], 1), (&[3, 0], -1)]);
    let b = poly(&[(&[0, 2], 1), (&[5, 0], -1)]);
    let c = poly(&[(&[2, 0], 1), (&[0, 7], -1)]);
    &(&a * &b) * &c
}

pub fn monomial_ideal(exps: &[(u32, u32)]) -> Ideal {
    let q = CoeffField::rationals();
    Ideal::new(exps.iter().map(|&(i, j)| PolyN::monomial(&q, &xy(), vec![i, j])).collect()).unwrap()
}
