use lojex_core::*;

fn q() -> CoeffField {
    CoeffField::rationals()
}

fn xy() -> Vars {
    vars(&["x", "y"])
}

fn p(t: &[(&[u32], i64)]) -> PolyN {
    PolyN::from_i64(&q(), &xy(), t)
}

fn series(t: &[(u32, i64)]) -> Series1 {
    Series1::from_i64(&q(), t)
}

fn param(a: &[(u32, i64)], b: &[(u32, i64)]) -> Param {
    Param::new(vec![series(a), series(b)]).unwrap()
}

fn cusp() -> PolyN {
    p(&[(&[2, 0], 1), (&[0, 3], 1)])
}

fn cusp_param() -> Param {
    param(&[(3, 1)], &[(2, -1)])
}

fn cusp_ideal() -> Ideal {
    Ideal::new(vec![cusp(), p(&[(&[3, 0], 1)])]).unwrap()
}

#[test]
fn field_arithmetic() {
    let f = q();
    let half = f.from_rational(&num_rational::BigRational::new(1.into(), 2.into())).unwrap();
    let third = f.from_rational(&num_rational::BigRational::new(1.into(), 3.into())).unwrap();
    assert_eq!((&half + &third).to_string(), "5/6");
    let f5 = CoeffField::prime(5).unwrap();
    assert_eq!(&f5.from_i64(3) * &f5.from_i64(4), f5.from_i64(2));
    let qi = f.adjoin_root(&UniPoly::from_i64(&f, &[1, 0, 1]), "i").unwrap();
    let i = qi.generator().unwrap();
    assert_eq!(&i * &i, qi.from_i64(-1));
    let f2 = CoeffField::prime(2).unwrap();
    assert_eq!(f2.adjoin_root(&UniPoly::from_i64(&f2, &[1, 1, 1]), "w").unwrap().size().unwrap(), 4u32.into());
    assert!(matches!(f.adjoin_root(&UniPoly::from_i64(&f, &[-1, 0, 1]), "r"), Err(Error::ReduciblePolynomial(_))));
}

#[test]
fn roots() {
    let f = q();
    let mut r = roots_in_field(&UniPoly::from_i64(&f, &[-1, 0, 1])).unwrap();
    r.sort_by(|a, b| b.0.canonical_cmp(&a.0));
    assert_eq!(r, vec![(f.from_i64(1), 1), (f.from_i64(-1), 1)]);
    assert!(roots_in_field(&UniPoly::from_i64(&f, &[1, 0, 1])).unwrap().is_empty());
    let f7 = CoeffField::prime(7).unwrap();
    let mut r: Vec<FieldElement> = roots_in_field(&UniPoly::from_i64(&f7, &[1, 0, 0, 1])).unwrap().into_iter().map(|(c, m)| {
        assert_eq!(m, 1);
        c
    }).collect();
    r.sort_by(|a, b| a.canonical_cmp(b));
    assert_eq!(r, vec![f7.from_i64(3), f7.from_i64(5), f7.from_i64(6)]);
}

#[test]
fn orders_and_initial_forms() {
    assert_eq!(cusp().order(), OrderValue::Finite(2));
    assert_eq!(PolyN::zero(&q(), &xy()).order(), OrderValue::Infinity);
    assert_eq!(series(&[(6, 1), (6, -1), (9, 1)]).order(), OrderValue::Finite(9));
    assert_eq!(cusp().initial_form().unwrap().to_string(), "x^2");
    let xs = vars(&["X", "Y"]);
    let g = PolyN::from_i64(&q(), &xs, &[(&[3, 1], 1), (&[0, 0], -1)]);
    let big = &PolyN::from_i64(&q(), &xs, &[(&[9, 1], 1)]) * &g.pow(2);
    assert_eq!(big.initial_form().unwrap().to_string(), "X^9*Y");
}

#[test]
fn substitution_and_pullback_orders() {
    let phi = cusp_param();
    assert!(substitute(&cusp(), phi.components()).unwrap().is_zero());
    assert_eq!(substitute(&p(&[(&[1, 0], 1)]), phi.components()).unwrap().to_string(), "t^3");
    assert_eq!(substitute(&p(&[(&[3, 0], 1)]), phi.components()).unwrap().to_string(), "t^9");
    let branch = expand_branches(&cusp(), 16).unwrap().branches.remove(0).param;
    assert_eq!(ord_pullback(&cusp(), &branch).unwrap(), OrderValue::Infinity);
    assert_eq!(ord_pullback(&p(&[(&[3, 0], 1)]), &phi).unwrap(), OrderValue::Finite(9));
    let w = param(&[(7, 1), (3, -1)], &[(6, 1), (2, -1)]);
    assert_eq!(ord_pullback(&p(&[(&[0, 4], 1)]), &w).unwrap(), OrderValue::Finite(8));
    let a = cusp_ideal();
    assert_eq!(ord_ideal_pullback(a.generators(), &branch).unwrap(), OrderValue::Finite(9));
    assert_eq!(ord_ideal_pullback(a.generators(), &param(&[], &[(1, 1)])).unwrap(), OrderValue::Finite(3));
}

#[test]
fn valuation_values_and_residues() {
    let nu = Valuation::curve(cusp(), cusp_param()).unwrap();
    assert_eq!(nu_eval(&nu, &p(&[(&[1, 0], 1)])).unwrap().to_string(), "(0,3)");
    assert_eq!(nu_eval(&nu, &p(&[(&[0, 1], 1)])).unwrap().to_string(), "(0,2)");
    assert_eq!(nu_eval(&Valuation::order(2), &cusp()).unwrap(), LexValue(vec![2]));
    let lex = Valuation::monomial(vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
    let v3 = vars(&["x", "y", "z"]);
    let x3 = PolyN::var(&q(), &v3, 0);
    assert_eq!(nu_eval(&lex, &x3).unwrap(), LexValue(vec![0, 0, 1]));
    // y2 / x2 = (y^2/x) / (x/y) = y^3 / x^2
    assert_eq!(residue(&nu, &p(&[(&[0, 3], 1)]), &p(&[(&[2, 0], 1)])).unwrap(), q().from_i64(-1));
    assert_eq!(residue(&nu, &cusp(), &cusp()).unwrap(), q().one());
}

#[test]
fn hamburger_noether_first_steps() {
    let nu = Valuation::curve(cusp(), cusp_param()).unwrap();
    let st = hn_trace(&nu, &q(), &xy(), 3).unwrap();
    assert_eq!(st.steps()[0].pivot, 1);
    assert_eq!(st.row(1).recursive, vec!["x1 := x/y", "y1 := y"]);
    assert_eq!(st.row(3).recursive, vec!["x3 := x2", "y3 := y2/x2 + 1"]);
    assert_eq!(st.row(3).back, vec!["x = x3^3*(y3 - 1)", "y = x3^2*(y3 - 1)"]);
    let st0 = hn_start(&nu, &q(), &xy()).unwrap();
    assert_eq!(order_at_stage(&st0, &cusp()).unwrap(), 2);
    let nu23 = Valuation::monomial(vec![vec![2, 3]]).unwrap();
    assert_eq!(hn_trace(&nu23, &q(), &xy(), 10).unwrap().termination(), Termination::Divisorial(2));
}

#[test]
fn separation_and_refutation() {
    let nu = Valuation::curve(cusp(), cusp_param()).unwrap();
    let fs = cusp_ideal().generators().to_vec();
    let h = p(&[(&[0, 4], 1)]);
    let (i, st) = separate_principal(&nu, &fs, &h, 20).unwrap();
    assert_eq!(i, 6);
    let phi = refuting_param(&st, &fs, &h).unwrap();
    assert_eq!(phi.to_string(), "(t^7 - t^3, t^6 - t^2)");
    assert_eq!(separate(&nu, &[p(&[(&[3, 0], 1)])], &p(&[(&[2, 0], 1)]), 4).unwrap().0, 0);
    let nu12 = Valuation::monomial(vec![vec![1, 2]]).unwrap();
    assert_eq!(separate(&nu12, &[p(&[(&[0, 1], 1)])], &p(&[(&[1, 0], 1)]), 4).unwrap().0, 1);
    let ord = Valuation::order(2);
    let st_ord = hn_start(&ord, &q(), &xy()).unwrap();
    // at stage 0 the map is the identity, so the witness is the line (at, bt)
    let line = refuting_param(&st_ord, &[p(&[(&[0, 2], 1)])], &p(&[(&[1, 0], 1)])).unwrap();
    assert_eq!(line.to_string(), "(t, t)");
    assert!(matches!(
        refuting_param(&st_ord, &[p(&[(&[1, 0], 1)])], &p(&[(&[0, 1], 1)])),
        Err(Error::HypothesisViolated(_))
    ));
}

#[test]
fn branch_expansion() {
    let set = expand_branches(&cusp(), 16).unwrap();
    let shown: Vec<String> = set.branches.iter().map(|b| b.param.to_string()).collect();
    assert_eq!(shown, vec!["(t^3, -t^2)"]);
    let set = expand_branches(&p(&[(&[1, 1], 1)]), 16).unwrap();
    let shown: Vec<String> = set.branches.iter().map(|b| b.param.to_string()).collect();
    assert_eq!(shown, vec!["(t, 0)", "(0, t)"]);
    let f = &cusp() * &p(&[(&[3, 0], 1)]);
    let set = expand_branches(&f, 16).unwrap();
    let shown: Vec<(String, u32)> = set.branches.iter().map(|b| (b.param.to_string(), b.multiplicity)).collect();
    assert_eq!(shown, vec![("(t^3, -t^2)".to_string(), 1), ("(0, t)".to_string(), 3)]);
    assert_eq!(set.weighted_order(), 5);
    assert!(is_branch_of(&cusp_param(), &cusp()).unwrap());
    assert!(!is_branch_of(&cusp_param(), &p(&[(&[3, 0], 1)])).unwrap());
    let axis = param(&[], &[(1, 1)]);
    assert!(is_branch_of(&axis, &p(&[(&[1, 2], 1), (&[2, 0], 1)])).unwrap());
}

#[test]
fn certificates_and_closures() {
    let x = p(&[(&[1, 0], 1)]);
    let y = p(&[(&[0, 1], 1)]);
    let ax = Ideal::new(vec![x.clone()]).unwrap();
    let eq1 = IntegralEquation { degree: 1, coeffs: vec![vec![(p(&[(&[0, 0], -1)]), vec![0])]] };
    assert!(verify_integral_equation(&x, &ax, &eq1).unwrap());
    assert!(!verify_integral_equation(&y, &ax, &eq1).unwrap());
    let sq = Ideal::new(vec![p(&[(&[2, 0], 1)]), p(&[(&[0, 2], 1)])]).unwrap();
    let eq2 = IntegralEquation { degree: 2, coeffs: vec![vec![], vec![(p(&[(&[0, 0], -1)]), vec![0, 1])]] };
    assert!(verify_integral_equation(&p(&[(&[1, 1], 1)]), &sq, &eq2).unwrap());

    let a = cusp_ideal();
    assert!(parametric_test(&p(&[(&[0, 5], 1)]), &a, &cusp_param()).unwrap());
    assert!(!parametric_test(&p(&[(&[0, 4], 1)]), &a, &param(&[(7, 1), (3, -1)], &[(6, 1), (2, -1)])).unwrap());
    assert!(parametric_test(&cusp(), &a, &param(&[(1, 1)], &[(1, 2)])).unwrap());

    let c = monomial_closure(&Ideal::new(vec![p(&[(&[3, 0], 1)]), p(&[(&[0, 2], 1)])]).unwrap()).unwrap();
    assert_eq!(c.to_string(), "(x^3, x^2*y, y^2)");
    let m = Ideal::new(vec![x.clone(), y.clone()]).unwrap();
    assert_eq!(monomial_closure(&m).unwrap().to_string(), m.to_string());
    let m2 = Ideal::new(vec![p(&[(&[2, 0], 1)]), p(&[(&[1, 1], 1)]), p(&[(&[0, 2], 1)])]).unwrap();
    assert_eq!(monomial_closure(&m2).unwrap().to_string(), m2.to_string());

    assert!(!ideal_membership(&p(&[(&[0, 5], 1)]), &a, 32).unwrap());
    assert!(ideal_membership(&p(&[(&[3, 0], 1)]), &a, 32).unwrap());
    assert!(ideal_membership(&p(&[(&[1, 3], 1)]), &a, 32).unwrap());
}

#[test]
fn integrality_pipeline() {
    let a = cusp_ideal();
    match is_integral(&p(&[(&[0, 4], 1)]), &a, &Budget::default()) {
        IntegralityVerdict::NotIntegral { orders, .. } => assert_eq!(orders, (OrderValue::Finite(8), OrderValue::Finite(9))),
        v => panic!("{}", v.label()),
    }
    assert!(!is_integral(&p(&[(&[0, 5], 1)]), &a, &Budget::default()).is_not_integral());
    let sq = Ideal::new(vec![p(&[(&[2, 0], 1)]), p(&[(&[0, 2], 1)])]).unwrap();
    match is_integral(&p(&[(&[1, 1], 1)]), &sq, &Budget::default()) {
        IntegralityVerdict::Integral(Evidence::ExplicitEquation(eq)) => assert_eq!(eq.degree, 2),
        v => panic!("{}", v.label()),
    }
}

#[test]
fn exponents() {
    let r = lojasiewicz_exponent(&cusp_ideal()).unwrap();
    assert_eq!(r.value.to_string(), "9/2");
    let table: Vec<(String, String)> = r.table.iter().map(|b| (b.branch.to_string(), b.ratio.to_string())).collect();
    assert_eq!(table, vec![("(t^3, -t^2)".into(), "9/2".into()), ("(0, t)".into(), "3".into())]);
    let m = Ideal::new(vec![p(&[(&[1, 0], 1)]), p(&[(&[0, 1], 1)])]).unwrap();
    assert_eq!(lojasiewicz_exponent(&m).unwrap().value.to_string(), "1");
    assert_eq!(exponent_via_closure(&m, 8, 4).unwrap().0.to_string(), "1");
    let h1 = Ideal::new(vec![p(&[(&[1, 1], 1)]), p(&[(&[2, 0], 1)])]).unwrap();
    assert_eq!(lojasiewicz_exponent(&h1).unwrap().value, ExponentValue::Infinity);
    let a = Ideal::new(vec![p(&[(&[3, 0], 1)]), p(&[(&[0, 2], 1)])]).unwrap();
    assert_eq!(exponent_via_closure(&a, 40, 4).unwrap().0.to_string(), "3");
    let b = Ideal::new(vec![p(&[(&[2, 0], 1)]), p(&[(&[1, 1], 1)]), p(&[(&[0, 3], 1)])]).unwrap();
    let lb = lojasiewicz_exponent(&b).unwrap().value;
    assert_eq!(lb, ExponentValue::Finite(exponent_via_closure(&b, 40, 4).unwrap().0));
    let rep = check_main_theorem(&m, 6, 6).unwrap();
    assert!(rep.discrepancies.is_empty());
    for qq in 1..=5 {
        assert_eq!(rep.holds(qq, qq), Some(true));
        assert_eq!(rep.holds(qq + 1, qq + 1), Some(true));
        if qq > 1 {
            assert_eq!(rep.holds(qq - 1, qq), Some(false));
        }
    }
    assert!(matches!(exponent_via_closure(&cusp_ideal(), 10, 2), Err(Error::NotMonomial(_))));
}
