//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lojex_cli::expr::{parse_expr, parse_field};
use lojex_core::{
    check_main_theorem, exponent_via_closure, farey_form, hn_trace, ideal_membership, is_farey, is_integral, lojasiewicz_exponent,
    nu_eval, ord_pullback, order_at_stage, substitute, vars, Budget, CoeffField, ExponentValue, FieldElement, Ideal,
    IntegralityVerdict, OrderValue, Param, PolyN, Series1, Termination, Valuation, Vars,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q() -> CoeffField {
    CoeffField::rationals()
}

fn xy() -> Vars {
    vars(&["x", "y"])
}

fn p(s: &str) -> PolyN {
    parse_expr(s, &q(), &xy()).unwrap()
}

fn cusp_ideal() -> Ideal {
    Ideal::new(vec![p("x^2+y^3"), p("x^3")]).unwrap()
}

fn cusp_valuation() -> Valuation {
    let phi = Param::new(vec![Series1::from_i64(&q(), &[(3, 1)]), Series1::from_i64(&q(), &[(2, -1)])]).unwrap();
    Valuation::curve(p("x^2+y^3"), phi).unwrap()
}

fn c1_golden_table() -> Check {
    let st = hn_trace(&cusp_valuation(), &q(), &xy(), 12).map_err(|e| e.to_string())?;
    let expect: [(&[&str], &[&str], &[&str]); 6] = [
        (&["x1 := x/y", "y1 := y"], &["nu(x1) = (0,1)", "nu(y1) = (0,2)"], &["x = x1*y1", "y = y1"]),
        (&["x2 := x1", "y2 := y1/x1"], &["nu(x2) = (0,1)", "nu(y2) = (0,1)"], &["x = x2^2*y2", "y = x2*y2"]),
        (&["x3 := x2", "y3 := y2/x2 + 1"], &["nu(x3) = (0,1)", "nu(y3) = (1,-6)"], &["x = x3^3*(y3 - 1)", "y = x3^2*(y3 - 1)"]),
        (&["x4 := x3", "y4 := y3/x3"], &["nu(x4) = (0,1)", "nu(y4) = (1,-7)"], &["x = x4^3*(x4*y4 - 1)", "y = x4^2*(x4*y4 - 1)"]),
        (&["x5 := x4", "y5 := y4/x4"], &["nu(x5) = (0,1)", "nu(y5) = (1,-8)"], &["x = x5^3*(x5^2*y5 - 1)", "y = x5^2*(x5^2*y5 - 1)"]),
        (&["x6 := x5", "y6 := y5/x5"], &["nu(x6) = (0,1)", "nu(y6) = (1,-9)"], &["x = x6^3*(x6^3*y6 - 1)", "y = x6^2*(x6^3*y6 - 1)"]),
    ];
    for (k, (rec, vals, back)) in expect.iter().enumerate() {
        let r = st.row(k + 1);
        ensure!(r.recursive == *rec, "row {} recursive {:?}", k + 1, r.recursive);
        ensure!(r.values == *vals, "row {} values {:?}", k + 1, r.values);
        ensure!(r.back == *back, "row {} back {:?}", k + 1, r.back);
    }
    ensure!(st.steps()[0].pivot == 1, "step 1 pivot should be y");
    ensure!(st.steps()[1..].iter().all(|s| s.pivot == 0), "later pivots should be x");
    ensure!(st.steps()[2].residues[1] == q().from_i64(-1), "residue at step 3: {}", st.steps()[2].residues[1]);
    for i in 7..=12usize {
        let r = st.row(i);
        let e = i - 3;
        let inner = format!("x{i}^{e}*y{i} - 1");
        ensure!(r.recursive == [format!("x{i} := x{}", i - 1), format!("y{i} := y{}/x{}", i - 1, i - 1)], "row {i} recursive");
        ensure!(r.values == [format!("nu(x{i}) = (0,1)"), format!("nu(y{i}) = (1,{})", -(i as i64) - 3)], "row {i} values {:?}", r.values);
        ensure!(r.back == [format!("x = x{i}^3*({inner})"), format!("y = x{i}^2*({inner})")], "row {i} back {:?}", r.back);
    }
    Ok(())
}

fn c2_stage_orders() -> Check {
    let st = hn_trace(&cusp_valuation(), &q(), &xy(), 6).map_err(|e| e.to_string())?;
    let got: Vec<u64> = ["x^3", "x^2+y^3", "y^4"].iter().map(|s| order_at_stage(&st, &p(s)).unwrap()).collect();
    ensure!(got == [9, 10, 8], "orders at stage 6: {got:?}");
    Ok(())
}

fn c3_refutation() -> Check {
    match is_integral(&p("y^4"), &cusp_ideal(), &Budget::default()) {
        IntegralityVerdict::NotIntegral { witness, orders } => {
            ensure!(witness.to_string() == "(t^7 - t^3, t^6 - t^2)", "witness {witness}");
            ensure!(orders == (OrderValue::Finite(8), OrderValue::Finite(9)), "orders {orders:?}");
            let a = cusp_ideal();
            let oa = a.generators().iter().map(|g| ord_pullback(g, &witness).unwrap()).fold(OrderValue::Infinity, OrderValue::min_certified);
            ensure!(ord_pullback(&p("y^4"), &witness).unwrap() == OrderValue::Finite(8) && oa == OrderValue::Finite(9), "recomputed orders");
            Ok(())
        }
        other => Err(format!("verdict {}", other.label())),
    }
}

fn c4_y5() -> Check {
    let a = cusp_ideal();
    ensure!(!ideal_membership(&p("y^5"), &a, 32).map_err(|e| e.to_string())?, "y^5 should not lie in a");
    let v = is_integral(&p("y^5"), &a, &Budget::default());
    ensure!(!v.is_not_integral(), "y^5 refuted");
    let cusp = Param::new(vec![Series1::from_i64(&q(), &[(3, 1)]), Series1::from_i64(&q(), &[(2, -1)])]).unwrap();
    let line = Param::new(vec![Series1::zero(&q()), Series1::from_i64(&q(), &[(1, 1)])]).unwrap();
    let ord = |f: &str, phi: &Param| ord_pullback(&p(f), phi).unwrap();
    ensure!(ord("y^5", &cusp) == OrderValue::Finite(10) && ord("x^3", &cusp) == OrderValue::Finite(9), "orders on the cusp");
    ensure!(ord("y^5", &line) == OrderValue::Finite(5) && ord("x^2+y^3", &line) == OrderValue::Finite(3), "orders on x = 0");
    Ok(())
}

fn c5_exponent() -> Check {
    let r = lojasiewicz_exponent(&cusp_ideal()).map_err(|e| e.to_string())?;
    ensure!(r.value.to_string() == "9/2", "value {}", r.value);
    ensure!(r.witness.as_ref().map(Param::to_string).as_deref() == Some("(t^3, -t^2)"), "witness {:?}", r.witness);
    let v = r.value.finite().unwrap();
    ensure!(farey_form(v) == (4.into(), 1.into(), 2.into()) && is_farey(v), "farey form");
    Ok(())
}

fn c6_main_theorem() -> Check {
    let rep = check_main_theorem(&cusp_ideal(), 12, 12).map_err(|e| e.to_string())?;
    ensure!(rep.discrepancies.is_empty(), "cusp discrepancies {:?}", rep.discrepancies);
    ensure!(rep.holds(9, 2) == Some(true) && rep.holds(8, 2) == Some(false), "boundary at q = 2");
    let a = Ideal::new(vec![p("x^3"), p("y^2")]).unwrap();
    let rep = check_main_theorem(&a, 9, 9).map_err(|e| e.to_string())?;
    ensure!(rep.discrepancies.is_empty(), "(x^3, y^2) discrepancies {:?}", rep.discrepancies);
    for qq in 1..=3 {
        ensure!(rep.holds(3 * qq, qq) == Some(true) && rep.holds(3 * qq - 1, qq) == Some(false), "boundary p = 3q at q = {qq}");
    }
    Ok(())
}

fn random_monomial_ideal(rng: &mut ChaCha8Rng) -> Ideal {
    let mono = |i: u32, j: u32| PolyN::monomial(&q(), &xy(), vec![i, j]);
    let mut gens = vec![mono(rng.gen_range(1..=8), 0), mono(0, rng.gen_range(1..=8))];
    for _ in 0..rng.gen_range(0..=3) {
        let d = rng.gen_range(2..=8);
        let i = rng.gen_range(1..d);
        gens.push(mono(i, d - i));
    }
    Ideal::new(gens).unwrap()
}

fn c7_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..50 {
        let a = random_monomial_ideal(&mut rng);
        let l = lojasiewicz_exponent(&a).map_err(|e| e.to_string())?.value;
        let (o, _, _) = exponent_via_closure(&a, 64, 4).map_err(|e| e.to_string())?;
        ensure!(l == ExponentValue::Finite(o.clone()), "ideal {a}: branches {l}, closure {o}");
        if k < 20 {
            let l2 = lojasiewicz_exponent(&a.power(2)).map_err(|e| e.to_string())?.value;
            ensure!(l2 == ExponentValue::Finite(o * BigRational::from_integer(2.into())), "ideal {a}: L(a^2) = {l2}");
        }
    }
    Ok(())
}

fn subtractive_euclid(mut a: i64, mut b: i64) -> usize {
    let mut n = 0;
    while a != b {
        if a > b {
            a -= b;
        } else {
            b -= a;
        }
        n += 1;
    }
    n
}

fn c8_monomial_termination() -> Check {
    for a in 1..=30 {
        for b in 1..=30 {
            let nu = Valuation::monomial(vec![vec![a, b]]).map_err(|e| e.to_string())?;
            let st = hn_trace(&nu, &q(), &xy(), 64).map_err(|e| format!("({a},{b}): {e}"))?;
            let want = subtractive_euclid(a, b);
            ensure!(st.termination() == Termination::Divisorial(want), "({a},{b}): {:?}, want {want}", st.termination());
        }
    }
    Ok(())
}

fn c9_three_variables() -> Check {
    let v = vars(&["x", "y", "z"]);
    let nu = Valuation::monomial(vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]).map_err(|e| e.to_string())?;
    let st = hn_trace(&nu, &q(), &v, 10).map_err(|e| e.to_string())?;
    ensure!(st.steps().len() == 10, "steps {}", st.steps().len());
    for (k, step) in st.steps().iter().enumerate() {
        let i = k + 1;
        ensure!(step.pivot == 0, "pivot at step {i}");
        ensure!(step.residues.iter().all(FieldElement::is_zero), "residues at step {i}");
        let d = if i == 1 { "x".to_string() } else { format!("x^{i}") };
        let fwd = st.row(i).forward;
        ensure!(fwd == [format!("x{i} = x"), format!("y{i} = y/{d}"), format!("z{i} = z/{d}")], "forward {fwd:?}");
    }
    Ok(())
}

fn c10_height_one() -> Check {
    let a = Ideal::new(vec![p("x*y"), p("x^2")]).unwrap();
    let r = lojasiewicz_exponent(&a).map_err(|e| e.to_string())?;
    ensure!(r.value == ExponentValue::Infinity, "value {}", r.value);
    let w = r.witness.ok_or("no witness")?;
    ensure!(w.to_string() == "(0, t)", "witness {w}");
    ensure!(ord_pullback(&p("x"), &w).unwrap() == OrderValue::Infinity, "witness not on x = 0");
    Ok(())
}

fn rand_coeff(rng: &mut ChaCha8Rng, f: &CoeffField) -> FieldElement {
    let mut c = f.zero();
    let gens: Vec<FieldElement> = f.generator_names().into_iter().map(|(_, g)| f.embed(&g).unwrap()).collect();
    let mut basis = vec![f.one()];
    for g in &gens {
        basis = basis.iter().flat_map(|b| [b.clone(), b * g]).collect();
    }
    for b in basis {
        if rng.gen_bool(0.6) {
            let r = BigRational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=6).into());
            let k = if f.characteristic() == 0 { f.from_rational(&r).unwrap() } else { f.from_i64(rng.gen_range(-50..=50)) };
            c = &c + &(&k * &b);
        }
    }
    c
}

fn rand_poly(rng: &mut ChaCha8Rng, f: &CoeffField, v: &Vars, terms: usize, deg: u32) -> PolyN {
    let mut out = PolyN::zero(f, v);
    for _ in 0..rng.gen_range(1..=terms) {
        let e: Vec<u32> = (0..v.len()).map(|_| rng.gen_range(0..=deg)).collect();
        out = &out + &PolyN::monomial(f, v, e).scale(&rand_coeff(rng, f));
    }
    out
}

fn rand_param(rng: &mut ChaCha8Rng, f: &CoeffField) -> Param {
    loop {
        let comps: Vec<Series1> = (0..2)
            .map(|_| {
                let terms: Vec<(u32, FieldElement)> = (0..rng.gen_range(0..=3)).map(|_| (rng.gen_range(1..=6), rand_coeff(rng, f))).collect();
                let mut s = Series1::zero(f);
                for (k, c) in terms {
                    s = s.add(&Series1::from_terms(f, [(k, c)], lojex_core::Precision::Exact).unwrap());
                }
                s
            })
            .collect();
        if let Ok(phi) = Param::new(comps) {
            return phi;
        }
    }
}

fn c11_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (f, v) = (q(), xy());
    let valuations = vec![
        Valuation::order(2),
        Valuation::monomial(vec![vec![3, 5]]).unwrap(),
        Valuation::monomial(vec![vec![1, 1], vec![0, 1]]).unwrap(),
        cusp_valuation(),
    ];
    for nu in &valuations {
        for _ in 0..40 {
            let a = rand_poly(&mut rng, &f, &v, 4, 4);
            let b = rand_poly(&mut rng, &f, &v, 4, 4);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let (va, vb) = (nu_eval(nu, &a).unwrap(), nu_eval(nu, &b).unwrap());
            ensure!(nu_eval(nu, &(&a * &b)).unwrap() == &va + &vb, "nu(fg) != nu(f) + nu(g) for {a}, {b}");
            let s = &a + &b;
            if !s.is_zero() {
                let vs = nu_eval(nu, &s).unwrap();
                ensure!(vs >= va.clone().min(vb.clone()), "ultrametric law fails for {a}, {b}");
                ensure!(va == vb || vs == va.clone().min(vb.clone()), "strict ultrametric law fails for {a}, {b}");
            }
        }
    }
    for _ in 0..100 {
        let a = rand_poly(&mut rng, &f, &v, 4, 4);
        let b = rand_poly(&mut rng, &f, &v, 4, 4);
        let phi = rand_param(&mut rng, &f);
        let c = phi.components();
        let (sa, sb) = (substitute(&a, c).unwrap(), substitute(&b, c).unwrap());
        ensure!(substitute(&(&a + &b), c).unwrap() == sa.add(&sb), "substitute not additive");
        ensure!(substitute(&(&a * &b), c).unwrap() == sa.mul(&sb), "substitute not multiplicative");
        if !a.is_zero() && !b.is_zero() {
            let sum = |x: OrderValue, y: OrderValue| match (x, y) {
                (OrderValue::Finite(i), OrderValue::Finite(j)) => OrderValue::Finite(i + j),
                _ => OrderValue::Infinity,
            };
            ensure!((&a * &b).order() == sum(a.order(), b.order()), "order(fg)");
            let oab = ord_pullback(&(&a * &b), &phi).unwrap();
            ensure!(oab == sum(ord_pullback(&a, &phi).unwrap(), ord_pullback(&b, &phi).unwrap()), "ord phi*(fg)");
        }
    }
    let ideals = [cusp_ideal(), Ideal::new(vec![p("x^3 - y^2"), p("x*y^2 + y^4")]).unwrap()];
    for a in &ideals {
        let oa = a.order().finite().unwrap();
        for _ in 0..50 {
            let h = a.generators().iter().fold(PolyN::zero(&f, &v), |acc, g| &acc + &(&rand_poly(&mut rng, &f, &v, 3, 3) * g));
            let phi = rand_param(&mut rng, &f);
            let o = ord_pullback(&h, &phi).unwrap();
            ensure!(o.ge_certified(OrderValue::Finite(oa * phi.ord())), "ord phi*h < ord a * ord phi for h = {h}, phi = {phi}");
        }
    }
    for spec in ["q", "fp:101", "ext:q:a^2-2", "ext:fp:7:b^2-3"] {
        let k = parse_field(spec).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let h = rand_poly(&mut rng, &k, &v, 6, 5);
            let back = parse_expr(&h.to_string(), &k, &v).map_err(|e| format!("{spec}: `{h}`: {e}"))?;
            ensure!(back == h, "{spec}: `{h}` reparsed as `{back}`");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, Duration); 11] = [
        ("golden Hamburger-Noether table, rows 1-12", c1_golden_table, Duration::from_secs(1)),
        ("stage-6 orders 9, 10, 8", c2_stage_orders, Duration::from_secs(1)),
        ("y^4 refuted by (t^7 - t^3, t^6 - t^2), orders (8, 9)", c3_refutation, Duration::from_secs(1)),
        ("y^5 outside a, not refuted", c4_y5, Duration::from_secs(5)),
        ("exponent 9/2, witness (t^3, -t^2), Farey form", c5_exponent, Duration::from_secs(1)),
        ("p/q >= L iff (x,y)^p in closure(a^q)", c6_main_theorem, Duration::from_secs(10)),
        ("branch exponent = closure oracle on 50 monomial ideals", c7_oracle, Duration::from_secs(60)),
        ("monomial valuations stop after subtractive-Euclid steps", c8_monomial_termination, Duration::from_secs(60)),
        ("lex valuation in three variables", c9_three_variables, Duration::from_secs(5)),
        ("(xy, x^2) has infinite exponent on x = 0", c10_height_one, Duration::from_secs(1)),
        ("seeded property suites", c11_properties, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = res.and_then(|()| if took > *limit { Err(format!("took {took:?}, limit {limit:?}")) } else { Ok(()) });
        match res {
            Ok(()) => println!("criterion {:>2}: PASS  {:>8.1} ms  {name}", i + 1, took.as_secs_f64() * 1e3),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {:>8.1} ms  {name}: {msg}", i + 1, took.as_secs_f64() * 1e3);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
