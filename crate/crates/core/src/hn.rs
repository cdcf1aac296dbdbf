//! The Hamburger-Noether process along a valuation: successive quadratic
//! transforms recorded through parameter systems, residues and the
//! polynomial back-substitutions x_j = A_j(y_1, …, y_n).

use std::fmt;

use num_bigint::BigUint;

use crate::coeff::{CoeffField, FieldElement};
use crate::error::{Error, Result};
use crate::poly::{monomial_string, PolyN, Vars};
use crate::series::{Param, Series1};
use crate::valuation::{LexValue, Valuation};

/// One quadratic transform: the pivot keeps its place, every other
/// parameter becomes x_i/x_pivot − a_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNStep {
    pub pivot: usize,
    /// a_i for every index; zero at the pivot.
    pub residues: Vec<FieldElement>,
    pub names: Vec<String>,
}

/// The parameter system of one ring R_i of the sequence.
#[derive(Clone, Debug)]
pub struct Stage {
    pub names: Vars,
    pub values: Vec<LexValue>,
    /// A_j in the stage parameters, with x_j = A_j(y).
    pub subst: Vec<PolyN>,
    /// Each parameter as a reduced fraction (num, den) in the original variables.
    pub forward: Vec<(PolyN, PolyN)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Ongoing,
    /// The next transform is the valuation ring itself.
    Divisorial(usize),
    /// Stopped by the step budget.
    Truncated(usize),
}

#[derive(Clone, Debug)]
pub struct HNState {
    field: CoeffField,
    orig: Vars,
    stages: Vec<Stage>,
    steps: Vec<HNStep>,
    termination: Termination,
}

impl HNState {
    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.orig.len()
    }

    pub fn original_vars(&self) -> &Vars {
        &self.orig
    }

    pub fn steps(&self) -> &[HNStep] {
        &self.steps
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn current(&self) -> &Stage {
        self.stages.last().unwrap()
    }

    pub fn stage_index(&self) -> usize {
        self.steps.len()
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    /// The state after the first `i` steps.
    pub fn at_stage(&self, i: usize) -> HNState {
        let i = i.min(self.steps.len());
        let termination = match self.termination {
            Termination::Divisorial(k) if k == i => self.termination,
            _ => Termination::Ongoing,
        };
        HNState {
            field: self.field.clone(),
            orig: self.orig.clone(),
            stages: self.stages[..=i].to_vec(),
            steps: self.steps[..i].to_vec(),
            termination,
        }
    }

    /// ord_{R_i} f = ord f(A(Y)) at stage `i`.
    pub fn order_at(&self, i: usize, f: &PolyN) -> Result<u64> {
        if f.nvars() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), found: f.nvars() });
        }
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        let stage = self.stages.get(i).ok_or_else(|| Error::InvalidInput(format!("no stage {i}")))?;
        let image = f.embed_into(&self.field)?.compose(&stage.subst)?;
        Ok(image.order().finite().expect("nonzero image"))
    }

    /// f(A(Y)) at stage `i`.
    pub fn image_at(&self, i: usize, f: &PolyN) -> Result<PolyN> {
        let stage = self.stages.get(i).ok_or_else(|| Error::InvalidInput(format!("no stage {i}")))?;
        f.embed_into(&self.field)?.compose(&stage.subst)
    }
}

fn stage_names(orig: &Vars, i: usize) -> Vars {
    if i == 0 {
        return orig.clone();
    }
    orig.iter().map(|v| format!("{v}{i}")).collect::<Vec<_>>().into()
}

fn value_of(v: &Valuation, frac: &(PolyN, PolyN)) -> Result<LexValue> {
    Ok(&v.eval(&frac.0)? - &v.eval(&frac.1)?)
}

fn classify(v: &Valuation, state: &mut HNState) {
    let values = &state.current().values;
    if v.can_be_divisorial() && values.iter().all(|x| x == &values[0]) {
        state.termination = Termination::Divisorial(state.steps.len());
    }
}

/// Stage 0 of the process along `v` for the variables `vars` over `field`.
pub fn hn_start(v: &Valuation, field: &CoeffField, vars: &Vars) -> Result<HNState> {
    let n = vars.len();
    if n < 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: n });
    }
    if v.nvars() != n {
        return Err(Error::ArityMismatch { expected: v.nvars(), found: n });
    }
    let kf = v.residue_field(field);
    if !field.is_subfield_of(&kf) {
        return Err(Error::FieldMismatch(field.spec_string(), kf.spec_string()));
    }
    let one = PolyN::one(&kf, vars);
    let forward: Vec<(PolyN, PolyN)> = (0..n).map(|i| (PolyN::var(&kf, vars, i), one.clone())).collect();
    let mut values = Vec::with_capacity(n);
    for (i, fr) in forward.iter().enumerate() {
        let val = value_of(v, fr)?;
        if !val.is_positive() {
            return Err(Error::NotCentered(vars[i].clone(), val.to_string()));
        }
        values.push(val);
    }
    let subst = (0..n).map(|i| PolyN::var(&kf, vars, i)).collect();
    let mut state = HNState {
        field: kf,
        orig: vars.clone(),
        stages: vec![Stage { names: vars.clone(), values, subst, forward }],
        steps: Vec::new(),
        termination: Termination::Ongoing,
    };
    classify(v, &mut state);
    Ok(state)
}

/// One quadratic transform along `v`.
pub fn hn_step(state: &HNState, v: &Valuation) -> Result<HNState> {
    if let Termination::Divisorial(k) = state.termination {
        return Err(Error::Terminated(k));
    }
    let cur = state.current();
    let n = state.nvars();
    let field = &state.field;
    let pivot = (0..n).min_by(|&a, &b| cur.values[a].cmp(&cur.values[b]).then(a.cmp(&b))).unwrap();
    let (pn, pd) = &cur.forward[pivot];
    let mut residues = Vec::with_capacity(n);
    let mut forward = Vec::with_capacity(n);
    for i in 0..n {
        if i == pivot {
            residues.push(field.zero());
            forward.push(cur.forward[i].clone());
            continue;
        }
        let (qn, qd) = &cur.forward[i];
        let num = qn * pd;
        let den = qd * pn;
        let a = if cur.values[i] == cur.values[pivot] {
            v.residue(&num, &den).map_err(|e| match e {
                Error::NotAUnit(msg) => Error::NotAUnit(format!(
                    "{msg}; the transform along this valuation leaves dimension {n}"
                )),
                e => e,
            })?
        } else {
            field.zero()
        };
        let num = &num - &den.scale(&a);
        residues.push(a);
        forward.push(reduce(num, den));
    }
    let idx = state.steps.len() + 1;
    let names = stage_names(&state.orig, idx);
    // y'_i = y_pivot (y_i + a_i), y'_pivot = y_pivot
    let yp = PolyN::var(field, &names, pivot);
    let back: Vec<PolyN> = (0..n)
        .map(|i| {
            if i == pivot {
                yp.clone()
            } else {
                &yp * &(&PolyN::var(field, &names, i) + &PolyN::constant(&residues[i], &names))
            }
        })
        .collect();
    let subst = cur.subst.iter().map(|a| a.compose(&back)).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(n);
    for (i, fr) in forward.iter().enumerate() {
        let val = value_of(v, fr)?;
        if !val.is_positive() {
            return Err(Error::NotCentered(names[i].clone(), val.to_string()));
        }
        values.push(val);
    }
    let mut next = state.clone();
    next.steps.push(HNStep { pivot, residues, names: names.iter().cloned().collect() });
    next.stages.push(Stage { names, values, subst, forward });
    next.termination = Termination::Ongoing;
    classify(v, &mut next);
    Ok(next)
}

fn reduce(num: PolyN, den: PolyN) -> (PolyN, PolyN) {
    let g = num.gcd(&den);
    let (mut num, mut den) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
    if let Some(c) = den.repr_terms().last_key_value().map(|(e, _)| den.coeff(e)) {
        let inv = c.inverse().unwrap();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    (num, den)
}

/// Iterates [`hn_step`] until the process is divisorial or `max_steps`
/// transforms were made.
pub fn hn_trace(v: &Valuation, field: &CoeffField, vars: &Vars, max_steps: usize) -> Result<HNState> {
    let mut state = hn_start(v, field, vars)?;
    while state.steps.len() < max_steps {
        if let Termination::Divisorial(_) = state.termination {
            return Ok(state);
        }
        state = hn_step(&state, v)?;
    }
    if state.termination == Termination::Ongoing {
        state.termination = Termination::Truncated(max_steps);
    }
    Ok(state)
}

/// ord_{R_i} f at the current stage.
pub fn order_at_stage(state: &HNState, f: &PolyN) -> Result<u64> {
    state.order_at(state.stage_index(), f)
}

fn check_hypothesis(v: &Valuation, fs: &[PolyN], h: &PolyN) -> Result<()> {
    if fs.is_empty() || h.is_zero() || fs.iter().any(|f| f.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let vh = v.eval(h)?;
    for f in fs {
        let vf = v.eval(f)?;
        if vf <= vh {
            return Err(Error::HypothesisViolated(format!("nu({f}) = {vf} is not above nu({h}) = {vh}")));
        }
    }
    Ok(())
}

fn search(
    v: &Valuation,
    fs: &[PolyN],
    h: &PolyN,
    max_steps: usize,
    accept: impl Fn(&HNState, usize) -> Result<bool>,
) -> Result<(usize, HNState)> {
    if v.nvars() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: v.nvars() });
    }
    check_hypothesis(v, fs, h)?;
    let mut state = hn_start(v, h.field(), h.vars())?;
    let mut gaps = Vec::new();
    loop {
        let i = state.stage_index();
        let oh = state.order_at(i, h)? as i64;
        let of = fs.iter().map(|f| state.order_at(i, f)).collect::<Result<Vec<_>>>()?;
        let gap = *of.iter().min().unwrap() as i64 - oh;
        gaps.push(gap);
        if gap > 0 && accept(&state, i)? {
            return Ok((i, state));
        }
        if i >= max_steps || matches!(state.termination, Termination::Divisorial(_)) {
            return Err(Error::SeparationNotReached { max_steps, gaps });
        }
        state = hn_step(&state, v)?;
    }
}

/// The least stage i ≤ `max_steps` with min_f ord_{R_i} f > ord_{R_i} h.
pub fn separate(v: &Valuation, fs: &[PolyN], h: &PolyN, max_steps: usize) -> Result<(usize, HNState)> {
    search(v, fs, h, max_steps, |_, _| Ok(true))
}

/// The least separating stage at which the transformed ideal (F)R_i is
/// also principal.
pub fn separate_principal(v: &Valuation, fs: &[PolyN], h: &PolyN, max_steps: usize) -> Result<(usize, HNState)> {
    search(v, fs, h, max_steps, |state, i| {
        let images = fs.iter().map(|f| state.image_at(i, f)).collect::<Result<Vec<_>>>()?;
        let g = images.iter().skip(1).fold(images[0].clone(), |g, p| g.gcd(p));
        Ok(images.iter().any(|p| !p.div_exact(&g).unwrap().constant_term().is_zero()))
    })
}

/// Pairs (a, b) tried by [`refuting_param`]: positive integers by
/// increasing a + b in characteristic zero, a lexicographic scan of K²
/// without (0, 0) over finite fields.
fn candidate_points(field: &CoeffField) -> Box<dyn Iterator<Item = (FieldElement, FieldElement)> + '_> {
    const SCAN_LIMIT: u64 = 1 << 16;
    match field.size() {
        None => Box::new((2i64..=256).flat_map(move |s| {
            (1..s).map(move |a| (field.from_i64(a), field.from_i64(s - a)))
        })),
        Some(q) => {
            let q: u64 = q.min(BigUint::from(SCAN_LIMIT)).try_into().unwrap();
            let elem = move |i: u64| field.element_at(&BigUint::from(i)).unwrap();
            Box::new((0..q).flat_map(move |i| (0..q).map(move |j| (i, j))).skip(1).map(move |(i, j)| (elem(i), elem(j))))
        }
    }
}

/// φ = (A(at, bt), B(at, bt)) at a separating stage, with (a, b) off the
/// initial forms of h and of every f.
pub fn refuting_param(state: &HNState, fs: &[PolyN], h: &PolyN) -> Result<Param> {
    if state.nvars() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: state.nvars() });
    }
    let i = state.stage_index();
    let oh = state.order_at(i, h)?;
    let mut forms = vec![state.image_at(i, h)?.initial_form()?];
    for f in fs {
        if state.order_at(i, f)? <= oh {
            return Err(Error::HypothesisViolated(format!("stage {i} does not separate {f} from {h}")));
        }
        forms.push(state.image_at(i, f)?.initial_form()?);
    }
    let field = state.field.clone();
    for (a, b) in candidate_points(&field) {
        let pt = [a.clone(), b.clone()];
        if forms.iter().any(|p| p.eval(&pt).map(|x| x.is_zero()).unwrap_or(true)) {
            continue;
        }
        let comps = state.current().subst.iter().map(|poly| line_pullback(poly, &a, &b)).collect();
        return Param::new(comps);
    }
    Err(Error::PointSearchExhausted)
}

/// P(at, bt) as an exact series.
fn line_pullback(p: &PolyN, a: &FieldElement, b: &FieldElement) -> Series1 {
    let field = p.field();
    let mut terms: std::collections::BTreeMap<u32, FieldElement> = Default::default();
    for (e, c) in p.terms() {
        let k = e[0] + e[1];
        let term = &(&c * &a.pow(e[0] as u64)) * &b.pow(e[1] as u64);
        let slot = terms.entry(k).or_insert_with(|| field.zero());
        *slot = &*slot + &term;
    }
    Series1::from_terms(field, terms, crate::series::Precision::Exact).expect("coefficients in the field")
}

// ---- rendering ---------------------------------------------------------

/// `p` with its monomial content pulled out, e.g. `x3^3*(y3 - 1)`, and
/// whether the string is a single product.
pub fn factored(p: &PolyN) -> (String, bool) {
    let terms = p.repr_terms();
    if terms.len() <= 1 {
        let s = p.to_string();
        let single = !s.contains(" + ") && !s.contains(" - ");
        return (s, single);
    }
    let n = p.nvars();
    let content: Vec<u32> = (0..n).map(|i| terms.keys().map(|e| e[i]).min().unwrap()).collect();
    if content.iter().all(|&k| k == 0) {
        return (p.to_string(), false);
    }
    let rest = p.div_exact(&PolyN::monomial(p.field(), p.vars(), content.clone())).unwrap();
    (format!("{}*({})", monomial_string(p.vars(), &content), rest), true)
}

fn fraction(num: &PolyN, den: &PolyN) -> String {
    let (ns, nsingle) = factored(num);
    if den.is_constant() && den.constant_term().is_one() {
        return ns;
    }
    let (ds, _) = factored(den);
    let ns = if nsingle { ns } else { format!("({ns})") };
    let ds = if den.num_terms() == 1 && !ds.contains('*') { ds } else { format!("({ds})") };
    format!("{ns}/{ds}")
}

/// One row of the trace table, for step `i` ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub step: usize,
    pub pivot: String,
    pub recursive: Vec<String>,
    pub values: Vec<String>,
    pub forward: Vec<String>,
    pub back: Vec<String>,
}

impl HNState {
    pub fn rows(&self) -> Vec<TraceRow> {
        (1..=self.steps.len()).map(|i| self.row(i)).collect()
    }

    pub fn row(&self, i: usize) -> TraceRow {
        let step = &self.steps[i - 1];
        let prev = &self.stages[i - 1].names;
        let stage = &self.stages[i];
        let n = self.nvars();
        let recursive = (0..n)
            .map(|k| {
                if k == step.pivot {
                    return format!("{} := {}", stage.names[k], prev[k]);
                }
                let mut s = format!("{} := {}/{}", stage.names[k], prev[k], prev[step.pivot]);
                let a = &step.residues[k];
                if !a.is_zero() {
                    let minus_a = -a;
                    let t = minus_a.to_string();
                    let wrapped = |t: &str| if t.contains(' ') { format!("({t})") } else { t.to_string() };
                    match t.strip_prefix('-') {
                        Some(rest) if !rest.contains(' ') => s += &format!(" - {rest}"),
                        _ => s += &format!(" + {}", wrapped(&t)),
                    }
                }
                s
            })
            .collect();
        let values = (0..n).map(|k| format!("nu({}) = {}", stage.names[k], stage.values[k])).collect();
        let forward =
            (0..n).map(|k| format!("{} = {}", stage.names[k], fraction(&stage.forward[k].0, &stage.forward[k].1))).collect();
        let back = (0..n).map(|k| format!("{} = {}", self.orig[k], factored(&stage.subst[k]).0)).collect();
        TraceRow { step: i, pivot: prev[step.pivot].clone(), recursive, values, forward, back }
    }
}

impl fmt::Display for HNState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s0 = &self.stages[0];
        let vals: Vec<String> = (0..self.nvars()).map(|k| format!("nu({}) = {}", s0.names[k], s0.values[k])).collect();
        writeln!(f, "step 0 | {}", vals.join(", "))?;
        for r in self.rows() {
            writeln!(
                f,
                "step {} | {} | {} | {} | {}",
                r.step,
                r.recursive.join(", "),
                r.values.join(", "),
                r.forward.join(", "),
                r.back.join(", ")
            )?;
        }
        match self.termination {
            Termination::Ongoing => writeln!(f, "ongoing"),
            Termination::Divisorial(k) => writeln!(f, "divisorial after {k} steps"),
            Termination::Truncated(k) => writeln!(f, "truncated after {k} steps"),
        }
    }
}
