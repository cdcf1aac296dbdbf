//! Front end for lojex-core: argument model, dispatch and output rendering.

pub mod expr;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use lojex_core::{
    check_main_theorem, expand_branches, farey_form, hn_trace, is_farey, is_integral, lojasiewicz_exponent_with, ord_pullback,
    substitute, Budget, CoeffField, Error, ErrorKind, Evidence, ExponentValue, Ideal, IntegralityVerdict, OrderValue, Param,
    Result, Termination, Vars,
};

use expr::{parse_expr, parse_field, parse_list, parse_param, parse_valuation, parse_vars};

pub const SCHEMA: &str = "lojex/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFINITE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_UNDETERMINED: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug, Clone)]
#[command(name = "lojex", version, about = "Exact local algebra in k[[x,y]]: exponents, integral dependence, Hamburger-Noether traces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coefficient field: q, fp:<prime> or ext:<base>:<minpoly>.
    #[arg(long, default_value = "q")]
    pub field: String,
    /// Comma-separated variable names.
    #[arg(long, default_value = "x,y")]
    pub vars: String,
    /// Write a JSON document to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Branch precision in parameter terms.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub precision: u32,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Łojasiewicz exponent of an ideal of k[[x,y]].
    Exponent {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gens: String,
    },
    /// Decide whether h is integral over the ideal.
    Integral {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        h: String,
        #[arg(long)]
        gens: String,
        /// Extra parametrization to test, e.g. "(t^2, t^3)". Repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=16))]
        max_degree: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(0..=64))]
        coeff_degree: u32,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=4096))]
        steps: u64,
    },
    /// Hamburger-Noether trace of a valuation.
    HnTrace {
        #[command(flatten)]
        common: Common,
        /// ord, mono:[row;row;…] or curve:<poly>:<param>.
        #[arg(long)]
        valuation: String,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(0..=4096))]
        steps: u64,
    },
    /// Branches of a plane curve through the origin.
    Branches {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        curve: String,
    },
    /// Substitute a parametrization into a polynomial.
    Substitute {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        h: String,
        #[arg(long)]
        param: String,
    },
    /// Compare p/q ≥ L with (x,y)^p ⊂ closure(a^q) over a grid of (p, q).
    CheckMain {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..=64))]
        p_max: u64,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..=64))]
        q_max: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Exponent { .. } => "exponent",
            Command::Integral { .. } => "integral",
            Command::HnTrace { .. } => "hn-trace",
            Command::Branches { .. } => "branches",
            Command::Substitute { .. } => "substitute",
            Command::CheckMain { .. } => "check-main",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Exponent { common, .. }
            | Command::Integral { common, .. }
            | Command::HnTrace { common, .. }
            | Command::Branches { common, .. }
            | Command::Substitute { common, .. }
            | Command::CheckMain { common, .. } => common,
        }
    }
}

/// What a command produced: exit code, text for standard output (or the
/// error message), and the JSON document.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Undetermined => EXIT_UNDETERMINED,
        ErrorKind::Internal => EXIT_INTERNAL,
    }
}

fn kind_name(e: &Error) -> &'static str {
    match e.kind() {
        ErrorKind::Input => "input",
        ErrorKind::Undetermined => "undetermined",
        ErrorKind::Internal => "internal",
    }
}

fn order_json(o: OrderValue) -> Value {
    match o {
        OrderValue::Finite(k) => json!(k),
        other => json!(other.to_string()),
    }
}

struct Ctx {
    field: CoeffField,
    vars: Vars,
}

fn context(c: &Common) -> Result<Ctx> {
    Ok(Ctx { field: parse_field(&c.field)?, vars: parse_vars(&c.vars)? })
}

fn ideal(ctx: &Ctx, gens: &str) -> Result<Ideal> {
    let gens = parse_list(gens, &ctx.field, &ctx.vars)?;
    if gens.is_empty() {
        return Err(Error::InvalidInput("empty generator list".into()));
    }
    Ideal::new(gens)
}

/// Runs one command. Never panics on bad input; all failures become exit
/// codes 3, 4 or 5 with a message.
pub fn run(cmd: &Command) -> Outcome {
    let common = cmd.common();
    let mut doc = json!({
        "schema": SCHEMA,
        "command": cmd.name(),
        "field": common.field,
        "vars": common.vars.split(',').map(str::trim).collect::<Vec<_>>(),
    });
    let result = context(common).and_then(|ctx| dispatch(cmd, &ctx));
    let (code, text) = match result {
        Ok((code, text, value)) => {
            doc["result"] = value;
            (code, text)
        }
        Err(e) => {
            let code = exit_code(&e);
            doc["error"] = json!({ "kind": kind_name(&e), "message": e.to_string() });
            (code, format!("error: {e}"))
        }
    };
    doc["exit_code"] = json!(code);
    Outcome { code, text, json: doc }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<(i32, String, Value)> {
    match cmd {
        Command::Exponent { common, gens } => exponent(ctx, gens, common.precision),
        Command::Integral { common, h, gens, params, max_degree, coeff_degree, steps } => {
            let extra = params.iter().map(|p| parse_param(p, &ctx.field)).collect::<Result<Vec<_>>>()?;
            let budget = Budget {
                max_degree: *max_degree as usize,
                coeff_degree: *coeff_degree,
                max_steps: *steps as usize,
                precision: common.precision,
                extra,
            };
            integral(ctx, h, gens, &budget)
        }
        Command::HnTrace { valuation, steps, .. } => trace(ctx, valuation, *steps as usize),
        Command::Branches { common, curve } => branches(ctx, curve, common.precision),
        Command::Substitute { h, param, .. } => subst(ctx, h, param),
        Command::CheckMain { gens, p_max, q_max, .. } => check_main(ctx, gens, *p_max, *q_max),
    }
}

fn exponent(ctx: &Ctx, gens: &str, precision: u32) -> Result<(i32, String, Value)> {
    let a = ideal(ctx, gens)?;
    let r = lojasiewicz_exponent_with(&a, precision)?;
    let mut text = format!("L = {}\n", r.value);
    if let Some(w) = &r.witness {
        text += &format!("witness: {w}\n");
    }
    if r.unit_convention {
        text += "note: unit ideal, 0 by convention\n";
    }
    let farey = r.value.finite().filter(|v| v.is_positive()).map(|v| {
        let (n, b, d) = farey_form(v);
        let strict = is_farey(v);
        if !b.is_zero() {
            text += &format!("farey: {v} = {n} + {b}/{d}{}\n", if strict { format!(" with 0 < {b} < {d} < {n}") } else { String::new() });
        }
        json!({ "integer": n.to_string(), "numerator": b.to_string(), "denominator": d.to_string(), "strict": strict })
    });
    if !r.table.is_empty() {
        text += "branch | ord phi*a | ord phi | ratio\n";
    }
    let rows: Vec<Value> = r
        .table
        .iter()
        .map(|row| {
            text += &format!("{} | {} | {} | {}\n", row.branch, row.ideal_order, row.param_order, row.ratio);
            json!({
                "param": row.branch.to_string(),
                "multiplicity": row.multiplicity,
                "ideal_order": row.ideal_order,
                "param_order": row.param_order,
                "ratio": row.ratio.to_string(),
            })
        })
        .collect();
    for w in &r.warnings {
        text += &format!("warning: {w}\n");
    }
    let code = if r.value == ExponentValue::Infinity { EXIT_INFINITE } else { EXIT_OK };
    let value = json!({
        "value": r.value.to_string(),
        "infinite": r.value == ExponentValue::Infinity,
        "witness": r.witness.as_ref().map(Param::to_string),
        "unit_convention": r.unit_convention,
        "farey": farey,
        "branches": rows,
        "warnings": r.warnings,
    });
    Ok((code, text, value))
}

fn integral(ctx: &Ctx, h: &str, gens: &str, budget: &Budget) -> Result<(i32, String, Value)> {
    let h = parse_expr(h, &ctx.field, &ctx.vars)?;
    let a = ideal(ctx, gens)?;
    let verdict = is_integral(&h, &a, budget);
    let mut text = format!("{}\n", verdict.label());
    let mut value = json!({ "verdict": verdict.label() });
    let mut code = EXIT_OK;
    match &verdict {
        IntegralityVerdict::Integral(ev) => {
            let evidence = match ev {
                Evidence::MonomialOracle => {
                    text += "evidence: monomial closure\n";
                    json!({ "kind": "monomial_oracle" })
                }
                Evidence::UnitIdeal => {
                    text += "evidence: the ideal contains a unit\n";
                    json!({ "kind": "unit_ideal" })
                }
                Evidence::ExplicitEquation(eq) => {
                    let terms = eq.describe();
                    let lhs: Vec<String> = (0..=eq.degree)
                        .map(|j| match (j, eq.degree - j) {
                            (0, k) => format!("h^{k}"),
                            (j, 0) => format!("a{j}"),
                            (j, 1) => format!("a{j}*h"),
                            (j, k) => format!("a{j}*h^{k}"),
                        })
                        .collect();
                    text += &format!("evidence: {} = 0 with\n", lhs.join(" + "));
                    for t in &terms {
                        text += &format!("  {t}\n");
                    }
                    json!({ "kind": "explicit_equation", "degree": eq.degree, "coefficients": terms })
                }
            };
            value["evidence"] = evidence;
        }
        IntegralityVerdict::NotIntegral { witness, orders } => {
            text += &format!("witness: {witness}\norders: ord phi*h = {} < ord phi*a = {}\n", orders.0, orders.1);
            value["witness"] = json!(witness.to_string());
            value["orders"] = json!({ "h": order_json(orders.0), "ideal": order_json(orders.1) });
        }
        IntegralityVerdict::PassedBranchTests(ps) => {
            text += "every tested parametrization satisfies ord phi*h >= ord phi*a\n";
            for p in ps {
                text += &format!("  {p}\n");
            }
            value["tested"] = json!(ps.iter().map(Param::to_string).collect::<Vec<_>>());
        }
        IntegralityVerdict::Unknown(reason) => {
            text += &format!("reason: {reason}\n");
            value["reason"] = json!(reason);
            code = EXIT_UNDETERMINED;
        }
    }
    Ok((code, text, value))
}

fn trace(ctx: &Ctx, spec: &str, steps: usize) -> Result<(i32, String, Value)> {
    let v = parse_valuation(spec, &ctx.field, &ctx.vars)?;
    let st = hn_trace(&v, &ctx.field, &ctx.vars, steps)?;
    let s0 = &st.stages()[0];
    let initial: Vec<String> = (0..st.nvars()).map(|k| format!("nu({}) = {}", s0.names[k], s0.values[k])).collect();
    let rows: Vec<Value> = st
        .rows()
        .into_iter()
        .map(|r| {
            json!({
                "step": r.step,
                "pivot": r.pivot,
                "recursive": r.recursive,
                "values": r.values,
                "forward": r.forward,
                "back": r.back,
            })
        })
        .collect();
    let termination = match st.termination() {
        Termination::Ongoing => json!({ "kind": "ongoing" }),
        Termination::Divisorial(k) => json!({ "kind": "divisorial", "steps": k }),
        Termination::Truncated(k) => json!({ "kind": "truncated", "steps": k }),
    };
    let value = json!({
        "valuation": spec,
        "rank": v.rank(),
        "initial": initial,
        "rows": rows,
        "termination": termination,
    });
    Ok((EXIT_OK, st.to_string(), value))
}

fn branches(ctx: &Ctx, curve: &str, precision: u32) -> Result<(i32, String, Value)> {
    check_plane(ctx)?;
    let f = parse_expr(curve, &ctx.field, &ctx.vars)?;
    let set = expand_branches(&f, precision)?;
    let mut text = String::new();
    if set.branches.is_empty() {
        text += "no branches through the origin\n";
    }
    let rows: Vec<Value> = set
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            text += &format!(
                "branch {}: {}  over {}  multiplicity {}  on {}\n",
                i + 1,
                b.param,
                b.field,
                b.multiplicity,
                b.curve
            );
            json!({
                "param": b.param.to_string(),
                "field": b.field.spec_string(),
                "curve": b.curve.to_string(),
                "multiplicity": b.multiplicity,
                "order": b.param.ord(),
            })
        })
        .collect();
    for w in &set.warnings {
        text += &format!("warning: {w}\n");
    }
    let value = json!({
        "curve": f.to_string(),
        "branches": rows,
        "weighted_order": set.weighted_order(),
        "warnings": set.warnings,
    });
    Ok((EXIT_OK, text, value))
}

fn check_plane(ctx: &Ctx) -> Result<()> {
    if ctx.vars.len() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, found: ctx.vars.len() });
    }
    Ok(())
}

fn subst(ctx: &Ctx, h: &str, param: &str) -> Result<(i32, String, Value)> {
    let h = parse_expr(h, &ctx.field, &ctx.vars)?;
    let phi = parse_param(param, &ctx.field)?;
    if phi.arity() != ctx.vars.len() {
        return Err(Error::ArityMismatch { expected: ctx.vars.len(), found: phi.arity() });
    }
    let s = substitute(&h, phi.components())?;
    let ord = ord_pullback(&h, &phi)?;
    let text = format!("{s}\norder: {ord}\n");
    Ok((EXIT_OK, text, json!({ "series": s.to_string(), "order": order_json(ord) })))
}

fn check_main(ctx: &Ctx, gens: &str, p_max: u64, q_max: u64) -> Result<(i32, String, Value)> {
    let a = ideal(ctx, gens)?;
    let rep = check_main_theorem(&a, p_max, q_max)?;
    let mut text = format!("L = {}\nchecked p <= {p_max}, q <= {q_max}\n", rep.exponent);
    let mut least = Vec::new();
    for q in 1..=q_max {
        let p = (1..=p_max).find(|&p| rep.holds(p, q) == Some(true));
        text += &match p {
            Some(p) => format!("q = {q}: least p = {p}\n"),
            None => format!("q = {q}: no p <= {p_max}\n"),
        };
        least.push(json!({ "q": q, "least_p": p }));
    }
    text += &format!("discrepancies: {}\n", rep.discrepancies.len());
    let disc: Vec<Value> = rep
        .discrepancies
        .iter()
        .map(|d| {
            text += &format!("  p = {}, q = {}: p/q >= L is {}, closure side is {}\n", d.p, d.q, d.lhs, d.branch_side);
            json!({ "p": d.p, "q": d.q, "lhs": d.lhs, "branch_side": d.branch_side, "oracle_side": d.oracle_side })
        })
        .collect();
    let code = if rep.discrepancies.is_empty() { EXIT_OK } else { EXIT_INTERNAL };
    let value = json!({
        "exponent": rep.exponent.to_string(),
        "p_max": p_max,
        "q_max": q_max,
        "least_p": least,
        "grid": rep.grid,
        "discrepancies": disc,
    });
    Ok((code, text, value))
}

/// Expands `--job <file>` into ordinary arguments. Each non-comment line is
/// either a subcommand name or `--flag value`.
pub fn expand_job_args(args: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let Some(i) = args.iter().position(|a| a == "--job" || a.starts_with("--job=")) else {
        return Ok(args);
    };
    let (path, consumed) = match args[i].strip_prefix("--job=") {
        Some(p) => (p.to_string(), 1),
        None => (args.get(i + 1).cloned().ok_or("--job needs a path")?, 2),
    };
    let body = std::fs::read_to_string(&path).map_err(|e| format!("cannot read job file {path}: {e}"))?;
    let mut rest: Vec<String> = args[..i].to_vec();
    rest.extend(args[i + consumed..].iter().cloned());
    let (mut sub, mut flags) = (None, Vec::new());
    for (n, line) in body.lines().enumerate() {
        let line = line.split_once('#').map_or(line, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("--") {
            match line.split_once(char::is_whitespace) {
                Some((flag, value)) => {
                    flags.push(flag.to_string());
                    flags.push(unquote(value.trim()).to_string());
                }
                None => flags.push(line.to_string()),
            }
        } else if sub.is_none() && !line.contains(char::is_whitespace) {
            sub = Some(line.to_string());
        } else {
            return Err(format!("{path}:{}: expected a subcommand or `--flag value`", n + 1));
        }
    }
    let has_sub = rest.len() > 1 && !rest[1].starts_with('-');
    let mut out = vec![rest.first().cloned().unwrap_or_else(|| "lojex".into())];
    if !has_sub {
        out.extend(sub);
    }
    out.extend(rest.into_iter().skip(1));
    out.extend(flags);
    Ok(out)
}

fn unquote(s: &str) -> &str {
    for q in ['"', '\''] {
        if let Some(inner) = s.strip_prefix(q).and_then(|r| r.strip_suffix(q)) {
            return inner;
        }
    }
    s
}
