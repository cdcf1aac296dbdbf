//! Infix expressions over a coefficient field, plus the small spec languages
//! for fields, valuations and parametrizations.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          right associative
//! atom  := int ('/' int)? | name | '(' expr ')'
//! ```
//!
//! Exponents must evaluate to natural-number constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use lojex_core::{CoeffField, Error, FieldElement, Param, PolyN, Precision, Result, Series1, Valuation, Vars};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAST {
    Var(usize),
    /// A named generator of the coefficient field.
    Gen(String),
    Int(BigInt),
    Frac(BigInt, BigInt),
    Sum(Box<ExprAST>, Box<ExprAST>),
    Diff(Box<ExprAST>, Box<ExprAST>),
    Product(Box<ExprAST>, Box<ExprAST>),
    Power(Box<ExprAST>, u32),
    Neg(Box<ExprAST>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

struct Lexer;

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = position(text, offset);
    Error::Syntax { line, column, message: message.into() }
}

impl Lexer {
    fn run(text: &str) -> Result<Vec<(Tok, usize)>> {
        let mut toks = Vec::new();
        let bytes: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < bytes.len() {
            let (off, c) = bytes[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let mut j = i;
                while j < bytes.len() && bytes[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = bytes.get(j).map_or(text.len(), |b| b.0);
                toks.push((Tok::Int(text[off..end].parse().unwrap()), off));
                i = j;
            } else if c.is_alphabetic() || c == '_' {
                let mut j = i;
                while j < bytes.len() && (bytes[j].1.is_alphanumeric() || bytes[j].1 == '_') {
                    j += 1;
                }
                let end = bytes.get(j).map_or(text.len(), |b| b.0);
                toks.push((Tok::Name(text[off..end].to_string()), off));
                i = j;
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), off));
                i += 1;
            } else {
                return Err(syntax(text, off, format!("unexpected character `{c}`")));
            }
        }
        toks.push((Tok::End, text.len()));
        Ok(toks)
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    gens: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprAST> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ExprAST::Sum(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ExprAST::Diff(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ExprAST> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = ExprAST::Product(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprAST> {
        if self.eat('-') {
            return Ok(ExprAST::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAST> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let e = self.unary()?;
        let (line, column) = position(self.text, at);
        let n = constant_value(&e)
            .filter(|q| q.is_integer() && !q.is_negative())
            .ok_or(Error::NonNaturalExponent { line, column })?;
        match n.to_integer().to_u64() {
            Some(k) if k <= MAX_EXPONENT => Ok(ExprAST::Power(Box::new(base), k as u32)),
            _ => Err(syntax(self.text, at, format!("exponent exceeds {MAX_EXPONENT}"))),
        }
    }

    fn atom(&mut self) -> Result<ExprAST> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                if !self.eat('/') {
                    return Ok(ExprAST::Int(n));
                }
                let dat = self.offset();
                match self.bump() {
                    Tok::Int(d) if !d.is_zero() => Ok(ExprAST::Frac(n, d)),
                    Tok::Int(_) => Err(syntax(self.text, dat, "zero denominator")),
                    _ => Err(syntax(self.text, dat, "`/` is only allowed between integer literals")),
                }
            }
            Tok::Name(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(ExprAST::Var(i))
                } else if self.gens.contains(&name) {
                    Ok(ExprAST::Gen(name))
                } else {
                    let (line, column) = position(self.text, at);
                    Err(Error::UnknownVariable { name, line, column })
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.text, self.offset(), "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(syntax(self.text, at, "unexpected end of input")),
            Tok::Sym(c) => Err(syntax(self.text, at, format!("unexpected `{c}`"))),
        }
    }
}

/// Value of a variable-free, generator-free expression.
fn constant_value(e: &ExprAST) -> Option<BigRational> {
    Some(match e {
        ExprAST::Int(n) => BigRational::from_integer(n.clone()),
        ExprAST::Frac(n, d) => BigRational::new(n.clone(), d.clone()),
        ExprAST::Sum(a, b) => constant_value(a)? + constant_value(b)?,
        ExprAST::Diff(a, b) => constant_value(a)? - constant_value(b)?,
        ExprAST::Product(a, b) => constant_value(a)? * constant_value(b)?,
        ExprAST::Neg(a) => -constant_value(a)?,
        ExprAST::Power(a, k) => {
            let b = constant_value(a)?;
            (0..*k).fold(BigRational::from_integer(1.into()), |acc, _| acc * &b)
        }
        ExprAST::Var(_) | ExprAST::Gen(_) => return None,
    })
}

pub fn parse_ast(text: &str, field: &CoeffField, vars: &Vars) -> Result<ExprAST> {
    let toks = Lexer::run(text)?;
    let gens = field.generator_names().into_iter().map(|(n, _)| n).collect();
    let mut p = Parser { text, toks, pos: 0, vars, gens };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(text, p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

pub fn eval_ast(e: &ExprAST, field: &CoeffField, vars: &Vars) -> Result<PolyN> {
    Ok(match e {
        ExprAST::Var(i) => PolyN::var(field, vars, *i),
        ExprAST::Gen(name) => {
            let g = field.generator_names().into_iter().find(|(n, _)| n == name).map(|(_, g)| g);
            let g = g.ok_or_else(|| Error::InvalidInput(format!("no generator `{name}`")))?;
            PolyN::constant(&field.embed(&g)?, vars)
        }
        ExprAST::Int(n) => PolyN::constant(&field.from_bigint(n), vars),
        ExprAST::Frac(n, d) => PolyN::constant(&field.from_rational(&BigRational::new(n.clone(), d.clone()))?, vars),
        ExprAST::Sum(a, b) => &eval_ast(a, field, vars)? + &eval_ast(b, field, vars)?,
        ExprAST::Diff(a, b) => &eval_ast(a, field, vars)? - &eval_ast(b, field, vars)?,
        ExprAST::Product(a, b) => &eval_ast(a, field, vars)? * &eval_ast(b, field, vars)?,
        ExprAST::Power(a, k) => eval_ast(a, field, vars)?.pow(*k),
        ExprAST::Neg(a) => -&eval_ast(a, field, vars)?,
    })
}

/// Parses `text` into an exact polynomial in `vars` over `field`.
pub fn parse_expr(text: &str, field: &CoeffField, vars: &Vars) -> Result<PolyN> {
    eval_ast(&parse_ast(text, field, vars)?, field, vars)
}

/// Splits on commas outside parentheses and brackets.
pub fn split_top(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Comma-separated list of expressions.
pub fn parse_list(text: &str, field: &CoeffField, vars: &Vars) -> Result<Vec<PolyN>> {
    split_top(text).into_iter().filter(|s| !s.trim().is_empty()).map(|s| parse_expr(s, field, vars)).collect()
}

pub fn parse_vars(text: &str) -> Result<Vars> {
    let names: Vec<&str> = text.split(',').map(str::trim).collect();
    for n in &names {
        let ok = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && n.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::InvalidInput(format!("bad variable name `{n}`")));
        }
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::InvalidInput(format!("variable `{n}` listed twice")));
        }
    }
    Ok(lojex_core::vars(&names))
}

/// Default prime for a bare `fp`.
pub const DEFAULT_PRIME: u64 = 101;

/// `q`, `fp:<prime>`, `ext:<base>:<minpoly>`.
pub fn parse_field(spec: &str) -> Result<CoeffField> {
    let spec = spec.trim();
    if spec == "q" {
        return Ok(CoeffField::rationals());
    }
    if spec == "fp" {
        return CoeffField::prime(DEFAULT_PRIME);
    }
    if let Some(p) = spec.strip_prefix("fp:") {
        let p: u64 = p.trim().parse().map_err(|_| Error::InvalidInput(format!("bad prime `{p}`")))?;
        return CoeffField::prime(p);
    }
    if let Some(rest) = spec.strip_prefix("ext:") {
        let (base, minpoly) =
            rest.rsplit_once(':').ok_or_else(|| Error::InvalidInput(format!("expected ext:<base>:<minpoly>, got `{spec}`")))?;
        let base = parse_field(base)?;
        let known: Vec<String> = base.generator_names().into_iter().map(|(n, _)| n).collect();
        let mut fresh: Vec<String> = Vec::new();
        for (t, _) in Lexer::run(minpoly)? {
            if let Tok::Name(n) = t {
                if !known.contains(&n) && !fresh.contains(&n) {
                    fresh.push(n);
                }
            }
        }
        if fresh.len() != 1 {
            return Err(Error::InvalidInput(format!(
                "minimal polynomial `{minpoly}` must involve exactly one new generator name"
            )));
        }
        let name = fresh.pop().unwrap();
        let v = lojex_core::vars(&[name.as_str()]);
        let m = parse_expr(minpoly, &base, &v)?;
        let m = m.to_unipoly(0).ok_or_else(|| Error::InvalidInput("minimal polynomial is not univariate".into()))?;
        return base.adjoin_root(&m, &name);
    }
    Err(Error::InvalidInput(format!("unknown field spec `{spec}` (expected q, fp:<p> or ext:<base>:<minpoly>)")))
}

/// `(s1, …, sn)` where each component is a polynomial in `t`.
pub fn parse_param(text: &str, field: &CoeffField) -> Result<Param> {
    let s = text.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidInput(format!("parametrization must look like (s1, s2), got `{s}`")))?;
    let t = lojex_core::vars(&["t"]);
    let comps = split_top(inner)
        .into_iter()
        .map(|c| {
            let p = parse_expr(c, field, &t)?;
            let terms = p.terms().into_iter().map(|(e, c)| (e[0], c));
            Series1::from_terms(field, terms, Precision::Exact)
        })
        .collect::<Result<Vec<_>>>()?;
    Param::new(comps)
}

/// `ord`, `mono:[row;row;…]`, `curve:<poly>:<param>`.
pub fn parse_valuation(spec: &str, field: &CoeffField, vars: &Vars) -> Result<Valuation> {
    let spec = spec.trim();
    if spec == "ord" {
        return Ok(Valuation::order(vars.len()));
    }
    if let Some(rows) = spec.strip_prefix("mono:") {
        let rows = rows
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidInput(format!("expected mono:[row;…], got `{spec}`")))?;
        let weights = rows
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|w| w.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad weight `{}`", w.trim()))))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if weights.iter().any(|r| r.len() != vars.len()) {
            return Err(Error::ArityMismatch {
                expected: vars.len(),
                found: weights.iter().map(Vec::len).find(|&l| l != vars.len()).unwrap(),
            });
        }
        return Valuation::monomial(weights);
    }
    if let Some(rest) = spec.strip_prefix("curve:") {
        let (curve, param) =
            rest.split_once(':').ok_or_else(|| Error::InvalidInput(format!("expected curve:<poly>:<param>, got `{spec}`")))?;
        let g = parse_expr(curve, field, vars)?;
        let phi = parse_param(param, field)?;
        return Valuation::curve(g, phi);
    }
    Err(Error::InvalidInput(format!("unknown valuation spec `{spec}` (expected ord, mono:[…] or curve:<poly>:<param>)")))
}

/// A field element written in the expression grammar.
pub fn parse_constant(text: &str, field: &CoeffField) -> Result<FieldElement> {
    let p = parse_expr(text, field, &lojex_core::vars(&[]))?;
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> (CoeffField, Vars) {
        (CoeffField::rationals(), lojex_core::vars(&["x", "y"]))
    }

    #[test]
    fn basic_forms() {
        let (f, v) = q();
        assert_eq!(parse_expr("x^2 + y^3", &f, &v).unwrap().to_string(), "y^3 + x^2");
        assert_eq!(parse_expr("(x^2+y^3)*x^3", &f, &v).unwrap().to_string(), "x^3*y^3 + x^5");
        assert_eq!(parse_expr("2^3^2", &f, &v).unwrap().to_string(), "512");
        assert_eq!(parse_expr("-x^2", &f, &v).unwrap().to_string(), "-x^2");
        assert_eq!(parse_expr("1/2*x - 3/4", &f, &v).unwrap().to_string(), "1/2*x - 3/4");
    }

    #[test]
    fn errors_carry_positions() {
        let (f, v) = q();
        assert_eq!(parse_expr("x^(-1)", &f, &v), Err(Error::NonNaturalExponent { line: 1, column: 3 }));
        assert_eq!(parse_expr("x^y", &f, &v), Err(Error::NonNaturalExponent { line: 1, column: 3 }));
        assert_eq!(
            parse_expr("x +\n  z", &f, &v),
            Err(Error::UnknownVariable { name: "z".into(), line: 2, column: 3 })
        );
        assert!(matches!(parse_expr("x + ", &f, &v), Err(Error::Syntax { line: 1, column: 5, .. })));
        assert!(matches!(parse_expr("x/2", &f, &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("(x", &f, &v), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("x $ y", &f, &v), Err(Error::Syntax { column: 3, .. })));
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("fp:7").unwrap().characteristic(), 7);
        assert_eq!(parse_field("fp").unwrap().characteristic(), DEFAULT_PRIME);
        assert_eq!(parse_field("fp:9"), Err(Error::NotPrime(9)));
        let k = parse_field("ext:q:a^2-2").unwrap();
        assert_eq!(k.spec_string(), "ext:q:a^2-2");
        let k2 = parse_field("ext:ext:q:a^2-2:b^2-3").unwrap();
        assert_eq!(parse_field(&k2.spec_string()).unwrap(), k2);
        let v = lojex_core::vars(&["x"]);
        let p = parse_expr("(a*b + 1)*x", &k2, &v).unwrap();
        assert_eq!(parse_expr(&p.to_string(), &k2, &v).unwrap(), p);
        assert!(parse_field("ext:q:a^2-4").is_err());
    }

    #[test]
    fn valuations_and_params() {
        let (f, v) = q();
        let phi = parse_param("(t^3, -t^2)", &f).unwrap();
        assert_eq!(phi.to_string(), "(t^3, -t^2)");
        let nu = parse_valuation("curve:x^2+y^3:(t^3,-t^2)", &f, &v).unwrap();
        assert_eq!(nu.rank(), 2);
        assert_eq!(parse_valuation("mono:[2,3]", &f, &v).unwrap().rank(), 1);
        assert!(parse_valuation("mono:[2,3,4]", &f, &v).is_err());
        assert_eq!(parse_valuation("ord", &f, &v).unwrap().nvars(), 2);
    }
}
