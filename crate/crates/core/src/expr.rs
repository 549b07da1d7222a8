//! Plain-text expression files.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! params := a, k
//! vars := u, v
//! h := 1 - u - (2*a + k)*v + v^2 + (k - v)*v/u
//! swap := (v, u)
//! ```
//!
//! `vars :=` opens a coordinate block; every later definition lives over that
//! block's variables followed by the declared parameters. Expressions use
//! `+ - * /`, integer powers `^`, parentheses, integer literals (so `p/q` is
//! a rational constant) and names of earlier definitions, which are inlined.
//! A parenthesized, comma-separated list at the top level defines a tuple.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use num_bigint::BigInt;

use crate::algebra::{Rational, RationalFunction, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, n) => write!(f, "({a})^({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Scalar(Expr),
    Tuple(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Vars(Vec<String>),
    Params(Vec<String>),
    Def { name: String, body: Body },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub number: usize,
    pub statement: Statement,
}

/// Location of one scalar formula inside a script.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub line: usize,
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str, line: usize) -> Result<Vec<Tok>> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().map_err(|_| err(format!("bad integer `{s}`")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let parened = !neg && self.eat('(');
            let neg = neg || (parened && self.eat('-'));
            let n = match self.peek() {
                Some(Tok::Int(n)) => {
                    let n: i32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    n
                }
                _ => return self.err("exponent must be an integer literal"),
            };
            if parened {
                self.expect(')')?;
            }
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of expression"),
        }
    }

    /// Top level: a single expression or a parenthesized tuple.
    fn body(&mut self) -> Result<Body> {
        let save = self.pos;
        if self.eat('(') {
            let mut items = vec![self.sum()?];
            if self.eat(',') {
                loop {
                    items.push(self.sum()?);
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(')')?;
                if self.at_end() {
                    return Ok(Body::Tuple(items));
                }
                return self.err("trailing input after tuple");
            }
            self.pos = save;
        }
        let e = self.sum()?;
        if !self.at_end() {
            return self.err("trailing input after expression");
        }
        Ok(Body::Scalar(e))
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn name_list(src: &str, line: usize) -> Result<Vec<String>> {
    let names: Vec<String> = src
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    for n in &names {
        if !is_ident(n) {
            return Err(Error::Parse {
                line,
                msg: format!("`{n}` is not an identifier"),
            });
        }
    }
    Ok(names)
}

/// Parses a single expression over no statements, e.g. for command-line use.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src, 1)?,
        pos: 0,
        line: 1,
    };
    let e = p.sum()?;
    if !p.at_end() {
        return p.err("trailing input after expression");
    }
    Ok(e)
}

impl Script {
    pub fn parse(src: &str) -> Result<Script> {
        let mut lines = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let number = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let Some((lhs, rhs)) = text.split_once(":=") else {
                return Err(Error::Parse {
                    line: number,
                    msg: "expected `name := expression`".into(),
                });
            };
            let lhs = lhs.trim();
            let statement = match lhs {
                "vars" => Statement::Vars(name_list(rhs, number)?),
                "params" => Statement::Params(name_list(rhs, number)?),
                _ if is_ident(lhs) => {
                    let mut p = Parser {
                        toks: lex(rhs, number)?,
                        pos: 0,
                        line: number,
                    };
                    Statement::Def {
                        name: lhs.to_string(),
                        body: p.body()?,
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line: number,
                        msg: format!("`{lhs}` is not a valid name"),
                    })
                }
            };
            lines.push(Line { number, statement });
        }
        Ok(Script { lines })
    }

    /// Every scalar formula: scalar definitions and each tuple entry.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::new();
        for (li, l) in self.lines.iter().enumerate() {
            match &l.statement {
                Statement::Def {
                    body: Body::Scalar(_),
                    ..
                } => out.push(Component { line: li, index: None }),
                Statement::Def {
                    body: Body::Tuple(items),
                    ..
                } => out.extend((0..items.len()).map(|k| Component {
                    line: li,
                    index: Some(k),
                })),
                _ => {}
            }
        }
        out
    }

    pub fn component_name(&self, c: Component) -> String {
        match &self.lines[c.line].statement {
            Statement::Def { name, .. } => match c.index {
                Some(k) => format!("{name}[{k}]"),
                None => name.clone(),
            },
            _ => String::new(),
        }
    }

    /// Copy of the script with one formula replaced by `formula + 1`.
    pub fn perturbed(&self, c: Component) -> Script {
        let mut out = self.clone();
        if let Statement::Def { body, .. } = &mut out.lines[c.line].statement {
            let slot = match (body, c.index) {
                (Body::Scalar(e), None) => e,
                (Body::Tuple(items), Some(k)) => &mut items[k],
                _ => panic!("component does not match the statement shape"),
            };
            let old = std::mem::replace(slot, Expr::Int(BigInt::from(0)));
            *slot = Expr::Add(Box::new(old), Box::new(Expr::Int(BigInt::from(1))));
        }
        out
    }

    pub fn evaluate(&self) -> Result<Document> {
        Document::build(self)
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Scalar(RationalFunction),
    Tuple(Vec<RationalFunction>),
}

#[derive(Debug, Clone)]
pub struct Definition {
    pub ring: Ring,
    pub line: usize,
    pub value: Value,
}

/// Evaluated script: every definition as rational functions over its block's
/// ring.
#[derive(Debug, Clone)]
pub struct Document {
    pub params: Vec<String>,
    pub defs: IndexMap<String, Definition>,
    rings: Vec<Ring>,
}

struct Env<'a> {
    asts: &'a HashMap<String, (usize, Body)>,
    cache: HashMap<(String, usize), RationalFunction>,
}

impl Env<'_> {
    fn eval(&mut self, e: &Expr, ring: &Ring, ring_id: usize, line: usize) -> Result<RationalFunction> {
        let at_line = |err: Error| match err {
            Error::DivisionByZero => Error::Parse {
                line,
                msg: "division by zero".into(),
            },
            other => other,
        };
        Ok(match e {
            Expr::Int(n) => RationalFunction::constant(ring, Rational::from_integer(n.clone())),
            Expr::Sym(s) => {
                if let Some(i) = ring.index(s) {
                    RationalFunction::var(ring, i)
                } else if let Some((def_line, body)) = self.asts.get(s) {
                    if *def_line >= line {
                        return Err(Error::MissingDefinition(s.clone()));
                    }
                    let key = (s.clone(), ring_id);
                    if let Some(v) = self.cache.get(&key) {
                        return Ok(v.clone());
                    }
                    let Body::Scalar(inner) = body else {
                        return Err(Error::Parse {
                            line,
                            msg: format!("tuple `{s}` used inside an expression"),
                        });
                    };
                    let inner = inner.clone();
                    let v = self.eval(&inner, ring, ring_id, *def_line)?;
                    self.cache.insert(key, v.clone());
                    v
                } else {
                    return Err(Error::UnknownSymbol(s.clone()));
                }
            }
            Expr::Neg(a) => -&self.eval(a, ring, ring_id, line)?,
            Expr::Add(a, b) => &self.eval(a, ring, ring_id, line)? + &self.eval(b, ring, ring_id, line)?,
            Expr::Sub(a, b) => &self.eval(a, ring, ring_id, line)? - &self.eval(b, ring, ring_id, line)?,
            Expr::Mul(a, b) => &self.eval(a, ring, ring_id, line)? * &self.eval(b, ring, ring_id, line)?,
            Expr::Div(a, b) => self
                .eval(a, ring, ring_id, line)?
                .try_div(&self.eval(b, ring, ring_id, line)?)
                .map_err(at_line)?,
            Expr::Pow(a, n) => self.eval(a, ring, ring_id, line)?.pow(*n).map_err(at_line)?,
        })
    }
}

impl Expr {
    /// Evaluates an expression that refers only to ring variables.
    pub fn to_rational_function(&self, ring: &Ring) -> Result<RationalFunction> {
        let asts = HashMap::new();
        let mut env = Env {
            asts: &asts,
            cache: HashMap::new(),
        };
        env.eval(self, ring, 0, 0)
    }
}

impl Document {
    fn build(script: &Script) -> Result<Document> {
        let mut asts: HashMap<String, (usize, Body)> = HashMap::new();
        for l in &script.lines {
            if let Statement::Def { name, body } = &l.statement {
                if asts.insert(name.clone(), (l.number, body.clone())).is_some() {
                    return Err(Error::Parse {
                        line: l.number,
                        msg: format!("`{name}` is defined twice"),
                    });
                }
            }
        }
        let mut env = Env {
            asts: &asts,
            cache: HashMap::new(),
        };
        let mut params: Vec<String> = Vec::new();
        let mut vars: Vec<String> = Vec::new();
        let mut rings: Vec<Ring> = Vec::new();
        let mut defs = IndexMap::new();
        for l in &script.lines {
            match &l.statement {
                Statement::Params(ps) => {
                    for p in ps {
                        if !params.contains(p) {
                            params.push(p.clone());
                        }
                    }
                    rings.push(Ring::new(&vars, &params));
                }
                Statement::Vars(vs) => {
                    vars = vs.clone();
                    if let Some(dup) = vars.iter().find(|v| params.contains(v)) {
                        return Err(Error::Parse {
                            line: l.number,
                            msg: format!("`{dup}` is both a variable and a parameter"),
                        });
                    }
                    rings.push(Ring::new(&vars, &params));
                }
                Statement::Def { name, body } => {
                    if rings.is_empty() {
                        rings.push(Ring::new(&vars, &params));
                    }
                    let id = rings.len() - 1;
                    let ring = rings[id].clone();
                    let value = match body {
                        Body::Scalar(e) => {
                            let v = env.eval(e, &ring, id, l.number)?;
                            env.cache.insert((name.clone(), id), v.clone());
                            Value::Scalar(v)
                        }
                        Body::Tuple(items) => Value::Tuple(
                            items
                                .iter()
                                .map(|e| env.eval(e, &ring, id, l.number))
                                .collect::<Result<_>>()?,
                        ),
                    };
                    defs.insert(
                        name.clone(),
                        Definition {
                            ring,
                            line: l.number,
                            value,
                        },
                    );
                }
            }
        }
        Ok(Document { params, defs, rings })
    }

    pub fn get(&self, name: &str) -> Result<&Definition> {
        self.defs
            .get(name)
            .ok_or_else(|| Error::MissingDefinition(name.to_string()))
    }

    pub fn scalar(&self, name: &str) -> Result<&RationalFunction> {
        match &self.get(name)?.value {
            Value::Scalar(f) => Ok(f),
            Value::Tuple(_) => Err(Error::Shape(format!("`{name}` is a tuple, not a scalar"))),
        }
    }

    pub fn tuple(&self, name: &str) -> Result<&[RationalFunction]> {
        match &self.get(name)?.value {
            Value::Tuple(v) => Ok(v),
            Value::Scalar(_) => Err(Error::Shape(format!("`{name}` is a scalar, not a tuple"))),
        }
    }

    pub fn ring_of(&self, name: &str) -> Result<&Ring> {
        Ok(&self.get(name)?.ring)
    }

    /// The ring of the last `vars :=` block.
    pub fn last_ring(&self) -> Option<&Ring> {
        self.rings.last()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;

    const SRC: &str = "
        # comment line
        params := a
        vars := x, y
        g := x*y          # trailing comment
        h := (1 - g)^2 - 2*a*x/3
        m := (y, -x + 1/2)
        vars := u, v
        q := u^-1 + v^(2)
    ";

    #[test]
    fn parses_blocks_and_inlines_definitions() {
        let doc = Script::parse(SRC).unwrap().evaluate().unwrap();
        let h = doc.scalar("h").unwrap();
        let v = h.eval(&[frac(1, 1), frac(2, 1), frac(3, 1)]).unwrap();
        assert_eq!(v, frac(-1, 1));
        assert_eq!(doc.tuple("m").unwrap().len(), 2);
        assert_eq!(doc.ring_of("q").unwrap().names(), &["u", "v", "a"]);
        assert_eq!(doc.scalar("q").unwrap().to_string(), "(u*v^2 + 1)/u");
    }

    #[test]
    fn reports_errors_with_lines() {
        assert!(matches!(
            Script::parse("vars := x\nf := x +").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            Script::parse("vars := x\nf := z").unwrap().evaluate().unwrap_err(),
            Error::UnknownSymbol(s) if s == "z"
        ));
        assert!(matches!(
            Script::parse("vars := x\nf := x/0").unwrap().evaluate().unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            Script::parse("vars := x\nf := g\ng := x").unwrap().evaluate().unwrap_err(),
            Error::MissingDefinition(_)
        ));
    }

    #[test]
    fn perturbation_adds_one_to_a_single_component() {
        let script = Script::parse(SRC).unwrap();
        let comps = script.components();
        assert_eq!(comps.len(), 5);
        let m1 = comps[3];
        assert_eq!(script.component_name(m1), "m[1]");
        let doc = script.perturbed(m1).evaluate().unwrap();
        let orig = script.evaluate().unwrap();
        let diff = &doc.tuple("m").unwrap()[1] - &orig.tuple("m").unwrap()[1];
        assert_eq!(diff.constant_value(), Some(frac(1, 1)));
        assert!(doc.tuple("m").unwrap()[0].equals_exact(&orig.tuple("m").unwrap()[0]));
    }

    #[test]
    fn single_expressions() {
        let e = parse_expr("-x^2").unwrap();
        assert_eq!(e.to_string(), "(-(x)^(2))");
        assert!(parse_expr("x)").is_err());
    }
}
