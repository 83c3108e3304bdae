//! Symbolic scalar expressions.
//!
//! [`Expr`] is the user-facing tree: it is what the parser builds, what the
//! printer renders and what manifests and fixtures are written in. Exact
//! reasoning happens on [`RatFunc`], the canonical rational-function form
//! reached through [`Expr::canonicalize`].

pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod var;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use parse::{parse, AnySymbol, SymbolScope};
pub use poly::{Monomial, Poly};
pub use ratfunc::RatFunc;
pub use var::{TrigKind, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { name: String, offset: usize },
    #[error("function `{0}` is not registered")]
    UnregisteredFunction(String),
    #[error("division by an identically zero expression")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("pole: a denominator vanishes at the evaluation point")]
    Pole,
    #[error("no value supplied for symbol `{0}`")]
    MissingSymbol(String),
    #[error("function `{0}` is not registered")]
    UnregisteredFunction(String),
}

/// Immutable expression tree. Build nodes through the smart constructors
/// ([`Expr::add`], [`Expr::mul`], ...) which flatten, fold numeric constants
/// and drop neutral elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(BigRational),
    Sym(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Func(String, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

/// A registered unary function together with its derivative rule, written
/// as an expression in the placeholder symbol `u`.
#[derive(Debug, Clone)]
pub struct FunctionSymbol {
    pub name: String,
    pub derivative: Expr,
    pub side_relation: Option<Expr>,
}

#[derive(Debug, Clone)]
pub struct FunctionRegistry {
    symbols: HashMap<String, FunctionSymbol>,
}

impl FunctionRegistry {
    pub fn empty() -> Self {
        FunctionRegistry {
            symbols: HashMap::new(),
        }
    }

    /// `sin`, `cos` and `cot` with `sin(u)^2 + cos(u)^2 - 1 = 0`.
    pub fn standard() -> Self {
        let u = || Expr::sym("u");
        let sin = || Expr::func("sin", u());
        let cos = || Expr::func("cos", u());
        let pythagoras = Expr::add(vec![
            Expr::pow(sin(), 2),
            Expr::pow(cos(), 2),
            Expr::int(-1),
        ]);
        let mut reg = FunctionRegistry::empty();
        reg.register(FunctionSymbol {
            name: "sin".into(),
            derivative: cos(),
            side_relation: Some(pythagoras.clone()),
        });
        reg.register(FunctionSymbol {
            name: "cos".into(),
            derivative: Expr::neg(sin()),
            side_relation: Some(pythagoras),
        });
        reg.register(FunctionSymbol {
            name: "cot".into(),
            derivative: Expr::div(Expr::int(-1), Expr::pow(sin(), 2)),
            side_relation: None,
        });
        reg
    }

    pub fn register(&mut self, f: FunctionSymbol) {
        self.symbols.insert(f.name.clone(), f);
    }

    pub fn get(&self, name: &str) -> Option<&FunctionSymbol> {
        self.symbols.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.symbols.keys().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

impl Default for FunctionRegistry {
    fn default() -> Self {
        FunctionRegistry::standard()
    }
}

impl Expr {
    pub fn int(k: i64) -> Expr {
        Expr::Num(BigRational::from_integer(k.into()))
    }

    pub fn rational(p: i64, q: i64) -> Expr {
        Expr::Num(BigRational::new(p.into(), q.into()))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(name.to_owned())
    }

    pub fn func(name: &str, arg: Expr) -> Expr {
        Expr::Func(name.to_owned(), Box::new(arg))
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut out = Vec::with_capacity(terms.len());
        let mut constant = BigRational::zero();
        let mut stack: Vec<Expr> = terms.into_iter().rev().collect();
        while let Some(t) = stack.pop() {
            match t {
                Expr::Add(inner) => stack.extend(inner.into_iter().rev()),
                Expr::Num(q) => constant += q,
                other => out.push(other),
            }
        }
        if !constant.is_zero() {
            out.push(Expr::Num(constant));
        }
        match out.len() {
            0 => Expr::int(0),
            1 => out.pop().unwrap(),
            _ => Expr::Add(out),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut out = Vec::with_capacity(factors.len());
        let mut coeff = BigRational::one();
        let mut stack: Vec<Expr> = factors.into_iter().rev().collect();
        while let Some(f) = stack.pop() {
            match f {
                Expr::Mul(inner) => stack.extend(inner.into_iter().rev()),
                Expr::Num(q) => coeff *= q,
                other => out.push(other),
            }
        }
        if coeff.is_zero() {
            return Expr::int(0);
        }
        if out.is_empty() {
            return Expr::Num(coeff);
        }
        if !coeff.is_one() {
            out.insert(0, Expr::Num(coeff));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Mul(out)
        }
    }

    pub fn pow(base: Expr, k: i64) -> Expr {
        match (base, k) {
            (_, 0) => Expr::int(1),
            (b, 1) => b,
            (Expr::Num(q), k) if !q.is_zero() || k > 0 => Expr::Num(q.pow(k as i32)),
            (Expr::Pow(b, j), k) => Expr::pow(*b, j * k),
            (b, k) => Expr::Pow(Box::new(b), k),
        }
    }

    pub fn div(num: Expr, den: Expr) -> Expr {
        match (num, den) {
            (n, Expr::Num(d)) if d.is_one() => n,
            (Expr::Num(n), Expr::Num(d)) if !d.is_zero() => Expr::Num(n / d),
            (Expr::Num(n), _) if n.is_zero() => Expr::int(0),
            (n, d) => Expr::Div(Box::new(n), Box::new(d)),
        }
    }

    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Num(q) => Expr::Num(-q),
            Expr::Div(n, d) => Expr::Div(Box::new(Expr::neg(*n)), d),
            other => Expr::mul(vec![Expr::int(-1), other]),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add(vec![a, Expr::neg(b)])
    }

    fn is_negative(&self) -> bool {
        match self {
            Expr::Num(q) => q.is_negative(),
            Expr::Mul(fs) => matches!(fs.first(), Some(Expr::Num(q)) if q.is_negative()),
            Expr::Div(n, _) => n.is_negative(),
            _ => false,
        }
    }

    /// Replaces every occurrence of the symbol `name`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Sym(s) if s == name => with.clone(),
            Expr::Num(_) | Expr::Sym(_) => self.clone(),
            Expr::Add(ts) => Expr::add(ts.iter().map(|t| t.substitute(name, with)).collect()),
            Expr::Mul(fs) => Expr::mul(fs.iter().map(|t| t.substitute(name, with)).collect()),
            Expr::Pow(b, k) => Expr::pow(b.substitute(name, with), *k),
            Expr::Func(f, a) => Expr::func(f, a.substitute(name, with)),
            Expr::Div(n, d) => Expr::div(n.substitute(name, with), d.substitute(name, with)),
        }
    }

    /// Formal partial derivative with respect to the symbol `x`.
    pub fn diff(&self, x: &str, reg: &FunctionRegistry) -> Result<Expr, ExprError> {
        Ok(match self {
            Expr::Num(_) => Expr::int(0),
            Expr::Sym(s) => Expr::int(i64::from(s == x)),
            Expr::Add(ts) => Expr::add(
                ts.iter()
                    .map(|t| t.diff(x, reg))
                    .collect::<Result<_, _>>()?,
            ),
            Expr::Mul(fs) => {
                let mut terms = Vec::with_capacity(fs.len());
                for i in 0..fs.len() {
                    let d = fs[i].diff(x, reg)?;
                    if d == Expr::int(0) {
                        continue;
                    }
                    let mut prod = fs.clone();
                    prod[i] = d;
                    terms.push(Expr::mul(prod));
                }
                Expr::add(terms)
            }
            Expr::Pow(b, k) => Expr::mul(vec![
                Expr::int(*k),
                Expr::pow((**b).clone(), k - 1),
                b.diff(x, reg)?,
            ]),
            Expr::Func(name, arg) => {
                let f = reg
                    .get(name)
                    .ok_or_else(|| ExprError::UnregisteredFunction(name.clone()))?;
                Expr::mul(vec![f.derivative.substitute("u", arg), arg.diff(x, reg)?])
            }
            Expr::Div(n, d) => {
                let top = Expr::sub(
                    Expr::mul(vec![n.diff(x, reg)?, (**d).clone()]),
                    Expr::mul(vec![(**n).clone(), d.diff(x, reg)?]),
                );
                Expr::div(top, Expr::pow((**d).clone(), 2))
            }
        })
    }

    /// Canonical rational-function form; `cot` becomes `cos/sin`.
    pub fn canonicalize(&self) -> Result<RatFunc, ExprError> {
        Ok(match self {
            Expr::Num(q) => RatFunc::from_rational(q),
            Expr::Sym(s) => RatFunc::from_var(Var::symbol(s)),
            Expr::Add(ts) => {
                let mut acc = RatFunc::zero();
                for t in ts {
                    acc = &acc + &t.canonicalize()?;
                }
                acc
            }
            Expr::Mul(fs) => {
                let mut acc = RatFunc::one();
                for f in fs {
                    acc = &acc * &f.canonicalize()?;
                }
                acc
            }
            Expr::Pow(b, k) => b.canonicalize()?.pow(*k).ok_or(ExprError::DivisionByZero)?,
            Expr::Func(name, arg) => {
                let (s, c) = Var::trig_pair(&arg.canonicalize()?);
                match name.as_str() {
                    "sin" => RatFunc::from_var(s),
                    "cos" => RatFunc::from_var(c),
                    "cot" => (&RatFunc::from_var(c))
                        .checked_div(&RatFunc::from_var(s))
                        .ok_or(ExprError::DivisionByZero)?,
                    _ => return Err(ExprError::UnregisteredFunction(name.clone())),
                }
            }
            Expr::Div(n, d) => n
                .canonicalize()?
                .checked_div(&d.canonicalize()?)
                .ok_or(ExprError::DivisionByZero)?,
        })
    }

    /// Exact zero test on the canonical numerator.
    pub fn is_zero(&self) -> Result<bool, ExprError> {
        Ok(self.canonicalize()?.is_zero())
    }

    /// Floating-point value under `assignment`.
    pub fn eval(&self, assignment: &HashMap<String, f64>) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(q) => q.to_f64().unwrap_or(f64::NAN),
            Expr::Sym(s) => *assignment
                .get(s)
                .ok_or_else(|| EvalError::MissingSymbol(s.clone()))?,
            Expr::Add(ts) => ts
                .iter()
                .map(|t| t.eval(assignment))
                .sum::<Result<f64, _>>()?,
            Expr::Mul(fs) => fs
                .iter()
                .map(|t| t.eval(assignment))
                .product::<Result<f64, _>>()?,
            Expr::Pow(b, k) => {
                let v = b.eval(assignment)?;
                if v == 0.0 && *k < 0 {
                    return Err(EvalError::Pole);
                }
                v.powi(*k as i32)
            }
            Expr::Func(name, arg) => {
                let u = arg.eval(assignment)?;
                match name.as_str() {
                    "sin" => u.sin(),
                    "cos" => u.cos(),
                    "cot" => {
                        let s = u.sin();
                        if s == 0.0 {
                            return Err(EvalError::Pole);
                        }
                        u.cos() / s
                    }
                    _ => return Err(EvalError::UnregisteredFunction(name.clone())),
                }
            }
            Expr::Div(n, d) => {
                let dv = d.eval(assignment)?;
                if dv == 0.0 {
                    return Err(EvalError::Pole);
                }
                n.eval(assignment)? / dv
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(_) => 1,
            Expr::Mul(_) | Expr::Div(..) => 2,
            Expr::Num(q) if q.is_negative() || !q.is_integer() => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write_num(f, q),
            Expr::Sym(s) => f.write_str(s),
            Expr::Func(name, arg) => write!(f, "{name}({arg})"),
            Expr::Add(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i == 0 {
                        write!(f, "{t}")?;
                    } else if t.is_negative() {
                        let n = Expr::neg(t.clone());
                        f.write_str("-")?;
                        write_wrapped(f, &n, n.precedence() < 2)?;
                    } else {
                        f.write_str("+")?;
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            Expr::Mul(fs) => {
                let mut rest = &fs[..];
                if let Some(Expr::Num(q)) = fs.first() {
                    if *q == -BigRational::one() {
                        f.write_str("-")?;
                    } else {
                        write_num(f, q)?;
                        f.write_str("*")?;
                    }
                    rest = &fs[1..];
                }
                for (i, x) in rest.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    let wrap = match x {
                        Expr::Div(..) | Expr::Add(_) => true,
                        Expr::Num(_) => true,
                        _ => false,
                    };
                    write_wrapped(f, x, wrap)?;
                }
                Ok(())
            }
            Expr::Pow(b, k) => {
                let wrap = match &**b {
                    Expr::Sym(_) | Expr::Func(..) => false,
                    Expr::Num(q) => !(q.is_integer() && !q.is_negative()),
                    _ => true,
                };
                write_wrapped(f, b, wrap)?;
                write!(f, "^{k}")
            }
            Expr::Div(n, d) => {
                write_wrapped(f, n, n.precedence() < 2)?;
                f.write_str("/")?;
                let wrap = match &**d {
                    Expr::Sym(_) | Expr::Func(..) | Expr::Pow(..) => false,
                    Expr::Num(q) => !(q.is_integer() && !q.is_negative()),
                    _ => true,
                };
                write_wrapped(f, d, wrap)
            }
        }
    }
}

impl From<i64> for Expr {
    fn from(k: i64) -> Self {
        Expr::int(k)
    }
}

impl From<BigInt> for Expr {
    fn from(k: BigInt) -> Self {
        Expr::Num(BigRational::from_integer(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s, &AnySymbol).unwrap()
    }

    fn env(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn nested_trig_quotient_derivative_stays_fast() {
        let reg = FunctionRegistry::standard();
        let e = p("x/((sin(x)/(x^2+2) + y + cos(y))^2 + 2)");
        let d = e.diff("x", &reg).unwrap();
        let quotient = p("(1*((sin(x)/(x^2+2) + y + cos(y))^2 + 2) - x*(2*(sin(x)/(x^2+2) + y + cos(y))*(cos(x)*(x^2+2) - sin(x)*2*x)/(x^2+2)^2))/((sin(x)/(x^2+2) + y + cos(y))^2 + 2)^2");
        assert!(Expr::sub(d, quotient).is_zero().unwrap());
    }

    #[test]
    fn grammar_builds_expected_tree() {
        assert_eq!(
            p("b^2 + X2^2"),
            Expr::Add(vec![
                Expr::pow(Expr::sym("b"), 2),
                Expr::pow(Expr::sym("X2"), 2)
            ])
        );
        let e = p("-(b^2*sin(X3)^2)/(b^2+X2^2)");
        assert!(matches!(e, Expr::Div(..)));
    }

    #[test]
    fn unbalanced_parenthesis_reports_offset() {
        let err = parse("cot(X3", &AnySymbol).unwrap_err();
        assert!(matches!(err, ExprError::Syntax { offset: 7, .. }), "{err}");
    }

    #[test]
    fn derivative_examples() {
        let reg = FunctionRegistry::standard();
        let d = p("X2^2").diff("X2", &reg).unwrap();
        assert!(Expr::sub(d, p("2*X2")).is_zero().unwrap());
        let d = p("sin(X3)^2").diff("X3", &reg).unwrap();
        assert!(Expr::sub(d, p("2*sin(X3)*cos(X3)")).is_zero().unwrap());
        let d = p("-b^2/(b^2+X2^2)").diff("X2", &reg).unwrap();
        assert!(Expr::sub(d, p("2*b^2*X2/(b^2+X2^2)^2")).is_zero().unwrap());
    }

    #[test]
    fn zero_test_examples() {
        assert!(p("sin(X3)^2 + cos(X3)^2 - 1").is_zero().unwrap());
        assert!(!p("b^2/(b^2+X2^2) - b^2/(b^2+X2^2)^2").is_zero().unwrap());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            p("b^2/(b^2+X2^2)")
                .eval(&env(&[("b", 1.0), ("X2", 0.0)]))
                .unwrap(),
            1.0
        );
        let v = p("cot(X3)")
            .eval(&env(&[("X3", std::f64::consts::FRAC_PI_4)]))
            .unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let k = p("2*b^2/(b^2+X2^2)^2")
            .eval(&env(&[("b", 2.0), ("X2", 1.0)]))
            .unwrap();
        assert!((k - 0.32).abs() < 1e-15);
        assert_eq!(p("1/X2").eval(&env(&[("X2", 0.0)])), Err(EvalError::Pole));
        assert_eq!(
            p("X2").eval(&env(&[])),
            Err(EvalError::MissingSymbol("X2".into()))
        );
    }

    #[test]
    fn unregistered_function_is_an_error() {
        let e = Expr::func("tan", Expr::sym("x"));
        assert_eq!(
            e.is_zero(),
            Err(ExprError::UnregisteredFunction("tan".into()))
        );
        assert!(e.diff("x", &FunctionRegistry::standard()).is_err());
    }

    #[test]
    fn printer_round_trips() {
        for s in [
            "x-2*y",
            "-x^2+3/4*y",
            "x/(y*z)",
            "-(a+b)/c^2",
            "x*(y/z)",
            "(x+1)^-2",
            "x-(a+b)",
            "2*b^2/(b^2+X2^2)^2",
            "(3/4*x)^2",
        ] {
            let e = p(s);
            let printed = e.to_string();
            assert_eq!(p(&printed), e, "{s} -> {printed}");
        }
    }

    #[test]
    fn canonical_print_matches_table_style() {
        let e = p("b^2/(3*b^4+6*b^2*X2^2+3*X2^4)");
        assert_eq!(
            e.canonicalize().unwrap().to_string(),
            "b^2/(3*(b^2+X2^2)^2)"
        );
    }
}
