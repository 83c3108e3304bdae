//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ['-'] base ['^' integer]
//! base   := integer | identifier | identifier '(' expr ')' | '(' expr ')'
//! ```
//!
//! A rational literal `p/q` is read as integer division folded to a
//! constant, so `x/3/4` keeps its usual left-associative meaning.
//! Error offsets are 1-based character positions.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Expr, ExprError, FunctionRegistry};

/// Names the parser accepts as identifiers and function heads.
pub trait SymbolScope {
    fn is_symbol(&self, name: &str) -> bool;
    fn is_function(&self, name: &str) -> bool;
}

/// Accepts every identifier and the standard functions.
pub struct AnySymbol;

impl SymbolScope for AnySymbol {
    fn is_symbol(&self, _: &str) -> bool {
        true
    }
    fn is_function(&self, name: &str) -> bool {
        FunctionRegistry::standard().contains(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
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
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().unwrap()), start + 1));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start + 1));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i + 1));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                offset: i + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

pub fn parse(text: &str, scope: &dyn SymbolScope) -> Result<Expr, ExprError> {
    let mut p = Lexer {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr(scope)?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(k) => format!("number `{k}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ExprError {
        ExprError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{op}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self, scope: &dyn SymbolScope) -> Result<Expr, ExprError> {
        let mut terms = vec![self.term(scope)?];
        loop {
            if self.eat('+') {
                terms.push(self.term(scope)?);
            } else if self.eat('-') {
                terms.push(Expr::neg(self.term(scope)?));
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self, scope: &dyn SymbolScope) -> Result<Expr, ExprError> {
        let mut acc = self.factor(scope)?;
        loop {
            if self.eat('*') {
                acc = Expr::mul(vec![acc, self.factor(scope)?]);
            } else if *self.peek() == Tok::Op('/') {
                let at = self.offset();
                self.pos += 1;
                let den = self.factor(scope)?;
                if matches!(&den, Expr::Num(q) if q == &BigRational::from_integer(0.into())) {
                    return Err(ExprError::Syntax {
                        offset: at,
                        message: "division by zero literal".into(),
                    });
                }
                acc = Expr::div(acc, den);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self, scope: &dyn SymbolScope) -> Result<Expr, ExprError> {
        let negate = self.eat('-');
        let mut base = self.base(scope)?;
        if self.eat('^') {
            let neg_exp = self.eat('-');
            match self.bump() {
                Tok::Int(k) => {
                    let k: i64 = k
                        .try_into()
                        .map_err(|_| self.error("exponent out of range".into()))?;
                    base = Expr::pow(base, if neg_exp { -k } else { k });
                }
                t => {
                    self.pos -= usize::from(t != Tok::End);
                    return Err(
                        self.error(format!("expected integer exponent, found {}", describe(&t)))
                    );
                }
            }
        }
        Ok(if negate { Expr::neg(base) } else { base })
    }

    fn base(&mut self, scope: &dyn SymbolScope) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(k) => Ok(Expr::from(k)),
            Tok::Ident(name) => {
                if self.eat('(') {
                    if !scope.is_function(&name) {
                        return Err(ExprError::UnregisteredFunction(name));
                    }
                    let arg = self.expr(scope)?;
                    self.expect(')')?;
                    Ok(Expr::func(&name, arg))
                } else if scope.is_symbol(&name) {
                    Ok(Expr::Sym(name))
                } else {
                    Err(ExprError::UnknownSymbol { name, offset: at })
                }
            }
            Tok::Op('(') => {
                let e = self.expr(scope)?;
                self.expect(')')?;
                Ok(e)
            }
            t => {
                self.pos -= usize::from(t != Tok::End);
                Err(self.error(format!(
                    "expected a number, symbol or `(`, found {}",
                    describe(&t)
                )))
            }
        }
    }
}
