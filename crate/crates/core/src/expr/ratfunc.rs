//! Canonical rational functions in coordinates, parameters and trig atoms.
//!
//! Every value is `num / den` with
//! * `cos(u)` of degree at most one in `num` (`cos(u)^2 -> 1 - sin(u)^2`),
//! * no `cos(u)` at all in `den` (removed by multiplying with the conjugate),
//! * `gcd(num, den) = 1`, a positive leading coefficient in `den` and unit
//!   integer content across both.
//!
//! Under these rules two values are equal as functions exactly when their
//! representations are identical, so zero testing is `num == 0`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{gcd, Monomial, Poly};
use super::var::{TrigKind, Var};
use super::{EvalError, Expr};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

fn has_reducible_cos(p: &Poly) -> bool {
    p.terms()
        .iter()
        .any(|(m, _)| m.factors().any(|(v, e)| e >= 2 && v.is_cos()))
}

/// Applies `cos(u)^2 -> 1 - sin(u)^2` until every cos has degree <= 1.
pub fn reduce_side_relations(p: &Poly) -> Poly {
    if !has_reducible_cos(p) {
        return p.clone();
    }
    let mut out = Vec::with_capacity(p.len() * 2);
    for (m, c) in p.terms() {
        let mut base = Monomial::one();
        let mut factor = Poly::one();
        for (v, e) in m.factors() {
            if e >= 2 && v.is_cos() {
                let s = v.trig().unwrap().partner();
                let one_minus_s2 =
                    &Poly::one() - &Poly::monomial(Monomial::var(s, 2), BigInt::one());
                factor = &factor * &one_minus_s2.pow(e / 2);
                base = base.mul(&Monomial::var(v, e % 2));
            } else {
                base = base.mul(&Monomial::var(v, e));
            }
        }
        let piece = factor.mul_monomial(&base).scale(c);
        out.extend(piece.terms().iter().cloned());
    }
    Poly::from_terms(out)
}

fn first_cos(p: &Poly) -> Option<Var> {
    p.vars().into_iter().find(|v| v.is_cos())
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        RatFunc {
            num: Poly::from_i64(k),
            den: Poly::one(),
        }
    }

    pub fn from_bigint(k: BigInt) -> Self {
        RatFunc {
            num: Poly::constant(k),
            den: Poly::one(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        RatFunc::normalized(
            Poly::constant(q.numer().clone()),
            Poly::constant(q.denom().clone()),
        )
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        RatFunc::from_rational(&BigRational::new(p.into(), q.into()))
    }

    pub fn from_var(v: Var) -> Self {
        RatFunc {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc::normalized(p, Poly::one())
    }

    /// `num / den`; `None` when `den` is the zero polynomial.
    pub fn from_parts(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(RatFunc::normalized(num, den))
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc::zero();
        }
        let mut num = reduce_side_relations(&num);
        let mut den = reduce_side_relations(&den);
        while let Some(c) = first_cos(&den) {
            let s = c.trig().unwrap().partner();
            let parts = den.coeffs_in(c);
            let p = parts[0].clone();
            let q = parts.get(1).cloned().unwrap_or_default();
            let conj = &p - &(&q * &Poly::var(c));
            num = reduce_side_relations(&(&num * &conj));
            let q2 = &q * &q;
            let s2 = Poly::monomial(Monomial::var(s, 2), BigInt::one());
            den = &(&(&p * &p) - &q2) + &(&q2 * &s2);
            if den.is_zero() {
                unreachable!("conjugate product of a nonzero denominator vanished");
            }
        }
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        RatFunc::unit_fix(num, den)
    }

    fn unit_fix(mut num: Poly, mut den: Poly) -> Self {
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = -num;
            den = -den;
        }
        let k = num.integer_content().gcd(&den.integer_content());
        if !k.is_one() && !k.is_zero() {
            num = num.div_int(&k);
            den = den.div_int(&k);
        }
        RatFunc { num, den }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::normalized(self.den.clone(), self.num.clone()))
        }
    }

    pub fn checked_div(&self, other: &RatFunc) -> Option<RatFunc> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: i64) -> Option<RatFunc> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        if e == 0 {
            return Some(RatFunc::one());
        }
        Some(RatFunc::normalized(self.num.pow(e), self.den.pow(e)))
    }

    pub fn scale(&self, k: i64) -> RatFunc {
        self * &RatFunc::from_int(k)
    }

    /// Partial derivative along a coordinate, with the chain rule through
    /// trig atoms.
    pub fn diff(&self, x: Var) -> RatFunc {
        if self.num.is_constant() && self.den.is_constant() {
            return RatFunc::zero();
        }
        let dn = total_diff(&self.num, x);
        let dd = total_diff(&self.den, x);
        if dd.is_zero() {
            return &dn * &RatFunc::normalized(Poly::one(), self.den.clone());
        }
        let n = RatFunc::from_poly(self.num.clone());
        let d = RatFunc::from_poly(self.den.clone());
        let top = &(&dn * &d) - &(&n * &dd);
        &top * &RatFunc::normalized(Poly::one(), self.den.pow(2))
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    /// Free plain symbols, looking through trig atoms into their arguments.
    pub fn free_symbols(&self) -> std::collections::BTreeSet<Var> {
        let mut out = std::collections::BTreeSet::new();
        for v in self.vars() {
            match v.trig() {
                Some(t) => out.extend(t.arg.free_symbols()),
                None => {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// Numeric value; `value` supplies plain symbols by name.
    pub fn eval_f64(&self, value: &dyn Fn(&str) -> Option<f64>) -> Result<f64, EvalError> {
        let lookup = |v: Var| -> Result<f64, EvalError> {
            match v.trig() {
                Some(t) => {
                    let u = t.arg.eval_f64(value)?;
                    Ok(match t.kind {
                        TrigKind::Sin => u.sin(),
                        TrigKind::Cos => u.cos(),
                    })
                }
                None => {
                    value(v.name()).ok_or_else(|| EvalError::MissingSymbol(v.name().to_owned()))
                }
            }
        };
        let mut vals = std::collections::HashMap::new();
        for v in self.vars() {
            vals.insert(v, lookup(v)?);
        }
        let get = |v: Var| vals.get(&v).copied();
        let d = self.den.eval_f64(&get).unwrap();
        if d == 0.0 || !d.is_finite() {
            return Err(EvalError::Pole);
        }
        Ok(self.num.eval_f64(&get).unwrap() / d)
    }

    /// Exact value at a point where every variable (trig atoms included) is
    /// assigned a rational. `None` on a missing variable or a pole.
    pub fn eval_rational(&self, value: &dyn Fn(Var) -> Option<BigRational>) -> Option<BigRational> {
        let d = self.den.eval_rational(&value)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(&value)? / d)
    }

    /// Readable expression tree; denominators and numerators are split into
    /// square-free factors.
    pub fn to_expr(&self) -> Expr {
        if self.is_zero() {
            return Expr::int(0);
        }
        let (nu, nf) = super::poly::squarefree(&self.num);
        let (du, df) = super::poly::squarefree(&self.den);
        let coeff = BigRational::new(nu, du);
        let factors_expr = |fs: &[(Poly, u32)]| -> Expr {
            Expr::mul(
                fs.iter()
                    .map(|(f, e)| Expr::pow(poly_to_expr(f), *e as i64))
                    .collect(),
            )
        };
        let top = Expr::mul(vec![
            Expr::Num(BigRational::from_integer(coeff.numer().clone())),
            factors_expr(&nf),
        ]);
        let bottom = Expr::mul(vec![
            Expr::Num(BigRational::from_integer(coeff.denom().clone())),
            factors_expr(&df),
        ]);
        Expr::div(top, bottom)
    }
}

fn total_diff(p: &Poly, x: Var) -> RatFunc {
    let mut acc = RatFunc::zero();
    for v in p.vars() {
        let dv = if v == x {
            RatFunc::one()
        } else if let Some(t) = v.trig() {
            let du = t.arg.diff(x);
            if du.is_zero() {
                continue;
            }
            let other = RatFunc::from_var(t.partner());
            match t.kind {
                TrigKind::Sin => &other * &du,
                TrigKind::Cos => -&(&other * &du),
            }
        } else {
            continue;
        };
        acc = &acc + &(&RatFunc::from_poly(p.diff_var(v)) * &dv);
    }
    acc
}

fn var_expr(v: Var) -> Expr {
    match v.trig() {
        Some(t) => {
            let name = match t.kind {
                TrigKind::Sin => "sin",
                TrigKind::Cos => "cos",
            };
            Expr::Func(name.to_owned(), Box::new(t.arg.to_expr()))
        }
        None => Expr::Sym(v.name().to_owned()),
    }
}

pub(crate) fn poly_to_expr(p: &Poly) -> Expr {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut fs = vec![Expr::Num(BigRational::from_integer(c.clone()))];
            fs.extend(m.factors().map(|(v, e)| Expr::pow(var_expr(v), e as i64)));
            Expr::mul(fs)
        })
        .collect();
    Expr::add(terms)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if num.is_zero() {
                return RatFunc::zero();
            }
            if self.den.is_one() {
                return RatFunc::unit_fix(num, Poly::one());
            }
            let g = gcd(&num, &self.den);
            return RatFunc::unit_fix(num.div_exact(&g).unwrap(), self.den.div_exact(&g).unwrap());
        }
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = &self.den * &d2;
        if g.is_one() {
            return RatFunc::unit_fix(num, den);
        }
        let h = gcd(&num, &g);
        RatFunc::unit_fix(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        if has_reducible_cos(&num) {
            RatFunc::normalized(num, den)
        } else {
            RatFunc::unit_fix(num, den)
        }
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function; use `checked_div` when the
    /// divisor is not known to be nonzero.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs)
            .expect("division by the zero function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}
