//! Sparse multivariate polynomials over the integers.
//!
//! Terms are kept sorted in descending graded-lex order with no zero
//! coefficients, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::var::Var;

/// Power product, sorted by variable with strictly positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(smallvec::smallvec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(a, ea) in &self.0 {
            if j < other.0.len() {
                let (b, eb) = other.0[j];
                match b.cmp(&a) {
                    Ordering::Less => return None,
                    Ordering::Equal => {
                        j += 1;
                        match ea.cmp(&eb) {
                            Ordering::Less => return None,
                            Ordering::Equal => continue,
                            Ordering::Greater => {
                                out.push((a, ea - eb));
                                continue;
                            }
                        }
                    }
                    Ordering::Greater => {}
                }
            }
            out.push((a, ea));
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(a, ea) in &self.0 {
            let eb = other.degree_in(a);
            if eb > 0 {
                out.push((a, ea.min(eb)));
            }
        }
        Monomial(out)
    }

    /// Removes `v` entirely, returning its exponent.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(w, ew)| {
                if w == v {
                    e = ew;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }

    /// Graded lex: total degree first, then the exponent of the smallest
    /// variable where the two differ.
    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.cmp_lex(other))
    }

    fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

fn sort_desc(terms: &mut [(Monomial, BigInt)]) {
    terms.sort_unstable_by(|a, b| b.0.cmp_grlex(&a.0));
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_i64(c: i64) -> Self {
        Poly::constant(BigInt::from(c))
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v, 1), BigInt::one())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().map(|(v, _)| v))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree_in(v))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_int(&self, c: &BigInt) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| {
                    debug_assert!((k % c).is_zero());
                    (m.clone(), k / c)
                })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, k)| (t.mul(m), k.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer gcd of all coefficients (positive; zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Flips the sign if needed so the leading coefficient is positive.
    pub fn unit_normal(self) -> Poly {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self,
        }
    }

    /// Coefficients as a polynomial in `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            let e = e as usize;
            if buckets.len() <= e {
                buckets.resize_with(e + 1, Vec::new);
            }
            buckets[e].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut terms| {
                sort_desc(&mut terms);
                Poly { terms }
            })
            .collect()
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(v, k as u32);
            terms.extend(c.terms.iter().map(|(t, x)| (t.mul(&m), x.clone())));
        }
        sort_desc(&mut terms);
        Poly { terms }
    }

    /// Formal partial derivative with respect to `v`.
    pub fn diff_var(&self, v: Var) -> Poly {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (e, rest) = m.split_off(v);
                (e > 0).then(|| (rest.mul(&Monomial::var(v, e - 1)), c * BigInt::from(e)))
            })
            .collect();
        sort_desc(&mut terms);
        Poly { terms }
    }

    /// `self / divisor` when the division is exact over the integers.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return self
                .terms
                .iter()
                .all(|(_, k)| (k % &c).is_zero())
                .then(|| self.div_int(&c));
        }
        if divisor.terms.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let q = m.div(dm)?;
                if !(c % dc).is_zero() {
                    return None;
                }
                terms.push((q, c / dc));
            }
            return Some(Poly { terms });
        }
        let (lm, lc) = divisor.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(lm)?;
            let (qc, r) = rc.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.push((qm, qc));
        }
        sort_desc(&mut quot);
        Some(Poly { terms: quot })
    }

    /// Evaluates with exact rationals.
    pub fn eval_rational<F>(&self, value: &F) -> Option<BigRational>
    where
        F: Fn(Var) -> Option<BigRational>,
    {
        let mut cache: HashMap<Var, BigRational> = HashMap::new();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, e) in m.factors() {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v)?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn eval_f64<F>(&self, value: &F) -> Option<f64>
    where
        F: Fn(Var) -> Option<f64>,
    {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = bigint_to_f64(c);
            for (v, e) in m.factors() {
                t *= value(v)?.powi(e as i32);
            }
            acc += t;
        }
        Some(acc)
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let signed = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match ma.cmp_grlex(mb) {
            Ordering::Greater => {
                out.push((ma.clone(), ca.clone()));
                i += 1;
            }
            Ordering::Less => {
                out.push((mb.clone(), signed(cb)));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((ma.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (m.clone(), signed(c))));
    Poly { terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Poly { terms }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -self.clone()
    }
}

// ---------------------------------------------------------------------------
// gcd

/// Greatest common divisor over Z[vars], normalised to a positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().unit_normal();
    }
    if b.is_zero() {
        return a.clone().unit_normal();
    }
    if a == b {
        return a.clone().unit_normal();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::constant(a.integer_content().gcd(&b.integer_content()));
    }
    if a.len() == 1 || b.len() == 1 {
        let m = a.monomial_content().gcd(&b.monomial_content());
        let c = a.integer_content().gcd(&b.integer_content());
        return Poly::monomial(m, c);
    }

    // Pull out monomial and integer contents; the rest has no monomial factor.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let ca = a.integer_content();
    let cb = b.integer_content();
    let cg = ca.gcd(&cb);
    let a1 = strip(a, &ma, &ca);
    let b1 = strip(b, &mb, &cb);

    let g = if a1.div_exact(&b1).is_some() {
        b1.clone()
    } else if b1.div_exact(&a1).is_some() {
        a1.clone()
    } else {
        gcd_primitive(&a1, &b1)
    };
    (&Poly::monomial(mg, cg) * &g).unit_normal()
}

fn strip(p: &Poly, m: &Monomial, c: &BigInt) -> Poly {
    let mut terms: Vec<_> = p
        .terms
        .iter()
        .map(|(t, k)| (t.div(m).unwrap(), k / c))
        .collect();
    sort_desc(&mut terms);
    Poly { terms }.unit_normal()
}

/// Gcd of two polynomials with unit integer content and no monomial factor.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument can only live in the content.
    if let Some(&x) = va.symmetric_difference(&vb).next() {
        let (with, without) = if a.contains_var(x) { (a, b) } else { (b, a) };
        let cont = content_in(with, x);
        return gcd(&cont, without);
    }
    // Main variable: lowest combined degree keeps the remainder sequence short.
    let x = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomial has a variable");
    let ac = a.coeffs_in(x);
    let bc = b.coeffs_in(x);
    let conta = gcd_list(&ac);
    let contb = gcd_list(&bc);
    let cont = gcd(&conta, &contb);
    let pa: Vec<Poly> = ac.iter().map(|c| c.div_exact(&conta).unwrap()).collect();
    let pb: Vec<Poly> = bc.iter().map(|c| c.div_exact(&contb).unwrap()).collect();
    if coprime_image(&pa, &pb) {
        return cont;
    }
    let g = univariate_prs_gcd(pa, pb);
    &cont * &Poly::from_coeffs_in(x, &g)
}

const IMAGE_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % IMAGE_PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) % IMAGE_PRIME
}

fn eval_mod(p: &Poly, point: &HashMap<Var, u64>) -> u64 {
    let prime = BigInt::from(IMAGE_PRIME);
    let mut acc = 0u64;
    for (m, c) in &p.terms {
        let c: u64 =
            num_traits::ToPrimitive::to_u64(&c.mod_floor(&prime)).expect("reduced below the prime");
        let t = m
            .factors()
            .fold(c, |t, (v, e)| mul_mod(t, pow_mod(point[&v], u64::from(e))));
        acc = (acc + t) % IMAGE_PRIME;
    }
    acc
}

fn univariate_gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let strip = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), IMAGE_PRIME - 2);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let q = mul_mod(*a.last().unwrap(), inv);
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + IMAGE_PRIME - mul_mod(q, bc)) % IMAGE_PRIME;
            }
            strip(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Proves that two polynomials primitive in the main variable are coprime
/// by finding a modular image whose gcd is constant. An evaluation keeping
/// both leading coefficients nonzero can only raise the gcd degree, so a
/// `false` result just means no proof was found.
fn coprime_image(a: &[Poly], b: &[Poly]) -> bool {
    let vars: BTreeSet<Var> = a.iter().chain(b).flat_map(Poly::vars).collect();
    let mut state = 0x5eed;
    for _ in 0..3 {
        let point: HashMap<Var, u64> = vars.iter().map(|&v| (v, splitmix(&mut state))).collect();
        let ia: Vec<u64> = a.iter().map(|c| eval_mod(c, &point)).collect();
        let ib: Vec<u64> = b.iter().map(|c| eval_mod(c, &point)).collect();
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            continue;
        }
        return univariate_gcd_degree_mod(ia, ib) == 0;
    }
    false
}

fn gcd_list(polys: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Content of `p` regarded as a polynomial in `x`.
pub fn content_in(p: &Poly, x: Var) -> Poly {
    gcd_list(&p.coeffs_in(x))
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        trim(&mut r);
    }
    r
}

fn primitive_part(v: &[Poly]) -> Vec<Poly> {
    let c = gcd_list(v);
    let sign_flip = v
        .last()
        .and_then(|l| l.leading())
        .is_some_and(|(_, k)| k.is_negative());
    v.iter()
        .map(|p| {
            let q = p.div_exact(&c).unwrap();
            if sign_flip {
                -q
            } else {
                q
            }
        })
        .collect()
}

/// Primitive remainder sequence over R[x] where both inputs are primitive.
fn univariate_prs_gcd(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return primitive_part(&a);
        }
        if b.len() == 1 {
            return vec![Poly::one()];
        }
        let r = prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(&r) };
    }
}

/// Square-free decomposition `p = unit * prod f_i^i` (used for printing).
/// Returns the integer unit and the list of `(factor, multiplicity)`.
pub fn squarefree(p: &Poly) -> (BigInt, Vec<(Poly, u32)>) {
    let mut out = Vec::new();
    if p.is_zero() {
        return (BigInt::zero(), out);
    }
    let mut unit = p.integer_content();
    if p.leading().unwrap().1.is_negative() {
        unit = -unit;
    }
    let mut rest = p.div_int(&unit);
    let m = rest.monomial_content();
    for (v, e) in m.factors() {
        out.push((Poly::var(v), e));
    }
    rest = rest.div_exact(&Poly::monomial(m, BigInt::one())).unwrap();
    squarefree_rec(&rest, &mut out);
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (f, e) in out {
        if f.is_one() {
            continue;
        }
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 += e,
            None => merged.push((f, e)),
        }
    }
    merged.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.len().cmp(&y.0.len())));
    (unit, merged)
}

fn squarefree_rec(p: &Poly, out: &mut Vec<(Poly, u32)>) {
    if p.is_constant() {
        return;
    }
    let x = *p.vars().iter().next().unwrap();
    let cont = content_in(p, x);
    let pp = p.div_exact(&cont).unwrap().unit_normal();
    squarefree_rec(&cont, out);
    // Yun's algorithm in x.
    let dp = pp.diff_var(x);
    let g = gcd(&pp, &dp);
    let mut b = pp.div_exact(&g).unwrap();
    let mut c = &dp.div_exact(&g).unwrap() - &b.diff_var(x);
    let mut i = 1;
    while !b.is_constant() {
        let d = gcd(&b, &c);
        if !d.is_constant() {
            out.push((d.clone().unit_normal(), i));
        }
        b = b.div_exact(&d).unwrap();
        c = &c.div_exact(&d).unwrap() - &b.diff_var(x);
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Poly {
        Poly::var(Var::symbol(name))
    }

    fn n(k: i64) -> Poly {
        Poly::from_i64(k)
    }

    #[test]
    fn ring_arithmetic() {
        let x = v("x");
        let y = v("y");
        let s = &x + &y;
        let d = &x - &y;
        let prod = &s * &d;
        assert_eq!(prod, &(&x * &x) - &(&y * &y));
        assert!((&s - &s).is_zero());
        assert_eq!(s.pow(2), &(&(&x * &x) + &(&n(2) * &(&x * &y))) + &(&y * &y));
    }

    #[test]
    fn modular_image_proves_coprimality() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let f = &(&x * &y) + &(&z.pow(3) + &n(2));
        let g = &(&x.pow(2) * &z) - &(&y + &n(1));
        let h = &x + &(&y * &z);
        assert!(coprime_image(
            &f.coeffs_in(Var::symbol("x")),
            &g.coeffs_in(Var::symbol("x"))
        ));
        assert!(gcd(&f, &g).is_one());
        assert_eq!(gcd(&(&f * &h), &(&g * &h)), h);
        assert!(!coprime_image(
            &(&f * &h).coeffs_in(Var::symbol("x")),
            &(&g * &h).coeffs_in(Var::symbol("x"))
        ));
    }

    #[test]
    fn exact_division() {
        let x = v("x");
        let y = v("y");
        let f = &(&x * &x) - &(&y * &y);
        let g = &x + &y;
        assert_eq!(f.div_exact(&g).unwrap(), &x - &y);
        assert!(f.div_exact(&(&x + &n(1))).is_none());
        assert!(n(3).div_exact(&n(2)).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let b = v("b");
        let x = v("x");
        let a = v("a");
        let d = &(&b * &b) + &(&x * &x);
        let p = &(&d * &d) * &(&a + &x);
        let q = &(&d * &(&a - &x)) * &n(6);
        assert_eq!(gcd(&p, &q), d);
        assert_eq!(
            gcd(&p.scale(&BigInt::from(4)), &q),
            d.scale(&BigInt::from(2))
        );
        assert!(gcd(&(&a + &x), &(&a - &x)).is_one());
    }

    #[test]
    fn gcd_with_variable_only_in_one_side() {
        let a = v("a");
        let x = v("x");
        let y = v("y");
        let p = &(&x + &n(1)) * &(&y + &a);
        let q = &x + &n(1);
        assert_eq!(gcd(&p, &q), q);
    }

    #[test]
    fn squarefree_finds_powers() {
        let b = v("b");
        let x = v("x");
        let d = &(&b * &b) + &(&x * &x);
        let p = d.pow(3).scale(&BigInt::from(-3));
        let (unit, fs) = squarefree(&p);
        assert_eq!(unit, BigInt::from(-3));
        assert_eq!(fs, vec![(d, 3)]);
    }
}
