//! Generic rank of a rational-function matrix: exact evaluation at random
//! rational points, then symbolic confirmation through minors.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ClassifyError;
use crate::curvature::CurvatureBundle;
use crate::expr::{RatFunc, TrigKind, Var};
use crate::linalg::{self, Matrix};

const SAMPLES: usize = 5;
const MAX_ATTEMPTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: RatFunc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// Exact rank at each sample point.
    pub sampled: Vec<usize>,
    /// A nonvanishing `rank × rank` minor; `None` for rank 0.
    pub minor: Option<Minor>,
    /// Number of `(rank+1) × (rank+1)` minors shown to vanish.
    pub vanishing_minors: usize,
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let den: i64 = rng.gen_range(1..=10);
    let num: i64 = rng.gen_range(2 * den..=100 * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A point on which every variable has a rational value. A trig pair is
/// placed on the unit circle through the rational parametrization
/// `(2t/(1+t²), (1-t²)/(1+t²))`.
fn sample_point(vars: &BTreeSet<Var>, rng: &mut ChaCha8Rng) -> HashMap<Var, BigRational> {
    let mut point = HashMap::new();
    for &v in vars {
        if point.contains_key(&v) {
            continue;
        }
        match v.trig() {
            None => {
                point.insert(v, random_rational(rng));
            }
            Some(info) => {
                let t = random_rational(rng);
                let one = BigRational::one();
                let t2 = &t * &t;
                let s = (&t + &t) / (&one + &t2);
                let c = (&one - &t2) / (&one + &t2);
                let (sin, cos) = match info.kind {
                    TrigKind::Sin => (v, info.partner()),
                    TrigKind::Cos => (info.partner(), v),
                };
                point.insert(sin, s);
                point.insert(cos, c);
            }
        }
    }
    point
}

fn evaluate(m: &Matrix, point: &HashMap<Var, BigRational>) -> Option<Vec<Vec<BigRational>>> {
    let lookup = |v: Var| point.get(&v).cloned();
    m.iter()
        .map(|row| row.iter().map(|e| e.eval_rational(&lookup)).collect())
        .collect()
}

fn numeric_rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[r][col];
            for c in col..cols {
                let t = &f * &a[r][c];
                a[i][c] -= t;
            }
        }
        r += 1;
    }
    r
}

fn minor(m: &Matrix, rows: &[usize], cols: &[usize]) -> RatFunc {
    let sub: Matrix = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
        .collect();
    linalg::determinant(&sub)
}

fn minors_of(m: &Matrix, k: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> + '_ {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..rows)
        .combinations(k)
        .flat_map(move |r| (0..cols).combinations(k).map(move |c| (r.clone(), c)))
}

/// Rank over the field of rational functions, with evidence.
pub fn matrix_rank(m: &Matrix, seed: u64) -> Result<RankReport, ClassifyError> {
    let vars: BTreeSet<Var> = m.iter().flatten().flat_map(RatFunc::vars).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = Vec::with_capacity(SAMPLES);
    let mut attempts = 0;
    while sampled.len() < SAMPLES {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(ClassifyError::Sampling(MAX_ATTEMPTS));
        }
        if let Some(values) = evaluate(m, &sample_point(&vars, &mut rng)) {
            sampled.push(numeric_rank(values));
        }
    }
    let size = m.len().min(m.first().map_or(0, Vec::len));
    let mut r = sampled.iter().copied().max().unwrap_or(0);
    loop {
        let witness = if r == 0 {
            None
        } else {
            let found = minors_of(m, r).find_map(|(rows, cols)| {
                let value = minor(m, &rows, &cols);
                (!value.is_zero()).then_some(Minor { rows, cols, value })
            });
            match found {
                Some(w) => Some(w),
                None => {
                    r -= 1;
                    continue;
                }
            }
        };
        if r == size {
            return Ok(RankReport {
                rank: r,
                sampled,
                minor: witness,
                vanishing_minors: 0,
            });
        }
        let mut checked = 0;
        let mut bigger = false;
        for (rows, cols) in minors_of(m, r + 1) {
            checked += 1;
            if !minor(m, &rows, &cols).is_zero() {
                bigger = true;
                break;
            }
        }
        if bigger {
            r += 1;
            continue;
        }
        return Ok(RankReport {
            rank: r,
            sampled,
            minor: witness,
            vanishing_minors: checked,
        });
    }
}

fn ricci_minus(bundle: &CurvatureBundle, alpha: &RatFunc) -> Matrix {
    let n = bundle.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let g = bundle.metric().g(i, j);
                    let r = bundle.ricci().get(&[i, j]);
                    if g.is_zero() || alpha.is_zero() {
                        r.clone()
                    } else {
                        r - &(alpha * g)
                    }
                })
                .collect()
        })
        .collect()
}

/// Rank of `Ric - α g`.
pub fn quasi_einstein_rank(
    bundle: &CurvatureBundle,
    alpha: &RatFunc,
    seed: u64,
) -> Result<RankReport, ClassifyError> {
    matrix_rank(&ricci_minus(bundle, alpha), seed)
}

/// Rational-function roots of `det(Ric - α g)` as a polynomial in `α`.
///
/// Candidates are the diagonal entries of the Ricci operator, zero, and the
/// roots of the factors of degree one in `α` of the square-free
/// decomposition; each is kept only if the determinant vanishes there.
pub fn quasi_einstein_candidates(bundle: &CurvatureBundle) -> Vec<RatFunc> {
    let n = bundle.dim();
    let alpha = Var::symbol("α");
    let det = linalg::determinant(&ricci_minus(bundle, &RatFunc::from_var(alpha)));
    let mut candidates = vec![RatFunc::zero()];
    for i in 0..n {
        let jii: RatFunc = (0..n)
            .filter(|&d| !bundle.metric().inv(i, d).is_zero())
            .map(|d| bundle.metric().inv(i, d) * bundle.ricci().get(&[d, i]))
            .sum();
        candidates.push(jii);
    }
    let (_, factors) = crate::expr::poly::squarefree(det.numer());
    for (f, _) in factors {
        let c = f.coeffs_in(alpha);
        if c.len() == 2 {
            if let Some(root) = RatFunc::from_parts(-c[0].clone(), c[1].clone()) {
                candidates.push(root);
            }
        }
    }
    let mut roots: Vec<RatFunc> = Vec::new();
    for c in candidates {
        if roots.contains(&c) {
            continue;
        }
        if linalg::determinant(&ricci_minus(bundle, &c)).is_zero() {
            roots.push(c);
        }
    }
    roots
}
