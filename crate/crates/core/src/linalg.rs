//! Exact linear algebra over the rational-function field.
//!
//! Pivots are chosen among entries that are symbolically nonzero, so every
//! conclusion (rank, inconsistency) holds identically and not just at a
//! sample point.

use crate::expr::RatFunc;

pub type Matrix = Vec<Vec<RatFunc>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| RatFunc::from_int(i64::from(i == j)))
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero() && !b[k][j].is_zero())
                        .map(|k| &row[k] * &b[k][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn determinant(m: &Matrix) -> RatFunc {
    let n = m.len();
    let mut a = m.clone();
    let mut det = RatFunc::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return RatFunc::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = &det * &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                if !a[col][c].is_zero() {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    det
}

/// Gauss-Jordan inverse; `None` for a singular matrix.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        inv.swap(p, col);
        let pivot_inv = a[col][col].inv()?;
        for c in 0..n {
            a[col][c] = &a[col][c] * &pivot_inv;
            inv[col][c] = &inv[col][c] * &pivot_inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                if !a[col][c].is_zero() {
                    a[r][c] = &a[r][c] - &(&f * &a[col][c]);
                }
                if !inv[col][c].is_zero() {
                    inv[r][c] = &inv[r][c] - &(&f * &inv[col][c]);
                }
            }
        }
    }
    Some(inv)
}

/// Rank by symbolic elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][col].clone();
        for i in r + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &pivot;
            for c in col..cols {
                if !a[r][c].is_zero() {
                    a[i][c] = &a[i][c] - &(&f * &a[r][c]);
                }
            }
        }
        r += 1;
    }
    r
}

/// One linear equation `coeffs . x = rhs`, tagged with the caller's label.
#[derive(Clone, Debug)]
pub struct Equation<L> {
    pub label: L,
    pub coeffs: Vec<RatFunc>,
    pub rhs: RatFunc,
}

/// A combination of input equations whose left side cancels while the right
/// side does not, proving the system has no solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency<L> {
    pub combination: Vec<(L, RatFunc)>,
    pub residual: RatFunc,
}

#[derive(Clone, Debug)]
pub enum LinearSolution<L> {
    /// A solution with every free unknown set to zero.
    Solved {
        values: Vec<RatFunc>,
        free: Vec<usize>,
    },
    Inconsistent(Inconsistency<L>),
}

struct PivotRow {
    col: usize,
    coeffs: Vec<RatFunc>,
    rhs: RatFunc,
    combo: Vec<(usize, RatFunc)>,
}

fn combine(acc: &mut Vec<(usize, RatFunc)>, other: &[(usize, RatFunc)], f: &RatFunc) {
    for (i, c) in other {
        let t = c * f;
        match acc.iter_mut().find(|(j, _)| j == i) {
            Some((_, v)) => *v = &*v - &t,
            None => acc.push((*i, -t)),
        }
    }
    acc.retain(|(_, v)| !v.is_zero());
}

/// Incremental exact elimination. Equations are folded in one at a time
/// against the current pivot rows; a row that reduces to `0 = r` with `r`
/// nonzero ends the process with a certificate.
pub fn solve<L: Clone>(unknowns: usize, equations: &[Equation<L>]) -> LinearSolution<L> {
    let mut pivots: Vec<PivotRow> = Vec::new();
    for (k, eq) in equations.iter().enumerate() {
        let mut coeffs = eq.coeffs.clone();
        let mut rhs = eq.rhs.clone();
        let mut combo = vec![(k, RatFunc::one())];
        for p in &pivots {
            if coeffs[p.col].is_zero() {
                continue;
            }
            let f = coeffs[p.col].clone();
            for c in 0..unknowns {
                if !p.coeffs[c].is_zero() {
                    coeffs[c] = &coeffs[c] - &(&f * &p.coeffs[c]);
                }
            }
            rhs = &rhs - &(&f * &p.rhs);
            combine(&mut combo, &p.combo, &f);
        }
        match (0..unknowns).find(|&c| !coeffs[c].is_zero()) {
            None if rhs.is_zero() => {}
            None => {
                return LinearSolution::Inconsistent(Inconsistency {
                    combination: combo
                        .into_iter()
                        .map(|(i, c)| (equations[i].label.clone(), c))
                        .collect(),
                    residual: rhs,
                })
            }
            Some(col) => {
                let inv = coeffs[col].inv().expect("pivot is nonzero");
                let coeffs: Vec<RatFunc> = coeffs.iter().map(|c| c * &inv).collect();
                let rhs = &rhs * &inv;
                let combo: Vec<(usize, RatFunc)> =
                    combo.iter().map(|(i, c)| (*i, c * &inv)).collect();
                for p in pivots.iter_mut() {
                    if p.coeffs[col].is_zero() {
                        continue;
                    }
                    let f = p.coeffs[col].clone();
                    for c in 0..unknowns {
                        if !coeffs[c].is_zero() {
                            p.coeffs[c] = &p.coeffs[c] - &(&f * &coeffs[c]);
                        }
                    }
                    p.rhs = &p.rhs - &(&f * &rhs);
                    combine(&mut p.combo, &combo, &f);
                }
                pivots.push(PivotRow {
                    col,
                    coeffs,
                    rhs,
                    combo,
                });
            }
        }
    }
    let mut values = vec![RatFunc::zero(); unknowns];
    for p in &pivots {
        values[p.col] = p.rhs.clone();
    }
    let free = (0..unknowns)
        .filter(|c| !pivots.iter().any(|p| p.col == *c))
        .collect();
    LinearSolution::Solved { values, free }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Var;

    fn x() -> RatFunc {
        RatFunc::from_var(Var::symbol("x"))
    }

    fn int(k: i64) -> RatFunc {
        RatFunc::from_int(k)
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = vec![vec![x(), int(1)], vec![int(1), int(2)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert_eq!(determinant(&m), &x().scale(2) - &int(1));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = vec![vec![x(), x()], vec![int(1), int(1)]];
        assert!(inverse(&m).is_none());
        assert_eq!(rank(&m), 1);
        assert!(determinant(&m).is_zero());
    }

    #[test]
    fn solve_reports_certificate() {
        let eqs = vec![
            Equation {
                label: "a",
                coeffs: vec![int(1), int(1)],
                rhs: int(1),
            },
            Equation {
                label: "b",
                coeffs: vec![int(2), int(2)],
                rhs: x(),
            },
        ];
        match solve(2, &eqs) {
            LinearSolution::Inconsistent(c) => {
                assert_eq!(c.residual, &x() - &int(2));
                assert_eq!(c.combination.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_sets_free_unknowns_to_zero() {
        let eqs = vec![Equation {
            label: 0,
            coeffs: vec![int(1), x()],
            rhs: x(),
        }];
        match solve(2, &eqs) {
            LinearSolution::Solved { values, free } => {
                assert_eq!(values, vec![x(), int(0)]);
                assert_eq!(free, vec![1]);
            }
            other => panic!("{other:?}"),
        }
    }
}
