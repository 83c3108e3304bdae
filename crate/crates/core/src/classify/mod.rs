//! Structure predicates: pseudosymmetry, quasi-Einstein rank, Einstein
//! levels, Roter decompositions, Codazzi and cyclic-parallel Ricci tensors,
//! compatibility and recurrent curvature forms.
//!
//! Every negative answer carries a witness component and every positive
//! answer that involves a scalar field carries the field itself, verified
//! component by component.

mod rank;
pub mod report;

use std::fmt;

use thiserror::Error;

use crate::algebra::{kulkarni_nomizu, AlgebraError, EndomorphismField};
use crate::catalog::CatalogError;
use crate::curvature::{Curvature, CurvatureBundle, CurvatureError};
use crate::expr::RatFunc;
use crate::linalg::{self, Equation, Inconsistency, LinearSolution};
use crate::tensor::{format_index, multi_indices, TensorField};

pub use rank::{matrix_rank, quasi_einstein_candidates, quasi_einstein_rank, Minor, RankReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{op}: operands have different shapes")]
    Shape { op: &'static str },
    #[error("{op}: expected {expected}")]
    Valence {
        op: &'static str,
        expected: &'static str,
    },
    #[error("{op}: Z is not symmetric")]
    NotSymmetric { op: &'static str },
    #[error("{op}: the tensor vanishes identically")]
    Degenerate { op: &'static str },
    #[error("Einstein level must be 2, 3 or 4, got {0}")]
    Level(usize),
    #[error("no pole-free sample point after {0} attempts")]
    Sampling(usize),
    #[error("one-form has {got} components, the chart has dimension {n}")]
    OneForm { got: usize, n: usize },
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// A component that keeps a predicate from holding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub index: Vec<usize>,
    pub value: RatFunc,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] = {}", format_index(&self.index), self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails(Witness),
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }
}

/// First component of `t` that is not identically zero.
pub fn first_nonzero(t: &TensorField) -> Check {
    match t.nonzero().into_iter().next() {
        None => Check::Holds,
        Some((index, value)) => Check::Fails(Witness {
            index,
            value: value.clone(),
        }),
    }
}

/// Outcome of comparing `E·F` with `Q(Z,F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proportionality {
    Factor(RatFunc),
    /// The left tensor vanishes identically.
    BothZero,
    NotProportional(Witness),
}

fn same_shape(op: &'static str, a: &TensorField, b: &TensorField) -> Result<(), ClassifyError> {
    if a.dim() != b.dim() || a.rank() != b.rank() || a.is_mixed() != b.is_mixed() {
        Err(ClassifyError::Shape { op })
    } else {
        Ok(())
    }
}

/// Finds `f` with `edotf = f * qzf`. The ratio is read off at the first index
/// where both tensors are nonzero and then checked at every component.
pub fn pseudosymmetry_factor(
    edotf: &TensorField,
    qzf: &TensorField,
) -> Result<Proportionality, ClassifyError> {
    same_shape("pseudosymmetry_factor", edotf, qzf)?;
    if edotf.is_zero() {
        return Ok(Proportionality::BothZero);
    }
    let pair = edotf
        .indices()
        .map(|i| (edotf.get(&i), qzf.get(&i)))
        .find(|(e, q)| !e.is_zero() && !q.is_zero());
    let Some((e, q)) = pair else {
        let (index, value) = edotf
            .nonzero()
            .into_iter()
            .next()
            .expect("edotf is nonzero");
        return Ok(Proportionality::NotProportional(Witness {
            index,
            value: value.clone(),
        }));
    };
    let f = e / q;
    let residual = edotf.sub(&qzf.scale(&f));
    Ok(match first_nonzero(&residual) {
        Check::Holds => Proportionality::Factor(f),
        Check::Fails(w) => Proportionality::NotProportional(w),
    })
}

/// `E·F = 0`, with the first nonzero component as witness otherwise.
pub fn semisymmetry_check(edotf: &TensorField) -> Check {
    first_nonzero(edotf)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EinsteinOutcome {
    /// `λ` in the order of the defining identity, e.g. `[λ1, λ2]` for level 2.
    Satisfied(Vec<RatFunc>),
    NotSatisfied(Inconsistency<Vec<usize>>),
}

fn component_equations(
    terms: &[&TensorField],
    target: &TensorField,
    negate_target: bool,
) -> Vec<Equation<Vec<usize>>> {
    target
        .indices()
        .filter_map(|idx| {
            let coeffs: Vec<RatFunc> = terms.iter().map(|t| t.get(&idx).clone()).collect();
            let rhs = if negate_target {
                -target.get(&idx)
            } else {
                target.get(&idx).clone()
            };
            if rhs.is_zero() && coeffs.iter().all(RatFunc::is_zero) {
                None
            } else {
                Some(Equation {
                    label: idx,
                    coeffs,
                    rhs,
                })
            }
        })
        .collect()
}

/// Solves `Ric^m + λ Ric^(m-1) + ... + λ' g = 0` for `m = level`.
pub fn einstein_level(
    bundle: &CurvatureBundle,
    level: usize,
) -> Result<EinsteinOutcome, ClassifyError> {
    if !(2..=4).contains(&level) {
        return Err(ClassifyError::Level(level));
    }
    let top = bundle.ricci_power(level)?;
    let mut terms: Vec<&TensorField> = Vec::with_capacity(level);
    for k in (1..level).rev() {
        terms.push(bundle.ricci_power(k)?);
    }
    terms.push(bundle.g());
    let eqs = component_equations(&terms, top, true);
    Ok(match linalg::solve(terms.len(), &eqs) {
        LinearSolution::Inconsistent(c) => EinsteinOutcome::NotSatisfied(c),
        LinearSolution::Solved { values, .. } => {
            let mut residual = top.clone();
            for (t, l) in terms.iter().zip(&values) {
                residual = residual.add(&t.scale(l));
            }
            assert!(
                residual.is_zero(),
                "solution of the full system must satisfy it"
            );
            EinsteinOutcome::Satisfied(values)
        }
    })
}

/// Smallest level in `2..=4` that holds, with its coefficients.
pub fn minimal_einstein_level(
    bundle: &CurvatureBundle,
) -> Result<Option<(usize, Vec<RatFunc>)>, ClassifyError> {
    for level in 2..=4 {
        if let EinsteinOutcome::Satisfied(l) = einstein_level(bundle, level)? {
            return Ok(Some((level, l)));
        }
    }
    Ok(None)
}

pub const ROTER_COEFFICIENTS: [&str; 6] = ["mu11", "mu12", "mu13", "mu22", "mu23", "mu33"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoterOutcome {
    /// Coefficients named as in [`ROTER_COEFFICIENTS`]; the plain Roter form
    /// reports zeros for the coefficients it does not use.
    Solved(Vec<RatFunc>),
    NotSolvable(Inconsistency<Vec<usize>>),
}

impl RoterOutcome {
    pub fn is_solvable(&self) -> bool {
        matches!(self, RoterOutcome::Solved(_))
    }
}

/// Index tuple of the equation that closed an inconsistency certificate.
pub fn certificate_witness(c: &Inconsistency<Vec<usize>>) -> Witness {
    Witness {
        index: c
            .combination
            .last()
            .map(|(i, _)| i.clone())
            .unwrap_or_default(),
        value: c.residual.clone(),
    }
}

/// Writes `R` in the span of Kulkarni-Nomizu products of `g`, `Ric` and,
/// when `generalized`, `Ric²`.
///
/// Unknowns are eliminated from the simplest product upward, so a space form
/// comes out as a pure multiple of `g∧g`.
pub fn roter_solve(
    bundle: &CurvatureBundle,
    generalized: bool,
) -> Result<RoterOutcome, ClassifyError> {
    let g = bundle.g();
    let ric = bundle.ricci();
    let ric2 = bundle.ricci_power(2)?;
    let gg = bundle.g_wedge_g().clone();
    let gric = bundle.g_wedge_ric().clone();
    let ricric = kulkarni_nomizu(ric, ric)?;
    // columns in elimination order, paired with their slot in ROTER_COEFFICIENTS
    let mut columns: Vec<(usize, TensorField)> = vec![(5, gg), (4, gric), (3, ricric)];
    if generalized {
        columns.push((2, kulkarni_nomizu(g, ric2)?));
        columns.push((1, kulkarni_nomizu(ric, ric2)?));
        columns.push((0, kulkarni_nomizu(ric2, ric2)?));
    }
    let terms: Vec<&TensorField> = columns.iter().map(|(_, t)| t).collect();
    let eqs = component_equations(&terms, bundle.riemann(), false);
    Ok(match linalg::solve(terms.len(), &eqs) {
        LinearSolution::Inconsistent(c) => RoterOutcome::NotSolvable(c),
        LinearSolution::Solved { values, .. } => {
            let mut mu = vec![RatFunc::zero(); 6];
            let mut residual = bundle.riemann().clone();
            for ((slot, t), v) in columns.iter().zip(values) {
                residual = residual.sub(&t.scale(&v));
                mu[*slot] = v;
            }
            assert!(
                residual.is_zero(),
                "solution of the full system must satisfy it"
            );
            RoterOutcome::Solved(mu)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RicciDerivativeChecks {
    /// `(∇_i Ric)_{jk} = (∇_j Ric)_{ik}`.
    pub codazzi: Check,
    /// `(∇_i Ric)_{jk} + (∇_j Ric)_{ki} + (∇_k Ric)_{ij} = 0`.
    pub cyclic_parallel: Check,
}

pub fn ricci_codazzi_cyclic(
    bundle: &CurvatureBundle,
) -> Result<RicciDerivativeChecks, ClassifyError> {
    let d = bundle.nabla(Curvature::Ricci)?;
    let n = bundle.dim();
    let codazzi = TensorField::from_fn(n, 3, "codazzi", |i| {
        d.get(&[i[0], i[1], i[2]]) - d.get(&[i[1], i[0], i[2]])
    });
    let cyclic = TensorField::from_fn(n, 3, "cyclic", |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        &(d.get(&[a, b, c]) + d.get(&[b, c, a])) + d.get(&[c, a, b])
    });
    Ok(RicciDerivativeChecks {
        codazzi: first_nonzero(&codazzi),
        cyclic_parallel: first_nonzero(&cyclic),
    })
}

/// Cyclic sum over `(Y1, Y2, Y3)` of `T(𝒵Y1, U, Y2, Y3)`, indexed
/// `(Y1, U, Y2, Y3)`.
pub fn compatibility_tensor(
    bundle: &CurvatureBundle,
    z: &TensorField,
    t: &TensorField,
) -> Result<TensorField, ClassifyError> {
    const OP: &str = "compatibility_check";
    if z.is_mixed() || z.rank() != 2 || t.is_mixed() || t.rank() != 4 {
        return Err(ClassifyError::Valence {
            op: OP,
            expected: "a (0,2) tensor Z and a (0,4) tensor T",
        });
    }
    if z.dim() != bundle.dim() || t.dim() != bundle.dim() {
        return Err(ClassifyError::Shape { op: OP });
    }
    if !crate::curvature::is_symmetric2(z) {
        return Err(ClassifyError::NotSymmetric { op: OP });
    }
    let zop = EndomorphismField::raise(z, bundle.metric())?;
    let n = bundle.dim();
    Ok(TensorField::from_fn(n, 4, "compat", |i| {
        let (y1, u, y2, y3) = (i[0], i[1], i[2], i[3]);
        let mut acc = RatFunc::zero();
        for (a, b, c) in [(y1, y2, y3), (y2, y3, y1), (y3, y1, y2)] {
            for alpha in 0..n {
                let za = zop.apply(alpha, &[a]);
                let tv = t.get(&[alpha, u, b, c]);
                if !za.is_zero() && !tv.is_zero() {
                    acc = &acc + &(za * tv);
                }
            }
        }
        acc
    }))
}

/// Whether `Z` is `T`-compatible.
pub fn compatibility_check(
    bundle: &CurvatureBundle,
    z: &TensorField,
    t: &TensorField,
) -> Result<Check, ClassifyError> {
    Ok(first_nonzero(&compatibility_tensor(bundle, z, t)?))
}

/// Covariant components of a one-form.
pub type OneFormField = Vec<RatFunc>;

fn cyclic_nabla(d: &TensorField, i: &[usize]) -> RatFunc {
    let (y1, y2, y3, u, y) = (i[0], i[1], i[2], i[3], i[4]);
    let t1 = d.get(&[y1, y2, y3, u, y]);
    let t2 = d.get(&[y2, y3, y1, u, y]);
    let t3 = d.get(&[y3, y1, y2, u, y]);
    &(t1 + t2) + t3
}

fn cyclic_terms(e: &TensorField, i: &[usize]) -> [(usize, RatFunc); 3] {
    let (y1, y2, y3, u, y) = (i[0], i[1], i[2], i[3], i[4]);
    [
        (y1, e.get(&[y2, y3, u, y]).clone()),
        (y2, e.get(&[y3, y1, u, y]).clone()),
        (y3, e.get(&[y1, y2, u, y]).clone()),
    ]
}

fn curvature_and_derivative(
    bundle: &CurvatureBundle,
    which: Curvature,
) -> Result<(&TensorField, &TensorField), ClassifyError> {
    let e = bundle.tensor(which)?;
    if e.rank() != 4 {
        return Err(ClassifyError::Valence {
            op: "recurrent_two_forms",
            expected: "a (0,4) curvature tensor",
        });
    }
    Ok((e, bundle.nabla(which)?))
}

/// Difference of the two sides of the recurrence identity, indexed
/// `(Y1, Y2, Y3, U, Y)`.
pub fn recurrence_residual(
    bundle: &CurvatureBundle,
    which: Curvature,
    sigma: &[RatFunc],
) -> Result<TensorField, ClassifyError> {
    let n = bundle.dim();
    if sigma.len() != n {
        return Err(ClassifyError::OneForm {
            got: sigma.len(),
            n,
        });
    }
    let (e, d) = curvature_and_derivative(bundle, which)?;
    Ok(TensorField::from_fn(n, 5, "recurrence", |i| {
        let mut acc = cyclic_nabla(d, i);
        for (k, ev) in cyclic_terms(e, i) {
            if !sigma[k].is_zero() && !ev.is_zero() {
                acc = &acc - &(&sigma[k] * &ev);
            }
        }
        acc
    }))
}

pub fn recurrent_two_forms(
    bundle: &CurvatureBundle,
    which: Curvature,
    sigma: &[RatFunc],
) -> Result<Check, ClassifyError> {
    Ok(first_nonzero(&recurrence_residual(bundle, which, sigma)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecurrenceOutcome {
    Recurrent(OneFormField),
    NotRecurrent(Inconsistency<Vec<usize>>),
}

/// Recovers `σ` from the recurrence identity. Equations with the fewest
/// unknowns are eliminated first.
pub fn solve_recurrence_form(
    bundle: &CurvatureBundle,
    which: Curvature,
) -> Result<RecurrenceOutcome, ClassifyError> {
    let n = bundle.dim();
    let (e, d) = curvature_and_derivative(bundle, which)?;
    if e.is_zero() {
        return Err(ClassifyError::Degenerate {
            op: "solve_recurrence_form",
        });
    }
    let mut eqs: Vec<Equation<Vec<usize>>> = multi_indices(n, 5)
        .filter_map(|i| {
            let mut coeffs = vec![RatFunc::zero(); n];
            for (k, ev) in cyclic_terms(e, &i) {
                coeffs[k] = &coeffs[k] + &ev;
            }
            let rhs = cyclic_nabla(d, &i);
            if rhs.is_zero() && coeffs.iter().all(RatFunc::is_zero) {
                None
            } else {
                Some(Equation {
                    label: i,
                    coeffs,
                    rhs,
                })
            }
        })
        .collect();
    eqs.sort_by_key(|eq| eq.coeffs.iter().filter(|c| !c.is_zero()).count());
    Ok(match linalg::solve(n, &eqs) {
        LinearSolution::Inconsistent(c) => RecurrenceOutcome::NotRecurrent(c),
        LinearSolution::Solved { values, .. } => {
            assert!(
                recurrent_two_forms(bundle, which, &values)?.holds(),
                "solution of the full system must satisfy it"
            );
            RecurrenceOutcome::Recurrent(values)
        }
    })
}
