//! Charts, metrics and connections.
//!
//! Christoffel coefficients are stored as `gamma[a][i][j]`, the `∂_a`
//! component of `∇_{∂_i} ∂_j`; the first lower index is the direction of
//! differentiation.

pub mod manifest;

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{parse, Expr, ExprError, FunctionRegistry, RatFunc, SymbolScope, Var};
use crate::linalg;
use crate::tensor::TensorField;

pub use manifest::{parse_manifest, ConnectionChoice, Manifest, ManifestError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("metric is not symmetric at [{0},{1}]")]
    Asymmetric(usize, usize),
    #[error("metric is degenerate (det g is identically zero)")]
    Degenerate,
    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Clone)]
pub struct Chart {
    coords: Vec<String>,
    params: Vec<String>,
    registry: FunctionRegistry,
}

impl Chart {
    pub fn new<S: AsRef<str>>(coords: &[S], params: &[S]) -> Result<Chart, GeometryError> {
        let coords: Vec<String> = coords
            .iter()
            .map(|s| s.as_ref().trim().to_owned())
            .collect();
        let params: Vec<String> = params
            .iter()
            .map(|s| s.as_ref().trim().to_owned())
            .collect();
        if coords.len() < 2 {
            return Err(GeometryError::InvalidChart(format!(
                "dimension must be at least 2, got {}",
                coords.len()
            )));
        }
        let registry = FunctionRegistry::standard();
        let mut seen = std::collections::HashSet::new();
        for name in coords.iter().chain(params.iter()) {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(GeometryError::InvalidChart(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if registry.contains(name) {
                return Err(GeometryError::InvalidChart(format!(
                    "`{name}` is a function name"
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(GeometryError::InvalidChart(format!(
                    "`{name}` is declared twice"
                )));
            }
        }
        Ok(Chart {
            coords,
            params,
            registry,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn registry(&self) -> &FunctionRegistry {
        &self.registry
    }

    pub fn coord_var(&self, i: usize) -> Var {
        Var::symbol(&self.coords[i])
    }

    pub fn parse(&self, text: &str) -> Result<Expr, ExprError> {
        parse(text, self)
    }

    /// Parses and canonicalizes in one step.
    pub fn scalar(&self, text: &str) -> Result<RatFunc, ExprError> {
        self.parse(text)?.canonicalize()
    }

    /// Partial derivative along coordinate `i`.
    pub fn d(&self, f: &RatFunc, i: usize) -> RatFunc {
        f.diff(self.coord_var(i))
    }
}

impl SymbolScope for Chart {
    fn is_symbol(&self, name: &str) -> bool {
        self.coords
            .iter()
            .chain(self.params.iter())
            .any(|s| s == name)
    }

    fn is_function(&self, name: &str) -> bool {
        self.registry.contains(name)
    }
}

#[derive(Debug, Clone)]
pub struct MetricSpec {
    chart: Chart,
    g: linalg::Matrix,
    inv: linalg::Matrix,
    det: RatFunc,
}

impl MetricSpec {
    pub fn new(chart: Chart, entries: &[Vec<Expr>]) -> Result<MetricSpec, GeometryError> {
        let n = chart.dim();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(GeometryError::DimensionMismatch {
                expected: n * n,
                got: entries.iter().map(Vec::len).sum(),
            });
        }
        let mut g = vec![vec![RatFunc::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = entries[i][j].canonicalize()?;
            }
        }
        MetricSpec::from_matrix(chart, g)
    }

    pub fn from_matrix(chart: Chart, g: linalg::Matrix) -> Result<MetricSpec, GeometryError> {
        let n = chart.dim();
        for i in 0..n {
            for j in i + 1..n {
                if g[i][j] != g[j][i] {
                    return Err(GeometryError::Asymmetric(i + 1, j + 1));
                }
            }
        }
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || g[i][j].is_zero()));
        let (det, inv) = if diagonal {
            let det = (0..n).fold(RatFunc::one(), |acc, i| &acc * &g[i][i]);
            if det.is_zero() {
                return Err(GeometryError::Degenerate);
            }
            let mut inv = vec![vec![RatFunc::zero(); n]; n];
            for i in 0..n {
                inv[i][i] = g[i][i].inv().ok_or(GeometryError::Degenerate)?;
            }
            (det, inv)
        } else {
            let det = linalg::determinant(&g);
            if det.is_zero() {
                return Err(GeometryError::Degenerate);
            }
            (det, linalg::inverse(&g).ok_or(GeometryError::Degenerate)?)
        };
        Ok(MetricSpec { chart, g, inv, det })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn g(&self, i: usize, j: usize) -> &RatFunc {
        &self.g[i][j]
    }

    pub fn inv(&self, i: usize, j: usize) -> &RatFunc {
        &self.inv[i][j]
    }

    pub fn det(&self) -> &RatFunc {
        &self.det
    }

    pub fn matrix(&self) -> &linalg::Matrix {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &linalg::Matrix {
        &self.inv
    }

    pub fn as_tensor(&self) -> TensorField {
        TensorField::from_fn(self.dim(), 2, "g_{ij}", |i| self.g[i[0]][i[1]].clone())
    }

    /// Lowers a vector: `π_j = g_{jβ} v^β`.
    pub fn lower(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&b| !v[b].is_zero() && !self.g[j][b].is_zero())
                    .map(|b| &self.g[j][b] * &v[b])
                    .sum()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    SemiSymmetricNonMetric { p: Vec<RatFunc> },
}

#[derive(Debug, Clone)]
pub struct ConnectionSpec {
    kind: ConnectionKind,
    n: usize,
    gamma: Vec<RatFunc>,
}

impl ConnectionSpec {
    pub fn kind(&self) -> &ConnectionKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Γ^a_{ij}`: the `∂_a` component of `∇_{∂_i} ∂_j`.
    pub fn gamma(&self, a: usize, i: usize, j: usize) -> &RatFunc {
        &self.gamma[(a * self.n + i) * self.n + j]
    }

    /// Nonzero coefficients as `(a, i, j, value)`, lexicographic.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, &RatFunc)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let g = self.gamma(a, i, j);
                    if !g.is_zero() {
                        out.push((a, i, j, g));
                    }
                }
            }
        }
        out
    }

    /// One-form `π_j = g(P, ∂_j)`; zero for Levi-Civita.
    pub fn pi(&self, metric: &MetricSpec) -> Vec<RatFunc> {
        match &self.kind {
            ConnectionKind::LeviCivita => vec![RatFunc::zero(); self.n],
            ConnectionKind::SemiSymmetricNonMetric { p } => metric.lower(p),
        }
    }
}

/// `Γ^a_{ij} = ½ g^{ab}(∂_i g_{jb} + ∂_j g_{ib} - ∂_b g_{ij})`.
pub fn levi_civita_christoffels(metric: &MetricSpec) -> ConnectionSpec {
    let n = metric.dim();
    let chart = metric.chart();
    let dg: Vec<RatFunc> = (0..n * n * n)
        .into_par_iter()
        .map(|k| chart.d(metric.g((k / n) % n, k % n), k / (n * n)))
        .collect();
    let dg = |c: usize, i: usize, j: usize| &dg[(c * n + i) * n + j];
    let half = RatFunc::ratio(1, 2);
    let gamma = (0..n * n * n)
        .into_par_iter()
        .map(|k| {
            let (a, i, j) = (k / (n * n), (k / n) % n, k % n);
            let mut acc = RatFunc::zero();
            for b in 0..n {
                let ginv = metric.inv(a, b);
                if ginv.is_zero() {
                    continue;
                }
                let s = &(dg(i, j, b) + dg(j, i, b)) - dg(b, i, j);
                if !s.is_zero() {
                    acc = &acc + &(ginv * &s);
                }
            }
            &acc * &half
        })
        .collect();
    ConnectionSpec {
        kind: ConnectionKind::LeviCivita,
        n,
        gamma,
    }
}

/// `Γ̂^a_{ij} = Γ^a_{ij} + π_j δ^a_i` with `π_j = g_{jβ} P^β`.
pub fn ssnm_christoffels(
    metric: &MetricSpec,
    p: Vec<RatFunc>,
) -> Result<ConnectionSpec, GeometryError> {
    let n = metric.dim();
    if p.len() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    let mut conn = levi_civita_christoffels(metric);
    let pi = metric.lower(&p);
    for a in 0..n {
        for j in 0..n {
            if !pi[j].is_zero() {
                let k = (a * n + a) * n + j;
                conn.gamma[k] = &conn.gamma[k] + &pi[j];
            }
        }
    }
    conn.kind = ConnectionKind::SemiSymmetricNonMetric { p };
    Ok(conn)
}

/// `(∇_i g)_{jk}`, derivative index first.
pub fn non_metricity(conn: &ConnectionSpec, metric: &MetricSpec) -> TensorField {
    let n = metric.dim();
    let chart = metric.chart();
    TensorField::from_fn(n, 3, "(∇_i g)_{jk}", |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = chart.d(metric.g(j, k), i);
        for a in 0..n {
            let t1 = conn.gamma(a, i, j);
            if !t1.is_zero() && !metric.g(a, k).is_zero() {
                acc = &acc - &(t1 * metric.g(a, k));
            }
            let t2 = conn.gamma(a, i, k);
            if !t2.is_zero() && !metric.g(j, a).is_zero() {
                acc = &acc - &(t2 * metric.g(j, a));
            }
        }
        acc
    })
}

/// Chart, metric and connection together.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub metric: MetricSpec,
    pub connection: ConnectionSpec,
}

impl Geometry {
    pub fn levi_civita(metric: MetricSpec) -> Geometry {
        let connection = levi_civita_christoffels(&metric);
        Geometry { metric, connection }
    }

    pub fn ssnm(metric: MetricSpec, p: Vec<RatFunc>) -> Result<Geometry, GeometryError> {
        let connection = ssnm_christoffels(&metric, p)?;
        Ok(Geometry { metric, connection })
    }

    pub fn chart(&self) -> &Chart {
        self.metric.chart()
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere2() -> MetricSpec {
        let chart = Chart::new(&["th", "ph"], &["r"]).unwrap();
        let e = |s: &str| chart.parse(s).unwrap();
        let entries = vec![vec![e("r^2"), e("0")], vec![e("0"), e("r^2*sin(th)^2")]];
        MetricSpec::new(chart.clone(), &entries).unwrap()
    }

    #[test]
    fn chart_rejects_duplicates() {
        assert!(Chart::new(&["x", "y"], &["x"]).is_err());
        assert!(Chart::new(&["x"], &[]).is_err());
        assert!(Chart::new(&["x", "sin"], &[]).is_err());
    }

    #[test]
    fn sphere_christoffels() {
        let m = sphere2();
        let conn = levi_civita_christoffels(&m);
        let expect = m.chart().scalar("-sin(th)*cos(th)").unwrap();
        assert_eq!(conn.gamma(0, 1, 1), &expect);
        let cot = m.chart().scalar("cot(th)").unwrap();
        assert_eq!(conn.gamma(1, 0, 1), &cot);
        assert_eq!(conn.gamma(1, 1, 0), &cot);
        assert!(non_metricity(&conn, &m).is_zero());
    }

    #[test]
    fn asymmetric_and_degenerate_metrics_fail() {
        let chart = Chart::new(&["x", "y"], &[]).unwrap();
        let e = |s: &str| chart.parse(s).unwrap();
        let asym = vec![vec![e("1"), e("x")], vec![e("0"), e("1")]];
        assert_eq!(
            MetricSpec::new(chart.clone(), &asym).unwrap_err(),
            GeometryError::Asymmetric(1, 2)
        );
        let degen = vec![vec![e("x"), e("x")], vec![e("x"), e("x")]];
        assert_eq!(
            MetricSpec::new(chart.clone(), &degen).unwrap_err(),
            GeometryError::Degenerate
        );
    }

    #[test]
    fn non_diagonal_inverse() {
        let chart = Chart::new(&["x", "y"], &[]).unwrap();
        let e = |s: &str| chart.parse(s).unwrap();
        let m = MetricSpec::new(
            chart.clone(),
            &[vec![e("1+x^2"), e("x")], vec![e("x"), e("1")]],
        )
        .unwrap();
        assert_eq!(
            linalg::mat_mul(m.matrix(), m.inverse_matrix()),
            linalg::identity(2)
        );
        assert!(m.det().is_one());
    }
}
