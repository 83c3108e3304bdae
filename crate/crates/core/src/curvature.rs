//! Riemann, Ricci and scalar curvature plus the Weyl conformal (C),
//! conharmonic (K), concircular (W) and projective (P) tensors.
//!
//! Index conventions:
//! * `R_{hkij} = g_{hα}(∂_i Γ^α_{kj} - ∂_j Γ^α_{ki} + Γ^β_{kj} Γ^α_{βi} - Γ^β_{ki} Γ^α_{βj})`
//! * `Ric_{kl} = g^{hj} R_{hklj}` and `κ = g^{kj} Ric_{kj}`
//! * `(∇_i T)_{j1..jk}` stores the derivative index first.

use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::kulkarni_nomizu;
use crate::expr::RatFunc;
use crate::geometry::{ConnectionSpec, Geometry, MetricSpec};
use crate::tensor::TensorField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("{tensor} needs dimension at least {min}, chart has {n}")]
    DimensionTooSmall {
        tensor: &'static str,
        min: usize,
        n: usize,
    },
    #[error("covariant derivative of a mixed tensor is not supported")]
    MixedInput,
    #[error("Ricci power {0} is outside 1..=4")]
    PowerOutOfRange(usize),
}

pub fn riemann(conn: &ConnectionSpec, metric: &MetricSpec) -> TensorField {
    let n = metric.dim();
    let chart = metric.chart();
    let dgamma: Vec<RatFunc> = (0..n * n * n * n)
        .into_par_iter()
        .map(|k| {
            let (c, a, i, j) = (k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n);
            chart.d(conn.gamma(a, i, j), c)
        })
        .collect();
    let dg = |c: usize, a: usize, i: usize, j: usize| &dgamma[((c * n + a) * n + i) * n + j];
    let mixed = TensorField::mixed_from_fn(n, 3, "R^a_{kij}", |idx| {
        let (a, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = dg(i, a, k, j) - dg(j, a, k, i);
        for b in 0..n {
            let (p, q) = (conn.gamma(b, k, j), conn.gamma(a, b, i));
            if !p.is_zero() && !q.is_zero() {
                acc = &acc + &(p * q);
            }
            let (p, q) = (conn.gamma(b, k, i), conn.gamma(a, b, j));
            if !p.is_zero() && !q.is_zero() {
                acc = &acc - &(p * q);
            }
        }
        acc
    });
    TensorField::from_fn(n, 4, "R_{hkij}", |idx| {
        let mut acc = RatFunc::zero();
        for a in 0..n {
            let g = metric.g(idx[0], a);
            if g.is_zero() {
                continue;
            }
            let r = mixed.get(&[a, idx[1], idx[2], idx[3]]);
            if !r.is_zero() {
                acc = &acc + &(g * r);
            }
        }
        acc
    })
}

/// `Ric_{kl} = g^{hj} R_{hklj}`.
pub fn ricci(r: &TensorField, metric: &MetricSpec) -> TensorField {
    let n = metric.dim();
    TensorField::from_fn(n, 2, "Ric_{kl}", |idx| {
        let (k, l) = (idx[0], idx[1]);
        let mut acc = RatFunc::zero();
        for h in 0..n {
            for j in 0..n {
                let gi = metric.inv(h, j);
                if gi.is_zero() {
                    continue;
                }
                let c = r.get(&[h, k, l, j]);
                if !c.is_zero() {
                    acc = &acc + &(gi * c);
                }
            }
        }
        acc
    })
}

/// `κ = g^{kj} Ric_{kj}`.
pub fn scalar(ric: &TensorField, metric: &MetricSpec) -> RatFunc {
    let n = metric.dim();
    let mut acc = RatFunc::zero();
    for k in 0..n {
        for j in 0..n {
            let gi = metric.inv(k, j);
            let c = ric.get(&[k, j]);
            if !gi.is_zero() && !c.is_zero() {
                acc = &acc + &(gi * c);
            }
        }
    }
    acc
}

pub fn is_symmetric2(t: &TensorField) -> bool {
    let n = t.dim();
    (0..n).all(|i| (i + 1..n).all(|j| t.get(&[i, j]) == t.get(&[j, i])))
}

/// `(∇_i T)_{j1..jk} = ∂_i T_{j1..jk} - Σ_m Γ^α_{i j_m} T_{j1..α..jk}`.
pub fn covariant_derivative(
    t: &TensorField,
    conn: &ConnectionSpec,
    metric: &MetricSpec,
) -> Result<TensorField, CurvatureError> {
    if t.is_mixed() {
        return Err(CurvatureError::MixedInput);
    }
    let n = t.dim();
    let k = t.rank();
    let chart = metric.chart();
    let label = format!("∇{}", t.label());
    Ok(TensorField::from_fn(n, k + 1, label, |idx| {
        let i = idx[0];
        let js = &idx[1..];
        let mut acc = chart.d(t.get(js), i);
        let mut slot = js.to_vec();
        for m in 0..k {
            for a in 0..n {
                let gam = conn.gamma(a, i, js[m]);
                if gam.is_zero() {
                    continue;
                }
                slot[m] = a;
                let c = t.get(&slot);
                if !c.is_zero() {
                    acc = &acc - &(gam * c);
                }
            }
            slot[m] = js[m];
        }
        acc
    }))
}

/// `A^2_{ij} = A_{iα} g^{αβ} B_{βj}`.
fn contract_through_metric(
    a: &TensorField,
    b: &TensorField,
    metric: &MetricSpec,
    label: String,
) -> TensorField {
    let n = metric.dim();
    TensorField::from_fn(n, 2, label, |idx| {
        let mut acc = RatFunc::zero();
        for al in 0..n {
            let x = a.get(&[idx[0], al]);
            if x.is_zero() {
                continue;
            }
            for be in 0..n {
                let gi = metric.inv(al, be);
                let y = b.get(&[be, idx[1]]);
                if !gi.is_zero() && !y.is_zero() {
                    acc = &acc + &(&(x * gi) * y);
                }
            }
        }
        acc
    })
}

/// Every curvature quantity of one geometry, computed once and cached.
pub struct CurvatureBundle {
    geometry: Geometry,
    riemann: TensorField,
    ricci: TensorField,
    scalar: RatFunc,
    ricci_symmetric: bool,
    g: TensorField,
    g_wedge_g: OnceLock<TensorField>,
    g_wedge_ric: OnceLock<TensorField>,
    weyl: OnceLock<TensorField>,
    conharmonic: OnceLock<TensorField>,
    concircular: OnceLock<TensorField>,
    projective: OnceLock<TensorField>,
    powers: [OnceLock<TensorField>; 3],
    nabla: [OnceLock<TensorField>; 6],
}

/// Tensors whose covariant derivative the bundle caches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Riemann,
    Ricci,
    Weyl,
    Conharmonic,
    Concircular,
    Projective,
}

impl Curvature {
    pub const ALL: [Curvature; 6] = [
        Curvature::Riemann,
        Curvature::Ricci,
        Curvature::Weyl,
        Curvature::Conharmonic,
        Curvature::Concircular,
        Curvature::Projective,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Curvature::Riemann => "R",
            Curvature::Ricci => "Ric",
            Curvature::Weyl => "C",
            Curvature::Conharmonic => "K",
            Curvature::Concircular => "W",
            Curvature::Projective => "P",
        }
    }
}

impl CurvatureBundle {
    pub fn new(geometry: Geometry) -> CurvatureBundle {
        let metric = &geometry.metric;
        let riemann = riemann(&geometry.connection, metric);
        let ricci = ricci(&riemann, metric);
        let scalar = scalar(&ricci, metric);
        let ricci_symmetric = is_symmetric2(&ricci);
        let g = metric.as_tensor().with_label("g");
        CurvatureBundle {
            geometry,
            riemann: riemann.with_label("R"),
            ricci: ricci.with_label("Ric"),
            scalar,
            ricci_symmetric,
            g,
            g_wedge_g: OnceLock::new(),
            g_wedge_ric: OnceLock::new(),
            weyl: OnceLock::new(),
            conharmonic: OnceLock::new(),
            concircular: OnceLock::new(),
            projective: OnceLock::new(),
            powers: Default::default(),
            nabla: Default::default(),
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.geometry.metric
    }

    pub fn connection(&self) -> &ConnectionSpec {
        &self.geometry.connection
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn g(&self) -> &TensorField {
        &self.g
    }

    pub fn riemann(&self) -> &TensorField {
        &self.riemann
    }

    pub fn ricci(&self) -> &TensorField {
        &self.ricci
    }

    pub fn scalar(&self) -> &RatFunc {
        &self.scalar
    }

    /// `false` when the connection produced `Ric_{ij} != Ric_{ji}`.
    pub fn ricci_symmetric(&self) -> bool {
        self.ricci_symmetric
    }

    fn need(&self, tensor: &'static str, min: usize) -> Result<(), CurvatureError> {
        let n = self.dim();
        if n < min {
            Err(CurvatureError::DimensionTooSmall { tensor, min, n })
        } else {
            Ok(())
        }
    }

    pub fn g_wedge_g(&self) -> &TensorField {
        self.g_wedge_g
            .get_or_init(|| kulkarni_nomizu(&self.g, &self.g).expect("g is (0,2)"))
    }

    pub fn g_wedge_ric(&self) -> &TensorField {
        self.g_wedge_ric
            .get_or_init(|| kulkarni_nomizu(&self.g, &self.ricci).expect("Ric is (0,2)"))
    }

    fn n_rat(&self) -> i64 {
        self.dim() as i64
    }

    /// `C = R - (g∧Ric)/(n-2) + κ/(2(n-1)(n-2)) g∧g`.
    pub fn weyl(&self) -> Result<&TensorField, CurvatureError> {
        self.need("weyl", 3)?;
        Ok(self.weyl.get_or_init(|| {
            let n = self.n_rat();
            let a = RatFunc::ratio(1, n - 2);
            let b = &self.scalar * &RatFunc::ratio(1, 2 * (n - 1) * (n - 2));
            self.riemann
                .sub(&self.g_wedge_ric().scale(&a))
                .add(&self.g_wedge_g().scale(&b))
                .with_label("C")
        }))
    }

    /// `K = R - (g∧Ric)/(n-2)`.
    pub fn conharmonic(&self) -> Result<&TensorField, CurvatureError> {
        self.need("conharmonic", 3)?;
        Ok(self.conharmonic.get_or_init(|| {
            let a = RatFunc::ratio(1, self.n_rat() - 2);
            self.riemann
                .sub(&self.g_wedge_ric().scale(&a))
                .with_label("K")
        }))
    }

    /// `W = R - κ/(2n(n-1)) g∧g`.
    pub fn concircular(&self) -> Result<&TensorField, CurvatureError> {
        self.need("concircular", 3)?;
        Ok(self.concircular.get_or_init(|| {
            let n = self.n_rat();
            let b = &self.scalar * &RatFunc::ratio(1, 2 * n * (n - 1));
            self.riemann
                .sub(&self.g_wedge_g().scale(&b))
                .with_label("W")
        }))
    }

    /// `P_{hkij} = R_{hkij} - (g_{hj} Ric_{ki} - g_{kj} Ric_{hi})/(n-1)`.
    pub fn projective(&self) -> Result<&TensorField, CurvatureError> {
        self.need("projective", 3)?;
        Ok(self.projective.get_or_init(|| {
            let f = RatFunc::ratio(1, self.n_rat() - 1);
            let g = &self.g;
            let ric = &self.ricci;
            TensorField::from_fn(self.dim(), 4, "P", |i| {
                let (h, k, ii, j) = (i[0], i[1], i[2], i[3]);
                let t1 = g.get(&[h, j]) * ric.get(&[k, ii]);
                let t2 = g.get(&[k, j]) * ric.get(&[h, ii]);
                let corr = &t1 - &t2;
                if corr.is_zero() {
                    self.riemann.get(i).clone()
                } else {
                    self.riemann.get(i) - &(&corr * &f)
                }
            })
        }))
    }

    pub fn tensor(&self, which: Curvature) -> Result<&TensorField, CurvatureError> {
        match which {
            Curvature::Riemann => Ok(&self.riemann),
            Curvature::Ricci => Ok(&self.ricci),
            Curvature::Weyl => self.weyl(),
            Curvature::Conharmonic => self.conharmonic(),
            Curvature::Concircular => self.concircular(),
            Curvature::Projective => self.projective(),
        }
    }

    /// `Ric^k` for `k` in `1..=4`.
    pub fn ricci_power(&self, k: usize) -> Result<&TensorField, CurvatureError> {
        match k {
            1 => Ok(&self.ricci),
            2..=4 => Ok(self.powers[k - 2].get_or_init(|| {
                let prev = self.ricci_power(k - 1).expect("lower power");
                contract_through_metric(&self.ricci, prev, self.metric(), format!("Ric{k}"))
            })),
            _ => Err(CurvatureError::PowerOutOfRange(k)),
        }
    }

    /// `∇̂T` for one of the bundle's tensors.
    pub fn nabla(&self, which: Curvature) -> Result<&TensorField, CurvatureError> {
        let slot = Curvature::ALL.iter().position(|c| *c == which).unwrap();
        let t = self.tensor(which)?;
        if let Some(done) = self.nabla[slot].get() {
            return Ok(done);
        }
        let d = covariant_derivative(t, self.connection(), self.metric())?;
        Ok(self.nabla[slot].get_or_init(|| d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Chart, MetricSpec};

    fn round_sphere3() -> CurvatureBundle {
        let chart = Chart::new(&["x1", "x2", "x3"], &["r"]).unwrap();
        let e = |s: &str| chart.parse(s).unwrap();
        let z = || e("0");
        let entries = vec![
            vec![e("r^2"), z(), z()],
            vec![z(), e("r^2*sin(x1)^2"), z()],
            vec![z(), z(), e("r^2*sin(x1)^2*sin(x2)^2")],
        ];
        CurvatureBundle::new(Geometry::levi_civita(
            MetricSpec::new(chart, &entries).unwrap(),
        ))
    }

    #[test]
    fn sphere_has_constant_curvature() {
        let b = round_sphere3();
        let chart = b.metric().chart().clone();
        assert_eq!(
            b.riemann().get(&[0, 1, 0, 1]),
            &chart.scalar("r^2*sin(x1)^2").unwrap()
        );
        assert_eq!(b.scalar(), &chart.scalar("-6/r^2").unwrap());
        assert!(b.ricci_symmetric());
        assert!(b.weyl().unwrap().is_zero());
        assert!(b.concircular().unwrap().is_zero());
    }

    #[test]
    fn levi_civita_riemann_is_pair_symmetric() {
        let b = round_sphere3();
        let r = b.riemann();
        for idx in r.indices() {
            let swapped = [idx[2], idx[3], idx[0], idx[1]];
            assert_eq!(r.get(&idx), r.get(&swapped));
            assert!((r.get(&idx) + r.get(&[idx[1], idx[0], idx[2], idx[3]])).is_zero());
        }
    }

    #[test]
    fn metric_is_parallel_for_levi_civita() {
        let b = round_sphere3();
        let ng = covariant_derivative(b.g(), b.connection(), b.metric()).unwrap();
        assert!(ng.is_zero());
    }

    #[test]
    fn two_dimensional_charts_reject_weyl() {
        let chart = Chart::new(&["x", "y"], &[]).unwrap();
        let m = MetricSpec::from_matrix(chart, crate::linalg::identity(2)).unwrap();
        let b = CurvatureBundle::new(Geometry::levi_civita(m));
        assert!(matches!(
            b.weyl(),
            Err(CurvatureError::DimensionTooSmall { .. })
        ));
        assert!(b.riemann().is_zero());
    }
}
