//! Named tensors of a bundle, computed on demand and cached.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{dot_action, tachibana, AlgebraError};
use crate::curvature::{Curvature, CurvatureBundle, CurvatureError};
use crate::tensor::TensorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorName {
    Metric,
    Christoffel,
    Riemann,
    Ricci,
    Scalar,
    Weyl,
    Conharmonic,
    Concircular,
    Projective,
    Ricci2,
    Ricci3,
    Ricci4,
    NablaRiemann,
    NablaRicci,
    NablaWeyl,
    NablaProjective,
    NablaConharmonic,
    RR,
    PR,
    CC,
    CK,
    KC,
    KK,
    QRicR,
    QgC,
    QgK,
}

use TensorName::*;

impl TensorName {
    pub const ALL: [TensorName; 26] = [
        Metric,
        Christoffel,
        Riemann,
        Ricci,
        Scalar,
        Weyl,
        Conharmonic,
        Concircular,
        Projective,
        Ricci2,
        Ricci3,
        Ricci4,
        NablaRiemann,
        NablaRicci,
        NablaWeyl,
        NablaProjective,
        NablaConharmonic,
        RR,
        PR,
        CC,
        CK,
        KC,
        KK,
        QRicR,
        QgC,
        QgK,
    ];

    /// Command-line spelling.
    pub fn key(self) -> &'static str {
        match self {
            Metric => "metric",
            Christoffel => "christoffel",
            Riemann => "riemann",
            Ricci => "ricci",
            Scalar => "scalar",
            Weyl => "weyl",
            Conharmonic => "conharmonic",
            Concircular => "concircular",
            Projective => "projective",
            Ricci2 => "ricci2",
            Ricci3 => "ricci3",
            Ricci4 => "ricci4",
            NablaRiemann => "nabla-riemann",
            NablaRicci => "nabla-ricci",
            NablaWeyl => "nabla-weyl",
            NablaProjective => "nabla-projective",
            NablaConharmonic => "nabla-conharmonic",
            RR => "rr",
            PR => "pr",
            CC => "cc",
            CK => "ck",
            KC => "kc",
            KK => "kk",
            QRicR => "q-ric-r",
            QgC => "q-g-c",
            QgK => "q-g-k",
        }
    }

    /// Symbol used when printing components, as in `Ric[2,2]`.
    pub fn symbol(self) -> &'static str {
        match self {
            Metric => "g",
            Christoffel => "Gamma",
            Riemann => "R",
            Ricci => "Ric",
            Scalar => "kappa",
            Weyl => "C",
            Conharmonic => "K",
            Concircular => "W",
            Projective => "P",
            Ricci2 => "Ric2",
            Ricci3 => "Ric3",
            Ricci4 => "Ric4",
            NablaRiemann => "nablaR",
            NablaRicci => "nablaRic",
            NablaWeyl => "nablaC",
            NablaProjective => "nablaP",
            NablaConharmonic => "nablaK",
            RR => "(R.R)",
            PR => "(P.R)",
            CC => "(C.C)",
            CK => "(C.K)",
            KC => "(K.C)",
            KK => "(K.K)",
            QRicR => "Q(Ric,R)",
            QgC => "Q(g,C)",
            QgK => "Q(g,K)",
        }
    }
}

impl fmt::Display for TensorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown tensor `{0}`")]
pub struct UnknownTensor(pub String);

impl FromStr for TensorName {
    type Err = UnknownTensor;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TensorName::ALL
            .into_iter()
            .find(|t| t.key() == s)
            .ok_or_else(|| UnknownTensor(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A bundle plus a cache of every named tensor computed so far.
pub struct Catalog {
    bundle: CurvatureBundle,
    cache: Mutex<HashMap<TensorName, Arc<TensorField>>>,
}

impl Catalog {
    pub fn new(bundle: CurvatureBundle) -> Catalog {
        Catalog {
            bundle,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn bundle(&self) -> &CurvatureBundle {
        &self.bundle
    }

    pub fn get(&self, name: TensorName) -> Result<Arc<TensorField>, CatalogError> {
        if let Some(t) = self.cache.lock().unwrap().get(&name) {
            return Ok(t.clone());
        }
        let t = Arc::new(self.compute(name)?.with_label(name.symbol()));
        self.cache.lock().unwrap().entry(name).or_insert(t.clone());
        Ok(t)
    }

    fn dot(&self, e: TensorName, f: TensorName) -> Result<TensorField, CatalogError> {
        Ok(dot_action(
            &*self.get(e)?,
            &*self.get(f)?,
            self.bundle.metric(),
        )?)
    }

    fn q(&self, z: TensorName, f: TensorName) -> Result<TensorField, CatalogError> {
        Ok(tachibana(&*self.get(z)?, &*self.get(f)?)?)
    }

    fn compute(&self, name: TensorName) -> Result<TensorField, CatalogError> {
        let b = &self.bundle;
        let n = b.dim();
        Ok(match name {
            Metric => b.g().clone(),
            Christoffel => {
                let conn = b.connection();
                TensorField::from_fn(n, 3, "", |i| conn.gamma(i[0], i[1], i[2]).clone())
            }
            Riemann => b.riemann().clone(),
            Ricci => b.ricci().clone(),
            Scalar => TensorField::from_components(n, 0, vec![b.scalar().clone()], ""),
            Weyl => b.weyl()?.clone(),
            Conharmonic => b.conharmonic()?.clone(),
            Concircular => b.concircular()?.clone(),
            Projective => b.projective()?.clone(),
            Ricci2 => b.ricci_power(2)?.clone(),
            Ricci3 => b.ricci_power(3)?.clone(),
            Ricci4 => b.ricci_power(4)?.clone(),
            NablaRiemann => b.nabla(Curvature::Riemann)?.clone(),
            NablaRicci => b.nabla(Curvature::Ricci)?.clone(),
            NablaWeyl => b.nabla(Curvature::Weyl)?.clone(),
            NablaProjective => b.nabla(Curvature::Projective)?.clone(),
            NablaConharmonic => b.nabla(Curvature::Conharmonic)?.clone(),
            RR => self.dot(Riemann, Riemann)?,
            PR => self.dot(Projective, Riemann)?,
            CC => self.dot(Weyl, Weyl)?,
            CK => self.dot(Weyl, Conharmonic)?,
            KC => self.dot(Conharmonic, Weyl)?,
            KK => self.dot(Conharmonic, Conharmonic)?,
            QRicR => self.q(Ricci, Riemann)?,
            QgC => self.q(Metric, Weyl)?,
            QgK => self.q(Metric, Conharmonic)?,
        })
    }
}
