//! Exact symbolic curvature computations on semi-Riemannian manifolds.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod curvature;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod presets;
pub mod tensor;
