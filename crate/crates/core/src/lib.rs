//! Exact geometric dimension of fundamental groups of closed oriented
//! 3-manifolds with respect to the families `𝓕ₖ` of virtually `ℤʳ`
//! subgroups, `r ≤ k`, for `k ≥ 2`.
//!
//! A manifold is described declaratively ([`model::ManifoldDescription`]);
//! [`dimension::compute`] normalizes it and evaluates both distinct columns
//! (`k = 2` and `k ≥ 3`). [`bass_serre`] holds finite-scale tree computations
//! used to cross-check the combination rules.

pub mod bass_serre;
pub mod dimension;
pub mod gl2z;
pub mod model;
pub mod orbifold;
pub mod report;

pub use dimension::{compute, DimensionError, DimensionReport, FamilyIndex, GdResult};
pub use gl2z::{Mat2Z, MatClass};
pub use model::{Geometry, JsjVertex, ManifoldDescription, PrimePiece, SeifertData};
pub use orbifold::{OrbifoldBase, OrbifoldClass};
