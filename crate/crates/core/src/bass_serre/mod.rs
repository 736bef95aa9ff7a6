//! Finite-scale checks of the tree machinery behind the combination rules.
//!
//! Everything here works inside a ball of bounded radius and enumerates group
//! elements up to a bounded syllable length, so every positive answer is
//! "verified up to budget".

mod cone;
mod normalizer;
mod tree;
mod word;

use thiserror::Error;

pub use cone::{
    cone_off, pushout_dimension_bound, Cell, CellAssignment, CellKind, CellVertex, Cone, ConedComplex, StabilizerClass,
    StabilizerRecord,
};
pub use normalizer::{normalizer_probe, NormalizerCertificate, SdElem, SemidirectSpec};
pub use tree::{
    auto_axes, axis_of, ball, ball_with_cap, path_stabilizer, setwise_axis_stabilizer, Axis, AxisAction, AxisStabilizer,
    EdgeLabel, TreeBall, TreeEdge, TreeShape, Vertex, DEFAULT_VERTEX_CAP,
};
pub use word::{FreeProductSpec, Syllable, Word};

/// Largest number of words any enumeration may produce.
pub const DEFAULT_WORD_CAP: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BassSerreError {
    #[error("invalid free product: {0}")]
    InvalidSpec(String),
    #[error("factor index {0} out of range")]
    FactorOutOfRange(usize),
    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },
    #[error("{what} exceeded the cap of {cap}")]
    ResourceLimit { what: &'static str, cap: usize },
    #[error("vertex sequence is not a path in the ball")]
    NotAPath,
    #[error("minimal displacement set is not a line segment")]
    AxisNotLine,
    #[error("monodromy is not hyperbolic")]
    NotHyperbolic,
    #[error("element mixes the ℤ² and ℤ parts; only pure elements are supported")]
    UnsupportedElement,
    #[error("element has finite order")]
    FiniteOrderElement,
    #[error("no dimension assigned to stabilizer class {0:?}")]
    MissingAssignment(StabilizerClass),
    #[error(transparent)]
    Matrix(#[from] crate::gl2z::Gl2Error),
}
