//! Declarative descriptions of closed oriented 3-manifolds: a list of prime
//! summands, each given by its geometry, Seifert invariants, torus-bundle
//! monodromy, or JSJ graph.
//!
//! [`validate`] reports every violated invariant with a path into the
//! document. [`normalize`] removes `S³` summands and rewrites the two JSJ
//! shapes that are secretly geometric (a doubled twisted I-bundle over the
//! Klein bottle, and `T²×I` glued to itself).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gl2z::Mat2Z;
use crate::orbifold::{OrbifoldBase, OrbifoldClass};

/// The eight Thurston model geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Geometry {
    S3,
    E3,
    H3,
    S2xE,
    H2xE,
    PSL2R,
    Nil,
    Sol,
}

impl Geometry {
    pub const ALL: [Geometry; 8] =
        [Geometry::S3, Geometry::E3, Geometry::H3, Geometry::S2xE, Geometry::H2xE, Geometry::PSL2R, Geometry::Nil, Geometry::Sol];
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Geometry::S3 => "S3",
            Geometry::E3 => "E3",
            Geometry::H3 => "H3",
            Geometry::S2xE => "S2xE",
            Geometry::H2xE => "H2xE",
            Geometry::PSL2R => "PSL2R",
            Geometry::Nil => "Nil",
            Geometry::Sol => "Sol",
        };
        f.write_str(s)
    }
}

/// Unnormalized Seifert invariants `{b; (α₁,β₁), …}` over a base orbifold.
///
/// `b` is required for closed manifolds and must be absent when the base has
/// boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeifertData {
    pub base: OrbifoldBase,
    #[serde(default)]
    pub cone_pairs: Vec<(u32, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
}

impl SeifertData {
    /// Closed Seifert data over `base` with all `βᵢ = 1`.
    pub fn closed(base: OrbifoldBase, b: i64) -> Self {
        let cone_pairs = base.cone_orders.iter().map(|&a| (a, 1)).collect();
        SeifertData { base, cone_pairs, b: Some(b) }
    }

    pub fn bounded(base: OrbifoldBase) -> Self {
        let cone_pairs = base.cone_orders.iter().map(|&a| (a, 1)).collect();
        SeifertData { base, cone_pairs, b: None }
    }

    pub fn boundary_count(&self) -> u32 {
        self.base.boundary_count
    }

    /// `e = -(b + Σ βᵢ/αᵢ)`; undefined with boundary or without `b`.
    pub fn euler_number(&self) -> Option<BigRational> {
        if self.boundary_count() > 0 {
            return None;
        }
        let mut sum = BigRational::from_integer(BigInt::from(self.b?));
        for &(alpha, beta) in &self.cone_pairs {
            if alpha == 0 {
                return None;
            }
            sum += BigRational::new(BigInt::from(beta), BigInt::from(alpha));
        }
        Some(-sum)
    }

    /// `T²×I`: an annulus base without cone points.
    pub fn is_product_collar(&self) -> bool {
        self.boundary_count() == 2 && self.base.classify() == OrbifoldClass::Flat
    }

    /// Twisted I-bundle over the Klein bottle: flat base with one boundary
    /// circle (`D²(2,2)` or the Möbius band).
    pub fn is_twisted_klein_bundle(&self) -> bool {
        self.boundary_count() == 1 && self.base.classify() == OrbifoldClass::Flat
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JsjVertex {
    HyperbolicCusped { cusps: u32 },
    SeifertBounded { seifert: SeifertData },
}

impl JsjVertex {
    pub fn boundary_tori(&self) -> u32 {
        match self {
            JsjVertex::HyperbolicCusped { cusps } => *cusps,
            JsjVertex::SeifertBounded { seifert } => seifert.boundary_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PrimePiece {
    /// Finite fundamental group of the given order; order 1 is `S³`, order 2
    /// is `RP³`.
    Spherical {
        pi1_order: u64,
    },
    Geometric {
        geometry: Geometry,
    },
    TorusBundle {
        monodromy: Mat2Z,
    },
    /// Union of two twisted I-bundles over the Klein bottle along their
    /// boundary tori.
    KleinDouble,
    SeifertClosed {
        seifert: SeifertData,
    },
    Jsj {
        vertices: Vec<JsjVertex>,
        /// Unordered pairs of vertex indices; self-loops and repeats allowed.
        #[serde(default)]
        edges: Vec<(usize, usize)>,
        /// Gluing map for a single `T²×I` vertex glued to itself.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        monodromy: Option<Mat2Z>,
    },
}

impl PrimePiece {
    pub fn rp3() -> Self {
        PrimePiece::Spherical { pi1_order: 2 }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PrimePiece::Spherical { .. } => "spherical",
            PrimePiece::Geometric { .. } => "geometric",
            PrimePiece::TorusBundle { .. } => "torus_bundle",
            PrimePiece::KleinDouble => "klein_double",
            PrimePiece::SeifertClosed { .. } => "seifert_closed",
            PrimePiece::Jsj { .. } => "jsj",
        }
    }

    pub fn is_s3(&self) -> bool {
        matches!(self, PrimePiece::Spherical { pi1_order: 1 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDescription {
    pub name: String,
    pub pieces: Vec<PrimePiece>,
}

impl ManifoldDescription {
    pub fn new(name: impl Into<String>, pieces: Vec<PrimePiece>) -> Self {
        ManifoldDescription { name: name.into(), pieces }
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| ModelError::Parse { path: json_path(&e.path().to_string()), message: e.inner().to_string() })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions always serialize")
    }
}

fn json_path(p: &str) -> String {
    if p == "." || p.is_empty() {
        "$".to_string()
    } else {
        format!("$.{p}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    Parse,
    NoPieces,
    TrivialGroupOrder,
    ConeOrderTooSmall,
    ConeOrderMismatch,
    NotCoprime,
    MissingObstruction,
    ObstructionWithBoundary,
    ClosedPieceHasBoundary,
    BoundedPieceIsClosed,
    NoCusps,
    EmptyGraph,
    EdgeOutOfRange,
    BoundaryMismatch,
    Disconnected,
    NonMinimalCollar,
    MonodromyNotApplicable,
    /// Two twisted I-bundles glued together; rewritten by [`normalize`].
    KleinDoubleGraph,
    /// A single `T²×I` glued to itself; rewritten by [`normalize`].
    TorusBundleGraph,
}

impl ViolationCode {
    /// Violations that [`normalize`] repairs by rewriting.
    pub fn is_rewritable(self) -> bool {
        matches!(self, ViolationCode::KleinDoubleGraph | ViolationCode::TorusBundleGraph)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub code: ViolationCode,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when every violation can be repaired by [`normalize`].
    pub fn is_normalizable(&self) -> bool {
        self.violations.iter().all(|v| v.code.is_rewritable())
    }

    pub fn blocking(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !v.code.is_rewritable())
    }

    fn push(&mut self, path: impl Into<String>, code: ViolationCode, message: impl Into<String>) {
        self.violations.push(Violation { path: path.into(), code, message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid description:\n{0}")]
    Invalid(ValidationReport),
    #[error("cannot normalize {path}: {reason}")]
    NormalizationAmbiguous { path: String, reason: String },
}

impl ModelError {
    /// The error rendered as a validation report.
    pub fn to_report(&self) -> ValidationReport {
        match self {
            ModelError::Invalid(r) => r.clone(),
            ModelError::Parse { path, message } => {
                let mut r = ValidationReport::default();
                r.push(path.clone(), ViolationCode::Parse, message.clone());
                r
            }
            ModelError::NormalizationAmbiguous { path, reason } => {
                let mut r = ValidationReport::default();
                r.push(path.clone(), ViolationCode::TorusBundleGraph, reason.clone());
                r
            }
        }
    }
}

pub fn validate(desc: &ManifoldDescription) -> ValidationReport {
    let mut report = ValidationReport::default();
    if desc.pieces.is_empty() {
        report.push("$.pieces", ViolationCode::NoPieces, "a description needs at least one prime piece");
    }
    for (i, piece) in desc.pieces.iter().enumerate() {
        validate_piece(piece, &format!("$.pieces[{i}]"), &mut report);
    }
    report
}

fn validate_piece(piece: &PrimePiece, path: &str, report: &mut ValidationReport) {
    match piece {
        PrimePiece::Spherical { pi1_order } => {
            if *pi1_order == 0 {
                report.push(format!("{path}.pi1_order"), ViolationCode::TrivialGroupOrder, "group order must be at least 1");
            }
        }
        PrimePiece::Geometric { .. } | PrimePiece::KleinDouble | PrimePiece::TorusBundle { .. } => {}
        PrimePiece::SeifertClosed { seifert } => {
            let p = format!("{path}.seifert");
            validate_seifert(seifert, &p, report);
            if seifert.boundary_count() > 0 {
                report.push(
                    format!("{p}.base.boundary_count"),
                    ViolationCode::ClosedPieceHasBoundary,
                    "a closed Seifert piece has no boundary",
                );
            }
        }
        PrimePiece::Jsj { vertices, edges, monodromy } => validate_graph(vertices, edges, monodromy.as_ref(), path, report),
    }
}

fn validate_seifert(s: &SeifertData, path: &str, report: &mut ValidationReport) {
    for (i, &order) in s.base.cone_orders.iter().enumerate() {
        if order < 2 {
            report.push(
                format!("{path}.base.cone_orders[{i}]"),
                ViolationCode::ConeOrderTooSmall,
                "cone orders must be at least 2",
            );
        }
    }
    for (i, &(alpha, beta)) in s.cone_pairs.iter().enumerate() {
        if alpha < 2 {
            report.push(
                format!("{path}.cone_pairs[{i}]"),
                ViolationCode::ConeOrderTooSmall,
                "fiber multiplicity must be at least 2",
            );
        } else if i64::from(alpha).gcd(&beta) != 1 {
            report.push(
                format!("{path}.cone_pairs[{i}]"),
                ViolationCode::NotCoprime,
                format!("({alpha},{beta}) is not a coprime pair"),
            );
        }
    }
    let mut pair_orders: Vec<u32> = s.cone_pairs.iter().map(|p| p.0).collect();
    let mut base_orders = s.base.cone_orders.clone();
    pair_orders.sort_unstable();
    base_orders.sort_unstable();
    if pair_orders != base_orders {
        report.push(
            format!("{path}.cone_pairs"),
            ViolationCode::ConeOrderMismatch,
            format!("cone order mismatch: pairs have {pair_orders:?}, base has {base_orders:?}"),
        );
    }
    match (s.boundary_count(), s.b) {
        (0, None) => report.push(
            format!("{path}.b"),
            ViolationCode::MissingObstruction,
            "closed Seifert data needs the obstruction term b",
        ),
        (n, Some(_)) if n > 0 => {
            report.push(format!("{path}.b"), ViolationCode::ObstructionWithBoundary, "b is undefined when the base has boundary")
        }
        _ => {}
    }
}

fn validate_graph(
    vertices: &[JsjVertex],
    edges: &[(usize, usize)],
    monodromy: Option<&Mat2Z>,
    path: &str,
    report: &mut ValidationReport,
) {
    if vertices.is_empty() {
        report.push(format!("{path}.vertices"), ViolationCode::EmptyGraph, "a JSJ graph needs at least one vertex");
        return;
    }
    for (i, v) in vertices.iter().enumerate() {
        let vp = format!("{path}.vertices[{i}]");
        match v {
            JsjVertex::HyperbolicCusped { cusps } => {
                if *cusps == 0 {
                    report.push(format!("{vp}.cusps"), ViolationCode::NoCusps, "a cusped hyperbolic piece has at least one cusp");
                }
            }
            JsjVertex::SeifertBounded { seifert } => {
                validate_seifert(seifert, &format!("{vp}.seifert"), report);
                if seifert.boundary_count() == 0 {
                    report.push(
                        format!("{vp}.seifert.base.boundary_count"),
                        ViolationCode::BoundedPieceIsClosed,
                        "a JSJ Seifert piece has at least one boundary torus",
                    );
                }
            }
        }
    }

    let mut degree = vec![0u32; vertices.len()];
    let mut in_range = true;
    for (i, &(u, w)) in edges.iter().enumerate() {
        if u >= vertices.len() || w >= vertices.len() {
            report.push(
                format!("{path}.edges[{i}]"),
                ViolationCode::EdgeOutOfRange,
                format!("edge ({u},{w}) refers to a missing vertex"),
            );
            in_range = false;
            continue;
        }
        degree[u] += 1;
        degree[w] += 1;
    }
    if !in_range {
        return;
    }
    for (i, v) in vertices.iter().enumerate() {
        if degree[i] != v.boundary_tori() {
            report.push(
                format!("{path}.vertices[{i}]"),
                ViolationCode::BoundaryMismatch,
                format!("vertex has {} boundary tori but {} incident edge ends", v.boundary_tori(), degree[i]),
            );
        }
    }
    if !is_connected(vertices.len(), edges) {
        report.push(format!("{path}.edges"), ViolationCode::Disconnected, "a prime manifold has a connected JSJ graph");
    }

    let collar = |v: &JsjVertex| matches!(v, JsjVertex::SeifertBounded { seifert } if seifert.is_product_collar());
    let klein = |v: &JsjVertex| matches!(v, JsjVertex::SeifertBounded { seifert } if seifert.is_twisted_klein_bundle());

    let torus_bundle_shape = vertices.len() == 1 && collar(&vertices[0]) && edges == [(0, 0)];
    if torus_bundle_shape {
        report.push(
            path.to_string(),
            ViolationCode::TorusBundleGraph,
            "non-minimal/geometric: T²×I glued to itself is a torus bundle, use TorusBundle",
        );
    } else if vertices.len() >= 2 {
        for (i, v) in vertices.iter().enumerate() {
            if collar(v) {
                report.push(
                    format!("{path}.vertices[{i}]"),
                    ViolationCode::NonMinimalCollar,
                    "non-minimal: a T²×I piece can be absorbed into a neighbour",
                );
            }
        }
    }
    if vertices.len() == 2 && vertices.iter().all(klein) && edges.len() == 1 {
        report.push(path.to_string(), ViolationCode::KleinDoubleGraph, "non-minimal/geometric: Klein double, use KleinDouble");
    }
    if monodromy.is_some() && !torus_bundle_shape {
        report.push(
            format!("{path}.monodromy"),
            ViolationCode::MonodromyNotApplicable,
            "monodromy is only meaningful for a single T²×I vertex with a self-edge",
        );
    }
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(u, w) in edges {
        let (ru, rw) = (find(&mut parent, u), find(&mut parent, w));
        if ru != rw {
            parent[ru] = rw;
            components -= 1;
        }
    }
    components <= 1
}

/// Canonical form of a description. Idempotent.
pub fn normalize(desc: &ManifoldDescription) -> Result<ManifoldDescription, ModelError> {
    let report = validate(desc);
    if !report.is_normalizable() {
        return Err(ModelError::Invalid(report));
    }
    let mut pieces = Vec::with_capacity(desc.pieces.len());
    for (i, piece) in desc.pieces.iter().enumerate() {
        pieces.push(normalize_piece(piece, &format!("$.pieces[{i}]"))?);
    }
    let nontrivial: Vec<PrimePiece> = pieces.iter().filter(|p| !p.is_s3()).cloned().collect();
    let pieces = if nontrivial.is_empty() { vec![PrimePiece::Spherical { pi1_order: 1 }] } else { nontrivial };
    Ok(ManifoldDescription { name: desc.name.clone(), pieces })
}

fn normalize_piece(piece: &PrimePiece, path: &str) -> Result<PrimePiece, ModelError> {
    let PrimePiece::Jsj { vertices, edges, monodromy } = piece else {
        return Ok(piece.clone());
    };
    let mut scratch = ValidationReport::default();
    validate_graph(vertices, edges, monodromy.as_ref(), path, &mut scratch);
    for v in &scratch.violations {
        match v.code {
            ViolationCode::KleinDoubleGraph => return Ok(PrimePiece::KleinDouble),
            ViolationCode::TorusBundleGraph => {
                return match monodromy {
                    Some(m) => Ok(PrimePiece::TorusBundle { monodromy: *m }),
                    None => Err(ModelError::NormalizationAmbiguous {
                        path: path.to_string(),
                        reason: "T²×I glued to itself needs its gluing monodromy".to_string(),
                    }),
                };
            }
            _ => {}
        }
    }
    Ok(piece.clone())
}

/// Occurrence counts of piece kinds; used in summaries.
pub fn kind_histogram(desc: &ManifoldDescription) -> BTreeMap<&'static str, usize> {
    let mut h = BTreeMap::new();
    for p in &desc.pieces {
        *h.entry(p.kind()).or_insert(0) += 1;
    }
    h
}

/// Fibration Euler number is zero.
pub fn has_zero_euler_number(s: &SeifertData) -> bool {
    s.euler_number().is_some_and(|e| e.is_zero())
}
