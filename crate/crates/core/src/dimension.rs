//! Geometric dimension of 3-manifold groups for the families `𝓕ₖ` of
//! virtually-`ℤʳ` subgroups (`r ≤ k`), `k ≥ 2`.
//!
//! Values are assigned per JSJ piece or geometric prime piece, combined by a
//! maximum across a JSJ graph, and combined across the prime decomposition by
//! a three-way case split on the free product. Every evaluation records a
//! [`DerivationTrace`] whose rule ids are listed in [`RULES`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gl2z::{Gl2Error, Mat2Z, MatClass};
use crate::model::{
    has_zero_euler_number, normalize, validate, Geometry, JsjVertex, ManifoldDescription, ModelError, PrimePiece, SeifertData,
};
use crate::orbifold::OrbifoldClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("family index k = {0} is below 2")]
    InvalidFamily(u32),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Matrix(#[from] Gl2Error),
    #[error("unsupported piece at {path}: {reason}")]
    UnsupportedPiece { path: String, reason: String },
}

/// The family index `k`. Every `k ≥ 4` collapses onto `k = 3`, because a
/// 3-manifold group has no `ℤⁿ` subgroup with `n ≥ 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyIndex {
    requested: u32,
    effective: u32,
}

impl FamilyIndex {
    pub const K2: FamilyIndex = FamilyIndex { requested: 2, effective: 2 };
    pub const K3: FamilyIndex = FamilyIndex { requested: 3, effective: 3 };

    pub fn new(k: u32) -> Result<Self, DimensionError> {
        match k {
            0 | 1 => Err(DimensionError::InvalidFamily(k)),
            2 => Ok(Self::K2),
            _ => Ok(FamilyIndex { requested: k, effective: 3 }),
        }
    }

    pub fn requested(&self) -> u32 {
        self.requested
    }

    /// 2 or 3.
    pub fn effective(&self) -> u32 {
        self.effective
    }

    pub fn is_clamped(&self) -> bool {
        self.requested != self.effective
    }

    pub fn is_k2(&self) -> bool {
        self.effective == 2
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clamped() {
            write!(f, "k={} (evaluated as k=3)", self.requested)
        } else {
            write!(f, "k={}", self.requested)
        }
    }
}

/// A rule of the engine. Ids are stable and documented in `docs/rules.md`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: &'static str,
    pub summary: &'static str,
}

macro_rules! rules {
    ($($name:ident = $id:literal : $summary:literal;)*) => {
        $(pub const $name: Rule = Rule { id: $id, summary: $summary };)*
        /// Every rule the engine can cite in a trace.
        pub const RULES: &[Rule] = &[$($name),*];
    };
}

rules! {
    RULE_FINITE = "finite-group": "finite fundamental group lies in every family: 0";
    RULE_S2XE = "s2xe-virtually-cyclic": "S²×E manifolds have virtually cyclic groups: 0";
    RULE_HYPERBOLIC = "hyperbolic": "finite-volume hyperbolic piece, closed or cusped: 3 for every k";
    RULE_SEIFERT_SMALL_BASE = "seifert-small-base": "Seifert piece over a bad or spherical base is virtually cyclic: 0";
    RULE_SEIFERT_HYPERBOLIC_BASE = "seifert-hyperbolic-base": "Seifert piece over a hyperbolic base (also H²×E and PSL₂ geometry): 2";
    RULE_SEIFERT_FLAT_EUCLIDEAN = "seifert-flat-euclidean": "closed Seifert piece over a flat base with Euler number 0 is Euclidean: 5 for k=2, 0 for k≥3";
    RULE_SEIFERT_FLAT_NIL = "seifert-flat-nil": "closed Seifert piece over a flat base with nonzero Euler number is Nil: 3";
    RULE_SEIFERT_FLAT_BOUNDED = "seifert-flat-bounded": "bounded Seifert piece over a flat base (T²×I or twisted I-bundle) is virtually ℤ²: 0";
    RULE_SEIFERT_ELEMENTARY = "seifert-elementary-base": "bounded Seifert piece over a disk with at most one cone point is a solid torus: 0";
    RULE_EUCLIDEAN = "euclidean": "Euclidean geometry, virtually ℤ³: 5 for k=2, 0 for k≥3";
    RULE_NIL = "nil": "Nil geometry: 3 for every k";
    RULE_SOL = "sol": "Sol geometry (Anosov torus bundle or doubled twisted I-bundle): 2 for every k";
    RULE_TORUS_BUNDLE_ELLIPTIC = "torus-bundle-elliptic": "torus bundle with elliptic monodromy: 5 for k=2, 0 for k≥3";
    RULE_TORUS_BUNDLE_PARABOLIC = "torus-bundle-parabolic": "torus bundle with parabolic monodromy: 3 for every k";
    RULE_TORUS_BUNDLE_ANOSOV = "torus-bundle-anosov": "torus bundle with hyperbolic monodromy: 2 for every k";
    RULE_JSJ_MAX = "jsj-max": "prime manifold with a JSJ graph: maximum over its pieces";
    RULE_PRIME_SINGLE = "prime-single": "a single prime summand: its own value";
    RULE_PRIME_DIHEDRAL = "prime-dihedral": "RP³#RP³ has infinite dihedral group: 0";
    RULE_PRIME_ALL_IN_FAMILY = "prime-all-in-family": "two or more summands, all groups in the family, not virtually cyclic: 2";
    RULE_PRIME_MAX = "prime-max": "otherwise: maximum over the summands at the same k";
}

pub fn rule_by_id(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// JSON path of the node this step evaluates.
    pub path: String,
    pub rule: String,
    pub k: u32,
    pub inputs: String,
    pub value: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    fn extend(&mut self, other: DerivationTrace) {
        self.steps.extend(other.steps);
    }

    pub fn rule_ids(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().map(|s| s.rule.as_str())
    }
}

/// A dimension value with its derivation. `value ∈ {0, 2, 3, 5}`; the last
/// trace step carries the same value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdResult {
    pub value: u32,
    pub trace: DerivationTrace,
}

impl GdResult {
    fn leaf(path: &str, rule: Rule, k: FamilyIndex, inputs: impl Into<String>, value: u32) -> Self {
        let mut trace = DerivationTrace::default();
        trace.steps.push(step(path, rule, k, inputs, value));
        GdResult::from_trace(value, trace)
    }

    fn from_trace(value: u32, trace: DerivationTrace) -> Self {
        assert!(matches!(value, 0 | 2 | 3 | 5), "dimension value {value} outside {{0,2,3,5}}");
        debug_assert_eq!(trace.steps.last().map(|s| s.value), Some(value));
        GdResult { value, trace }
    }
}

fn step(path: &str, rule: Rule, k: FamilyIndex, inputs: impl Into<String>, value: u32) -> TraceStep {
    TraceStep { path: path.to_string(), rule: rule.id.to_string(), k: k.effective(), inputs: inputs.into(), value }
}

fn by_k(k: FamilyIndex, at2: u32, at3: u32) -> u32 {
    if k.is_k2() {
        at2
    } else {
        at3
    }
}

pub fn torus_bundle_gd(monodromy: &Mat2Z, k: FamilyIndex) -> GdResult {
    torus_bundle_gd_at(monodromy, k, "$")
}

fn torus_bundle_gd_at(monodromy: &Mat2Z, k: FamilyIndex, path: &str) -> GdResult {
    let class = monodromy.classify();
    let inputs = format!("monodromy {monodromy} is {class}");
    match class {
        MatClass::Elliptic { .. } => GdResult::leaf(path, RULE_TORUS_BUNDLE_ELLIPTIC, k, inputs, by_k(k, 5, 0)),
        MatClass::Parabolic => GdResult::leaf(path, RULE_TORUS_BUNDLE_PARABOLIC, k, inputs, 3),
        MatClass::Hyperbolic => GdResult::leaf(path, RULE_TORUS_BUNDLE_ANOSOV, k, inputs, 2),
    }
}

/// Value for a manifold given only by its geometry.
pub fn geometry_gd(geometry: Geometry, k: FamilyIndex) -> GdResult {
    geometry_gd_at(geometry, k, "$")
}

fn geometry_gd_at(geometry: Geometry, k: FamilyIndex, path: &str) -> GdResult {
    let inputs = format!("geometry {geometry}");
    match geometry {
        Geometry::S3 => GdResult::leaf(path, RULE_FINITE, k, inputs, 0),
        Geometry::S2xE => GdResult::leaf(path, RULE_S2XE, k, inputs, 0),
        Geometry::H3 => GdResult::leaf(path, RULE_HYPERBOLIC, k, inputs, 3),
        Geometry::E3 => GdResult::leaf(path, RULE_EUCLIDEAN, k, inputs, by_k(k, 5, 0)),
        Geometry::Nil => GdResult::leaf(path, RULE_NIL, k, inputs, 3),
        Geometry::Sol => GdResult::leaf(path, RULE_SOL, k, inputs, 2),
        Geometry::H2xE | Geometry::PSL2R => GdResult::leaf(path, RULE_SEIFERT_HYPERBOLIC_BASE, k, inputs, 2),
    }
}

fn seifert_gd(s: &SeifertData, k: FamilyIndex, path: &str) -> Result<GdResult, DimensionError> {
    let class = s.base.classify();
    let chi = s.base.euler_characteristic_orb();
    let mut inputs = format!("base {} is {class} (χ = {chi})", s.base.describe());
    let unsupported = |reason: &str| DimensionError::UnsupportedPiece { path: path.to_string(), reason: reason.to_string() };
    let closed = s.boundary_count() == 0;
    let r = match (class, closed) {
        (OrbifoldClass::Bad | OrbifoldClass::Spherical, true) => GdResult::leaf(path, RULE_SEIFERT_SMALL_BASE, k, inputs, 0),
        (OrbifoldClass::Hyperbolic, _) => GdResult::leaf(path, RULE_SEIFERT_HYPERBOLIC_BASE, k, inputs, 2),
        (OrbifoldClass::Flat, true) => {
            let e = s.euler_number().ok_or_else(|| unsupported("closed Seifert data without b"))?;
            inputs.push_str(&format!(", Euler number e = {e}"));
            if has_zero_euler_number(s) {
                GdResult::leaf(path, RULE_SEIFERT_FLAT_EUCLIDEAN, k, inputs, by_k(k, 5, 0))
            } else {
                GdResult::leaf(path, RULE_SEIFERT_FLAT_NIL, k, inputs, 3)
            }
        }
        (OrbifoldClass::Flat, false) => GdResult::leaf(path, RULE_SEIFERT_FLAT_BOUNDED, k, inputs, 0),
        (OrbifoldClass::Elementary, false) => GdResult::leaf(path, RULE_SEIFERT_ELEMENTARY, k, inputs, 0),
        (OrbifoldClass::Elementary, true) => return Err(unsupported("closed base classified elementary")),
        (OrbifoldClass::Bad | OrbifoldClass::Spherical, false) => {
            return Err(unsupported("bounded base classified bad or spherical"))
        }
    };
    Ok(r)
}

/// Value of a JSJ piece.
pub fn vertex_gd(vertex: &JsjVertex, k: FamilyIndex) -> Result<GdResult, DimensionError> {
    vertex_gd_at(vertex, k, "$")
}

fn vertex_gd_at(vertex: &JsjVertex, k: FamilyIndex, path: &str) -> Result<GdResult, DimensionError> {
    match vertex {
        JsjVertex::HyperbolicCusped { cusps } => {
            Ok(GdResult::leaf(path, RULE_HYPERBOLIC, k, format!("cusped hyperbolic piece with {cusps} cusp(s)"), 3))
        }
        JsjVertex::SeifertBounded { seifert } => seifert_gd(seifert, k, &format!("{path}.seifert")),
    }
}

/// Value of a prime piece that is not a JSJ graph.
pub fn piece_gd(piece: &PrimePiece, k: FamilyIndex) -> Result<GdResult, DimensionError> {
    piece_gd_at(piece, k, "$")
}

fn piece_gd_at(piece: &PrimePiece, k: FamilyIndex, path: &str) -> Result<GdResult, DimensionError> {
    match piece {
        PrimePiece::Spherical { pi1_order } => {
            Ok(GdResult::leaf(path, RULE_FINITE, k, format!("finite fundamental group of order {pi1_order}"), 0))
        }
        PrimePiece::Geometric { geometry } => Ok(geometry_gd_at(*geometry, k, path)),
        PrimePiece::TorusBundle { monodromy } => Ok(torus_bundle_gd_at(monodromy, k, path)),
        PrimePiece::KleinDouble => {
            Ok(GdResult::leaf(path, RULE_SOL, k, "double of the twisted I-bundle over the Klein bottle", 2))
        }
        PrimePiece::SeifertClosed { seifert } => seifert_gd(seifert, k, &format!("{path}.seifert")),
        PrimePiece::Jsj { .. } => Err(DimensionError::UnsupportedPiece {
            path: path.to_string(),
            reason: "JSJ graphs are combined with jsj_combine".to_string(),
        }),
    }
}

/// Maximum over the pieces of a JSJ graph.
pub fn jsj_combine(vertices: &[JsjVertex], k: FamilyIndex) -> Result<GdResult, DimensionError> {
    jsj_combine_at(vertices, k, "$")
}

fn jsj_combine_at(vertices: &[JsjVertex], k: FamilyIndex, path: &str) -> Result<GdResult, DimensionError> {
    if vertices.is_empty() {
        return Err(DimensionError::UnsupportedPiece { path: path.to_string(), reason: "empty JSJ graph".to_string() });
    }
    let mut trace = DerivationTrace::default();
    let mut values = Vec::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        let r = vertex_gd_at(v, k, &format!("{path}.vertices[{i}]"))?;
        values.push(r.value);
        trace.extend(r.trace);
    }
    let value = values.iter().copied().max().unwrap_or(0);
    trace.steps.push(step(path, RULE_JSJ_MAX, k, format!("max{values:?}"), value));
    Ok(GdResult::from_trace(value, trace))
}

/// Value of any prime piece, routing JSJ graphs through [`jsj_combine`].
pub fn prime_value(piece: &PrimePiece, k: FamilyIndex) -> Result<GdResult, DimensionError> {
    prime_value_at(piece, k, "$")
}

fn prime_value_at(piece: &PrimePiece, k: FamilyIndex, path: &str) -> Result<GdResult, DimensionError> {
    match piece {
        PrimePiece::Jsj { vertices, .. } => jsj_combine_at(vertices, k, path),
        other => piece_gd_at(other, k, path),
    }
}

/// Whether the fundamental group of a prime piece lies in `𝓕ₖ`.
///
/// A group lies in a family exactly when a point is a model for its
/// classifying space, so this is `gd = 0`.
pub fn in_family(piece: &PrimePiece, k: FamilyIndex) -> bool {
    prime_value(piece, k).is_ok_and(|r| r.value == 0)
}

/// A free product of two or more nontrivial groups is virtually cyclic only
/// for `ℤ₂ ∗ ℤ₂`.
pub fn is_virtually_cyclic_free_product(pieces: &[PrimePiece]) -> bool {
    matches!(pieces, [PrimePiece::Spherical { pi1_order: 2 }, PrimePiece::Spherical { pi1_order: 2 }])
}

/// Combination across a (normalized) prime decomposition.
pub fn prime_combine(pieces: &[PrimePiece], k: FamilyIndex) -> Result<GdResult, DimensionError> {
    let mut trace = DerivationTrace::default();
    let mut values = Vec::with_capacity(pieces.len());
    for (i, p) in pieces.iter().enumerate() {
        let r = prime_value_at(p, k, &format!("$.pieces[{i}]"))?;
        values.push(r.value);
        trace.extend(r.trace);
    }
    let (rule, value, inputs) = match pieces.len() {
        0 => {
            return Err(DimensionError::UnsupportedPiece { path: "$.pieces".to_string(), reason: "no prime pieces".to_string() })
        }
        1 => (RULE_PRIME_SINGLE, values[0], format!("r = 1, value {}", values[0])),
        r if is_virtually_cyclic_free_product(pieces) => (RULE_PRIME_DIHEDRAL, 0, format!("r = {r}, ℤ₂∗ℤ₂")),
        r if values.iter().all(|&v| v == 0) => (RULE_PRIME_ALL_IN_FAMILY, 2, format!("r = {r}, every summand in the family")),
        r => {
            let m = *values.iter().max().expect("nonempty");
            (RULE_PRIME_MAX, m, format!("r = {r}, max{values:?}"))
        }
    };
    trace.steps.push(step("$", rule, k, inputs, value));
    Ok(GdResult::from_trace(value, trace))
}

/// The piece carries a `ℤ³` subgroup (Euclidean geometry).
pub fn is_euclidean_piece(piece: &PrimePiece) -> bool {
    match piece {
        PrimePiece::Geometric { geometry } => *geometry == Geometry::E3,
        PrimePiece::TorusBundle { monodromy } => matches!(monodromy.classify(), MatClass::Elliptic { .. }),
        PrimePiece::SeifertClosed { seifert } => {
            seifert.boundary_count() == 0 && seifert.base.classify() == OrbifoldClass::Flat && has_zero_euler_number(seifert)
        }
        _ => false,
    }
}

/// Result of evaluating a whole description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub name: String,
    pub k2: GdResult,
    pub k3plus: GdResult,
    /// Maximal rank of a free abelian subgroup: 3 iff a prime piece is
    /// Euclidean, else at most 2.
    pub rank_cap: u32,
    pub normalized: ManifoldDescription,
}

impl DimensionReport {
    pub fn value_at(&self, k: FamilyIndex) -> &GdResult {
        if k.is_k2() {
            &self.k2
        } else {
            &self.k3plus
        }
    }
}

/// Normalizes a description. Fails with a report when it has violations
/// other than the rewritable ones.
pub fn prepare(desc: &ManifoldDescription) -> Result<ManifoldDescription, DimensionError> {
    let report = validate(desc);
    if !report.is_normalizable() {
        return Err(ModelError::Invalid(report).into());
    }
    let normalized = normalize(desc)?;
    debug_assert!(validate(&normalized).is_valid());
    Ok(normalized)
}

pub fn compute_at(desc: &ManifoldDescription, k: FamilyIndex) -> Result<GdResult, DimensionError> {
    let normalized = prepare(desc)?;
    prime_combine(&normalized.pieces, k)
}

pub fn compute(desc: &ManifoldDescription) -> Result<DimensionReport, DimensionError> {
    let normalized = prepare(desc)?;
    let k2 = prime_combine(&normalized.pieces, FamilyIndex::K2)?;
    let k3plus = prime_combine(&normalized.pieces, FamilyIndex::K3)?;
    let rank_cap = if normalized.pieces.iter().any(is_euclidean_piece) { 3 } else { 2 };
    Ok(DimensionReport { name: desc.name.clone(), k2, k3plus, rank_cap, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::OrbifoldBase;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::new(a, b, c, d).unwrap()
    }

    fn geo(g: Geometry) -> PrimePiece {
        PrimePiece::Geometric { geometry: g }
    }

    fn k(n: u32) -> FamilyIndex {
        FamilyIndex::new(n).unwrap()
    }

    #[test]
    fn family_index_clamps() {
        assert_eq!(k(7).effective(), 3);
        assert!(k(7).is_clamped());
        assert!(!k(3).is_clamped());
        assert_eq!(FamilyIndex::new(1), Err(DimensionError::InvalidFamily(1)));
    }

    #[test]
    fn piece_examples() {
        let cusped = JsjVertex::HyperbolicCusped { cusps: 2 };
        assert_eq!(vertex_gd(&cusped, FamilyIndex::K2).unwrap().value, 3);
        let s237 = PrimePiece::SeifertClosed { seifert: SeifertData::closed(OrbifoldBase::sphere(vec![2, 3, 7]), -1) };
        assert_eq!(piece_gd(&s237, FamilyIndex::K2).unwrap().value, 2);
        assert_eq!(piece_gd(&geo(Geometry::E3), FamilyIndex::K3).unwrap().value, 0);
        assert_eq!(piece_gd(&geo(Geometry::E3), FamilyIndex::K2).unwrap().value, 5);
        assert!(
            piece_gd(&PrimePiece::Jsj { vertices: vec![cusped], edges: vec![(0, 0)], monodromy: None }, FamilyIndex::K2).is_err()
        );
    }

    #[test]
    fn torus_bundle_examples() {
        assert_eq!(torus_bundle_gd(&m(0, -1, 1, 0), FamilyIndex::K2).value, 5);
        assert_eq!(torus_bundle_gd(&m(1, 3, 0, 1), FamilyIndex::K2).value, 3);
        assert_eq!(torus_bundle_gd(&m(2, 1, 1, 1), FamilyIndex::K3).value, 2);
        assert_eq!(torus_bundle_gd(&m(0, -1, 1, 0), FamilyIndex::K3).value, 0);
    }

    #[test]
    fn family_membership() {
        assert!(in_family(&PrimePiece::rp3(), FamilyIndex::K2));
        assert!(!in_family(&geo(Geometry::E3), FamilyIndex::K2));
        assert!(in_family(&geo(Geometry::E3), FamilyIndex::K3));
        assert!(in_family(&geo(Geometry::S2xE), FamilyIndex::K2));
        assert!(in_family(&PrimePiece::TorusBundle { monodromy: m(0, 1, 1, 0) }, FamilyIndex::K3));
        assert!(!in_family(&PrimePiece::TorusBundle { monodromy: m(0, 1, 1, 0) }, FamilyIndex::K2));
        let g =
            PrimePiece::Jsj { vertices: vec![JsjVertex::HyperbolicCusped { cusps: 2 }], edges: vec![(0, 0)], monodromy: None };
        assert!(!in_family(&g, FamilyIndex::K2));
        assert!(!in_family(&g, FamilyIndex::K3));
        assert!(!in_family(&PrimePiece::KleinDouble, FamilyIndex::K3));
    }

    #[test]
    fn virtually_cyclic_products() {
        let s = |n| PrimePiece::Spherical { pi1_order: n };
        assert!(is_virtually_cyclic_free_product(&[s(2), s(2)]));
        assert!(!is_virtually_cyclic_free_product(&[s(2), s(3)]));
        assert!(!is_virtually_cyclic_free_product(&[s(2), geo(Geometry::H3)]));
        assert!(!is_virtually_cyclic_free_product(&[s(2), s(2), s(2)]));
    }

    #[test]
    fn jsj_examples() {
        let hyp_seifert =
            JsjVertex::SeifertBounded { seifert: SeifertData::bounded(OrbifoldBase::sphere(vec![2, 3]).with_boundary(1)) };
        let cusped = JsjVertex::HyperbolicCusped { cusps: 1 };
        assert_eq!(jsj_combine(&[cusped.clone(), hyp_seifert.clone()], FamilyIndex::K2).unwrap().value, 3);
        assert_eq!(jsj_combine(&[hyp_seifert.clone(), hyp_seifert], FamilyIndex::K2).unwrap().value, 2);
        let r = jsj_combine(&[JsjVertex::HyperbolicCusped { cusps: 2 }], FamilyIndex::K2).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.trace.steps.last().unwrap().rule, "jsj-max");
    }

    #[test]
    fn prime_examples() {
        let rp3 = PrimePiece::rp3;
        assert_eq!(prime_combine(&[rp3(), rp3()], FamilyIndex::K2).unwrap().value, 0);
        assert_eq!(prime_combine(&[rp3(), rp3(), rp3()], FamilyIndex::K2).unwrap().value, 2);
        let mixed = [geo(Geometry::E3), rp3()];
        let r2 = prime_combine(&mixed, FamilyIndex::K2).unwrap();
        let r3 = prime_combine(&mixed, FamilyIndex::K3).unwrap();
        assert_eq!((r2.value, r3.value), (5, 2));
        assert_eq!(r2.trace.steps.last().unwrap().rule, "prime-max");
        assert_eq!(r3.trace.steps.last().unwrap().rule, "prime-all-in-family");
    }

    #[test]
    fn compute_examples() {
        let rep = compute(&ManifoldDescription::new("sol", vec![geo(Geometry::Sol)])).unwrap();
        assert_eq!((rep.k2.value, rep.k3plus.value, rep.rank_cap), (2, 2, 2));
        let rep = compute(&ManifoldDescription::new("tb", vec![PrimePiece::TorusBundle { monodromy: m(0, -1, 1, 0) }])).unwrap();
        assert_eq!((rep.k2.value, rep.k3plus.value, rep.rank_cap), (5, 0, 3));
        let rep = compute(&ManifoldDescription::new("d", vec![PrimePiece::rp3(), PrimePiece::rp3()])).unwrap();
        assert_eq!((rep.k2.value, rep.k3plus.value, rep.rank_cap), (0, 0, 2));
    }

    #[test]
    fn compute_rejects_invalid_input() {
        let d = ManifoldDescription::new("empty", vec![]);
        assert!(matches!(compute(&d), Err(DimensionError::Model(ModelError::Invalid(_)))));
    }

    #[test]
    fn trace_ends_with_result() {
        let d = ManifoldDescription::new("x", vec![geo(Geometry::H3), PrimePiece::rp3(), geo(Geometry::Nil)]);
        let rep = compute(&d).unwrap();
        for r in [&rep.k2, &rep.k3plus] {
            assert_eq!(r.trace.steps.last().unwrap().value, r.value);
            assert_eq!(r.trace.steps.len(), 4);
        }
    }

    #[test]
    fn rule_ids_unique() {
        let mut ids: Vec<&str> = RULES.iter().map(|r| r.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), RULES.len());
        assert!(rule_by_id("jsj-max").is_some());
    }
}
