use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::tree::{setwise_axis_stabilizer, Axis, AxisStabilizer, TreeBall, Vertex};
use super::word::Word;
use super::BassSerreError;

/// Isomorphism class of a cell stabilizer, as far as the dimension bound
/// needs to know it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerClass {
    Trivial,
    /// A conjugate of a whole vertex group of the splitting.
    Factor,
    /// A nontrivial finite subgroup of an axis stabilizer.
    Finite,
    /// The setwise stabilizer of a coned-off axis.
    VirtuallyCyclic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerRecord {
    pub class: StabilizerClass,
    pub elements: Vec<Word>,
    /// False when `elements` only lists what the word budget reached.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    TreeVertex,
    TreeEdge,
    ConeVertex,
    ConeEdge,
    Triangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellVertex {
    Tree(usize),
    Cone(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub dim: u32,
    pub kind: CellKind,
    pub vertices: Vec<CellVertex>,
    pub stabilizer: StabilizerRecord,
}

#[derive(Debug, Clone)]
pub struct Cone {
    pub axis: Axis,
    pub stabilizer: AxisStabilizer,
}

/// A tree ball with cones attached over chosen axes.
#[derive(Debug, Clone)]
pub struct ConedComplex {
    pub ball: TreeBall,
    pub cones: Vec<Cone>,
    pub cells: Vec<Cell>,
    pub budget: usize,
}

impl ConedComplex {
    pub fn cells_of(&self, kind: CellKind) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.kind == kind)
    }

    pub fn dimension(&self) -> u32 {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn classes(&self) -> BTreeSet<StabilizerClass> {
        self.cells.iter().map(|c| c.stabilizer.class).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut ball = self.ball.to_json();
        ball["budget"] = json!(self.budget);
        ball["cones"] = self
            .cones
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "id": i,
                    "word": c.axis.word.to_string(),
                    "translation_length": c.axis.translation_length,
                    "axis": c.axis.vertices,
                    "stabilizer": c.stabilizer.elements.iter().map(|(w, a)| json!({"element": w.to_string(), "acts_as": a})).collect::<Vec<_>>(),
                    "virtually_cyclic_consistent": c.stabilizer.is_virtually_cyclic_consistent(),
                })
            })
            .collect();
        let mut counts = BTreeMap::new();
        for c in &self.cells {
            *counts.entry(format!("{:?}", c.kind)).or_insert(0usize) += 1;
        }
        ball["cell_counts"] = json!(counts);
        ball
    }
}

/// Attaches one cone per distinct axis: a cone vertex, an edge from it to
/// each axis vertex in the ball, and a triangle over each axis edge.
pub fn cone_off(ball: &TreeBall, axes: &[Axis], budget: usize) -> Result<ConedComplex, BassSerreError> {
    let spec = &ball.spec;
    let mut cells = Vec::new();
    for (i, v) in ball.vertices.iter().enumerate() {
        let class = match v {
            Vertex::Coset { .. } => StabilizerClass::Factor,
            Vertex::Hub { .. } => StabilizerClass::Trivial,
        };
        cells.push(Cell {
            dim: 0,
            kind: CellKind::TreeVertex,
            vertices: vec![CellVertex::Tree(i)],
            stabilizer: StabilizerRecord { class, elements: spec.vertex_stabilizer(v), complete: true },
        });
    }
    for e in &ball.edges {
        cells.push(Cell {
            dim: 1,
            kind: CellKind::TreeEdge,
            vertices: vec![CellVertex::Tree(e.ends.0), CellVertex::Tree(e.ends.1)],
            stabilizer: trivial(),
        });
    }

    let mut seen: Vec<BTreeSet<usize>> = Vec::new();
    let mut cones = Vec::new();
    for axis in axes {
        let set: BTreeSet<usize> = axis.vertices.iter().copied().collect();
        if seen.contains(&set) {
            continue;
        }
        seen.push(set);
        let stabilizer = setwise_axis_stabilizer(axis, ball, budget)?;
        let c = cones.len();
        cells.push(Cell {
            dim: 0,
            kind: CellKind::ConeVertex,
            vertices: vec![CellVertex::Cone(c)],
            stabilizer: StabilizerRecord {
                class: StabilizerClass::VirtuallyCyclic,
                elements: stabilizer.elements.iter().map(|(w, _)| w.clone()).collect(),
                complete: false,
            },
        });
        for (&vi, v) in axis.vertices.iter().zip(&axis.labels) {
            let fixing: Vec<Word> =
                spec.vertex_stabilizer(v).into_iter().filter(|g| matches!(axis.action_of(spec, g), Some(Ok(_)))).collect();
            let class = if fixing.len() > 1 { StabilizerClass::Finite } else { StabilizerClass::Trivial };
            cells.push(Cell {
                dim: 1,
                kind: CellKind::ConeEdge,
                vertices: vec![CellVertex::Tree(vi), CellVertex::Cone(c)],
                stabilizer: StabilizerRecord { class, elements: fixing, complete: true },
            });
        }
        for pair in axis.vertices.windows(2) {
            cells.push(Cell {
                dim: 2,
                kind: CellKind::Triangle,
                vertices: vec![CellVertex::Tree(pair[0]), CellVertex::Tree(pair[1]), CellVertex::Cone(c)],
                stabilizer: trivial(),
            });
        }
        cones.push(Cone { axis: axis.clone(), stabilizer });
    }
    Ok(ConedComplex { ball: ball.clone(), cones, cells, budget })
}

fn trivial() -> StabilizerRecord {
    StabilizerRecord { class: StabilizerClass::Trivial, elements: vec![Word::identity()], complete: true }
}

/// Dimension of the family-relative classifying space assigned to each
/// stabilizer class.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellAssignment(pub BTreeMap<StabilizerClass, u32>);

impl CellAssignment {
    /// Every stabilizer is in the family: dimension 0 for each class.
    pub fn all_in_family() -> Self {
        Self::with_factor(0)
    }

    /// Vertex groups get `factor_gd`; everything else is virtually cyclic or
    /// smaller and gets 0.
    pub fn with_factor(factor_gd: u32) -> Self {
        CellAssignment(BTreeMap::from([
            (StabilizerClass::Trivial, 0),
            (StabilizerClass::Factor, factor_gd),
            (StabilizerClass::Finite, 0),
            (StabilizerClass::VirtuallyCyclic, 0),
        ]))
    }

    pub fn set(mut self, class: StabilizerClass, gd: u32) -> Self {
        self.0.insert(class, gd);
        self
    }
}

/// `max over cells σ of (gd(stabilizer of σ) + dim σ)`.
pub fn pushout_dimension_bound(complex: &ConedComplex, assignment: &CellAssignment) -> Result<u32, BassSerreError> {
    let mut bound = 0;
    for cell in &complex.cells {
        let gd = assignment.0.get(&cell.stabilizer.class).ok_or(BassSerreError::MissingAssignment(cell.stabilizer.class))?;
        bound = bound.max(gd + cell.dim);
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::super::tree::{auto_axes, axis_of, ball};
    use super::super::word::FreeProductSpec;
    use super::*;

    #[test]
    fn bare_ball_bound_is_one() {
        let s = FreeProductSpec::new(vec![2, 3]).unwrap();
        let b = ball(&s, 3).unwrap();
        let c = cone_off(&b, &[], 4).unwrap();
        assert_eq!(c.cells.len(), b.vertices.len() + b.edges.len());
        assert_eq!(pushout_dimension_bound(&c, &CellAssignment::all_in_family()).unwrap(), 1);
    }

    #[test]
    fn missing_assignment() {
        let s = FreeProductSpec::new(vec![2, 2]).unwrap();
        let b = ball(&s, 2).unwrap();
        let c = cone_off(&b, &[], 2).unwrap();
        let partial = CellAssignment::default().set(StabilizerClass::Trivial, 0);
        assert_eq!(pushout_dimension_bound(&c, &partial), Err(BassSerreError::MissingAssignment(StabilizerClass::Factor)));
    }

    #[test]
    fn duplicate_axes_coned_once() {
        let s = FreeProductSpec::new(vec![2, 2]).unwrap();
        let b = ball(&s, 4).unwrap();
        let ab = axis_of(&s.parse_word("ab").unwrap(), &b).unwrap().unwrap();
        let ba = axis_of(&s.parse_word("ba").unwrap(), &b).unwrap().unwrap();
        let c = cone_off(&b, &[ab, ba], 4).unwrap();
        assert_eq!(c.cones.len(), 1);
        assert_eq!(c.dimension(), 2);
        for t in c.cells_of(CellKind::Triangle) {
            assert_eq!(t.vertices.iter().filter(|v| matches!(v, CellVertex::Cone(_))).count(), 1);
        }
    }

    #[test]
    fn three_involutions() {
        let s = FreeProductSpec::new(vec![2, 2, 2]).unwrap();
        let b = ball(&s, 4).unwrap();
        let axes = auto_axes(&b).unwrap();
        assert_eq!(axes.iter().map(|a| a.word.to_string()).collect::<Vec<_>>(), ["ab", "ac", "bc"]);
        let c = cone_off(&b, &axes, 4).unwrap();
        assert_eq!(c.cones.len(), 3);
        let records: Vec<_> = c.cells_of(CellKind::ConeVertex).map(|cell| cell.stabilizer.elements.clone()).collect();
        assert!(records[0] != records[1] && records[1] != records[2] && records[0] != records[2]);
        assert_eq!(pushout_dimension_bound(&c, &CellAssignment::all_in_family()).unwrap(), 2);
        // a vertex class carrying dimension 3 dominates the 2-cells
        assert_eq!(pushout_dimension_bound(&c, &CellAssignment::with_factor(3)).unwrap(), 3);
    }

    #[test]
    fn dihedral_line_cone_is_fixed_by_everything() {
        let s = FreeProductSpec::new(vec![2, 2]).unwrap();
        let b = ball(&s, 6).unwrap();
        let axes = auto_axes(&b).unwrap();
        let c = cone_off(&b, &axes, 5).unwrap();
        assert_eq!(c.cones.len(), 1);
        let all = s.elements_up_to(5, 1000).unwrap();
        assert_eq!(c.cones[0].stabilizer.elements.len(), all.len());
        assert!(c.cones[0].stabilizer.is_virtually_cyclic_consistent());
    }
}
