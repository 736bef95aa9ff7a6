//! Finite balls in the Bass-Serre tree of a free product of finite cyclic
//! groups, and hyperbolic axes found by displacement minimization.
//!
//! With two factors the tree has a vertex per coset `gΓᵢ` and an edge per
//! element `g` joining `gΓ₁` to `gΓ₂`. With three or more factors the graph
//! of groups is a star with trivial centre: hub vertices `g` are joined to
//! each `gΓᵢ` by the edge `(g, i)`. Edge stabilizers are trivial either way.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::word::{factor_letter, FreeProductSpec, Word};
use super::BassSerreError;

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeShape {
    Segment,
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// The coset `rep·Γ_factor`; `rep` never ends in a `factor` syllable.
    Coset { rep: Word, factor: usize },
    /// Trivial-stabilizer centre vertex of the star-shaped splitting.
    Hub { elem: Word },
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Coset { rep, factor } if rep.is_identity() => write!(f, "Γ{}", factor_letter(*factor)),
            Vertex::Coset { rep, factor } => write!(f, "{rep}Γ{}", factor_letter(*factor)),
            Vertex::Hub { elem } => write!(f, "{elem}·1"),
        }
    }
}

/// Edge coset label: the element `g` and, for star trees, the factor side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub elem: Word,
    pub factor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub label: EdgeLabel,
    pub ends: (usize, usize),
}

impl FreeProductSpec {
    pub fn shape(&self) -> TreeShape {
        if self.rank() == 2 {
            TreeShape::Segment
        } else {
            TreeShape::Star
        }
    }

    pub fn base_vertex(&self) -> Vertex {
        match self.shape() {
            TreeShape::Segment => Vertex::Coset { rep: Word::identity(), factor: 0 },
            TreeShape::Star => Vertex::Hub { elem: Word::identity() },
        }
    }

    /// Left action `g · v`.
    pub fn act(&self, g: &Word, v: &Vertex) -> Vertex {
        match v {
            Vertex::Coset { rep, factor } => Vertex::Coset { rep: self.coset_rep(&self.mul(g, rep), *factor), factor: *factor },
            Vertex::Hub { elem } => Vertex::Hub { elem: self.mul(g, elem) },
        }
    }

    pub fn act_edge(&self, g: &Word, e: &EdgeLabel) -> EdgeLabel {
        EdgeLabel { elem: self.mul(g, &e.elem), factor: e.factor }
    }

    pub fn edge_ends(&self, e: &EdgeLabel) -> (Vertex, Vertex) {
        match e.factor {
            None => (
                Vertex::Coset { rep: self.coset_rep(&e.elem, 0), factor: 0 },
                Vertex::Coset { rep: self.coset_rep(&e.elem, 1), factor: 1 },
            ),
            Some(i) => (Vertex::Hub { elem: e.elem.clone() }, Vertex::Coset { rep: self.coset_rep(&e.elem, i), factor: i }),
        }
    }

    /// Neighbours of `v` in the full tree with the connecting edges.
    pub fn neighbors(&self, v: &Vertex) -> Vec<(Vertex, EdgeLabel)> {
        let mut out = Vec::new();
        match (v, self.shape()) {
            (Vertex::Coset { rep, factor }, shape) => {
                for exp in 0..i64::from(self.order(*factor)) {
                    let s = self.normal_form([(*factor, exp)]).expect("factor in range");
                    let g = self.mul(rep, &s);
                    match shape {
                        TreeShape::Segment => {
                            let other = 1 - factor;
                            out.push((
                                Vertex::Coset { rep: self.coset_rep(&g, other), factor: other },
                                EdgeLabel { elem: g, factor: None },
                            ));
                        }
                        TreeShape::Star => {
                            out.push((Vertex::Hub { elem: g.clone() }, EdgeLabel { elem: g, factor: Some(*factor) }));
                        }
                    }
                }
            }
            (Vertex::Hub { elem }, _) => {
                for i in 0..self.rank() {
                    out.push((
                        Vertex::Coset { rep: self.coset_rep(elem, i), factor: i },
                        EdgeLabel { elem: elem.clone(), factor: Some(i) },
                    ));
                }
            }
        }
        out
    }

    /// Geodesic from the base vertex to `v`, both ends included.
    pub fn path_from_base(&self, v: &Vertex) -> Vec<Vertex> {
        let (g, tail) = match v {
            Vertex::Hub { elem } => (elem, None),
            Vertex::Coset { rep, factor } => (rep, Some(*factor)),
        };
        let mut star = vec![Vertex::Hub { elem: Word::identity() }];
        for (j, s) in g.syllables().iter().enumerate() {
            star.push(Vertex::Coset { rep: g.prefix(j), factor: s.factor });
            star.push(Vertex::Hub { elem: g.prefix(j + 1) });
        }
        if let Some(i) = tail {
            star.push(Vertex::Coset { rep: g.clone(), factor: i });
        }
        match self.shape() {
            TreeShape::Star => star,
            TreeShape::Segment => {
                let base = self.base_vertex();
                let mut cosets: Vec<Vertex> = star.into_iter().filter(|x| matches!(x, Vertex::Coset { .. })).collect();
                if cosets.first() != Some(&base) {
                    cosets.insert(0, base);
                }
                cosets
            }
        }
    }

    /// Exact distance in the full tree.
    pub fn distance(&self, u: &Vertex, v: &Vertex) -> usize {
        let p = self.path_from_base(u);
        let q = self.path_from_base(v);
        let common = p.iter().zip(&q).take_while(|(x, y)| x == y).count();
        (p.len() - common) + (q.len() - common)
    }

    /// Stabilizer of a vertex, computed exactly: `rep·Γᵢ·rep⁻¹` for cosets and
    /// trivial for hubs.
    pub fn vertex_stabilizer(&self, v: &Vertex) -> Vec<Word> {
        match v {
            Vertex::Hub { .. } => vec![Word::identity()],
            Vertex::Coset { rep, factor } => (0..i64::from(self.order(*factor)))
                .map(|e| self.conjugate(rep, &self.normal_form([(*factor, e)]).expect("factor in range")))
                .collect(),
        }
    }

    /// Translation length of `w` read off symbolically from its cyclic
    /// reduction, in tree edges.
    pub fn symbolic_translation_length(&self, w: &Word) -> usize {
        let (_, core) = self.cyclic_reduction(w);
        if core.len() < 2 {
            return 0;
        }
        match self.shape() {
            TreeShape::Segment => core.len(),
            TreeShape::Star => 2 * core.len(),
        }
    }
}

/// The ball of a given radius about the base vertex.
#[derive(Debug, Clone)]
pub struct TreeBall {
    pub spec: FreeProductSpec,
    pub radius: usize,
    pub vertices: Vec<Vertex>,
    pub depth: Vec<usize>,
    pub edges: Vec<TreeEdge>,
    index: HashMap<Vertex, usize>,
    adjacency: Vec<Vec<usize>>,
}

pub fn ball(spec: &FreeProductSpec, radius: usize) -> Result<TreeBall, BassSerreError> {
    ball_with_cap(spec, radius, DEFAULT_VERTEX_CAP)
}

pub fn ball_with_cap(spec: &FreeProductSpec, radius: usize, cap: usize) -> Result<TreeBall, BassSerreError> {
    let base = spec.base_vertex();
    let mut vertices = vec![base.clone()];
    let mut depth = vec![0];
    let mut index = HashMap::from([(base, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        for (n, _) in spec.neighbors(&vertices[i]) {
            if index.contains_key(&n) {
                continue;
            }
            if vertices.len() >= cap {
                return Err(BassSerreError::ResourceLimit { what: "tree ball vertices", cap });
            }
            index.insert(n.clone(), vertices.len());
            queue.push_back(vertices.len());
            vertices.push(n);
            depth.push(depth[i] + 1);
        }
    }
    // collect every edge with both ends in the ball, independently of the BFS
    let mut seen = HashMap::new();
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for (n, label) in spec.neighbors(v) {
            let Some(&j) = index.get(&n) else { continue };
            if seen.insert(label.clone(), ()).is_some() {
                continue;
            }
            edges.push(TreeEdge { label, ends: (i, j) });
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }
    Ok(TreeBall { spec: spec.clone(), radius, vertices, depth, edges, index, adjacency })
}

impl TreeBall {
    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn edge_between(&self, i: usize, j: usize) -> Option<&TreeEdge> {
        self.edges.iter().find(|e| e.ends == (i, j) || e.ends == (j, i))
    }

    /// `|V| = |E| + 1` and union-find meets no cycle.
    pub fn is_tree(&self) -> bool {
        if self.vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.ends.0), find(&mut parent, e.ends.1));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// A ball whose interior vertices all have degree ≤ 2 is a segment.
    pub fn is_line(&self) -> bool {
        self.is_tree() && self.adjacency.iter().all(|n| n.len() <= 2)
    }

    /// Checks that consecutive entries are adjacent ball vertices.
    pub fn check_path(&self, path: &[usize]) -> Result<(), BassSerreError> {
        if path.is_empty() || path.iter().any(|&i| i >= self.vertices.len()) {
            return Err(BassSerreError::NotAPath);
        }
        for w in path.windows(2) {
            if !self.adjacency[w[0]].contains(&w[1]) {
                return Err(BassSerreError::NotAPath);
            }
        }
        Ok(())
    }

    /// Geodesic between two ball vertices, as ball indices.
    pub fn geodesic(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.vertices.len()];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(i) = queue.pop_front() {
            if i == to {
                break;
            }
            for &j in &self.adjacency[i] {
                if prev[j] == usize::MAX {
                    prev[j] = i;
                    queue.push_back(j);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.spec.factor_orders(),
            "shape": self.spec.shape(),
            "radius": self.radius,
            "tree": self.is_tree(),
            "vertices": self.vertices.iter().enumerate().map(|(i, v)| {
                let (kind, factor) = match v {
                    Vertex::Coset { factor, .. } => ("coset", Some(*factor)),
                    Vertex::Hub { .. } => ("hub", None),
                };
                json!({"id": i, "label": v.to_string(), "kind": kind, "factor": factor, "depth": self.depth[i]})
            }).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "label": e.label.elem.to_string(),
                "from": e.ends.0,
                "to": e.ends.1,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Vertices of the ball on the axis of a hyperbolic element, in the direction
/// the element translates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub word: Word,
    pub translation_length: usize,
    pub vertices: Vec<usize>,
    pub labels: Vec<Vertex>,
}

/// How an element acts on an axis it preserves, in axis coordinates where the
/// first axis vertex sits at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "action", content = "amount")]
pub enum AxisAction {
    /// `x ↦ x + t`
    Translation(i64),
    /// `x ↦ c − x`
    Reflection(i64),
}

impl Axis {
    pub fn on_axis(&self, spec: &FreeProductSpec, v: &Vertex) -> bool {
        spec.distance(v, &spec.act(&self.word, v)) == self.translation_length
    }

    /// Signed position of an axis vertex relative to the first ball vertex.
    pub fn position(&self, spec: &FreeProductSpec, v: &Vertex) -> i64 {
        let d0 = spec.distance(&self.labels[0], v) as i64;
        if d0 == 0 {
            return 0;
        }
        let d1 = spec.distance(&self.labels[1], v) as i64;
        if d1 < d0 {
            d0
        } else {
            -d0
        }
    }

    /// The action of `g` when it maps every ball vertex of the axis back into
    /// the axis as an isometry of the line; `None` if it leaves the axis.
    /// `Some(Err(_))` signals an image on the axis that is neither a
    /// translation nor a reflection.
    pub fn action_of(&self, spec: &FreeProductSpec, g: &Word) -> Option<Result<AxisAction, Vec<i64>>> {
        let images: Vec<Vertex> = self.labels.iter().map(|v| spec.act(g, v)).collect();
        if !images.iter().all(|u| self.on_axis(spec, u)) {
            return None;
        }
        let pos: Vec<i64> = images.iter().map(|u| self.position(spec, u)).collect();
        let p0 = pos[0];
        if pos.iter().enumerate().all(|(j, &p)| p == p0 + j as i64) {
            Some(Ok(AxisAction::Translation(p0)))
        } else if pos.iter().enumerate().all(|(j, &p)| p == p0 - j as i64) {
            Some(Ok(AxisAction::Reflection(p0)))
        } else {
            Some(Err(pos))
        }
    }
}

/// Axis of `w` inside the ball, or `None` when `w` is elliptic.
pub fn axis_of(w: &Word, ball: &TreeBall) -> Result<Option<Axis>, BassSerreError> {
    let spec = &ball.spec;
    let displacement: Vec<usize> = ball.vertices.iter().map(|v| spec.distance(v, &spec.act(w, v))).collect();
    let min = *displacement.iter().min().expect("ball is nonempty");
    if min == 0 {
        return Ok(None);
    }
    let on: Vec<usize> = (0..ball.vertices.len()).filter(|&i| displacement[i] == min).collect();
    let mut path = order_as_path(ball, &on).ok_or(BassSerreError::AxisNotLine)?;
    if path.len() >= 2 {
        // orient along the translation: w moves the first vertex towards the second
        let image = spec.act(w, &ball.vertices[path[0]]);
        if spec.distance(&ball.vertices[path[1]], &image) > spec.distance(&ball.vertices[path[0]], &image) {
            path.reverse();
        }
    }
    let labels = path.iter().map(|&i| ball.vertices[i].clone()).collect();
    Ok(Some(Axis { word: w.clone(), translation_length: min, vertices: path, labels }))
}

/// Axes of the products `gᵢgⱼ` of two distinct factor generators, `i < j`,
/// in the order found.
pub fn auto_axes(ball: &TreeBall) -> Result<Vec<Axis>, BassSerreError> {
    let spec = &ball.spec;
    let mut axes = Vec::new();
    for i in 0..spec.rank() {
        for j in i + 1..spec.rank() {
            let w = spec.mul(&spec.generator(i), &spec.generator(j));
            if let Some(axis) = axis_of(&w, ball)? {
                axes.push(axis);
            }
        }
    }
    Ok(axes)
}

/// Orders a vertex set as a simple path in the ball, if it is one.
fn order_as_path(ball: &TreeBall, set: &[usize]) -> Option<Vec<usize>> {
    if set.is_empty() {
        return None;
    }
    let member: std::collections::HashSet<usize> = set.iter().copied().collect();
    let inner = |i: usize| -> Vec<usize> { ball.neighbors(i).iter().copied().filter(|j| member.contains(j)).collect() };
    if set.iter().any(|&i| inner(i).len() > 2) {
        return None;
    }
    let start = set.iter().copied().find(|&i| inner(i).len() <= 1)?;
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = inner(cur).into_iter().find(|&j| j != prev);
        match next {
            Some(j) => {
                prev = cur;
                cur = j;
                path.push(j);
            }
            None => break,
        }
    }
    (path.len() == set.len()).then_some(path)
}

/// Elements of syllable length ≤ `budget` fixing every vertex of `path`.
pub fn path_stabilizer(path: &[usize], ball: &TreeBall, budget: usize) -> Result<Vec<Word>, BassSerreError> {
    ball.check_path(path)?;
    let spec = &ball.spec;
    let labels: Vec<&Vertex> = path.iter().map(|&i| &ball.vertices[i]).collect();
    let words = spec.elements_up_to(budget, super::DEFAULT_WORD_CAP)?;
    Ok(words.into_iter().filter(|g| labels.iter().all(|v| &spec.act(g, v) == *v)).collect())
}

/// Elements up to the budget preserving the axis, with their actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisStabilizer {
    pub elements: Vec<(Word, AxisAction)>,
    /// Images that landed on the axis but were not isometries of the line.
    pub violations: Vec<(Word, Vec<i64>)>,
    pub budget: usize,
}

impl AxisStabilizer {
    pub fn is_virtually_cyclic_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn reflections(&self) -> impl Iterator<Item = &Word> {
        self.elements.iter().filter(|(_, a)| matches!(a, AxisAction::Reflection(_))).map(|(w, _)| w)
    }

    pub fn translations(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.elements.iter().filter_map(|(w, a)| match a {
            AxisAction::Translation(t) => Some((w, *t)),
            AxisAction::Reflection(_) => None,
        })
    }
}

pub fn setwise_axis_stabilizer(axis: &Axis, ball: &TreeBall, budget: usize) -> Result<AxisStabilizer, BassSerreError> {
    if axis.labels.len() < 2 {
        return Err(BassSerreError::AxisNotLine);
    }
    let spec = &ball.spec;
    let mut elements = Vec::new();
    let mut violations = Vec::new();
    for g in spec.elements_up_to(budget, super::DEFAULT_WORD_CAP)? {
        match axis.action_of(spec, &g) {
            None => {}
            Some(Ok(action)) => elements.push((g, action)),
            Some(Err(pos)) => violations.push((g, pos)),
        }
    }
    Ok(AxisStabilizer { elements, violations, budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(orders: &[u32]) -> FreeProductSpec {
        FreeProductSpec::new(orders.to_vec()).unwrap()
    }

    #[test]
    fn dihedral_balls_are_lines() {
        let d = spec(&[2, 2]);
        let b = ball(&d, 3).unwrap();
        assert_eq!(b.vertices.len(), 7);
        assert!(b.is_line());
        let b = ball(&d, 6).unwrap();
        assert_eq!(b.vertices.len(), 13);
        assert!(b.is_line());
    }

    #[test]
    fn radius_zero() {
        for orders in [&[2, 2][..], &[2, 3], &[2, 2, 2]] {
            let s = spec(orders);
            let b = ball(&s, 0).unwrap();
            assert_eq!(b.vertices, vec![s.base_vertex()]);
            assert!(b.edges.is_empty());
        }
    }

    #[test]
    fn modular_group_ball() {
        // ℤ₂∗ℤ₃ radius 2 from Γa: Γa has 2 edges to Γb, aΓb; each of those
        // has 2 more neighbours: 1 + 2 + 4 = 7 vertices
        let b = ball(&spec(&[2, 3]), 2).unwrap();
        assert_eq!(b.vertices.len(), 7);
        assert!(b.is_tree());
        for (i, v) in b.vertices.iter().enumerate() {
            if b.depth[i] < 2 {
                let Vertex::Coset { factor, .. } = v else { panic!() };
                assert_eq!(b.degree(i), [2, 3][*factor]);
            }
        }
    }

    #[test]
    fn path_formula_matches_bfs_depth() {
        for orders in [&[2, 3][..], &[3, 4], &[2, 2, 3]] {
            let s = spec(orders);
            let b = ball(&s, 5).unwrap();
            for (i, v) in b.vertices.iter().enumerate() {
                assert_eq!(s.distance(&s.base_vertex(), v), b.depth[i]);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(ball_with_cap(&spec(&[5, 5]), 6, 50), Err(BassSerreError::ResourceLimit { .. })));
    }

    #[test]
    fn elliptic_words_have_no_axis() {
        let s = spec(&[2, 3]);
        let b = ball(&s, 4).unwrap();
        assert!(axis_of(&s.parse_word("a").unwrap(), &b).unwrap().is_none());
        assert!(axis_of(&s.parse_word("bab^2").unwrap(), &b).unwrap().is_none());
    }

    #[test]
    fn dihedral_axis_is_the_whole_line() {
        let s = spec(&[2, 2]);
        let b = ball(&s, 6).unwrap();
        let axis = axis_of(&s.parse_word("ab").unwrap(), &b).unwrap().unwrap();
        assert_eq!(axis.translation_length, 2);
        assert_eq!(axis.vertices.len(), 13);
    }

    #[test]
    fn axis_is_equivariant() {
        let s = spec(&[2, 3]);
        let b = ball(&s, 7).unwrap();
        let w = s.parse_word("ab").unwrap();
        let g = s.parse_word("a").unwrap();
        let axis = axis_of(&w, &b).unwrap().unwrap();
        let shifted = axis_of(&s.conjugate(&g, &w), &b).unwrap().unwrap();
        assert_eq!(shifted.translation_length, axis.translation_length);
        // every ball vertex of g·axis is on the conjugate's axis and vice versa
        for v in &axis.labels {
            let gv = s.act(&g, v);
            assert!(shifted.on_axis(&s, &gv));
        }
        for v in &shifted.labels {
            assert!(axis.on_axis(&s, &s.act(&s.inverse(&g), v)));
        }
    }

    #[test]
    fn bad_path_rejected() {
        let s = spec(&[2, 2]);
        let b = ball(&s, 3).unwrap();
        let far = (0..b.vertices.len()).find(|&i| b.depth[i] == 2).unwrap();
        assert_eq!(path_stabilizer(&[0, far], &b, 2), Err(BassSerreError::NotAPath));
    }

    #[test]
    fn axis_stabilizer_shapes() {
        // ab is not conjugate to its inverse in ℤ₂∗ℤ₃ or ℤ₃∗ℤ₃, so nothing
        // reverses its axis; in ℤ₂∗ℤ₂∗ℤ₂ the involutions a and b do
        for (orders, step, reflections) in [(&[2, 3][..], 2, 0), (&[3, 3], 2, 0), (&[2, 2, 2], 4, 6)] {
            let s = spec(orders);
            let b = ball(&s, 6).unwrap();
            let axis = axis_of(&s.parse_word("ab").unwrap(), &b).unwrap().unwrap();
            let st = setwise_axis_stabilizer(&axis, &b, 6).unwrap();
            assert!(st.is_virtually_cyclic_consistent());
            assert_eq!(st.reflections().count(), reflections, "{orders:?}");
            assert!(st.translations().all(|(_, t)| t % step == 0));
            assert_eq!(st.translations().count(), 7);
        }
    }
}
