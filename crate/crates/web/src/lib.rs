//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns plain strings so the same functions run in
//! native tests. Failures come back as `{"error": "..."}`.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use famdim::bass_serre::{axis_of, ball_with_cap, FreeProductSpec, TreeBall, Vertex};
use famdim::dimension::torus_bundle_gd;
use famdim::report;
use famdim::{FamilyIndex, ManifoldDescription, Mat2Z};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest ball the page will draw.
pub const MAX_DRAWN_VERTICES: usize = 600;

fn error(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Classifies `"a,b;c,d"` and reports the torus-bundle values.
#[wasm_bindgen]
pub fn classify_matrix(spec: &str) -> String {
    let a: Mat2Z = match spec.parse() {
        Ok(a) => a,
        Err(e) => return error(e),
    };
    let class = a.classify();
    json!({
        "matrix": a.to_string(),
        "det": a.det(),
        "trace": a.trace(),
        "class": class.to_string(),
        "geometry": a.geometry_of_monodromy().to_string(),
        "k2": torus_bundle_gd(&a, FamilyIndex::K2).value,
        "k3plus": torus_bundle_gd(&a, FamilyIndex::K3).value,
    })
    .to_string()
}

/// Evaluates a manifold description; returns the JSON report with a
/// rendered text explanation under `"text"`.
#[wasm_bindgen]
pub fn compute_description(description: &str) -> String {
    let desc = match ManifoldDescription::from_json(description) {
        Ok(d) => d,
        Err(e) => return error(e.to_report()),
    };
    match famdim::compute(&desc) {
        Ok(rep) => {
            let mut v: Value = report::to_json(&rep, &desc);
            v["text"] = json!(report::to_text(&rep, None, true));
            v.to_string()
        }
        Err(famdim::DimensionError::Model(m)) => error(m.to_report()),
        Err(e) => error(e),
    }
}

/// Draws a ball of the Bass-Serre tree as SVG, highlighting the axis of
/// `word` when it is hyperbolic. `factors` is comma separated, e.g. `"2,3"`.
#[wasm_bindgen]
pub fn ball_svg(factors: &str, radius: u32, word: &str) -> String {
    let orders: Result<Vec<u32>, _> = factors.split(',').map(|s| s.trim().parse::<u32>()).collect();
    let spec = match orders.map_err(|e| e.to_string()).and_then(|o| FreeProductSpec::new(o).map_err(|e| e.to_string())) {
        Ok(s) => s,
        Err(e) => return error(e),
    };
    let ball = match ball_with_cap(&spec, radius as usize, MAX_DRAWN_VERTICES) {
        Ok(b) => b,
        Err(e) => return error(e),
    };
    let mut axis = HashSet::new();
    let mut axis_note = String::new();
    if !word.trim().is_empty() {
        let w = match spec.parse_word(word.trim()) {
            Ok(w) => w,
            Err(e) => return error(e),
        };
        match axis_of(&w, &ball) {
            Ok(Some(a)) => {
                axis_note = format!("axis of {} (translation length {})", a.word, a.translation_length);
                axis.extend(a.vertices.iter().copied());
            }
            Ok(None) => axis_note = format!("{w} is elliptic: it fixes a vertex"),
            Err(e) => return error(e),
        }
    }
    json!({
        "svg": render_svg(&ball, &axis),
        "vertices": ball.vertices.len(),
        "edges": ball.edges.len(),
        "axis": axis_note,
    })
    .to_string()
}

/// Radial layout: each vertex gets an angular sector proportional to the
/// number of leaves below it.
fn layout(ball: &TreeBall) -> Vec<(f64, f64)> {
    let n = ball.vertices.len();
    let mut children = vec![Vec::new(); n];
    for (i, kids) in children.iter_mut().enumerate() {
        kids.extend(ball.neighbors(i).iter().copied().filter(|&j| ball.depth[j] == ball.depth[i] + 1));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(ball.depth[i]));
    let mut leaves = vec![0usize; n];
    for &i in &order {
        leaves[i] = children[i].iter().map(|&c| leaves[c]).sum::<usize>().max(1);
    }
    let ring = 300.0 / (ball.radius.max(1) as f64);
    let mut pos = vec![(0.0, 0.0); n];
    let mut stack = vec![(0usize, 0.0f64, 2.0 * PI)];
    while let Some((v, start, span)) = stack.pop() {
        let r = ball.depth[v] as f64 * ring;
        let mid = start + span / 2.0;
        pos[v] = (r * mid.cos(), r * mid.sin());
        let mut s = start;
        for &c in &children[v] {
            let share = span * leaves[c] as f64 / leaves[v] as f64;
            stack.push((c, s, share));
            s += share;
        }
    }
    pos
}

fn render_svg(ball: &TreeBall, axis: &HashSet<usize>) -> String {
    let pos = layout(ball);
    let mut s = String::from(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-330 -330 660 660" width="660" height="660">"#);
    for e in &ball.edges {
        let (a, b) = e.ends;
        let on = axis.contains(&a) && axis.contains(&b);
        let (stroke, width) = if on { ("#c0392b", 3.0) } else { ("#999", 1.0) };
        let _ = write!(
            s,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{stroke}" stroke-width="{width}"/>"#,
            pos[a].0, pos[a].1, pos[b].0, pos[b].1
        );
    }
    for (i, v) in ball.vertices.iter().enumerate() {
        let fill = match v {
            Vertex::Coset { factor, .. } => ["#2471a3", "#28b463", "#d68910", "#8e44ad", "#17a589"][factor % 5],
            Vertex::Hub { .. } => "#555",
        };
        let r = if axis.contains(&i) { 6.0 } else { 4.0 };
        let _ = write!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="{r}" fill="{fill}"><title>{}</title></circle>"#,
            pos[i].0,
            pos[i].1,
            escape(&v.to_string())
        );
    }
    s.push_str("</svg>");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
