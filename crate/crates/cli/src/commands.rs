use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use famdim::bass_serre::{
    auto_axes, axis_of, ball_with_cap, cone_off as cone, normalizer_probe, pushout_dimension_bound, BassSerreError,
    CellAssignment, CellKind, FreeProductSpec, SdElem, SemidirectSpec, TreeBall,
};
use famdim::dimension::{torus_bundle_gd, DimensionError};
use famdim::gl2z::{Gl2Error, MatClass};
use famdim::model::{validate as check, ModelError};
use famdim::report;
use famdim::{FamilyIndex, ManifoldDescription, Mat2Z, OrbifoldBase};
use serde_json::{json, Value};
use thiserror::Error;

use crate::{Format, KSelect, TreeArgs};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input; `report` is printed to stdout before the error line.
    #[error("{message}")]
    Invalid { message: String, report: Option<String> },
    #[error("resource limit: {0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid { .. } => 2,
            CliError::Limit(_) => 3,
        }
    }

    pub fn stdout(&self) -> Option<&str> {
        match self {
            CliError::Invalid { report, .. } => report.as_deref(),
            CliError::Limit(_) => None,
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        CliError::Invalid { message: message.into(), report: None }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Invalid { message: "description rejected".to_string(), report: Some(e.to_report().to_string()) }
    }
}

impl From<Gl2Error> for CliError {
    fn from(e: Gl2Error) -> Self {
        match e {
            Gl2Error::Overflow => CliError::Limit(e.to_string()),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<DimensionError> for CliError {
    fn from(e: DimensionError) -> Self {
        match e {
            DimensionError::Model(m) => m.into(),
            DimensionError::Matrix(m) => m.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<BassSerreError> for CliError {
    fn from(e: BassSerreError) -> Self {
        match e {
            BassSerreError::ResourceLimit { .. } => CliError::Limit(e.to_string()),
            BassSerreError::Matrix(m) => m.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

type Out = Result<String, CliError>;

fn read_input(file: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::invalid(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| CliError::invalid(format!("{file}: {e}")))?;
    }
    Ok(text)
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

fn family(k: u32) -> Result<FamilyIndex, CliError> {
    FamilyIndex::new(k).map_err(|e| CliError::invalid(e.to_string()))
}

pub fn compute(file: &str, k: KSelect, format: Format, explain: bool) -> Out {
    let desc = ManifoldDescription::from_json(&read_input(file)?)?;
    let rep = famdim::compute(&desc)?;
    let only = match k {
        KSelect::All => None,
        KSelect::One(n) => Some(family(n)?),
    };
    match format {
        Format::Text => Ok(report::to_text(&rep, only, explain)),
        Format::Json => {
            let mut v = report::to_json(&rep, &desc);
            if let Some(kk) = only {
                v["requested_k"] = json!(kk.requested());
                v["value"] = json!(rep.value_at(kk).value);
                v["clamped"] = json!(kk.is_clamped());
            }
            Ok(pretty(&v))
        }
    }
}

pub fn replay(file: &str) -> Out {
    let text = read_input(file)?;
    let stored: Value = serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{file}: {e}")))?;
    let outcome = report::replay(&stored).map_err(|e| match e {
        report::ReplayError::Dimension(d) => d.into(),
        other => CliError::invalid(other.to_string()),
    })?;
    let r = &outcome.recomputed;
    let line = format!("k=2: {}, k≥3: {}, rank cap {}", r["k2"], r["k3plus"], r["rank_cap"]);
    if outcome.matches {
        Ok(format!("replay matches: {line}\n"))
    } else {
        Err(CliError::Invalid {
            message: "replayed values differ from the stored report".to_string(),
            report: Some(format!(
                "stored:     k=2: {}, k≥3: {}, rank cap {}\nrecomputed: {line}\n",
                stored["k2"], stored["k3plus"], stored["rank_cap"]
            )),
        })
    }
}

pub fn validate(file: &str, format: Format) -> Out {
    let desc = ManifoldDescription::from_json(&read_input(file)?)?;
    let rep = check(&desc);
    let rendered = match format {
        Format::Text if rep.is_valid() => "valid\n".to_string(),
        Format::Text => {
            let mut s = String::new();
            for v in &rep.violations {
                let tag = if v.code.is_rewritable() { "rewrite" } else { "error" };
                let _ = writeln!(s, "{tag}: {v}");
            }
            s
        }
        Format::Json => {
            pretty(&json!({"valid": rep.is_valid(), "normalizable": rep.is_normalizable(), "violations": rep.violations}))
        }
    };
    if rep.is_normalizable() {
        Ok(rendered)
    } else {
        Err(CliError::Invalid { message: format!("{} blocking violation(s)", rep.blocking().count()), report: Some(rendered) })
    }
}

pub fn classify_matrix(spec: &str, format: Format, explain: bool) -> Out {
    let a: Mat2Z = spec.parse()?;
    let class = a.classify();
    let geometry = a.geometry_of_monodromy();
    let at2 = torus_bundle_gd(&a, FamilyIndex::K2).value;
    let at3 = torus_bundle_gd(&a, FamilyIndex::K3).value;
    let quotient = match class {
        MatClass::Parabolic => Some(a.parabolic_quotient_type()?),
        _ => None,
    };
    match format {
        Format::Json => Ok(pretty(&json!({
            "matrix": a,
            "det": a.det(),
            "trace": a.trace(),
            "class": class.name(),
            "order": a.order(),
            "geometry": geometry,
            "gd": {"k2": at2, "k3plus": at3},
            "parabolic_quotient": quotient,
        }))),
        Format::Text => {
            let mut s = format!("{class}; torus-bundle geometry {geometry}; gd_𝓕₂ = {at2}");
            if at3 != at2 {
                let _ = write!(s, ", gd_𝓕₃ = {at3}");
            }
            s.push('\n');
            if explain {
                let _ = writeln!(s, "det = {}, trace = {}", a.det(), a.trace());
                if let Some(q) = quotient {
                    let _ = writeln!(s, "quotient by the invariant line: {q:?}");
                }
                for step in &torus_bundle_gd(&a, FamilyIndex::K2).trace.steps {
                    let _ = writeln!(s, "rule {}: {}", step.rule, step.inputs);
                }
            }
            Ok(s)
        }
    }
}

fn parse_surface(s: &str) -> Result<(u32, bool), CliError> {
    let bad =
        || CliError::invalid(format!("unknown surface {s:?}; use sphere, torus, projective, klein, genus:G or genus:G:nonor"));
    match s {
        "sphere" => Ok((0, true)),
        "torus" => Ok((1, true)),
        "projective" => Ok((1, false)),
        "klein" => Ok((2, false)),
        _ => {
            let rest = s.strip_prefix("genus:").ok_or_else(bad)?;
            let (g, orientable) = match rest.split_once(':') {
                Some((g, "nonor")) => (g, false),
                Some(_) => return Err(bad()),
                None => (rest, true),
            };
            let g: u32 = g.parse().map_err(|_| bad())?;
            if !orientable && g == 0 {
                return Err(CliError::invalid("a nonorientable surface has genus at least 1"));
            }
            Ok((g, orientable))
        }
    }
}

pub fn classify_orbifold(surface: &str, cone: Vec<u32>, boundary: u32, format: Format) -> Out {
    let (genus, orientable) = parse_surface(surface)?;
    if let Some(a) = cone.iter().find(|&&a| a < 2) {
        return Err(CliError::invalid(format!("cone order {a} is below 2")));
    }
    let base = OrbifoldBase { genus, orientable, boundary_count: boundary, cone_orders: cone };
    let chi = base.euler_characteristic_orb();
    let class = base.classify();
    match format {
        Format::Json => Ok(pretty(&json!({
            "orbifold": base,
            "name": base.describe(),
            "euler_characteristic": chi.to_string(),
            "bad": base.is_bad(),
            "class": class,
        }))),
        Format::Text => Ok(format!("{}: χ = {chi}, {class}\n", base.describe())),
    }
}

fn build_ball(tree: &TreeArgs) -> Result<TreeBall, CliError> {
    let spec = FreeProductSpec::new(tree.factors.clone())?;
    Ok(ball_with_cap(&spec, tree.radius, tree.cap)?)
}

fn ball_summary(b: &TreeBall) -> String {
    let mut per_depth = BTreeMap::new();
    for d in &b.depth {
        *per_depth.entry(*d).or_insert(0usize) += 1;
    }
    let layers: Vec<String> = per_depth.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    format!(
        "factors {:?}, radius {}: {} vertices, {} edges, tree {}, line {}\nvertices by depth {}\n",
        b.spec.factor_orders(),
        b.radius,
        b.vertices.len(),
        b.edges.len(),
        b.is_tree(),
        b.is_line(),
        layers.join(" ")
    )
}

pub fn ball(tree: &TreeArgs, format: Format) -> Out {
    let b = build_ball(tree)?;
    match format {
        Format::Json => Ok(pretty(&b.to_json())),
        Format::Text => Ok(ball_summary(&b)),
    }
}

pub fn cone_off(tree: &TreeArgs, axes: &str, budget: usize, bound: bool, factor_gd: u32, format: Format) -> Out {
    let b = build_ball(tree)?;
    let found = if axes == "auto" {
        auto_axes(&b)?
    } else {
        let mut out = Vec::new();
        for w in axes.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            let word = b.spec.parse_word(w)?;
            match axis_of(&word, &b)? {
                Some(axis) => out.push(axis),
                None => return Err(CliError::invalid(format!("{w} is elliptic and has no axis"))),
            }
        }
        out
    };
    let complex = cone(&b, &found, budget)?;
    let value = if bound { Some(pushout_dimension_bound(&complex, &CellAssignment::with_factor(factor_gd))?) } else { None };
    match format {
        Format::Json => {
            let mut v = complex.to_json();
            if let Some(x) = value {
                v["pushout_bound"] = json!(x);
                v["factor_gd"] = json!(factor_gd);
            }
            Ok(pretty(&v))
        }
        Format::Text => {
            let mut s = ball_summary(&b);
            for (i, c) in complex.cones.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "cone {i}: axis of {} (translation length {}, {} ball vertices), {} stabilizing words up to length {budget}, {} reflections{}",
                    c.axis.word,
                    c.axis.translation_length,
                    c.axis.vertices.len(),
                    c.stabilizer.elements.len(),
                    c.stabilizer.reflections().count(),
                    if c.stabilizer.is_virtually_cyclic_consistent() { "" } else { ", NOT virtually cyclic" }
                );
            }
            let kinds = [CellKind::TreeVertex, CellKind::TreeEdge, CellKind::ConeVertex, CellKind::ConeEdge, CellKind::Triangle];
            let counts: Vec<String> = kinds.iter().map(|k| format!("{k:?} {}", complex.cells_of(*k).count())).collect();
            let _ = writeln!(s, "cells: {}; dimension {}", counts.join(", "), complex.dimension());
            if let Some(x) = value {
                let _ = writeln!(s, "push-out bound: {x} (vertex groups at {factor_gd}, verified up to budget {budget})");
            }
            Ok(s)
        }
    }
}

fn parse_element(s: &str) -> Result<SdElem, CliError> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::invalid(format!("element {s:?}: {e}")))?;
    match parts[..] {
        [x, y, l] => Ok(SdElem::new(x, y, l)),
        _ => Err(CliError::invalid(format!("element {s:?} must be \"x,y,l\""))),
    }
}

pub fn probe(monodromy: &str, element: &str, bound: u32, format: Format) -> Out {
    let a: Mat2Z = monodromy.parse()?;
    let c = parse_element(element)?;
    let cert = normalizer_probe(&SemidirectSpec::new(a), &c, bound)?;
    match format {
        Format::Json => Ok(pretty(&json!({"monodromy": a, "element": c, "certificate": cert}))),
        Format::Text => {
            let group = if cert.rank == 1 { "ℤ" } else { "ℤ²" };
            let mut s = format!("normalizer of ⟨{c}⟩ has rank {} ({group}), checked for exponents up to {bound}\n", cert.rank);
            for line in &cert.checks {
                let _ = writeln!(s, "  {line}");
            }
            Ok(s)
        }
    }
}
