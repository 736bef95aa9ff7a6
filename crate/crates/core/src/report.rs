//! Text and JSON renderings of a [`DimensionReport`], and replay of a JSON
//! report against its embedded input.

use serde_json::{json, Value};
use thiserror::Error;

use crate::dimension::{compute, rule_by_id, DimensionError, DimensionReport, FamilyIndex, GdResult};
use crate::model::ManifoldDescription;

pub const STABILIZATION_NOTE: &str = "values for every k ≥ 4 equal the k ≥ 3 column";

/// `{"name", "k2", "k3plus", "rank_cap", "trace", "input", "note"}`.
pub fn to_json(report: &DimensionReport, input: &ManifoldDescription) -> Value {
    let trace: Vec<Value> = report
        .k2
        .trace
        .steps
        .iter()
        .chain(&report.k3plus.trace.steps)
        .map(|s| json!({"k": s.k, "path": s.path, "rule": s.rule, "inputs": s.inputs, "value": s.value}))
        .collect();
    json!({
        "name": report.name,
        "k2": report.k2.value,
        "k3plus": report.k3plus.value,
        "rank_cap": report.rank_cap,
        "note": STABILIZATION_NOTE,
        "trace": trace,
        "input": input,
    })
}

fn render_trace(out: &mut String, r: &GdResult) {
    for s in &r.trace.steps {
        let summary = rule_by_id(&s.rule).map(|r| r.summary).unwrap_or("");
        out.push_str(&format!("  [k={}] {:<28} {:<24} = {}   {}\n", s.k, s.path, s.rule, s.value, s.inputs));
        out.push_str(&format!("         {summary}\n"));
    }
}

/// Human-readable report. With `only` set, prints that column alone.
pub fn to_text(report: &DimensionReport, only: Option<FamilyIndex>, explain: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", report.name));
    match only {
        Some(k) => {
            if k.is_clamped() {
                out.push_str(&format!("note: k={} evaluated as k=3 ({STABILIZATION_NOTE})\n", k.requested()));
            }
            out.push_str(&format!("k={}: {}\n", k.requested(), report.value_at(k).value));
        }
        None => {
            out.push_str(&format!("k=2: {}, k≥3: {}\n", report.k2.value, report.k3plus.value));
        }
    }
    out.push_str(&format!("max rank of a free abelian subgroup: {}\n", if report.rank_cap == 3 { "3" } else { "≤ 2" }));
    if explain {
        out.push_str("derivation:\n");
        match only {
            Some(k) => render_trace(&mut out, report.value_at(k)),
            None => {
                render_trace(&mut out, &report.k2);
                render_trace(&mut out, &report.k3plus);
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("report has no usable \"input\" description: {0}")]
    MissingInput(String),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutcome {
    pub recomputed: Value,
    pub matches: bool,
}

/// Recomputes a JSON report from its embedded input and compares the values.
pub fn replay(report: &Value) -> Result<ReplayOutcome, ReplayError> {
    let input = report.get("input").ok_or_else(|| ReplayError::MissingInput("field absent".to_string()))?;
    let desc: ManifoldDescription =
        serde_json::from_value(input.clone()).map_err(|e| ReplayError::MissingInput(e.to_string()))?;
    let fresh = compute(&desc)?;
    let recomputed = to_json(&fresh, &desc);
    let matches = ["k2", "k3plus", "rank_cap"].iter().all(|key| report.get(*key) == recomputed.get(*key));
    Ok(ReplayOutcome { recomputed, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PrimePiece;

    #[test]
    fn json_round_trip() {
        let d = ManifoldDescription::new("rp3#rp3", vec![PrimePiece::rp3(), PrimePiece::rp3()]);
        let rep = compute(&d).unwrap();
        let v = to_json(&rep, &d);
        assert_eq!(v["k2"], 0);
        assert_eq!(v["k3plus"], 0);
        assert_eq!(v["rank_cap"], 2);
        let text = serde_json::to_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        let outcome = replay(&back).unwrap();
        assert!(outcome.matches);
        assert_eq!(outcome.recomputed, v);
    }

    #[test]
    fn tampered_report_does_not_match() {
        let d = ManifoldDescription::new("rp3#rp3", vec![PrimePiece::rp3(), PrimePiece::rp3()]);
        let mut v = to_json(&compute(&d).unwrap(), &d);
        v["k2"] = json!(2);
        assert!(!replay(&v).unwrap().matches);
        assert!(replay(&json!({"k2": 0})).is_err());
    }

    #[test]
    fn text_rendering() {
        let d = ManifoldDescription::new("rp3#rp3", vec![PrimePiece::rp3(), PrimePiece::rp3()]);
        let rep = compute(&d).unwrap();
        assert!(to_text(&rep, None, false).contains("k=2: 0, k≥3: 0"));
        let clamped = to_text(&rep, Some(FamilyIndex::new(7).unwrap()), true);
        assert!(clamped.contains("k=7 evaluated as k=3"));
        assert!(clamped.contains("prime-dihedral"));
    }
}
