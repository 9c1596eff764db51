//! Report documents: one structured object per verification, rendered as
//! JSON (`--json`) or aligned text. Field names are frozen as a
//! compatibility contract; both renderers derive from the same value, and
//! all maps are key-sorted so identical runs emit identical bytes.

use std::collections::BTreeMap;

use pgfam_core::{Classification, CountTable, FamilyAnalysis, Sign};
use serde_json::{json, Map, Value};

pub struct ReportDocument {
    pub parameters: Value,
    pub expected: Value,
    pub observed: Value,
    pub theorem_violations: Vec<String>,
    pub verdict: Value,
}

impl ReportDocument {
    pub fn to_json(&self) -> Value {
        json!({
            "parameters": self.parameters,
            "expected": self.expected,
            "observed": self.observed,
            "theorem_violations": self.theorem_violations,
            "verdict": self.verdict,
        })
    }

    pub fn render(&self, as_json: bool) -> String {
        let value = self.to_json();
        if as_json {
            let mut out = serde_json::to_string_pretty(&value).expect("report serializes");
            out.push('\n');
            out
        } else {
            let mut out = String::new();
            render_text(&mut out, 0, None, &value);
            out
        }
    }
}

pub fn parameters_json(n: u32, q: u64, sign: Sign) -> Value {
    json!({ "n": n, "q": q, "sign": sign.to_string() })
}

pub fn count_table_json(table: &CountTable) -> Value {
    json!({
        "quadric_size": table.quadric_size,
        "parabolic_hyperplanes": table.parabolic_hyperplanes,
        "sigma_size": table.sigma_size,
        "h1": table.h1,
        "h2": table.h2,
        "c1": table.c1,
        "c2": table.c2,
        "c3": table.c3,
        "c4": table.c4,
        "black_degree": table.black_degree,
        "white_degree": table.white_degree,
        "black_in_sigma_plane": table.black_in_sigma_plane,
        "black_in_other_plane": table.black_in_other_plane,
    })
}

fn histogram_json(histogram: &BTreeMap<u64, u64>) -> Value {
    let mut map = Map::new();
    for (k, v) in histogram {
        map.insert(k.to_string(), json!(v));
    }
    Value::Object(map)
}

pub fn analysis_json(analysis: &FamilyAnalysis) -> Value {
    json!({
        "members": analysis.members,
        "p1_holds": analysis.p1.holds,
        "p1_violations": analysis.p1.violations.len(),
        "p2_holds": analysis.p2.holds,
        "p2_violations": analysis.p2.violations.len(),
        "p2_uncovered": analysis.p2.uncovered,
        "b": analysis.b,
        "w": analysis.w,
        "r": analysis.r,
        "point_degrees": histogram_json(&analysis.point_degree_histogram),
        "p2_multiplicities": histogram_json(&analysis.p2.multiplicity_histogram),
        "black_per_member": histogram_json(&analysis.black_per_member),
        "black_per_nonmember": histogram_json(&analysis.black_per_nonmember),
        "codim2_black": histogram_json(&analysis.codim2_black_histogram),
    })
}

pub fn verdict_json(classification: &Classification) -> Value {
    let witness = match classification {
        Classification::ParabolicOfHyperbolic { form }
        | Classification::ParabolicOfElliptic { form } => json!({ "form": form.to_string() }),
        Classification::OvoidSecant { ovoid, classical } => json!({
            "ovoid": ovoid.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "classical_form": classical.as_ref().map(|f| f.to_string()),
        }),
        Classification::LineTransversal { line } => json!({ "line": line.to_string() }),
        Classification::Unknown => Value::Null,
    };
    json!({ "kind": classification.kind().to_string(), "witness": witness })
}

pub fn family_report(
    n: u32,
    q: u64,
    sign: Sign,
    analysis: &FamilyAnalysis,
    table: &CountTable,
) -> ReportDocument {
    ReportDocument {
        parameters: parameters_json(n, q, sign),
        expected: count_table_json(table),
        observed: analysis_json(analysis),
        theorem_violations: analysis
            .theorem_violations
            .iter()
            .map(|v| v.to_string())
            .collect(),
        verdict: verdict_json(&analysis.verdict),
    }
}

/// Text form of a bare JSON value (used for search summaries).
pub fn render_value_text(value: &Value) -> String {
    let mut out = String::new();
    render_text(&mut out, 0, None, value);
    out
}

/// Indented `key: value` text with the same structure as the JSON form.
fn render_text(out: &mut String, indent: usize, key: Option<&str>, value: &Value) {
    let pad = "  ".repeat(indent);
    let label = key.map(|k| format!("{k}: ")).unwrap_or_default();
    match value {
        Value::Object(map) if map.is_empty() => {
            out.push_str(&format!("{pad}{label}{{}}\n"));
        }
        Value::Object(map) => {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            let next = if key.is_some() { indent + 1 } else { indent };
            for (k, v) in map {
                render_text(out, next, Some(k), v);
            }
        }
        Value::Array(items) if items.is_empty() => {
            out.push_str(&format!("{pad}{label}none\n"));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{}:\n", key.unwrap_or("items")));
            for item in items {
                match item {
                    Value::Object(_) => render_text(out, indent + 1, Some("-"), item),
                    _ => out.push_str(&format!("{pad}  - {}\n", scalar(item))),
                }
            }
        }
        scalar_value => {
            out.push_str(&format!("{pad}{label}{}\n", scalar(scalar_value)));
        }
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::Null => "null".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_is_stable() {
        let doc = ReportDocument {
            parameters: parameters_json(1, 2, Sign::Plus),
            expected: json!({"a": 1}),
            observed: Value::Null,
            theorem_violations: vec![],
            verdict: Value::Null,
        };
        let a = doc.render(false);
        let b = doc.render(false);
        assert_eq!(a, b);
        assert!(a.contains("sign: +"));
        assert!(a.contains("theorem_violations: none"));
    }

    #[test]
    fn json_rendering_has_frozen_keys() {
        let table = CountTable::new(1, 2, Sign::Minus);
        let doc = ReportDocument {
            parameters: parameters_json(1, 2, Sign::Minus),
            expected: count_table_json(&table),
            observed: Value::Null,
            theorem_violations: vec![],
            verdict: Value::Null,
        };
        let value = doc.to_json();
        for key in ["parameters", "expected", "observed", "theorem_violations", "verdict"] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert_eq!(value["expected"]["c4"], Value::Null);
        assert_eq!(value["expected"]["quadric_size"], json!(5));
    }
}
