use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::{int_list_value, int_value, ConeInput};
use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::complexes::{NccrVerdict, ResolutionReport, Violation};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// Run the acyclicity check over all ordered class pairs.
    pub acyclicity: bool,
    /// Cube radius for acyclicity windows; `None` uses the per-pair default.
    pub window_radius: Option<i64>,
    pub frobenius: bool,
    /// Decompose `R^{1/q}` at this `q` instead of the minimal complete one.
    pub frobenius_q: Option<u64>,
    /// Partial supports to test, as class indices.
    pub supports: Vec<Vec<usize>>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            acyclicity: true,
            window_radius: None,
            frobenius: true,
            frobenius_q: None,
            supports: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub content_hash: String,
    pub cone: Value,
    pub classes: Vec<Value>,
    pub class_count: Value,
    pub global_dimension: usize,
    pub nccr: NccrVerdict,
    pub acyclicity: Option<Value>,
    pub frobenius: Option<Value>,
    pub partial_supports: Vec<Value>,
    pub torsion_warnings: Vec<String>,
}

impl AnalysisReport {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serialises");
        serde_json::to_string_pretty(&v).expect("value serialises")
    }
}

pub fn labelled(alg: &ToricAlgebra, m: &BTreeMap<usize, usize>) -> Value {
    let obj: serde_json::Map<String, Value> = m.iter().map(|(k, v)| (alg.class_label(*k), Value::from(*v))).collect();
    Value::Object(obj)
}

/// Class multiplicities per degree, keyed by class label.
pub fn shape_value(alg: &ToricAlgebra, shape: &[BTreeMap<usize, usize>]) -> Value {
    Value::Array(shape.iter().map(|m| labelled(alg, m)).collect())
}

pub fn resolution_value(alg: &ToricAlgebra, r: &ResolutionReport) -> Value {
    let violations: usize = r.verification.iter().map(|v| v.violations.len()).sum();
    serde_json::json!({
        "class": alg.class_label(r.class),
        "chamber": r.chamber,
        "spliced": r.spliced,
        "shape": shape_value(alg, &r.shape),
        "minimal_shape": shape_value(alg, &r.minimal_shape),
        "pdim": r.pdim,
        "verified": r.verified(),
        "verification_violations": violations,
    })
}

pub fn analyze(input: &ConeInput, options: &AnalysisOptions) -> Result<AnalysisReport> {
    let alg = ToricAlgebra::new(input.to_cone()?)?;
    analyze_algebra(&alg, input.labels.as_deref(), options)
}

/// Like [`analyze`] for an already built algebra, with optional normal labels.
pub fn analyze_algebra(
    alg: &ToricAlgebra,
    labels: Option<&[String]>,
    options: &AnalysisOptions,
) -> Result<AnalysisReport> {
    let cone = alg.cone();
    let validation = cone.validate();
    let mut cone_value = serde_json::json!({
        "rank": cone.rank(),
        "normals": cone.normals().iter().map(|n| int_list_value(n)).collect::<Vec<_>>(),
        "generators": cone.generators().iter().map(|n| int_list_value(n)).collect::<Vec<_>>(),
        "pointed": validation.pointed,
        "full_dimensional": validation.full_dimensional,
        "simplicial": validation.simplicial,
    });
    if let Some(l) = labels {
        cone_value["labels"] = Value::from(l.to_vec());
    }
    let classes = alg.enumerate_classes();
    let free = alg.free_class_index();
    let mut class_values = Vec::new();
    for (k, c) in classes.iter().enumerate() {
        let complex = alg.conic_complex(c)?;
        class_values.push(serde_json::json!({
            "label": alg.class_label(k),
            "ceiling": c,
            "degree": int_value(&alg.degree(c)),
            "free": k == free,
            "cell_census": alg.cell_census(c)?,
            "pdim": alg.pdim_simple(c)?,
            "has_zero_cell": alg.has_zero_cell(c)?,
            "conic_complex": shape_value(alg, &complex.to_module_complex().class_shape(alg)),
        }));
    }
    let class_count = serde_json::json!({
        "enumerated": classes.len(),
        "grid_oracle": alg.grid_oracle_class_count(),
    });
    let global_dimension = alg.global_dimension()?;
    let nccr = alg.nccr_verdict(None)?;

    let acyclicity = if options.acyclicity {
        let reports = alg.verify_acyclicity_all(options.window_radius)?;
        let violations: Vec<Value> = reports
            .iter()
            .flat_map(|r| {
                r.violations.iter().map(move |v: &Violation| {
                    serde_json::json!({"chamber": r.chamber, "other": r.other, "m": v.m, "ranks": v.ranks})
                })
            })
            .collect();
        Some(serde_json::json!({
            "window": match options.window_radius {
                Some(r) => Value::from(format!("cube radius {r}")),
                None => Value::from("default: |m_j| <= 2(1 + max_i |c_i - c'_i|)"),
            },
            "pairs": reports.len(),
            "points_checked": reports.iter().map(|r| r.points_checked).sum::<usize>(),
            "violations": violations,
            "passed": reports.iter().all(|r| r.passed()),
        }))
    } else {
        None
    };

    let frobenius = if options.frobenius {
        let qmin = alg.minimal_complete_q()?;
        let q = options.frobenius_q.unwrap_or(qmin);
        let dec = alg.decompose_root(q)?;
        let mult: serde_json::Map<String, Value> =
            dec.multiplicities.iter().map(|(k, v)| (alg.class_label(*k), Value::from(*v))).collect();
        Some(serde_json::json!({
            "minimal_complete_q": qmin,
            "q": q,
            "decomposition": mult,
            "total": dec.total(),
        }))
    } else {
        None
    };

    let mut partial_supports = Vec::new();
    for s in &options.supports {
        let reps: Vec<CeilingVector> =
            s.iter().map(|&i| classes.get(i).cloned()).collect::<Option<_>>().ok_or_else(|| {
                crate::error::Error::Input(format!("support {s:?} names a class index >= {}", classes.len()))
            })?;
        let verdict = alg.nccr_verdict(Some(&reps))?;
        let mut resolutions = Vec::new();
        for c in &reps {
            resolutions.push(match alg.resolution(&reps, c) {
                Ok(r) => resolution_value(alg, &r),
                Err(e) => serde_json::json!({"chamber": c, "error": e.to_string()}),
            });
        }
        partial_supports.push(serde_json::json!({
            "support": s.iter().map(|&i| alg.class_label(i)).collect::<Vec<_>>(),
            "verdict": verdict,
            "resolutions": resolutions,
        }));
    }

    Ok(AnalysisReport {
        schema_version: 1,
        content_hash: cone.content_hash(),
        cone: cone_value,
        classes: class_values,
        class_count,
        global_dimension,
        nccr,
        acyclicity,
        frobenius,
        partial_supports,
        torsion_warnings: alg.torsion_warnings()?,
    })
}

impl ToricAlgebra {
    pub fn analyze(&self, options: &AnalysisOptions) -> Result<AnalysisReport> {
        analyze_algebra(self, None, options)
    }
}
