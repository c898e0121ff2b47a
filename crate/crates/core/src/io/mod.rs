//! Input parsing, analysis reports and SVG rendering.

mod report;
mod svg;

use num_traits::ToPrimitive;
use serde_json::Value;

use crate::cone::{ConeSpec, IntVec};
use crate::error::{Error, Result};
use crate::ratgeom::Int;

pub use report::{analyze, analyze_algebra, labelled, resolution_value, shape_value, AnalysisOptions, AnalysisReport};
pub use svg::{class_color, render_svg_2d, SvgRender, SvgTile, SvgWindow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Presentation {
    DualRays,
    PrimalRays,
    Normals,
}

impl Presentation {
    fn key(self) -> &'static str {
        match self {
            Presentation::DualRays => "dual_rays",
            Presentation::PrimalRays => "primal_rays",
            Presentation::Normals => "normals",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeInput {
    pub rank: usize,
    pub presentation: Presentation,
    pub vectors: Vec<IntVec>,
    pub labels: Option<Vec<String>>,
}

impl ConeInput {
    pub fn to_cone(&self) -> Result<ConeSpec> {
        let v = self.vectors.clone();
        match self.presentation {
            Presentation::DualRays => ConeSpec::from_dual_rays(self.rank, v),
            Presentation::PrimalRays => ConeSpec::from_primal_rays(self.rank, v),
            Presentation::Normals => ConeSpec::from_normals(self.rank, v),
        }
    }
}

/// Parses `{"rank": d, "dual_rays" | "primal_rays" | "normals": [[..], ..], "labels": [..]}`.
pub fn parse_input(text: &str) -> Result<ConeInput> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let Value::Object(obj) = value else {
        return Err(Error::Input("top level must be an object".into()));
    };
    for key in obj.keys() {
        if !matches!(key.as_str(), "rank" | "dual_rays" | "primal_rays" | "normals" | "labels") {
            return Err(Error::Input(format!("unknown field `{key}`")));
        }
    }
    let rank = match obj.get("rank") {
        None => return Err(Error::Input("missing field `rank`".into())),
        Some(v) => match parse_int(v).and_then(|x| x.to_usize()) {
            Some(r) if r > 0 => r,
            _ => return Err(Error::Input("`rank` must be a positive integer".into())),
        },
    };
    let present: Vec<Presentation> = [Presentation::DualRays, Presentation::PrimalRays, Presentation::Normals]
        .into_iter()
        .filter(|p| obj.contains_key(p.key()))
        .collect();
    let presentation = match present.as_slice() {
        [p] => *p,
        [] => return Err(Error::Input("expected one of `dual_rays`, `primal_rays`, `normals`".into())),
        _ => return Err(Error::Input("give exactly one presentation: `dual_rays`, `primal_rays` or `normals`".into())),
    };
    let key = presentation.key();
    let Value::Array(rows) = &obj[key] else {
        return Err(Error::Input(format!("`{key}` must be an array of integer arrays")));
    };
    let mut vectors = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(entries) = row else {
            return Err(Error::Input(format!("`{key}[{i}]` must be an array")));
        };
        if entries.len() != rank {
            return Err(Error::Input(format!("`{key}[{i}]` has {} entries but rank is {rank}", entries.len())));
        }
        let mut v = Vec::with_capacity(rank);
        for (j, x) in entries.iter().enumerate() {
            v.push(parse_int(x).ok_or_else(|| Error::Input(format!("`{key}[{i}][{j}]` is not an integer")))?);
        }
        vectors.push(v);
    }
    let labels = match obj.get("labels") {
        None => None,
        Some(Value::Array(ls)) => Some(
            ls.iter()
                .enumerate()
                .map(|(i, l)| {
                    l.as_str().map(str::to_owned).ok_or_else(|| Error::Input(format!("`labels[{i}]` is not a string")))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        Some(_) => return Err(Error::Input("`labels` must be an array of strings".into())),
    };
    Ok(ConeInput { rank, presentation, vectors, labels })
}

/// Integers may be JSON numbers or decimal strings (for values beyond 64 bits).
fn parse_int(v: &Value) -> Option<Int> {
    match v {
        Value::Number(n) => n.as_i64().map(Int::from).or_else(|| n.as_u64().map(Int::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// JSON number when it fits in 64 bits, decimal string otherwise.
pub fn int_value(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_list_value(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_presentations() {
        let i = parse_input(r#"{"rank":2,"dual_rays":[[1,1],[-1,1]]}"#).unwrap();
        assert_eq!(i.presentation, Presentation::DualRays);
        assert_eq!(i.vectors.len(), 2);
        let i = parse_input(r#"{"rank":1,"normals":[["1"]],"labels":["x"]}"#).unwrap();
        assert_eq!(i.labels, Some(vec!["x".to_string()]));
    }

    #[test]
    fn rejects_bad_input() {
        let err = |s: &str| match parse_input(s) {
            Err(Error::Input(m)) => m,
            other => panic!("expected input error, got {other:?}"),
        };
        assert!(err(r#"{"rank":2,"normals":[[0,1]],"dual_rays":[[0,1]]}"#).contains("exactly one"));
        assert!(err(r#"{"rank":2,"normals":[[0,1.5]]}"#).contains("normals[0][1]"));
        assert!(err(r#"{"rank":2,"normals":[[0,1,2]]}"#).contains("rank is 2"));
        assert!(err("{\n\"rank\": 2,\n oops}").starts_with("line 3"));
    }
}
