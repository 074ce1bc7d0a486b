//! JSON documents: candidate inputs and certificate files.
//!
//! Input document:
//!
//! ```json
//! {"kind": "affine", "K": 2, "params": {"w": [0.5, 0.5]},
//!  "grid": {"levels": [0, 1, 2]}, "target": [1, 1]}
//! ```
//!
//! `kind` is one of `affine` (params `w`, optional `clamp`),
//! `arithmetic_mean`, `product`, `maximum`, `minimum`, `projection`
//! (params `k`, 1-based), `constant` (params `c`) or `table` (params
//! `points` and `values`). `grid` holds either `levels` (a lattice) or
//! explicit `points`; a table without `grid` is certified on its own points.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus::{lattice_grid, sample_on_grid, CandidateFunction, GridFunction, Kind};
use crate::error::{Error, Result};
use crate::witness::Certificate;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    kind: String,
    #[serde(rename = "K")]
    k: Option<usize>,
    #[serde(default)]
    params: Option<Value>,
    grid: Option<RawGrid>,
    target: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    levels: Option<Vec<f64>>,
    points: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineParams {
    w: Vec<f64>,
    #[serde(default)]
    clamp: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectionParams {
    k: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableParams {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Levels(Vec<f64>),
    Points(Vec<Vec<f64>>),
}

#[derive(Debug, Clone)]
pub struct InputDoc {
    pub candidate: CandidateFunction,
    pub grid: Option<GridSpec>,
    pub target: Option<Vec<f64>>,
}

fn field_err(field: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{field}: {e}"))
}

fn params<T: for<'de> Deserialize<'de>>(kind: &str, p: Option<Value>) -> Result<T> {
    let p = p.ok_or_else(|| field_err("params", format!("required for kind `{kind}`")))?;
    serde_json::from_value(p).map_err(|e| field_err("params", e))
}

fn no_params(kind: &str, p: &Option<Value>) -> Result<()> {
    match p {
        None | Some(Value::Null) => Ok(()),
        Some(Value::Object(m)) if m.is_empty() => Ok(()),
        Some(_) => Err(field_err("params", format!("kind `{kind}` takes no parameters"))),
    }
}

/// Parses an input document. Every error names the offending field.
pub fn parse_input(text: &str) -> Result<InputDoc> {
    let raw: RawInput = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let require_k = |kind: &str| {
        raw.k.ok_or_else(|| field_err("K", format!("required for kind `{kind}`")))
    };
    let kind_name = raw.kind.as_str();
    let (kind, k) = match kind_name {
        "affine" => {
            let p: AffineParams = params(kind_name, raw.params.clone())?;
            let k = raw.k.unwrap_or(p.w.len());
            (Kind::Affine { w: p.w, clamp: p.clamp }, k)
        }
        "arithmetic_mean" | "product" | "maximum" | "minimum" => {
            no_params(kind_name, &raw.params)?;
            let kind = match kind_name {
                "arithmetic_mean" => Kind::ArithmeticMean,
                "product" => Kind::Product,
                "maximum" => Kind::Maximum,
                _ => Kind::Minimum,
            };
            (kind, require_k(kind_name)?)
        }
        "projection" => {
            let p: ProjectionParams = params(kind_name, raw.params.clone())?;
            (Kind::Projection(p.k), require_k(kind_name)?)
        }
        "constant" => {
            let p: ConstantParams = params(kind_name, raw.params.clone())?;
            (Kind::Constant(p.c), require_k(kind_name)?)
        }
        "table" => {
            let p: TableParams = params(kind_name, raw.params.clone())?;
            let g = GridFunction::new(p.points, p.values).map_err(|e| field_err("params", e))?;
            let k = raw.k.unwrap_or(g.dim());
            (Kind::Table(g), k)
        }
        other => return Err(field_err("kind", format!("unknown kind `{other}`"))),
    };
    let field = match &kind {
        Kind::Affine { .. } | Kind::Table(_) | Kind::Projection(_) | Kind::Constant(_) => "params",
        _ => "K",
    };
    let candidate = CandidateFunction::new(kind, k).map_err(|e| {
        if k == 0 {
            field_err("K", e)
        } else {
            field_err(field, e)
        }
    })?;

    let grid = match raw.grid {
        None => None,
        Some(RawGrid { levels: Some(l), points: None }) => Some(GridSpec::Levels(l)),
        Some(RawGrid { levels: None, points: Some(p) }) => Some(GridSpec::Points(p)),
        Some(_) => return Err(field_err("grid", "exactly one of `levels` or `points` is required")),
    };
    if let Some(t) = &raw.target {
        if t.len() != k {
            return Err(field_err("target", Error::DimensionMismatch { expected: k, got: t.len() }));
        }
    }
    Ok(InputDoc { candidate, grid, target: raw.target })
}

impl InputDoc {
    pub fn dim(&self) -> usize {
        self.candidate.dim()
    }

    pub fn is_table(&self) -> bool {
        matches!(self.candidate.kind(), Kind::Table(_))
    }

    /// The sampled grid described by the document.
    pub fn grid_function(&self) -> Result<GridFunction> {
        match (&self.grid, self.candidate.kind()) {
            (None, Kind::Table(g)) => Ok(g.clone()),
            (None, _) => Err(field_err("grid", "required for closed-form kinds")),
            (Some(GridSpec::Levels(l)), _) => self.lattice(l),
            (Some(GridSpec::Points(p)), _) => {
                sample_on_grid(&self.candidate, p.clone()).map_err(|e| field_err("grid.points", e))
            }
        }
    }

    pub fn lattice(&self, levels: &[f64]) -> Result<GridFunction> {
        let pts = lattice_grid(self.dim(), levels).map_err(|e| field_err("grid.levels", e))?;
        sample_on_grid(&self.candidate, pts).map_err(|e| field_err("grid.levels", e))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    format_version: u32,
    #[serde(rename = "K")]
    k: usize,
    n: usize,
    atoms: Vec<String>,
    probs: Vec<f64>,
    evar_table: Vec<Vec<f64>>,
    f_values: Vec<f64>,
    merged_expectation: f64,
}

/// Parses a certificate file. Only syntax and the format version are
/// checked here; semantic checks belong to verification.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let f: CertificateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if f.format_version != FORMAT_VERSION {
        return Err(field_err(
            "format_version",
            format!("unsupported version {} (expected {FORMAT_VERSION})", f.format_version),
        ));
    }
    Ok(Certificate {
        k: f.k,
        n: f.n,
        atoms: f.atoms,
        probs: f.probs,
        evar_table: f.evar_table,
        f_values: f.f_values,
        merged_expectation: f.merged_expectation,
    })
}

pub fn certificate_to_json(c: &Certificate) -> String {
    let f = CertificateFile {
        format_version: FORMAT_VERSION,
        k: c.k,
        n: c.n,
        atoms: c.atoms.clone(),
        probs: c.probs.clone(),
        evar_table: c.evar_table.clone(),
        f_values: c.f_values.clone(),
        merged_expectation: c.merged_expectation,
    };
    serde_json::to_string_pretty(&f).expect("certificate serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_closed_forms() {
        let d = parse_input(r#"{"kind":"product","K":2,"grid":{"levels":[0,2]}}"#).unwrap();
        assert_eq!(d.dim(), 2);
        let g = d.grid_function().unwrap();
        assert_eq!(g.values(), &[0.0, 0.0, 0.0, 4.0]);

        let d = parse_input(r#"{"kind":"affine","params":{"w":[0.5,0.5]},"grid":{"points":[[1,1]]}}"#).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.grid_function().unwrap().values(), &[1.0]);

        let d = parse_input(r#"{"kind":"constant","K":3,"params":{"c":1},"target":[1,1,1]}"#).unwrap();
        assert_eq!(d.target, Some(vec![1.0; 3]));
    }

    #[test]
    fn parse_table() {
        let d = parse_input(
            r#"{"kind":"table","params":{"points":[[0],[2]],"values":[0.5,1.5]}}"#,
        )
        .unwrap();
        assert!(d.is_table());
        assert_eq!(d.grid_function().unwrap().len(), 2);
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"kind":"product","grid":{"levels":[0,2]}}"#, "K"),
            (r#"{"kind":"nope","K":2}"#, "kind"),
            (r#"{"kind":"affine","K":3,"params":{"w":[0.5,0.5]}}"#, "params"),
            (r#"{"kind":"affine","params":{"w":[0.5],"bogus":1}}"#, "bogus"),
            (r#"{"kind":"product","K":2,"grid":{"levels":[0,2],"points":[[0,0]]}}"#, "grid"),
            (r#"{"kind":"product","K":2,"target":[1]}"#, "target"),
            (r#"{"kind":"product","K":2,"extra":1}"#, "extra"),
            (r#"{"kind":"projection","K":2,"params":{"k":3}}"#, "params"),
            (r#"{"kind":"product","K":2,"params":{"w":[1]}}"#, "params"),
            (r#"{"kind":"product","K":0}"#, "K"),
        ];
        for (text, field) in cases {
            let err = parse_input(text).unwrap_err().to_string();
            assert!(err.contains(field), "{text} -> {err}");
        }
        let d = parse_input(r#"{"kind":"product","K":2}"#).unwrap();
        assert!(d.grid_function().unwrap_err().to_string().contains("grid"));
        let d = parse_input(r#"{"kind":"product","K":2,"grid":{"levels":[2,0]}}"#).unwrap();
        assert!(d.grid_function().unwrap_err().to_string().contains("grid.levels"));
    }

    #[test]
    fn certificate_version_checked() {
        let text = r#"{"format_version":2,"K":1,"n":1,"atoms":["x1"],"probs":[1],"evar_table":[[1]],"f_values":[2],"merged_expectation":2}"#;
        assert!(parse_certificate(text).unwrap_err().to_string().contains("format_version"));
        let text = text.replace("\"format_version\":2", "\"format_version\":1");
        assert_eq!(parse_certificate(&text).unwrap().merged_expectation, 2.0);
    }

    proptest! {
        #[test]
        fn certificate_roundtrip_is_lossless(
            rows in proptest::collection::vec(proptest::collection::vec(0.0f64..1e6, 3), 1..6),
            seed in any::<u64>(),
        ) {
            let n = rows.len();
            let raw: Vec<f64> = (0..n).map(|j| ((seed >> (j % 60)) & 0xff) as f64 / 7.0 + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let c = Certificate {
                k: 3,
                n,
                atoms: (1..=n).map(|j| format!("x{j}")).collect(),
                probs: raw.iter().map(|r| r / total).collect(),
                f_values: rows.iter().map(|r| r[0] * std::f64::consts::PI).collect(),
                evar_table: rows,
                merged_expectation: 1.0 / 3.0,
            };
            let back = parse_certificate(&certificate_to_json(&c)).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
