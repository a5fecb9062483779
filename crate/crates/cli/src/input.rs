//! Input handling: the JSON input schema and its expression front end.

use crate::expr;
use anyhow::{anyhow, bail, Context, Result};
use newton_aj::diagram::SupportSet;
use newton_aj::tri::Simplex;
use newton_aj::{Int, Rat};
use num_traits::One;
use serde_json::{json, Value};
use std::path::Path;

/// A parsed input: the variables fixing the coordinate order, the support,
/// the optional coefficients (echoed, never used), and the user's
/// nondegeneracy assertion.
#[derive(Debug, Clone)]
pub struct InputSpec {
    pub variables: Vec<String>,
    pub support: Vec<Vec<Int>>,
    pub coefficients: Option<Vec<Rat>>,
    pub nondegenerate: bool,
}

impl InputSpec {
    pub fn from_expression(text: &str, vars: Option<Vec<String>>) -> Result<Self> {
        let parsed = expr::parse_expression(text, vars).map_err(|e| anyhow!("{e}"))?;
        Ok(InputSpec {
            variables: parsed.variables,
            support: parsed.support,
            coefficients: Some(parsed.coefficients),
            nondegenerate: true,
        })
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading input file {}", path.display()))?;
        let value: Value = serde_json::from_str(&text)
            .with_context(|| format!("parsing JSON in {}", path.display()))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let schema = value
            .get("schema")
            .and_then(Value::as_u64)
            .ok_or_else(|| anyhow!("input is missing the \"schema\" field"))?;
        if schema != 1 {
            bail!("unsupported schema version {schema}; this build reads schema 1");
        }
        let variables: Vec<String> = value
            .get("variables")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("input is missing \"variables\""))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| anyhow!("variable names must be strings"))
            })
            .collect::<Result<_>>()?;
        let support_val = value
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("input is missing \"support\""))?;
        let mut support = Vec::with_capacity(support_val.len());
        for row in support_val {
            let row = row
                .as_array()
                .ok_or_else(|| anyhow!("support rows must be arrays of exponents"))?;
            if row.len() != variables.len() {
                bail!(
                    "support row has {} exponents but there are {} variables",
                    row.len(),
                    variables.len()
                );
            }
            let mut point = Vec::with_capacity(row.len());
            for e in row {
                let e = e
                    .as_u64()
                    .ok_or_else(|| anyhow!("exponents must be nonnegative integers"))?;
                point.push(Int::from(e));
            }
            support.push(point);
        }
        let nondegenerate = match value.get("nondegenerate") {
            None => true,
            Some(v) => v
                .as_bool()
                .ok_or_else(|| anyhow!("\"nondegenerate\" must be a boolean"))?,
        };
        if !nondegenerate {
            bail!(
                "input declares nondegenerate=false; every result of this tool \
                 assumes a Newton nondegenerate isolated singularity"
            );
        }
        let coefficients = match value.get("coefficients") {
            None => None,
            Some(Value::Array(arr)) => {
                if arr.len() != support.len() {
                    bail!("coefficients and support have different lengths");
                }
                let mut cs = Vec::with_capacity(arr.len());
                for c in arr {
                    let s = c
                        .as_str()
                        .ok_or_else(|| anyhow!("coefficients must be exact strings like \"3/2\""))?;
                    cs.push(parse_rat(s)?);
                }
                Some(cs)
            }
            Some(_) => bail!("\"coefficients\" must be an array of strings"),
        };
        Ok(InputSpec {
            variables,
            support,
            coefficients,
            nondegenerate,
        })
    }

    pub fn to_json(&self) -> Value {
        let support: Vec<Value> = self
            .support
            .iter()
            .map(|row| Value::Array(row.iter().map(crate::output::int_json).collect()))
            .collect();
        let mut obj = json!({
            "schema": 1,
            "variables": self.variables,
            "support": support,
            "nondegenerate": self.nondegenerate,
        });
        if let Some(cs) = &self.coefficients {
            obj["coefficients"] = Value::Array(
                cs.iter()
                    .map(|c| Value::String(crate::output::rat_str(c)))
                    .collect(),
            );
        }
        obj
    }

    pub fn to_support_set(&self) -> Result<SupportSet> {
        SupportSet::new(self.variables.len(), self.support.clone())
            .map_err(|e| anyhow!("invalid support: {e}"))
    }
}

/// Parse an exact rational string `p`, `-p`, or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: Int = num
        .parse()
        .with_context(|| format!("invalid rational \"{s}\""))?;
    let d: Int = den
        .parse()
        .with_context(|| format!("invalid rational \"{s}\""))?;
    if d == Int::from(0) {
        bail!("invalid rational \"{s}\": zero denominator");
    }
    Ok(Rat::new(n, d))
}

/// Read a triangulation file `{"cells": [[[...], ...], ...]}`.
pub fn read_triangulation(path: &Path) -> Result<Vec<Simplex>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading triangulation file {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing JSON in {}", path.display()))?;
    let cells = value
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("triangulation file is missing \"cells\""))?;
    let mut out = Vec::with_capacity(cells.len());
    for cell in cells {
        let cell = cell
            .as_array()
            .ok_or_else(|| anyhow!("each cell must be an array of vertices"))?;
        let mut vertices = Vec::with_capacity(cell.len());
        for v in cell {
            let v = v
                .as_array()
                .ok_or_else(|| anyhow!("each vertex must be an array of integers"))?;
            let mut coords = Vec::with_capacity(v.len());
            for x in v {
                let x = x
                    .as_i64()
                    .ok_or_else(|| anyhow!("vertex coordinates must be integers"))?;
                coords.push(Int::from(x));
            }
            vertices.push(coords);
        }
        out.push(Simplex::new(vertices).map_err(|e| anyhow!("{e}"))?);
    }
    Ok(out)
}

/// `p/q` or `p` string for a slope-like CLI argument.
pub fn parse_alpha(s: &str) -> Result<Rat> {
    let r = parse_rat(s)?;
    if r.denom() < &Int::one() {
        bail!("alpha must be given with a positive denominator");
    }
    Ok(r)
}
