//! JSON shapes for results: exact strings for every rational, never
//! floating point.

use newton_aj::diagram::{Face, NewtonDiagram};
use newton_aj::kn::{Coeff, Degree, Ext, ExtNat, KNElement};
use newton_aj::{Int, Rat};
use num_traits::One;
use serde_json::{json, Value};

/// Exact decimal-free string for a rational: `p` or `p/q`.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A big integer as a JSON number when it fits, else an exact string.
pub fn int_json(v: &Int) -> Value {
    match i64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

/// A rational as a JSON value: integer number when integral and small,
/// exact string otherwise.
pub fn rat_json(r: &Rat) -> Value {
    if r.denom().is_one() {
        int_json(r.numer())
    } else {
        json!(rat_str(r))
    }
}

pub fn ext_nat_json(v: &ExtNat) -> Value {
    match v {
        ExtNat::Finite(x) => json!(x.to_string()),
        ExtNat::Infinity => json!("inf"),
    }
}

pub fn ext_int_json(v: &Ext<Int>) -> Value {
    match v {
        Ext::Finite(x) => json!(x.to_string()),
        Ext::PosInfinity => json!("inf"),
        Ext::NegInfinity => json!("-inf"),
    }
}

pub fn degree_json(d: &Degree) -> Value {
    match d {
        Degree::MinusInfinity => json!("-inf"),
        Degree::Slope(s) => json!(s.to_string()),
    }
}

/// A `KN` element as the ordered record list
/// `[{"alpha": "p/q" | "0" | "inf", "coeff": ...}, …]`, slopes ascending.
pub fn kn_json<C: Coeff>(a: &KNElement<C>) -> Value {
    let records: Vec<Value> = a
        .iter()
        .map(|(slope, coeff)| {
            json!({
                "alpha": slope.to_string(),
                "coeff": rat_json(&coeff.to_rat()),
            })
        })
        .collect();
    Value::Array(records)
}

pub fn point_json(p: &[Int]) -> Value {
    Value::Array(p.iter().map(int_json).collect())
}

pub fn rat_pair_json(p: &(Rat, Rat)) -> Value {
    json!([rat_str(&p.0), rat_str(&p.1)])
}

pub fn face_json(face: &Face) -> Value {
    let mut obj = json!({
        "vertices": face.vertices().iter().map(|v| point_json(v)).collect::<Vec<_>>(),
        "i_k": face.i_k(),
        "dim": face.dim(),
        "coordinate_facet": face.is_coordinate_facet(),
    });
    if let Some(nv) = face.normal() {
        obj["normal"] = Value::Array(nv.entries().iter().map(ext_nat_json).collect());
        obj["m"] = json!(face.weight_m().expect("coordinate facet").to_string());
        obj["n"] = json!(face.weight_n().expect("coordinate facet").to_string());
        obj["maximal_axial"] = json!(rat_str(&face.maximal_axial().expect("coordinate facet")));
    }
    obj
}

/// Polygon summary common to `aj` and `jac`.
pub fn polygon_summary(level: usize, a: &KNElement<Int>) -> Value {
    let mut obj = json!({
        "level": level,
        "polygon": kn_json(a),
        "degree": degree_json(&a.degree()),
        "length": ext_int_json(&a.length()),
        "height": ext_int_json(&a.height()),
    });
    if let Ok(verts) = a.virtual_vertices() {
        obj["virtual_vertices"] = Value::Array(verts.iter().map(rat_pair_json).collect());
    }
    obj
}

pub fn diagram_json(d: &NewtonDiagram) -> Value {
    let faces: Vec<Value> = d.faces().iter().map(face_json).collect();
    json!({
        "n": d.n(),
        "multiplicity": d.support().multiplicity().to_string(),
        "convenient": d.is_convenient(),
        "faces": faces,
        "coordinate_facets": d.coordinate_facet_indices(),
        "maximal_axial": d.maximal_axial_diagram().ok().map(|m| rat_str(&m)),
    })
}

/// Render a result value as plain text: dotted keys, one line each.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    flatten("", value, &mut out);
    out
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push_str(" = ");
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}
