//! JSON I/O for spaces, modules and pairs.
//!
//! Ring elements are arrays of coefficients in `[0, p^N)`, least significant
//! first; a bare integer is accepted on input as a constant. Integers may be
//! given as JSON numbers or decimal strings.

use serde_json::{json, Map, Value};

use crate::dieudonne::{GradedDieudonne, UnitaryDieudonne};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::pairs::PairModule;
use crate::ring::{Elem, Ring};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("missing field \"{key}\"")))
}

fn as_uint(v: &Value) -> Option<u64> {
    v.as_u64().or_else(|| v.as_str().and_then(|s| s.trim().parse().ok()))
}

fn uint(obj: &Map<String, Value>, key: &str) -> Result<u64> {
    as_uint(field(obj, key)?).ok_or_else(|| schema(format!("\"{key}\" must be a non-negative integer")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| schema("expected a JSON object"))
}

pub fn elem_to_json(r: &Ring, e: Elem) -> Value {
    json!(r.coeffs(e))
}

pub fn elem_from_json(r: &Ring, v: &Value) -> Result<Elem> {
    if let Some(x) = as_uint(v) {
        if x >= r.pn() {
            return Err(schema(format!("coefficient {x} is not below p^N = {}", r.pn())));
        }
        return Ok(r.from_int(x as i64));
    }
    let arr = v.as_array().ok_or_else(|| schema("ring element must be an integer or a coefficient array"))?;
    if arr.len() > r.degree() {
        return Err(schema(format!("{} coefficients for a ring of degree {}", arr.len(), r.degree())));
    }
    let cs: Vec<u64> = arr
        .iter()
        .map(|c| as_uint(c).ok_or_else(|| schema("coefficients must be non-negative integers")))
        .collect::<Result<_>>()?;
    let mut full = cs.clone();
    full.resize(r.degree(), 0);
    r.from_coeffs(&full).map_err(|e| schema(e.to_string()))
}

pub fn mat_to_json(r: &Ring, m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| elem_to_json(r, m[(i, j)])).collect())).collect())
}

pub fn mat_from_json(r: &Ring, v: &Value, rows: usize, cols: usize, what: &str) -> Result<Mat> {
    let arr = v.as_array().ok_or_else(|| schema(format!("\"{what}\" must be an array of rows")))?;
    if arr.len() != rows {
        return Err(schema(format!("\"{what}\" has {} rows, expected {rows}", arr.len())));
    }
    let mut m = Mat::zeros(rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| schema(format!("\"{what}\" row {i} is not an array")))?;
        if row.len() != cols {
            return Err(schema(format!("\"{what}\" row {i} has {} entries, expected {cols}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = elem_from_json(r, e)?;
        }
    }
    Ok(m)
}

fn ring_header(r: &Ring) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("p".into(), json!(r.p()));
    obj.insert("field_degree".into(), json!(r.degree()));
    if !r.is_field() {
        obj.insert("precision".into(), json!(r.precision()));
    }
    obj
}

fn ring_from_header(obj: &Map<String, Value>) -> Result<Ring> {
    let p = uint(obj, "p")?;
    let d = uint(obj, "field_degree")? as usize;
    let prec = match obj.get("precision") {
        None | Some(Value::Null) => 1,
        Some(v) => as_uint(v).ok_or_else(|| schema("\"precision\" must be a positive integer"))? as u32,
    };
    let r = if prec == 1 { Ring::field(p, d) } else { Ring::witt(p, d, prec) };
    r.map_err(|e| schema(e.to_string()))
}

/// `{"p", "field_degree", "n", "precision"?, "F": {...}, "V": {...}, "gram"}`.
pub fn module_to_json(m: &UnitaryDieudonne) -> Value {
    let r = m.ring();
    let g = &m.graded;
    let mut obj = ring_header(r);
    obj.insert("n".into(), json!(m.n()));
    obj.insert("F".into(), json!({"m0_to_m1": mat_to_json(r, &g.f01), "m1_to_m0": mat_to_json(r, &g.f10)}));
    obj.insert("V".into(), json!({"m0_to_m1": mat_to_json(r, &g.v01), "m1_to_m0": mat_to_json(r, &g.v10)}));
    obj.insert("gram".into(), mat_to_json(r, &m.gram));
    Value::Object(obj)
}

/// Parses and validates (`FV = VF = p`, pairing compatibility).
pub fn module_from_json(v: &Value) -> Result<UnitaryDieudonne> {
    let obj = object(v)?;
    let r = ring_from_header(obj)?;
    let n = uint(obj, "n")? as usize;
    if n == 0 {
        return Err(schema("\"n\" must be positive"));
    }
    let pair = |key: &str| -> Result<(Mat, Mat)> {
        let o = object(field(obj, key)?)?;
        Ok((
            mat_from_json(&r, field(o, "m0_to_m1")?, n, n, &format!("{key}.m0_to_m1"))?,
            mat_from_json(&r, field(o, "m1_to_m0")?, n, n, &format!("{key}.m1_to_m0"))?,
        ))
    };
    let (f01, f10) = pair("F")?;
    let (v01, v10) = pair("V")?;
    let gram = mat_from_json(&r, field(obj, "gram")?, n, n, "gram")?;
    let m = UnitaryDieudonne::new(GradedDieudonne::new(&r, f01, f10, v01, v10)?, gram)?;
    m.validate(false)?;
    Ok(m)
}

/// `{"p", "field_degree", "n", "u", "v", "c"}`.
pub fn pair_to_json(pm: &PairModule) -> Value {
    let r = &pm.ring;
    let mut obj = ring_header(r);
    obj.insert("n".into(), json!(pm.n));
    obj.insert("u".into(), mat_to_json(r, &pm.u));
    obj.insert("v".into(), mat_to_json(r, &pm.v));
    obj.insert("c".into(), json!(pm.c));
    Value::Object(obj)
}

pub fn pair_from_json(v: &Value) -> Result<PairModule> {
    let obj = object(v)?;
    let r = ring_from_header(obj)?;
    if !r.is_field() {
        return Err(schema("pairs are defined over a field; drop \"precision\""));
    }
    let n = uint(obj, "n")? as usize;
    let u = mat_from_json(&r, field(obj, "u")?, n, n, "u")?;
    let v = mat_from_json(&r, field(obj, "v")?, n, n, "v")?;
    let c = match obj.get("c") {
        None => 1,
        Some(x) => as_uint(x).ok_or_else(|| schema("\"c\" must be a positive integer"))? as u32,
    };
    PairModule::new(&r, u, v, c)
}
