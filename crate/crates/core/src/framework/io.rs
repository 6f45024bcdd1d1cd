//! JSON interchange.
//!
//! Numbers are read from their decimal text, so `0.1` becomes exactly 1/10.
//! Strings of the form `"p/q"` are accepted wherever a number is.
//! On output, rationals with terminating decimal expansion are written as
//! JSON numbers and everything else as `"p/q"` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::{json, Map, Number, Value};

use super::{Framework, Geometry, Load, Stress, VelocityField};
use crate::error::{Error, Result};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(k) => (&body[..k], i64::from_str(&body[k + 1..]).ok()?),
        None => (body, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut n = BigInt::from_str(&digits).ok()?;
    if neg {
        n = -n;
    }
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let p: BigInt = Pow::pow(&ten, scale.unsigned_abs());
    Some(if scale >= 0 {
        BigRational::from_integer(n * p)
    } else {
        BigRational::new(n, p)
    })
}

fn parse_ratio_string(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_decimal(p)?;
            let q = parse_decimal(q)?;
            (!q.is_zero()).then(|| p / q)
        }
        None => parse_decimal(s),
    }
}

/// The rational whose decimal text is the shortest round-trip form of `x`.
pub(crate) fn decimal_rational(x: f64) -> Option<BigRational> {
    x.is_finite().then(|| parse_decimal(&format!("{x}")))?
}

/// Exact value of a JSON number or `"p/q"` string.
pub(crate) fn parse_number(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            parse_decimal(&n.to_string()).ok_or_else(|| schema(format!("bad number {n}")))
        }
        Value::String(s) => {
            parse_ratio_string(s).ok_or_else(|| schema(format!("bad rational string {s:?}")))
        }
        other => Err(schema(format!("expected a number, found {other}"))),
    }
}

fn parse_vector(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| schema("expected an array of numbers"))?
        .iter()
        .map(parse_number)
        .collect()
}

pub(crate) fn parse_rational_matrix(v: &Value) -> Result<Vec<Vec<BigRational>>> {
    v.as_array()
        .ok_or_else(|| schema("expected an array of arrays"))?
        .iter()
        .map(parse_vector)
        .collect()
}

fn to_f64_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    use crate::linalg::Scalar;
    rows.iter()
        .map(|r| r.iter().map(Scalar::as_f64).collect())
        .collect()
}

fn parse_index(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|k| k as usize)
        .ok_or_else(|| schema(format!("expected a vertex index, found {v}")))
}

fn parse_edges(v: &Value) -> Result<Vec<(usize, usize)>> {
    v.as_array()
        .ok_or_else(|| schema("\"edges\" must be an array"))?
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([i, j]) => Ok((parse_index(i)?, parse_index(j)?)),
            _ => Err(schema(format!("edge must be a pair [i, j], found {e}"))),
        })
        .collect()
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("missing field {key:?}")))
}

/// Parse a framework document. Unknown keys (for instance a catalog
/// `"provenance"` block) are ignored. A document marked `"approximate": true`
/// yields a framework without exact coordinates.
pub fn parse_framework(text: &str) -> Result<Framework> {
    framework_from_value(&parse_json(text)?)
}

pub(crate) fn framework_from_value(doc: &Value) -> Result<Framework> {
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("framework document must be an object"))?;
    let dimension = field(obj, "dimension")?
        .as_u64()
        .ok_or_else(|| schema("\"dimension\" must be a positive integer"))?
        as usize;
    let geometry = Geometry::from_str(
        field(obj, "geometry")?
            .as_str()
            .ok_or_else(|| schema("\"geometry\" must be a string"))?,
    )?;
    let vertices = parse_rational_matrix(field(obj, "vertices")?)?;
    let edges = parse_edges(field(obj, "edges")?)?;
    let mut fw = Framework::from_exact(dimension, geometry, vertices, edges)?;
    // decimals standing in for irrational coordinates
    if obj.get("approximate") == Some(&Value::Bool(true)) {
        fw = fw.without_exact();
    }
    match obj.get("labels") {
        None | Some(Value::Null) => Ok(fw),
        Some(Value::Array(ls)) => {
            let labels = ls
                .iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_owned)
                        .ok_or_else(|| schema("labels must be strings"))
                })
                .collect::<Result<Vec<_>>>()?;
            fw.with_labels(labels)
        }
        Some(_) => Err(schema("\"labels\" must be an array")),
    }
}

fn terminating_decimal(x: &BigRational) -> Option<String> {
    let mut d = x.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut a, mut b) = (0u32, 0u32);
    while d.is_even() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return None;
    }
    let k = a.max(b);
    let scale: BigInt = Pow::pow(&BigInt::from(10), k);
    let m = x.numer() * (&scale / x.denom());
    let digits = m.abs().to_string();
    let sign = if m.is_negative() { "-" } else { "" };
    if k == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let k = k as usize;
    let padded = format!("{digits:0>width$}", width = k + 1);
    let (int, frac) = padded.split_at(padded.len() - k);
    Some(format!("{sign}{int}.{frac}"))
}

/// JSON rendering of an exact rational.
pub fn rational_to_json(x: &BigRational) -> Value {
    match terminating_decimal(x) {
        Some(s) => Value::Number(Number::from_str(&s).expect("decimal literal")),
        None => Value::String(format!("{}/{}", x.numer(), x.denom())),
    }
}

fn f64_to_json(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub(crate) fn f64_rows_to_json(rows: &[Vec<f64>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().copied().map(f64_to_json).collect()))
            .collect(),
    )
}

pub fn framework_to_value(fw: &Framework) -> Value {
    let vertices = match fw.exact_vertices() {
        Some(e) => Value::Array(
            e.iter()
                .map(|r| Value::Array(r.iter().map(rational_to_json).collect()))
                .collect(),
        ),
        None => f64_rows_to_json(fw.vertices()),
    };
    let mut v = json!({
        "dimension": fw.dimension(),
        "geometry": fw.geometry().name(),
        "vertices": vertices,
        "edges": fw.edges().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
    });
    if let Some(l) = fw.labels() {
        v["labels"] = json!(l);
    }
    v
}

pub fn framework_to_json(fw: &Framework) -> String {
    serde_json::to_string_pretty(&framework_to_value(fw)).expect("serializable")
}

fn parse_field(text: &str) -> Result<Vec<Vec<f64>>> {
    let doc = parse_json(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("field document must be an object"))?;
    Ok(to_f64_rows(&parse_rational_matrix(field(obj, "field")?)?))
}

pub fn parse_velocity_field(text: &str) -> Result<VelocityField> {
    parse_field(text).map(VelocityField::new)
}

pub fn parse_load(text: &str) -> Result<Load> {
    parse_field(text).map(Load::new)
}

/// Read `{"stress": [[i, j, value], ...]}` against the edges of `fw`.
/// Edges not listed get zero stress.
pub fn parse_stress(text: &str, fw: &Framework) -> Result<Stress> {
    use crate::linalg::Scalar;
    let doc = parse_json(text)?;
    let entries = doc
        .get("stress")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("missing array field \"stress\""))?;
    let mut s = Stress::zero_for(fw);
    for e in entries {
        let Some([i, j, v]) = e.as_array().map(Vec::as_slice) else {
            return Err(schema(format!(
                "stress entry must be [i, j, value], found {e}"
            )));
        };
        let (i, j) = (parse_index(i)?, parse_index(j)?);
        let k = fw
            .edges()
            .iter()
            .position(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
            .ok_or_else(|| Error::InvalidEdge(format!("{i}-{j} is not an edge")))?;
        s.values[k] = parse_number(v)?.as_f64();
    }
    Ok(s)
}

pub fn stress_to_value(s: &Stress) -> Value {
    json!({
        "stress": s.edges.iter().zip(&s.values)
            .map(|(&(i, j), &v)| json!([i, j, f64_to_json(v)]))
            .collect::<Vec<_>>()
    })
}
