//! JSON encodings. Every document carries `"bav": 1`, the field name and the diameter.
//!
//! Scalars: rationals as `"a/b"`, GF(p) elements as integers, elements of ℚ(q)
//! as `{"num": [...], "den": [...]}` with rational coefficients in ascending degree.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::billiard::{BilliardArray, ConcreteBilliardArray};
use crate::error::{Error, Result};
use crate::field::{parse_rational, rational_to_string, FieldContext, Scalar};
use crate::flags::{Flag, FlagTriple};
use crate::grid::Location;
use crate::labelling::{EdgeLabelling, ValueFunction};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::poly::Poly;
use crate::rep::{EquitableOperators, Flavor};

pub const VERSION: u64 = 1;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    match c {
        Scalar::Rational(r) => Value::String(rational_to_string(r)),
        Scalar::Prime { v, .. } => json!(v),
        Scalar::RatFunc(f) => {
            let coeffs = |p: &Poly| p.coeffs().iter().map(|c| Value::String(rational_to_string(c))).collect::<Vec<_>>();
            json!({ "num": coeffs(f.num()), "den": coeffs(f.den()) })
        }
    }
}

pub fn scalar_from_json(ctx: FieldContext, v: &Value) -> Result<Scalar> {
    match ctx {
        FieldContext::Rationals => {
            let s = v.as_str().ok_or_else(|| bad("rational scalars are strings"))?;
            Ok(Scalar::Rational(parse_rational(s)?))
        }
        FieldContext::PrimeField(p) => {
            let k = v.as_u64().ok_or_else(|| bad("GF(p) scalars are nonnegative integers"))?;
            if k >= p {
                return Err(bad(format!("{} is not reduced mod {}", k, p)));
            }
            Ok(ctx.int(k as i64))
        }
        FieldContext::RationalFunctions => {
            let poly = |key: &str| -> Result<Poly> {
                let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(format!("missing '{}'", key)))?;
                let coeffs = arr
                    .iter()
                    .map(|c| c.as_str().ok_or_else(|| bad("coefficients are strings")).and_then(parse_rational))
                    .collect::<Result<Vec<BigRational>>>()?;
                Ok(Poly::from_coeffs(coeffs))
            };
            Scalar::from_poly_ratio(poly("num")?, poly("den")?)
        }
    }
}

pub fn vector_to_json(v: &Vector) -> Value {
    Value::Array(v.entries().iter().map(scalar_to_json).collect())
}

pub fn vector_from_json(ctx: FieldContext, v: &Value) -> Result<Vector> {
    let arr = v.as_array().ok_or_else(|| bad("vectors are arrays"))?;
    Vector::new(ctx, arr.iter().map(|c| scalar_from_json(ctx, c)).collect::<Result<_>>()?)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.row_vectors().iter().map(vector_to_json).collect())
}

pub fn matrix_from_json(ctx: FieldContext, cols: usize, v: &Value) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| bad("matrices are arrays of rows"))?;
    let rows: Vec<Vector> = rows.iter().map(|r| vector_from_json(ctx, r)).collect::<Result<_>>()?;
    Matrix::from_row_vectors(ctx, cols, &rows)
}

fn header(ctx: FieldContext, n: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("bav".into(), json!(VERSION));
    m.insert("field".into(), json!(ctx.to_string()));
    m.insert("diameter".into(), json!(n));
    m
}

/// Field and diameter of a document, after checking the version tag.
pub fn read_header(v: &Value) -> Result<(FieldContext, usize)> {
    if v.get("bav").and_then(Value::as_u64) != Some(VERSION) {
        return Err(bad("missing or unsupported \"bav\" version"));
    }
    let ctx: FieldContext = v.get("field").and_then(Value::as_str).ok_or_else(|| bad("missing field"))?.parse()?;
    let n = v.get("diameter").and_then(Value::as_u64).ok_or_else(|| bad("missing diameter"))? as usize;
    Ok((ctx, n))
}

/// Records the seed that produced a document.
pub fn with_seed(mut v: Value, seed: u64) -> Value {
    if let Some(m) = v.as_object_mut() {
        m.insert("seed".into(), json!(seed));
    }
    v
}

fn keyed<'a>(v: &'a Value, key: &str) -> Result<&'a Map<String, Value>> {
    v.get(key).and_then(Value::as_object).ok_or_else(|| bad(format!("missing object '{}'", key)))
}

pub fn cba_to_json(cba: &ConcreteBilliardArray) -> Value {
    let mut m = header(cba.ctx(), cba.diameter());
    let vectors: Map<String, Value> = cba.iter().map(|(l, v)| (l.key(), vector_to_json(v))).collect();
    m.insert("vectors".into(), Value::Object(vectors));
    Value::Object(m)
}

pub fn cba_from_json(v: &Value) -> Result<ConcreteBilliardArray> {
    let (ctx, n) = read_header(v)?;
    let vectors = keyed(v, "vectors")?
        .iter()
        .map(|(k, x)| Ok((Location::parse_key(k)?, vector_from_json(ctx, x)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    ConcreteBilliardArray::new(n, ctx, vectors)
}

pub fn ba_to_json(ba: &BilliardArray) -> Value {
    let mut m = header(ba.ctx(), ba.diameter());
    let subs: Map<String, Value> = ba.iter().map(|(l, g)| (l.key(), vector_to_json(g))).collect();
    m.insert("subspaces".into(), Value::Object(subs));
    Value::Object(m)
}

pub fn ba_from_json(v: &Value) -> Result<BilliardArray> {
    let (ctx, n) = read_header(v)?;
    let gens = keyed(v, "subspaces")?
        .iter()
        .map(|(k, x)| Ok((Location::parse_key(k)?, vector_from_json(ctx, x)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    BilliardArray::new(n, ctx, gens)
}

/// Either kind of array document, as a Billiard Array.
pub fn any_array_from_json(v: &Value) -> Result<BilliardArray> {
    if v.get("vectors").is_some() {
        cba_from_json(v)?.to_billiard()
    } else {
        ba_from_json(v)
    }
}

/// A flag as the list of echelon bases of its components.
pub fn flag_to_json(f: &Flag) -> Value {
    Value::Array(
        f.components()
            .iter()
            .map(|c| Value::Array(c.basis().iter().map(vector_to_json).collect()))
            .collect(),
    )
}

pub fn flag_from_json(ctx: FieldContext, dim: usize, v: &Value) -> Result<Flag> {
    let comps = v.as_array().ok_or_else(|| bad("flags are arrays of bases"))?;
    let comps = comps
        .iter()
        .map(|c| {
            let rows = c.as_array().ok_or_else(|| bad("bases are arrays of vectors"))?;
            let rows: Vec<Vector> = rows.iter().map(|r| vector_from_json(ctx, r)).collect::<Result<_>>()?;
            Subspace::span(ctx, dim, &rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Flag::new(comps)
}

pub fn triple_to_json(t: &FlagTriple) -> Value {
    let mut m = header(t.f1.ctx(), t.diameter());
    for (k, f) in [("f1", &t.f1), ("f2", &t.f2), ("f3", &t.f3)] {
        m.insert(k.into(), flag_to_json(f));
    }
    Value::Object(m)
}

pub fn triple_from_json(v: &Value) -> Result<FlagTriple> {
    let (ctx, n) = read_header(v)?;
    let get = |k: &str| flag_from_json(ctx, n + 1, v.get(k).ok_or_else(|| bad(format!("missing '{}'", k)))?);
    FlagTriple::new(get("f1")?, get("f2")?, get("f3")?)
}

fn edge_key(a: &Location, b: &Location) -> String {
    format!("{}>{}", a.key(), b.key())
}

/// One direction per edge; the reverse label is the reciprocal.
pub fn labelling_to_json(el: &EdgeLabelling) -> Value {
    let mut m = header(el.ctx(), el.diameter());
    let labels: Map<String, Value> = el
        .grid()
        .edges()
        .iter()
        .map(|(a, b)| (edge_key(a, b), scalar_to_json(el.label(a, b).expect("edge of the grid"))))
        .collect();
    m.insert("labels".into(), Value::Object(labels));
    Value::Object(m)
}

pub fn labelling_from_json(v: &Value) -> Result<EdgeLabelling> {
    let (ctx, n) = read_header(v)?;
    let labels = keyed(v, "labels")?
        .iter()
        .map(|(k, x)| {
            let (a, b) = k.split_once('>').ok_or_else(|| bad(format!("bad edge key '{}'", k)))?;
            Ok(((Location::parse_key(a)?, Location::parse_key(b)?), scalar_from_json(ctx, x)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    EdgeLabelling::new(n, ctx, labels)
}

pub fn values_to_json(psi: &ValueFunction) -> Value {
    let mut m = header(psi.ctx(), psi.diameter());
    let vals: Map<String, Value> = psi.iter().map(|(l, c)| (l.key(), scalar_to_json(c))).collect();
    m.insert("values".into(), Value::Object(vals));
    Value::Object(m)
}

pub fn values_from_json(v: &Value) -> Result<ValueFunction> {
    let (ctx, n) = read_header(v)?;
    let map = keyed(v, "values")?
        .iter()
        .map(|(k, x)| Ok((Location::parse_key(k)?, scalar_from_json(ctx, x)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    if n < 2 {
        return Err(Error::DiameterTooSmall(n));
    }
    let expected = crate::grid::grid_size(n - 2);
    if map.len() != expected {
        return Err(bad(format!("expected {} values, found {}", expected, map.len())));
    }
    let mut missing = None;
    let psi = ValueFunction::from_fn(n, ctx, |b| match map.get(b) {
        Some(c) => c.clone(),
        None => {
            missing = Some(*b);
            ctx.one()
        }
    })?;
    match missing {
        Some(b) => Err(bad(format!("no value for {}", b.key()))),
        None => Ok(psi),
    }
}

pub fn operators_to_json(ops: &EquitableOperators) -> Value {
    let mut m = header(ops.ctx(), ops.diameter());
    match ops.flavor() {
        Flavor::Sl2 => {
            m.insert("flavor".into(), json!("sl2"));
        }
        Flavor::Uq(q) => {
            m.insert("flavor".into(), json!("uq"));
            m.insert("q".into(), scalar_to_json(q));
        }
    }
    m.insert("basis".into(), json!("standard"));
    for (k, mat) in [
        ("X", ops.x()),
        ("Y", ops.y()),
        ("Z", ops.z()),
        ("nu_x", ops.nu_x()),
        ("nu_y", ops.nu_y()),
        ("nu_z", ops.nu_z()),
    ] {
        m.insert(k.into(), matrix_to_json(mat));
    }
    Value::Object(m)
}

pub fn operators_from_json(v: &Value) -> Result<EquitableOperators> {
    let (ctx, n) = read_header(v)?;
    let flavor = match v.get("flavor").and_then(Value::as_str) {
        Some("sl2") => Flavor::Sl2,
        Some("uq") => Flavor::Uq(scalar_from_json(ctx, v.get("q").ok_or_else(|| bad("missing q"))?)?),
        _ => return Err(bad("flavor must be \"sl2\" or \"uq\"")),
    };
    let get = |k: &str| matrix_from_json(ctx, n + 1, v.get(k).ok_or_else(|| bad(format!("missing '{}'", k)))?);
    EquitableOperators::new(flavor, get("X")?, get("Y")?, get("Z")?)
}
