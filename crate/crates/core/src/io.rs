//! Tuple file format.
//!
//! ```json
//! {
//!   "p": 2,
//!   "q": 3,
//!   "mode": "float",          // or "rational"
//!   "matrices": [[ ... 9 row-major entries ... ], [ ... ]]
//! }
//! ```
//!
//! Float entries are JSON numbers (shortest round-trip encoding, so values
//! survive write/read bit-exactly); rational entries are strings `"a/b"`
//! (or `"a"` for integers, and small JSON integers are accepted on read).
//! Readers validate the `(p,q)` range and skewness.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Rational, Scalar};
use crate::tuple::{valid_type, SkewTuple};

#[derive(Serialize, Deserialize)]
struct TupleFileRaw {
    p: usize,
    q: usize,
    mode: String,
    matrices: Vec<Vec<Value>>,
}

/// A tuple read from disk, in whichever arithmetic the file declared.
#[derive(Debug, Clone)]
pub enum TupleData {
    Float(SkewTuple<f64>),
    Rational(SkewTuple<Rational>),
}

impl TupleData {
    pub fn p(&self) -> usize {
        match self {
            TupleData::Float(t) => t.p(),
            TupleData::Rational(t) => t.p(),
        }
    }

    pub fn q(&self) -> usize {
        match self {
            TupleData::Float(t) => t.q(),
            TupleData::Rational(t) => t.q(),
        }
    }

    /// Float view of the tuple (exact tuples are converted through `f64`).
    pub fn as_float(&self, tol: f64) -> Result<SkewTuple<f64>> {
        match self {
            TupleData::Float(t) => Ok(t.clone()),
            TupleData::Rational(t) => t.to_f64_tuple(tol),
        }
    }

    /// Exact view of the tuple. Float entries are dyadic rationals, so the
    /// conversion is value-preserving.
    pub fn as_rational(&self) -> Result<SkewTuple<Rational>> {
        match self {
            TupleData::Rational(t) => Ok(t.clone()),
            TupleData::Float(t) => t.map(
                |v| Rational::from_float(*v).expect("finite float"),
                0.0,
            ),
        }
    }
}

fn parse_rational(v: &Value, context: &str) -> Result<Rational> {
    match v {
        Value::String(s) => {
            let mut parts = s.splitn(2, '/');
            let numer = parts.next().unwrap_or("");
            let numer = BigInt::from_str(numer.trim())
                .map_err(|_| Error::Format(format!("{context}: bad rational {s:?}")))?;
            let denom = match parts.next() {
                Some(d) => BigInt::from_str(d.trim())
                    .map_err(|_| Error::Format(format!("{context}: bad rational {s:?}")))?,
                None => BigInt::from(1),
            };
            if denom == BigInt::from(0) {
                return Err(Error::Format(format!("{context}: zero denominator in {s:?}")));
            }
            Ok(Rational::new(numer, denom))
        }
        Value::Number(n) if n.is_i64() => Ok(Rational::from_int(n.as_i64().unwrap())),
        other => Err(Error::Format(format!("{context}: expected rational string, got {other}"))),
    }
}

fn parse_float(v: &Value, context: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Format(format!("{context}: non-finite number"))),
        other => Err(Error::Format(format!("{context}: expected number, got {other}"))),
    }
}

fn matrices_from_entries<T: Scalar>(
    raw: &TupleFileRaw,
    parse: impl Fn(&Value, &str) -> Result<T>,
) -> Result<Vec<Mat<T>>> {
    let q = raw.q;
    let mut mats = Vec::with_capacity(raw.p);
    for (idx, flat) in raw.matrices.iter().enumerate() {
        if flat.len() != q * q {
            return Err(Error::Format(format!(
                "matrix {idx}: expected {} entries, got {}",
                q * q,
                flat.len()
            )));
        }
        let mut data = Vec::with_capacity(q * q);
        for (k, v) in flat.iter().enumerate() {
            data.push(parse(v, &format!("matrix {idx} entry {k}"))?);
        }
        mats.push(Mat::from_vec(q, q, data));
    }
    Ok(mats)
}

pub fn tuple_from_json(text: &str, tol: f64) -> Result<TupleData> {
    let raw: TupleFileRaw = serde_json::from_str(text)?;
    if !valid_type(raw.p, raw.q) {
        return Err(Error::TypeOutOfRange { p: raw.p, q: raw.q });
    }
    if raw.matrices.len() != raw.p {
        return Err(Error::Format(format!(
            "expected {} matrices, got {}",
            raw.p,
            raw.matrices.len()
        )));
    }
    match raw.mode.as_str() {
        "float" => {
            let mats = matrices_from_entries(&raw, parse_float)?;
            Ok(TupleData::Float(SkewTuple::new(mats, tol)?))
        }
        "rational" => {
            let mats = matrices_from_entries(&raw, parse_rational)?;
            Ok(TupleData::Rational(SkewTuple::new(mats, tol)?))
        }
        other => Err(Error::Format(format!("unknown mode {other:?}"))),
    }
}

pub fn float_tuple_to_json(t: &SkewTuple<f64>) -> Result<String> {
    let matrices: Vec<Vec<Value>> = t
        .mats()
        .iter()
        .map(|m| {
            m.vectorize()
                .into_iter()
                .map(|v| {
                    serde_json::Number::from_f64(v)
                        .map(Value::Number)
                        .ok_or_else(|| Error::Format("non-finite entry".to_string()))
                })
                .collect::<Result<Vec<Value>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let raw = TupleFileRaw { p: t.p(), q: t.q(), mode: "float".to_string(), matrices };
    Ok(serde_json::to_string_pretty(&raw)? + "\n")
}

pub fn rational_tuple_to_json(t: &SkewTuple<Rational>) -> Result<String> {
    let matrices: Vec<Vec<Value>> = t
        .mats()
        .iter()
        .map(|m| m.vectorize().into_iter().map(|v| Value::String(v.to_string())).collect())
        .collect();
    let raw = TupleFileRaw { p: t.p(), q: t.q(), mode: "rational".to_string(), matrices };
    Ok(serde_json::to_string_pretty(&raw)? + "\n")
}

pub fn tuple_to_json(t: &TupleData) -> Result<String> {
    match t {
        TupleData::Float(f) => float_tuple_to_json(f),
        TupleData::Rational(r) => rational_tuple_to_json(r),
    }
}

pub fn read_tuple(path: impl AsRef<Path>, tol: f64) -> Result<TupleData> {
    let text = fs::read_to_string(path)?;
    tuple_from_json(&text, tol)
}

pub fn write_tuple(path: impl AsRef<Path>, t: &TupleData) -> Result<()> {
    fs::write(path, tuple_to_json(t)?)?;
    Ok(())
}
