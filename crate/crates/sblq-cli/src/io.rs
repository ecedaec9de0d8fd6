//! Datum files: `{"dim_H": n, "dims": [h0, h1, h2, h3], "pi": [Π₀, Π₁, Π₂, Π₃]}` with
//! each `Π_i` a row-major array of rows and every entry a string `"p/q"` or `"p"`.

use std::io::Read;
use std::str::FromStr;

use sblq_core::{Datum, Matrix, Rational};
use serde_json::{json, Map, Value};

/// A parse failure with the JSON path where it happened.
#[derive(Debug)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn err(path: &str, message: impl Into<String>) -> InputError {
    InputError { path: path.into(), message: message.into() }
}

/// Reads a file, or standard input for `-`.
pub fn read_source(path: &str) -> Result<String, InputError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| err("<stdin>", e.to_string()))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| err(path, e.to_string()))
    }
}

pub fn parse_rational(s: &str, path: &str) -> Result<Rational, InputError> {
    let t = s.trim();
    if let Some((_, d)) = t.split_once('/') {
        if d.trim().trim_start_matches(['+', '-']).chars().all(|c| c == '0') && !d.trim().is_empty() {
            return Err(err(path, format!("zero denominator in {s:?}")));
        }
    }
    Rational::from_str(t).map_err(|e| err(path, format!("{s:?} is not a rational ({e})")))
}

fn scalar(v: &Value, path: &str) -> Result<Rational, InputError> {
    match v {
        Value::String(s) => parse_rational(s, path),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(err(path, format!("expected a rational string like \"1/3\", found {v}"))),
    }
}

fn nat(v: &Value, path: &str) -> Result<usize, InputError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| err(path, format!("expected a natural number, found {v}")))
}

fn matrix(v: &Value, rows: usize, cols: usize, path: &str) -> Result<Matrix, InputError> {
    let arr = v.as_array().ok_or_else(|| err(path, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(err(path, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let r = row.as_array().ok_or_else(|| err(&rp, "expected a row array"))?;
        if r.len() != cols {
            return Err(err(&rp, format!("expected {cols} entries, found {}", r.len())));
        }
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = scalar(x, &format!("{rp}[{j}]"))?;
        }
    }
    Ok(m)
}

pub fn parse_datum(text: &str) -> Result<Datum, InputError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| err(&format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| err("$", "expected an object"))?;
    for k in obj.keys() {
        if !["dim_H", "dims", "pi"].contains(&k.as_str()) {
            return Err(err(&format!("$.{k}"), "unknown field"));
        }
    }
    let get = |k: &str| obj.get(k).ok_or_else(|| err(&format!("$.{k}"), "missing field"));
    let dim_h = nat(get("dim_H")?, "$.dim_H")?;
    let dims_v = get("dims")?.as_array().ok_or_else(|| err("$.dims", "expected an array of 4 naturals"))?;
    if dims_v.len() != 4 {
        return Err(err("$.dims", format!("expected 4 entries, found {}", dims_v.len())));
    }
    let mut dims = [0usize; 4];
    for i in 0..4 {
        dims[i] = nat(&dims_v[i], &format!("$.dims[{i}]"))?;
    }
    let pi_v = get("pi")?.as_array().ok_or_else(|| err("$.pi", "expected an array of 4 matrices"))?;
    if pi_v.len() != 4 {
        return Err(err("$.pi", format!("expected 4 matrices, found {}", pi_v.len())));
    }
    let mut pi = Vec::with_capacity(4);
    for i in 0..4 {
        pi.push(matrix(&pi_v[i], dims[i], dim_h, &format!("$.pi[{i}]"))?);
    }
    Datum::new(dim_h, dims, pi.try_into().expect("four"))
        .map_err(|e| err("$", e.to_string()))
}

pub fn load_datum(path: &str) -> Result<Datum, InputError> {
    parse_datum(&read_source(path)?).map_err(|e| InputError { path: format!("{path}: {}", e.path), message: e.message })
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m[(i, j)].to_string())).collect()))
            .collect(),
    )
}

pub fn datum_json(d: &Datum) -> Value {
    let mut o = Map::new();
    o.insert("dim_H".into(), json!(d.dim_h));
    o.insert("dims".into(), json!(d.dims));
    o.insert("pi".into(), Value::Array(d.pi.iter().map(matrix_json).collect()));
    Value::Object(o)
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
