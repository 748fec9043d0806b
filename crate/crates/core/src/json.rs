//! JSON encodings of specs, `(W, H)` pairs and free-group data, plus a
//! deterministic emitter (sorted keys, 17 significant digits).

use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gaussian::{Check, GaussianSpec};
use crate::kernel::{ComplexMatrix, TensorOperator};
use crate::targets::GroupTarget;

fn bad(what: &str, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("{what}: {msg}"))
}

/// `[re, im]` or a bare real.
pub fn complex_from(v: &Value, what: &str) -> Result<C64> {
    match v {
        Value::Number(x) => Ok(C64::new(x.as_f64().ok_or_else(|| bad(what, "not a finite number"))?, 0.0)),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| bad(what, "real part is not a number"))?;
            let im = a[1].as_f64().ok_or_else(|| bad(what, "imaginary part is not a number"))?;
            Ok(C64::new(re, im))
        }
        _ => Err(bad(what, "expected a number or [re, im]")),
    }
}

pub fn complex_to(c: C64) -> Value {
    json!([c.re, c.im])
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, "expected an array"))
}

pub fn matrix_from(v: &Value, what: &str) -> Result<ComplexMatrix> {
    let rows = array(v, what)?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = array(row, what)?;
        if row.len() != n {
            return Err(Error::shape(format!("{what} row {i}"), n, row.len()));
        }
        for (j, x) in row.iter().enumerate() {
            data.push(complex_from(x, &format!("{what}[{i}][{j}]"))?);
        }
    }
    Ok(ComplexMatrix::from_row_slice(n, n, &data))
}

pub fn matrix_to(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn vector_from(v: &Value, what: &str) -> Result<Vec<C64>> {
    array(v, what)?
        .iter()
        .enumerate()
        .map(|(i, x)| complex_from(x, &format!("{what}[{i}]")))
        .collect()
}

pub fn vector_to(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|&c| complex_to(c)).collect())
}

pub fn tensor_from(v: &Value, what: &str) -> Result<TensorOperator> {
    let n = array(v, what)?.len();
    let mut w = Vec::with_capacity(n.pow(4));
    fn walk(v: &Value, depth: usize, n: usize, what: &str, out: &mut Vec<C64>) -> Result<()> {
        if depth == 4 {
            out.push(complex_from(v, what)?);
            return Ok(());
        }
        let a = array(v, what)?;
        if a.len() != n {
            return Err(Error::shape(what, format!("{n} entries per level"), a.len()));
        }
        a.iter().try_for_each(|x| walk(x, depth + 1, n, what, out))
    }
    walk(v, 0, n, what, &mut w)?;
    TensorOperator::from_coefficients(n, w)
}

pub fn tensor_to(w: &TensorOperator) -> Value {
    let n = w.n();
    let level = |f: &dyn Fn(usize) -> Value| Value::Array((0..n).map(f).collect());
    level(&|a| level(&|b| level(&|c| level(&|d| complex_to(w.get(a, b, c, d))))))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad("input", format!("missing field '{key}'")))
}

fn target_from(obj: &Map<String, Value>) -> Result<GroupTarget> {
    let name = field(obj, "target")?.as_str().ok_or_else(|| bad("target", "expected a string"))?;
    let n = field(obj, "n")?.as_u64().ok_or_else(|| bad("n", "expected a nonnegative integer"))?;
    GroupTarget::from_name(name, n as usize)
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| bad("input", "expected a JSON object"))
}

/// `{"target", "n", "L": [matrix…], "H": matrix}`. A missing `L` means no
/// generators and a missing `H` means zero drift.
pub fn checks_to(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "residual": c.residual}))
            .collect(),
    )
}

pub fn spec_from_value(v: &Value) -> Result<GaussianSpec> {
    let obj = object(v)?;
    let target = target_from(obj)?;
    let m = target.matrix_size();
    let l = match obj.get("L") {
        Some(list) => array(list, "L")?
            .iter()
            .enumerate()
            .map(|(r, x)| matrix_from(x, &format!("L[{r}]")))
            .collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    let h = match obj.get("H") {
        Some(h) => matrix_from(h, "H")?,
        None => ComplexMatrix::zeros(m, m),
    };
    GaussianSpec::new(target, l, h)
}

pub fn spec_from_str(text: &str) -> Result<GaussianSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad("spec", e))?;
    spec_from_value(&v)
}

pub fn spec_to_value(spec: &GaussianSpec) -> Value {
    json!({
        "target": spec.target.name(),
        "n": spec.target.n(),
        "L": spec.l.iter().map(matrix_to).collect::<Vec<_>>(),
        "H": matrix_to(&spec.h),
    })
}

/// `{"target", "n", "W": 4-deep array, "H": matrix}`.
pub fn wh_from_value(v: &Value) -> Result<(GroupTarget, TensorOperator, ComplexMatrix)> {
    let obj = object(v)?;
    let target = target_from(obj)?;
    let w = tensor_from(field(obj, "W")?, "W")?;
    let h = matrix_from(field(obj, "H")?, "H")?;
    Ok((target, w, h))
}

pub fn wh_to_value(target: GroupTarget, w: &TensorOperator, h: &ComplexMatrix) -> Value {
    json!({
        "target": target.name(),
        "n": target.n(),
        "W": tensor_to(w),
        "H": matrix_to(h),
    })
}

/// `{"n", "v": [[c…]…], "alpha": [c…]}`.
pub fn free_group_from_value(v: &Value) -> Result<(usize, Vec<Vec<C64>>, Vec<C64>)> {
    let obj = object(v)?;
    let n = field(obj, "n")?.as_u64().ok_or_else(|| bad("n", "expected a nonnegative integer"))? as usize;
    let vs = array(field(obj, "v")?, "v")?
        .iter()
        .enumerate()
        .map(|(i, x)| vector_from(x, &format!("v[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let alpha = vector_from(field(obj, "alpha")?, "alpha")?;
    Ok((n, vs, alpha))
}

/// `%.17g`-style rendering with trailing zeros removed.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (16 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_g17(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::Array(a) => {
            let flat = a.iter().all(|x| !x.is_array() && !x.is_object());
            if a.is_empty() {
                out.push_str("[]");
            } else if flat {
                out.push('[');
                for (k, x) in a.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(x, indent, out);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, x) in a.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    write_value(x, indent + 1, out);
                    out.push_str(if k + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("string encodes"));
                out.push_str(": ");
                write_value(&m[*key], indent + 1, out);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Canonical text of `v`, newline-terminated. Non-finite floats have no JSON
/// form and become `null` when the value is built.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}
