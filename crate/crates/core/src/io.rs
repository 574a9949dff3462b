//! JSON files for matrices, modules, extended-group elements and reports.
//!
//! Matrices are `{rows, cols, entries}` with row-major entries; rational
//! entries are strings `"p/q"`, float entries are numbers. Readers accept
//! both spellings for either backend.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::algebra::{FactorKind, InvolutiveAlgebra};
use crate::error::{Error, Result};
use crate::group::ExtendedElement;
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::pipeline::Conjugator;
use crate::scalar::Scalar;
use crate::standard::Params;
use crate::verify::TheoremReport;

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn scalar_to_json<T: Scalar>(x: &T) -> Value {
    if T::EXACT {
        Value::String(x.to_text())
    } else {
        serde_json::Number::from_f64(x.to_f64()).map_or(Value::Null, Value::Number)
    }
}

pub fn scalar_from_json<T: Scalar>(v: &Value) -> Result<T> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(parse_error(format!("expected a number, got {other}"))),
    };
    T::parse_text(&text).ok_or_else(|| parse_error(format!("not a scalar: `{text}`")))
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.data().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

fn field<'a>(obj: &'a Value, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| parse_error(format!("missing field `{name}`")))
}

fn usize_field(obj: &Value, name: &str) -> Result<usize> {
    field(obj, name)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| parse_error(format!("`{name}` must be a nonnegative integer")))
}

fn array_field<'a>(obj: &'a Value, name: &str) -> Result<&'a Vec<Value>> {
    field(obj, name)?.as_array().ok_or_else(|| parse_error(format!("`{name}` must be an array")))
}

pub fn matrix_from_json<T: Scalar>(v: &Value) -> Result<Matrix<T>> {
    let rows = usize_field(v, "rows")?;
    let cols = usize_field(v, "cols")?;
    let entries = array_field(v, "entries")?;
    if entries.len() != rows * cols {
        return Err(parse_error(format!("{rows}×{cols} matrix with {} entries", entries.len())));
    }
    let data = entries.iter().map(scalar_from_json).collect::<Result<Vec<T>>>()?;
    Ok(Matrix::from_vec(rows, cols, data))
}

fn matrices_from_json<T: Scalar>(v: &Value, name: &str) -> Result<Vec<Matrix<T>>> {
    array_field(v, name)?.iter().map(matrix_from_json).collect()
}

pub fn module_to_json<T: Scalar>(e: &HermitianModule<T>) -> Value {
    json!({
        "algebra": e.algebra.factors().iter().map(|k| k.tag()).collect::<Vec<_>>(),
        "epsilon": e.epsilon,
        "rho": e.rho.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "Ri": matrix_to_json(&e.ri),
        "Rj": matrix_to_json(&e.rj),
        "gram": e.gram.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// Parse a module file. Shapes are checked; the axioms are not.
pub fn module_from_json<T: Scalar>(v: &Value) -> Result<HermitianModule<T>> {
    let kinds = array_field(v, "algebra")?
        .iter()
        .map(|k| k.as_str().ok_or_else(|| parse_error("algebra factors must be strings"))?.parse())
        .collect::<Result<Vec<FactorKind>>>()?;
    let epsilon = field(v, "epsilon")?.as_i64().ok_or_else(|| parse_error("`epsilon` must be ±1"))?;
    let epsilon = i8::try_from(epsilon).map_err(|_| parse_error("`epsilon` must be ±1"))?;
    HermitianModule::new(
        InvolutiveAlgebra::new(&kinds)?,
        epsilon,
        matrices_from_json(v, "rho")?,
        matrix_from_json(field(v, "Ri")?)?,
        matrix_from_json(field(v, "Rj")?)?,
        matrices_from_json(v, "gram")?,
    )
}

pub fn element_to_json<T: Scalar>(x: &ExtendedElement<T>) -> Value {
    json!({ "g": matrix_to_json(&x.g), "delta": x.delta })
}

/// An element file: `{g, delta}`, or a bare matrix read as `δ = 1`.
pub fn element_from_json<T: Scalar>(v: &Value) -> Result<ExtendedElement<T>> {
    if v.get("g").is_none() {
        return Ok(ExtendedElement::new(matrix_from_json(v)?, 1));
    }
    let delta = match v.get("delta").map(Value::as_i64) {
        None => 1,
        Some(Some(d)) if d == 1 || d == -1 => d as i8,
        Some(_) => return Err(parse_error("`delta` must be ±1")),
    };
    Ok(ExtendedElement::new(matrix_from_json(field(v, "g")?)?, delta))
}

pub fn residual_to_json<T: Scalar>(r: f64) -> Value {
    if T::EXACT {
        Value::String(format!("{r}"))
    } else {
        json!(r)
    }
}

pub fn conjugator_to_json<T: Scalar>(c: &Conjugator<T>) -> Value {
    json!({
        "g": matrix_to_json(&c.element.g),
        "delta": c.element.delta,
        "residuals": { "x": residual_to_json::<T>(c.residual) },
        "stage_log": c.stage_log,
    })
}

pub fn params_to_json(kind: FactorKind, p: &Params) -> Value {
    match p {
        Params::Signature(p, q) => json!({ "kind": kind.tag(), "p": p, "q": q }),
        Params::Rank(n) => json!({ "kind": kind.tag(), "n": n }),
    }
}

pub fn classification_to_json<T: Scalar>(kinds: &[FactorKind], invariants: &[Params], isometry: &Matrix<T>) -> Value {
    json!({
        "invariants": kinds.iter().zip(invariants).map(|(k, p)| params_to_json(*k, p)).collect::<Vec<_>>(),
        "isometry": matrix_to_json(isometry),
    })
}

/// Report body; `header` is stored first and should describe the run
/// (backend, seed, generator, inputs).
pub fn report_to_json<T: Scalar>(header: Map<String, Value>, report: &TheoremReport<T>) -> Value {
    let witness = match (&report.witness, &report.witness_error) {
        (Some(w), _) => element_to_json(w),
        (None, err) => json!({ "error": err }),
    };
    let trials: Vec<Value> = report
        .trials
        .iter()
        .enumerate()
        .map(|(k, t)| {
            json!({
                "index": k,
                "sample": t.sample,
                "passed": t.passed(),
                "residual": t.residual.map(residual_to_json::<T>),
                "error": t.error,
                "stage_log": t.stage_log,
            })
        })
        .collect();
    let cosets: Vec<Value> = report
        .coset_checks
        .iter()
        .map(|c| json!({ "product": c.label, "in_unitary_group": c.in_unitary_group }))
        .collect();
    json!({
        "header": header,
        "passed": report.passed(),
        "witness": witness,
        "trials": trials,
        "coset_checks": cosets,
    })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed with a trailing newline.
pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::standard::standard_module;

    #[test]
    fn module_roundtrip_exact_and_float() {
        let e = standard_module::<Rational>(FactorKind::CxCSwap, -1, Params::Rank(1)).unwrap();
        let back: HermitianModule<Rational> = module_from_json(&module_to_json(&e)).unwrap();
        assert_eq!(back, e);
        let f = e.to_f64();
        let back: HermitianModule<f64> = module_from_json(&module_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn scalar_spellings() {
        assert_eq!(scalar_from_json::<Rational>(&json!("-3/6")).unwrap(), rat(-1, 2));
        assert_eq!(scalar_from_json::<Rational>(&json!(0.25)).unwrap(), rat(1, 4));
        assert_eq!(scalar_from_json::<f64>(&json!("1/4")).unwrap(), 0.25);
        assert!(scalar_from_json::<Rational>(&json!("x")).is_err());
        assert_eq!(scalar_to_json(&rat(2, 3)), json!("2/3"));
    }

    #[test]
    fn bad_shapes_are_rejected() {
        let v = json!({ "rows": 2, "cols": 2, "entries": ["1", "0", "0"] });
        assert!(matrix_from_json::<Rational>(&v).is_err());
        let x: ExtendedElement<Rational> = element_from_json(&json!({ "rows": 1, "cols": 1, "entries": ["1"] })).unwrap();
        assert_eq!(x.delta, 1);
        assert!(element_from_json::<Rational>(&json!({ "g": { "rows": 1, "cols": 1, "entries": ["1"] }, "delta": 2 })).is_err());
    }
}
