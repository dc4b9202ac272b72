//! JSON descriptors for functions: either a DSL string or
//! `{"expr": "...", "singularities": [...], "support": [a, b]}`.
//! A `{"corpus": name, "params": [...]}` object is also accepted.

use serde_json::Value;

use crate::error::Error;
use crate::funcrepr::{corpus::corpus, FunctionExpr};
use crate::scalar::Real;

pub(crate) fn bad(pointer: &str, message: impl Into<String>) -> Error {
    Error::Descriptor {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

/// Reads a finite number, or `"inf"` / `"-inf"` when `allow_inf`.
pub(crate) fn number(v: &Value, pointer: &str, allow_inf: bool) -> Result<f64, Error> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(pointer, "not a finite number")),
        Value::String(s) if allow_inf && (s == "inf" || s == "+inf" || s == "infinity") => Ok(f64::INFINITY),
        Value::String(s) if allow_inf && (s == "-inf" || s == "-infinity") => Ok(f64::NEG_INFINITY),
        _ => Err(bad(pointer, "expected a number")),
    }
}

fn numbers(v: &Value, pointer: &str) -> Result<Vec<f64>, Error> {
    let arr = v.as_array().ok_or_else(|| bad(pointer, "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{pointer}/{i}"), false))
        .collect()
}

/// Builds a function from a JSON descriptor; `pointer` locates `v` in the
/// enclosing document for error messages.
pub fn function_from_json<T: Real>(v: &Value, pointer: &str) -> Result<FunctionExpr<T>, Error> {
    match v {
        Value::String(s) => FunctionExpr::parse(s).map_err(|e| bad(pointer, e.to_string())),
        Value::Object(map) => {
            for key in map.keys() {
                if !matches!(key.as_str(), "expr" | "singularities" | "support" | "corpus" | "params") {
                    return Err(bad(&format!("{pointer}/{key}"), "unknown field"));
                }
            }
            let mut e = match (map.get("expr"), map.get("corpus")) {
                (Some(Value::String(s)), None) => {
                    FunctionExpr::parse(s).map_err(|e| bad(&format!("{pointer}/expr"), e.to_string()))?
                }
                (Some(_), None) => return Err(bad(&format!("{pointer}/expr"), "expected a string")),
                (None, Some(Value::String(name))) => {
                    let params = match map.get("params") {
                        Some(p) => numbers(p, &format!("{pointer}/params"))?,
                        None => vec![],
                    };
                    corpus(name, &params).map_err(|e| bad(&format!("{pointer}/corpus"), e.to_string()))?
                }
                (None, Some(_)) => return Err(bad(&format!("{pointer}/corpus"), "expected a string")),
                (Some(_), Some(_)) => return Err(bad(pointer, "give either `expr` or `corpus`, not both")),
                (None, None) => return Err(bad(pointer, "missing field `expr`")),
            };
            if let Some(s) = map.get("support") {
                let p = format!("{pointer}/support");
                let arr = s.as_array().ok_or_else(|| bad(&p, "expected [a, b]"))?;
                if arr.len() != 2 {
                    return Err(bad(&p, "expected [a, b]"));
                }
                let a = number(&arr[0], &format!("{p}/0"), true)?;
                let b = number(&arr[1], &format!("{p}/1"), true)?;
                if !(a < b) {
                    return Err(bad(&p, "support needs a < b"));
                }
                e = e.with_support(T::lit(a), T::lit(b));
            }
            if let Some(s) = map.get("singularities") {
                let pts: Vec<T> = numbers(s, &format!("{pointer}/singularities"))?
                    .into_iter()
                    .map(T::lit)
                    .collect();
                e = e.with_singularities(&pts);
            }
            Ok(e)
        }
        _ => Err(bad(pointer, "expected a DSL string or an object")),
    }
}

/// Accepts inline JSON, or falls back to plain DSL text.
pub fn function_from_str<T: Real>(text: &str) -> Result<FunctionExpr<T>, Error> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('"') {
        let v: Value = serde_json::from_str(t).map_err(|e| bad("", format!("invalid JSON: {e}")))?;
        function_from_json(&v, "")
    } else {
        FunctionExpr::parse(t).map_err(Error::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let e: FunctionExpr<f64> =
            function_from_str(r#"{"expr": "exp(x)", "support": [0, 1], "singularities": [0.5]}"#).unwrap();
        assert_eq!(e.support_hint(), Some((0.0, 1.0)));
        assert_eq!(e.singularities(), &[0.5]);
        let c: FunctionExpr<f64> = function_from_str(r#"{"corpus": "gaussian", "params": [2]}"#).unwrap();
        assert!((c.eval(2.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        let s: FunctionExpr<f64> = function_from_str("indicator(0,1)").unwrap();
        assert_eq!(s.eval(0.5).unwrap(), 1.0);
    }

    #[test]
    fn pointers() {
        let err = function_from_str::<f64>(r#"{"expr": "exp(x)", "support": [1, "a"]}"#).unwrap_err();
        assert!(matches!(err, Error::Descriptor { ref pointer, .. } if pointer == "/support/1"), "{err}");
        let err = function_from_str::<f64>(r#"{"exp": "x"}"#).unwrap_err();
        assert!(matches!(err, Error::Descriptor { ref pointer, .. } if pointer == "/exp"));
        let err = function_from_str::<f64>(r#"{"expr": "x +"}"#).unwrap_err();
        assert!(matches!(err, Error::Descriptor { ref pointer, .. } if pointer == "/expr"));
    }
}
