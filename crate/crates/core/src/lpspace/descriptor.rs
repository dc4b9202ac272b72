//! JSON forms: `{"primitive": <function>, "p": 2}`,
//! `{"density": <function>, "q": 2}` (`"q": "inf"` allowed) and
//! `{"atoms": [[a, x, y], ...]}`.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::funcrepr::descriptor::{bad, function_from_json, number};
use crate::lpspace::{Atom, DeltaTrain, Multiplier, PrimitiveDistribution};
use crate::quadrature::QuadConfig;
use crate::scalar::Real;

fn object<'a>(v: &'a Value, pointer: &str, allowed: &[&str]) -> Result<&'a serde_json::Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| bad(pointer, "expected an object"))?;
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(bad(&format!("{pointer}/{key}"), "unknown field"));
        }
    }
    Ok(map)
}

fn field<'a>(map: &'a serde_json::Map<String, Value>, key: &str, pointer: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| bad(pointer, format!("missing field `{key}`")))
}

pub fn distribution_from_json<T: Real>(v: &Value, pointer: &str, cfg: &QuadConfig<T>) -> Result<PrimitiveDistribution<T>> {
    let map = object(v, pointer, &["primitive", "p"])?;
    let prim = function_from_json(field(map, "primitive", pointer)?, &format!("{pointer}/primitive"))?;
    let pp = format!("{pointer}/p");
    let p = number(field(map, "p", pointer)?, &pp, false)?;
    if !(p >= 1.0) {
        return Err(bad(&pp, "p must lie in [1, ∞)"));
    }
    PrimitiveDistribution::new(prim, T::lit(p), cfg)
}

/// Densities outside `L^q` (such as `e^(-x)`) are accepted as local
/// multipliers without a norm, unless `"local": false` demands the check.
pub fn multiplier_from_json<T: Real>(v: &Value, pointer: &str, cfg: &QuadConfig<T>) -> Result<Multiplier<T>> {
    let map = object(v, pointer, &["density", "q", "local"])?;
    let g = function_from_json(field(map, "density", pointer)?, &format!("{pointer}/density"))?;
    let qp = format!("{pointer}/q");
    let q = number(field(map, "q", pointer)?, &qp, true)?;
    if !(q > 1.0) || q == f64::NEG_INFINITY {
        return Err(bad(&qp, "q must lie in (1, ∞]"));
    }
    let local = match map.get("local") {
        None => None,
        Some(Value::Bool(b)) => Some(*b),
        Some(_) => return Err(bad(&format!("{pointer}/local"), "expected a boolean")),
    };
    let q = if q.is_infinite() { T::infinity() } else { T::lit(q) };
    match local {
        Some(true) => Multiplier::local_with(g, q, cfg),
        Some(false) => Multiplier::new(g, q, cfg),
        None => match Multiplier::new(g.clone(), q, cfg) {
            Err(Error::NotInLp { .. }) => Multiplier::local_with(g, q, cfg),
            other => other,
        },
    }
}

pub fn delta_train_from_json<T: Real>(v: &Value, pointer: &str) -> Result<DeltaTrain<T>> {
    let map = object(v, pointer, &["atoms"])?;
    let ap = format!("{pointer}/atoms");
    let arr = field(map, "atoms", pointer)?
        .as_array()
        .ok_or_else(|| bad(&ap, "expected an array"))?;
    let mut atoms = vec![];
    for (i, a) in arr.iter().enumerate() {
        let ip = format!("{ap}/{i}");
        let t = a.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad(&ip, "expected [a, x, y]"))?;
        let w = number(&t[0], &format!("{ip}/0"), false)?;
        let x = number(&t[1], &format!("{ip}/1"), false)?;
        let y = number(&t[2], &format!("{ip}/2"), false)?;
        if !(x < y) {
            return Err(bad(&ip, "atom needs x < y"));
        }
        atoms.push(Atom {
            weight: T::lit(w),
            left: T::lit(x),
            right: T::lit(y),
        });
    }
    DeltaTrain::new(atoms).map_err(|e| bad(&ap, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn descriptors() {
        let cfg = QuadConfig::<f64>::default();
        let d = distribution_from_json(&json!({"primitive": {"expr": "indicator(0,1)"}, "p": 2}), "", &cfg).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-14);
        let m = multiplier_from_json(&json!({"density": {"expr": "exp(-x)"}, "q": 2}), "", &cfg).unwrap();
        assert!(m.norm().is_none());
        let m = multiplier_from_json(&json!({"density": "indicator(0,1)", "q": "inf"}), "", &cfg).unwrap();
        assert_eq!(m.norm(), Some(1.0));
        let e = distribution_from_json::<f64>(&json!({"primitive": "exp(-x^2)", "p": 0.5}), "", &cfg).unwrap_err();
        assert!(matches!(e, Error::Descriptor { ref pointer, .. } if pointer == "/p"), "{e:?}");
        let e = distribution_from_json::<f64>(&json!({"primitive": "exp(-x^2)", "p": 2, "x": 1}), "", &cfg).unwrap_err();
        assert!(matches!(e, Error::Descriptor { ref pointer, .. } if pointer == "/x"));
        let e = multiplier_from_json::<f64>(&json!({"density": "exp(-x)", "q": 2, "local": false}), "", &cfg).unwrap_err();
        assert!(matches!(e, Error::NotInLp { .. }));
        let t = delta_train_from_json::<f64>(&json!({"atoms": [[1, 0, 1], [2, 3, 4]]}), "").unwrap();
        assert_eq!(t.atoms().len(), 2);
        let e = delta_train_from_json::<f64>(&json!({"atoms": [[1, 0]]}), "").unwrap_err();
        assert!(matches!(e, Error::Descriptor { ref pointer, .. } if pointer == "/atoms/0"));
    }
}
