//! JSON model specifications.
//!
//! ```json
//! {"dim": 1, "family": "layered", "alpha": 0.5, "beta": 3.0, "r0": 1.0,
//!  "spectral": {"atoms": [[1.0, 1.0], [-1.0, 1.0]]}}
//! {"dim": 1, "subordinate_bm": {"alpha": 1.0, "beta": 0.5}}
//! {"dim": 1, "explicit": {"kind": "power", "alpha": 1.0}}
//! ```
//!
//! Atoms list the direction components followed by the weight. `"center"`
//! (default true) controls drift removal. Unknown keys are rejected.

use std::path::Path;

use serde_json::{json, Map, Value};

use super::bernstein::BernsteinSpec;
use super::explicit::ExplicitSymbol;
use super::family::{registry, ParamMap};
use super::model::{LevyModel, ModelKind};
use super::spectral::{Atom, SpectralMeasure};
use crate::error::{LevyError, Result};

pub fn load_model(path: &Path) -> Result<LevyModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LevyError::spec(path.display().to_string(), format!("cannot read model file: {e}")))?;
    parse_model(&text)
}

pub fn parse_model(text: &str) -> Result<LevyModel> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        LevyError::spec(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    model_from_value(&value)
}

pub fn model_from_value(value: &Value) -> Result<LevyModel> {
    let obj = value.as_object().ok_or_else(|| LevyError::spec("<root>", "model spec must be a JSON object"))?;
    let dim = match obj.get("dim") {
        None => return Err(LevyError::spec("dim", "missing")),
        Some(v) => match v.as_u64() {
            Some(d @ (1 | 2)) => d as usize,
            _ => return Err(LevyError::spec("dim", format!("expected 1 or 2, found {v}"))),
        },
    };
    let center = match obj.get("center") {
        None => true,
        Some(Value::Bool(b)) => *b,
        Some(v) => return Err(LevyError::spec("center", format!("expected a boolean, found {v}"))),
    };
    let variants: Vec<&str> = ["family", "subordinate_bm", "explicit"]
        .into_iter()
        .filter(|k| obj.contains_key(*k))
        .collect();
    let model = match variants.as_slice() {
        ["family"] => polar_from(obj, dim)?,
        ["subordinate_bm"] => {
            reject_unknown(obj, &["dim", "center", "subordinate_bm"], "")?;
            let sub = object(obj, "subordinate_bm")?;
            reject_unknown(sub, &["alpha", "beta"], "subordinate_bm.")?;
            let alpha = number(sub, "alpha", "subordinate_bm.")?;
            let beta = number(sub, "beta", "subordinate_bm.")?;
            LevyModel::subordinate_bm(dim, BernsteinSpec::new(alpha, beta)?)?
        }
        ["explicit"] => {
            reject_unknown(obj, &["dim", "center", "explicit"], "")?;
            let ex = object(obj, "explicit")?;
            let kind = ex
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| LevyError::spec("explicit.kind", "missing or not a string"))?;
            let sym = match kind {
                "power" => {
                    reject_unknown(ex, &["kind", "alpha", "scale"], "explicit.")?;
                    let alpha = number(ex, "alpha", "explicit.")?;
                    let scale = optional_number(ex, "scale", "explicit.")?.unwrap_or(1.0);
                    ExplicitSymbol::power(alpha, scale)?
                }
                "compound_poisson" => {
                    reject_unknown(ex, &["kind", "rate", "jump"], "explicit.")?;
                    let rate = number(ex, "rate", "explicit.")?;
                    let jump = vector(ex.get("jump"), dim, "explicit.jump")?;
                    ExplicitSymbol::compound_poisson(rate, jump)?
                }
                other => {
                    return Err(LevyError::spec(
                        "explicit.kind",
                        format!("unknown kind `{other}` (known: power, compound_poisson)"),
                    ))
                }
            };
            LevyModel::explicit(dim, sym)?
        }
        [] => {
            return Err(LevyError::spec(
                "<root>",
                "expected one of `family`, `subordinate_bm`, `explicit`",
            ))
        }
        _ => {
            return Err(LevyError::spec(
                variants.join("/"),
                "keys `family`, `subordinate_bm` and `explicit` are mutually exclusive",
            ))
        }
    };
    Ok(model.with_center(center))
}

fn polar_from(obj: &Map<String, Value>, dim: usize) -> Result<LevyModel> {
    let name = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| LevyError::spec("family", "expected a family name"))?;
    let mut params = ParamMap::new();
    for (k, v) in obj {
        if matches!(k.as_str(), "dim" | "center" | "family" | "spectral") {
            continue;
        }
        params.insert(k.clone(), param_value(v, k)?);
    }
    let spectral = match obj.get("spectral") {
        None => return Err(LevyError::spec("spectral", "missing")),
        Some(v) => spectral_from(v, dim)?,
    };
    let family = registry().build(name, &params, dim)?;
    LevyModel::polar(spectral, family)
}

fn spectral_from(v: &Value, dim: usize) -> Result<SpectralMeasure> {
    let obj = v.as_object().ok_or_else(|| LevyError::spec("spectral", "expected an object"))?;
    reject_unknown(obj, &["atoms", "uniform"], "spectral.")?;
    match (obj.get("atoms"), obj.get("uniform")) {
        (Some(a), None) => {
            let list = a.as_array().ok_or_else(|| LevyError::spec("spectral.atoms", "expected an array"))?;
            let mut atoms = Vec::with_capacity(list.len());
            for (i, item) in list.iter().enumerate() {
                let field = format!("spectral.atoms[{i}]");
                let comps = item
                    .as_array()
                    .ok_or_else(|| LevyError::spec(field.clone(), "expected [direction..., weight]"))?;
                if comps.len() != dim + 1 {
                    return Err(LevyError::spec(
                        field,
                        format!("expected {} numbers (direction then weight), found {}", dim + 1, comps.len()),
                    ));
                }
                let nums: Vec<f64> = comps
                    .iter()
                    .map(|c| c.as_f64().ok_or_else(|| LevyError::spec(field.clone(), "non-numeric entry")))
                    .collect::<Result<_>>()?;
                let mut direction = [0.0; 2];
                direction[..dim].copy_from_slice(&nums[..dim]);
                atoms.push(Atom { direction, weight: nums[dim] });
            }
            SpectralMeasure::atoms(dim, atoms).map_err(|e| LevyError::spec("spectral.atoms", e.to_string()))
        }
        (None, Some(m)) => {
            let mass = m.as_f64().ok_or_else(|| LevyError::spec("spectral.uniform", "expected a number"))?;
            SpectralMeasure::uniform(dim, mass).map_err(|e| LevyError::spec("spectral.uniform", e.to_string()))
        }
        _ => Err(LevyError::spec("spectral", "expected exactly one of `atoms` or `uniform`")),
    }
}

fn param_value(v: &Value, field: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| LevyError::spec(field, "not representable")),
        Value::String(s) if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") => Ok(f64::INFINITY),
        other => Err(LevyError::spec(field, format!("expected a number or \"inf\", found {other}"))),
    }
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(LevyError::spec(format!("{prefix}{k}"), "unknown key"));
        }
    }
    Ok(())
}

fn object<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>> {
    obj.get(key).and_then(Value::as_object).ok_or_else(|| LevyError::spec(key, "expected an object"))
}

fn number(obj: &Map<String, Value>, key: &str, prefix: &str) -> Result<f64> {
    optional_number(obj, key, prefix)?.ok_or_else(|| LevyError::spec(format!("{prefix}{key}"), "missing"))
}

fn optional_number(obj: &Map<String, Value>, key: &str, prefix: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| LevyError::spec(format!("{prefix}{key}"), format!("expected a number, found {v}"))),
    }
}

fn vector(v: Option<&Value>, dim: usize, field: &str) -> Result<[f64; 2]> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| LevyError::spec(field, "expected an array"))?;
    if arr.len() != dim {
        return Err(LevyError::spec(field, format!("expected {dim} components")));
    }
    let mut out = [0.0; 2];
    for (i, c) in arr.iter().enumerate() {
        out[i] = c.as_f64().ok_or_else(|| LevyError::spec(field, "non-numeric entry"))?;
    }
    Ok(out)
}

fn param_json(v: f64) -> Value {
    if v.is_infinite() {
        json!("inf")
    } else {
        json!(v)
    }
}

/// The resolved specification, with defaults filled in.
pub fn model_to_value(model: &LevyModel) -> Value {
    let dim = model.dim();
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(dim));
    obj.insert("center".into(), json!(model.center()));
    match model.kind() {
        ModelKind::Polar { spectral, family } => {
            obj.insert("family".into(), json!(family.name()));
            for (k, v) in family.params() {
                obj.insert(k.into(), param_json(v));
            }
            let spec = match spectral {
                SpectralMeasure::Atoms { atoms, .. } => {
                    let list: Vec<Value> = atoms
                        .iter()
                        .map(|a| {
                            let mut row: Vec<f64> = a.direction[..dim].to_vec();
                            row.push(a.weight);
                            json!(row)
                        })
                        .collect();
                    json!({ "atoms": list })
                }
                SpectralMeasure::Uniform { mass, .. } => json!({ "uniform": mass }),
            };
            obj.insert("spectral".into(), spec);
        }
        ModelKind::SubordinateBm(b) => {
            obj.insert("subordinate_bm".into(), json!({"alpha": b.alpha, "beta": b.beta}));
        }
        ModelKind::Explicit(ExplicitSymbol::Power { alpha, scale }) => {
            obj.insert("explicit".into(), json!({"kind": "power", "alpha": alpha, "scale": scale}));
        }
        ModelKind::Explicit(ExplicitSymbol::CompoundPoisson { rate, jump }) => {
            obj.insert(
                "explicit".into(),
                json!({"kind": "compound_poisson", "rate": rate, "jump": jump[..dim].to_vec()}),
            );
        }
    }
    Value::Object(obj)
}
