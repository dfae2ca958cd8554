//! JSON description of a map system.
//!
//! ```json
//! {"a": 0.6, "b": "3/5", "rho": 0.5,
//!  "branch0": {"family": "affine"},
//!  "branch1": {"family": "sine", "eps": 0.2},
//!  "mode": "float"}
//! ```
//!
//! Parameters may be JSON numbers or strings (`"3/5"`, `"0.6"`). Numbers are
//! read through their decimal text, so `0.6` becomes exactly `3/5` in
//! rational mode. `mode` defaults to `rational` when both branches are
//! affine and to `float` otherwise.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, ModelError};
use crate::map_model::{BranchSpec, MapSystem};
use crate::real::{parse_rational, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Float,
}

/// A validated system in the arithmetic selected by the configuration.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum AnySystem {
    Rational(MapSystem<BigRational>),
    Float(MapSystem<f64>),
}

impl AnySystem {
    pub fn arithmetic(&self) -> Arithmetic {
        match self {
            AnySystem::Rational(_) => Arithmetic::Rational,
            AnySystem::Float(_) => Arithmetic::Float,
        }
    }

    /// Floating-point copy, for plotting and the homeomorphism.
    pub fn to_float(&self) -> MapSystem<f64> {
        match self {
            AnySystem::Rational(s) => s.to_float(),
            AnySystem::Float(s) => s.clone(),
        }
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Result<&'a Value, Error> {
    obj.get(name)
        .ok_or_else(|| Error::Config(format!("missing field `{name}`")))
}

fn number(value: &Value, name: &str) -> Result<BigRational, Error> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => {
            return Err(Error::Config(format!(
                "field `{name}` must be a number or a numeric string"
            )))
        }
    };
    parse_rational(&text).map_err(|e| Error::Config(format!("field `{name}`: {e}")))
}

fn branch(obj: &serde_json::Map<String, Value>, name: &str) -> Result<BranchSpec, Error> {
    match obj.get(name) {
        None => Ok(BranchSpec::Affine),
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::Config(format!("field `{name}`: {e}"))),
    }
}

/// Parse and validate a system description.
pub fn parse_system(text: &str) -> Result<AnySystem, Error> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    system_from_value(&value)
}

pub fn system_from_value(value: &Value) -> Result<AnySystem, Error> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("expected a JSON object".into()))?;
    let a = number(field(obj, "a")?, "a")?;
    let b = number(field(obj, "b")?, "b")?;
    let rho = number(field(obj, "rho")?, "rho")?;
    let b0 = branch(obj, "branch0")?;
    let b1 = branch(obj, "branch1")?;
    let affine = matches!((b0, b1), (BranchSpec::Affine, BranchSpec::Affine));
    let mode = match obj.get("mode") {
        None => {
            if affine {
                Arithmetic::Rational
            } else {
                Arithmetic::Float
            }
        }
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::Config(format!("field `mode`: {e}")))?,
    };
    Ok(match mode {
        Arithmetic::Rational => AnySystem::Rational(MapSystem::new(a, b, rho, b0, b1)?),
        Arithmetic::Float => AnySystem::Float(MapSystem::new(
            a.to_f64(),
            b.to_f64(),
            rho.to_f64(),
            b0,
            b1,
        )?),
    })
}

/// Parse `x` in the arithmetic of `sys`.
pub fn parse_point<T: Real>(text: &str) -> Result<T, ModelError> {
    let r = parse_rational(text)?;
    Ok(T::from_rational(&r))
}
