//! Flag parsing with error messages that point at the offending JSON field.

use asai_core::descriptor::{parse_grid, AsaiBundle, CharDesc, TauDesc};
use asai_core::FieldTag;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub fn json<T: DeserializeOwned>(flag: &str, text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." || path == "?" { String::new() } else { format!(" at `{path}`") };
        CliError::input(format!("--{flag}{at}: {}", e.inner()))
    })
}

/// A character descriptor, or `trivial` for the trivial character of `tag`.
pub fn character(flag: &str, text: &str, tag: FieldTag) -> CliResult<CharDesc> {
    if text.trim() == "trivial" {
        return Ok(CharDesc::trivial(tag));
    }
    json(flag, text)
}

/// Like [`json`], but reaches inside the tagged `pi` object, whose errors
/// would otherwise stop at `pi`.
pub fn bundle(flag: &str, text: &str) -> CliResult<AsaiBundle> {
    let err = match json::<AsaiBundle>(flag, text) {
        Ok(b) => return Ok(b),
        Err(e) => e,
    };
    let Ok(v) = serde_json::from_str::<serde_json::Value>(text) else { return Err(err) };
    for key in ["mu", "nu"] {
        if let Some(c) = v.get("pi").and_then(|pi| pi.get(key)) {
            if let Err(e) = serde_path_to_error::deserialize::<_, CharDesc>(c) {
                let inner = e.path().to_string();
                let path = if inner == "." { format!("pi.{key}") } else { format!("pi.{key}.{inner}") };
                return Err(CliError::input(format!("--{flag} at `{path}`: {}", e.inner())));
            }
        }
    }
    Err(err)
}

pub fn tau(flag: &str, text: &str) -> CliResult<TauDesc> {
    json(flag, text)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexArg {
    Real(f64),
    Pair(Complex64),
}

/// `0.25`, `[0.25, -1]` or `0.25-1i`.
pub fn complex(flag: &str, text: &str) -> CliResult<Complex64> {
    if let Ok(v) = serde_json::from_str::<ComplexArg>(text) {
        return Ok(match v {
            ComplexArg::Real(x) => Complex64::new(x, 0.0),
            ComplexArg::Pair(z) => z,
        });
    }
    text.trim()
        .parse::<Complex64>()
        .map_err(|_| CliError::input(format!("--{flag}: '{text}' is not a complex number")))
}

pub fn grid(text: Option<&str>) -> CliResult<Option<Vec<Complex64>>> {
    text.map(|t| parse_grid(t).map_err(|e| CliError::input(format!("--grid: {e}")))).transpose()
}
