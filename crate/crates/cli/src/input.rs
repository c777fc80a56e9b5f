//! Loading command inputs from catalog references or JSON files.

use std::fs;

use crystal_forge::catalog::{self, CatalogEntry, Fixture};
use crystal_forge::roots::{build_root_system, LieType, RootSystem};
use crystal_forge::types::{validate, MonomialCrystal, ShimuraType, ShimuraTypeSpec};
use crystal_forge::witt::{MatrixJson, SemilinearMap};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::report::{CliError, SCHEMA};

/// What an input resolved to.
pub enum Input {
    Type(ShimuraType),
    Matrix(SemilinearMap),
    Crystal {
        crystal: MonomialCrystal,
        spec: Option<ShimuraType>,
        blocks: Option<Vec<usize>>,
        adjoint: bool,
    },
    Family(usize),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Type(_) => "type",
            Input::Matrix(_) => "matrix",
            Input::Crystal { adjoint: true, .. } => "adjoint crystal",
            Input::Crystal { .. } => "crystal",
            Input::Family(_) => "sign family",
        }
    }
}

/// Resolves `catalog:<id>[:<param>]`, overriding the parameter with
/// `param` when given, or reads a JSON file.
pub fn load(reference: &str, param: Option<usize>) -> Result<Input, CliError> {
    if reference.starts_with("catalog:") {
        return Ok(from_entry(catalog_entry(reference, param)?));
    }
    let text = fs::read_to_string(reference).map_err(|e| CliError::Parse(format!("{reference}: {e}")))?;
    parse_json(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{reference}: {msg}")),
        other => other,
    })
}

pub fn catalog_entry(reference: &str, param: Option<usize>) -> Result<CatalogEntry, CliError> {
    let body = reference.strip_prefix("catalog:").unwrap_or(reference);
    let (id, inline) = match body.rsplit_once(':') {
        Some((id, p)) => {
            let v = p.parse().map_err(|_| CliError::Parse(format!("bad catalog parameter {p:?}")))?;
            (id, Some(v))
        }
        None => (body, None),
    };
    Ok(catalog::get(id, param.or(inline))?)
}

fn from_entry(entry: CatalogEntry) -> Input {
    match entry.fixture {
        Fixture::Type(t) => Input::Type(t),
        Fixture::Module { crystal, spec, blocks } => Input::Crystal {
            crystal,
            spec,
            blocks,
            adjoint: false,
        },
        Fixture::Adjoint { crystal, spec } => Input::Crystal {
            crystal,
            spec: Some(spec),
            blocks: None,
            adjoint: true,
        },
        Fixture::SignFamily { n } => Input::Family(n),
    }
}

fn typed<T: DeserializeOwned>(v: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

/// Picks the schema from the keys present: `lie_type` for a type spec,
/// `entries` for a matrix, `step` for a monomial crystal.
pub fn parse_json(text: &str) -> Result<Input, CliError> {
    let mut v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let obj = v.as_object_mut().ok_or_else(|| CliError::Parse("expected a JSON object".into()))?;
    match obj.remove("schema") {
        None => {}
        Some(Value::String(s)) if s == SCHEMA => {}
        Some(other) => return Err(CliError::Parse(format!("unsupported schema {other}"))),
    }
    if obj.contains_key("lie_type") {
        let spec: ShimuraTypeSpec = typed(v, "type spec")?;
        Ok(Input::Type(validate(&spec)?))
    } else if obj.contains_key("entries") {
        let m: MatrixJson = typed(v, "matrix")?;
        Ok(Input::Matrix(SemilinearMap::from_json(&m)?))
    } else if obj.contains_key("step") {
        Ok(Input::Crystal {
            crystal: typed(v, "crystal")?,
            spec: None,
            blocks: None,
            adjoint: false,
        })
    } else {
        Err(CliError::Parse("expected a type spec, a matrix or a crystal".into()))
    }
}

/// Reads a type spec from a file or a catalog reference.
pub fn load_type(reference: &str) -> Result<ShimuraType, CliError> {
    match load(reference, None)? {
        Input::Type(t) => Ok(t),
        Input::Crystal { spec: Some(t), .. } => Ok(t),
        other => Err(CliError::Parse(format!("{reference} is a {}, not a type", other.kind()))),
    }
}

/// Parses names such as `A3`, `D4`, `E6`.
pub fn root_system(name: &str) -> Result<RootSystem, CliError> {
    let name = name.trim();
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (letter, digits) = name.split_at(split);
    let rank: usize = digits.parse().map_err(|_| CliError::Parse(format!("expected a rank in {name:?}")))?;
    let ty = if letter.eq_ignore_ascii_case("E") {
        LieType::parse(name, rank)?
    } else {
        LieType::parse(letter, rank)?
    };
    Ok(build_root_system(ty, rank)?)
}
