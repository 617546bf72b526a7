//! Typed value files.
//!
//! The kind of a file is read off its top-level keys; the file is then parsed
//! into that kind's schema, so syntax and field errors carry a line and
//! column, and invariant violations name the offending index.

use std::path::Path;

use homeo_core::certify::{CertificateJson, FactorizationCertificate};
use homeo_core::commutator::LocalityInstance;
use homeo_core::cover::SpaceModel;
use homeo_core::fragmentation::OpenCover1D;
use homeo_core::germs::GermMap;
use homeo_core::json::{self, CoverJson, GermJson, LocalityJson, PlMapJson, SpaceJson};
use homeo_core::{Error, PLMap};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Map(PLMap),
    Germ(GermMap),
    Cover(OpenCover1D),
    Space(SpaceModel),
    Certificate(FactorizationCertificate),
    Locality(LocalityInstance),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Map(_) => "map",
            Value::Germ(_) => "germ",
            Value::Cover(_) => "cover",
            Value::Space(_) => "space",
            Value::Certificate(_) => "certificate",
            Value::Locality(_) => "locality instance",
        }
    }

    /// Canonical JSON text of the value.
    pub fn to_json(&self) -> String {
        match self {
            Value::Map(m) => json::to_string(&PlMapJson::from(m)),
            Value::Germ(g) => json::to_string(&GermJson::from(g)),
            Value::Cover(c) => json::to_string(&CoverJson::from(c)),
            Value::Space(s) => json::to_string(&SpaceJson::from(s)),
            Value::Certificate(c) => json::to_string(&CertificateJson::from(c)),
            Value::Locality(l) => json::to_string(&LocalityJson::from(l)),
        }
    }
}

fn has(obj: &serde_json::Map<String, serde_json::Value>, key: &str) -> bool {
    obj.contains_key(key)
}

/// Parses value-file text.
pub fn parse_value(text: &str) -> Result<Value, Error> {
    let raw: serde_json::Value = json::from_str(text)?;
    let Some(obj) = raw.as_object() else {
        return Err(Error::Parse("a value file holds one JSON object".into()));
    };
    if has(obj, "schema") {
        let j: CertificateJson = json::from_str(text).map_err(malformed)?;
        return Ok(Value::Certificate(j.try_into()?));
    }
    if has(obj, "model") {
        let j: SpaceJson = json::from_str(text)?;
        return Ok(Value::Space(j.into()));
    }
    if has(obj, "elements") {
        let j: CoverJson = json::from_str(text)?;
        return Ok(Value::Cover(j.try_into()?));
    }
    if has(obj, "inner") && has(obj, "outer") {
        let j: LocalityJson = json::from_str(text)?;
        return Ok(Value::Locality(j.try_into()?));
    }
    if has(obj, "knots") && has(obj, "domain") {
        let j: PlMapJson = json::from_str(text)?;
        return Ok(Value::Map(j.try_into()?));
    }
    if has(obj, "knots") {
        let j: GermJson = json::from_str(text)?;
        return Ok(Value::Germ(j.try_into()?));
    }
    Err(Error::Parse(
        "cannot tell the value kind: expected a map, germ, cover, space, certificate or locality instance".into(),
    ))
}

fn malformed(e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::MalformedCertificate(m),
        other => other,
    }
}

/// Reads and parses a value file; errors are prefixed with the path.
pub fn parse_value_file(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_value(&text).map_err(|e| CliError::Value {
        path: path.display().to_string(),
        source: e,
    })
}
