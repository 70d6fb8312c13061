//! Loading the JSON input files.

use std::fs;
use std::path::Path;

use jetarc::groebner::IdealPresentation;
use jetarc::lifting::SeriesVector;
use jetarc::mldres::rational_from_json;
use jetarc::polycore::{parse_polynomial, Polynomial, Rational, TruncatedSeries, VariableUniverse};
use jetarc::singloci::EmbeddedVariety;
use jetarc::{Error, Result};
use serde_json::Value;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Prefixes validation errors with the file they came from.
pub fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Invalid(msg) => Error::Invalid(format!("{}: {msg}", path.display())),
        Error::Syntax { position, message } => {
            Error::Invalid(format!("{}: syntax error at position {position}: {message}", path.display()))
        }
        Error::UnknownVariable { name, position } => {
            Error::Invalid(format!("{}: unknown variable `{name}` at position {position}", path.display()))
        }
        other => other,
    })
}

fn strings(v: &Value, field: &str) -> Result<Vec<String>> {
    let arr = v
        .get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid(format!("missing list `{field}`")))?;
    arr.iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::Invalid(format!("`{field}` must hold strings"))))
        .collect()
}

/// An ideal file: `{"vars": [...], "gens": [...], "expected_dim": d,
/// "ambient": [...]}`; the last two fields are optional.
pub struct IdealFile {
    pub universe: VariableUniverse,
    pub ideal: IdealPresentation,
    pub expected_dim: Option<usize>,
    pub ambient: Option<IdealPresentation>,
}

impl IdealFile {
    pub fn load(path: &Path) -> Result<Self> {
        let v = read_json(path)?;
        in_file(path, Self::from_json(&v))
    }

    fn from_json(v: &Value) -> Result<Self> {
        let universe = VariableUniverse::new(&strings(v, "vars")?)?;
        let ideal = IdealPresentation::parse(&universe, &strings(v, "gens")?)?;
        let expected_dim = match v.get("expected_dim") {
            None | Some(Value::Null) => None,
            Some(d) => Some(
                d.as_u64().ok_or_else(|| Error::Invalid("`expected_dim` must be a nonnegative integer".into()))? as usize,
            ),
        };
        let ambient = match v.get("ambient") {
            None | Some(Value::Null) => None,
            Some(_) => Some(IdealPresentation::parse(&universe, &strings(v, "ambient")?)?),
        };
        Ok(Self { universe, ideal, expected_dim, ambient })
    }

    pub fn variety(&self) -> Result<EmbeddedVariety> {
        let d = self
            .expected_dim
            .ok_or_else(|| Error::Invalid("this command needs `expected_dim` in the ideal file".into()))?;
        EmbeddedVariety::new(self.ideal.clone(), d)
    }
}

/// `{"series": [[c_0, c_1, ...], ...]}`, one coefficient list per variable,
/// read mod t^n.
pub fn load_series(path: &Path, n_vars: usize, n: usize) -> Result<SeriesVector> {
    let v = read_json(path)?;
    in_file(path, series_from_json(&v, n_vars, n))
}

fn series_from_json(v: &Value, n_vars: usize, n: usize) -> Result<SeriesVector> {
    let rows = v
        .get("series")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid("missing list `series`".into()))?;
    if rows.len() != n_vars {
        return Err(Error::Invalid(format!("{} series for {n_vars} variables", rows.len())));
    }
    let entries = rows
        .iter()
        .map(|row| {
            let coeffs = row
                .as_array()
                .ok_or_else(|| Error::Invalid("each series is a list of coefficients".into()))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<Rational>>>()?;
            Ok(TruncatedSeries::from_slice(&coeffs, n))
        })
        .collect::<Result<Vec<_>>>()?;
    SeriesVector::new(entries)
}

/// The probe file: `{"vars", "map": [...], "target": [{"gens", "order",
/// "exact"}]}`.
pub struct ProbeFile {
    pub map: Vec<Polynomial>,
    pub target: Vec<jetarc::contact::TargetCondition>,
}

impl ProbeFile {
    pub fn load(path: &Path) -> Result<Self> {
        let v = read_json(path)?;
        in_file(path, Self::from_json(&v))
    }

    fn from_json(v: &Value) -> Result<Self> {
        use jetarc::contact::{ContactMode, TargetCondition};
        let universe = VariableUniverse::new(&strings(v, "vars")?)?;
        let map = strings(v, "map")?
            .iter()
            .map(|s| parse_polynomial(s, &universe))
            .collect::<Result<Vec<_>>>()?;
        let target = v
            .get("target")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("missing list `target`".into()))?
            .iter()
            .map(|t| {
                let order = t
                    .get("order")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Invalid("target needs an integer `order`".into()))?;
                let exact = t.get("exact").and_then(Value::as_bool).unwrap_or(false);
                Ok(TargetCondition {
                    subscheme: IdealPresentation::parse(&universe, &strings(t, "gens")?)?,
                    order: order as usize,
                    mode: if exact { ContactMode::Exactly } else { ContactMode::AtLeast },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { map, target })
    }
}
