//! Loading inputs, writing outputs and mapping errors to exit codes.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use pentalab::leapfrog::SPairState;
use pentalab::random::{random_pq, random_xy, retry, rng, RandomScalar};
use pentalab::states::{xy_to_corner, AnyState, CoordKind, SizeGuard};
use pentalab::{MapParams, ScalarIo};
use serde_json::Value;

use crate::StateSource;

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_SINGULAR: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    /// Prefixes the message, keeping the exit code.
    pub fn context(self, prefix: impl std::fmt::Display) -> Self {
        CliError {
            code: self.code,
            message: format!("{prefix}: {}", self.message),
        }
    }
}

impl From<pentalab::Error> for CliError {
    fn from(e: pentalab::Error) -> Self {
        let code = if e.is_singular() {
            EXIT_SINGULAR
        } else {
            EXIT_INVALID
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parsed input document.
pub enum Input<S> {
    State(AnyState<S>),
    Spair(SPairState<S>),
    /// Polygon documents are parsed by the command, which knows whether a
    /// plane or a corrugated polygon is wanted.
    Polygon(Value),
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::invalid(format!("{}: invalid JSON: {e}", path.display())))
}

pub fn parse_doc<S: ScalarIo>(doc: &Value) -> CliResult<Input<S>> {
    if doc.get("lifts").is_some() {
        return Ok(Input::Polygon(doc.clone()));
    }
    if doc.get("coords").and_then(Value::as_str) == Some("spair") {
        return Ok(Input::Spair(SPairState::from_json(doc)?));
    }
    Ok(Input::State(AnyState::from_json(doc)?))
}

/// The input named by `--state`, or a random state of shape `--k`, `--n`.
pub fn load<S: ScalarIo + RandomScalar>(src: &StateSource) -> CliResult<Input<S>> {
    if let Some(path) = &src.state {
        return parse_doc(&read_json(path)?).map_err(|e| e.context(path.display()));
    }
    let (Some(k), Some(n)) = (src.k, src.n) else {
        return Err(CliError::invalid(
            "either --state or both --k and --n are required",
        ));
    };
    let params = MapParams::new(k, n)?;
    let mut g = rng(src.seed);
    let kind = CoordKind::parse(&src.coords)?;
    let state = retry(&mut g, 25, |g| -> pentalab::Result<AnyState<S>> {
        Ok(match kind {
            CoordKind::Xy => AnyState::Xy(random_xy(params, g)),
            CoordKind::Pq => AnyState::Pq(random_pq(params, g)),
            CoordKind::Corner => AnyState::Corner(xy_to_corner(&random_xy(params, g))?),
            CoordKind::Edge => {
                return Err(pentalab::Error::BadParams(
                    "random edge weights are not supported".into(),
                ))
            }
        })
    })?;
    Ok(Input::State(state))
}

/// Bit cap for exact values, overridable with `PENTALAB_MAX_BITS`.
pub fn size_guard() -> CliResult<SizeGuard> {
    match std::env::var("PENTALAB_MAX_BITS") {
        Ok(v) => v.trim().parse().map(SizeGuard::new).map_err(|_| {
            CliError::invalid(format!(
                "PENTALAB_MAX_BITS must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(SizeGuard::default()),
    }
}

/// Writes to `--out`, or to stdout without it.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::invalid(format!("cannot write to stdout: {e}"))),
    }
}
